#!/usr/bin/env python3
"""Smoke test for the sympcoh_py extension module.

Builds nothing itself: run `cargo build --release -p sympcoh-py` first, then
`python3 python/smoke_test.py`. The script stages the cdylib under a name
Python can import and exercises the main entry points on the bundled models.
"""

import json
import pathlib
import shutil
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def stage_module() -> pathlib.Path:
    candidates = [
        ROOT / "target" / "release" / "libsympcoh_py.so",
        ROOT / "target" / "debug" / "libsympcoh_py.so",
        ROOT / "target" / "release" / "libsympcoh_py.dylib",
        ROOT / "target" / "debug" / "libsympcoh_py.dylib",
    ]
    for built in candidates:
        if built.exists():
            staged = built.parent / "sympcoh_py.so"
            if not staged.exists() or built.stat().st_mtime > staged.stat().st_mtime:
                shutil.copy2(built, staged)
            return staged.parent
    sys.exit("build the extension first: cargo build --release -p sympcoh-py")


sys.path.insert(0, str(stage_module()))

import sympcoh_py  # noqa: E402


def check(name: str, ok: bool) -> None:
    print(f"{'ok' if ok else 'FAIL'}  {name}")
    if not ok:
        sys.exit(1)


def main() -> None:
    models = ROOT / "models"

    # Exterior algebra basics.
    e1 = sympcoh_py.Form.monomial(4, [1])
    e2 = sympcoh_py.Form.monomial(4, [2])
    e12 = e1.wedge(e2)
    check("wedge e1 ^ e2 = e12", e12.terms() == [("1", [1, 2])])
    check("e1 ^ e1 = 0", e1.wedge(e1).is_zero())
    check("contraction sign", str(e12.contract(2)) == "-e1")

    # The Kodaira-Thurston model end to end.
    kt = sympcoh_py.Model.load(str(models / "kt.model"))
    check("KT betti", kt.betti() == [1, 3, 4, 3, 1])
    plus, minus = kt.filtered_dims(0)
    check("KT filtered p=0", plus == [1, 3, 4] and minus == [1, 3, 4])
    prim = kt.primitive_dims()
    check("KT PH tables", prim["ph_dd_lambda"][2] == 4 and prim["ph_dplus"][1] == 3)

    e4 = sympcoh_py.Form.monomial(4, [4])
    check("KT d e4 = e23", kt.d(e4).terms() == [("1", [2, 3])])

    # The non-associative product: the two nontrivial middle products.
    e24 = sympcoh_py.Form.monomial(4, [2, 4])
    e14 = sympcoh_py.Form.monomial(4, [1, 4])
    grading, value = kt.product(0, 2, e24, 2, e14)
    check("KT (e24 x e14) = dphi", grading == 4 and value.terms() == [("1", [2])])
    grading, value = kt.product(0, 2, e14, 2, e14)
    check("KT (e14 x e14) = 2 dt", grading == 4 and value.terms() == [("2", [1])])
    check("KT ring block image", kt.ring_block_image_dim(0, 2, 2) == 2)

    # Resolution exactness and dimension formulas.
    les = kt.verify_les(1)
    check("KT resolution r=1 exact", les["all_exact"] and les["chain_ok"])
    tri = kt.verify_triangle(0, 1)
    check("KT triangle (0,1) exact", tri["all_exact"])
    check("KT dimension formulas", kt.dimension_check()["passed"])

    # Random-sample identity suites.
    for suite in kt.verify_suites(seed=1, samples=15):
        check(f"KT suite {suite['name']}", suite["passed"])

    # Symbol certificate.
    cert = sympcoh_py.symbol_exactness(4, 0)
    check("symbol 2n=4 p=0 exact", cert["all_exact"])

    # Mapping-torus pipeline: the two bundled examples differ only in the
    # pairing image.
    kt_mono = json.loads((models / "kt.mono").read_text())
    g2_mono = json.loads((models / "genus2.mono").read_text())
    kt_t = sympcoh_py.analyze_monodromy(json.dumps(kt_mono))
    g2_t = sympcoh_py.analyze_monodromy(json.dumps(g2_mono))
    check("monodromy dims agree", kt_t["betti"] == g2_t["betti"] == [1, 3, 4, 3, 1])
    check("KT pairing image 2", kt_t["pairing"]["image_dim"] == 2)
    check("genus-2 pairing image 1", g2_t["pairing"]["image_dim"] == 1)

    # f polynomials.
    check("f_2 = (phi^2 - phi)/2", sympcoh_py.f_poly(2) == ["0", "-1/2", "1/2"])

    print("all smoke checks passed")


if __name__ == "__main__":
    main()
