//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! All equalities are exact (rational arithmetic, tolerance zero).

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sympcoh::ainfty::{m2, ring_table, GradedElement};
use sympcoh::exterior::Form;
use sympcoh::filtered::{assemble_complex, primitive_cohomologies};
use sympcoh::linalg::Q;
use sympcoh::model::Model;
use sympcoh::resolution::{dimension_formula_check, verify_filtered_triangle, verify_les};
use sympcoh::suites;
use sympcoh::symbol::symbol_exactness;
use sympcoh::torus;

fn model_path(name: &str) -> String {
    format!("{}/../../models/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn load(name: &str) -> Model {
    let text = std::fs::read_to_string(model_path(name)).expect("model file");
    Model::parse(&text).expect("valid model")
}

fn load_mono(name: &str) -> torus::MonodromyInput {
    let text = std::fs::read_to_string(model_path(name)).expect("monodromy file");
    torus::load_monodromy(&text).expect("valid monodromy")
}

fn all_models() -> Vec<Model> {
    vec![
        load("kt.model"),
        load("t4.model"),
        load("t6.model"),
        load("nil6.model"),
    ]
}

fn report(criterion: &str, ok: bool) {
    println!(
        "criterion {criterion}: {}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {criterion} failed");
}

fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn e(idx: &[u8]) -> Form {
    Form::monomial(4, idx, qi(1)).unwrap()
}

#[test]
fn criterion_1_kt_dimensions() {
    let m = load("kt.model");
    let betti_ok = m.betti_numbers() == vec![1, 3, 4, 3, 1];
    let prim = primitive_cohomologies(&m).unwrap();
    let ph1_ok = prim.ph_dplus[1] == 3 && prim.ph_dminus[1] == 3;
    let ph2_ok = prim.ph_dd_lambda[2] == 4 && prim.ph_d_plus_d_lambda[2] == 4;
    report("1 (Kodaira-Thurston dimensions)", betti_ok && ph1_ok && ph2_ok);
}

#[test]
fn criterion_2_kt_ring() {
    let m = load("kt.model");
    // The four middle-cohomology generators, in the standard presentation.
    let gens = [
        e(&[1, 2]).sub(&e(&[3, 4])).unwrap(),
        e(&[1, 3]),
        e(&[2, 4]),
        e(&[1, 4]),
    ];
    let complex = assemble_complex(&m, 0).unwrap();
    let target = complex.bent_quotient(&m, 4).unwrap();
    let dphi_class = target.coords(&e(&[2])).unwrap();
    let two_dt_class = target.coords(&e(&[1]).scale(&qi(2))).unwrap();
    let mut nontrivial = Vec::new();
    for i in 0..4 {
        for j in i..4 {
            let x = GradedElement::new(&m, 0, 2, gens[i].clone()).unwrap();
            let y = GradedElement::new(&m, 0, 2, gens[j].clone()).unwrap();
            let prod = m2(&m, &x, &y).unwrap();
            let coords = target.coords(&prod.form).unwrap();
            if coords.iter().any(|c| !c.is_zero()) {
                nontrivial.push(((i, j), coords));
            }
        }
    }
    let ok_products = nontrivial.len() == 2
        && nontrivial
            .iter()
            .any(|((i, j), c)| (*i, *j) == (2, 3) && *c == dphi_class)
        && nontrivial
            .iter()
            .any(|((i, j), c)| (*i, *j) == (3, 3) && *c == two_dt_class);
    let table = ring_table(&m, 0, 1).unwrap();
    let image_ok = table.block(2, 2).unwrap().image_dim == 2;
    report("2 (Kodaira-Thurston ring values)", ok_products && image_ok);
}

#[test]
fn criterion_3_genus2_distinguished() {
    let kt = load_mono("kt.mono");
    let g2 = load_mono("genus2.mono");
    let same_dims = kt.model.dims == g2.model.dims;
    let kt_pairing = torus::pairing_image_dim(&kt.model, &kt.generators).unwrap();
    let g2_pairing = torus::pairing_image_dim(&g2.model, &g2.generators).unwrap();
    // The genus-2 image is spanned by the dphi-class alone: only the
    // dt-integration coordinate is ever hit.
    let dphi_only = g2_pairing.records.iter().all(|r| {
        r.coords
            .iter()
            .zip(&g2_pairing.dual_labels)
            .all(|(c, l)| l == "dt" || c.is_zero())
    });
    report(
        "3 (genus-2 example distinguished by the pairing image)",
        same_dims && kt_pairing.image_dim == 2 && g2_pairing.image_dim == 1 && dphi_only,
    );
}

#[test]
fn criterion_4_resolution_exactness() {
    let mut ok = true;
    for m in all_models() {
        for r in 1..=m.n() {
            let rep = verify_les(&m, r).unwrap();
            if !rep.passed() {
                eprintln!("les fails on {} r={r}: {:?}", m.name(), rep.failing_nodes());
                ok = false;
            }
        }
        for l in 0..m.n() {
            for r in 1..=(m.n() - l) {
                let rep = verify_filtered_triangle(&m, l, r).unwrap();
                if !rep.passed() {
                    eprintln!(
                        "triangle fails on {} l={l} r={r}: {:?}",
                        m.name(),
                        rep.failing_nodes()
                    );
                    ok = false;
                }
            }
        }
    }
    report("4 (resolution and triangle exactness)", ok);
}

#[test]
fn criterion_5_dimension_formulas() {
    let mut ok = true;
    for m in all_models() {
        let rep = dimension_formula_check(&m).unwrap();
        if !rep.passed() {
            eprintln!("dimension formulas fail on {}: {:?}", m.name(), rep.failing());
            ok = false;
        }
    }
    report("5 (dimension formulas, de Rham slots, index zero)", ok);
}

#[test]
fn criterion_6_symbol_certificates() {
    let mut ok = true;
    for dim in [4usize, 6] {
        for p in 0..=dim / 2 {
            let rep = symbol_exactness(dim, p).unwrap();
            if !rep.all_exact {
                eprintln!("symbol sequence not exact at 2n={dim}, p={p}");
                ok = false;
            }
        }
    }
    report("6 (ellipticity certificates 2n=4,6 all p)", ok);
}

#[test]
#[ignore = "slow optional certificate; run with --ignored"]
fn criterion_6_symbol_certificates_dim8() {
    let mut ok = true;
    for p in 0..=4usize {
        let rep = symbol_exactness(8, p).unwrap();
        ok &= rep.all_exact;
    }
    report("6+ (ellipticity certificates 2n=8 all p)", ok);
}

#[test]
fn criterion_7_ainfty_property_suite() {
    let mut ok = true;
    for m in all_models() {
        let samples = 200usize;
        for rep in [
            suites::suite_sl2(&m, 0xACCE97, samples).unwrap(),
            suites::suite_leibniz(&m, 0xACCE97, samples).unwrap(),
            suites::suite_ainfty(&m, 0xACCE97, samples).unwrap(),
            suites::suite_compat(&m, 0xACCE97, samples).unwrap(),
        ] {
            if !rep.passed() {
                eprintln!("suite {} fails on {}: {:?}", rep.name, m.name(), rep.failures);
                ok = false;
            }
        }
    }
    report("7 (property suite, 200 samples per model)", ok);
}

#[test]
fn criterion_8_fibered_identities() {
    // f_i identities for i <= 8.
    let mut ok = true;
    for i in 1..=8usize {
        let fi = torus::f_poly(i);
        ok &= fi.sub(&fi.shift_down()) == torus::f_poly(i - 1).shift_down();
        let mut rhs = torus::Poly::zero();
        for mm in 1..=i {
            let sign = if mm % 2 == 1 { 1i64 } else { -1 };
            rhs = rhs.add(
                &torus::f_poly(i - mm).scale(&Q::new(sign.into(), (mm as i64).into())),
            );
        }
        ok &= fi.derivative() == rhs;
    }
    // The gamma-tilde differentiation rule for j <= 8, checked against the
    // independent route: differentiate the f_i coefficients of the expansion
    // gamma_tilde_j = sum_i f_i(phi) gamma_{j-i} term by term. Both routes
    // are written over the constant chain basis of a formal length-9 chain.
    for j in 1..=8usize {
        let mut rule: Vec<torus::Poly> = vec![torus::Poly::zero(); 9];
        for i in 1..=j {
            let c = Q::new(
                (if i % 2 == 1 { 1i64 } else { -1 }).into(),
                (i as i64).into(),
            );
            for a in 0..=(j - i) {
                rule[j - i - a] = rule[j - i - a].add(&torus::f_poly(a).scale(&c));
            }
        }
        let mut diff: Vec<torus::Poly> = vec![torus::Poly::zero(); 9];
        for a in 0..=j {
            diff[j - a] = diff[j - a].add(&torus::f_poly(a).derivative());
        }
        ok &= rule == diff;
    }
    // d gamma-tilde and d^2 = 0 on the bundled length-4 chain.
    let input = load_mono("genus2.mono");
    let fm = &input.model;
    for j in 1..=3usize {
        let g = fm.gamma_tilde(0, j).unwrap();
        // d gamma_tilde_j = dphi ^ sum_{i=1}^{j} ((-1)^{i+1}/i) gamma_tilde_{j-i}.
        let mut expected = torus::FiberedForm::zero();
        for i in 1..=j {
            let c = Q::new(
                (if i % 2 == 1 { 1i64 } else { -1 }).into(),
                (i as i64).into(),
            );
            expected = expected.add(&torus::FiberedForm::term(
                torus::BaseMono::Dphi,
                torus::FiberClass::Gamma(0, j - i),
                torus::Poly::constant(c),
            ));
        }
        ok &= fm.d(&g).unwrap() == expected;
        ok &= fm.d(&fm.d(&g).unwrap()).unwrap().is_zero();
    }
    // d^2 = 0 on mixed polynomial forms.
    let phi3 = torus::Poly(vec![qi(0), qi(1), qi(0), qi(2)]);
    let mix = torus::FiberedForm::term(torus::BaseMono::Dt, torus::FiberClass::Gamma(0, 3), phi3.clone())
        .add(&torus::FiberedForm::term(
            torus::BaseMono::One,
            torus::FiberClass::Gamma(0, 2),
            phi3,
        ));
    ok &= fm.d(&fm.d(&mix).unwrap()).unwrap().is_zero();
    // Symplectic orthogonality of fixed vectors against moved ones, sampled
    // on both bundled monodromies.
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for input in [load_mono("kt.mono"), load_mono("genus2.mono")] {
        let data = &input.model.data;
        let mut n_mat = data.tau.clone();
        for i in 0..data.rank {
            n_mat[(i, i)] -= qi(1);
        }
        for u in n_mat.nullspace() {
            for _ in 0..20 {
                let v: Vec<Q> = (0..data.rank)
                    .map(|_| qi(rng.random_range(-5..=5)))
                    .collect();
                let nv = n_mat.mul_vec(&v);
                ok &= data.pairing(&nv, &u).is_zero();
            }
        }
    }
    report("8 (fibered-algebra identities)", ok);
}

#[test]
fn criterion_9_cross_validation() {
    let m = load("kt.model");
    let input = load_mono("kt.mono");
    let fm = &input.model;
    // Dimensions agree between the two pipelines.
    let mut ok = m.betti_numbers() == fm.dims.betti;
    let prim = primitive_cohomologies(&m).unwrap();
    ok &= prim.ph_dd_lambda[2] == fm.dims.ph2;
    ok &= prim.ph_dminus[1] == fm.dims.ph1;
    // Product coordinates agree pair by pair. The generator lists are
    // matched in order: dt^dphi-omega, dt^g0, dphi^g1, dt^g1 versus
    // e12-e34, e13, e24, e14; coordinates are read against dt, dphi, g0
    // versus e1, e2, e3.
    let gens_nil = [
        e(&[1, 2]).sub(&e(&[3, 4])).unwrap(),
        e(&[1, 3]),
        e(&[2, 4]),
        e(&[1, 4]),
    ];
    let s = m.symplectic();
    let duals = [e(&[1]), e(&[2]), e(&[3])];
    let torus_pairing = torus::pairing_image_dim(fm, &input.generators).unwrap();
    let mut nil_coords = Vec::new();
    for i in 0..4 {
        for j in i..4 {
            let x = GradedElement::new(&m, 0, 2, gens_nil[i].clone()).unwrap();
            let y = GradedElement::new(&m, 0, 2, gens_nil[j].clone()).unwrap();
            let value = m2(&m, &x, &y).unwrap().form;
            // The three-form before reflection, integrated against H^1.
            let three_form = s.star_r(&value).unwrap();
            let coords: Vec<Q> = duals
                .iter()
                .map(|h| m.integrate_top(&three_form.wedge(h).unwrap()))
                .collect();
            nil_coords.push(coords);
        }
    }
    ok &= nil_coords.len() == torus_pairing.records.len();
    for (nc, rec) in nil_coords.iter().zip(&torus_pairing.records) {
        if *nc != rec.coords {
            eprintln!(
                "coordinate mismatch for {} x {}: nilmanifold {:?} vs fibered {:?}",
                rec.left, rec.right, nc, rec.coords
            );
            ok = false;
        }
    }
    // Pairing-image dimension agrees with the ring-table block.
    let table = ring_table(&m, 0, 0).unwrap();
    ok &= table.block(2, 2).unwrap().image_dim == torus_pairing.image_dim;
    report("9 (mapping-torus vs nilmanifold cross-validation)", ok);
}
