//! Lefschetz maps on cohomology and executable verification of the long
//! exact sequences that resolve them: the degree-r resolution by
//! (r-1)-filtered cohomologies, and the exact triangle relating F^l, F^{l+r}
//! and F^{r-1} cohomologies.
//!
//! Each sequence is laid out row-major from its commutative diagram of short
//! exact sequences: every row contributes its nodes left to right, and the
//! connecting map joins the last node of a row to the first node of the
//! next. Connecting maps are evaluated on explicit representatives with
//! their well-definedness conditions asserted at runtime (results must be
//! closed in the target slot, which `Quotient::coords` enforces).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::filtered::{assemble_complex, filtered_cohomology, FilteredComplex};
use crate::model::{Model, Quotient};

/// Kernel/cokernel data of L^r : H^k -> H^{k+2r} for each k.
#[derive(Clone, Debug)]
pub struct LefschetzAnalysis {
    pub r: usize,
    pub records: Vec<LefschetzRecord>,
}

#[derive(Clone, Debug)]
pub struct LefschetzRecord {
    pub k: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    pub cokernel_dim: usize,
}

impl LefschetzAnalysis {
    pub fn kernel(&self, k: usize) -> usize {
        self.records
            .iter()
            .find(|rec| rec.k == k)
            .map(|rec| rec.kernel_dim)
            .unwrap_or(0)
    }

    pub fn cokernel(&self, k: usize) -> usize {
        self.records
            .iter()
            .find(|rec| rec.k == k)
            .map(|rec| rec.cokernel_dim)
            .unwrap_or(0)
    }
}

/// One node of a verified long exact sequence.
#[derive(Clone, Debug)]
pub struct LesNode {
    pub label: String,
    pub dim: usize,
    pub incoming_rank: usize,
    pub outgoing_nullity: usize,
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct LesArrow {
    pub label: String,
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub struct LesReport {
    pub description: String,
    pub nodes: Vec<LesNode>,
    pub arrows: Vec<LesArrow>,
    pub chain_ok: bool,
    pub all_exact: bool,
}

impl LesReport {
    pub fn passed(&self) -> bool {
        self.chain_ok && self.all_exact
    }

    pub fn failing_nodes(&self) -> Vec<&LesNode> {
        self.nodes.iter().filter(|n| !n.exact).collect()
    }
}

/// Wedge by omega^r on representatives, reduced into the target basis.
pub fn lefschetz_map_analysis(m: &Model, r: usize) -> Result<LefschetzAnalysis> {
    if r == 0 || r > m.n() {
        return Err(Error::Precondition(format!(
            "Lefschetz degree r = {r} out of range 1..={}",
            m.n()
        )));
    }
    let mut records = Vec::new();
    for k in 0..=m.dim() {
        let src = m.derham_quotient(k)?;
        let tgt_deg = k + 2 * r;
        let bk = src.dim();
        if tgt_deg > m.dim() {
            records.push(LefschetzRecord {
                k,
                rank: 0,
                kernel_dim: bk,
                cokernel_dim: 0,
            });
            continue;
        }
        let tgt = m.derham_quotient(tgt_deg)?;
        let mut cols = Vec::new();
        for rep in src.representatives() {
            let image = m.symplectic().l_power(r as i64, rep)?;
            cols.push(tgt.coords(&image)?);
        }
        let mat = crate::linalg::Mat::from_columns(tgt.dim(), &cols);
        let rank = mat.rank();
        records.push(LefschetzRecord {
            k,
            rank,
            kernel_dim: bk - rank,
            cokernel_dim: tgt.dim() - rank,
        });
    }
    Ok(LefschetzAnalysis { r, records })
}

/// Node address: a de Rham slot or a bent filtered slot.
enum NodeSpace {
    DeRham(usize),
    Bent { p: usize, grading: usize },
}

struct NodeSpec {
    label: String,
    space: NodeSpace,
}

type ArrowFn<'a> = Box<dyn Fn(&Form) -> Result<Form> + 'a>;

struct ArrowSpec<'a> {
    label: String,
    apply: ArrowFn<'a>,
}

/// Cache of assembled complexes per filtration degree.
struct BentCache<'m> {
    model: &'m Model,
    complexes: BTreeMap<usize, FilteredComplex>,
}

impl<'m> BentCache<'m> {
    fn new(model: &'m Model) -> Self {
        BentCache {
            model,
            complexes: BTreeMap::new(),
        }
    }

    fn quotient(&mut self, p: usize, grading: usize) -> Result<Quotient> {
        if !self.complexes.contains_key(&p) {
            self.complexes.insert(p, assemble_complex(self.model, p)?);
        }
        self.complexes[&p].bent_quotient(self.model, grading)
    }
}

fn run_les(
    m: &Model,
    description: String,
    nodes: Vec<NodeSpec>,
    arrows: Vec<ArrowSpec<'_>>,
) -> Result<LesReport> {
    assert_eq!(arrows.len() + 1, nodes.len());
    let mut cache = BentCache::new(m);
    let mut quotients = Vec::new();
    for spec in &nodes {
        let q = match spec.space {
            NodeSpace::DeRham(k) => m.derham_quotient(k)?,
            NodeSpace::Bent { p, grading } => cache.quotient(p, grading)?,
        };
        quotients.push(q);
    }
    // Arrow matrices on representatives.
    let mut mats = Vec::new();
    for (i, arrow) in arrows.iter().enumerate() {
        let src = &quotients[i];
        let tgt = &quotients[i + 1];
        let mut cols = Vec::new();
        for rep in src.representatives() {
            let image = (arrow.apply)(rep)?;
            let coords = tgt.coords(&image).map_err(|e| {
                Error::Internal(format!(
                    "{description}: arrow '{}' out of node '{}' is ill-defined: {e}",
                    arrow.label, nodes[i].label
                ))
            })?;
            cols.push(coords);
        }
        mats.push(crate::linalg::Mat::from_columns(tgt.dim(), &cols));
    }
    // Chain condition, then exactness via ranks.
    let mut chain_ok = true;
    for i in 0..mats.len().saturating_sub(1) {
        if !mats[i + 1].mul(&mats[i]).is_zero() {
            chain_ok = false;
        }
    }
    let ranks: Vec<usize> = mats.iter().map(|mt| mt.rank()).collect();
    let mut out_nodes = Vec::new();
    let mut all_exact = true;
    for (i, spec) in nodes.iter().enumerate() {
        let dim = quotients[i].dim();
        let incoming_rank = if i == 0 { 0 } else { ranks[i - 1] };
        let outgoing_nullity = if i < mats.len() {
            dim - ranks[i]
        } else {
            dim
        };
        let exact = incoming_rank == outgoing_nullity;
        if !exact {
            all_exact = false;
        }
        out_nodes.push(LesNode {
            label: spec.label.clone(),
            dim,
            incoming_rank,
            outgoing_nullity,
            exact,
        });
    }
    let out_arrows = arrows
        .iter()
        .zip(&ranks)
        .map(|(a, &rank)| LesArrow {
            label: a.label.clone(),
            rank,
        })
        .collect();
    Ok(LesReport {
        description,
        nodes: out_nodes,
        arrows: out_arrows,
        chain_ok,
        all_exact,
    })
}

/// The long exact sequence resolving L^r by (r-1)-filtered cohomologies:
///
/// 0 -> H^{2r-1} -> F+^{2r-1} -> H^0 -> H^{2r} -> F+^{2r} -> ...
///   -> H^{n-r} -> H^{n+r} -> F-^{n+r-1} -> H^{n-r+1} -> ...
///   -> H^{2n} -> F-^{2r-1} -> H^{2n-2r+1} -> 0
pub fn verify_les(m: &Model, r: usize) -> Result<LesReport> {
    let n = m.n();
    if r == 0 || r > n {
        return Err(Error::Precondition(format!("r = {r} out of range 1..={n}")));
    }
    let p = r - 1;
    let s = m.symplectic();
    let bar = |c: usize| 2 * n + 2 * p + 1 - c;

    let mut nodes = Vec::new();
    let mut arrows: Vec<ArrowSpec> = Vec::new();

    let de_rham = |k: usize| NodeSpec {
        label: format!("H^{k}"),
        space: NodeSpace::DeRham(k),
    };
    let f_plus = |j: usize| NodeSpec {
        label: format!("F{p}H+^{j}"),
        space: NodeSpace::Bent { p, grading: j },
    };
    let f_minus = |c: usize| NodeSpec {
        label: format!("F{p}H-^{c}"),
        space: NodeSpace::Bent { p, grading: bar(c) },
    };
    let proj = || ArrowSpec {
        label: format!("Pi^{p}"),
        apply: Box::new(move |a: &Form| s.project(p, a)),
    };
    let lefschetz_r = || ArrowSpec {
        label: format!("L^{r}"),
        apply: Box::new(move |a: &Form| s.l_power(r as i64, a)),
    };
    // Connecting map out of a top filtered slot: A -> L^{-r}(dA).
    let conn_top = || ArrowSpec {
        label: format!("L^-{r} d"),
        apply: Box::new(move |a: &Form| s.l_power(-(r as i64), &m.d(a)?)),
    };
    // Connecting map into a bottom filtered slot: xi -> Pi^{r-1} star_r d L^{-r} xi.
    let conn_bottom = || ArrowSpec {
        label: format!("Pi^{p} *r d L^-{r}"),
        apply: Box::new(move |a: &Form| {
            s.project(p, &s.star_r(&m.d(&s.l_power(-(r as i64), a)?)?)?)
        }),
    };
    let star = || ArrowSpec {
        label: "*r".into(),
        apply: Box::new(move |a: &Form| s.star_r(a)),
    };

    // Head row (E, F).
    nodes.push(de_rham(2 * r - 1));
    arrows.push(proj());
    nodes.push(f_plus(2 * r - 1));
    // Top rows (D, E, F) for E-degree j = 2r..n+r-1.
    for j in 2 * r..=n + r - 1 {
        arrows.push(conn_top());
        nodes.push(de_rham(j - 2 * r));
        arrows.push(lefschetz_r());
        nodes.push(de_rham(j));
        arrows.push(proj());
        nodes.push(f_plus(j));
    }
    // Shift row (D, E).
    arrows.push(conn_top());
    nodes.push(de_rham(n - r));
    arrows.push(lefschetz_r());
    nodes.push(de_rham(n + r));
    // Bottom rows (C, D, E) for C-degree c = n+r-1 down to 2r; then the
    // two-term tail row (C, D) at c = 2r-1.
    for c in (2 * r..=n + r - 1).rev() {
        arrows.push(conn_bottom());
        nodes.push(f_minus(c));
        arrows.push(star());
        nodes.push(de_rham(2 * n - c));
        arrows.push(lefschetz_r());
        nodes.push(de_rham(2 * n - c + 2 * r));
    }
    arrows.push(conn_bottom());
    nodes.push(f_minus(2 * r - 1));
    arrows.push(star());
    nodes.push(de_rham(2 * n - 2 * r + 1));

    run_les(
        m,
        format!("resolution of L^{r} on {} by F^{p}H", m.name()),
        nodes,
        arrows,
    )
}

/// The long exact sequence behind the exact triangle
/// F^l H -> F^{l+r} H -> F^{r-1} H -> F^l H [1].
pub fn verify_filtered_triangle(m: &Model, l: usize, r: usize) -> Result<LesReport> {
    let n = m.n();
    if r == 0 || l + r > n {
        return Err(Error::Precondition(format!(
            "need r >= 1 and l + r <= n, got l = {l}, r = {r}, n = {n}"
        )));
    }
    let s = m.symplectic();
    let pf = r - 1;
    let pd = l;
    let pe = l + r;

    let node = |p: usize, grading: usize| NodeSpec {
        label: format!("F{p}H@{grading}"),
        space: NodeSpace::Bent { p, grading },
    };
    let d_top = |g: usize| node(pd, g);
    let e_top = |g: usize| node(pe, g);
    let f_top = |g: usize| node(pf, g);
    let d_bar = |c: usize| node(pd, 2 * n + 2 * pd + 1 - c);
    let e_bar = |c: usize| node(pe, 2 * n + 2 * pe + 1 - c);
    let f_bar = |c: usize| node(pf, 2 * n + 2 * pf + 1 - c);

    let proj_f = || ArrowSpec {
        label: format!("Pi^{pf}"),
        apply: Box::new(move |a: &Form| s.project(pf, a)),
    };
    let lef_r = || ArrowSpec {
        label: format!("L^{r}"),
        apply: Box::new(move |a: &Form| s.l_power(r as i64, a)),
    };
    let star_into_d = || ArrowSpec {
        label: format!("Pi^{pd} *r"),
        apply: Box::new(move |a: &Form| s.project(pd, &s.star_r(a)?)),
    };
    let lminus = || ArrowSpec {
        label: format!("L^-{}", pd + 1),
        apply: Box::new(move |a: &Form| s.l_power(-(pd as i64 + 1), a)),
    };
    let include = || ArrowSpec {
        label: "incl".into(),
        apply: Box::new(move |a: &Form| Ok(a.clone())),
    };
    let zero = || ArrowSpec {
        label: "0".into(),
        apply: Box::new(move |a: &Form| Ok(Form::zero(a.dim()))),
    };
    // Connecting maps for the three shift shapes.
    let conn_a = || ArrowSpec {
        label: format!("L^-{r} d"),
        apply: Box::new(move |a: &Form| s.l_power(-(r as i64), &m.d(a)?)),
    };
    let conn_b = || ArrowSpec {
        label: format!("Pi^{pf} *r d+({pd}) L^-{r}"),
        apply: Box::new(move |a: &Form| {
            let v = s.l_power(-(r as i64), a)?;
            let dv = s.project(pd, &m.d(&v)?)?;
            s.project(pf, &s.star_r(&dv)?)
        }),
    };
    let conn_c = || ArrowSpec {
        label: format!("L^{} d- *r", pd + 1),
        apply: Box::new(move |a: &Form| {
            let w = s.star_r(a)?;
            let dminus_w = s.star_r(&m.d(&s.star_r(&w)?)?)?;
            s.l_power(pd as i64 + 1, &dminus_w)
        }),
    };
    let conn_d = || ArrowSpec {
        label: format!("d- L^{}", pd + 1),
        apply: Box::new(move |a: &Form| {
            let lifted = s.l_power(pd as i64 + 1, a)?;
            let out = s.star_r(&m.d(&s.star_r(&lifted)?)?)?;
            if !crate::filtered::is_filtered(m, pd, &out)? {
                return Err(Error::Internal(
                    "triangle connecting map left the l-filtered space".into(),
                ));
            }
            Ok(out)
        }),
    };

    let mut nodes = Vec::new();
    let mut arrows: Vec<ArrowSpec> = Vec::new();

    // Head row (E, F) at grading 2r-1.
    nodes.push(e_top(2 * r - 1));
    arrows.push(proj_f());
    nodes.push(f_top(2 * r - 1));
    // Phase A rows j = 2r..n+r-1: (D, E, F).
    for j in 2 * r..=n + r - 1 {
        arrows.push(conn_a());
        nodes.push(d_top(j - 2 * r));
        arrows.push(lef_r());
        nodes.push(e_top(j));
        arrows.push(proj_f());
        nodes.push(f_top(j));
    }
    // Shift row (D, E).
    arrows.push(conn_a());
    nodes.push(d_top(n - r));
    arrows.push(lef_r());
    nodes.push(e_top(n + r));
    // Phase B rows m = 1..=l: (Fbar, D, E).
    for mm in 1..=l {
        arrows.push(conn_b());
        nodes.push(f_bar(n + r - mm));
        arrows.push(star_into_d());
        nodes.push(d_top(n - r + mm));
        arrows.push(lef_r());
        nodes.push(e_top(n + r + mm));
    }
    // Two-term row (Fbar, D) at m = l+1.
    arrows.push(conn_b());
    nodes.push(f_bar(n + r - l - 1));
    arrows.push(star_into_d());
    nodes.push(d_top(n - r + l + 1));
    // Phase C rows m' = 0..=r-2: (Ebar, Fbar, D).
    if r >= 2 {
        for mp in 0..=r - 2 {
            arrows.push(conn_c());
            nodes.push(e_bar(n + l + r - mp));
            arrows.push(lminus());
            nodes.push(f_bar(n + r - l - 2 - mp));
            arrows.push(star_into_d());
            nodes.push(d_top(n - r + l + 2 + mp));
        }
    }
    // Two-term row (Ebar, Fbar).
    arrows.push(conn_c());
    nodes.push(e_bar(n + l + 1));
    arrows.push(lminus());
    nodes.push(f_bar(n - l - 1));
    // Phase D rows m'' = 0..=n-l-2: (Dbar, Ebar, Fbar); empty when l = n-1.
    if n >= l + 2 {
        for mq in 0..=n - l - 2 {
            arrows.push(conn_d());
            nodes.push(d_bar(n + l - mq));
            arrows.push(include());
            nodes.push(e_bar(n + l - mq));
            arrows.push(lminus());
            nodes.push(f_bar(n - l - 2 - mq));
        }
    }
    // Iso tail rows (Dbar, Ebar) down to degree 0.
    for (step, c) in (0..=2 * l + 1).rev().enumerate() {
        if step == 0 {
            arrows.push(conn_d());
        } else {
            arrows.push(zero());
        }
        nodes.push(d_bar(c));
        arrows.push(include());
        nodes.push(e_bar(c));
    }

    run_les(
        m,
        format!(
            "exact triangle F^{l}H -> F^{}H -> F^{pf}H on {}",
            l + r,
            m.name()
        ),
        nodes,
        arrows,
    )
}

/// One line of the dimension-formula report.
#[derive(Clone, Debug)]
pub struct DimCheck {
    pub description: String,
    pub expected: usize,
    pub got: usize,
}

impl DimCheck {
    pub fn ok(&self) -> bool {
        self.expected == self.got
    }
}

#[derive(Clone, Debug)]
pub struct DimensionReport {
    pub model: String,
    pub checks: Vec<DimCheck>,
}

impl DimensionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok())
    }

    pub fn failing(&self) -> Vec<&DimCheck> {
        self.checks.iter().filter(|c| !c.ok()).collect()
    }
}

/// Every valid (p, k): filtered dims against the kernel/cokernel sums of the
/// resolution; the low-degree de Rham identifications; the 2p+1 slots; the
/// plus/minus agreement; index zero; and the closed-manifold duality
/// ker L^r = cok L^r in complementary degrees.
pub fn dimension_formula_check(m: &Model) -> Result<DimensionReport> {
    let n = m.n();
    let b = m.betti_numbers();
    let betti = |k: i64| -> usize {
        if k < 0 || k as usize > m.dim() {
            0
        } else {
            b[k as usize]
        }
    };
    let mut checks = Vec::new();
    let analyses: Vec<LefschetzAnalysis> = (1..=n)
        .map(|r| lefschetz_map_analysis(m, r))
        .collect::<Result<_>>()?;
    let ker = |r: usize, k: i64| -> usize {
        if k < 0 || k as usize > m.dim() {
            0
        } else {
            analyses[r - 1].kernel(k as usize)
        }
    };
    let cok = |r: usize, k: i64| -> usize {
        let tgt = k + 2 * r as i64;
        if k < 0 || tgt > m.dim() as i64 {
            // Out-of-range source: the map is zero, cokernel is the full target.
            return betti(tgt);
        }
        analyses[r - 1].cokernel(k as usize)
    };

    for p in 0..=n {
        let f = filtered_cohomology(m, p)?;
        for k in 0..=n + p {
            let (exp_plus, exp_minus) = if k <= 2 * p {
                (betti(k as i64), betti((2 * n - k) as i64))
            } else {
                let r = p + 1;
                let ki = k as i64;
                let ni = 2 * n as i64;
                (
                    ker(r, ki - 2 * p as i64 - 1) + cok(r, ki - 2 * p as i64 - 2),
                    ker(r, ni - ki) + cok(r, ni - ki - 1),
                )
            };
            checks.push(DimCheck {
                description: format!("F^{p}H+^{k} via kernel/cokernel sums"),
                expected: exp_plus,
                got: f.plus_dims[k],
            });
            checks.push(DimCheck {
                description: format!("F^{p}H-^{k} via kernel/cokernel sums"),
                expected: exp_minus,
                got: f.minus_dims[k],
            });
            checks.push(DimCheck {
                description: format!("F^{p}H+^{k} = F^{p}H-^{k}"),
                expected: f.plus_dims[k],
                got: f.minus_dims[k],
            });
        }
        if p < n {
            checks.push(DimCheck {
                description: format!("F^{p}H+^{} = b_{}", 2 * p + 1, 2 * p + 1),
                expected: betti((2 * p + 1) as i64),
                got: f.plus_dims[2 * p + 1],
            });
            checks.push(DimCheck {
                description: format!("F^{p}H-^{} = b_{}", 2 * p + 1, 2 * n - 2 * p - 1),
                expected: betti((2 * n) as i64 - (2 * p + 1) as i64),
                got: f.minus_dims[2 * p + 1],
            });
        }
        // Index of the elliptic complex.
        let mut chi = 0i64;
        for (g, d) in f.plus_dims.iter().enumerate() {
            chi += if g % 2 == 0 { *d as i64 } else { -(*d as i64) };
        }
        let top = n + p;
        for k in 0..=top {
            let g = 2 * top + 1 - k;
            chi += if g.is_multiple_of(2) {
                f.minus_dims[k] as i64
            } else {
                -(f.minus_dims[k] as i64)
            };
        }
        checks.push(DimCheck {
            description: format!("index of the p={p} filtered complex"),
            expected: 0,
            got: chi.unsigned_abs() as usize,
        });
    }

    // Duality on closed models: ker(L^r: H^k) = cok(L^r: H^{2n-k-2r}).
    for r in 1..=n {
        for k in 0..=m.dim() {
            let dual = 2 * n as i64 - k as i64 - 2 * r as i64;
            checks.push(DimCheck {
                description: format!("ker L^{r} on H^{k} = cok L^{r} into H^{}", 2 * n - k),
                expected: ker(r, k as i64),
                got: cok(r, dual),
            });
        }
    }

    // Dimension-specific corollaries.
    let prim = crate::filtered::primitive_cohomologies(m)?;
    if n == 2 {
        checks.push(DimCheck {
            description: "PH_ddL^2 = ker(L:H1->H3) + cok(L:H0->H2)".into(),
            expected: ker(1, 1) + cok(1, 0),
            got: prim.ph_dd_lambda[2],
        });
        checks.push(DimCheck {
            description: "PH_d+dL^2 = ker(L:H2->H4) + cok(L:H1->H3)".into(),
            expected: ker(1, 2) + cok(1, 1),
            got: prim.ph_d_plus_d_lambda[2],
        });
    }
    if n == 3 {
        checks.push(DimCheck {
            description: "PH_d+^2 = ker(L:H1->H3) + cok(L:H0->H2)".into(),
            expected: ker(1, 1) + cok(1, 0),
            got: prim.ph_dplus[2],
        });
        checks.push(DimCheck {
            description: "PH_ddL^3 = ker(L:H2->H4) + cok(L:H1->H3)".into(),
            expected: ker(1, 2) + cok(1, 1),
            got: prim.ph_dd_lambda[3],
        });
        checks.push(DimCheck {
            description: "PH_d+dL^3 = ker(L:H3->H5) + cok(L:H2->H4)".into(),
            expected: ker(1, 3) + cok(1, 2),
            got: prim.ph_d_plus_d_lambda[3],
        });
        checks.push(DimCheck {
            description: "PH_d-^2 = ker(L:H4->H6) + cok(L:H3->H5)".into(),
            expected: ker(1, 4) + cok(1, 3),
            got: prim.ph_dminus[2],
        });
        checks.push(DimCheck {
            description: "PH_ddL^2 = ker(L2:H1->H5) + cok(L2:H0->H4)".into(),
            expected: ker(2, 1) + cok(2, 0),
            got: prim.ph_dd_lambda[2],
        });
        checks.push(DimCheck {
            description: "PH_d+dL^2 = ker(L2:H2->H6) + cok(L2:H1->H5)".into(),
            expected: ker(2, 2) + cok(2, 1),
            got: prim.ph_d_plus_d_lambda[2],
        });
    }

    Ok(DimensionReport {
        model: m.name().to_string(),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Model;

    fn kt() -> Model {
        Model::parse(
            r#"{
            "name": "kt",
            "dimension": 4,
            "generators": ["e1", "e2", "e3", "e4"],
            "d": {"e4": [[1, ["e2", "e3"]]]},
            "omega": [[1, ["e1", "e2"]], [1, ["e3", "e4"]]]
        }"#,
        )
        .unwrap()
    }

    fn t4() -> Model {
        Model::parse(
            r#"{
            "name": "t4",
            "dimension": 4,
            "generators": ["e1", "e2", "e3", "e4"],
            "d": {},
            "omega": [[1, ["e1", "e2"]], [1, ["e3", "e4"]]]
        }"#,
        )
        .unwrap()
    }

    #[test]
    fn t4_hard_lefschetz() {
        let m = t4();
        let a = lefschetz_map_analysis(&m, 1).unwrap();
        assert_eq!(a.kernel(1), 0);
        assert_eq!(a.cokernel(1), 0);
    }

    #[test]
    fn kt_lefschetz_degeneracy() {
        let m = kt();
        let a = lefschetz_map_analysis(&m, 1).unwrap();
        // ker(L: H^1 -> H^3) is spanned by [e3] since omega ^ e3 = -d(e14).
        assert_eq!(a.kernel(1), 1);
        assert_eq!(a.cokernel(0), 3);
    }

    #[test]
    fn lefschetz_rank_stable_under_exact_perturbation() {
        let m = kt();
        let s = m.symplectic();
        let h1 = m.derham_quotient(1).unwrap();
        let h3 = m.derham_quotient(3).unwrap();
        let base: Vec<Vec<crate::linalg::Q>> = h1
            .representatives()
            .iter()
            .map(|rep| h3.coords(&s.lefschetz(rep).unwrap()).unwrap())
            .collect();
        let base_rank = crate::linalg::Mat::from_columns(h3.dim(), &base).rank();
        for seed in 0..5u64 {
            let cols: Vec<Vec<crate::linalg::Q>> = h1
                .representatives()
                .iter()
                .enumerate()
                .map(|(i, rep)| {
                    let noise =
                        crate::exterior::random_form(seed * 17 + i as u64, 4, 0, 3).unwrap();
                    let perturbed = rep.add(&m.d(&noise).unwrap()).unwrap();
                    h3.coords(&s.lefschetz(&perturbed).unwrap()).unwrap()
                })
                .collect();
            let rank = crate::linalg::Mat::from_columns(h3.dim(), &cols).rank();
            assert_eq!(rank, base_rank);
        }
    }

    #[test]
    fn kt_les_r1_exact() {
        let m = kt();
        let rep = verify_les(&m, 1).unwrap();
        assert!(rep.chain_ok, "chain condition failed");
        for node in &rep.nodes {
            assert!(node.exact, "not exact at {}: {:?}", node.label, node);
        }
    }

    #[test]
    fn kt_les_r2_exact() {
        let m = kt();
        let rep = verify_les(&m, 2).unwrap();
        assert!(rep.passed(), "failures: {:?}", rep.failing_nodes());
    }

    #[test]
    fn t4_les_exact() {
        let m = t4();
        for r in 1..=2usize {
            let rep = verify_les(&m, r).unwrap();
            assert!(rep.passed(), "r={r} failures: {:?}", rep.failing_nodes());
        }
    }

    #[test]
    fn kt_triangles_exact() {
        let m = kt();
        for (l, r) in [(0usize, 1usize), (0, 2), (1, 1)] {
            let rep = verify_filtered_triangle(&m, l, r).unwrap();
            assert!(
                rep.passed(),
                "triangle l={l} r={r} failures: {:?}",
                rep.failing_nodes()
            );
        }
    }

    #[test]
    fn t4_triangle_exact() {
        let m = t4();
        let rep = verify_filtered_triangle(&m, 0, 1).unwrap();
        assert!(rep.passed(), "failures: {:?}", rep.failing_nodes());
    }

    #[test]
    fn kt_dimension_formulas() {
        let m = kt();
        let rep = dimension_formula_check(&m).unwrap();
        assert!(rep.passed(), "failing: {:?}", rep.failing());
        // Headline split: PH^2 = ker + cok = 1 + 3 = 4.
        let a = lefschetz_map_analysis(&m, 1).unwrap();
        assert_eq!(a.kernel(1) + a.cokernel(0), 4);
    }

    #[test]
    fn t4_dimension_formulas() {
        let m = t4();
        let rep = dimension_formula_check(&m).unwrap();
        assert!(rep.passed(), "failing: {:?}", rep.failing());
    }
}
