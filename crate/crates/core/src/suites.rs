//! Seeded random-sample verification suites. Each suite draws deterministic
//! pseudo-random forms on a model and checks a family of exact identities,
//! reporting every violation with a reproducible sample index.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ainfty::{l_inv_d, m1, m2, m3, random_element, GradedElement};
use crate::error::Result;
use crate::exterior::{monomial_basis, random_form, Form};
use crate::filtered::{d_minus, dpp_dpm};
use crate::linalg::{Mat, Q, Solver};
use crate::model::{Model, Quotient};

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub samples: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn fail(report: &mut SuiteReport, msg: String) {
    if report.failures.len() < 16 {
        report.failures.push(msg);
    } else if report.failures.len() == 16 {
        report.failures.push("... more failures suppressed".into());
    }
}

/// sl(2) commutators, the reflection involutions, the projection identities
/// and the component formula for d_minus, on random forms.
pub fn suite_sl2(m: &Model, seed: u64, samples: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport {
        name: "sl2".into(),
        samples,
        skipped: 0,
        failures: Vec::new(),
    };
    let s = m.symplectic();
    let n = m.n();
    let dim = m.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..samples {
        let k = rng.random_range(0..=dim);
        let p = rng.random_range(0..=n);
        let sub_seed = rng.random::<u64>();
        let a = random_form(sub_seed, dim, k, 4)?;
        // Commutators.
        let two_lambda = s.lambda(&a)?.scale(&Q::from_integer(2.into()));
        let hl = s.weight(&s.lambda(&a)?)?.sub(&s.lambda(&s.weight(&a)?)?)?;
        if hl != two_lambda {
            fail(&mut report, format!("sample {i}: [H,Lambda] != 2 Lambda"));
        }
        let hw = s
            .weight(&s.lefschetz(&a)?)?
            .sub(&s.lefschetz(&s.weight(&a)?)?)?;
        if hw != s.lefschetz(&a)?.scale(&Q::from_integer((-2).into())) {
            fail(&mut report, format!("sample {i}: [H,L] != -2 L"));
        }
        let ll = s
            .lambda(&s.lefschetz(&a)?)?
            .sub(&s.lefschetz(&s.lambda(&a)?)?)?;
        if ll != s.weight(&a)? {
            fail(&mut report, format!("sample {i}: [Lambda,L] != H"));
        }
        // Projection identities.
        let rest = s
            .omega()
            .pow(p + 1)?
            .wedge(&s.l_power(-(p as i64 + 1), &a)?)?;
        if s.project(p, &a)?.add(&rest)? != a {
            fail(&mut report, format!("sample {i}: 1 != Pi^p + L^(p+1)L^(-p-1)"));
        }
        let pis = s.star_r(&s.project(p, &s.star_r(&a)?)?)?;
        let rest2 = s.l_power(-(p as i64 + 1), &s.l_power(p as i64 + 1, &a)?)?;
        if pis.add(&rest2)? != a {
            fail(&mut report, format!("sample {i}: 1 != Pi^p* + L^(-p-1)L^(p+1)"));
        }
        // Reflections.
        if s.star_r(&s.star_r(&a)?)? != a {
            fail(&mut report, format!("sample {i}: star_r not an involution"));
        }
        if s.star_s(&s.star_s(&a)?)? != a {
            fail(&mut report, format!("sample {i}: star_s not an involution"));
        }
        // d_minus component formula.
        let lhs = d_minus(m, &a)?;
        let dec = s.decompose(&a)?;
        let mut rhs = Form::zero(dim);
        for (r, b) in &dec.components {
            let (bp, bm) = dpp_dpm(m, b)?;
            rhs = rhs.add(&s.omega().pow(*r)?.wedge(&bm)?)?;
            if *r >= 1 {
                rhs = rhs.add(&s.omega().pow(r - 1)?.wedge(&bp)?)?;
            }
        }
        if lhs != rhs {
            fail(&mut report, format!("sample {i}: d_minus component formula"));
        }
        // d^Lambda through the symplectic star: d^L = (-1)^(k+1) star_s d star_s.
        let dl = m.d_lambda(&a)?;
        let mut via_star = s.star_s(&m.d(&s.star_s(&a)?)?)?;
        if k % 2 == 0 {
            via_star = via_star.neg();
        }
        if dl != via_star {
            fail(&mut report, format!("sample {i}: d^Lambda vs star_s route"));
        }
    }
    Ok(report)
}

/// The Leibniz rule for every case of the graded product, plus graded
/// commutativity, with all four grading regimes exercised in rotation.
pub fn suite_leibniz(m: &Model, seed: u64, samples: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport {
        name: "leibniz".into(),
        samples,
        skipped: 0,
        failures: Vec::new(),
    };
    let n = m.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4c45);
    for i in 0..samples {
        let p = rng.random_range(0..=n);
        let top = n + p;
        // Rotate through the four Leibniz regimes.
        let (gj, gk) = match i % 4 {
            0 => {
                let gj = rng.random_range(0..top);
                let gk = rng.random_range(0..top - gj);
                (gj, gk)
            }
            1 => {
                let gj = rng.random_range(0..=top);
                (gj, top - gj)
            }
            2 => {
                let gj = rng.random_range(1..=top);
                let lo = top + 1 - gj;
                (gj, rng.random_range(lo..=top))
            }
            _ => {
                let gj = rng.random_range(0..=top);
                let gk = rng.random_range(top + 1..=2 * top + 1);
                (gj, gk)
            }
        };
        let x = random_element(m, p, gj, rng.random::<u64>())?;
        let y = random_element(m, p, gk, rng.random::<u64>())?;
        let lhs = m1(m, &m2(m, &x, &y)?)?;
        let t1 = m2(m, &m1(m, &x)?, &y)?;
        let mut t2 = m2(m, &x, &m1(m, &y)?)?.form;
        if gj % 2 == 1 {
            t2 = t2.neg();
        }
        if lhs.form != t1.form.add(&t2)? {
            fail(
                &mut report,
                format!("sample {i}: Leibniz fails at p={p} gradings ({gj},{gk})"),
            );
        }
        // Graded commutativity.
        let xy = m2(m, &x, &y)?;
        let mut yx = m2(m, &y, &x)?.form;
        if (gj * gk) % 2 == 1 {
            yx = yx.neg();
        }
        if xy.form != yx {
            fail(
                &mut report,
                format!("sample {i}: graded commutativity fails at ({gj},{gk})"),
            );
        }
    }
    Ok(report)
}

/// Homotopy associativity, strict associativity in the low and barred
/// regimes, and the vanishing of the five-term m4 defect.
pub fn suite_ainfty(m: &Model, seed: u64, samples: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport {
        name: "ainfty".into(),
        samples,
        skipped: 0,
        failures: Vec::new(),
    };
    let n = m.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa1f);
    for i in 0..samples {
        let p = rng.random_range(0..=n);
        let top = n + p;
        // Homotopy associativity on unbarred triples.
        let gi = rng.random_range(0..=top);
        let gj = rng.random_range(0..=top);
        let gk = rng.random_range(0..=top);
        let x = random_element(m, p, gi, rng.random::<u64>())?;
        let y = random_element(m, p, gj, rng.random::<u64>())?;
        let z = random_element(m, p, gk, rng.random::<u64>())?;
        let assoc = m2(m, &x, &m2(m, &y, &z)?)?
            .form
            .sub(&m2(m, &m2(m, &x, &y)?, &z)?.form)?;
        let mut rhs = m1(m, &m3(m, &x, &y, &z)?)?.form;
        rhs = rhs.add(&m3(m, &m1(m, &x)?, &y, &z)?.form)?;
        let mut t = m3(m, &x, &m1(m, &y)?, &z)?.form;
        if gi % 2 == 1 {
            t = t.neg();
        }
        rhs = rhs.add(&t)?;
        let mut t = m3(m, &x, &y, &m1(m, &z)?)?.form;
        if (gi + gj) % 2 == 1 {
            t = t.neg();
        }
        rhs = rhs.add(&t)?;
        if assoc != rhs {
            fail(
                &mut report,
                format!("sample {i}: homotopy associativity at p={p} ({gi},{gj},{gk})"),
            );
        }
        // Strict associativity: low total grading.
        if gi + gj + gk <= top && !m3(m, &x, &y, &z)?.form.is_zero() {
            fail(&mut report, format!("sample {i}: m3 nonzero below the bound"));
        }
        if gi + gj + gk <= top && !assoc.is_zero() {
            fail(&mut report, format!("sample {i}: low-grading associativity"));
        }
        // Strict associativity with one barred factor, all positions.
        let gbar = rng.random_range(top + 1..=2 * top + 1);
        let bar = random_element(m, p, gbar, rng.random::<u64>())?;
        for (a, b, c) in [(&bar, &y, &z), (&y, &bar, &z), (&y, &z, &bar)] {
            let lhs = m2(m, a, &m2(m, b, c)?)?;
            let rhs = m2(m, &m2(m, a, b)?, c)?;
            if lhs.form != rhs.form {
                fail(
                    &mut report,
                    format!("sample {i}: barred associativity at p={p}"),
                );
            }
        }
        // m4 defect.
        let gl = rng.random_range(0..=top);
        let w = random_element(m, p, gl, rng.random::<u64>())?;
        let mut acc = m2(m, &m3(m, &x, &y, &z)?, &w)?.form;
        let mut t2 = m2(m, &x, &m3(m, &y, &z, &w)?)?.form;
        if gi % 2 == 1 {
            t2 = t2.neg();
        }
        acc = acc.add(&t2)?;
        acc = acc.sub(&m3(m, &m2(m, &x, &y)?, &z, &w)?.form)?;
        acc = acc.add(&m3(m, &x, &m2(m, &y, &z)?, &w)?.form)?;
        acc = acc.sub(&m3(m, &x, &y, &m2(m, &z, &w)?)?.form)?;
        if !acc.is_zero() {
            fail(
                &mut report,
                format!("sample {i}: m4 defect nonzero at p={p} ({gi},{gj},{gk},{gl})"),
            );
        }
    }
    Ok(report)
}

/// A deterministic random d-closed form of the given degree.
fn random_closed(m: &Model, degree: usize, rng: &mut ChaCha8Rng) -> Result<Form> {
    let q = m.derham_quotient(degree)?;
    let mut out = Form::zero(m.dim());
    for rep in q.representatives() {
        let c: i64 = rng.random_range(-2..=2);
        if c != 0 {
            out = out.add(&rep.scale(&Q::from_integer(c.into())))?;
        }
    }
    if degree >= 1 {
        let noise = random_form(rng.random::<u64>(), m.dim(), degree - 1, 2)?;
        out = out.add(&m.d(&noise)?)?;
    }
    Ok(out)
}

/// The two compatibility statements tying the graded product to the wedge
/// product upstairs and the omega-power Massey product downstairs.
pub fn suite_compat(m: &Model, seed: u64, samples: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport {
        name: "compat".into(),
        samples,
        skipped: 0,
        failures: Vec::new(),
    };
    let n = m.n();
    let dim = m.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc0);
    // Cache bent quotients per (p, grading) lazily through a BentCache-like map.
    let mut complexes: std::collections::BTreeMap<usize, crate::filtered::FilteredComplex> =
        Default::default();
    for i in 0..samples {
        let p = rng.random_range(0..=n);
        let top = n + p;
        complexes
            .entry(p)
            .or_insert(crate::filtered::assemble_complex(m, p)?);
        let complex = &complexes[&p];

        // --- Wedge compatibility.
        let j = rng.random_range(0..=dim);
        let k = rng.random_range(0..=(dim - j).min(dim));
        let xi_j = random_closed(m, j, &mut rng)?;
        let xi_k = random_closed(m, k, &mut rng)?;
        let fj = f_map(m, p, j, &xi_j)?;
        let fk = f_map(m, p, k, &xi_k)?;
        let wedge = xi_j.wedge(&xi_k)?;
        let f_wedge = f_map(m, p, j + k, &wedge)?;
        let prod = m2(m, &fj, &fk)?;
        if j + k <= 2 * top + 1 {
            let target = complex.bent_quotient(m, j + k)?;
            match (target.coords(&f_wedge.form), target.coords(&prod.form)) {
                (Ok(a), Ok(b)) => {
                    if a != b {
                        fail(
                            &mut report,
                            format!("sample {i}: wedge compatibility p={p} ({j},{k})"),
                        );
                    }
                }
                _ => fail(
                    &mut report,
                    format!("sample {i}: wedge compatibility images not closed p={p} ({j},{k})"),
                ),
            }
        } else if !f_wedge.form.is_zero() || !prod.form.is_zero() {
            // Beyond the top grading both sides must vanish identically.
            fail(&mut report, format!("sample {i}: overflow wedge case p={p}"));
        }

        // --- Massey compatibility.
        let gj = rng.random_range(0..=2 * top + 1);
        let gk = rng.random_range(0..=(2 * top + 1 - gj));
        let qa = complex.bent_quotient(m, gj)?;
        let qb = complex.bent_quotient(m, gk)?;
        if qa.dim() == 0 || qb.dim() == 0 {
            report.skipped += 1;
            continue;
        }
        let a = sample_class(m, p, gj, &qa, &mut rng)?;
        let b = sample_class(m, p, gk, &qb, &mut rng)?;
        let ga = g_map(m, p, &a)?;
        let gb = g_map(m, p, &b)?;
        let eta_a = solve_eta(m, p, &ga)?;
        let eta_b = solve_eta(m, p, &gb)?;
        let (Some(eta_a), Some(eta_b)) = (eta_a, eta_b) else {
            report.skipped += 1;
            continue;
        };
        let mut massey = ga.wedge(&eta_b)?;
        let mut t = eta_a.wedge(&gb)?;
        if gj % 2 == 1 {
            t = t.neg();
        }
        massey = massey.add(&t)?;
        let g_prod = g_map(m, p, &m2(m, &a, &b)?)?;
        let residual = massey.sub(&g_prod)?;
        if residual.is_zero() {
            continue;
        }
        // The residual must be a closed form whose class lies in the ideal
        // generated by g(A) and g(B) plus exact forms.
        if !m.d(&residual)?.is_zero() {
            fail(
                &mut report,
                format!("sample {i}: Massey residual is not closed p={p} ({gj},{gk})"),
            );
            continue;
        }
        let t_deg = match residual.homogeneous_degree()? {
            Some(t) => t,
            None => continue,
        };
        if !in_ideal_plus_exact(m, &ga, &gb, &residual, t_deg)? {
            fail(
                &mut report,
                format!("sample {i}: Massey compatibility p={p} ({gj},{gk})"),
            );
        }
    }
    Ok(report)
}

/// The comparison map into the graded algebra: project for low gradings,
/// minus the reflected derivative for high ones. (The sign on the high
/// branch is the one the compatibility statements actually hold with.)
fn f_map(m: &Model, p: usize, degree: usize, xi: &Form) -> Result<GradedElement> {
    let s = m.symplectic();
    let top = m.n() + p;
    if degree > 2 * top + 1 {
        return GradedElement::new(m, p, degree, Form::zero(m.dim()));
    }
    let form = if degree <= top {
        s.project(p, xi)?
    } else {
        s.project(p, &s.star_r(&m.d(&s.l_power(-(p as i64 + 1), xi)?)?)?)?
            .neg()
    };
    GradedElement::new(m, p, degree, form)
}

/// The boundary map out of the graded algebra: L^{-(p+1)} d on the top side,
/// the reflection on the bottom side.
fn g_map(m: &Model, p: usize, a: &GradedElement) -> Result<Form> {
    let top = m.n() + p;
    if a.grading > 2 * top + 1 || a.form.is_zero() {
        return Ok(Form::zero(m.dim()));
    }
    if a.grading <= top {
        l_inv_d(m, p, &a.form)
    } else {
        m.symplectic().star_r(&a.form)
    }
}

/// Random m1-closed element of the bent quotient at a grading.
fn sample_class(
    m: &Model,
    p: usize,
    grading: usize,
    q: &Quotient,
    rng: &mut ChaCha8Rng,
) -> Result<GradedElement> {
    let mut form = Form::zero(m.dim());
    for rep in q.representatives() {
        let c: i64 = rng.random_range(-2..=2);
        if c != 0 {
            form = form.add(&rep.scale(&Q::from_integer(c.into())))?;
        }
    }
    if grading > 0 {
        let below = random_element(m, p, grading - 1, rng.random::<u64>())?;
        form = form.add(&m1(m, &below)?.form)?;
    }
    GradedElement::new(m, p, grading, form)
}

/// Solve d eta = omega^{p+1} ^ xi exactly; None if there is no solution.
fn solve_eta(m: &Model, p: usize, xi: &Form) -> Result<Option<Form>> {
    if xi.is_zero() {
        return Ok(Some(Form::zero(m.dim())));
    }
    let rhs = m.symplectic().omega().pow(p + 1)?.wedge(xi)?;
    if rhs.is_zero() {
        return Ok(Some(Form::zero(m.dim())));
    }
    let deg = rhs.homogeneous_degree()?.expect("wedge of homogeneous");
    if deg == 0 {
        return Ok(None);
    }
    let k = deg - 1;
    let dmat = m.d_matrix(k);
    let solver = Solver::new(dmat);
    let target = rhs.coords(m.symplectic().monomials(deg));
    match solver.solve(&target) {
        None => Ok(None),
        Some(x) => Ok(Some(Form::from_coords(
            m.dim(),
            m.symplectic().monomials(k),
            &x,
        ))),
    }
}

/// Is `residual` inside exact forms + xi ^ (closed) + (closed) ^ xi'?
fn in_ideal_plus_exact(
    m: &Model,
    xi: &Form,
    xi_p: &Form,
    residual: &Form,
    t_deg: usize,
) -> Result<bool> {
    let monomials = monomial_basis(m.dim(), t_deg);
    let mut columns: Vec<Vec<Q>> = Vec::new();
    // Exact forms.
    if t_deg >= 1 {
        let dmat = m.d_matrix(t_deg - 1);
        for j in 0..dmat.cols {
            columns.push(dmat.column(j));
        }
    }
    // xi ^ closed and closed ^ xi'.
    let mut push_products = |fixed: &Form, left: bool| -> Result<()> {
        if fixed.is_zero() {
            return Ok(());
        }
        let fd = fixed.homogeneous_degree()?.unwrap_or(0);
        if fd > t_deg {
            return Ok(());
        }
        let cd = t_deg - fd;
        let closed = m.derham_quotient(cd)?;
        for rep in closed.representatives() {
            let prod = if left {
                fixed.wedge(rep)?
            } else {
                rep.wedge(fixed)?
            };
            columns.push(prod.coords(&monomials));
        }
        Ok(())
    };
    push_products(xi, true)?;
    push_products(xi_p, false)?;
    if columns.is_empty() {
        return Ok(residual.is_zero());
    }
    let mat = Mat::from_columns(monomials.len(), &columns);
    let solver = Solver::new(&mat);
    Ok(solver.solve(&residual.coords(&monomials)).is_some())
}
