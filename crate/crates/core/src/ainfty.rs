//! The graded algebra of p-filtered forms: the bent-complex differential m1,
//! the non-associative product m2, the homotopy m3 (with m4 and above zero),
//! and cohomology ring multiplication tables.
//!
//! Grading convention: a p-filtered j-form can sit at position j (top row,
//! "unbarred") or at position 2n+2p+1-j (bottom row, "barred"); the product
//! and differential below preserve this single grading.


use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::filtered::{d_minus, d_plus, dpp_dpm, is_filtered, middle_op};
use crate::linalg::Q;
use crate::model::Model;

/// An element of the graded p-filtered algebra.
#[derive(Clone, Debug)]
pub struct GradedElement {
    pub p: usize,
    pub grading: usize,
    pub form: Form,
}

impl GradedElement {
    /// Build and validate: the form must be p-filtered of the degree the
    /// grading dictates (gradings past the top carry only zero).
    pub fn new(m: &Model, p: usize, grading: usize, form: Form) -> Result<GradedElement> {
        let top = m.n() + p;
        if grading > 2 * top + 1 {
            if !form.is_zero() {
                return Err(Error::Precondition(format!(
                    "grading {grading} exceeds {} but the form is nonzero",
                    2 * top + 1
                )));
            }
            return Ok(GradedElement { p, grading, form });
        }
        let expected = if grading <= top {
            grading
        } else {
            2 * top + 1 - grading
        };
        if let Some(deg) = form.homogeneous_degree()? {
            if deg != expected {
                return Err(Error::Precondition(format!(
                    "grading {grading} holds {expected}-forms, got degree {deg}"
                )));
            }
        }
        if !is_filtered(m, p, &form)? {
            return Err(Error::Precondition(format!(
                "form at grading {grading} is not {p}-filtered"
            )));
        }
        Ok(GradedElement { p, grading, form })
    }

    pub fn is_bar(&self, m: &Model) -> bool {
        self.grading > m.n() + self.p
    }

    pub fn is_zero(&self) -> bool {
        self.form.is_zero()
    }
}

fn zero_at(m: &Model, p: usize, grading: usize) -> GradedElement {
    GradedElement {
        p,
        grading,
        form: Form::zero(m.dim()),
    }
}

/// L^{-(p+1)} d on a p-filtered form, evaluated as dp_minus of the top
/// Lefschetz component (no division by omega anywhere).
pub fn l_inv_d(m: &Model, p: usize, a: &Form) -> Result<Form> {
    if a.is_zero() {
        return Ok(Form::zero(m.dim()));
    }
    let dec = m.symplectic().decompose(a)?;
    match dec.component(p) {
        None => Ok(Form::zero(m.dim())),
        Some(b) => {
            let (_, bm) = dpp_dpm(m, b)?;
            Ok(bm)
        }
    }
}

/// The differential of the graded algebra: d_plus on the way up, minus the
/// second-order middle map at the turn, minus d_minus on the way down.
pub fn m1(m: &Model, x: &GradedElement) -> Result<GradedElement> {
    let top = m.n() + x.p;
    let g = x.grading;
    let out = if x.is_zero() || g > 2 * top + 1 {
        Form::zero(m.dim())
    } else if g < top {
        d_plus(m, x.p, &x.form)?
    } else if g == top {
        middle_op(m, x.p, &x.form)?.neg()
    } else {
        d_minus(m, &x.form)?.neg()
    };
    GradedElement::new(m, x.p, g + 1, out)
}

/// The graded product. Unbarred times unbarred projects the wedge when the
/// gradings stay below the turn and otherwise reflects a derivative-corrected
/// wedge to the bottom row; anything involving the bottom row reflects
/// through star_r; barred times barred is zero.
pub fn m2(m: &Model, x: &GradedElement, y: &GradedElement) -> Result<GradedElement> {
    if x.p != y.p {
        return Err(Error::Precondition(format!(
            "filtration mismatch: {} vs {}",
            x.p, y.p
        )));
    }
    let p = x.p;
    let s = m.symplectic();
    let top = m.n() + p;
    let g = x.grading + y.grading;
    if x.is_zero() || y.is_zero() || g > 2 * top + 1 {
        return Ok(zero_at(m, p, g));
    }
    let xbar = x.grading > top;
    let ybar = y.grading > top;
    let out = match (xbar, ybar) {
        (false, false) => {
            if g <= top {
                s.project(p, &x.form.wedge(&y.form)?)?
            } else {
                let minus_d = m
                    .d(&s.l_power(-(p as i64 + 1), &x.form.wedge(&y.form)?)?)?
                    .neg();
                let dx_term = l_inv_d(m, p, &x.form)?.wedge(&y.form)?;
                let mut dy_term = x.form.wedge(&l_inv_d(m, p, &y.form)?)?;
                if x.grading % 2 == 1 {
                    dy_term = dy_term.neg();
                }
                let inner = minus_d.add(&dx_term)?.add(&dy_term)?;
                s.project(p, &s.star_r(&inner)?)?
            }
        }
        (false, true) => {
            let mut v = s.star_r(&x.form.wedge(&s.star_r(&y.form)?)?)?;
            if x.grading % 2 == 1 {
                v = v.neg();
            }
            v
        }
        (true, false) => s.star_r(&s.star_r(&x.form)?.wedge(&y.form)?)?,
        (true, true) => Form::zero(m.dim()),
    };
    GradedElement::new(m, p, g, out)
}

/// The associativity homotopy. Zero unless all three factors are unbarred
/// and the grading sum reaches n+p+2.
pub fn m3(
    m: &Model,
    x: &GradedElement,
    y: &GradedElement,
    z: &GradedElement,
) -> Result<GradedElement> {
    if x.p != y.p || y.p != z.p {
        return Err(Error::Precondition("filtration mismatch in m3".into()));
    }
    let p = x.p;
    let s = m.symplectic();
    let top = m.n() + p;
    let g = x.grading + y.grading + z.grading;
    let out_grading = g.saturating_sub(1);
    if x.grading > top || y.grading > top || z.grading > top {
        return Ok(zero_at(m, p, out_grading));
    }
    if g < top + 2 || x.is_zero() || y.is_zero() || z.is_zero() {
        return Ok(zero_at(m, p, out_grading));
    }
    let first = x
        .form
        .wedge(&s.l_power(-(p as i64 + 1), &y.form.wedge(&z.form)?)?)?;
    let second = s
        .l_power(-(p as i64 + 1), &x.form.wedge(&y.form)?)?
        .wedge(&z.form)?;
    let val = s.project(p, &s.star_r(&first.sub(&second)?)?)?;
    GradedElement::new(m, p, out_grading, val)
}

/// Per-grading bases and all product blocks of the cohomology ring F^pH.
pub struct RingTable {
    pub p: usize,
    /// Representative count per grading 0..=2n+2p+1.
    pub dims: Vec<usize>,
    /// Representative labels per grading, in coordinate order.
    pub bases: Vec<Vec<String>>,
    pub blocks: Vec<RingBlock>,
}

/// Products of the grading-j basis with the grading-k basis, expressed in
/// the grading-(j+k) representative basis: entry[a][b] = coords of
/// rep_a(j) x rep_b(k).
pub struct RingBlock {
    pub j: usize,
    pub k: usize,
    pub entries: Vec<Vec<Vec<Q>>>,
    pub image_dim: usize,
}

/// Multiply all representative pairs, reduce into target bases, and verify
/// class-level independence of representative choice on `perturbations`
/// sampled exact shifts per block.
pub fn ring_table(m: &Model, p: usize, perturbations: u64) -> Result<RingTable> {
    let top = m.n() + p;
    let complex = crate::filtered::assemble_complex(m, p)?;
    let quotients: Vec<crate::model::Quotient> = (0..=2 * top + 1)
        .map(|g| complex.bent_quotient(m, g))
        .collect::<Result<_>>()?;
    let dims: Vec<usize> = quotients.iter().map(|q| q.dim()).collect();
    let bases: Vec<Vec<String>> = quotients
        .iter()
        .map(|q| q.representatives().iter().map(|f| f.to_string()).collect())
        .collect();
    let mut blocks = Vec::new();
    for j in 0..=2 * top + 1 {
        for k in 0..=2 * top + 1 - j {
            if dims[j] == 0 || dims[k] == 0 || dims[j + k] == 0 {
                continue;
            }
            let mut entries = Vec::new();
            let mut image_vectors = Vec::new();
            for (a, ra) in quotients[j].representatives().iter().enumerate() {
                let xa = GradedElement::new(m, p, j, ra.clone())?;
                let mut row = Vec::new();
                for (b, rb) in quotients[k].representatives().iter().enumerate() {
                    let xb = GradedElement::new(m, p, k, rb.clone())?;
                    let prod = m2(m, &xa, &xb)?;
                    let coords = quotients[j + k].coords(&prod.form)?;
                    // Representative independence: perturb by m1-exact forms.
                    for t in 0..perturbations {
                        let seed = (j * 31 + k * 17 + a * 7 + b) as u64 * 1000 + t;
                        let noise_a = random_m1_exact(m, p, j, seed)?;
                        let noise_b = random_m1_exact(m, p, k, seed + 501)?;
                        let xa2 = GradedElement::new(m, p, j, ra.add(&noise_a)?)?;
                        let xb2 = GradedElement::new(m, p, k, rb.add(&noise_b)?)?;
                        let coords2 = quotients[j + k].coords(&m2(m, &xa2, &xb2)?.form)?;
                        if coords2 != coords {
                            return Err(Error::Internal(format!(
                                "ring product at ({j},{k}) depends on representatives"
                            )));
                        }
                    }
                    image_vectors.push(coords.clone());
                    row.push(coords);
                }
                entries.push(row);
            }
            let image_dim =
                crate::linalg::span_basis(&image_vectors, dims[j + k]).len();
            blocks.push(RingBlock {
                j,
                k,
                entries,
                image_dim,
            });
        }
    }
    Ok(RingTable {
        p,
        dims,
        bases,
        blocks,
    })
}

impl RingTable {
    pub fn block(&self, j: usize, k: usize) -> Option<&RingBlock> {
        self.blocks.iter().find(|b| b.j == j && b.k == k)
    }
}

/// A random m1-exact form at the given grading (image of m1 from below).
fn random_m1_exact(m: &Model, p: usize, grading: usize, seed: u64) -> Result<Form> {
    if grading == 0 {
        return Ok(Form::zero(m.dim()));
    }
    let below = random_element(m, p, grading - 1, seed)?;
    Ok(m1(m, &below)?.form)
}

/// Deterministic random element at a grading (form degree read off the
/// grading, projected into the filtered space).
pub fn random_element(m: &Model, p: usize, grading: usize, seed: u64) -> Result<GradedElement> {
    let top = m.n() + p;
    if grading > 2 * top + 1 {
        return Ok(zero_at(m, p, grading));
    }
    let degree = if grading <= top {
        grading
    } else {
        2 * top + 1 - grading
    };
    let form = crate::filtered::random_filtered(m, p, degree, seed, 3)?;
    GradedElement::new(m, p, grading, form)
}
