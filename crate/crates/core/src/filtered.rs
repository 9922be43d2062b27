//! The two-row elliptic complex of p-filtered forms on a model, assembled as
//! exact matrices, and all filtered and primitive cohomologies read off from
//! it.
//!
//! The complex runs d_plus along the top row up to degree n+p, crosses the
//! middle with the second-order map dp_plus dp_minus, and runs d_minus back
//! down the bottom row. Writing g for the position in the bent single-line
//! complex (0 <= g <= 2n+2p+1), positions g <= n+p sit on the top row at
//! form degree g and positions g > n+p sit on the bottom row at form degree
//! 2n+2p+1-g.

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::linalg::{span_basis, Mat, Q};
use crate::model::{Model, Quotient};

/// Basis of F^p Omega^k: omega-powers r ascending, then the primitive basis
/// order within each power.
pub struct FilteredSpace {
    pub p: usize,
    pub k: usize,
    pub basis: Vec<Form>,
    /// (r, dim P^{k-2r}) blocks in basis order.
    pub layout: Vec<(usize, usize)>,
}

/// The assembled two-row complex for one filtration degree.
pub struct FilteredComplex {
    pub p: usize,
    pub spaces: Vec<FilteredSpace>,
    /// top_maps[k]: d_plus as a matrix F^p Omega^k -> F^p Omega^{k+1}, 0 <= k < n+p.
    pub top_maps: Vec<Mat>,
    /// dp_plus dp_minus : F^p Omega^{n+p} -> F^p Omega^{n+p}.
    pub middle_map: Mat,
    /// bottom_maps[k]: d_minus as a matrix F^p Omega^{k+1} -> F^p Omega^k, 0 <= k < n+p.
    pub bottom_maps: Vec<Mat>,
    /// Zero-row matrix standing in for d_minus out of degree zero.
    zero_out: Mat,
}

/// Dimensions and representatives of the filtered cohomologies.
pub struct FilteredCohomology {
    pub p: usize,
    /// F^p H_+^k for k = 0..=n+p.
    pub plus_dims: Vec<usize>,
    /// F^p H_-^k for k = 0..=n+p.
    pub minus_dims: Vec<usize>,
    pub plus_reps: Vec<Vec<Form>>,
    pub minus_reps: Vec<Vec<Form>>,
}

/// The primitive cohomology tables read off from filtered slots.
pub struct PrimitiveCohomologies {
    /// PH_dplus^k = F^0 H_+^k for k < n.
    pub ph_dplus: Vec<usize>,
    /// PH_dminus^k = F^0 H_-^k for k < n.
    pub ph_dminus: Vec<usize>,
    /// PH_{dd^Lambda}^k = F^{n-k} H_+^{2n-k} for k = 0..=n.
    pub ph_dd_lambda: Vec<usize>,
    /// PH_{d+d^Lambda}^k = F^{n-k} H_-^{2n-k} for k = 0..=n.
    pub ph_d_plus_d_lambda: Vec<usize>,
}

/// Is `a` p-filtered, i.e. Lambda^{p+1} a = 0?
pub fn is_filtered(m: &Model, p: usize, a: &Form) -> Result<bool> {
    let mut x = a.clone();
    for _ in 0..=p {
        x = m.symplectic().lambda(&x)?;
        if x.is_zero() {
            return Ok(true);
        }
    }
    Ok(x.is_zero())
}

/// Split dB = dp_plus B + omega ^ dp_minus B for primitive B; both parts are
/// primitive and any Lefschetz component of dB with power >= 2 is an error.
pub fn dpp_dpm(m: &Model, b: &Form) -> Result<(Form, Form)> {
    if !m.symplectic().is_primitive(b)? {
        return Err(Error::Precondition(
            "dpp_dpm requires a primitive form".into(),
        ));
    }
    let db = m.d(b)?;
    if db.is_zero() {
        return Ok((Form::zero(m.dim()), Form::zero(m.dim())));
    }
    let dec = m.symplectic().decompose(&db)?;
    let mut plus = Form::zero(m.dim());
    let mut minus = Form::zero(m.dim());
    for (r, comp) in &dec.components {
        match r {
            0 => plus = comp.clone(),
            1 => minus = comp.clone(),
            _ => {
                return Err(Error::Internal(format!(
                    "dB of a primitive form has Lefschetz power {r} >= 2"
                )))
            }
        }
    }
    Ok((plus, minus))
}

/// d_plus = Pi^p after d, on p-filtered forms.
pub fn d_plus(m: &Model, p: usize, a: &Form) -> Result<Form> {
    if !is_filtered(m, p, a)? {
        return Err(Error::Precondition("d_plus input is not p-filtered".into()));
    }
    m.symplectic().project(p, &m.d(a)?)
}

/// d_minus = star_r d star_r (filtration-independent formula).
pub fn d_minus(m: &Model, a: &Form) -> Result<Form> {
    let s = m.symplectic();
    s.star_r(&m.d(&s.star_r(a)?)?)
}

/// The second-order middle operator on F^p Omega^{n+p} = L^p B^{n-p}:
/// omega^p ^ B maps to omega^p ^ dp_plus dp_minus B.
pub fn middle_op(m: &Model, p: usize, a: &Form) -> Result<Form> {
    let s = m.symplectic();
    let dec = s.decompose(a)?;
    let mut out = Form::zero(m.dim());
    for (r, b) in &dec.components {
        if *r != p {
            return Err(Error::Precondition(format!(
                "middle operator input must lie in L^{p} B^(n-p), found power {r}"
            )));
        }
        let (_, bm) = dpp_dpm(m, b)?;
        let (bpm, _) = dpp_dpm(m, &bm)?;
        out = out.add(&s.omega().pow(p)?.wedge(&bpm)?)?;
    }
    Ok(out)
}

pub fn filtered_space(m: &Model, p: usize, k: usize) -> FilteredSpace {
    let s = m.symplectic();
    let n = m.n();
    let mut basis = Vec::new();
    let mut layout = Vec::new();
    if k <= n + p {
        let r_lo = k.saturating_sub(n);
        let r_hi = p.min(k / 2);
        for r in r_lo..=r_hi {
            let prim = s.primitive_basis(k - 2 * r);
            layout.push((r, prim.len()));
            let wr = s.omega().pow(r).expect("omega power");
            for b in prim {
                basis.push(wr.wedge(b).expect("wedge"));
            }
        }
    }
    FilteredSpace { p, k, basis, layout }
}

fn op_matrix(
    m: &Model,
    src: &FilteredSpace,
    tgt: &FilteredSpace,
    op: impl Fn(&Form) -> Result<Form>,
) -> Result<Mat> {
    let monomials = m.symplectic().monomials(tgt.k);
    let tgt_cols: Vec<Vec<Q>> = tgt.basis.iter().map(|f| f.coords(monomials)).collect();
    let solver = crate::linalg::Solver::new(&Mat::from_columns(monomials.len(), &tgt_cols));
    let mut cols = Vec::with_capacity(src.basis.len());
    for f in &src.basis {
        let image = op(f)?;
        let coords = solver.solve(&image.coords(monomials)).ok_or_else(|| {
            Error::Internal(format!(
                "operator image leaves the filtered target space (p={}, k={} -> k={})",
                src.p, src.k, tgt.k
            ))
        })?;
        cols.push(coords);
    }
    Ok(Mat::from_columns(tgt.basis.len(), &cols))
}

/// Assemble the full complex; all composite-vanishing invariants verified.
pub fn assemble_complex(m: &Model, p: usize) -> Result<FilteredComplex> {
    let n = m.n();
    if p > n {
        return Err(Error::Precondition(format!("p = {p} exceeds n = {n}")));
    }
    let spaces: Vec<FilteredSpace> = (0..=n + p).map(|k| filtered_space(m, p, k)).collect();
    let mut top_maps = Vec::new();
    for k in 0..n + p {
        top_maps.push(op_matrix(m, &spaces[k], &spaces[k + 1], |f| {
            d_plus(m, p, f)
        })?);
    }
    let middle_map = op_matrix(m, &spaces[n + p], &spaces[n + p], |f| middle_op(m, p, f))?;
    let mut bottom_maps = Vec::new();
    for k in 0..n + p {
        bottom_maps.push(op_matrix(m, &spaces[k + 1], &spaces[k], |f| d_minus(m, f))?);
    }
    // Chain conditions.
    for k in 0..n + p - 1 {
        if !top_maps[k + 1].mul(&top_maps[k]).is_zero() {
            return Err(Error::Internal(format!("d_plus d_plus != 0 at k = {k}")));
        }
    }
    if !middle_map.mul(&top_maps[n + p - 1]).is_zero() {
        return Err(Error::Internal("(dp_plus dp_minus) d_plus != 0".into()));
    }
    if !bottom_maps[n + p - 1].mul(&middle_map).is_zero() {
        return Err(Error::Internal("d_minus (dp_plus dp_minus) != 0".into()));
    }
    for k in 0..n + p - 1 {
        if !bottom_maps[k].mul(&bottom_maps[k + 1]).is_zero() {
            return Err(Error::Internal(format!("d_minus d_minus != 0 at k = {k}")));
        }
    }
    let zero_out = Mat::zero(0, spaces[0].basis.len());
    Ok(FilteredComplex {
        p,
        spaces,
        top_maps,
        middle_map,
        bottom_maps,
        zero_out,
    })
}

impl FilteredComplex {
    /// Numerator/denominator of the bent complex at position g, as forms.
    fn slot_parts(&self, m: &Model, g: usize) -> Result<(usize, Vec<Form>, Vec<Form>)> {
        let n = m.n();
        let p = self.p;
        let top = n + p;
        let (degree, numer_mat, denom_mat): (usize, &Mat, Option<&Mat>) = if g < top {
            (
                g,
                &self.top_maps[g],
                if g == 0 { None } else { Some(&self.top_maps[g - 1]) },
            )
        } else if g == top {
            (top, &self.middle_map, Some(&self.top_maps[top - 1]))
        } else if g == top + 1 {
            (top, &self.bottom_maps[top - 1], Some(&self.middle_map))
        } else {
            let k = 2 * n + 2 * p + 1 - g;
            let numer: &Mat = if k == 0 {
                // d_minus out of degree 0 is the zero map; use a 0-row matrix.
                &self.zero_out
            } else {
                &self.bottom_maps[k - 1]
            };
            (k, numer, Some(&self.bottom_maps[k]))
        };
        let space = &self.spaces[degree];
        let numerator: Vec<Form> = numer_mat
            .nullspace()
            .into_iter()
            .map(|v| combine(m.dim(), &space.basis, &v))
            .collect();
        let denominator: Vec<Form> = match denom_mat {
            None => Vec::new(),
            Some(dm) => {
                let cols: Vec<Vec<Q>> = (0..dm.cols).map(|j| dm.column(j)).collect();
                span_basis(&cols, space.basis.len())
                    .into_iter()
                    .map(|v| combine(m.dim(), &space.basis, &v))
                    .collect()
            }
        };
        Ok((degree, numerator, denominator))
    }

    /// Cohomology of the bent complex at position g as a quotient of forms.
    pub fn bent_quotient(&self, m: &Model, g: usize) -> Result<Quotient> {
        let top = m.n() + self.p;
        if g > 2 * top + 1 {
            return Quotient::new(m.dim(), 0, Vec::new(), Vec::new());
        }
        let (degree, numer, denom) = self.slot_parts(m, g)?;
        Quotient::new(m.dim(), degree, numer, denom)
    }
}

fn combine(dim: usize, basis: &[Form], coords: &[Q]) -> Form {
    let mut out = Form::zero(dim);
    for (b, c) in basis.iter().zip(coords) {
        if !num_traits::Zero::is_zero(c) {
            out = out.add(&b.scale(c)).expect("dims agree");
        }
    }
    out
}

pub fn filtered_cohomology(m: &Model, p: usize) -> Result<FilteredCohomology> {
    let complex = assemble_complex(m, p)?;
    let top = m.n() + p;
    let mut plus_dims = Vec::new();
    let mut minus_dims = Vec::new();
    let mut plus_reps = Vec::new();
    let mut minus_reps = Vec::new();
    for k in 0..=top {
        let q = complex.bent_quotient(m, k)?;
        plus_dims.push(q.dim());
        plus_reps.push(q.representatives().to_vec());
    }
    for k in 0..=top {
        let g = 2 * top + 1 - k;
        let q = complex.bent_quotient(m, g)?;
        minus_dims.push(q.dim());
        minus_reps.push(q.representatives().to_vec());
    }
    Ok(FilteredCohomology {
        p,
        plus_dims,
        minus_dims,
        plus_reps,
        minus_reps,
    })
}

/// Cohomology of the bent p-filtered complex at position g.
pub fn bent_cohomology(m: &Model, p: usize, g: usize) -> Result<Quotient> {
    assemble_complex(m, p)?.bent_quotient(m, g)
}

pub fn primitive_cohomologies(m: &Model) -> Result<PrimitiveCohomologies> {
    let n = m.n();
    let f0 = filtered_cohomology(m, 0)?;
    let ph_dplus = f0.plus_dims[..n].to_vec();
    let ph_dminus = f0.minus_dims[..n].to_vec();
    let mut ph_dd_lambda = vec![0; n + 1];
    let mut ph_d_plus_d_lambda = vec![0; n + 1];
    for k in 0..=n {
        let p = n - k;
        let f = filtered_cohomology(m, p)?;
        ph_dd_lambda[k] = f.plus_dims[n + p];
        ph_d_plus_d_lambda[k] = f.minus_dims[n + p];
    }
    Ok(PrimitiveCohomologies {
        ph_dplus,
        ph_dminus,
        ph_dd_lambda,
        ph_d_plus_d_lambda,
    })
}

/// Deterministic pseudo-random p-filtered form of degree k.
pub fn random_filtered(m: &Model, p: usize, k: usize, seed: u64, bound: i64) -> Result<Form> {
    let a = crate::exterior::random_form(seed, m.dim(), k, bound)?;
    m.symplectic().project(p, &a)
}
