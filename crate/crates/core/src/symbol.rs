//! Pointwise ellipticity certificates: the symbol sequence of the filtered
//! two-row complex at a covector, checked exact at every position by rank.
//!
//! Only the normalized covector xi = e1 with the Darboux form is checked;
//! Sp(2n)-invariance reduces the general point to this one.

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::linalg::{Mat, Q, Solver};
use crate::sl2::SymplecticStructure;

#[derive(Clone, Debug)]
pub struct SymbolPosition {
    pub label: String,
    pub space_dim: usize,
    pub incoming_rank: usize,
    pub outgoing_rank: usize,
    pub outgoing_nullity: usize,
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct SymbolReport {
    pub dim: usize,
    pub p: usize,
    pub positions: Vec<SymbolPosition>,
    pub all_exact: bool,
}

/// The four-component split of a primitive vector against e1, e2:
/// mu = e1 ^ b1 + e2 ^ b2 + e12' ^ b3 + b4 with each b primitive in the
/// sub-algebra on e3..e_{2n}.
#[derive(Clone, Debug)]
pub struct PrimitiveSplit {
    pub b1: Form,
    pub b2: Form,
    pub b3: Form,
    pub b4: Form,
}

/// Workspace for symbol computations at xi = e1, Darboux omega.
pub struct SymbolContext {
    dim: usize,
    n: usize,
    s: SymplecticStructure,
    /// Primitive bases of the sub-algebra on e3..e_{2n}, embedded.
    sub_primitive: Vec<Vec<Form>>,
    /// omega'' = omega - e12.
    omega_sub: Form,
}

impl SymbolContext {
    pub fn new(dim: usize) -> Result<SymbolContext> {
        if dim < 2 || !dim.is_multiple_of(2) {
            return Err(Error::Precondition(format!(
                "ambient dimension must be even and >= 2, got {dim}"
            )));
        }
        let s = SymplecticStructure::darboux(dim)?;
        let n = dim / 2;
        // Sub-structure on e3..e_{2n}: embed its primitive bases by index shift.
        let mut sub_primitive: Vec<Vec<Form>> = Vec::new();
        if dim == 2 {
            sub_primitive.push(vec![Form::one(dim)]);
        } else {
            let sub = SymplecticStructure::darboux(dim - 2)?;
            for deg in 0..=(dim - 2) {
                let shifted = sub
                    .primitive_basis(deg)
                    .iter()
                    .map(|f| shift_indices(f, dim, 2))
                    .collect::<Result<Vec<_>>>()?;
                sub_primitive.push(shifted);
            }
        }
        let e12 = Form::monomial(dim, &[1, 2], Q::new(1.into(), 1.into()))?;
        let omega_sub = s.omega().sub(&e12)?;
        Ok(SymbolContext {
            dim,
            n,
            s,
            sub_primitive,
            omega_sub,
        })
    }

    pub fn structure(&self) -> &SymplecticStructure {
        &self.s
    }

    fn sub_primitive(&self, deg: usize) -> &[Form] {
        static EMPTY: Vec<Form> = Vec::new();
        if deg >= self.sub_primitive.len() {
            &EMPTY
        } else {
            &self.sub_primitive[deg]
        }
    }

    /// e12' ^ beta = e1 ^ e2 ^ beta - (1/(H+1)) omega'' ^ beta, the
    /// primitive completion of e1 ^ e2 ^ beta for sub-primitive beta of
    /// degree s <= n-2; the weight operator acts on the degree-(s+2) term,
    /// where H + 1 is nonzero throughout the split's range.
    pub fn e12_prime_wedge(&self, beta: &Form) -> Result<Form> {
        let s_deg = beta.homogeneous_degree()?.unwrap_or(0);
        if self.n < 2 || s_deg > self.n - 2 {
            return Err(Error::Precondition(format!(
                "e12' ^ beta needs deg beta <= n-2, got {s_deg}"
            )));
        }
        let e12 = Form::monomial(self.dim, &[1, 2], Q::new(1.into(), 1.into()))?;
        let scaled = self.s.inv_h_plus_one(&self.omega_sub.wedge(beta)?)?;
        e12.wedge(beta)?.sub(&scaled)
    }

    /// Unique split of a primitive mu; reconstruction is asserted.
    pub fn primitive_vector_split(&self, mu: &Form) -> Result<PrimitiveSplit> {
        if !self.s.is_primitive(mu)? {
            return Err(Error::Precondition("split input must be primitive".into()));
        }
        let l = match mu.homogeneous_degree()? {
            None => {
                let z = Form::zero(self.dim);
                return Ok(PrimitiveSplit {
                    b1: z.clone(),
                    b2: z.clone(),
                    b3: z.clone(),
                    b4: z,
                });
            }
            Some(l) => l,
        };
        let monomials = crate::exterior::monomial_basis(self.dim, l);
        let mut columns: Vec<Vec<Q>> = Vec::new();
        let e1 = Form::generator(self.dim, 1)?;
        let e2 = Form::generator(self.dim, 2)?;
        let p1 = if l >= 1 {
            self.sub_primitive(l - 1).to_vec()
        } else {
            Vec::new()
        };
        let p3 = if l >= 2 {
            self.sub_primitive(l - 2).to_vec()
        } else {
            Vec::new()
        };
        let p4 = self.sub_primitive(l).to_vec();
        for b in &p1 {
            columns.push(e1.wedge(b)?.coords(&monomials));
        }
        for b in &p1 {
            columns.push(e2.wedge(b)?.coords(&monomials));
        }
        for b in &p3 {
            columns.push(self.e12_prime_wedge(b)?.coords(&monomials));
        }
        for b in &p4 {
            columns.push(b.coords(&monomials));
        }
        let mat = Mat::from_columns(monomials.len(), &columns);
        let solver = Solver::new(&mat);
        if solver.rank() != columns.len() {
            return Err(Error::Internal(
                "primitive split basis is linearly dependent".into(),
            ));
        }
        let x = solver
            .solve(&mu.coords(&monomials))
            .ok_or_else(|| Error::Internal("primitive split has no solution".into()))?;
        let assemble = |basis: &[Form], offset: usize| -> Result<Form> {
            let mut f = Form::zero(self.dim);
            for (i, b) in basis.iter().enumerate() {
                let c = &x[offset + i];
                if !num_traits::Zero::is_zero(c) {
                    f = f.add(&b.scale(c))?;
                }
            }
            Ok(f)
        };
        let b1 = assemble(&p1, 0)?;
        let b2 = assemble(&p1, p1.len())?;
        let b3 = assemble(&p3, 2 * p1.len())?;
        let b4 = assemble(&p4, 2 * p1.len() + p3.len())?;
        let split = PrimitiveSplit { b1, b2, b3, b4 };
        let mut rec = e1.wedge(&split.b1)?.add(&e2.wedge(&split.b2)?)?;
        if !split.b3.is_zero() {
            rec = rec.add(&self.e12_prime_wedge(&split.b3)?)?;
        }
        rec = rec.add(&split.b4)?;
        if rec != *mu {
            return Err(Error::Internal(
                "primitive split fails to reconstruct".into(),
            ));
        }
        Ok(split)
    }

    /// Symbol of d at xi = e1: wedge with e1.
    fn sigma_d(&self, a: &Form) -> Result<Form> {
        Form::generator(self.dim, 1)?.wedge(a)
    }

    /// Symbol components e1 ^ B = sigma(dp_plus) B + omega ^ sigma(dp_minus) B.
    pub fn sigma_dpp_dpm(&self, b: &Form) -> Result<(Form, Form)> {
        let w = self.sigma_d(b)?;
        if w.is_zero() {
            return Ok((Form::zero(self.dim), Form::zero(self.dim)));
        }
        let dec = self.s.decompose(&w)?;
        let mut plus = Form::zero(self.dim);
        let mut minus = Form::zero(self.dim);
        for (r, comp) in &dec.components {
            match r {
                0 => plus = comp.clone(),
                1 => minus = comp.clone(),
                _ => {
                    return Err(Error::Internal(
                        "e1 ^ primitive has a Lefschetz power >= 2".into(),
                    ))
                }
            }
        }
        Ok((plus, minus))
    }

    /// sigma(d_plus) = Pi^p (e1 ^ .).
    pub fn sigma_d_plus(&self, p: usize, a: &Form) -> Result<Form> {
        self.s.project(p, &self.sigma_d(a)?)
    }

    /// sigma(dp_plus dp_minus) on L^p B^{n-p}.
    pub fn sigma_middle(&self, p: usize, a: &Form) -> Result<Form> {
        let dec = self.s.decompose(a)?;
        let mut out = Form::zero(self.dim);
        for (r, b) in &dec.components {
            if *r != p {
                return Err(Error::Precondition(
                    "middle symbol input must be a single L^p component".into(),
                ));
            }
            let (_, bm) = self.sigma_dpp_dpm(b)?;
            let (bpm, _) = self.sigma_dpp_dpm(&bm)?;
            out = out.add(&self.s.omega().pow(p)?.wedge(&bpm)?)?;
        }
        Ok(out)
    }

    /// sigma(d_minus) = star_r (e1 ^ .) star_r.
    pub fn sigma_d_minus(&self, a: &Form) -> Result<Form> {
        self.s.star_r(&self.sigma_d(&self.s.star_r(a)?)?)
    }

    pub fn filtered_basis(&self, p: usize, k: usize) -> Result<Vec<Form>> {
        let mut basis = Vec::new();
        if k > self.n + p {
            return Ok(basis);
        }
        let r_lo = k.saturating_sub(self.n);
        for r in r_lo..=p.min(k / 2) {
            let wr = self.s.omega().pow(r)?;
            for b in self.s.primitive_basis(k - 2 * r) {
                basis.push(wr.wedge(b)?);
            }
        }
        Ok(basis)
    }
}

fn shift_indices(f: &Form, dim: usize, shift: u8) -> Result<Form> {
    let mut out = Form::zero(dim);
    for (idx, c) in f.terms() {
        let shifted: Vec<u8> = idx.0.iter().map(|i| i + shift).collect();
        out = out.add(&Form::monomial(dim, &shifted, c.clone())?)?;
    }
    Ok(out)
}

fn operator_matrix(
    ctx: &SymbolContext,
    src: &[Form],
    tgt: &[Form],
    k_tgt: usize,
    op: impl Fn(&Form) -> Result<Form>,
) -> Result<Mat> {
    let monomials = crate::exterior::monomial_basis(ctx.dim, k_tgt);
    let cols_t: Vec<Vec<Q>> = tgt.iter().map(|f| f.coords(&monomials)).collect();
    let solver = Solver::new(&Mat::from_columns(monomials.len(), &cols_t));
    let mut cols = Vec::new();
    for f in src {
        let image = op(f)?;
        let c = solver
            .solve(&image.coords(&monomials))
            .ok_or_else(|| Error::Internal("symbol image leaves the target space".into()))?;
        cols.push(c);
    }
    Ok(Mat::from_columns(tgt.len(), &cols))
}

/// Build the symbol sequence of the p-filtered complex at xi = e1 and check
/// exactness at all 2(n+p)+2 positions.
pub fn symbol_exactness(dim: usize, p: usize) -> Result<SymbolReport> {
    let ctx = SymbolContext::new(dim)?;
    let n = ctx.n;
    if p > n {
        return Err(Error::Precondition(format!("p = {p} exceeds n = {n}")));
    }
    let spaces: Vec<Vec<Form>> = (0..=n + p)
        .map(|k| ctx.filtered_basis(p, k))
        .collect::<Result<_>>()?;
    let mut mats: Vec<Mat> = Vec::new();
    for k in 0..n + p {
        mats.push(operator_matrix(
            &ctx,
            &spaces[k],
            &spaces[k + 1],
            k + 1,
            |a| ctx.sigma_d_plus(p, a),
        )?);
    }
    mats.push(operator_matrix(
        &ctx,
        &spaces[n + p],
        &spaces[n + p],
        n + p,
        |a| ctx.sigma_middle(p, a),
    )?);
    for k in (1..=n + p).rev() {
        mats.push(operator_matrix(
            &ctx,
            &spaces[k],
            &spaces[k - 1],
            k - 1,
            |a| ctx.sigma_d_minus(a),
        )?);
    }
    let mut positions = Vec::new();
    let mut all_exact = true;
    let total = 2 * (n + p) + 2;
    for pos in 0..total {
        let (label, space_dim) = if pos <= n + p {
            (format!("F{p}L^{pos} (top)"), spaces[pos].len())
        } else {
            let k = 2 * (n + p) + 1 - pos;
            (format!("F{p}L^{k} (bottom)"), spaces[k].len())
        };
        let incoming_rank = if pos == 0 { 0 } else { mats[pos - 1].rank() };
        let (outgoing_rank, outgoing_nullity) = if pos < mats.len() {
            let r = mats[pos].rank();
            (r, space_dim - r)
        } else {
            (0, space_dim)
        };
        let exact = incoming_rank == outgoing_nullity;
        if !exact {
            all_exact = false;
        }
        positions.push(SymbolPosition {
            label,
            space_dim,
            incoming_rank,
            outgoing_rank,
            outgoing_nullity,
            exact,
        });
    }
    Ok(SymbolReport {
        dim,
        p,
        positions,
        all_exact,
    })
}
