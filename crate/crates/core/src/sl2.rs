//! The sl(2) operator calculus on a symplectic vector space: wedge with
//! omega, the Poisson bivector contraction, the weight operator, Lefschetz
//! decompositions, filtration projections, negative Lefschetz powers and the
//! two reflection operators.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exterior::{monomial_basis, Form, MultiIndex};
use crate::linalg::{Mat, Q, Solver};

/// A nondegenerate closed two-form together with its exact inverse matrix
/// and the per-degree primitive bases and decomposition solvers.
pub struct SymplecticStructure {
    dim: usize,
    n: usize,
    omega: Form,
    omega_inv: Mat,
    bases: Vec<Vec<MultiIndex>>,
    /// primitive_bases[s]: basis forms of ker(Lambda) in degree s (empty for s > n).
    primitive_bases: Vec<Vec<Form>>,
    /// decomp_solvers[k]: solves sum_r omega^r ^ B_r = a in degree k.
    decomp_solvers: Vec<Solver>,
    /// decomp_layout[k]: list of (r, dim P^{k-2r}) in solver column order.
    decomp_layout: Vec<Vec<(usize, usize)>>,
}

/// Unique expression of a homogeneous form as sum of omega-powers wedged
/// with primitive forms. Only nonzero components are stored.
#[derive(Clone, Debug)]
pub struct LefschetzDecomposition {
    pub degree: usize,
    pub components: Vec<(usize, Form)>,
}

impl LefschetzDecomposition {
    pub fn component(&self, r: usize) -> Option<&Form> {
        self.components
            .iter()
            .find(|(rr, _)| *rr == r)
            .map(|(_, b)| b)
    }
}

impl SymplecticStructure {
    pub fn new(dim: usize, omega: Form) -> Result<Self> {
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::Validation(format!(
                "ambient dimension must be even and positive, got {dim}"
            )));
        }
        if omega.dim() != dim {
            return Err(Error::DimensionMismatch(omega.dim(), dim));
        }
        match omega.homogeneous_degree()? {
            Some(2) => {}
            _ => {
                return Err(Error::Validation(
                    "omega must be homogeneous of degree 2".into(),
                ))
            }
        }
        let n = dim / 2;
        if omega.pow(n)?.is_zero() {
            return Err(Error::Validation(
                "omega is degenerate: omega^n = 0".into(),
            ));
        }
        let mut w = Mat::zero(dim, dim);
        for (idx, c) in omega.terms() {
            let (i, j) = (idx.0[0] as usize - 1, idx.0[1] as usize - 1);
            w[(i, j)] = c.clone();
            w[(j, i)] = -c.clone();
        }
        let omega_inv = w
            .inverse()
            .ok_or_else(|| Error::Validation("omega coefficient matrix is singular".into()))?;

        let bases: Vec<Vec<MultiIndex>> = (0..=dim).map(|k| monomial_basis(dim, k)).collect();

        let mut s = SymplecticStructure {
            dim,
            n,
            omega,
            omega_inv,
            bases,
            primitive_bases: Vec::new(),
            decomp_solvers: Vec::new(),
            decomp_layout: Vec::new(),
        };
        s.precompute()?;
        Ok(s)
    }

    /// Standard Darboux structure e12 + e34 + ... on R^dim.
    pub fn darboux(dim: usize) -> Result<Self> {
        let mut omega = Form::zero(dim);
        for i in 0..dim / 2 {
            let m = Form::monomial(
                dim,
                &[(2 * i + 1) as u8, (2 * i + 2) as u8],
                Q::from_integer(1.into()),
            )?;
            omega = omega.add(&m)?;
        }
        SymplecticStructure::new(dim, omega)
    }

    fn precompute(&mut self) -> Result<()> {
        // Primitive bases: nullspace of Lambda per degree.
        for s in 0..=self.dim {
            if s > self.n {
                self.primitive_bases.push(Vec::new());
                continue;
            }
            let basis = &self.bases[s];
            if s < 2 {
                self.primitive_bases
                    .push(basis.iter().map(|idx| {
                        Form::from_coords(self.dim, std::slice::from_ref(idx), &[Q::from_integer(1.into())])
                    }).collect());
                continue;
            }
            let target = &self.bases[s - 2];
            let mut lam = Mat::zero(target.len(), basis.len());
            for (j, idx) in basis.iter().enumerate() {
                let f = Form::from_coords(self.dim, std::slice::from_ref(idx), &[Q::from_integer(1.into())]);
                let lf = self.lambda(&f)?;
                for (i, t) in target.iter().enumerate() {
                    lam[(i, j)] = lf.coeff(t);
                }
            }
            let ns = lam.nullspace();
            self.primitive_bases.push(
                ns.into_iter()
                    .map(|v| Form::from_coords(self.dim, basis, &v))
                    .collect(),
            );
        }
        // Decomposition solvers per degree.
        for k in 0..=self.dim {
            let mut layout = Vec::new();
            let mut columns: Vec<Vec<Q>> = Vec::new();
            let basis = &self.bases[k];
            let r_lo = k.saturating_sub(self.n);
            for r in r_lo..=k / 2 {
                let s = k - 2 * r;
                let prim = &self.primitive_bases[s];
                layout.push((r, prim.len()));
                let wr = self.omega.pow(r)?;
                for b in prim {
                    let col = wr.wedge(b)?.coords(basis);
                    columns.push(col);
                }
            }
            let mat = Mat::from_columns(basis.len(), &columns);
            self.decomp_solvers.push(Solver::new(&mat));
            self.decomp_layout.push(layout);
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn omega(&self) -> &Form {
        &self.omega
    }

    pub fn omega_inverse(&self) -> &Mat {
        &self.omega_inv
    }

    pub fn monomials(&self, k: usize) -> &[MultiIndex] {
        &self.bases[k]
    }

    /// Basis of the primitive subspace in degree s.
    pub fn primitive_basis(&self, s: usize) -> &[Form] {
        &self.primitive_bases[s]
    }

    /// L: wedge with omega.
    pub fn lefschetz(&self, a: &Form) -> Result<Form> {
        self.omega.wedge(a)
    }

    /// Lambda: 1/2 (omega^{-1})^{ij} iota_i iota_j.
    pub fn lambda(&self, a: &Form) -> Result<Form> {
        let mut out = Form::zero(self.dim);
        let half = Q::new(1.into(), 2.into());
        for i in 0..self.dim {
            for j in 0..self.dim {
                let c = &self.omega_inv[(i, j)];
                if c.is_zero() {
                    continue;
                }
                let contracted = a.contract((j + 1) as u8)?.contract((i + 1) as u8)?;
                out = out.add(&contracted.scale(&(c * &half)))?;
            }
        }
        Ok(out)
    }

    /// H: multiplication by (n - k) on a homogeneous degree-k form.
    pub fn weight(&self, a: &Form) -> Result<Form> {
        match a.homogeneous_degree()? {
            None => Ok(Form::zero(self.dim)),
            Some(k) => {
                let c = Q::from_integer((self.n as i64 - k as i64).into());
                Ok(a.scale(&c))
            }
        }
    }

    pub fn is_primitive(&self, a: &Form) -> Result<bool> {
        Ok(self.lambda(a)?.is_zero())
    }

    /// Unique Lefschetz decomposition of a homogeneous form.
    pub fn decompose(&self, a: &Form) -> Result<LefschetzDecomposition> {
        let degree = match a.homogeneous_degree()? {
            None => {
                return Ok(LefschetzDecomposition {
                    degree: 0,
                    components: Vec::new(),
                })
            }
            Some(k) => k,
        };
        let coords = a.coords(&self.bases[degree]);
        let sol = self.decomp_solvers[degree]
            .solve(&coords)
            .ok_or_else(|| {
                Error::Internal(
                    "Lefschetz decomposition system is inconsistent; symplectic structure broken"
                        .into(),
                )
            })?;
        let mut components = Vec::new();
        let mut offset = 0usize;
        for &(r, len) in &self.decomp_layout[degree] {
            let s = degree - 2 * r;
            let mut b = Form::zero(self.dim);
            for (bi, bform) in self.primitive_bases[s].iter().enumerate() {
                let c = &sol[offset + bi];
                if !c.is_zero() {
                    b = b.add(&bform.scale(c))?;
                }
            }
            offset += len;
            if !b.is_zero() {
                components.push((r, b));
            }
        }
        Ok(LefschetzDecomposition { degree, components })
    }

    /// Reassemble sum_r omega^r ^ B_r.
    pub fn recompose(&self, d: &LefschetzDecomposition) -> Result<Form> {
        let mut out = Form::zero(self.dim);
        for (r, b) in &d.components {
            out = out.add(&self.omega.pow(*r)?.wedge(b)?)?;
        }
        Ok(out)
    }

    /// Pi^p: keep Lefschetz components with omega-power at most p.
    /// Extends to inhomogeneous forms componentwise.
    pub fn project(&self, p: usize, a: &Form) -> Result<Form> {
        let mut out = Form::zero(self.dim);
        for k in a.degrees() {
            let d = self.decompose(&a.degree_component(k))?;
            for (r, b) in &d.components {
                if *r <= p {
                    out = out.add(&self.omega.pow(*r)?.wedge(b)?)?;
                }
            }
        }
        Ok(out)
    }

    /// L^m for integer m. Nonnegative powers wedge with omega^m; negative
    /// powers drop components below |m| and divide by omega^{|m|}.
    pub fn l_power(&self, m: i64, a: &Form) -> Result<Form> {
        if m >= 0 {
            return self.omega.pow(m as usize)?.wedge(a);
        }
        let p = (-m) as usize;
        if a.homogeneous_degree()?.is_none() {
            return Ok(Form::zero(self.dim));
        }
        if a.degrees().len() > 1 {
            return Err(Error::Inhomogeneous(a.degrees()));
        }
        let d = self.decompose(a)?;
        let mut out = Form::zero(self.dim);
        for (r, b) in &d.components {
            if *r >= p {
                out = out.add(&self.omega.pow(r - p)?.wedge(b)?)?;
            }
        }
        Ok(out)
    }

    /// The reflection omega^r B_s -> omega^{n-r-s} B_s, extended linearly.
    pub fn star_r(&self, a: &Form) -> Result<Form> {
        if a.degrees().len() > 1 {
            return Err(Error::Inhomogeneous(a.degrees()));
        }
        let d = self.decompose(a)?;
        let mut out = Form::zero(self.dim);
        for (r, b) in &d.components {
            let s = d.degree - 2 * r;
            let power = self.n - r - s;
            out = out.add(&self.omega.pow(power)?.wedge(b)?)?;
        }
        Ok(out)
    }

    /// The symplectic star via the Weil relation:
    /// star_s(L^r B_s / r!) = (-1)^{s(s+1)/2} L^{n-r-s} B_s / (n-r-s)!.
    pub fn star_s(&self, a: &Form) -> Result<Form> {
        if a.degrees().len() > 1 {
            return Err(Error::Inhomogeneous(a.degrees()));
        }
        let d = self.decompose(a)?;
        let mut out = Form::zero(self.dim);
        for (r, b) in &d.components {
            let s = d.degree - 2 * r;
            let power = self.n - r - s;
            let sign = if (s * (s + 1) / 2) % 2 == 1 { -1i64 } else { 1 };
            let coeff = Q::new(
                (sign * factorial(*r)).into(),
                factorial(power).into(),
            );
            out = out.add(&self.omega.pow(power)?.wedge(b)?.scale(&coeff))?;
        }
        Ok(out)
    }

    /// Scalar action of 1/(H+1) on a homogeneous degree-k form: 1/(n-k+1).
    pub fn inv_h_plus_one(&self, a: &Form) -> Result<Form> {
        match a.homogeneous_degree()? {
            None => Ok(Form::zero(self.dim)),
            Some(k) => {
                let denom = self.n as i64 - k as i64 + 1;
                if denom == 0 {
                    return Err(Error::Precondition(format!(
                        "H + 1 vanishes on degree {k} (n = {})",
                        self.n
                    )));
                }
                Ok(a.scale(&Q::new(1.into(), denom.into())))
            }
        }
    }
}

fn factorial(m: usize) -> i64 {
    (1..=m as i64).product::<i64>().max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::random_form;

    fn qi(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn e(dim: usize, idx: &[u8]) -> Form {
        Form::monomial(dim, idx, qi(1)).unwrap()
    }

    fn std4() -> SymplecticStructure {
        SymplecticStructure::darboux(4).unwrap()
    }

    #[test]
    fn lambda_basics() {
        let s = std4();
        assert_eq!(s.lambda(&e(4, &[1, 2])).unwrap(), Form::one(4));
        assert_eq!(s.lambda(s.omega()).unwrap(), Form::scalar(4, qi(2)));
        assert!(s.lambda(&e(4, &[1])).unwrap().is_zero());
    }

    #[test]
    fn sl2_commutators_on_random_forms() {
        for dim in [4usize, 6] {
            let s = SymplecticStructure::darboux(dim).unwrap();
            for seed in 0..10u64 {
                let k = (seed as usize) % (dim - 1);
                let a = random_form(seed * 13 + 1, dim, k, 3).unwrap();
                // [H, Lambda] = 2 Lambda
                let hl = s.weight(&s.lambda(&a).unwrap()).unwrap();
                let lh = s.lambda(&s.weight(&a).unwrap()).unwrap();
                assert_eq!(
                    hl.sub(&lh).unwrap(),
                    s.lambda(&a).unwrap().scale(&qi(2))
                );
                // [H, L] = -2 L
                let hw = s.weight(&s.lefschetz(&a).unwrap()).unwrap();
                let wh = s.lefschetz(&s.weight(&a).unwrap()).unwrap();
                assert_eq!(
                    hw.sub(&wh).unwrap(),
                    s.lefschetz(&a).unwrap().scale(&qi(-2))
                );
                // [Lambda, L] = H
                let ll = s.lambda(&s.lefschetz(&a).unwrap()).unwrap();
                let lw = s.lefschetz(&s.lambda(&a).unwrap()).unwrap();
                assert_eq!(ll.sub(&lw).unwrap(), s.weight(&a).unwrap());
            }
        }
    }

    #[test]
    fn decompose_primitive_and_omega() {
        let s = std4();
        // omega -> [(1, 1)]
        let d = s.decompose(s.omega()).unwrap();
        assert_eq!(d.components.len(), 1);
        assert_eq!(d.components[0].0, 1);
        assert_eq!(d.components[0].1, Form::one(4));
        // e12 -> [(0, (e12 - e34)/2), (1, 1/2)]
        let d = s.decompose(&e(4, &[1, 2])).unwrap();
        let b0 = d.component(0).unwrap();
        let b1 = d.component(1).unwrap();
        let half = Q::new(1.into(), 2.into());
        let expected0 = e(4, &[1, 2]).sub(&e(4, &[3, 4])).unwrap().scale(&half);
        assert_eq!(*b0, expected0);
        assert_eq!(*b1, Form::scalar(4, half));
        assert!(s.is_primitive(b0).unwrap());
        assert_eq!(s.recompose(&d).unwrap(), e(4, &[1, 2]));
    }

    #[test]
    fn primitive_form_decomposes_trivially() {
        let s = std4();
        let b = e(4, &[1, 3]);
        assert!(s.is_primitive(&b).unwrap());
        let d = s.decompose(&b).unwrap();
        assert_eq!(d.components.len(), 1);
        assert_eq!(d.components[0], (0, b));
    }

    #[test]
    fn projection_and_negative_power() {
        let s = std4();
        // Pi^0(e12) = (e12 - e34)/2
        let p = s.project(0, &e(4, &[1, 2])).unwrap();
        let half = Q::new(1.into(), 2.into());
        assert_eq!(p, e(4, &[1, 2]).sub(&e(4, &[3, 4])).unwrap().scale(&half));
        // L^{-1}(omega ^ e1) = e1
        let we1 = s.lefschetz(&e(4, &[1])).unwrap();
        assert_eq!(s.l_power(-1, &we1).unwrap(), e(4, &[1]));
        // identity 1 = Pi^p + L^{p+1} L^{-(p+1)}
        for seed in 0..8u64 {
            for p in 0..=2usize {
                let k = (seed as usize) % 5;
                let a = random_form(seed + 5, 4, k, 4).unwrap();
                let lhs = s.project(p, &a).unwrap().add(
                    &s.omega
                        .pow(p + 1)
                        .unwrap()
                        .wedge(&s.l_power(-(p as i64 + 1), &a).unwrap())
                        .unwrap(),
                );
                assert_eq!(lhs.unwrap(), a);
            }
        }
    }

    #[test]
    fn star_r_involution_and_values() {
        let s = std4();
        // star_r(1) = omega^2 = 2 e1234
        assert_eq!(
            s.star_r(&Form::one(4)).unwrap(),
            e(4, &[1, 2, 3, 4]).scale(&qi(2))
        );
        for seed in 0..10u64 {
            let k = (seed as usize) % 5;
            let a = random_form(seed + 31, 4, k, 4).unwrap();
            assert_eq!(s.star_r(&s.star_r(&a).unwrap()).unwrap(), a);
            // L^{-p} = star_r L^p star_r
            for p in 1..=2i64 {
                let lhs = s.l_power(-p, &a).unwrap();
                let rhs = s
                    .star_r(&s.l_power(p, &s.star_r(&a).unwrap()).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn star_s_weil_and_involution() {
        let s = std4();
        // On a primitive 1-form B in dimension 4: star_s B = -omega ^ B.
        let b = e(4, &[1]);
        assert_eq!(
            s.star_s(&b).unwrap(),
            s.lefschetz(&b).unwrap().neg()
        );
        for seed in 0..10u64 {
            let k = (seed as usize) % 5;
            let a = random_form(seed + 97, 4, k, 4).unwrap();
            assert_eq!(s.star_s(&s.star_s(&a).unwrap()).unwrap(), a);
        }
    }

    #[test]
    fn star_r_adjoint_identity() {
        // 1 = Pi^{p*} + L^{-(p+1)} L^{p+1} with Pi^{p*} = star_r Pi^p star_r.
        let s = std4();
        for seed in 0..8u64 {
            for p in 0..=1i64 {
                let k = (seed as usize) % 5;
                let a = random_form(seed + 41, 4, k, 3).unwrap();
                let pis = s
                    .star_r(&s.project(p as usize, &s.star_r(&a).unwrap()).unwrap())
                    .unwrap();
                let rest = s
                    .l_power(-(p + 1), &s.l_power(p + 1, &a).unwrap())
                    .unwrap();
                assert_eq!(pis.add(&rest).unwrap(), a);
            }
        }
    }

    #[test]
    fn primitivity_criteria_agree() {
        // Lambda B = 0 iff L^{n+1-s} B = 0 on degree s <= n.
        let s = std4();
        for seed in 0..12u64 {
            for deg in 0..=2usize {
                let a = random_form(seed + 7, 4, deg, 3).unwrap();
                let lam_zero = s.lambda(&a).unwrap().is_zero();
                let pow_zero = s
                    .l_power((s.n() + 1 - deg) as i64, &a)
                    .unwrap()
                    .is_zero();
                assert_eq!(lam_zero, pow_zero);
            }
        }
    }

    #[test]
    fn p_filtered_criteria_agree() {
        // Lambda^{p+1} A = 0 iff L^{n+p+1-k} A = 0 iff L^{p+1} star_r A = 0.
        let s = SymplecticStructure::darboux(6).unwrap();
        for seed in 0..10u64 {
            for p in 0..=2usize {
                for k in 0..=4usize {
                    if k > s.n() + p {
                        continue;
                    }
                    let a = random_form(seed * 31 + k as u64, 6, k, 3).unwrap();
                    let mut lam = a.clone();
                    for _ in 0..=p {
                        lam = s.lambda(&lam).unwrap();
                    }
                    let c1 = lam.is_zero();
                    let c2 = s
                        .l_power((s.n() + p + 1 - k) as i64, &a)
                        .unwrap()
                        .is_zero();
                    let c3 = s
                        .l_power(p as i64 + 1, &s.star_r(&a).unwrap())
                        .unwrap()
                        .is_zero();
                    assert_eq!(c1, c2);
                    assert_eq!(c2, c3);
                }
            }
        }
    }

    #[test]
    fn primitive_dimensions_sum_to_binomial() {
        for dim in [4usize, 6] {
            let s = SymplecticStructure::darboux(dim).unwrap();
            for k in 0..=dim {
                let total: usize = (k.saturating_sub(s.n())..=k / 2)
                    .map(|r| s.primitive_basis(k - 2 * r).len())
                    .sum();
                assert_eq!(total, s.monomials(k).len());
            }
        }
    }

    #[test]
    fn non_darboux_omega_works() {
        // A skewed nondegenerate closed form: omega = e12 + e34 + e13.
        let omega = e(4, &[1, 2])
            .add(&e(4, &[3, 4]))
            .unwrap()
            .add(&e(4, &[1, 3]))
            .unwrap();
        let s = SymplecticStructure::new(4, omega).unwrap();
        for seed in 0..6u64 {
            let a = random_form(seed + 3, 4, 2, 3).unwrap();
            let d = s.decompose(&a).unwrap();
            assert_eq!(s.recompose(&d).unwrap(), a);
            for (r, b) in &d.components {
                let _ = r;
                assert!(s.is_primitive(b).unwrap());
            }
            assert_eq!(s.star_r(&s.star_r(&a).unwrap()).unwrap(), a);
        }
    }

    #[test]
    fn weight_rejects_inhomogeneous() {
        let s = std4();
        let f = Form::one(4).add(&e(4, &[1, 2])).unwrap();
        assert!(s.weight(&f).is_err());
    }
}
