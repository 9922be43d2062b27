//! The fibered four-manifold calculus: monodromy-matrix analysis via the
//! Wang sequence, Jordan chains at eigenvalue one, the formal gamma-tilde
//! algebra with polynomial coefficients, fiber and total integration and the
//! product-image invariant of the middle-cohomology pairing.
//!
//! Forms here carry only principal parts: the interpolating-function
//! corrections that make the gamma-tildes globally smooth are exact and drop
//! out of every pairing evaluated below, so they are not represented. Each
//! middle-cohomology generator's dp_minus value is supplied as data for the
//! same reason.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::linalg::{span_basis, Mat, Q};

/// Dense polynomial in the base coordinate phi, ascending coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<Q>);

impl Poly {
    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn constant(c: Q) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly(vec![c])
        }
    }

    pub fn one() -> Poly {
        Poly::constant(Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn trim(mut self) -> Poly {
        while matches!(self.0.last(), Some(c) if c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.0.len().max(other.0.len());
        let mut out = vec![Q::zero(); len];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] += c;
        }
        Poly(out).trim()
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c.clone()).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out).trim()
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|x| x * c).collect()).trim()
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly::zero();
        }
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Q::from_integer((i as i64).into()))
                .collect(),
        )
        .trim()
    }

    /// Substitute phi -> phi - 1.
    pub fn shift_down(&self) -> Poly {
        let mut out = Poly::zero();
        let x_minus_1 = Poly(vec![-Q::one(), Q::one()]);
        for c in self.0.iter().rev() {
            out = out.mul(&x_minus_1).add(&Poly::constant(c.clone()));
        }
        out
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Exact definite integral over [0, 1].
    pub fn integral_01(&self) -> Q {
        let mut acc = Q::zero();
        for (i, c) in self.0.iter().enumerate() {
            acc += c / Q::from_integer(((i + 1) as i64).into());
        }
        acc
    }
}

/// f_i(phi) = (1/i!) prod_{m=0}^{i-1} (phi - m), with f_0 = 1.
pub fn f_poly(i: usize) -> Poly {
    let mut out = Poly::one();
    for m in 0..i {
        let factor = Poly(vec![-Q::from_integer((m as i64).into()), Q::one()]);
        out = out.mul(&factor);
    }
    let fact: i64 = (1..=i as i64).product::<i64>().max(1);
    out.scale(&Q::new(1.into(), fact.into()))
}

/// Base-direction monomials of the two circle factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BaseMono {
    One,
    Dt,
    Dphi,
    DtDphi,
}

impl BaseMono {
    pub fn degree(self) -> usize {
        match self {
            BaseMono::One => 0,
            BaseMono::Dt | BaseMono::Dphi => 1,
            BaseMono::DtDphi => 2,
        }
    }

    /// Wedge with sign; None if the product vanishes.
    fn wedge(self, other: BaseMono) -> Option<(BaseMono, i64)> {
        use BaseMono::*;
        match (self, other) {
            (One, x) | (x, One) => Some((x, 1)),
            (Dt, Dphi) => Some((DtDphi, 1)),
            (Dphi, Dt) => Some((DtDphi, -1)),
            _ => None,
        }
    }
}

/// Fiber-direction classes: 1, the gamma-tilde one-classes by (chain, index),
/// and the fiber area class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FiberClass {
    One,
    Gamma(usize, usize),
    OmegaSigma,
}

impl FiberClass {
    pub fn degree(&self) -> usize {
        match self {
            FiberClass::One => 0,
            FiberClass::Gamma(_, _) => 1,
            FiberClass::OmegaSigma => 2,
        }
    }
}

/// Formal form on the fibered four-manifold with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FiberedForm {
    terms: BTreeMap<(BaseMono, FiberClass), Poly>,
}

impl FiberedForm {
    pub fn zero() -> FiberedForm {
        FiberedForm::default()
    }

    pub fn term(base: BaseMono, fiber: FiberClass, poly: Poly) -> FiberedForm {
        let mut f = FiberedForm::zero();
        f.add_term(base, fiber, poly);
        f
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(BaseMono, FiberClass), &Poly)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, base: BaseMono, fiber: FiberClass, poly: Poly) {
        if poly.is_zero() {
            return;
        }
        let key = (base, fiber);
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(poly);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&poly);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &FiberedForm) -> FiberedForm {
        let mut out = self.clone();
        for ((b, f), p) in other.terms() {
            out.add_term(*b, f.clone(), p.clone());
        }
        out
    }

    pub fn neg(&self) -> FiberedForm {
        let mut out = FiberedForm::zero();
        for ((b, f), p) in self.terms() {
            out.add_term(*b, f.clone(), p.neg());
        }
        out
    }

    pub fn sub(&self, other: &FiberedForm) -> FiberedForm {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> FiberedForm {
        let mut out = FiberedForm::zero();
        for ((b, f), p) in self.terms() {
            out.add_term(*b, f.clone(), p.scale(c));
        }
        out
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self
            .terms
            .keys()
            .map(|(b, f)| b.degree() + f.degree())
            .collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }
}

/// Monodromy input: an integer symplectomorphism of the surface H^1.
#[derive(Clone, Debug)]
pub struct MonodromyData {
    pub rank: usize,
    pub tau: Mat,
    pub intersection: Mat,
}

impl MonodromyData {
    pub fn new(rank: usize, tau: Mat, intersection: Mat) -> Result<MonodromyData> {
        if rank == 0 || !rank.is_multiple_of(2) {
            return Err(Error::Input(format!(
                "H^1 rank must be even and positive, got {rank}"
            )));
        }
        if tau.rows != rank || tau.cols != rank {
            return Err(Error::Input("tau matrix has wrong shape".into()));
        }
        if intersection.rows != rank || intersection.cols != rank {
            return Err(Error::Input("intersection matrix has wrong shape".into()));
        }
        for i in 0..rank {
            for j in 0..rank {
                if intersection[(i, j)] != -intersection[(j, i)].clone() {
                    return Err(Error::Input("intersection form is not skew".into()));
                }
            }
        }
        if intersection.inverse().is_none() {
            return Err(Error::Input("intersection form is degenerate".into()));
        }
        let tjt = tau.transpose().mul(&intersection).mul(&tau);
        if tjt != intersection {
            return Err(Error::Input(
                "monodromy does not preserve the intersection pairing".into(),
            ));
        }
        Ok(MonodromyData {
            rank,
            tau,
            intersection,
        })
    }

    pub fn pairing(&self, u: &[Q], v: &[Q]) -> Q {
        let jv = self.intersection.mul_vec(v);
        u.iter().zip(&jv).map(|(a, b)| a * b).sum()
    }
}

/// Jordan data at eigenvalue one and the derived (p, q) invariants.
#[derive(Clone, Debug)]
pub struct JordanInvariants {
    pub q_plus_p: usize,
    pub q_minus_p: usize,
    pub p: usize,
    pub q: usize,
    /// chains[c][j] = gamma_{c,j} coordinates; chains[c][0] is in the kernel.
    pub chains: Vec<Vec<Vec<Q>>>,
}

/// Cohomology dimensions of X = S^1 x (Sigma x_tau S^1) from (p, q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyDims {
    pub betti: Vec<usize>,
    pub ph2: usize,
    pub ph1: usize,
}

fn n_matrix(data: &MonodromyData) -> Mat {
    let mut n = data.tau.clone();
    for i in 0..data.rank {
        n[(i, i)] -= Q::one();
    }
    n
}

/// Kernel, image, and their intersection for tau - 1; Jordan chains in the
/// generalized eigenspace of eigenvalue one. The orthogonality property (the
/// intersection equals the radical of the pairing restricted to the kernel)
/// is verified as part of the analysis.
pub fn analyze_monodromy(data: &MonodromyData) -> Result<(JordanInvariants, MonodromyDims)> {
    let n_mat = n_matrix(data);
    let rank = data.rank;
    let kernel = n_mat.nullspace();
    let image_cols: Vec<Vec<Q>> = (0..rank).map(|j| n_mat.column(j)).collect();
    let image = span_basis(&image_cols, rank);
    let inter_dim = intersect_dim(&kernel, &image, rank);
    let q_plus_p = kernel.len();
    let q_minus_p = inter_dim;
    if (q_plus_p as i64 - q_minus_p as i64) % 2 != 0 {
        return Err(Error::Internal(
            "dim ker - dim(ker cap im) must be even for a symplectomorphism".into(),
        ));
    }
    if q_plus_p < q_minus_p {
        return Err(Error::Internal(
            "kernel smaller than its intersection".into(),
        ));
    }
    let p = (q_plus_p - q_minus_p) / 2;
    let q = (q_plus_p + q_minus_p) / 2;
    let mut gram = Mat::zero(q_plus_p, q_plus_p);
    for (i, u) in kernel.iter().enumerate() {
        for (j, v) in kernel.iter().enumerate() {
            gram[(i, j)] = data.pairing(u, v);
        }
    }
    // Radical of the restricted pairing, as vectors of the ambient space.
    let radical: Vec<Vec<Q>> = gram
        .nullspace()
        .into_iter()
        .map(|coeffs| {
            let mut v = vec![Q::zero(); rank];
            for (c, k) in coeffs.iter().zip(&kernel) {
                for (vi, ki) in v.iter_mut().zip(k) {
                    *vi += c * ki;
                }
            }
            v
        })
        .collect();
    if radical.len() != q_minus_p
        || intersect_dim(&radical, &image, rank) != q_minus_p
    {
        return Err(Error::Internal(format!(
            "radical of the restricted pairing (dim {}) is not ker cap im (dim {q_minus_p})",
            radical.len()
        )));
    }
    let chains = jordan_chains(&n_mat, rank)?;
    let dims = MonodromyDims {
        betti: vec![1, q + p + 2, 2 * q + 2 * p + 2, q + p + 2, 1],
        ph2: 3 * q + p + 1,
        ph1: q + p + 2,
    };
    Ok((
        JordanInvariants {
            q_plus_p,
            q_minus_p,
            p,
            q,
            chains,
        },
        dims,
    ))
}

fn intersect_dim(a: &[Vec<Q>], b: &[Vec<Q>], dim: usize) -> usize {
    let da = span_basis(a, dim).len();
    let db = span_basis(b, dim).len();
    let mut all: Vec<Vec<Q>> = a.to_vec();
    all.extend(b.to_vec());
    let dab = span_basis(&all, dim).len();
    da + db - dab
}

/// Jordan chains of N at eigenvalue zero, each listed bottom (kernel
/// element) first. Deterministic given the input matrix.
fn jordan_chains(n_mat: &Mat, rank: usize) -> Result<Vec<Vec<Vec<Q>>>> {
    let mut powers = vec![Mat::identity(rank)];
    for _ in 0..rank {
        let last = powers.last().unwrap();
        powers.push(n_mat.mul(last));
    }
    let kernels: Vec<Vec<Vec<Q>>> = powers.iter().map(|m| m.nullspace()).collect();
    let gen_dim = kernels[rank].len();
    let max_h = (1..=rank)
        .find(|&t| kernels[t].len() == gen_dim)
        .unwrap_or(rank);
    let mut chains: Vec<Vec<Vec<Q>>> = Vec::new();
    for t in (1..=max_h).rev() {
        // Floor: K_{t-1} together with the height-t members of longer chains.
        let mut floor: Vec<Vec<Q>> = kernels[t - 1].clone();
        for chain in &chains {
            if chain.len() >= t {
                floor.push(chain[t - 1].clone());
            }
        }
        let mut new_tops: Vec<Vec<Q>> = Vec::new();
        for cand in &kernels[t] {
            let mut probe = floor.clone();
            probe.extend(new_tops.iter().cloned());
            let before = span_basis(&probe, rank).len();
            probe.push(cand.clone());
            if span_basis(&probe, rank).len() > before {
                new_tops.push(cand.clone());
            }
        }
        for top in new_tops {
            let mut desc = vec![top.clone()];
            let mut cur = top;
            for _ in 1..t {
                cur = n_mat.mul_vec(&cur);
                desc.push(cur.clone());
            }
            desc.reverse();
            chains.push(desc);
        }
    }
    chains.sort_by(|a, b| {
        b.len()
            .cmp(&a.len())
            .then_with(|| format!("{a:?}").cmp(&format!("{b:?}")))
    });
    Ok(chains)
}

/// The formal fibered model: monodromy invariants plus the chain basis that
/// the gamma-tilde algebra is written in.
pub struct FiberedModel {
    pub data: MonodromyData,
    pub invariants: JordanInvariants,
    pub dims: MonodromyDims,
}

impl FiberedModel {
    pub fn new(data: MonodromyData) -> Result<FiberedModel> {
        let (invariants, dims) = analyze_monodromy(&data)?;
        Ok(FiberedModel {
            data,
            invariants,
            dims,
        })
    }

    /// Replace the computed chains by explicitly supplied ones (validated:
    /// genuine Jordan chains, independent, spanning the same subspace).
    pub fn with_chains(mut self, chains: Vec<Vec<Vec<Q>>>) -> Result<FiberedModel> {
        let n_mat = n_matrix(&self.data);
        let mut total = 0usize;
        for (c, chain) in chains.iter().enumerate() {
            for (j, v) in chain.iter().enumerate() {
                if v.len() != self.data.rank {
                    return Err(Error::Input(format!(
                        "chain {c} vector {j} has wrong length"
                    )));
                }
                let nv = n_mat.mul_vec(v);
                let expected = if j == 0 {
                    vec![Q::zero(); self.data.rank]
                } else {
                    chain[j - 1].clone()
                };
                if nv != expected {
                    return Err(Error::Input(format!(
                        "chain {c} is not a Jordan chain at index {j}"
                    )));
                }
            }
            total += chain.len();
        }
        let flat: Vec<Vec<Q>> = chains.iter().flatten().cloned().collect();
        if span_basis(&flat, self.data.rank).len() != total {
            return Err(Error::Input("supplied chain vectors are dependent".into()));
        }
        let computed: usize = self.invariants.chains.iter().map(|c| c.len()).sum();
        if total != computed {
            return Err(Error::Input(format!(
                "supplied chains span dimension {total}, expected {computed}"
            )));
        }
        self.invariants.chains = chains;
        Ok(self)
    }

    pub fn chain(&self, c: usize) -> Result<&Vec<Vec<Q>>> {
        self.invariants
            .chains
            .get(c)
            .ok_or_else(|| Error::Input(format!("no Jordan chain with index {c}")))
    }

    /// gamma-tilde as a fibered one-form.
    pub fn gamma_tilde(&self, c: usize, j: usize) -> Result<FiberedForm> {
        let chain = self.chain(c)?;
        if j >= chain.len() {
            return Err(Error::Input(format!(
                "chain {c} has length {}, no index {j}",
                chain.len()
            )));
        }
        Ok(FiberedForm::term(
            BaseMono::One,
            FiberClass::Gamma(c, j),
            Poly::one(),
        ))
    }

    /// Expansion of gamma-tilde_{c,j} over the constant chain vectors:
    /// sum_i f_i(phi) gamma_{c, j-i}; used by wedge and the d oracle.
    pub fn gamma_tilde_expansion(&self, c: usize, j: usize) -> Result<Vec<(Poly, Vec<Q>)>> {
        let chain = self.chain(c)?;
        if j >= chain.len() {
            return Err(Error::Input("gamma index out of range".into()));
        }
        Ok((0..=j)
            .map(|i| (f_poly(i), chain[j - i].clone()))
            .collect())
    }

    /// Intersection polynomial of two gamma-tilde classes on the fiber.
    fn gamma_pairing(&self, c1: usize, j1: usize, c2: usize, j2: usize) -> Result<Poly> {
        let e1 = self.gamma_tilde_expansion(c1, j1)?;
        let e2 = self.gamma_tilde_expansion(c2, j2)?;
        let mut out = Poly::zero();
        for (p1, v1) in &e1 {
            for (p2, v2) in &e2 {
                let pairing = self.data.pairing(v1, v2);
                if !pairing.is_zero() {
                    out = out.add(&p1.mul(p2).scale(&pairing));
                }
            }
        }
        Ok(out)
    }

    fn fiber_wedge(&self, f1: &FiberClass, f2: &FiberClass) -> Result<Option<(FiberClass, Poly)>> {
        use FiberClass::*;
        Ok(match (f1, f2) {
            (One, x) | (x, One) => Some((x.clone(), Poly::one())),
            (Gamma(c1, j1), Gamma(c2, j2)) => {
                let p = self.gamma_pairing(*c1, *j1, *c2, *j2)?;
                if p.is_zero() {
                    None
                } else {
                    Some((OmegaSigma, p))
                }
            }
            _ => None,
        })
    }

    /// Graded wedge; fiber two-classes are reduced to polynomial multiples
    /// of the area class via the intersection pairing.
    pub fn wedge(&self, a: &FiberedForm, b: &FiberedForm) -> Result<FiberedForm> {
        let mut out = FiberedForm::zero();
        for ((b1, f1), p1) in a.terms() {
            for ((b2, f2), p2) in b.terms() {
                let Some((base, base_sign)) = b1.wedge(*b2) else {
                    continue;
                };
                let Some((fiber, fp)) = self.fiber_wedge(f1, f2)? else {
                    continue;
                };
                // The fiber part of the first factor passes the base part of
                // the second: sign (-1)^{|f1| |b2|}.
                let mut sign = base_sign;
                if f1.degree() * b2.degree() % 2 == 1 {
                    sign = -sign;
                }
                let poly = p1.mul(p2).mul(&fp).scale(&Q::from_integer(sign.into()));
                out.add_term(base, fiber, poly);
            }
        }
        Ok(out)
    }

    /// The exterior derivative on principal parts: phi-differentiation of
    /// coefficients against dphi, plus
    /// d gamma_tilde_j = dphi ^ sum_{i>=1} ((-1)^{i+1}/i) gamma_tilde_{j-i};
    /// dt, dphi and the area class are closed.
    pub fn d(&self, a: &FiberedForm) -> Result<FiberedForm> {
        let mut out = FiberedForm::zero();
        for ((base, fiber), poly) in a.terms() {
            let dp = poly.derivative();
            if !dp.is_zero() {
                // dphi lands left of the base monomial.
                if let Some((b2, sign)) = BaseMono::Dphi.wedge(*base) {
                    out.add_term(b2, fiber.clone(), dp.scale(&Q::from_integer(sign.into())));
                }
            }
            if let FiberClass::Gamma(c, j) = fiber {
                // d(base ^ gt) = (-1)^{|base|} base ^ dphi ^ (...). Absorb
                // dphi into the base monomial with its own sign.
                if let Some((b2, sign0)) = base.wedge(BaseMono::Dphi) {
                    let base_sign = if base.degree() % 2 == 1 { -1i64 } else { 1 };
                    for i in 1..=*j {
                        let coeff = Q::new(
                            (if i % 2 == 1 { 1i64 } else { -1 }).into(),
                            (i as i64).into(),
                        );
                        out.add_term(
                            b2,
                            FiberClass::Gamma(*c, j - i),
                            poly.scale(&(coeff * Q::from_integer((sign0 * base_sign).into()))),
                        );
                    }
                }
            }
        }
        Ok(out)
    }

    /// Total integration: the dt^dphi^area coefficient integrated over the
    /// unit phi-interval, with unit fiber area.
    pub fn total_integrate(&self, a: &FiberedForm) -> Result<Q> {
        if a.is_zero() {
            return Ok(Q::zero());
        }
        if a.degrees() != vec![4] {
            return Err(Error::Precondition(format!(
                "total integration needs top degree 4, got degrees {:?}",
                a.degrees()
            )));
        }
        let mut acc = Q::zero();
        for ((base, fiber), poly) in a.terms() {
            if *base == BaseMono::DtDphi && *fiber == FiberClass::OmegaSigma {
                acc += poly.integral_01();
            }
        }
        Ok(acc)
    }

    /// The closed H^1 basis used to read off third-cohomology coordinates:
    /// dt, dphi and the chain bottoms.
    pub fn dual_basis(&self) -> Result<Vec<(String, FiberedForm)>> {
        let mut out = vec![
            (
                "dt".to_string(),
                FiberedForm::term(BaseMono::Dt, FiberClass::One, Poly::one()),
            ),
            (
                "dphi".to_string(),
                FiberedForm::term(BaseMono::Dphi, FiberClass::One, Poly::one()),
            ),
        ];
        for c in 0..self.invariants.chains.len() {
            out.push((format!("g{c}:0"), self.gamma_tilde(c, 0)?));
        }
        Ok(out)
    }

    /// Coordinates of a 3-form against the dual H^1 basis.
    pub fn h3_coords(&self, a: &FiberedForm) -> Result<Vec<Q>> {
        self.dual_basis()?
            .iter()
            .map(|(_, h)| self.total_integrate(&self.wedge(a, h)?))
            .collect()
    }
}

/// A middle-cohomology generator given by its principal part and the
/// principal part of its dp_minus value.
#[derive(Clone, Debug)]
pub struct Ph2Generator {
    pub name: String,
    pub principal: FiberedForm,
    pub dminus: FiberedForm,
}

/// Pairing of two generators: dp_minus B ^ B' + B ^ dp_minus B', a fibered
/// three-form. (The omega-division term of the full pairing operator is
/// exact on a compact four-manifold and contributes nothing here.)
pub fn pair_generators(
    fm: &FiberedModel,
    a: &Ph2Generator,
    b: &Ph2Generator,
) -> Result<FiberedForm> {
    let left = fm.wedge(&a.dminus, &b.principal)?;
    let right = fm.wedge(&a.principal, &b.dminus)?;
    Ok(left.add(&right))
}

#[derive(Clone, Debug)]
pub struct PairingRecord {
    pub left: String,
    pub right: String,
    pub coords: Vec<Q>,
}

#[derive(Clone, Debug)]
pub struct PairingReport {
    pub dual_labels: Vec<String>,
    pub records: Vec<PairingRecord>,
    pub image_dim: usize,
}

/// Evaluate all unordered pairs of generators, identify each product in the
/// dual H^1 coordinates, and return the span dimension.
pub fn pairing_image_dim(fm: &FiberedModel, gens: &[Ph2Generator]) -> Result<PairingReport> {
    let duals = fm.dual_basis()?;
    let dual_labels: Vec<String> = duals.iter().map(|(l, _)| l.clone()).collect();
    let mut records = Vec::new();
    let mut vectors = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i..] {
            let product = pair_generators(fm, a, b)?;
            let coords = fm.h3_coords(&product)?;
            vectors.push(coords.clone());
            records.push(PairingRecord {
                left: a.name.clone(),
                right: b.name.clone(),
                coords,
            });
        }
    }
    let image_dim = span_basis(&vectors, dual_labels.len()).len();
    Ok(PairingReport {
        dual_labels,
        records,
        image_dim,
    })
}

/// On-disk monodromy description.
#[derive(Debug, Deserialize)]
pub struct MonodromyFile {
    pub rank: usize,
    pub tau_star: Vec<Vec<i64>>,
    pub intersection: Vec<Vec<i64>>,
    #[serde(default)]
    pub chains: Option<Vec<Vec<Vec<serde_json::Value>>>>,
    #[serde(default)]
    pub ph2_generators: Option<Vec<Ph2GeneratorFile>>,
}

#[derive(Debug, Deserialize)]
pub struct Ph2GeneratorFile {
    #[serde(default)]
    pub name: Option<String>,
    pub principal: Vec<FiberedTermFile>,
    #[serde(default)]
    pub dminus: Vec<FiberedTermFile>,
}

/// One term: [poly-coefficients, base, fiber], e.g. [["1"], "dt", "g0:1"].
pub type FiberedTermFile = (Vec<serde_json::Value>, String, String);

fn int_matrix(rows: &[Vec<i64>], rank: usize, what: &str) -> Result<Mat> {
    if rows.len() != rank || rows.iter().any(|r| r.len() != rank) {
        return Err(Error::Parse(format!("{what} must be {rank}x{rank}")));
    }
    let mut m = Mat::zero(rank, rank);
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m[(i, j)] = Q::from_integer((*v).into());
        }
    }
    Ok(m)
}

fn parse_fiber_class(s: &str) -> Result<FiberClass> {
    match s {
        "1" => Ok(FiberClass::One),
        "omega" => Ok(FiberClass::OmegaSigma),
        other => {
            let body = other
                .strip_prefix('g')
                .ok_or_else(|| Error::Parse(format!("bad fiber class '{other}'")))?;
            let (c, j) = body
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("bad fiber class '{other}'")))?;
            Ok(FiberClass::Gamma(
                c.parse()
                    .map_err(|_| Error::Parse(format!("bad chain index in '{other}'")))?,
                j.parse()
                    .map_err(|_| Error::Parse(format!("bad gamma index in '{other}'")))?,
            ))
        }
    }
}

fn parse_base(s: &str) -> Result<BaseMono> {
    match s {
        "1" => Ok(BaseMono::One),
        "dt" => Ok(BaseMono::Dt),
        "dphi" => Ok(BaseMono::Dphi),
        "dt^dphi" => Ok(BaseMono::DtDphi),
        other => Err(Error::Parse(format!("bad base monomial '{other}'"))),
    }
}

pub fn parse_fibered_terms(terms: &[FiberedTermFile]) -> Result<FiberedForm> {
    let mut out = FiberedForm::zero();
    for (poly, base, fiber) in terms {
        let coeffs: Vec<Q> = poly
            .iter()
            .map(crate::model::parse_rational)
            .collect::<Result<_>>()?;
        out.add_term(
            parse_base(base)?,
            parse_fiber_class(fiber)?,
            Poly(coeffs).trim(),
        );
    }
    Ok(out)
}

/// Parsed and validated fibered model plus any generator data in the file.
pub struct MonodromyInput {
    pub model: FiberedModel,
    pub generators: Vec<Ph2Generator>,
}

pub fn load_monodromy(text: &str) -> Result<MonodromyInput> {
    let file: MonodromyFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("monodromy file: {e}")))?;
    let tau = int_matrix(&file.tau_star, file.rank, "tau_star")?;
    let inter = int_matrix(&file.intersection, file.rank, "intersection")?;
    let data = MonodromyData::new(file.rank, tau, inter)?;
    let mut model = FiberedModel::new(data)?;
    if let Some(chain_rows) = &file.chains {
        let chains: Vec<Vec<Vec<Q>>> = chain_rows
            .iter()
            .map(|chain| {
                chain
                    .iter()
                    .map(|v| v.iter().map(crate::model::parse_rational).collect())
                    .collect::<Result<Vec<Vec<Q>>>>()
            })
            .collect::<Result<_>>()?;
        model = model.with_chains(chains)?;
    }
    let mut generators = Vec::new();
    if let Some(gens) = &file.ph2_generators {
        for (i, g) in gens.iter().enumerate() {
            let name = g.name.clone().unwrap_or_else(|| format!("B{i}"));
            let principal = parse_fibered_terms(&g.principal)?;
            let dminus = parse_fibered_terms(&g.dminus)?;
            for ((_, fiber), _) in principal.terms().chain(dminus.terms()) {
                if let FiberClass::Gamma(c, j) = fiber {
                    let chain = model.chain(*c)?;
                    if *j >= chain.len() {
                        return Err(Error::Input(format!(
                            "generator '{name}' references g{c}:{j} beyond chain length {}",
                            chain.len()
                        )));
                    }
                }
            }
            generators.push(Ph2Generator {
                name,
                principal,
                dminus,
            });
        }
    }
    Ok(MonodromyInput { model, generators })
}

#[cfg(test)]
pub mod test_fixtures {
    pub fn kt_mono_text() -> &'static str {
        r#"{
            "rank": 2,
            "tau_star": [[1, 1], [0, 1]],
            "intersection": [[0, 1], [-1, 0]],
            "chains": [[[1, 0], [0, 1]]],
            "ph2_generators": [
                {"name": "dt^dphi-omega",
                 "principal": [[["1"], "dt^dphi", "1"], [["-1"], "1", "omega"]]},
                {"name": "dt^g0",
                 "principal": [[["1"], "dt", "g0:0"]]},
                {"name": "dphi^g1",
                 "principal": [[["1"], "dphi", "g0:1"]]},
                {"name": "dt^g1",
                 "principal": [[["1"], "dt", "g0:1"]],
                 "dminus": [[["-1"], "1", "g0:0"]]}
            ]
        }"#
    }

    pub fn genus2_mono_text() -> &'static str {
        r#"{
            "rank": 4,
            "tau_star": [
                [1, 0, 0, 1],
                [0, 1, 0, 0],
                [0, 1, 1, 0],
                [0, 1, 1, 1]
            ],
            "intersection": [
                [0, 1, 0, 0],
                [-1, 0, 0, 0],
                [0, 0, 0, 1],
                [0, 0, -1, 0]
            ],
            "chains": [[
                [1, 0, 0, 0],
                [0, 0, 0, 1],
                [0, 0, 1, 0],
                [0, 1, -1, 0]
            ]],
            "ph2_generators": [
                {"name": "dt^dphi-omega",
                 "principal": [[["1"], "dt^dphi", "1"], [["-1"], "1", "omega"]]},
                {"name": "dt^g0",
                 "principal": [[["1"], "dt", "g0:0"]]},
                {"name": "dphi^g3",
                 "principal": [[["1"], "dphi", "g0:3"]]},
                {"name": "dt^g1",
                 "principal": [[["1"], "dt", "g0:1"]],
                 "dminus": [[["-1"], "1", "g0:0"]]}
            ]
        }"#
    }
}

#[cfg(test)]
mod tests {
    use super::test_fixtures::*;
    use super::*;

    fn qi(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn kt_data() -> MonodromyData {
        let mut tau = Mat::identity(2);
        tau[(0, 1)] = qi(1);
        let mut j = Mat::zero(2, 2);
        j[(0, 1)] = qi(1);
        j[(1, 0)] = qi(-1);
        MonodromyData::new(2, tau, j).unwrap()
    }

    #[test]
    fn f_polys_match_known_values() {
        assert_eq!(f_poly(0), Poly::one());
        assert_eq!(f_poly(1), Poly(vec![qi(0), qi(1)]));
        assert_eq!(
            f_poly(2),
            Poly(vec![
                qi(0),
                Q::new((-1).into(), 2.into()),
                Q::new(1.into(), 2.into())
            ])
        );
        assert_eq!(
            f_poly(3),
            Poly(vec![
                qi(0),
                Q::new(2.into(), 6.into()),
                Q::new((-3).into(), 6.into()),
                Q::new(1.into(), 6.into())
            ])
        );
    }

    #[test]
    fn f_poly_identities() {
        for i in 1..=8usize {
            let fi = f_poly(i);
            let lhs = fi.sub(&fi.shift_down());
            let rhs = f_poly(i - 1).shift_down();
            assert_eq!(lhs, rhs, "difference identity at i={i}");
            let mut rhs2 = Poly::zero();
            for m in 1..=i {
                let sign = if m % 2 == 1 { 1i64 } else { -1 };
                rhs2 = rhs2.add(&f_poly(i - m).scale(&Q::new(sign.into(), (m as i64).into())));
            }
            assert_eq!(fi.derivative(), rhs2, "derivative identity at i={i}");
            assert!(fi.0[0].is_zero(), "f_{i} has a constant term");
        }
    }

    #[test]
    fn kt_monodromy_invariants() {
        let (inv, dims) = analyze_monodromy(&kt_data()).unwrap();
        assert_eq!((inv.p, inv.q), (0, 1));
        assert_eq!(dims.betti, vec![1, 3, 4, 3, 1]);
        assert_eq!(dims.ph2, 4);
        assert_eq!(dims.ph1, 3);
        assert_eq!(inv.chains.len(), 1);
        assert_eq!(inv.chains[0].len(), 2);
    }

    #[test]
    fn identity_monodromy_genus_g() {
        for g in 1..=2usize {
            let rank = 2 * g;
            let tau = Mat::identity(rank);
            let mut j = Mat::zero(rank, rank);
            for i in 0..g {
                j[(2 * i, 2 * i + 1)] = qi(1);
                j[(2 * i + 1, 2 * i)] = qi(-1);
            }
            let data = MonodromyData::new(rank, tau, j).unwrap();
            let (inv, dims) = analyze_monodromy(&data).unwrap();
            assert_eq!((inv.p, inv.q), (g, g));
            assert_eq!(dims.ph2, 4 * g + 1);
        }
    }

    #[test]
    fn pairing_not_preserved_rejected() {
        let mut tau = Mat::identity(2);
        tau[(0, 0)] = qi(2);
        let mut j = Mat::zero(2, 2);
        j[(0, 1)] = qi(1);
        j[(1, 0)] = qi(-1);
        assert!(MonodromyData::new(2, tau, j).is_err());
    }

    #[test]
    fn fixed_vectors_orthogonal_to_moved_ones() {
        // Omega(tau v - v, u) = 0 for u in ker(tau - 1).
        let data = kt_data();
        let n = n_matrix(&data);
        for u in n.nullspace() {
            for seed in 0..5i64 {
                let v = vec![qi(seed), qi(seed * 3 - 1)];
                let nv = n.mul_vec(&v);
                assert!(data.pairing(&nv, &u).is_zero());
            }
        }
    }

    #[test]
    fn d_gamma_rules() {
        let fm = FiberedModel::new(kt_data()).unwrap();
        let g0 = fm.gamma_tilde(0, 0).unwrap();
        assert!(fm.d(&g0).unwrap().is_zero());
        let g1 = fm.gamma_tilde(0, 1).unwrap();
        let dg1 = fm.d(&g1).unwrap();
        let expected = FiberedForm::term(BaseMono::Dphi, FiberClass::Gamma(0, 0), Poly::one());
        assert_eq!(dg1, expected);
    }

    #[test]
    fn d_gamma_long_chain_rule_matches_derivative_oracle() {
        // A formal nilpotent chain of length 9 exercises j <= 8: the chain
        // rule expanded over the gamma basis must equal differentiating the
        // f_i coefficients of the expansion.
        let rank = 9usize;
        let mut n = Mat::zero(rank, rank);
        for i in 0..rank - 1 {
            n[(i, i + 1)] = qi(1);
        }
        let chains = jordan_chains(&n, rank).unwrap();
        assert_eq!(chains.len(), 1);
        assert_eq!(chains[0].len(), 9);
        for j in 1..=8usize {
            let mut rule: Vec<Poly> = vec![Poly::zero(); rank];
            for i in 1..=j {
                let c = Q::new(
                    (if i % 2 == 1 { 1i64 } else { -1 }).into(),
                    (i as i64).into(),
                );
                for a in 0..=(j - i) {
                    rule[j - i - a] = rule[j - i - a].add(&f_poly(a).scale(&c));
                }
            }
            let mut diff: Vec<Poly> = vec![Poly::zero(); rank];
            for a in 0..=j {
                diff[j - a] = diff[j - a].add(&f_poly(a).derivative());
            }
            assert_eq!(rule, diff, "chain rule disagrees with derivative at j={j}");
        }
    }

    #[test]
    fn d_squared_zero_on_fibered_algebra() {
        let fm = FiberedModel::new(kt_data()).unwrap();
        let g1 = fm.gamma_tilde(0, 1).unwrap();
        let phi2 = Poly(vec![qi(0), qi(0), qi(1)]);
        let mix = FiberedForm::term(BaseMono::Dt, FiberClass::Gamma(0, 1), phi2.clone())
            .add(&FiberedForm::term(
                BaseMono::One,
                FiberClass::Gamma(0, 0),
                phi2,
            ))
            .add(&g1);
        let dd = fm.d(&fm.d(&mix).unwrap()).unwrap();
        assert!(dd.is_zero(), "d^2 = {dd:?}");
    }

    #[test]
    fn kt_fiber_pairing_and_integration() {
        let fm = FiberedModel::new(kt_data()).unwrap();
        let g0 = fm.gamma_tilde(0, 0).unwrap();
        let g1 = fm.gamma_tilde(0, 1).unwrap();
        let w = fm.wedge(&g0, &g1).unwrap();
        assert_eq!(
            w,
            FiberedForm::term(BaseMono::One, FiberClass::OmegaSigma, Poly::one())
        );
        let top = FiberedForm::term(BaseMono::DtDphi, FiberClass::OmegaSigma, Poly::one());
        assert_eq!(fm.total_integrate(&top).unwrap(), qi(1));
        assert!(fm.total_integrate(&g0).is_err());
    }

    #[test]
    fn kt_pairing_image() {
        let input = load_monodromy(kt_mono_text()).unwrap();
        let report = pairing_image_dim(&input.model, &input.generators).unwrap();
        assert_eq!(report.image_dim, 2);
        let nonzero: Vec<&PairingRecord> = report
            .records
            .iter()
            .filter(|r| r.coords.iter().any(|c| !c.is_zero()))
            .collect();
        assert_eq!(nonzero.len(), 2, "{:?}", report.records);
    }

    #[test]
    fn genus2_pairing_image() {
        let input = load_monodromy(genus2_mono_text()).unwrap();
        assert_eq!(input.model.invariants.p, 0);
        assert_eq!(input.model.invariants.q, 1);
        assert_eq!(input.model.dims.betti, vec![1, 3, 4, 3, 1]);
        assert_eq!(input.model.dims.ph2, 4);
        let report = pairing_image_dim(&input.model, &input.generators).unwrap();
        assert_eq!(report.image_dim, 1);
        // The image is the dphi-class: only integration against dt is hit.
        for rec in &report.records {
            for (label, c) in report.dual_labels.iter().zip(&rec.coords) {
                if label != "dt" {
                    assert!(c.is_zero(), "{} x {} hits {label}", rec.left, rec.right);
                }
            }
        }
    }

    #[test]
    fn genus2_fiber_integrals() {
        let input = load_monodromy(genus2_mono_text()).unwrap();
        let fm = &input.model;
        let g0 = fm.gamma_tilde(0, 0).unwrap();
        let g1 = fm.gamma_tilde(0, 1).unwrap();
        assert!(fm.wedge(&g0, &g1).unwrap().is_zero());
        let g3 = fm.gamma_tilde(0, 3).unwrap();
        let w = fm.wedge(&g0, &g3).unwrap();
        assert_eq!(
            w,
            FiberedForm::term(BaseMono::One, FiberClass::OmegaSigma, Poly::one())
        );
    }

    #[test]
    fn trivial_generators_give_zero_image() {
        let fm = FiberedModel::new(kt_data()).unwrap();
        let gens = vec![Ph2Generator {
            name: "closed".into(),
            principal: FiberedForm::term(BaseMono::Dt, FiberClass::Gamma(0, 0), Poly::one()),
            dminus: FiberedForm::zero(),
        }];
        let rep = pairing_image_dim(&fm, &gens).unwrap();
        assert_eq!(rep.image_dim, 0);
    }

    #[test]
    fn mixed_jordan_structure() {
        // A twist on one handle and the identity on the other: one chain of
        // length two plus two fixed directions.
        let mut tau = Mat::identity(4);
        tau[(0, 1)] = qi(1);
        let mut j = Mat::zero(4, 4);
        j[(0, 1)] = qi(1);
        j[(1, 0)] = qi(-1);
        j[(2, 3)] = qi(1);
        j[(3, 2)] = qi(-1);
        let data = MonodromyData::new(4, tau, j).unwrap();
        let (inv, dims) = analyze_monodromy(&data).unwrap();
        assert_eq!((inv.q_plus_p, inv.q_minus_p), (3, 1));
        assert_eq!((inv.p, inv.q), (1, 2));
        let mut lens: Vec<usize> = inv.chains.iter().map(|c| c.len()).collect();
        lens.sort_unstable();
        assert_eq!(lens, vec![1, 1, 2]);
        assert_eq!(dims.ph2, 3 * 2 + 1 + 1);
        // Every chain really is a chain.
        let n = n_matrix(&data);
        for chain in &inv.chains {
            assert!(n.mul_vec(&chain[0]).iter().all(|x| x.is_zero()));
            for w in chain.windows(2) {
                assert_eq!(n.mul_vec(&w[1]), w[0]);
            }
        }
    }

    #[test]
    fn bad_chain_and_bad_reference_rejected() {
        // A vector list that is not a Jordan chain.
        let bad_chain = r#"{
            "rank": 2,
            "tau_star": [[1, 1], [0, 1]],
            "intersection": [[0, 1], [-1, 0]],
            "chains": [[[0, 1], [1, 0]]]
        }"#;
        assert!(load_monodromy(bad_chain).is_err());
        // A generator referencing a gamma index beyond the chain length.
        let bad_ref = r#"{
            "rank": 2,
            "tau_star": [[1, 1], [0, 1]],
            "intersection": [[0, 1], [-1, 0]],
            "chains": [[[1, 0], [0, 1]]],
            "ph2_generators": [
                {"name": "broken", "principal": [[["1"], "dt", "g0:5"]]}
            ]
        }"#;
        assert!(load_monodromy(bad_ref).is_err());
    }

    #[test]
    fn genus2_computed_chain_matches_supplied_span() {
        // Without explicit chains the Jordan algorithm must find one chain
        // of length four spanning the same generalized eigenspace.
        let input: MonodromyFile = serde_json::from_str(genus2_mono_text()).unwrap();
        let tau = int_matrix(&input.tau_star, 4, "tau").unwrap();
        let inter = int_matrix(&input.intersection, 4, "intersection").unwrap();
        let data = MonodromyData::new(4, tau, inter).unwrap();
        let fm = FiberedModel::new(data).unwrap();
        assert_eq!(fm.invariants.chains.len(), 1);
        assert_eq!(fm.invariants.chains[0].len(), 4);
    }
}
