//! Exact exterior algebra over a finite set of degree-one generators.
//!
//! Basis monomials are strictly increasing index lists; every sign in the
//! library comes from sorting permutation parity against that canonical
//! order, so there is a single representation and no sign ambiguity.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Q;

/// Strictly increasing sequence of generator indices in `1..=dim`.
/// The empty sequence is the scalar monomial `1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub Vec<u8>);

impl MultiIndex {
    pub fn scalar() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, i: u8) -> bool {
        self.0.binary_search(&i).is_ok()
    }
}

/// Graded exterior-algebra element with exact rational coefficients.
/// May be inhomogeneous; operators that need homogeneity check for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    dim: usize,
    terms: BTreeMap<MultiIndex, Q>,
}

impl Form {
    pub fn zero(dim: usize) -> Self {
        Form {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(dim: usize, c: Q) -> Self {
        let mut f = Form::zero(dim);
        f.add_term(MultiIndex::scalar(), c);
        f
    }

    pub fn one(dim: usize) -> Self {
        Form::scalar(dim, Q::from_integer(1.into()))
    }

    /// Single generator `e_i` (1-based).
    pub fn generator(dim: usize, i: u8) -> Result<Self> {
        if i == 0 || i as usize > dim {
            return Err(Error::IndexOutOfRange(i as usize, dim));
        }
        let mut f = Form::zero(dim);
        f.add_term(MultiIndex(vec![i]), Q::from_integer(1.into()));
        Ok(f)
    }

    /// Monomial from possibly unsorted indices; canonicalizes with sign.
    /// Repeated indices yield zero.
    pub fn monomial(dim: usize, indices: &[u8], coeff: Q) -> Result<Self> {
        for &i in indices {
            if i == 0 || i as usize > dim {
                return Err(Error::IndexOutOfRange(i as usize, dim));
            }
        }
        let mut f = Form::zero(dim);
        if let Some((sorted, sign)) = sort_with_parity(indices) {
            let c = if sign { -coeff } else { coeff };
            f.add_term(MultiIndex(sorted), c);
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, idx: &MultiIndex) -> Q {
        self.terms.get(idx).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, idx: MultiIndex, c: Q) {
        if c.is_zero() || idx.degree() > self.dim {
            return;
        }
        let entry = self.terms.entry(idx);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (idx, c) in other.terms() {
            out.add_term(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        self.scale(&-Q::from_integer(1.into()))
    }

    pub fn scale(&self, c: &Q) -> Form {
        let mut out = Form::zero(self.dim);
        if c.is_zero() {
            return out;
        }
        for (idx, v) in self.terms() {
            out.terms.insert(idx.clone(), c * v);
        }
        out
    }

    /// Degrees present, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self.terms.keys().map(|k| k.degree()).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// Degree of a homogeneous form; `None` for 0 (any degree) if `self` is zero.
    pub fn homogeneous_degree(&self) -> Result<Option<usize>> {
        let ds = self.degrees();
        match ds.len() {
            0 => Ok(None),
            1 => Ok(Some(ds[0])),
            _ => Err(Error::Inhomogeneous(ds)),
        }
    }

    pub fn degree_component(&self, k: usize) -> Form {
        let mut out = Form::zero(self.dim);
        for (idx, c) in self.terms() {
            if idx.degree() == k {
                out.terms.insert(idx.clone(), c.clone());
            }
        }
        out
    }

    /// Graded-anticommutative product. Terms with repeated indices vanish;
    /// the sign is the parity of the merge permutation of the multi-indices.
    pub fn wedge(&self, other: &Form) -> Result<Form> {
        self.check_dim(other)?;
        let mut out = Form::zero(self.dim);
        for (ia, ca) in self.terms() {
            for (ib, cb) in other.terms() {
                if ia.degree() + ib.degree() > self.dim {
                    continue;
                }
                if let Some((merged, sign)) = merge_with_parity(&ia.0, &ib.0) {
                    let mut c = ca * cb;
                    if sign {
                        c = -c;
                    }
                    out.add_term(MultiIndex(merged), c);
                }
            }
        }
        Ok(out)
    }

    /// Interior product against the i-th coordinate vector: a graded
    /// derivation of degree -1 with iota_i(e_i) = 1.
    pub fn contract(&self, i: u8) -> Result<Form> {
        if i == 0 || i as usize > self.dim {
            return Err(Error::IndexOutOfRange(i as usize, self.dim));
        }
        let mut out = Form::zero(self.dim);
        for (idx, c) in self.terms() {
            if let Ok(pos) = idx.0.binary_search(&i) {
                let mut rest = idx.0.clone();
                rest.remove(pos);
                let mut coeff = c.clone();
                if pos % 2 == 1 {
                    coeff = -coeff;
                }
                out.add_term(MultiIndex(rest), coeff);
            }
        }
        Ok(out)
    }

    /// Wedge power `self^k`.
    pub fn pow(&self, k: usize) -> Result<Form> {
        let mut out = Form::one(self.dim);
        for _ in 0..k {
            out = out.wedge(self)?;
        }
        Ok(out)
    }

    /// Coordinates with respect to a basis of degree-`k` monomials.
    pub fn coords(&self, basis: &[MultiIndex]) -> Vec<Q> {
        basis.iter().map(|idx| self.coeff(idx)).collect()
    }

    pub fn from_coords(dim: usize, basis: &[MultiIndex], coords: &[Q]) -> Form {
        let mut f = Form::zero(dim);
        for (idx, c) in basis.iter().zip(coords) {
            f.add_term(idx.clone(), c.clone());
        }
        f
    }

    fn check_dim(&self, other: &Form) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, c) in self.terms() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            let is_one = mag == Q::from_integer(1.into());
            if idx.degree() == 0 {
                write!(f, "{}", mag)?;
            } else if is_one {
                write!(f, "{}", monomial_name(idx))?;
            } else {
                write!(f, "{}*{}", mag, monomial_name(idx))?;
            }
        }
        Ok(())
    }
}

fn monomial_name(idx: &MultiIndex) -> String {
    let mut s = String::from("e");
    for i in &idx.0 {
        if *i < 10 {
            s.push_str(&i.to_string());
        } else {
            s.push('_');
            s.push_str(&i.to_string());
        }
    }
    s
}

/// Sort indices, tracking permutation parity. `None` if an index repeats.
fn sort_with_parity(indices: &[u8]) -> Option<(Vec<u8>, bool)> {
    let mut v = indices.to_vec();
    let mut swaps = 0usize;
    // Insertion sort keeps the parity count exact.
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            swaps += 1;
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((v, swaps % 2 == 1))
}

/// Merge two strictly increasing index lists, counting the transpositions
/// needed to interleave them. `None` on a common index.
fn merge_with_parity(a: &[u8], b: &[u8]) -> Option<(Vec<u8>, bool)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut swaps = 0usize;
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            // b[j] jumps over the remaining a-elements.
            swaps += a.len() - i;
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, swaps % 2 == 1))
}

/// All degree-`k` basis monomials in lexicographic order.
pub fn monomial_basis(dim: usize, k: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    if k > dim {
        return out;
    }
    let mut current: Vec<u8> = (1..=k as u8).collect();
    loop {
        out.push(MultiIndex(current.clone()));
        // Next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < (dim - (k - 1 - i)) as u8 {
                current[i] += 1;
                for j in i + 1..k {
                    current[j] = current[j - 1] + 1;
                }
                break;
            }
        }
        if k == 0 {
            return out;
        }
    }
}

/// Deterministic pseudo-random homogeneous form: numerators bounded by
/// `bound`, small denominators, reproducible from the seed.
pub fn random_form(seed: u64, dim: usize, degree: usize, bound: i64) -> Result<Form> {
    if degree > dim {
        return Err(Error::Precondition(format!(
            "degree {degree} exceeds ambient dimension {dim}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = Form::zero(dim);
    for idx in monomial_basis(dim, degree) {
        let num: i64 = rng.random_range(-bound..=bound);
        let den: i64 = rng.random_range(1..=2);
        f.add_term(idx, Q::new(num.into(), den.into()));
    }
    Ok(f)
}
