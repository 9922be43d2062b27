//! Finite cochain models of closed symplectic manifolds: invariant forms on
//! nilmanifolds, solvmanifolds and tori, described by structure constants.
//!
//! The invariant complex is finite-dimensional and is taken as the model's
//! cohomology (for the bundled nilmanifolds this agrees with de Rham by
//! Nomizu-type results; the library treats that as a modeling assumption).

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::exterior::{Form, MultiIndex};
use crate::linalg::{quotient_representatives, span_basis, Mat, Q, Solver};
use crate::sl2::SymplecticStructure;

/// Parsed, not yet validated, model description.
#[derive(Clone, Debug, Deserialize)]
pub struct ModelSpec {
    pub name: String,
    pub dimension: usize,
    pub generators: Vec<String>,
    #[serde(default)]
    pub d: BTreeMap<String, TermList>,
    pub omega: TermList,
}

pub type TermList = Vec<(serde_json::Value, Vec<String>)>;

/// A validated model: d^2 = 0, d omega = 0, omega nondegenerate.
pub struct Model {
    name: String,
    dim: usize,
    generator_names: Vec<String>,
    d_rules: Vec<Form>,
    symplectic: SymplecticStructure,
    /// d matrices per degree k (map to degree k+1), in monomial bases.
    d_mats: Vec<Mat>,
}

/// Representatives of H^k: d-closed, linearly independent modulo exact forms.
pub struct CohomologyBasis {
    pub degree: usize,
    pub representatives: Vec<Form>,
    pub dimension: usize,
}

impl Model {
    pub fn parse(text: &str) -> Result<Model> {
        let spec: ModelSpec = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("model file: {e}")))?;
        Model::from_spec(spec)
    }

    pub fn from_spec(spec: ModelSpec) -> Result<Model> {
        let dim = spec.dimension;
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::Validation(format!(
                "dimension must be even and positive, got {dim}"
            )));
        }
        if spec.generators.len() != dim {
            return Err(Error::Validation(format!(
                "expected {dim} generators, got {}",
                spec.generators.len()
            )));
        }
        let mut index = BTreeMap::new();
        for (i, g) in spec.generators.iter().enumerate() {
            if index.insert(g.clone(), (i + 1) as u8).is_some() {
                return Err(Error::Validation(format!("duplicate generator '{g}'")));
            }
        }
        let mut d_rules = vec![Form::zero(dim); dim];
        for (g, terms) in &spec.d {
            let gi = *index
                .get(g)
                .ok_or_else(|| Error::Parse(format!("d rule for unknown generator '{g}'")))?;
            let f = parse_term_list(dim, &index, terms)?;
            match f.homogeneous_degree()? {
                None | Some(2) => {}
                Some(k) => {
                    return Err(Error::Validation(format!(
                        "d {g} must have degree 2, got degree {k}"
                    )))
                }
            }
            d_rules[(gi - 1) as usize] = f;
        }
        let omega = parse_term_list(dim, &index, &spec.omega)?;

        let mut model = Model {
            name: spec.name,
            dim,
            generator_names: spec.generators,
            d_rules,
            // Placeholder; replaced below after validation of omega.
            symplectic: SymplecticStructure::darboux(dim)?,
            d_mats: Vec::new(),
        };

        // d^2 = 0 on generators (hence on all forms, d being a derivation).
        for i in 1..=dim as u8 {
            let ddi = model.d(&model.d(&Form::generator(dim, i)?)?)?;
            if !ddi.is_zero() {
                return Err(Error::Validation(format!(
                    "d^2 != 0 on generator '{}': d^2 = {}",
                    model.generator_names[(i - 1) as usize],
                    ddi
                )));
            }
        }
        // omega closed and nondegenerate.
        let domega = model.d(&omega)?;
        if !domega.is_zero() {
            return Err(Error::Validation(format!(
                "omega is not closed: d omega = {domega}"
            )));
        }
        model.symplectic = SymplecticStructure::new(dim, omega)?;

        // d matrices per degree.
        for k in 0..=dim {
            let src = model.symplectic.monomials(k).to_vec();
            let tgt = if k < dim {
                model.symplectic.monomials(k + 1).to_vec()
            } else {
                Vec::new()
            };
            let mut m = Mat::zero(tgt.len(), src.len());
            for (j, idx) in src.iter().enumerate() {
                let f = Form::from_coords(dim, std::slice::from_ref(idx), &[Q::new(1.into(), 1.into())]);
                let df = model.d(&f)?;
                for (i, t) in tgt.iter().enumerate() {
                    m[(i, j)] = df.coeff(t);
                }
            }
            model.d_mats.push(m);
        }
        Ok(model)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.dim / 2
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn symplectic(&self) -> &SymplecticStructure {
        &self.symplectic
    }

    pub fn omega(&self) -> &Form {
        self.symplectic.omega()
    }

    /// The exterior derivative extending the structure constants as a derivation.
    pub fn d(&self, a: &Form) -> Result<Form> {
        let mut out = Form::zero(self.dim);
        for (idx, c) in a.terms() {
            for (pos, &gen) in idx.0.iter().enumerate() {
                let dg = &self.d_rules[(gen - 1) as usize];
                if dg.is_zero() {
                    continue;
                }
                // prefix ^ d(e_gen) ^ suffix, with the derivation sign.
                let mut prefix = Form::scalar(self.dim, c.clone());
                if pos % 2 == 1 {
                    prefix = prefix.neg();
                }
                let pre_idx = MultiIndex(idx.0[..pos].to_vec());
                let suf_idx = MultiIndex(idx.0[pos + 1..].to_vec());
                let mut pre = Form::zero(self.dim);
                pre.add_term(pre_idx, Q::new(1.into(), 1.into()));
                let mut suf = Form::zero(self.dim);
                suf.add_term(suf_idx, Q::new(1.into(), 1.into()));
                let term = prefix.wedge(&pre)?.wedge(dg)?.wedge(&suf)?;
                out = out.add(&term)?;
            }
        }
        Ok(out)
    }

    /// The symplectic adjoint d^Lambda = d Lambda - Lambda d.
    pub fn d_lambda(&self, a: &Form) -> Result<Form> {
        let s = &self.symplectic;
        self.d(&s.lambda(a)?)?.sub(&s.lambda(&self.d(a)?)?)
    }

    /// Coefficient of the top monomial, with unit volume normalization.
    pub fn integrate_top(&self, a: &Form) -> Q {
        let top = MultiIndex((1..=self.dim as u8).collect());
        a.coeff(&top)
    }

    pub fn d_matrix(&self, k: usize) -> &Mat {
        &self.d_mats[k]
    }

    /// Dimension of H^k = nullity(d_k) - rank(d_{k-1}).
    pub fn betti(&self, k: usize) -> usize {
        if k > self.dim {
            return 0;
        }
        let z = self.d_mats[k].nullity();
        let b = if k == 0 { 0 } else { self.d_mats[k - 1].rank() };
        z - b
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        (0..=self.dim).map(|k| self.betti(k)).collect()
    }

    pub fn derham_cohomology(&self, k: usize) -> Result<CohomologyBasis> {
        let q = self.derham_quotient(k)?;
        Ok(CohomologyBasis {
            degree: k,
            dimension: q.dim(),
            representatives: q.representatives().to_vec(),
        })
    }

    /// H^k as a quotient with explicit representatives and class coordinates.
    pub fn derham_quotient(&self, k: usize) -> Result<Quotient> {
        if k > self.dim {
            return Quotient::new(self.dim, k, Vec::new(), Vec::new());
        }
        let basis = self.symplectic.monomials(k);
        let closed: Vec<Form> = self.d_mats[k]
            .nullspace()
            .into_iter()
            .map(|v| Form::from_coords(self.dim, basis, &v))
            .collect();
        let exact: Vec<Form> = if k == 0 {
            Vec::new()
        } else {
            let prev = self.symplectic.monomials(k - 1);
            let image: Vec<Vec<Q>> = (0..prev.len())
                .map(|j| self.d_mats[k - 1].column(j))
                .collect();
            span_basis(&image, basis.len())
                .into_iter()
                .map(|v| Form::from_coords(self.dim, basis, &v))
                .collect()
        };
        Quotient::new(self.dim, k, closed, exact)
    }
}

/// A subquotient numerator/denominator pair of a space of degree-k forms,
/// with deterministic representatives (echelon sweep) and exact class
/// coordinates via linear solve.
pub struct Quotient {
    dim: usize,
    degree: usize,
    representatives: Vec<Form>,
    denominator: Vec<Form>,
    solver: Solver,
}

impl Quotient {
    pub fn new(
        dim: usize,
        degree: usize,
        numerator_basis: Vec<Form>,
        denominator_basis: Vec<Form>,
    ) -> Result<Quotient> {
        let monomials = crate::exterior::monomial_basis(dim, degree);
        let num_vecs: Vec<Vec<Q>> = numerator_basis
            .iter()
            .map(|f| f.coords(&monomials))
            .collect();
        let den_vecs: Vec<Vec<Q>> = denominator_basis
            .iter()
            .map(|f| f.coords(&monomials))
            .collect();
        let den_span = span_basis(&den_vecs, monomials.len());
        let rep_vecs = quotient_representatives(&den_span, &num_vecs, monomials.len());
        let representatives: Vec<Form> = rep_vecs
            .iter()
            .map(|v| Form::from_coords(dim, &monomials, v))
            .collect();
        let denominator: Vec<Form> = den_span
            .iter()
            .map(|v| Form::from_coords(dim, &monomials, v))
            .collect();
        let mut columns: Vec<Vec<Q>> = Vec::new();
        columns.extend(rep_vecs.iter().cloned());
        columns.extend(den_span.iter().cloned());
        let solver = Solver::new(&Mat::from_columns(monomials.len(), &columns));
        Ok(Quotient {
            dim,
            degree,
            representatives,
            denominator,
            solver,
        })
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn representatives(&self) -> &[Form] {
        &self.representatives
    }

    pub fn denominator_basis(&self) -> &[Form] {
        &self.denominator
    }

    /// Class coordinates of `f` in the representative basis. Errors if `f`
    /// does not lie in numerator + denominator (e.g. is not closed), which
    /// doubles as the well-definedness assertion for connecting maps.
    pub fn coords(&self, f: &Form) -> Result<Vec<Q>> {
        if !f.is_zero() {
            match f.homogeneous_degree()? {
                None => {}
                Some(k) if k == self.degree => {}
                Some(k) => {
                    return Err(Error::Precondition(format!(
                        "expected degree {} in quotient, got {k}",
                        self.degree
                    )))
                }
            }
        }
        let monomials = crate::exterior::monomial_basis(self.dim, self.degree);
        let x = self
            .solver
            .solve(&f.coords(&monomials))
            .ok_or_else(|| Error::Precondition("form does not represent a class here".into()))?;
        Ok(x[..self.representatives.len()].to_vec())
    }

    pub fn class_is_zero(&self, f: &Form) -> Result<bool> {
        Ok(self.coords(f)?.iter().all(|c| c.is_zero()))
    }
}

fn parse_term_list(
    dim: usize,
    index: &BTreeMap<String, u8>,
    terms: &TermList,
) -> Result<Form> {
    let mut out = Form::zero(dim);
    for (coeff, gens) in terms {
        let c = parse_rational(coeff)?;
        let mut idx = Vec::with_capacity(gens.len());
        for g in gens {
            let gi = *index
                .get(g)
                .ok_or_else(|| Error::Parse(format!("unknown generator '{g}' in term")))?;
            idx.push(gi);
        }
        out = out.add(&Form::monomial(dim, &idx, c)?)?;
    }
    Ok(out)
}

/// Coefficients are JSON integers or strings "p/q" / "p".
pub fn parse_rational(v: &serde_json::Value) -> Result<Q> {
    match v {
        serde_json::Value::Number(nv) => {
            let i = nv
                .as_i64()
                .ok_or_else(|| Error::Parse(format!("coefficient {nv} is not an integer")))?;
            Ok(Q::new(i.into(), 1.into()))
        }
        serde_json::Value::String(s) => {
            let s = s.trim();
            let (num, den) = match s.split_once('/') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (s, "1"),
            };
            let n: i128 = num
                .parse()
                .map_err(|_| Error::Parse(format!("bad numerator in '{s}'")))?;
            let d: i128 = den
                .parse()
                .map_err(|_| Error::Parse(format!("bad denominator in '{s}'")))?;
            if d == 0 {
                return Err(Error::Parse(format!("zero denominator in '{s}'")));
            }
            Ok(Q::new(n.into(), d.into()))
        }
        other => Err(Error::Parse(format!("bad coefficient: {other}"))),
    }
}
