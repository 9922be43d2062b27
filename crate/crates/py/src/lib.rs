//! Python bindings: exact forms, cochain models, the filtered-cohomology
//! tables, verification entry points, symbol certificates and the
//! mapping-torus analysis.
//!
//! Rational values cross the boundary as strings ("p/q") to keep exactness;
//! report-like results come back as plain dicts/lists.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use sympcoh::ainfty;
use sympcoh::exterior;
use sympcoh::linalg::Q;
use sympcoh::model;
use sympcoh::{filtered, resolution, suites, symbol, torus};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn narrow_indices(indices: &[usize]) -> PyResult<Vec<u8>> {
    indices
        .iter()
        .map(|&i| u8::try_from(i).map_err(|_| PyValueError::new_err("generator index out of range")))
        .collect()
}

fn parse_q(s: &str) -> PyResult<Q> {
    sympcoh::model::parse_rational(&serde_json::Value::String(s.to_string()))
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    Ok(match v {
        serde_json::Value::Null => py.None(),
        serde_json::Value::Bool(b) => b.into_pyobject(py)?.to_owned().unbind().into_any(),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.unbind().into_any()
            } else {
                n.as_f64()
                    .unwrap_or(f64::NAN)
                    .into_pyobject(py)?
                    .unbind()
                    .into_any()
            }
        }
        serde_json::Value::String(s) => s.into_pyobject(py)?.unbind().into_any(),
        serde_json::Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.unbind().into_any()
        }
        serde_json::Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, val) in map {
                dict.set_item(k, json_to_py(py, val)?)?;
            }
            dict.unbind().into_any()
        }
    })
}

/// An exact exterior form over named degree-one generators.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Form {
    inner: exterior::Form,
}

#[pymethods]
impl Form {
    /// Zero form in the given ambient dimension.
    #[staticmethod]
    fn zero(dim: usize) -> Form {
        Form {
            inner: exterior::Form::zero(dim),
        }
    }

    /// A single monomial, e.g. monomial(4, [1, 2], "1/2"); indices are
    /// 1-based and canonicalized with sign.
    #[staticmethod]
    #[pyo3(signature = (dim, indices, coeff = "1"))]
    fn monomial(dim: usize, indices: Vec<usize>, coeff: &str) -> PyResult<Form> {
        let idx = narrow_indices(&indices)?;
        Ok(Form {
            inner: exterior::Form::monomial(dim, &idx, parse_q(coeff)?).map_err(err)?,
        })
    }

    /// Build from a term list [[coeff, [i, j, ...]], ...].
    #[staticmethod]
    fn from_terms(dim: usize, terms: Vec<(String, Vec<usize>)>) -> PyResult<Form> {
        let mut out = exterior::Form::zero(dim);
        for (c, idx) in terms {
            let idx = narrow_indices(&idx)?;
            let mono = exterior::Form::monomial(dim, &idx, parse_q(&c)?).map_err(err)?;
            out = out.add(&mono).map_err(err)?;
        }
        Ok(Form { inner: out })
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn terms(&self) -> Vec<(String, Vec<usize>)> {
        self.inner
            .terms()
            .map(|(idx, c)| {
                (
                    c.to_string(),
                    idx.0.iter().map(|&i| i as usize).collect(),
                )
            })
            .collect()
    }

    fn wedge(&self, other: &Form) -> PyResult<Form> {
        Ok(Form {
            inner: self.inner.wedge(&other.inner).map_err(err)?,
        })
    }

    fn add(&self, other: &Form) -> PyResult<Form> {
        Ok(Form {
            inner: self.inner.add(&other.inner).map_err(err)?,
        })
    }

    fn scale(&self, coeff: &str) -> PyResult<Form> {
        Ok(Form {
            inner: self.inner.scale(&parse_q(coeff)?),
        })
    }

    fn contract(&self, index: usize) -> PyResult<Form> {
        let index = u8::try_from(index)
            .map_err(|_| PyValueError::new_err("generator index out of range"))?;
        Ok(Form {
            inner: self.inner.contract(index).map_err(err)?,
        })
    }

    fn degree_component(&self, k: usize) -> Form {
        Form {
            inner: self.inner.degree_component(k),
        }
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Form({})", self.inner)
    }
}

/// A validated finite cochain model with its symplectic structure.
#[pyclass]
struct Model {
    inner: model::Model,
}

#[pymethods]
impl Model {
    /// Parse a model from its JSON text.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Model> {
        Ok(Model {
            inner: model::Model::parse(text).map_err(|e| PyValueError::new_err(e.to_string()))?,
        })
    }

    /// Load a model from a file path.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Model> {
        let text = std::fs::read_to_string(path).map_err(err)?;
        Model::parse(&text)
    }

    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    fn dimension(&self) -> usize {
        self.inner.dim()
    }

    fn betti(&self) -> Vec<usize> {
        self.inner.betti_numbers()
    }

    fn omega(&self) -> Form {
        Form {
            inner: self.inner.omega().clone(),
        }
    }

    /// Exterior derivative of a form in this model.
    fn d(&self, form: &Form) -> PyResult<Form> {
        Ok(Form {
            inner: self.inner.d(&form.inner).map_err(err)?,
        })
    }

    /// Coefficient of the top monomial (unit volume normalization).
    fn integrate_top(&self, form: &Form) -> String {
        self.inner.integrate_top(&form.inner).to_string()
    }

    /// Lefschetz decomposition of a homogeneous form: [(r, Form), ...].
    fn lefschetz_decompose(&self, form: &Form) -> PyResult<Vec<(usize, Form)>> {
        let dec = self.inner.symplectic().decompose(&form.inner).map_err(err)?;
        Ok(dec
            .components
            .into_iter()
            .map(|(r, b)| (r, Form { inner: b }))
            .collect())
    }

    /// (plus, minus) dimension lists of the p-filtered cohomology.
    fn filtered_dims(&self, p: usize) -> PyResult<(Vec<usize>, Vec<usize>)> {
        let f = filtered::filtered_cohomology(&self.inner, p).map_err(err)?;
        Ok((f.plus_dims, f.minus_dims))
    }

    /// The primitive cohomology tables.
    fn primitive_dims<'py>(&self, py: Python<'py>) -> PyResult<Py<PyAny>> {
        let p = filtered::primitive_cohomologies(&self.inner).map_err(err)?;
        json_to_py(
            py,
            &serde_json::json!({
                "ph_dplus": p.ph_dplus,
                "ph_dminus": p.ph_dminus,
                "ph_dd_lambda": p.ph_dd_lambda,
                "ph_d_plus_d_lambda": p.ph_d_plus_d_lambda,
            }),
        )
    }

    /// Kernel/cokernel table of L^r on cohomology.
    fn lefschetz_analysis<'py>(&self, py: Python<'py>, r: usize) -> PyResult<Py<PyAny>> {
        let a = resolution::lefschetz_map_analysis(&self.inner, r).map_err(err)?;
        let records: Vec<serde_json::Value> = a
            .records
            .iter()
            .map(|rec| {
                serde_json::json!({
                    "k": rec.k, "rank": rec.rank,
                    "kernel": rec.kernel_dim, "cokernel": rec.cokernel_dim,
                })
            })
            .collect();
        json_to_py(py, &serde_json::Value::Array(records))
    }

    /// Verify the degree-r resolution long exact sequence.
    fn verify_les<'py>(&self, py: Python<'py>, r: usize) -> PyResult<Py<PyAny>> {
        let rep = resolution::verify_les(&self.inner, r).map_err(err)?;
        json_to_py(py, &sympcoh::report::les_json(&rep))
    }

    /// Verify the (l, r) filtered exact triangle.
    fn verify_triangle<'py>(&self, py: Python<'py>, l: usize, r: usize) -> PyResult<Py<PyAny>> {
        let rep = resolution::verify_filtered_triangle(&self.inner, l, r).map_err(err)?;
        json_to_py(py, &sympcoh::report::les_json(&rep))
    }

    /// All dimension-formula checks; returns {"passed": bool, ...}.
    fn dimension_check<'py>(&self, py: Python<'py>) -> PyResult<Py<PyAny>> {
        let rep = resolution::dimension_formula_check(&self.inner).map_err(err)?;
        json_to_py(py, &sympcoh::report::dimensions_json(&rep))
    }

    /// The graded product of two p-filtered forms at given gradings.
    fn product(
        &self,
        p: usize,
        grading_x: usize,
        x: &Form,
        grading_y: usize,
        y: &Form,
    ) -> PyResult<(usize, Form)> {
        let gx = ainfty::GradedElement::new(&self.inner, p, grading_x, x.inner.clone())
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        let gy = ainfty::GradedElement::new(&self.inner, p, grading_y, y.inner.clone())
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        let prod = ainfty::m2(&self.inner, &gx, &gy).map_err(err)?;
        Ok((prod.grading, Form { inner: prod.form }))
    }

    /// Image dimension of the ring-table block at gradings (j, k).
    fn ring_block_image_dim(&self, p: usize, j: usize, k: usize) -> PyResult<usize> {
        let table = ainfty::ring_table(&self.inner, p, 0).map_err(err)?;
        Ok(table.block(j, k).map(|b| b.image_dim).unwrap_or(0))
    }

    /// Run the random-sample verification suites; returns per-suite dicts.
    #[pyo3(signature = (seed = 0, samples = 40))]
    fn verify_suites<'py>(&self, py: Python<'py>, seed: u64, samples: usize) -> PyResult<Py<PyAny>> {
        let reports = [
            suites::suite_sl2(&self.inner, seed, samples).map_err(err)?,
            suites::suite_leibniz(&self.inner, seed, samples).map_err(err)?,
            suites::suite_ainfty(&self.inner, seed, samples).map_err(err)?,
            suites::suite_compat(&self.inner, seed, samples).map_err(err)?,
        ];
        let vals: Vec<serde_json::Value> =
            reports.iter().map(sympcoh::report::suite_json).collect();
        json_to_py(py, &serde_json::Value::Array(vals))
    }

    fn __repr__(&self) -> String {
        format!(
            "Model(name='{}', dimension={})",
            self.inner.name(),
            self.inner.dim()
        )
    }
}

/// Exactness certificate for the symbol sequence at a covector.
#[pyfunction]
fn symbol_exactness(py: Python<'_>, dim: usize, p: usize) -> PyResult<Py<PyAny>> {
    let rep = symbol::symbol_exactness(dim, p).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let doc = sympcoh::report::symbol_report(&rep, format!("symbol --dim {dim} --p {p}"));
    json_to_py(py, &serde_json::json!({
        "all_exact": rep.all_exact,
        "positions": doc.results["positions"],
    }))
}

/// Monodromy analysis of a mapping-torus description (JSON text), including
/// the pairing-image invariant when generator data is present.
#[pyfunction]
fn analyze_monodromy(py: Python<'_>, text: &str) -> PyResult<Py<PyAny>> {
    let input = torus::load_monodromy(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let pairing = if input.generators.is_empty() {
        None
    } else {
        Some(
            torus::pairing_image_dim(&input.model, &input.generators)
                .map_err(err)?,
        )
    };
    let rep = sympcoh::report::torus_report(
        &input,
        pairing.as_ref(),
        "analyze_monodromy".to_string(),
        sympcoh::report::identity("monodromy", "<memory>", text),
    );
    json_to_py(py, &rep.results)
}

/// The coefficient list (ascending powers, as strings) of f_i(phi).
#[pyfunction]
fn f_poly(i: usize) -> Vec<String> {
    torus::f_poly(i).0.iter().map(|c| c.to_string()).collect()
}

#[pymodule]
fn sympcoh_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Form>()?;
    m.add_class::<Model>()?;
    m.add_function(wrap_pyfunction!(symbol_exactness, m)?)?;
    m.add_function(wrap_pyfunction!(analyze_monodromy, m)?)?;
    m.add_function(wrap_pyfunction!(f_poly, m)?)?;
    Ok(())
}
