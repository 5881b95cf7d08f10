//! Python bindings for the curvature laboratory.
//!
//! Exposes exact polynomials, metric construction (families, text format,
//! general g_f), the curvature operators and their nilpotency reports, and
//! the span checks. All values cross the boundary as strings of exact
//! rationals or polynomial expressions; nothing is floating point.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use curvlab::{
    characteristic_checks, curvature_span_check, direct_sum_flat, family_metric, gf_metric,
    higher_order_jacobi, jacobi_operator, nabla_span_check, nilpotency_order, parse_metric_text,
    parse_rational, poly_parse, rank_at_point, ricci_operator, skew_curvature_operator,
    szabo_operator, Binding, Curvature, FamilyKind, MetricSpec, NilpotencyVerdict, OperatorKind,
    OperatorMatrix, Polynomial, Rational, Sign, VarTable,
};

fn value_error(message: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(message.to_string())
}

fn rational_arg(text: &str) -> PyResult<Rational> {
    parse_rational(text).ok_or_else(|| value_error(format!("invalid rational `{text}`")))
}

/// Exact multivariate polynomial over named variables.
#[pyclass(name = "Polynomial")]
#[derive(Clone)]
struct PyPolynomial {
    inner: Polynomial,
}

#[pymethods]
impl PyPolynomial {
    /// Parse an expression over the given variables.
    #[staticmethod]
    fn parse(variables: Vec<String>, expr: &str) -> PyResult<Self> {
        let refs: Vec<&str> = variables.iter().map(String::as_str).collect();
        let table = VarTable::coordinates(&refs).map_err(value_error)?;
        let inner = poly_parse(expr, &table).map_err(value_error)?;
        Ok(PyPolynomial { inner })
    }

    fn __str__(&self) -> String {
        self.inner.render()
    }

    fn __repr__(&self) -> String {
        format!("Polynomial({})", self.inner.render())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.check_table(other)?;
        Ok(PyPolynomial {
            inner: self.inner.add_ref(&other.inner),
        })
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        self.check_table(other)?;
        Ok(PyPolynomial {
            inner: self.inner.sub_ref(&other.inner),
        })
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.check_table(other)?;
        Ok(PyPolynomial {
            inner: self.inner.mul_ref(&other.inner),
        })
    }

    fn __neg__(&self) -> Self {
        PyPolynomial {
            inner: self.inner.neg_ref(),
        }
    }

    fn pow(&self, exponent: u32) -> Self {
        PyPolynomial {
            inner: self.inner.pow(exponent),
        }
    }

    /// Exact partial derivative.
    fn diff(&self, variable: &str) -> PyResult<Self> {
        Ok(PyPolynomial {
            inner: self.inner.diff(variable).map_err(value_error)?,
        })
    }

    /// Simultaneous substitution; values are expressions over the same
    /// variables.
    fn substitute(&self, bindings: BTreeMap<String, String>) -> PyResult<Self> {
        let mut subs: Vec<(&str, Binding)> = Vec::new();
        let mut parsed = Vec::new();
        for (name, expr) in &bindings {
            let value = poly_parse(expr, self.inner.table()).map_err(value_error)?;
            parsed.push((name.clone(), value));
        }
        for (name, value) in &parsed {
            subs.push((name.as_str(), Binding::Poly(value.clone())));
        }
        Ok(PyPolynomial {
            inner: self.inner.substitute(&subs).map_err(value_error)?,
        })
    }

    fn degree(&self) -> Option<u32> {
        self.inner.degree()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn variables(&self) -> Vec<String> {
        self.inner.table().names().map(str::to_string).collect()
    }
}

impl PyPolynomial {
    fn check_table(&self, other: &Self) -> PyResult<()> {
        if self.inner.table() != other.inner.table() {
            return Err(value_error("polynomials use different variable tables"));
        }
        Ok(())
    }
}

fn operator_kind(name: &str) -> PyResult<OperatorKind> {
    match name {
        "szabo" => Ok(OperatorKind::Szabo),
        "jacobi" => Ok(OperatorKind::Jacobi),
        "skew" => Ok(OperatorKind::SkewCurvature),
        "higher-jacobi" => Ok(OperatorKind::HigherJacobi),
        "ricci" => Ok(OperatorKind::Ricci),
        other => Err(value_error(format!("unknown operator kind `{other}`"))),
    }
}

/// Validated polynomial metric with constant determinant.
#[pyclass(name = "Metric")]
struct PyMetric {
    inner: MetricSpec,
}

#[pymethods]
impl PyMetric {
    /// Build a named family metric: szabo, osserman, pointwise-szabo or
    /// pointwise-osserman, at nilpotency order n.
    #[staticmethod]
    fn family(kind: &str, n: usize) -> PyResult<Self> {
        let kind = FamilyKind::parse(kind)
            .ok_or_else(|| value_error(format!("unknown family `{kind}`")))?;
        Ok(PyMetric {
            inner: family_metric(kind, n).map_err(value_error)?,
        })
    }

    /// Parse the metric text format.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyMetric {
            inner: parse_metric_text(text).map_err(value_error)?,
        })
    }

    /// General g_f metric: f over the middle coordinates and a constant
    /// symmetric matrix of rationals (as strings).
    #[staticmethod]
    fn gf(f: &PyPolynomial, xi: Vec<Vec<String>>) -> PyResult<Self> {
        let rows: PyResult<Vec<Vec<Rational>>> = xi
            .iter()
            .map(|row| row.iter().map(|e| rational_arg(e)).collect())
            .collect();
        Ok(PyMetric {
            inner: gf_metric(&f.inner, &rows?).map_err(value_error)?,
        })
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn coords(&self) -> Vec<String> {
        self.inner.coords().iter().map(|s| s.to_string()).collect()
    }

    /// (count of -1, count of +1) after congruence diagonalization.
    fn signature(&self) -> (usize, usize) {
        self.inner.signature()
    }

    fn determinant(&self) -> String {
        self.inner.determinant().to_string()
    }

    fn entry(&self, i: usize, j: usize) -> PyResult<String> {
        self.check_index(&[i, j])?;
        Ok(self.inner.matrix().get(i, j).render())
    }

    fn inverse_entry(&self, i: usize, j: usize) -> PyResult<String> {
        self.check_index(&[i, j])?;
        Ok(self.inner.inverse_matrix().get(i, j).render())
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn riemann_entry(&self, i: usize, j: usize, k: usize, l: usize) -> PyResult<String> {
        self.check_index(&[i, j, k, l])?;
        Ok(curvlab::riemann(&self.inner).get(&[i, j, k, l]).render())
    }

    fn nabla_riemann_entry(
        &self,
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        n: usize,
    ) -> PyResult<String> {
        self.check_index(&[i, j, k, l, n])?;
        Ok(curvlab::covariant_derivative_riemann(&self.inner)
            .get(&[i, j, k, l, n])
            .render())
    }

    fn ricci_entry(&self, i: usize, j: usize) -> PyResult<String> {
        self.check_index(&[i, j])?;
        Ok(curvlab::ricci_tensor(&self.inner).get(&[i, j]).render())
    }

    /// Build a curvature operator: szabo, jacobi, skew, higher-jacobi
    /// (signs like "+-"), or ricci.
    #[pyo3(signature = (kind, signs = None))]
    fn operator(&self, kind: &str, signs: Option<&str>) -> PyResult<PyOperator> {
        let kind = operator_kind(kind)?;
        let curv = Curvature::compute(&self.inner);
        let inner = match kind {
            OperatorKind::Szabo => szabo_operator(&curv),
            OperatorKind::Jacobi => jacobi_operator(&curv),
            OperatorKind::SkewCurvature => skew_curvature_operator(&curv),
            OperatorKind::HigherJacobi => {
                let pattern = signs.unwrap_or("+-");
                let parsed: PyResult<Vec<Sign>> = pattern
                    .chars()
                    .map(|c| match c {
                        '+' => Ok(Sign::Plus),
                        '-' => Ok(Sign::Minus),
                        other => Err(value_error(format!("bad sign `{other}`"))),
                    })
                    .collect();
                higher_order_jacobi(&curv, &parsed?)
            }
            OperatorKind::Ricci => ricci_operator(&curv),
        };
        Ok(PyOperator { inner })
    }

    /// Isometric product with a flat factor of the given inertia.
    fn direct_sum_flat(&self, extra_minus: usize, extra_plus: usize) -> Self {
        PyMetric {
            inner: direct_sum_flat(&self.inner, extra_minus, extra_plus),
        }
    }

    fn __repr__(&self) -> String {
        let (p, q) = self.inner.signature();
        format!(
            "Metric(dim={}, coords=[{}], signature=({p},{q}))",
            self.inner.dim(),
            self.inner.coords().join(",")
        )
    }
}

impl PyMetric {
    fn check_index(&self, idx: &[usize]) -> PyResult<()> {
        if idx.iter().any(|&i| i >= self.inner.dim()) {
            return Err(value_error(format!(
                "index out of range for dimension {}",
                self.inner.dim()
            )));
        }
        Ok(())
    }
}

/// A curvature operator as a matrix of polynomials in formal directions.
#[pyclass(name = "Operator")]
struct PyOperator {
    inner: OperatorMatrix,
}

#[pymethods]
impl PyOperator {
    fn kind(&self) -> String {
        self.inner.kind().name().to_string()
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn entry(&self, row: usize, col: usize) -> PyResult<String> {
        if row >= self.inner.dim() || col >= self.inner.dim() {
            return Err(value_error("entry index out of range"));
        }
        Ok(self.inner.entry(row, col).render())
    }

    fn direction_variables(&self) -> Vec<Vec<String>> {
        self.inner
            .directions()
            .iter()
            .map(|d| d.names().to_vec())
            .collect()
    }

    /// Decide the nilpotency order exactly. `point` optionally binds every
    /// coordinate (direction variables stay formal).
    #[pyo3(signature = (point = None, seed = 0))]
    fn nilpotency<'py>(
        &self,
        py: Python<'py>,
        point: Option<BTreeMap<String, String>>,
        seed: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let parsed: Option<Vec<(String, Rational)>> = match &point {
            None => None,
            Some(map) => {
                let mut out = Vec::new();
                for (name, value) in map {
                    out.push((name.clone(), rational_arg(value)?));
                }
                Some(out)
            }
        };
        let refs: Option<Vec<(&str, Rational)>> = parsed
            .as_ref()
            .map(|p| p.iter().map(|(n, v)| (n.as_str(), v.clone())).collect());
        let verdict =
            nilpotency_order(&self.inner, refs.as_deref(), seed).map_err(value_error)?;
        let dict = PyDict::new(py);
        match verdict {
            NilpotencyVerdict::Nilpotent(report) => {
                dict.set_item("nilpotent", true)?;
                dict.set_item("order", report.order)?;
                dict.set_item("signature", report.signature)?;
                dict.set_item(
                    "generically_nonzero_power",
                    report.generically_nonzero_power,
                )?;
                match &report.witness {
                    Some(w) => {
                        let witness = PyDict::new(py);
                        for (k, v) in w {
                            witness.set_item(k, v.to_string())?;
                        }
                        dict.set_item("witness", witness)?;
                    }
                    None => dict.set_item("witness", py.None())?,
                }
                let profile = PyList::empty(py);
                for sample in &report.rank_profile {
                    let entry = PyDict::new(py);
                    let dirs = PyDict::new(py);
                    for (k, v) in &sample.directions {
                        dirs.set_item(k, v.to_string())?;
                    }
                    entry.set_item("directions", dirs)?;
                    entry.set_item("rank", sample.rank)?;
                    profile.append(entry)?;
                }
                dict.set_item("rank_profile", profile)?;
            }
            NilpotencyVerdict::NotNilpotent {
                first_nonzero_trace_power,
                trace,
            } => {
                dict.set_item("nilpotent", false)?;
                dict.set_item("first_nonzero_trace_power", first_nonzero_trace_power)?;
                dict.set_item("trace", trace.render())?;
            }
        }
        Ok(dict)
    }

    /// True iff trace(A^k) = 0 for k = 1..=dim as polynomials.
    fn power_traces_zero(&self) -> bool {
        characteristic_checks(&self.inner).all_power_traces_zero
    }

    /// Exact rank after binding every variable to a rational.
    fn rank_at(&self, bindings: BTreeMap<String, String>) -> PyResult<usize> {
        let mut parsed = Vec::new();
        for (name, value) in &bindings {
            parsed.push((name.clone(), rational_arg(value)?));
        }
        let refs: Vec<(&str, Rational)> = parsed
            .iter()
            .map(|(n, v)| (n.as_str(), v.clone()))
            .collect();
        rank_at_point(&self.inner, &refs).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!("Operator(kind={}, dim={})", self.inner.kind().name(), self.inner.dim())
    }
}

/// Span check of random curvature-type tensors against the exact constraint
/// space: returns (observed, expected).
#[pyfunction]
#[pyo3(signature = (kind, m, samples = 40, seed = 0x5EED))]
fn span_check(kind: &str, m: usize, samples: usize, seed: u64) -> PyResult<(usize, usize)> {
    let check = match kind {
        "curvature" => curvature_span_check(m, samples, seed),
        "nabla" => nabla_span_check(m, samples, seed),
        other => return Err(value_error(format!("unknown span kind `{other}`"))),
    };
    Ok((check.observed, check.expected))
}

#[pymodule]
fn curvlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolynomial>()?;
    m.add_class::<PyMetric>()?;
    m.add_class::<PyOperator>()?;
    m.add_function(wrap_pyfunction!(span_check, m)?)?;
    Ok(())
}
