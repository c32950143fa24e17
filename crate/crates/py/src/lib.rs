//! Python bindings: exact tables, asymptotic models, saddle points, the
//! Cauchy count and the zeta evaluators.

use meinardus::asym::{build_model, evaluate};
use meinardus::exact::{coeffs, coeffs_oracle};
use meinardus::model::{exponent_sets, preset_lspec, AsymptoticModel, LSpec, WeightFunction};
use meinardus::saddle::{cauchy_count as core_cauchy, solve_saddle as core_saddle};
use meinardus::special;
use meinardus::witten::{
    self, so5_params_for, zeta_mt2_direct, zeta_pk_direct, zeta_so5_continued, zeta_so5_direct, zeta_su3_continued,
    zeta_su3_direct, MbParams,
};
use meinardus::{Error, C64};
use num_bigint::BigUint;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Pole(_) | Error::NonConvergence(_) | Error::Tolerance { .. } => PyArithmeticError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn weight(preset: &str) -> PyResult<WeightFunction> {
    WeightFunction::from_preset(preset).map_err(to_py)
}

/// `p_f(0..=n_max)` for a preset; `method` is "auto" or "oracle".
#[pyfunction]
#[pyo3(signature = (preset, n_max, method = "auto"))]
fn count(preset: &str, n_max: usize, method: &str) -> PyResult<Vec<BigUint>> {
    let w = weight(preset)?;
    let t = match method {
        "auto" => coeffs(&w, n_max),
        "oracle" => coeffs_oracle(&w, n_max),
        other => return Err(PyValueError::new_err(format!("unknown method '{other}'"))),
    }
    .map_err(to_py)?;
    Ok(t.values)
}

/// Asymptotic main term `C n^{-b} exp(sum A_j n^{e_j})`.
#[pyclass(name = "AsymptoticModel", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyModel {
    inner: AsymptoticModel,
}

#[pymethods]
impl PyModel {
    /// Model for a built-in preset.
    #[staticmethod]
    fn from_preset(preset: &str) -> PyResult<Self> {
        let w = weight(preset)?;
        let spec = preset_lspec(&w).map_err(to_py)?;
        let inner = build_model(&w.to_string(), &spec).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Model from L-function data given as JSON.
    #[staticmethod]
    fn from_lspec_json(name: &str, text: &str) -> PyResult<Self> {
        let spec: LSpec = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        spec.validate().map_err(to_py)?;
        Ok(Self { inner: build_model(name, &spec).map_err(to_py)? })
    }

    #[getter]
    fn preset(&self) -> String {
        self.inner.preset.clone()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    /// Pairs `(A_j, e_j)`.
    #[getter]
    fn exp_terms(&self) -> Vec<(f64, f64)> {
        self.inner.exp_terms.clone()
    }

    #[getter(C)]
    fn c(&self) -> f64 {
        self.inner.c
    }

    #[getter]
    fn b(&self) -> f64 {
        self.inner.b
    }

    #[getter]
    fn next_error_exponent(&self) -> f64 {
        self.inner.next_error_exponent
    }

    /// `log p_hat(n)`.
    fn log_estimate(&self, n: f64) -> f64 {
        self.inner.log_estimate(n)
    }

    /// `p_hat(n)`, or None past the double range.
    fn evaluate(&self, n: u64) -> Option<f64> {
        evaluate(&self.inner, n).value
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!("AsymptoticModel(preset={:?}, C={}, b={}, terms={:?})", self.inner.preset, self.inner.c, self.inner.b, self.inner.exp_terms)
    }
}

/// Exponents of the exponential part as `(numerator, denominator)` pairs.
#[pyfunction]
fn exponents(preset: &str) -> PyResult<Vec<(i64, i64)>> {
    let spec = preset_lspec(&weight(preset)?).map_err(to_py)?;
    Ok(exponent_sets(&spec).exponential_exponents().iter().map(|r| (*r.numer(), *r.denom())).collect())
}

/// Saddle point `(rho, residual, iterations)` of `-Phi_f'(rho) = n`.
#[pyfunction]
fn saddle(preset: &str, n: f64) -> PyResult<(f64, f64, usize)> {
    let sp = core_saddle(&weight(preset)?, None, n).map_err(to_py)?;
    Ok((sp.rho, sp.residual, sp.iterations))
}

/// `p_f(n)` from the circle integral, rounded.
#[pyfunction]
fn cauchy_count(preset: &str, n: usize) -> PyResult<BigUint> {
    Ok(core_cauchy(&weight(preset)?, n).map_err(to_py)?.nearest)
}

/// Result of a zeta evaluation.
#[pyclass(name = "ZetaEval", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyZetaEval {
    value: C64,
    err_estimate: f64,
    method: String,
}

#[pymethods]
impl PyZetaEval {
    fn __repr__(&self) -> String {
        format!("ZetaEval(value={}, err_estimate={:e}, method={})", self.value, self.err_estimate, self.method)
    }
}

impl From<witten::ZetaEval> for PyZetaEval {
    fn from(e: witten::ZetaEval) -> Self {
        let method = match e.method {
            witten::Method::DirectSum => "DirectSum",
            witten::Method::MellinBarnes => "MellinBarnes",
        };
        Self { value: e.value, err_estimate: e.err_estimate, method: method.into() }
    }
}

/// `zeta_so5(s)`; `method` is "auto", "direct" or "mb".
#[pyfunction]
#[pyo3(signature = (s, method = "auto", tol = 1e-10))]
fn zeta_so5(s: C64, method: &str, tol: f64) -> PyResult<PyZetaEval> {
    let e = match method {
        "direct" => zeta_so5_direct(s, tol),
        "auto" if s.re > 1.0 / 3.0 + 0.05 => zeta_so5_direct(s, tol),
        "auto" | "mb" => zeta_so5_continued(s, &so5_params_for(s, &MbParams { tol, ..MbParams::default() })),
        other => return Err(PyValueError::new_err(format!("unknown method '{other}'"))),
    };
    Ok(e.map_err(to_py)?.into())
}

/// `zeta_su3(s)`; `method` is "auto", "direct" or "mb".
#[pyfunction]
#[pyo3(signature = (s, method = "auto", tol = 1e-10))]
fn zeta_su3(s: C64, method: &str, tol: f64) -> PyResult<PyZetaEval> {
    let e = match method {
        "direct" => zeta_su3_direct(s, tol),
        "auto" if s.re > 0.55 => zeta_su3_direct(s, tol),
        "auto" | "mb" => zeta_su3_continued(s, &MbParams { tol, ..MbParams::default() }),
        other => return Err(PyValueError::new_err(format!("unknown method '{other}'"))),
    };
    Ok(e.map_err(to_py)?.into())
}

/// `zeta_MT(s1, s2, s3)`, summed where convergent, else by Mellin-Barnes.
#[pyfunction]
#[pyo3(signature = (s1, s2, s3, tol = 1e-10))]
fn zeta_mt2(s1: C64, s2: C64, s3: C64, tol: f64) -> PyResult<PyZetaEval> {
    let convergent = (s1 + s3).re > 1.0 && (s2 + s3).re > 1.0 && (s1 + s2 + s3).re > 2.0;
    let e = if convergent {
        zeta_mt2_direct(s1, s2, s3, tol)
    } else {
        let eps = MbParams::default().eps;
        witten::mt2_auto_m(s1, s2, s3, eps, 1).and_then(|m| witten::mt2_mellin_barnes(s1, s2, s3, m, eps, tol))
    };
    Ok(e.map_err(to_py)?.into())
}

/// `sum_n P_k(n)^{-s}` over k-gonal numbers, `Re s > 1/2`.
#[pyfunction]
#[pyo3(signature = (s, k, tol = 1e-10))]
fn zeta_pk(s: C64, k: u32, tol: f64) -> PyResult<PyZetaEval> {
    Ok(zeta_pk_direct(s, k, tol).map_err(to_py)?.into())
}

#[pyfunction]
fn gamma(s: C64) -> PyResult<C64> {
    special::gamma(s).map_err(to_py)
}

#[pyfunction]
fn zeta(s: C64) -> PyResult<C64> {
    special::zeta(s).map_err(to_py)
}

#[pymodule]
#[pyo3(name = "meinardus")]
fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add_class::<PyZetaEval>()?;
    m.add_function(wrap_pyfunction!(count, m)?)?;
    m.add_function(wrap_pyfunction!(exponents, m)?)?;
    m.add_function(wrap_pyfunction!(saddle, m)?)?;
    m.add_function(wrap_pyfunction!(cauchy_count, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_so5, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_su3, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_mt2, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_pk, m)?)?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(zeta, m)?)?;
    Ok(())
}
