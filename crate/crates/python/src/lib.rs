//! Python bindings for `horospectral`.

use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use horospectral::harness::{self, ExperimentConfig};
use horospectral::modular::{self, BumpTestFunction, QuadratureSpec, UpperHalfPoint};
use horospectral::rank_one::{self, SpectralPoint};
use horospectral::sl3::{self, LambdaPair, NuPair};
use horospectral::{sln, Error};

fn py_err(e: Error) -> PyErr {
    match e.exit_code() {
        2 if matches!(e, Error::Io(_)) => PyIOError::new_err(e.to_string()),
        2 => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn point(n: u32, s: Complex64) -> PyResult<SpectralPoint> {
    SpectralPoint::new(n, s).map_err(py_err)
}

/// Exponent budget as `(name, value)` pairs.
#[pyfunction]
fn exponent_budget(n: u32, delta: f64, s1: f64) -> PyResult<Vec<(String, f64)>> {
    let b = rank_one::exponent_budget(n, delta, s1).map_err(py_err)?;
    Ok(vec![
        ("p".into(), b.p),
        ("eta_cont".into(), b.eta_cont),
        ("eta_s1".into(), b.eta_s1),
        ("kernel_norm_exp".into(), b.kernel_norm_exp),
        ("eps_exponent".into(), b.eps_exponent),
    ])
}

/// `(alpha, beta)` moments of the thickened kernel at the spectral parameter `s`.
#[pyfunction]
fn alpha_beta(n: u32, t: f64, eps: f64, s: Complex64) -> PyResult<(Complex64, Complex64)> {
    let k = rank_one::ThickKernel::new(n, t, eps).map_err(py_err)?;
    let ab = rank_one::alpha_beta(&k, &point(n, s)?).map_err(py_err)?;
    Ok((ab.alpha, ab.beta))
}

/// Two-point interpolation weights `(K, L)` with nodes `1` and `b`.
#[pyfunction]
#[pyo3(signature = (n, s, t, eps, b = rank_one::DEFAULT_NODE_B))]
fn interpolation_weights(n: u32, s: Complex64, t: f64, eps: f64, b: f64) -> PyResult<(Complex64, Complex64)> {
    let w = rank_one::interpolation_weights(&point(n, s)?, t, b, eps).map_err(py_err)?;
    Ok((w.k, w.l))
}

#[pyfunction]
#[pyo3(signature = (n, s, a, b_coef, t, eps, b = rank_one::DEFAULT_NODE_B))]
fn interpolation_residual(
    n: u32,
    s: Complex64,
    a: Complex64,
    b_coef: Complex64,
    t: f64,
    eps: f64,
    b: f64,
) -> PyResult<f64> {
    rank_one::homogeneous_interpolation_residual(a, b_coef, &point(n, s)?, t, b, eps).map_err(py_err)
}

fn bump(center: (f64, f64), wx: f64, wy: f64, amplitude: f64) -> PyResult<BumpTestFunction> {
    let c = UpperHalfPoint::new(center.0, center.1).map_err(py_err)?;
    BumpTestFunction::new(c, wx, wy, amplitude).map_err(py_err)
}

/// Average of the bump over the closed horocycle at height `1/T`.
#[pyfunction]
#[pyo3(signature = (t, center = (0.0, 1.75), wx = 0.4, wy = 0.6, amplitude = 1.0, tol = 1e-8))]
fn horocycle_average(t: f64, center: (f64, f64), wx: f64, wy: f64, amplitude: f64, tol: f64) -> PyResult<f64> {
    let q = QuadratureSpec {
        tol,
        ..QuadratureSpec::default()
    };
    modular::horocycle_average(&bump(center, wx, wy, amplitude)?, t, &q).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (center = (0.0, 1.75), wx = 0.4, wy = 0.6, amplitude = 1.0))]
fn hyperbolic_average(center: (f64, f64), wx: f64, wy: f64, amplitude: f64) -> PyResult<f64> {
    modular::hyperbolic_average(&bump(center, wx, wy, amplitude)?).map_err(py_err)
}

/// Folded and unfolded thickened averages of the default bump.
#[pyfunction]
fn thickened_averages(t: f64, eps: f64) -> PyResult<(f64, f64)> {
    let f = BumpTestFunction::default_bump();
    let k = rank_one::ThickKernel::new(1, t, eps).map_err(py_err)?;
    let q = QuadratureSpec::default();
    Ok((
        modular::thickened_average_folded(&f, &k, &q).map_err(py_err)?,
        modular::thickened_average_unfolded(&f, &k, &q).map_err(py_err)?,
    ))
}

#[pyfunction]
fn lambda_from_nu(nu1: Complex64, nu2: Complex64) -> (Complex64, Complex64) {
    let l = sl3::lambda_from_nu(&NuPair::new(nu1, nu2));
    (l.lambda1, l.lambda2)
}

/// The six solutions `(nu1, nu2)`, repeated by multiplicity.
#[pyfunction]
fn nu_orbit(lambda1: Complex64, lambda2: Complex64) -> PyResult<Vec<(Complex64, Complex64)>> {
    let orbit = sl3::nu_orbit(&LambdaPair::new(lambda1, lambda2)).map_err(py_err)?;
    Ok(orbit.into_iter().map(|v| (v.nu1, v.nu2)).collect())
}

#[pyfunction]
fn b_table(n: usize) -> PyResult<Vec<Vec<i64>>> {
    Ok(sln::b_table(n).map_err(py_err)?.entries().to_vec())
}

#[pyfunction]
fn i_cont(n: usize, t: Vec<f64>) -> PyResult<f64> {
    sln::i_cont(n, &t).map_err(py_err)
}

#[pyfunction]
fn weyl_orbit_size(n: usize) -> PyResult<u64> {
    sln::weyl_orbit_size(n).map_err(py_err)
}

#[pyfunction]
fn casimir_n4_monomial(index: u32, s: [Complex64; 3]) -> PyResult<Complex64> {
    sln::casimir_n4_monomial(index, &s).map_err(py_err)
}

/// `(eps, thickening term, spectral term)` for `SL(n)`.
#[pyfunction]
fn epsilon_optimizer_sln(n: usize, t: Vec<f64>, norm_gamma: f64, norm_1inf: f64) -> PyResult<(f64, f64, f64)> {
    let c = sln::epsilon_optimizer_sln(n, &t, norm_gamma, norm_1inf).map_err(py_err)?;
    Ok((c.eps, c.thickening_term, c.spectral_term))
}

/// Runs an experiment from config text; returns rows
/// `(T, value, reference, abs_error)` and the overall verdict.
#[pyfunction]
fn run_experiment(config: &str) -> PyResult<(Vec<(Vec<f64>, f64, f64, f64)>, bool)> {
    let cfg = ExperimentConfig::parse(config).map_err(py_err)?;
    let out = harness::run(&cfg).map_err(py_err)?;
    let pass = out.pass();
    Ok((
        out.rows
            .into_iter()
            .map(|r| (r.t, r.value, r.reference, r.abs_error))
            .collect(),
        pass,
    ))
}

#[pymodule]
fn pyhorospectral(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(exponent_budget, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_beta, m)?)?;
    m.add_function(wrap_pyfunction!(interpolation_weights, m)?)?;
    m.add_function(wrap_pyfunction!(interpolation_residual, m)?)?;
    m.add_function(wrap_pyfunction!(horocycle_average, m)?)?;
    m.add_function(wrap_pyfunction!(hyperbolic_average, m)?)?;
    m.add_function(wrap_pyfunction!(thickened_averages, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_from_nu, m)?)?;
    m.add_function(wrap_pyfunction!(nu_orbit, m)?)?;
    m.add_function(wrap_pyfunction!(b_table, m)?)?;
    m.add_function(wrap_pyfunction!(i_cont, m)?)?;
    m.add_function(wrap_pyfunction!(weyl_orbit_size, m)?)?;
    m.add_function(wrap_pyfunction!(casimir_n4_monomial, m)?)?;
    m.add_function(wrap_pyfunction!(epsilon_optimizer_sln, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
