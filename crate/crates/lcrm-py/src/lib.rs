//! Python bindings: the circular-density primitives, the samplers, and a
//! whole-fit entry point operating on CSV text.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use lcrm::angle::ArcInterval;
use lcrm::density::{Cov2, Mean2};
use lcrm::gibbs::ChainConfig;
use lcrm::io::IngestOptions;
use lcrm::model::CensoringSpec;
use lcrm::rng::RngStream;
use lcrm::samplers::TpnMode;

fn err(e: lcrm::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn cov(s11: f64, s22: f64, rho: f64) -> PyResult<Cov2> {
    Cov2::new(s11, s22, rho).map_err(err)
}

fn mean(mu1: f64, mu2: f64) -> PyResult<Mean2> {
    Mean2::new(mu1, mu2).map_err(err)
}

fn parse_mode(mode: &str) -> PyResult<TpnMode> {
    match mode {
        "exact-rejection" | "exact" => Ok(TpnMode::ExactRejection),
        "paper-composite" | "composite" => Ok(TpnMode::PaperComposite),
        other => Err(PyValueError::new_err(format!(
            "unknown TPN mode {other}; expected exact-rejection or paper-composite"
        ))),
    }
}

/// Wrap a radian value into (−π, π].
#[pyfunction]
fn wrap(theta: f64) -> PyResult<f64> {
    Ok(lcrm::wrap(theta).map_err(err)?.radians())
}

/// Two-argument arctangent with the sgn(0) = +1 convention.
#[pyfunction]
fn atan2_paper(s: f64, c: f64) -> PyResult<f64> {
    Ok(lcrm::atan2_paper(s, c).map_err(err)?.radians())
}

/// Projected-normal density of an angle.
#[pyfunction]
#[pyo3(signature = (theta, mu1, mu2, s11 = 1.0, s22 = 1.0, rho = 0.0))]
fn pn_density(theta: f64, mu1: f64, mu2: f64, s11: f64, s22: f64, rho: f64) -> PyResult<f64> {
    let angle = lcrm::wrap(theta).map_err(err)?;
    Ok(lcrm::density::pn_density(angle, mean(mu1, mu2)?, cov(s11, s22, rho)?))
}

/// Arc mass of the unit-covariance projected normal on (delta1, delta2).
#[pyfunction]
fn tpn_mass(mu1: f64, mu2: f64, delta1: f64, delta2: f64) -> PyResult<f64> {
    let arc = ArcInterval::new(delta1, delta2).map_err(err)?;
    Ok(lcrm::density::tpn_mass(mean(mu1, mu2)?, &arc))
}

/// Mean direction (None when undefined) and resultant length.
#[pyfunction]
#[pyo3(signature = (mu1, mu2, s11 = 1.0, s22 = 1.0, rho = 0.0))]
fn mean_direction(
    mu1: f64,
    mu2: f64,
    s11: f64,
    s22: f64,
    rho: f64,
) -> PyResult<(Option<f64>, f64)> {
    let (dir, resultant) =
        lcrm::density::mean_direction_and_resultant(mean(mu1, mu2)?, cov(s11, s22, rho)?);
    Ok((dir.map(|a| a.radians()), resultant))
}

/// Mean direction, its derivative, and the squared-concentration rate for
/// a single-covariate regression.
#[pyfunction]
fn slope_diagnostics(beta1: (f64, f64), beta2: (f64, f64), x: f64) -> PyResult<(f64, f64, f64)> {
    let (m, mp, rate) = lcrm::density::slope_diagnostics(beta1, beta2, x).map_err(err)?;
    Ok((m.radians(), mp, rate))
}

/// Rebuild (σ₁², σ₂², ρ) from the sampling parameterization (s₁, τ).
#[pyfunction]
fn reconstruct_sigma_b(s1: f64, tau: f64) -> PyResult<(f64, f64, f64)> {
    let c = lcrm::reconstruct_sigma_b(s1, tau).map_err(err)?;
    Ok((c.s11(), c.s22(), c.rho()))
}

/// Draws from the truncated projected normal on an arc.
#[pyfunction]
#[pyo3(signature = (mu1, mu2, delta1, delta2, n, seed, mode = "exact-rejection"))]
fn sample_tpn(
    mu1: f64,
    mu2: f64,
    delta1: f64,
    delta2: f64,
    n: usize,
    seed: u64,
    mode: &str,
) -> PyResult<Vec<f64>> {
    let arc = ArcInterval::new(delta1, delta2).map_err(err)?;
    let mu = mean(mu1, mu2)?;
    let mode = parse_mode(mode)?;
    let mut rng = RngStream::new(seed, 0).rng();
    (0..n)
        .map(|_| Ok(lcrm::sample_tpn(&mut rng, mu, &arc, mode).map_err(err)?.radians()))
        .collect()
}

/// Draws from a truncated normal; pass float('inf') for open bounds.
#[pyfunction]
fn sample_truncated_normal(mu: f64, var: f64, a: f64, b: f64, n: usize, seed: u64) -> PyResult<Vec<f64>> {
    let mut rng = RngStream::new(seed, 0).rng();
    (0..n)
        .map(|_| lcrm::sample_truncated_normal(&mut rng, mu, var, a, b).map_err(err))
        .collect()
}

/// Highest-posterior-density interval of a sample.
#[pyfunction]
#[pyo3(signature = (samples, mass = 0.95))]
fn hpd_interval(samples: Vec<f64>, mass: f64) -> PyResult<(f64, f64)> {
    let h = lcrm::diagnostics::hpd(&samples, mass).map_err(err)?;
    Ok((h.lo, h.hi))
}

/// Geweke convergence score with the 10%/50% segments.
#[pyfunction]
fn geweke_z(samples: Vec<f64>) -> PyResult<f64> {
    lcrm::diagnostics::geweke_z(&samples, 0.1, 0.5).map_err(err)
}

/// Generate a preset scenario dataset and return it as CSV text.
#[pyfunction]
#[pyo3(signature = (preset, n = None, seed = 1))]
fn simulate_preset(preset: &str, n: Option<usize>, seed: u64) -> PyResult<String> {
    let spec = lcrm::simulate::presets::by_name(preset, n, seed)
        .ok_or_else(|| PyValueError::new_err(format!("unknown preset {preset}")))?;
    let mut rng = RngStream::new(spec.seed, 0).rng();
    let data = lcrm::simulate::generate_dataset(&mut rng, &spec).map_err(err)?;
    Ok(lcrm::io::dataset_to_csv_string(&data))
}

/// The bundled astigmatism-schema fixture as CSV text.
#[pyfunction]
fn fixture_csv() -> PyResult<String> {
    let data = lcrm::fixture::astigmatism_fixture().map_err(err)?;
    Ok(lcrm::io::dataset_to_csv_string(&data))
}

/// Validate a dataset CSV; returns the human-readable report.
#[pyfunction]
#[pyo3(signature = (csv_text, delta_y = 0.035, delta_x = 0.035))]
fn validate_csv(csv_text: &str, delta_y: f64, delta_x: f64) -> PyResult<String> {
    let data = lcrm::io::read_dataset_str(csv_text, &IngestOptions::default()).map_err(err)?;
    let spec = CensoringSpec::symmetric(delta_y, delta_x).map_err(err)?;
    Ok(lcrm::validate_dataset(&data, &spec).to_string())
}

/// Fit the model to a dataset CSV with a JSON config (same schema as the
/// CLI); returns (column names, kept draws).
#[pyfunction]
#[pyo3(signature = (csv_text, config_json = "{}"))]
fn fit_csv(csv_text: &str, config_json: &str) -> PyResult<(Vec<String>, Vec<Vec<f64>>)> {
    let config: lcrm::cli::FitConfig =
        serde_json_from(config_json).map_err(|e| PyValueError::new_err(format!("config: {e}")))?;
    let data = lcrm::io::read_dataset_str(csv_text, &IngestOptions::default()).map_err(err)?;
    let censoring = CensoringSpec::symmetric(config.delta_y, config.delta_x).map_err(err)?;
    let variant = config.variant().map_err(err)?;
    let priors = config.priors(&data).map_err(err)?;
    let chain: ChainConfig = config.chain();
    let samples = lcrm::run_chain(&data, &censoring, variant, &priors, &chain).map_err(err)?;
    Ok((samples.names, samples.draws))
}

fn serde_json_from<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, String> {
    serde_json::from_str(text).map_err(|e| e.to_string())
}

#[pymodule]
fn lcrm_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(wrap, m)?)?;
    m.add_function(wrap_pyfunction!(atan2_paper, m)?)?;
    m.add_function(wrap_pyfunction!(pn_density, m)?)?;
    m.add_function(wrap_pyfunction!(tpn_mass, m)?)?;
    m.add_function(wrap_pyfunction!(mean_direction, m)?)?;
    m.add_function(wrap_pyfunction!(slope_diagnostics, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct_sigma_b, m)?)?;
    m.add_function(wrap_pyfunction!(sample_tpn, m)?)?;
    m.add_function(wrap_pyfunction!(sample_truncated_normal, m)?)?;
    m.add_function(wrap_pyfunction!(hpd_interval, m)?)?;
    m.add_function(wrap_pyfunction!(geweke_z, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_preset, m)?)?;
    m.add_function(wrap_pyfunction!(fixture_csv, m)?)?;
    m.add_function(wrap_pyfunction!(validate_csv, m)?)?;
    m.add_function(wrap_pyfunction!(fit_csv, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
