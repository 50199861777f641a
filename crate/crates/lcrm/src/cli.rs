//! Command implementations behind the `lcrm` binary: simulate, fit,
//! replicate, compare, predict, validate. Each command writes its outputs
//! plus a manifest recording hashes, seed and wall clock.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::diagnostics::{
    angle_grid, donut_points, geweke_z, hpd, posterior_predictive_density, significance_ellipse,
    Ellipse, HpdInterval, PredictiveSpec,
};
use crate::error::{Error, Result};
use crate::gibbs::{run_chain, ChainConfig, PosteriorSamples};
use crate::io::{
    dataset_hash, read_dataset, sha256_hex, write_dataset, write_posterior, IngestOptions,
    RunManifest,
};
use crate::model::{validate_dataset, CensoringSpec, Dataset, ModelVariant, PriorSpec};
use crate::samplers::TpnMode;
use crate::simulate::{
    compare_models, generate_dataset, presets, run_replication_study, PriorChoice, ReplicationReport,
    ScenarioSpec,
};

fn default_iterations() -> usize {
    100_000
}
fn default_burn_in() -> usize {
    40_000
}
fn default_thin() -> usize {
    10
}
fn default_variant() -> String {
    "model1".into()
}
fn default_prior() -> String {
    "choice1".into()
}
fn default_delta() -> f64 {
    0.035
}
fn default_tpn_mode() -> TpnMode {
    TpnMode::ExactRejection
}

/// JSON fit configuration (versioned by the tool release).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitConfig {
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    #[serde(default = "default_burn_in")]
    pub burn_in: usize,
    #[serde(default = "default_thin")]
    pub thin: usize,
    #[serde(default)]
    pub seed: u64,
    /// "model1" (both stages zero-inflated), "model2" (neither),
    /// "model3" (response only).
    #[serde(default = "default_variant")]
    pub variant: String,
    #[serde(default)]
    pub random_zeros: bool,
    #[serde(default = "default_tpn_mode")]
    pub tpn_mode: TpnMode,
    #[serde(default)]
    pub full_conditional_x: bool,
    #[serde(default)]
    pub exact_tau: bool,
    /// "choice1" or "choice2".
    #[serde(default = "default_prior")]
    pub prior: String,
    #[serde(default = "default_delta")]
    pub delta_y: f64,
    #[serde(default = "default_delta")]
    pub delta_x: f64,
    /// Beta hyperparameters for the random-zero probabilities.
    #[serde(default)]
    pub eta_prior: Option<(f64, f64, f64, f64)>,
    /// Predictive curves to emit after the fit.
    #[serde(default)]
    pub predictive: Vec<PredictiveSpec>,
}

impl Default for FitConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults deserialize")
    }
}

impl FitConfig {
    pub fn variant(&self) -> Result<ModelVariant> {
        let base = match self.variant.as_str() {
            "model1" | "model-i" => ModelVariant::model_i(),
            "model2" | "model-ii" => ModelVariant::model_ii(),
            "model3" | "model-iii" => ModelVariant::model_iii(),
            other => {
                return Err(Error::Validation(format!(
                    "unknown variant {other}; expected model1, model2 or model3"
                )))
            }
        };
        if self.random_zeros && base != ModelVariant::model_i() {
            return Err(Error::Validation(
                "random_zeros requires variant model1 (both stages zero-inflated)".into(),
            ));
        }
        Ok(if self.random_zeros { base.with_random_zeros() } else { base })
    }

    pub fn chain(&self) -> ChainConfig {
        ChainConfig {
            iterations: self.iterations,
            burn_in: self.burn_in,
            thin: self.thin,
            seed: self.seed,
            tpn_mode: self.tpn_mode,
            full_conditional_x: self.full_conditional_x,
            exact_tau: self.exact_tau,
        }
    }

    pub fn priors(&self, data: &Dataset) -> Result<PriorSpec> {
        let choice = match self.prior.as_str() {
            "choice1" | "choice-i" => PriorChoice::ChoiceI,
            "choice2" | "choice-ii" => PriorChoice::ChoiceII,
            other => {
                return Err(Error::Validation(format!(
                    "unknown prior preset {other}; expected choice1 or choice2"
                )))
            }
        };
        let mut priors = choice.build(data.stage1_dim(), data.stage2_dim());
        if let Some((c_y, d_y, c_x, d_x)) = self.eta_prior {
            priors.c_y = c_y;
            priors.d_y = d_y;
            priors.c_x = c_x;
            priors.d_x = d_x;
        }
        Ok(priors)
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Format(format!("{what} {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, text)?;
    Ok(())
}

fn relative_names(paths: &[PathBuf], dir: &Path) -> Vec<String> {
    paths
        .iter()
        .map(|p| p.strip_prefix(dir).unwrap_or(p).display().to_string())
        .collect()
}

/// `simulate`: scenario (file or preset) → dataset CSV + truth sidecar.
pub fn cmd_simulate(
    scenario_file: Option<&Path>,
    preset: Option<&str>,
    n: Option<usize>,
    seed: Option<u64>,
    out_dir: &Path,
) -> Result<()> {
    let started = Instant::now();
    let mut spec: ScenarioSpec = match (scenario_file, preset) {
        (Some(path), _) => read_json(path, "scenario")?,
        (None, Some(name)) => presets::by_name(name, n, seed.unwrap_or(1))
            .ok_or_else(|| Error::Validation(format!("unknown preset {name}; expected table1..table7")))?,
        (None, None) => return Err(Error::Validation("simulate needs --scenario or --preset".into())),
    };
    if let Some(n) = n {
        spec.n = n;
    }
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    spec.validate()?;

    fs::create_dir_all(out_dir)?;
    let mut rng = crate::rng::RngStream::new(spec.seed, 0).rng();
    let data = generate_dataset(&mut rng, &spec)?;
    let data_path = out_dir.join("dataset.csv");
    write_dataset(&data_path, &data)?;
    let truth_path = out_dir.join("truth.json");
    write_text(&truth_path, &serde_json::to_string_pretty(&spec).expect("serializable scenario"))?;

    let outputs = vec![data_path, truth_path];
    RunManifest {
        command: "simulate".into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        config_hash: sha256_hex(serde_json::to_string(&spec).expect("serializable").as_bytes()),
        dataset_hash: dataset_hash(&data),
        seed: spec.seed,
        wall_clock_secs: started.elapsed().as_secs_f64(),
        outputs: relative_names(&outputs, out_dir),
    }
    .write(out_dir)?;
    println!(
        "wrote {} subjects ({} rows, {:.1}% response zeros, {:.1}% covariate zeros) to {}",
        data.n(),
        data.n_obs(),
        100.0 * data.zero_prop_y(),
        100.0 * data.zero_prop_x(),
        out_dir.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct EllipseRecord {
    pair: (String, String),
    #[serde(flatten)]
    ellipse: Ellipse,
}

/// `fit`: dataset + config → posterior, diagnostics bundle, manifest.
pub fn cmd_fit(
    data_path: &Path,
    config_path: Option<&Path>,
    out_dir: &Path,
    ingest: &IngestOptions,
) -> Result<()> {
    cmd_fit_with_overrides(data_path, config_path, out_dir, ingest, None, false)
}

/// As [`cmd_fit`] with command-line overrides for the variant flags.
pub fn cmd_fit_with_overrides(
    data_path: &Path,
    config_path: Option<&Path>,
    out_dir: &Path,
    ingest: &IngestOptions,
    variant_override: Option<&str>,
    random_zeros: bool,
) -> Result<()> {
    let started = Instant::now();
    let mut config: FitConfig = match config_path {
        Some(path) => read_json(path, "fit config")?,
        None => FitConfig::default(),
    };
    if let Some(v) = variant_override {
        config.variant = v.to_string();
    }
    if random_zeros {
        config.random_zeros = true;
    }
    let data = read_dataset(data_path, ingest)?;
    let censoring = CensoringSpec::symmetric(config.delta_y, config.delta_x)?;
    let report = validate_dataset(&data, &censoring);
    if !report.is_clean() {
        return Err(Error::Validation(format!("dataset failed validation:\n{report}")));
    }
    let variant = config.variant()?;
    let priors = config.priors(&data)?;
    let chain_cfg = config.chain();
    let samples = run_chain(&data, &censoring, variant, &priors, &chain_cfg)?;

    fs::create_dir_all(out_dir)?;
    let (csv_path, sidecar_path) = write_posterior(out_dir, &samples)?;
    let mut outputs = vec![csv_path, sidecar_path];
    outputs.extend(write_diagnostics_bundle(out_dir, &samples, &data)?);
    for (k, pspec) in config.predictive.iter().enumerate() {
        let path = out_dir.join(format!("predictive_{k}.csv"));
        write_predictive_curve(&path, &samples, pspec, chain_cfg.seed)?;
        outputs.push(path);
    }

    RunManifest {
        command: "fit".into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        config_hash: sha256_hex(serde_json::to_string(&config).expect("serializable").as_bytes()),
        dataset_hash: samples.dataset_hash.clone(),
        seed: chain_cfg.seed,
        wall_clock_secs: started.elapsed().as_secs_f64(),
        outputs: relative_names(&outputs, out_dir),
    }
    .write(out_dir)?;
    println!(
        "kept {} draws over {} parameters; outputs in {}",
        samples.n_kept(),
        samples.names.len(),
        out_dir.display()
    );
    Ok(())
}

fn write_diagnostics_bundle(
    out_dir: &Path,
    samples: &PosteriorSamples,
    data: &Dataset,
) -> Result<Vec<PathBuf>> {
    let mut outputs = Vec::new();

    let mut geweke: Vec<(String, f64)> = Vec::new();
    let mut hpds: Vec<(String, HpdInterval)> = Vec::new();
    for name in &samples.names {
        let col = samples.column(name)?;
        geweke.push((name.clone(), geweke_z(&col, 0.1, 0.5)?));
        hpds.push((name.clone(), hpd(&col, 0.95)?));
    }
    let geweke_path = out_dir.join("geweke.json");
    let geweke_map: std::collections::BTreeMap<String, f64> = geweke.into_iter().collect();
    write_text(&geweke_path, &serde_json::to_string_pretty(&geweke_map).expect("serializable"))?;
    outputs.push(geweke_path);

    let hpd_path = out_dir.join("hpd.json");
    let hpd_map: std::collections::BTreeMap<String, HpdInterval> = hpds.into_iter().collect();
    write_text(&hpd_path, &serde_json::to_string_pretty(&hpd_map).expect("serializable"))?;
    outputs.push(hpd_path);

    // Pairwise significance ellipses for matching Stage-I and Stage-II
    // coefficient pairs.
    let mut records = Vec::new();
    for name in &samples.names {
        if let Some(suffix) = name.strip_prefix("beta1_") {
            let partner = format!("beta2_{suffix}");
            if samples.column_index(&partner).is_some() {
                let e = significance_ellipse(&samples.column(name)?, &samples.column(&partner)?, 0.95)?;
                records.push(EllipseRecord { pair: (name.clone(), partner), ellipse: e });
            }
        }
        if let Some(suffix) = name.strip_prefix("alpha1_") {
            let partner = format!("alpha2_{suffix}");
            if samples.column_index(&partner).is_some() {
                let e = significance_ellipse(&samples.column(name)?, &samples.column(&partner)?, 0.95)?;
                records.push(EllipseRecord { pair: (name.clone(), partner), ellipse: e });
            }
        }
    }
    let ellipse_path = out_dir.join("ellipses.json");
    write_text(&ellipse_path, &serde_json::to_string_pretty(&records).expect("serializable"))?;
    outputs.push(ellipse_path);

    // Donut-plot points from the posterior-mean predicted angles.
    let predicted = samples.predicted_angles()?;
    let mut donut_csv = String::from("subject_id,occasion,observed,predicted,x,y,clockwise\n");
    for (i, subj) in data.subjects().iter().enumerate() {
        let observed: Vec<Angle> = subj.occasions.iter().map(|o| o.theta_y).collect();
        let points = donut_points(&observed, &predicted[i])?;
        for (j, pt) in points.iter().enumerate() {
            donut_csv.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                subj.subject_id,
                j + 1,
                observed[j].radians(),
                predicted[i][j].radians(),
                pt.x,
                pt.y,
                pt.clockwise
            ));
        }
    }
    let donut_path = out_dir.join("donut.csv");
    write_text(&donut_path, &donut_csv)?;
    outputs.push(donut_path);
    Ok(outputs)
}

fn write_predictive_curve(
    path: &Path,
    samples: &PosteriorSamples,
    spec: &PredictiveSpec,
    seed: u64,
) -> Result<()> {
    let grid = angle_grid(1024);
    let curve = posterior_predictive_density(samples, spec, &grid, seed)?;
    let mut out = String::from("theta,density\n");
    for (theta, dens) in grid.iter().zip(&curve) {
        out.push_str(&format!("{theta},{dens}\n"));
    }
    write_text(path, &out)
}

/// `replicate`: scenario → replication report files.
pub fn cmd_replicate(
    scenario_file: Option<&Path>,
    preset: Option<&str>,
    n: Option<usize>,
    seed: Option<u64>,
    out_dir: &Path,
    paper_scale: bool,
    jobs: Option<usize>,
) -> Result<()> {
    let started = Instant::now();
    let mut spec = load_scenario(scenario_file, preset, n, seed)?;
    let cfg = scale_chain(&mut spec, paper_scale);
    configure_jobs(jobs)?;
    let report = run_replication_study(&spec, &cfg)?;
    let outputs = write_report_files(out_dir, &report, "report")?;
    RunManifest {
        command: "replicate".into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        config_hash: sha256_hex(serde_json::to_string(&spec).expect("serializable").as_bytes()),
        dataset_hash: String::new(),
        seed: spec.seed,
        wall_clock_secs: started.elapsed().as_secs_f64(),
        outputs: relative_names(&outputs, out_dir),
    }
    .write(out_dir)?;
    print!("{}", report.render_table());
    Ok(())
}

/// `compare`: Model-I/II/III on shared replicate datasets plus a timing
/// table.
pub fn cmd_compare(
    scenario_file: Option<&Path>,
    preset: Option<&str>,
    n: Option<usize>,
    seed: Option<u64>,
    out_dir: &Path,
    paper_scale: bool,
    jobs: Option<usize>,
) -> Result<()> {
    let started = Instant::now();
    let mut spec = load_scenario(scenario_file, preset, n, seed)?;
    let cfg = scale_chain(&mut spec, paper_scale);
    configure_jobs(jobs)?;
    let reports = compare_models(&spec, &cfg)?;
    let mut outputs = Vec::new();
    let labels = ["model1", "model2", "model3"];
    for (report, label) in reports.iter().zip(labels) {
        outputs.extend(write_report_files(out_dir, report, label)?);
    }
    let mut timing = String::from("model,mean_fit_minutes\n");
    for (report, label) in reports.iter().zip(labels) {
        timing.push_str(&format!("{label},{}\n", report.mean_fit_secs / 60.0));
    }
    let timing_path = out_dir.join("timing.csv");
    write_text(&timing_path, &timing)?;
    outputs.push(timing_path);
    RunManifest {
        command: "compare".into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        config_hash: sha256_hex(serde_json::to_string(&spec).expect("serializable").as_bytes()),
        dataset_hash: String::new(),
        seed: spec.seed,
        wall_clock_secs: started.elapsed().as_secs_f64(),
        outputs: relative_names(&outputs, out_dir),
    }
    .write(out_dir)?;
    for (report, label) in reports.iter().zip(labels) {
        println!("== {label} ==");
        print!("{}", report.render_table());
    }
    Ok(())
}

/// `predict`: posterior directory + predictive spec file → density curves.
pub fn cmd_predict(posterior_dir: &Path, spec_file: &Path, out_dir: &Path) -> Result<()> {
    let started = Instant::now();
    let samples = crate::io::read_posterior(posterior_dir)?;
    let specs: Vec<PredictiveSpec> = read_json(spec_file, "predictive spec")?;
    fs::create_dir_all(out_dir)?;
    let mut outputs = Vec::new();
    for (k, pspec) in specs.iter().enumerate() {
        let path = out_dir.join(format!("predictive_{k}.csv"));
        write_predictive_curve(&path, &samples, pspec, samples.config.seed)?;
        outputs.push(path);
    }
    RunManifest {
        command: "predict".into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        config_hash: sha256_hex(serde_json::to_string(&specs).expect("serializable").as_bytes()),
        dataset_hash: samples.dataset_hash.clone(),
        seed: samples.config.seed,
        wall_clock_secs: started.elapsed().as_secs_f64(),
        outputs: relative_names(&outputs, out_dir),
    }
    .write(out_dir)?;
    println!("wrote {} predictive curves to {}", specs.len(), out_dir.display());
    Ok(())
}

/// `validate`: structural and censoring checks; nonzero exit on issues.
pub fn cmd_validate(data_path: &Path, delta_y: f64, delta_x: f64, ingest: &IngestOptions) -> Result<()> {
    let data = read_dataset(data_path, ingest)?;
    let censoring = CensoringSpec::symmetric(delta_y, delta_x)?;
    let report = validate_dataset(&data, &censoring);
    println!("{report}");
    if report.is_clean() {
        Ok(())
    } else {
        Err(Error::Validation(format!("{} issue(s) found", report.issues.len())))
    }
}

fn load_scenario(
    scenario_file: Option<&Path>,
    preset: Option<&str>,
    n: Option<usize>,
    seed: Option<u64>,
) -> Result<ScenarioSpec> {
    let mut spec: ScenarioSpec = match (scenario_file, preset) {
        (Some(path), _) => read_json(path, "scenario")?,
        (None, Some(name)) => presets::by_name(name, n, seed.unwrap_or(1))
            .ok_or_else(|| Error::Validation(format!("unknown preset {name}")))?,
        (None, None) => return Err(Error::Validation("need --scenario or --preset".into())),
    };
    if let Some(n) = n {
        spec.n = n;
    }
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    spec.validate()?;
    Ok(spec)
}

/// Desk-scale chains by default; `--paper-scale` restores the full
/// 500-replicate, 100k-iteration settings.
fn scale_chain(spec: &mut ScenarioSpec, paper_scale: bool) -> ChainConfig {
    if paper_scale {
        spec.replications = 500;
        ChainConfig::default_sim(spec.seed)
    } else {
        ChainConfig::desk(spec.seed)
    }
}

fn configure_jobs(jobs: Option<usize>) -> Result<()> {
    if let Some(n) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Error::Fit(format!("cannot configure thread pool: {e}")))?;
    }
    Ok(())
}

fn write_report_files(out_dir: &Path, report: &ReplicationReport, stem: &str) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let csv_path = out_dir.join(format!("{stem}.csv"));
    write_text(&csv_path, &report.to_csv())?;
    let txt_path = out_dir.join(format!("{stem}.txt"));
    write_text(&txt_path, &report.render_table())?;
    let json_path = out_dir.join(format!("{stem}.json"));
    write_text(&json_path, &serde_json::to_string_pretty(report).expect("serializable"))?;
    Ok(vec![csv_path, txt_path, json_path])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_config_defaults_follow_the_standard_run() {
        let cfg = FitConfig::default();
        assert_eq!(cfg.iterations, 100_000);
        assert_eq!(cfg.burn_in, 40_000);
        assert_eq!(cfg.thin, 10);
        assert_eq!(cfg.tpn_mode, TpnMode::ExactRejection);
        assert!(matches!(cfg.variant().unwrap(), v if v == ModelVariant::model_i()));
    }

    #[test]
    fn variant_strings_map_to_flags() {
        let mut cfg = FitConfig::default();
        cfg.variant = "model3".into();
        let v = cfg.variant().unwrap();
        assert!(v.zero_inflated_response && !v.zero_inflated_covariate && !v.random_zeros);
        // Random zeros ride on the full zero-inflation machinery only.
        cfg.random_zeros = true;
        assert!(cfg.variant().is_err());
        cfg.variant = "model1".into();
        assert!(cfg.variant().unwrap().random_zeros);
        cfg.variant = "nonsense".into();
        assert!(cfg.variant().is_err());
    }
}
