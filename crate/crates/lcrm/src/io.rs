//! File formats: the flat dataset CSV, posterior CSV + JSON sidecar with
//! bit-exact reload, scenario/config JSON, run manifests, and hashing.
//!
//! Dataset schema, one row per (subject, occasion):
//! `subject_id, occasion, theta_y, x_1..x_p, theta_x, v_1..v_q[, theta_v]`
//! with per-subject fields repeated on every row and checked for
//! consistency. Angles are radians; zeros are encoded as exact `0`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::gibbs::{ChainConfig, PosteriorSamples};
use crate::model::{Dataset, ModelVariant, Occasion, SubjectRecord};

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Fingerprint of a dataset: the hash of its canonical CSV rendering.
pub fn dataset_hash(data: &Dataset) -> String {
    sha256_hex(dataset_to_csv_string(data).as_bytes())
}

/// Angle-ingestion transforms applied when reading raw files.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct IngestOptions {
    /// Interpret angle columns as degrees.
    pub degrees: bool,
    /// Fold axial data: multiply angles by 4 before wrapping.
    pub axis_times_4: bool,
}

impl IngestOptions {
    fn convert(&self, raw: f64) -> Result<Angle> {
        let mut v = raw;
        if self.axis_times_4 {
            v *= 4.0;
        }
        if self.degrees {
            v = v.to_radians();
        }
        Angle::wrap(v)
    }
}

pub fn dataset_to_csv_string(data: &Dataset) -> String {
    let mut header = vec!["subject_id".to_string(), "occasion".to_string(), "theta_y".to_string()];
    for k in 1..=data.p() {
        header.push(format!("x_{k}"));
    }
    header.push("theta_x".into());
    for k in 1..=data.q() {
        header.push(format!("v_{k}"));
    }
    if data.has_theta_v() {
        header.push("theta_v".into());
    }
    let mut out = header.join(",");
    out.push('\n');
    for s in data.subjects() {
        for (j, occ) in s.occasions.iter().enumerate() {
            let mut fields = vec![s.subject_id.clone(), (j + 1).to_string(), fmt_f64(occ.theta_y.radians())];
            fields.extend(occ.x.iter().map(|x| fmt_f64(*x)));
            fields.push(fmt_f64(s.theta_x.radians()));
            fields.extend(s.v.iter().map(|v| fmt_f64(*v)));
            if let Some(tv) = s.theta_v {
                fields.push(fmt_f64(tv.radians()));
            }
            out.push_str(&fields.join(","));
            out.push('\n');
        }
    }
    out
}

/// Shortest representation that round-trips through `parse::<f64>`.
fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

pub fn write_dataset(path: &Path, data: &Dataset) -> Result<()> {
    fs::write(path, dataset_to_csv_string(data))?;
    Ok(())
}

pub fn read_dataset(path: &Path, opts: &IngestOptions) -> Result<Dataset> {
    let text = fs::read_to_string(path)?;
    read_dataset_str(&text, opts)
}

pub fn read_dataset_str(text: &str, opts: &IngestOptions) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Format(format!("cannot read header: {e}")))?
        .clone();
    let names: Vec<&str> = headers.iter().collect();
    let find = |name: &str| names.iter().position(|n| *n == name);
    let idx_subject = find("subject_id").ok_or_else(|| Error::Format("missing column subject_id".into()))?;
    let idx_theta_y = find("theta_y").ok_or_else(|| Error::Format("missing column theta_y".into()))?;
    let idx_theta_x = find("theta_x").ok_or_else(|| Error::Format("missing column theta_x".into()))?;
    let idx_theta_v = find("theta_v");
    let x_cols: Vec<usize> = (1..)
        .map_while(|k| find(&format!("x_{k}")))
        .collect();
    let v_cols: Vec<usize> = (1..)
        .map_while(|k| find(&format!("v_{k}")))
        .collect();

    struct Partial {
        occasions: Vec<Occasion>,
        theta_x: Angle,
        v: Vec<f64>,
        theta_v: Option<Angle>,
    }
    let mut order: Vec<String> = Vec::new();
    let mut by_subject: std::collections::HashMap<String, Partial> = std::collections::HashMap::new();

    for (row_i, record) in reader.records().enumerate() {
        let line = row_i + 2;
        let record = record.map_err(|e| Error::Format(format!("line {line}: {e}")))?;
        let get = |idx: usize| -> Result<f64> {
            record
                .get(idx)
                .ok_or_else(|| Error::Format(format!("line {line}: missing field {idx}")))?
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Format(format!("line {line}: bad number: {e}")))
        };
        let subject_id = record
            .get(idx_subject)
            .ok_or_else(|| Error::Format(format!("line {line}: missing subject_id")))?
            .to_string();
        let theta_y = opts.convert(get(idx_theta_y)?)
            .map_err(|e| Error::Format(format!("line {line}: theta_y: {e}")))?;
        let theta_x = opts.convert(get(idx_theta_x)?)
            .map_err(|e| Error::Format(format!("line {line}: theta_x: {e}")))?;
        let x: Vec<f64> = x_cols.iter().map(|&c| get(c)).collect::<Result<_>>()?;
        let v: Vec<f64> = v_cols.iter().map(|&c| get(c)).collect::<Result<_>>()?;
        let theta_v = match idx_theta_v {
            Some(c) => Some(
                opts.convert(get(c)?)
                    .map_err(|e| Error::Format(format!("line {line}: theta_v: {e}")))?,
            ),
            None => None,
        };

        match by_subject.get_mut(&subject_id) {
            Some(partial) => {
                if partial.theta_x != theta_x
                    || partial.v != v
                    || partial.theta_v != theta_v
                {
                    return Err(Error::Format(format!(
                        "line {line}: per-subject fields differ from earlier rows of subject {subject_id}"
                    )));
                }
                partial.occasions.push(Occasion { theta_y, x });
            }
            None => {
                order.push(subject_id.clone());
                by_subject.insert(
                    subject_id,
                    Partial { occasions: vec![Occasion { theta_y, x }], theta_x, v, theta_v },
                );
            }
        }
    }

    let subjects: Vec<SubjectRecord> = order
        .into_iter()
        .map(|id| {
            let p = by_subject.remove(&id).expect("subject collected above");
            SubjectRecord {
                subject_id: id,
                occasions: p.occasions,
                theta_x: p.theta_x,
                v: p.v,
                theta_v: p.theta_v,
            }
        })
        .collect();
    Dataset::new(subjects)
}

/// Sidecar persisted beside the posterior CSV; reload is bit-exact.
#[derive(Serialize, Deserialize)]
struct PosteriorSidecar {
    tool_version: String,
    config: ChainConfig,
    variant: ModelVariant,
    dataset_hash: String,
    names: Vec<String>,
    fitted_y_mean: Vec<Vec<(f64, f64)>>,
}

pub fn write_posterior(dir: &Path, samples: &PosteriorSamples) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir)?;
    let csv_path = dir.join("posterior.csv");
    let mut out = samples.names.join(",");
    out.push('\n');
    for row in &samples.draws {
        let line: Vec<String> = row.iter().map(|x| fmt_f64(*x)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    fs::write(&csv_path, out)?;

    let sidecar = PosteriorSidecar {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: samples.config,
        variant: samples.variant,
        dataset_hash: samples.dataset_hash.clone(),
        names: samples.names.clone(),
        fitted_y_mean: samples.fitted_y_mean.clone(),
    };
    let json_path = dir.join("posterior.json");
    fs::write(&json_path, serde_json::to_string_pretty(&sidecar).expect("serializable sidecar"))?;
    Ok((csv_path, json_path))
}

pub fn read_posterior(dir: &Path) -> Result<PosteriorSamples> {
    let sidecar: PosteriorSidecar = serde_json::from_str(&fs::read_to_string(dir.join("posterior.json"))?)
        .map_err(|e| Error::Format(format!("posterior sidecar: {e}")))?;
    let text = fs::read_to_string(dir.join("posterior.csv"))?;
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Format("posterior.csv is empty".into()))?;
    let names: Vec<String> = header.split(',').map(String::from).collect();
    if names != sidecar.names {
        return Err(Error::Format("posterior.csv header disagrees with sidecar".into()));
    }
    let mut draws = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|tok| tok.parse::<f64>().map_err(|e| Error::Format(format!("line {}: {e}", i + 2))))
            .collect::<Result<_>>()?;
        if row.len() != names.len() {
            return Err(Error::Format(format!("line {}: expected {} fields", i + 2, names.len())));
        }
        draws.push(row);
    }
    Ok(PosteriorSamples {
        names,
        draws,
        config: sidecar.config,
        variant: sidecar.variant,
        dataset_hash: sidecar.dataset_hash,
        fitted_y_mean: sidecar.fitted_y_mean,
    })
}

/// Provenance record written into every output directory.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub config_hash: String,
    pub dataset_hash: String,
    pub seed: u64,
    pub wall_clock_secs: f64,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join("manifest.json");
        fs::write(&path, serde_json::to_string_pretty(self).expect("serializable manifest"))?;
        Ok(path)
    }
}
