//! Data model, priors, parameter and latent state for the two-stage
//! longitudinal circular regression mixed-effects model.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::angle::{Angle, ArcInterval};
use crate::density::Cov2;
use crate::error::{Error, Result};

/// One follow-up measurement: the response angle plus its linear covariates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Occasion {
    pub theta_y: Angle,
    pub x: Vec<f64>,
}

/// All measurements for one subject. The circular covariate θ_X and the
/// instruments (v, θ_V) are per-subject; the response is longitudinal.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubjectRecord {
    pub subject_id: String,
    pub occasions: Vec<Occasion>,
    pub theta_x: Angle,
    pub v: Vec<f64>,
    pub theta_v: Option<Angle>,
}

/// Observed longitudinal records, dimension-checked at construction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Dataset {
    subjects: Vec<SubjectRecord>,
    p: usize,
    q: usize,
    has_theta_v: bool,
}

impl Dataset {
    pub fn new(subjects: Vec<SubjectRecord>) -> Result<Dataset> {
        if subjects.is_empty() {
            return Err(Error::Validation("dataset needs at least one subject".into()));
        }
        let first = &subjects[0];
        if first.occasions.is_empty() {
            return Err(Error::Validation(format!("subject {} has no occasions", first.subject_id)));
        }
        let p = first.occasions[0].x.len();
        let q = first.v.len();
        let has_theta_v = first.theta_v.is_some();
        for s in &subjects {
            if s.occasions.is_empty() {
                return Err(Error::Validation(format!("subject {} has no occasions", s.subject_id)));
            }
            if s.v.len() != q {
                return Err(Error::Validation(format!(
                    "subject {}: instrument length {} ≠ {}",
                    s.subject_id,
                    s.v.len(),
                    q
                )));
            }
            if s.theta_v.is_some() != has_theta_v {
                return Err(Error::Validation(format!(
                    "subject {}: circular instrument presence is inconsistent",
                    s.subject_id
                )));
            }
            for (j, occ) in s.occasions.iter().enumerate() {
                if occ.x.len() != p {
                    return Err(Error::Validation(format!(
                        "subject {} occasion {}: covariate length {} ≠ {}",
                        s.subject_id,
                        j + 1,
                        occ.x.len(),
                        p
                    )));
                }
            }
        }
        Ok(Dataset { subjects, p, q, has_theta_v })
    }

    pub fn subjects(&self) -> &[SubjectRecord] {
        &self.subjects
    }

    pub fn n(&self) -> usize {
        self.subjects.len()
    }

    pub fn n_obs(&self) -> usize {
        self.subjects.iter().map(|s| s.occasions.len()).sum()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn has_theta_v(&self) -> bool {
        self.has_theta_v
    }

    /// Length of the Stage-I design row (1, x, cos θ*_X, sin θ*_X).
    pub fn stage1_dim(&self) -> usize {
        self.p + 3
    }

    /// Length of the Stage-II design row (1, v[, cos θ_V, sin θ_V]).
    pub fn stage2_dim(&self) -> usize {
        self.q + 1 + if self.has_theta_v { 2 } else { 0 }
    }

    pub fn zero_count_y(&self) -> usize {
        self.subjects
            .iter()
            .flat_map(|s| s.occasions.iter())
            .filter(|o| o.theta_y.is_zero())
            .count()
    }

    pub fn zero_count_x(&self) -> usize {
        self.subjects.iter().filter(|s| s.theta_x.is_zero()).count()
    }

    pub fn zero_prop_y(&self) -> f64 {
        self.zero_count_y() as f64 / self.n_obs() as f64
    }

    pub fn zero_prop_x(&self) -> f64 {
        self.zero_count_x() as f64 / self.n() as f64
    }
}

/// Censoring arcs for the response and the circular covariate; both must
/// contain zero in their interior.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CensoringSpec {
    pub arc_y: ArcInterval,
    pub arc_x: ArcInterval,
}

impl CensoringSpec {
    pub fn new(arc_y: ArcInterval, arc_x: ArcInterval) -> Result<CensoringSpec> {
        for (name, arc) in [("response", &arc_y), ("covariate", &arc_x)] {
            if !arc.contains_zero() {
                return Err(Error::Domain(format!(
                    "{name} censoring arc ({}, {}) must contain 0 in its interior",
                    arc.delta1(),
                    arc.delta2()
                )));
            }
        }
        Ok(CensoringSpec { arc_y, arc_x })
    }

    /// Symmetric arcs (−δ_y, δ_y), (−δ_x, δ_x).
    pub fn symmetric(delta_y: f64, delta_x: f64) -> Result<CensoringSpec> {
        CensoringSpec::new(ArcInterval::symmetric(delta_y)?, ArcInterval::symmetric(delta_x)?)
    }
}

/// Which zero-inflation machinery a fit engages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelVariant {
    pub zero_inflated_response: bool,
    pub zero_inflated_covariate: bool,
    pub random_zeros: bool,
}

impl ModelVariant {
    /// Zero-inflation in both the response and the covariate.
    pub fn model_i() -> ModelVariant {
        ModelVariant { zero_inflated_response: true, zero_inflated_covariate: true, random_zeros: false }
    }

    /// No zero-inflation: zeros enter as observed angle 0.
    pub fn model_ii() -> ModelVariant {
        ModelVariant { zero_inflated_response: false, zero_inflated_covariate: false, random_zeros: false }
    }

    /// Zero-inflation in the longitudinal response only.
    pub fn model_iii() -> ModelVariant {
        ModelVariant { zero_inflated_response: true, zero_inflated_covariate: false, random_zeros: false }
    }

    /// The generalized fit where zeros arise from randomness as well as
    /// censoring.
    pub fn with_random_zeros(mut self) -> ModelVariant {
        self.random_zeros = true;
        self
    }
}

/// Conjugate prior hyperparameters. Vector/matrix dimensions must match
/// the design dimensions of the dataset being fitted.
#[derive(Clone, Debug)]
pub struct PriorSpec {
    pub mu_beta1: DVector<f64>,
    pub cov_beta1: DMatrix<f64>,
    pub mu_beta2: DVector<f64>,
    pub cov_beta2: DMatrix<f64>,
    pub mu_alpha1: DVector<f64>,
    pub cov_alpha1: DMatrix<f64>,
    pub mu_alpha2: DVector<f64>,
    pub cov_alpha2: DMatrix<f64>,
    pub lambda0: f64,
    pub nu0: f64,
    pub kappa0: f64,
    /// Beta prior for the random-zero probabilities (generalized model).
    pub c_y: f64,
    pub d_y: f64,
    pub c_x: f64,
    pub d_x: f64,
    /// Point-mass overrides for η; `Some(0.0)` reduces the generalized
    /// chain to the censoring-only chain draw for draw.
    pub eta_y_fixed: Option<f64>,
    pub eta_x_fixed: Option<f64>,
}

impl PriorSpec {
    fn vague(stage1_dim: usize, stage2_dim: usize, prior_var: f64, nu0: f64) -> PriorSpec {
        PriorSpec {
            mu_beta1: DVector::zeros(stage1_dim),
            cov_beta1: DMatrix::identity(stage1_dim, stage1_dim) * prior_var,
            mu_beta2: DVector::zeros(stage1_dim),
            cov_beta2: DMatrix::identity(stage1_dim, stage1_dim) * prior_var,
            mu_alpha1: DVector::zeros(stage2_dim),
            cov_alpha1: DMatrix::identity(stage2_dim, stage2_dim) * prior_var,
            mu_alpha2: DVector::zeros(stage2_dim),
            cov_alpha2: DMatrix::identity(stage2_dim, stage2_dim) * prior_var,
            lambda0: 1.0,
            nu0,
            kappa0: 0.01,
            c_y: 1.0,
            d_y: 1.0,
            c_x: 1.0,
            d_x: 1.0,
            eta_y_fixed: None,
            eta_x_fixed: None,
        }
    }

    /// Vague conjugate priors: N(0, 100·I), λ₀ = 1, ν₀ = 1, κ₀ = 0.01.
    pub fn choice_i(stage1_dim: usize, stage2_dim: usize) -> PriorSpec {
        PriorSpec::vague(stage1_dim, stage2_dim, 100.0, 1.0)
    }

    /// Flatter alternative: N(0, 1000·I) and ν₀ = 0.01.
    pub fn choice_ii(stage1_dim: usize, stage2_dim: usize) -> PriorSpec {
        PriorSpec::vague(stage1_dim, stage2_dim, 1000.0, 0.01)
    }

    pub fn validate_for(&self, data: &Dataset) -> Result<()> {
        let d1 = data.stage1_dim();
        let d2 = data.stage2_dim();
        let checks = [
            ("mu_beta1", self.mu_beta1.len(), d1),
            ("mu_beta2", self.mu_beta2.len(), d1),
            ("mu_alpha1", self.mu_alpha1.len(), d2),
            ("mu_alpha2", self.mu_alpha2.len(), d2),
            ("cov_beta1", self.cov_beta1.nrows(), d1),
            ("cov_beta2", self.cov_beta2.nrows(), d1),
            ("cov_alpha1", self.cov_alpha1.nrows(), d2),
            ("cov_alpha2", self.cov_alpha2.nrows(), d2),
        ];
        for (name, got, want) in checks {
            if got != want {
                return Err(Error::Validation(format!("prior {name} has dimension {got}, expected {want}")));
            }
        }
        if !(self.lambda0 > 0.0 && self.nu0 > 0.0 && self.kappa0 > 0.0) {
            return Err(Error::Validation("λ₀, ν₀, κ₀ must all be positive".into()));
        }
        if !(self.c_y > 0.0 && self.d_y > 0.0 && self.c_x > 0.0 && self.d_x > 0.0) {
            return Err(Error::Validation("Beta hyperparameters must be positive".into()));
        }
        Ok(())
    }
}

/// Rebuilds the random-effects covariance from the sampling
/// parameterization (s₁, τ):
///
/// σ₁² = τ,  σ₂² = 1/τ + s₁²τ,  ρ = s₁√τ/σ₂,
///
/// the unique covariance satisfying s₁ = ρσ₂/σ₁, σ₂²(1−ρ²) = 1/τ and the
/// unit generalized-variance constraint |Σ_b| = 1.
pub fn reconstruct_sigma_b(s1: f64, tau: f64) -> Result<Cov2> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::Domain(format!("τ must be in (0, ∞), got {tau}")));
    }
    if !s1.is_finite() {
        return Err(Error::Domain(format!("s₁ must be finite, got {s1}")));
    }
    let sigma1_sq = tau;
    let sigma2_sq = 1.0 / tau + s1 * s1 * tau;
    Cov2::with_cov(sigma1_sq, sigma2_sq, s1 * tau)
}

/// The unknown parameter set Δ plus the generalized-model probabilities.
#[derive(Clone, Debug)]
pub struct ParameterState {
    pub beta1: DVector<f64>,
    pub beta2: DVector<f64>,
    pub alpha1: DVector<f64>,
    pub alpha2: DVector<f64>,
    pub s1: f64,
    pub tau: f64,
    pub eta_y: f64,
    pub eta_x: f64,
}

impl ParameterState {
    pub fn sigma_b(&self) -> Result<Cov2> {
        reconstruct_sigma_b(self.s1, self.tau)
    }

    /// Derived reported parameters (ρ, σ₁², σ₂²).
    pub fn derived(&self) -> Result<(f64, f64, f64)> {
        let cov = self.sigma_b()?;
        Ok((cov.rho(), cov.s11(), cov.s22()))
    }
}

/// Augmented variables carried between Gibbs sweeps.
#[derive(Clone, Debug)]
pub struct LatentState {
    /// θ*_Yij per (subject, occasion).
    pub theta_y_star: Vec<Vec<Angle>>,
    /// Latent response radii, strictly positive.
    pub r_y: Vec<Vec<f64>>,
    /// θ*_Xi per subject.
    pub theta_x_star: Vec<Angle>,
    /// Latent covariate radii, strictly positive.
    pub r_x: Vec<f64>,
    /// Subject random effects.
    pub b: Vec<(f64, f64)>,
    /// Random-zero indicators at observed response zeros (generalized model).
    pub z_y: Vec<Vec<u8>>,
    /// Random-zero indicators at observed covariate zeros.
    pub z_x: Vec<u8>,
}

/// Stage-I design row x̃* = (1, x₁, …, x_p, cos θ*, sin θ*).
pub fn build_design_row(x: &[f64], theta_x_star: Angle) -> DVector<f64> {
    let mut row = DVector::zeros(x.len() + 3);
    row[0] = 1.0;
    for (k, &xv) in x.iter().enumerate() {
        row[k + 1] = xv;
    }
    row[x.len() + 1] = theta_x_star.cos();
    row[x.len() + 2] = theta_x_star.sin();
    row
}

/// Stage-II design row ṽ = (1, v₁, …, v_q[, cos θ_V, sin θ_V]).
pub fn build_instrument_row(v: &[f64], theta_v: Option<Angle>) -> DVector<f64> {
    let extra = if theta_v.is_some() { 2 } else { 0 };
    let mut row = DVector::zeros(v.len() + 1 + extra);
    row[0] = 1.0;
    for (k, &vv) in v.iter().enumerate() {
        row[k + 1] = vv;
    }
    if let Some(tv) = theta_v {
        row[v.len() + 1] = tv.cos();
        row[v.len() + 2] = tv.sin();
    }
    row
}

/// Structural and censoring-consistency report for a dataset.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub n: usize,
    pub n_obs: usize,
    pub p: usize,
    pub q: usize,
    pub has_theta_v: bool,
    pub zero_prop_y: f64,
    pub zero_prop_x: f64,
    pub issues: Vec<String>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.issues.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "subjects: {}, observations: {}, p: {}, q: {}, circular instrument: {}",
            self.n, self.n_obs, self.p, self.q, self.has_theta_v)?;
        writeln!(f, "response zeros: {:.2}%", 100.0 * self.zero_prop_y)?;
        writeln!(f, "covariate zeros: {:.2}%", 100.0 * self.zero_prop_x)?;
        if self.issues.is_empty() {
            write!(f, "no issues found")
        } else {
            writeln!(f, "{} issue(s):", self.issues.len())?;
            for issue in &self.issues {
                writeln!(f, "  - {issue}")?;
            }
            Ok(())
        }
    }
}

/// Checks zero bookkeeping and that no nonzero observation sits inside its
/// censoring arc (which would contradict the censoring mechanism).
pub fn validate_dataset(data: &Dataset, spec: &CensoringSpec) -> ValidationReport {
    let mut issues = Vec::new();
    for s in data.subjects() {
        for (j, occ) in s.occasions.iter().enumerate() {
            if !occ.theta_y.is_zero() && spec.arc_y.contains(occ.theta_y) {
                issues.push(format!(
                    "subject {} occasion {}: nonzero response {} lies inside the censoring arc",
                    s.subject_id,
                    j + 1,
                    occ.theta_y.radians()
                ));
            }
            if occ.x.iter().any(|x| !x.is_finite()) {
                issues.push(format!("subject {} occasion {}: non-finite covariate", s.subject_id, j + 1));
            }
        }
        if !s.theta_x.is_zero() && spec.arc_x.contains(s.theta_x) {
            issues.push(format!(
                "subject {}: nonzero circular covariate {} lies inside the censoring arc",
                s.subject_id,
                s.theta_x.radians()
            ));
        }
        if s.v.iter().any(|v| !v.is_finite()) {
            issues.push(format!("subject {}: non-finite instrument", s.subject_id));
        }
    }
    ValidationReport {
        n: data.n(),
        n_obs: data.n_obs(),
        p: data.p(),
        q: data.q(),
        has_theta_v: data.has_theta_v(),
        zero_prop_y: data.zero_prop_y(),
        zero_prop_x: data.zero_prop_x(),
        issues,
    }
}
