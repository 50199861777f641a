//! The data-augmented Gibbs sampler: initialization, all full-conditional
//! updates, sweep orchestration, burn-in/thinning, and the kept-draw
//! container.

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::angle::{atan2_paper, Angle, ArcInterval};
use crate::density::Mean2;
use crate::error::{Error, Result};
use crate::model::{
    build_design_row, build_instrument_row, CensoringSpec, Dataset, LatentState, ModelVariant,
    ParameterState, PriorSpec,
};
use crate::rng::RngStream;
use crate::samplers::{
    sample_bernoulli, sample_gamma, sample_mvn2, sample_radius_slice, sample_std_normal,
    sample_tpn, TpnMode,
};

/// Chain length, thinning and sampler options for one fit.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ChainConfig {
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
    pub tpn_mode: TpnMode,
    /// Metropolis correction folding the Stage-I likelihood into the
    /// θ*_X update (the stated conditional omits it; see module docs).
    pub full_conditional_x: bool,
    /// Metropolis correction for the τ update against the exact
    /// conditional implied by the |Σ_b| = 1 random-effects density.
    pub exact_tau: bool,
}

impl ChainConfig {
    /// Simulation-study default: 100,000 iterations, 40,000 burn-in,
    /// every 10th iterate kept.
    pub fn default_sim(seed: u64) -> ChainConfig {
        ChainConfig {
            iterations: 100_000,
            burn_in: 40_000,
            thin: 10,
            seed,
            tpn_mode: TpnMode::ExactRejection,
            full_conditional_x: false,
            exact_tau: false,
        }
    }

    /// Desk-scale default for quick replication studies.
    pub fn desk(seed: u64) -> ChainConfig {
        ChainConfig { iterations: 20_000, burn_in: 8_000, ..ChainConfig::default_sim(seed) }
    }

    /// Real-data preset: 0.7 million draws, 0.15 million burn-in.
    pub fn real_data(seed: u64) -> ChainConfig {
        ChainConfig { iterations: 700_000, burn_in: 150_000, ..ChainConfig::default_sim(seed) }
    }

    pub fn validate(&self) -> Result<()> {
        if self.burn_in >= self.iterations {
            return Err(Error::Validation(format!(
                "burn-in {} must be below iterations {}",
                self.burn_in, self.iterations
            )));
        }
        if self.thin == 0 {
            return Err(Error::Validation("thin must be at least 1".into()));
        }
        Ok(())
    }

    pub fn kept_rows(&self) -> usize {
        (self.iterations - self.burn_in) / self.thin
    }
}

/// Thinned post-burn-in draws plus everything needed to reproduce them.
#[derive(Clone, Debug)]
pub struct PosteriorSamples {
    pub names: Vec<String>,
    pub draws: Vec<Vec<f64>>,
    pub config: ChainConfig,
    pub variant: ModelVariant,
    pub dataset_hash: String,
    /// Posterior mean of the Stage-I latent mean μ*_ij + b_i per
    /// (subject, occasion); feeds predicted angles for fit diagnostics.
    pub fitted_y_mean: Vec<Vec<(f64, f64)>>,
}

impl PosteriorSamples {
    pub fn n_kept(&self) -> usize {
        self.draws.len()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let idx = self
            .column_index(name)
            .ok_or_else(|| Error::Diagnostics(format!("no parameter column named {name}")))?;
        Ok(self.draws.iter().map(|row| row[idx]).collect())
    }

    pub fn column_mean(&self, name: &str) -> Result<f64> {
        let col = self.column(name)?;
        Ok(col.iter().sum::<f64>() / col.len() as f64)
    }

    /// Predicted response angles: the direction of the posterior-mean
    /// latent mean vector per observation.
    pub fn predicted_angles(&self) -> Result<Vec<Vec<Angle>>> {
        self.fitted_y_mean
            .iter()
            .map(|subj| subj.iter().map(|&(c, s)| atan2_paper(s, c)).collect())
            .collect()
    }
}

/// Parameter and latent state with the Stage-I design-row cache.
#[derive(Clone, Debug)]
pub struct GibbsState {
    pub params: ParameterState,
    pub latent: LatentState,
    xrows: Vec<Vec<DVector<f64>>>,
}

impl GibbsState {
    /// Assembles a state from explicit parameter and latent values,
    /// rebuilding the design cache; used by joint-correctness harnesses
    /// that alternate data regeneration with sweeps.
    pub fn from_parts(params: ParameterState, latent: LatentState, data: &Dataset) -> GibbsState {
        let mut state = GibbsState { params, latent, xrows: Vec::new() };
        state.rebuild_design_cache(data);
        state
    }

    fn rebuild_design_cache(&mut self, data: &Dataset) {
        self.xrows = data
            .subjects()
            .iter()
            .enumerate()
            .map(|(i, s)| {
                s.occasions
                    .iter()
                    .map(|occ| build_design_row(&occ.x, self.latent.theta_x_star[i]))
                    .collect()
            })
            .collect();
    }

    pub fn design_row(&self, i: usize, j: usize) -> &DVector<f64> {
        &self.xrows[i][j]
    }

    /// Re-points θ*_Xi and refreshes the cached cos/sin design entries.
    pub fn set_theta_x_star(&mut self, data: &Dataset, i: usize, theta: Angle) {
        self.latent.theta_x_star[i] = theta;
        let p = data.p();
        let (c, s) = (theta.cos(), theta.sin());
        for row in &mut self.xrows[i] {
            row[p + 1] = c;
            row[p + 2] = s;
        }
    }
}

/// Sweep engine bound to one dataset/prior/variant combination.
pub struct GibbsSampler<'a> {
    data: &'a Dataset,
    spec: &'a CensoringSpec,
    variant: ModelVariant,
    priors: &'a PriorSpec,
    tpn_mode: TpnMode,
    full_conditional_x: bool,
    exact_tau: bool,
    prior_prec_beta: [DMatrix<f64>; 2],
    prior_prec_mu_beta: [DVector<f64>; 2],
    prior_prec_mu_alpha: [DVector<f64>; 2],
    v_rows: Vec<DVector<f64>>,
    h_chol: [Cholesky<f64, nalgebra::Dyn>; 2],
}

fn spd_inverse(m: &DMatrix<f64>, what: &str) -> Result<DMatrix<f64>> {
    Cholesky::new(m.clone())
        .map(|c| c.inverse())
        .ok_or_else(|| Error::Validation(format!("{what} is not positive definite")))
}

impl<'a> GibbsSampler<'a> {
    pub fn new(
        data: &'a Dataset,
        spec: &'a CensoringSpec,
        variant: ModelVariant,
        priors: &'a PriorSpec,
        cfg: &ChainConfig,
    ) -> Result<GibbsSampler<'a>> {
        priors.validate_for(data)?;
        if variant.random_zeros
            && !(variant.zero_inflated_response && variant.zero_inflated_covariate)
        {
            return Err(Error::Validation(
                "random zeros need the zero-inflation machinery of both stages".into(),
            ));
        }
        let prec_b1 = spd_inverse(&priors.cov_beta1, "cov_beta1")?;
        let prec_b2 = spd_inverse(&priors.cov_beta2, "cov_beta2")?;
        let prec_a1 = spd_inverse(&priors.cov_alpha1, "cov_alpha1")?;
        let prec_a2 = spd_inverse(&priors.cov_alpha2, "cov_alpha2")?;
        let prior_prec_mu_beta = [&prec_b1 * &priors.mu_beta1, &prec_b2 * &priors.mu_beta2];
        let prior_prec_mu_alpha = [&prec_a1 * &priors.mu_alpha1, &prec_a2 * &priors.mu_alpha2];

        let v_rows: Vec<DVector<f64>> = data
            .subjects()
            .iter()
            .map(|s| build_instrument_row(&s.v, s.theta_v))
            .collect();
        // H_k = Σ ṽṽᵀ + Σ_{α_k}⁻¹ never changes within a chain.
        let d2 = data.stage2_dim();
        let mut v_gram = DMatrix::zeros(d2, d2);
        for row in &v_rows {
            for a in 0..d2 {
                for b in a..d2 {
                    v_gram[(a, b)] += row[a] * row[b];
                }
            }
        }
        for a in 0..d2 {
            for b in 0..a {
                v_gram[(a, b)] = v_gram[(b, a)];
            }
        }
        let h_chol = [
            Cholesky::new(&v_gram + &prec_a1)
                .ok_or_else(|| Error::Fit("Stage-II precision H_1 is singular".into()))?,
            Cholesky::new(&v_gram + &prec_a2)
                .ok_or_else(|| Error::Fit("Stage-II precision H_2 is singular".into()))?,
        ];

        Ok(GibbsSampler {
            data,
            spec,
            variant,
            priors,
            tpn_mode: cfg.tpn_mode,
            full_conditional_x: cfg.full_conditional_x,
            exact_tau: cfg.exact_tau,
            prior_prec_beta: [prec_b1, prec_b2],
            prior_prec_mu_beta,
            prior_prec_mu_alpha,
            v_rows,
            h_chol,
        })
    }

    pub fn data(&self) -> &Dataset {
        self.data
    }

    pub fn censoring(&self) -> &CensoringSpec {
        self.spec
    }

    pub fn variant(&self) -> ModelVariant {
        self.variant
    }

    pub fn priors(&self) -> &PriorSpec {
        self.priors
    }

    pub fn tpn_mode(&self) -> TpnMode {
        self.tpn_mode
    }

    /// Stage-I latent mean μ*_ij + b_i at the current state.
    pub fn stage1_mean(&self, state: &GibbsState, i: usize, j: usize) -> Mean2 {
        let row = &state.xrows[i][j];
        let b = state.latent.b[i];
        Mean2 {
            mu1: row.dot(&state.params.beta1) + b.0,
            mu2: row.dot(&state.params.beta2) + b.1,
        }
    }

    /// Stage-II mean μ_Xi at the current state.
    pub fn stage2_mean(&self, state: &GibbsState, i: usize) -> Mean2 {
        let row = &self.v_rows[i];
        Mean2 { mu1: row.dot(&state.params.alpha1), mu2: row.dot(&state.params.alpha2) }
    }

    /// Draws the initial state: coefficients at prior means, s₁ = 0,
    /// τ = 1, unit radii, zero random effects, censored-arc uniform
    /// latents at observed zeros.
    pub fn init_state<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<GibbsState> {
        let n = self.data.n();
        let mut theta_y_star = Vec::with_capacity(n);
        let mut r_y = Vec::with_capacity(n);
        let mut theta_x_star = Vec::with_capacity(n);
        let mut z_y = Vec::with_capacity(n);
        let mut z_x = Vec::with_capacity(n);
        let eta_y0 = self.priors.eta_y_fixed.unwrap_or(0.5);
        let eta_x0 = self.priors.eta_x_fixed.unwrap_or(0.5);

        for s in self.data.subjects() {
            let mut row_theta = Vec::with_capacity(s.occasions.len());
            let mut row_z = Vec::with_capacity(s.occasions.len());
            for occ in &s.occasions {
                if occ.theta_y.is_zero() && self.variant.zero_inflated_response {
                    let arc = &self.spec.arc_y;
                    let u = rng.random::<f64>();
                    row_theta.push(Angle::wrap(arc.delta1() + u * arc.width())?);
                    let z = if self.variant.random_zeros && self.priors.eta_y_fixed != Some(0.0) {
                        sample_bernoulli(rng, 0.5)?
                    } else {
                        0
                    };
                    row_z.push(z);
                } else {
                    row_theta.push(occ.theta_y);
                    row_z.push(0);
                }
            }
            theta_y_star.push(row_theta);
            r_y.push(vec![1.0; s.occasions.len()]);
            z_y.push(row_z);

            if s.theta_x.is_zero() && self.variant.zero_inflated_covariate {
                let arc = &self.spec.arc_x;
                let u = rng.random::<f64>();
                theta_x_star.push(Angle::wrap(arc.delta1() + u * arc.width())?);
                let z = if self.variant.random_zeros && self.priors.eta_x_fixed != Some(0.0) {
                    sample_bernoulli(rng, 0.5)?
                } else {
                    0
                };
                z_x.push(z);
            } else {
                theta_x_star.push(s.theta_x);
                z_x.push(0);
            }
        }

        let params = ParameterState {
            beta1: self.priors.mu_beta1.clone(),
            beta2: self.priors.mu_beta2.clone(),
            alpha1: self.priors.mu_alpha1.clone(),
            alpha2: self.priors.mu_alpha2.clone(),
            s1: 0.0,
            tau: 1.0,
            eta_y: eta_y0,
            eta_x: eta_x0,
        };
        let latent = LatentState {
            theta_y_star,
            r_y,
            theta_x_star,
            r_x: vec![1.0; n],
            b: vec![(0.0, 0.0); n],
            z_y,
            z_x,
        };
        let mut state = GibbsState { params, latent, xrows: Vec::new() };
        state.rebuild_design_cache(self.data);
        Ok(state)
    }

    /// θ*_Yij: copy when observed, TPN on the censoring arc when the zero
    /// is attributed to censoring, unrestricted PN when attributed to a
    /// random zero.
    pub fn update_theta_y_star<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        state: &mut GibbsState,
        i: usize,
        j: usize,
    ) -> Result<()> {
        let obs = self.data.subjects()[i].occasions[j].theta_y;
        if !obs.is_zero() || !self.variant.zero_inflated_response {
            state.latent.theta_y_star[i][j] = obs;
            return Ok(());
        }
        let mean = self.stage1_mean(state, i, j);
        let theta = if self.variant.random_zeros && state.latent.z_y[i][j] == 1 {
            sample_tpn(rng, mean, &ArcInterval::full_circle(), TpnMode::ExactRejection)?
        } else {
            sample_tpn(rng, mean, &self.spec.arc_y, self.tpn_mode)?
        };
        state.latent.theta_y_star[i][j] = theta;
        Ok(())
    }

    /// One radius slice transition at a* = w*ᵀ(μ* + b).
    pub fn update_r_y<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        state: &mut GibbsState,
        i: usize,
        j: usize,
    ) -> Result<()> {
        let mean = self.stage1_mean(state, i, j);
        let a_star = mean.dot_direction(state.latent.theta_y_star[i][j]);
        state.latent.r_y[i][j] = sample_radius_slice(rng, state.latent.r_y[i][j], a_star)?;
        Ok(())
    }

    fn stage1_gram(&self, state: &GibbsState) -> DMatrix<f64> {
        let d = self.data.stage1_dim();
        let mut gram = DMatrix::zeros(d, d);
        for rows in &state.xrows {
            for row in rows {
                for a in 0..d {
                    for b in a..d {
                        gram[(a, b)] += row[a] * row[b];
                    }
                }
            }
        }
        for a in 0..d {
            for b in 0..a {
                gram[(a, b)] = gram[(b, a)];
            }
        }
        gram
    }

    /// β_k | rest: exact multivariate-normal draw with precision
    /// G_k = Σ x̃*x̃*ᵀ + Σ_{β_k}⁻¹.
    pub fn update_beta<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        state: &mut GibbsState,
        k: usize,
    ) -> Result<()> {
        let gram = self.stage1_gram(state);
        self.update_beta_with_gram(rng, state, k, &gram)
    }

    fn update_beta_with_gram<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        state: &mut GibbsState,
        k: usize,
        gram: &DMatrix<f64>,
    ) -> Result<()> {
        let g = gram + &self.prior_prec_beta[k];
        let mut rhs = self.prior_prec_mu_beta[k].clone();
        for (i, s) in self.data.subjects().iter().enumerate() {
            let b_k = if k == 0 { state.latent.b[i].0 } else { state.latent.b[i].1 };
            for j in 0..s.occasions.len() {
                let th = state.latent.theta_y_star[i][j];
                let y_star = state.latent.r_y[i][j] * if k == 0 { th.cos() } else { th.sin() };
                rhs.axpy(y_star - b_k, &state.xrows[i][j], 1.0);
            }
        }
        let chol = Cholesky::new(g).ok_or_else(|| Error::Fit("Stage-I precision G_k is singular".into()))?;
        let draw = draw_mvn_from_precision_chol(rng, &chol, &rhs)?;
        if k == 0 {
            state.params.beta1 = draw;
        } else {
            state.params.beta2 = draw;
        }
        Ok(())
    }

    /// b_i | rest: N₂(S_b⁻¹ Σ_j (Y*_ij − μ*_ij), S_b⁻¹) with
    /// S_b = m_i I₂ + Σ_b⁻¹.
    pub fn update_b<R: Rng + ?Sized>(&self, rng: &mut R, state: &mut GibbsState, i: usize) -> Result<()> {
        let sigma_b = state.params.sigma_b()?;
        let det = sigma_b.det();
        let inv11 = sigma_b.s22() / det;
        let inv22 = sigma_b.s11() / det;
        let inv12 = -sigma_b.cov12() / det;
        let m_i = self.data.subjects()[i].occasions.len() as f64;
        let s11 = m_i + inv11;
        let s22 = m_i + inv22;
        let s12 = inv12;

        let mut resid = (0.0, 0.0);
        for (j, row) in state.xrows[i].iter().enumerate() {
            let th = state.latent.theta_y_star[i][j];
            let r = state.latent.r_y[i][j];
            resid.0 += r * th.cos() - row.dot(&state.params.beta1);
            resid.1 += r * th.sin() - row.dot(&state.params.beta2);
        }

        let det_s = s11 * s22 - s12 * s12;
        let mean = (
            (s22 * resid.0 - s12 * resid.1) / det_s,
            (s11 * resid.1 - s12 * resid.0) / det_s,
        );
        let cov = crate::density::Cov2::with_cov(s22 / det_s, s11 / det_s, -s12 / det_s)?;
        state.latent.b[i] = sample_mvn2(rng, mean, cov);
        Ok(())
    }

    /// s₁ | rest: N(Σb₁b₂/(λ₀+Σb₁²), 1/(τ(λ₀+Σb₁²))).
    pub fn update_s1<R: Rng + ?Sized>(&self, rng: &mut R, state: &mut GibbsState) -> Result<()> {
        let sum_b1b2: f64 = state.latent.b.iter().map(|b| b.0 * b.1).sum();
        let sum_b1sq: f64 = state.latent.b.iter().map(|b| b.0 * b.0).sum();
        let denom = self.priors.lambda0 + sum_b1sq;
        let mean = sum_b1b2 / denom;
        let sd = (1.0 / (state.params.tau * denom)).sqrt();
        state.params.s1 = mean + sd * sample_std_normal(rng);
        Ok(())
    }

    /// τ | rest: Gamma(ν₀ + (n+1)/2, κ₀ + (Σ(b₂−s₁b₁)² + λ₀s₁²)/2) in
    /// shape–rate form, as stated for the conditional. With `exact_tau`
    /// the draw becomes an independence-Metropolis proposal corrected by
    /// the b₁-marginal factor τ^{−n/2}·exp(−Σb₁²/(2τ)) that the stated
    /// conditional drops under the |Σ_b| = 1 parameterization.
    pub fn update_tau<R: Rng + ?Sized>(&self, rng: &mut R, state: &mut GibbsState) -> Result<()> {
        let n = self.data.n() as f64;
        let s1 = state.params.s1;
        let sum_sq: f64 = state.latent.b.iter().map(|b| (b.1 - s1 * b.0).powi(2)).sum();
        let shape = self.priors.nu0 + (n + 1.0) / 2.0;
        let rate = self.priors.kappa0 + (sum_sq + self.priors.lambda0 * s1 * s1) / 2.0;
        let proposal = sample_gamma(rng, shape, rate)?;
        if !self.exact_tau {
            state.params.tau = proposal;
            return Ok(());
        }
        let chi: f64 = state.latent.b.iter().map(|b| b.0 * b.0).sum();
        let log_w = |t: f64| -0.5 * n * t.ln() - 0.5 * chi / t;
        let log_acc = log_w(proposal) - log_w(state.params.tau);
        if log_acc >= 0.0 || rng.random::<f64>() < log_acc.exp() {
            state.params.tau = proposal;
        }
        Ok(())
    }

    /// θ*_Xi: copy when observed; otherwise TPN at the Stage-II mean
    /// (the stated conditional). With `full_conditional_x` that draw
    /// becomes a Metropolis proposal accepted with the Stage-I likelihood
    /// ratio, which the stated conditional omits.
    pub fn update_theta_x_star<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        state: &mut GibbsState,
        i: usize,
    ) -> Result<()> {
        let obs = self.data.subjects()[i].theta_x;
        if !obs.is_zero() || !self.variant.zero_inflated_covariate {
            if state.latent.theta_x_star[i] != obs {
                state.set_theta_x_star(self.data, i, obs);
            }
            return Ok(());
        }
        let mean = self.stage2_mean(state, i);
        let proposal = if self.variant.random_zeros && state.latent.z_x[i] == 1 {
            sample_tpn(rng, mean, &ArcInterval::full_circle(), TpnMode::ExactRejection)?
        } else {
            sample_tpn(rng, mean, &self.spec.arc_x, self.tpn_mode)?
        };
        if self.full_conditional_x {
            let log_ratio = self.stage1_loglik_delta(state, i, proposal);
            if !(log_ratio >= 0.0 || rng.random::<f64>() < log_ratio.exp()) {
                return Ok(());
            }
        }
        state.set_theta_x_star(self.data, i, proposal);
        Ok(())
    }

    /// Σ_j [ln N(Y*_ij; μ*(θ′)+b, I) − ln N(Y*_ij; μ*(θ)+b, I)] for the
    /// candidate θ*_Xi, touching only the cos/sin design entries.
    fn stage1_loglik_delta(&self, state: &GibbsState, i: usize, candidate: Angle) -> f64 {
        let p = self.data.p();
        let b = state.latent.b[i];
        let (cc, cs) = (candidate.cos(), candidate.sin());
        let mut delta = 0.0;
        for (j, row) in state.xrows[i].iter().enumerate() {
            let th = state.latent.theta_y_star[i][j];
            let r = state.latent.r_y[i][j];
            let y = (r * th.cos(), r * th.sin());
            let base1 = row.dot(&state.params.beta1) - row[p + 1] * state.params.beta1[p + 1]
                - row[p + 2] * state.params.beta1[p + 2];
            let base2 = row.dot(&state.params.beta2) - row[p + 1] * state.params.beta2[p + 1]
                - row[p + 2] * state.params.beta2[p + 2];
            let cand1 = base1 + cc * state.params.beta1[p + 1] + cs * state.params.beta1[p + 2] + b.0;
            let cand2 = base2 + cc * state.params.beta2[p + 1] + cs * state.params.beta2[p + 2] + b.1;
            let cur1 = row.dot(&state.params.beta1) + b.0;
            let cur2 = row.dot(&state.params.beta2) + b.1;
            delta += -0.5 * ((y.0 - cand1).powi(2) + (y.1 - cand2).powi(2))
                + 0.5 * ((y.0 - cur1).powi(2) + (y.1 - cur2).powi(2));
        }
        delta
    }

    pub fn update_r_x<R: Rng + ?Sized>(&self, rng: &mut R, state: &mut GibbsState, i: usize) -> Result<()> {
        let mean = self.stage2_mean(state, i);
        let a_star = mean.dot_direction(state.latent.theta_x_star[i]);
        state.latent.r_x[i] = sample_radius_slice(rng, state.latent.r_x[i], a_star)?;
        Ok(())
    }

    /// α_k | rest: N(H_k⁻¹{Σ ṽ X*_ki + Σ_{α_k}⁻¹μ_{α_k}}, H_k⁻¹).
    pub fn update_alpha<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        state: &mut GibbsState,
        k: usize,
    ) -> Result<()> {
        let mut rhs = self.prior_prec_mu_alpha[k].clone();
        for (i, row) in self.v_rows.iter().enumerate() {
            let th = state.latent.theta_x_star[i];
            let x_star = state.latent.r_x[i] * if k == 0 { th.cos() } else { th.sin() };
            rhs.axpy(x_star, row, 1.0);
        }
        let draw = draw_mvn_from_precision_chol(rng, &self.h_chol[k], &rhs)?;
        if k == 0 {
            state.params.alpha1 = draw;
        } else {
            state.params.alpha2 = draw;
        }
        Ok(())
    }

    /// One full sweep in the conditional listing order, with the
    /// random-zero indicator updates ahead of the latent-angle blocks
    /// they gate.
    pub fn sweep<R: Rng + ?Sized>(&self, rng: &mut R, state: &mut GibbsState) -> Result<()> {
        let rz = self.variant.random_zeros;
        if rz {
            for i in 0..self.data.n() {
                for j in 0..self.data.subjects()[i].occasions.len() {
                    self.update_z_y(rng, state, i, j)?;
                }
            }
        }
        for i in 0..self.data.n() {
            for j in 0..self.data.subjects()[i].occasions.len() {
                self.update_theta_y_star(rng, state, i, j)?;
            }
        }
        for i in 0..self.data.n() {
            for j in 0..self.data.subjects()[i].occasions.len() {
                self.update_r_y(rng, state, i, j)?;
            }
        }
        let gram = self.stage1_gram(state);
        self.update_beta_with_gram(rng, state, 0, &gram)?;
        self.update_beta_with_gram(rng, state, 1, &gram)?;
        for i in 0..self.data.n() {
            self.update_b(rng, state, i)?;
        }
        self.update_s1(rng, state)?;
        self.update_tau(rng, state)?;
        if rz {
            for i in 0..self.data.n() {
                self.update_z_x(rng, state, i)?;
            }
        }
        for i in 0..self.data.n() {
            self.update_theta_x_star(rng, state, i)?;
        }
        for i in 0..self.data.n() {
            self.update_r_x(rng, state, i)?;
        }
        self.update_alpha(rng, state, 0)?;
        self.update_alpha(rng, state, 1)?;
        if rz {
            self.update_eta(rng, state)?;
        }
        Ok(())
    }

    /// Parameter column labels in recording order.
    pub fn column_names(&self) -> Vec<String> {
        let mut names = Vec::new();
        let p = self.data.p();
        for stage in ["beta1", "beta2"] {
            names.push(format!("{stage}_0"));
            for k in 1..=p {
                names.push(format!("{stage}_{k}"));
            }
            names.push(format!("{stage}_C"));
            names.push(format!("{stage}_S"));
        }
        let q = self.data.q();
        for stage in ["alpha1", "alpha2"] {
            names.push(format!("{stage}_0"));
            for k in 1..=q {
                names.push(format!("{stage}_{k}"));
            }
            if self.data.has_theta_v() {
                names.push(format!("{stage}_C"));
                names.push(format!("{stage}_S"));
            }
        }
        names.extend(["s1", "tau", "rho", "sigma1_sq", "sigma2_sq"].map(String::from));
        if self.variant.random_zeros {
            names.extend(["eta_y", "eta_x"].map(String::from));
        }
        names
    }

    fn record_row(&self, state: &GibbsState) -> Result<Vec<f64>> {
        let mut row = Vec::with_capacity(state.params.beta1.len() * 2 + state.params.alpha1.len() * 2 + 7);
        row.extend(state.params.beta1.iter());
        row.extend(state.params.beta2.iter());
        row.extend(state.params.alpha1.iter());
        row.extend(state.params.alpha2.iter());
        let (rho, sigma1_sq, sigma2_sq) = state.params.derived()?;
        row.push(state.params.s1);
        row.push(state.params.tau);
        row.push(rho);
        row.push(sigma1_sq);
        row.push(sigma2_sq);
        if self.variant.random_zeros {
            row.push(state.params.eta_y);
            row.push(state.params.eta_x);
        }
        Ok(row)
    }
}

/// Draw from N(P⁻¹·rhs, P⁻¹) given the Cholesky factor of the precision P.
fn draw_mvn_from_precision_chol<R: Rng + ?Sized>(
    rng: &mut R,
    chol: &Cholesky<f64, nalgebra::Dyn>,
    rhs: &DVector<f64>,
) -> Result<DVector<f64>> {
    let mean = chol.solve(rhs);
    let z = DVector::from_fn(rhs.len(), |_, _| sample_std_normal(rng));
    let lt = chol.l().transpose();
    let noise = lt
        .solve_upper_triangular(&z)
        .ok_or_else(|| Error::Fit("triangular solve failed in normal draw".into()))?;
    Ok(mean + noise)
}

/// Runs the full chain: deterministic in (dataset, priors, config).
pub fn run_chain(
    data: &Dataset,
    spec: &CensoringSpec,
    variant: ModelVariant,
    priors: &PriorSpec,
    cfg: &ChainConfig,
) -> Result<PosteriorSamples> {
    cfg.validate()?;
    let sampler = GibbsSampler::new(data, spec, variant, priors, cfg)?;
    let mut rng = RngStream::new(cfg.seed, 0).rng();
    let mut state = sampler.init_state(&mut rng)?;

    let names = sampler.column_names();
    let mut draws = Vec::with_capacity(cfg.kept_rows());
    let mut fitted: Vec<Vec<(f64, f64)>> = data
        .subjects()
        .iter()
        .map(|s| vec![(0.0, 0.0); s.occasions.len()])
        .collect();
    let mut kept = 0usize;

    for it in 1..=cfg.iterations {
        sampler.sweep(&mut rng, &mut state)?;
        if it > cfg.burn_in && (it - cfg.burn_in) % cfg.thin == 0 {
            draws.push(sampler.record_row(&state)?);
            kept += 1;
            for i in 0..data.n() {
                for j in 0..data.subjects()[i].occasions.len() {
                    let m = sampler.stage1_mean(&state, i, j);
                    fitted[i][j].0 += m.mu1;
                    fitted[i][j].1 += m.mu2;
                }
            }
        }
    }
    let scale = 1.0 / kept.max(1) as f64;
    for subj in &mut fitted {
        for m in subj {
            m.0 *= scale;
            m.1 *= scale;
        }
    }

    Ok(PosteriorSamples {
        names,
        draws,
        config: *cfg,
        variant,
        dataset_hash: crate::io::dataset_hash(data),
        fitted_y_mean: fitted,
    })
}
