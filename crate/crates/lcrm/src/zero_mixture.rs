//! The generalized model where observed zeros arise from randomness as
//! well as censoring: latent Bernoulli indicators Z, Beta updates for the
//! random-zero probabilities η, and the mixture branch of the θ* updates.
//!
//! The indicator conditional marginalizes the (θ*, r) pair, which is
//! redrawn immediately afterwards in the sweep, so the block leaves the
//! joint target invariant.

use rand::Rng;

use crate::density::tpn_mass;
use crate::error::Result;
use crate::gibbs::{GibbsSampler, GibbsState};
use crate::samplers::{sample_bernoulli, sample_beta};

/// Posterior probability that an observed zero is a random zero rather
/// than a censored one: η / (η + (1−η)·C), where C is the censoring-arc
/// mass at the current latent mean.
pub fn z_success_probability(eta: f64, arc_mass: f64) -> f64 {
    if eta <= 0.0 {
        return 0.0;
    }
    if eta >= 1.0 {
        return 1.0;
    }
    eta / (eta + (1.0 - eta) * arc_mass)
}

impl GibbsSampler<'_> {
    /// Z_Yij | rest at an observed response zero.
    pub fn update_z_y<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        state: &mut GibbsState,
        i: usize,
        j: usize,
    ) -> Result<()> {
        if !self.data().subjects()[i].occasions[j].theta_y.is_zero() {
            state.latent.z_y[i][j] = 0;
            return Ok(());
        }
        if let Some(eta) = self.priors().eta_y_fixed {
            if eta == 0.0 {
                state.latent.z_y[i][j] = 0;
                return Ok(());
            }
        }
        let mass = tpn_mass(self.stage1_mean(state, i, j), &self.censoring().arc_y);
        let p = z_success_probability(state.params.eta_y, mass);
        state.latent.z_y[i][j] = sample_bernoulli(rng, p)?;
        Ok(())
    }

    /// Z_Xi | rest at an observed covariate zero.
    pub fn update_z_x<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        state: &mut GibbsState,
        i: usize,
    ) -> Result<()> {
        if !self.data().subjects()[i].theta_x.is_zero() {
            state.latent.z_x[i] = 0;
            return Ok(());
        }
        if let Some(eta) = self.priors().eta_x_fixed {
            if eta == 0.0 {
                state.latent.z_x[i] = 0;
                return Ok(());
            }
        }
        let mass = tpn_mass(self.stage2_mean(state, i), &self.censoring().arc_x);
        let p = z_success_probability(state.params.eta_x, mass);
        state.latent.z_x[i] = sample_bernoulli(rng, p)?;
        Ok(())
    }

    /// η_Y, η_X | rest: Beta(c + Σz, d + N − Σz), where N counts every
    /// observation of the relevant kind; nonzero observations contribute
    /// z = 0 deterministically.
    pub fn update_eta<R: Rng + ?Sized>(&self, rng: &mut R, state: &mut GibbsState) -> Result<()> {
        let pr = self.priors();
        if pr.eta_y_fixed.is_none() {
            let sum_z: f64 = state.latent.z_y.iter().flatten().map(|&z| z as f64).sum();
            let n_total = self.data().n_obs() as f64;
            state.params.eta_y = sample_beta(rng, pr.c_y + sum_z, pr.d_y + n_total - sum_z)?;
        }
        if pr.eta_x_fixed.is_none() {
            let sum_z: f64 = state.latent.z_x.iter().map(|&z| z as f64).sum();
            let n_total = self.data().n() as f64;
            state.params.eta_x = sample_beta(rng, pr.c_x + sum_z, pr.d_x + n_total - sum_z)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_probability_bayes_rule() {
        // Two-branch generative density at θ = 0: random zero w.p. η,
        // censored zero w.p. (1−η)·C.
        assert!((z_success_probability(0.5, 0.5) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(z_success_probability(0.0, 0.3), 0.0);
        assert_eq!(z_success_probability(1.0, 0.3), 1.0);
        // Exhaustive check against direct enumeration on a grid.
        for eta_i in 1..10 {
            for c_i in 1..10 {
                let (eta, c) = (eta_i as f64 / 10.0, c_i as f64 / 10.0);
                let joint_random = eta;
                let joint_censored = (1.0 - eta) * c;
                let oracle = joint_random / (joint_random + joint_censored);
                assert!((z_success_probability(eta, c) - oracle).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn z_probability_monotonicity() {
        // Increasing in η, decreasing in C.
        let mut prev = 0.0;
        for k in 1..20 {
            let p = z_success_probability(k as f64 / 20.0, 0.4);
            assert!(p > prev);
            prev = p;
        }
        let mut prev = 1.0;
        for k in 1..20 {
            let p = z_success_probability(0.4, k as f64 / 20.0);
            assert!(p < prev);
            prev = p;
        }
    }
}
