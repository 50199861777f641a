//! Projected-normal densities, truncated-arc masses, and interpretation
//! diagnostics for the circular regression mean.

use serde::{Deserialize, Serialize};

use crate::angle::{atan2_paper, Angle, ArcInterval};
use crate::error::{Error, Result};
use crate::normal::{ln_bracket, LN_2PI};
use crate::quad;

/// Quadrature tolerance for single-angle integrals.
pub const ANGLE_QUAD_TOL: f64 = 1e-10;

/// A mean vector in the latent plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mean2 {
    pub mu1: f64,
    pub mu2: f64,
}

impl Mean2 {
    pub fn new(mu1: f64, mu2: f64) -> Result<Mean2> {
        if !mu1.is_finite() || !mu2.is_finite() {
            return Err(Error::Domain(format!("mean components must be finite, got ({mu1}, {mu2})")));
        }
        Ok(Mean2 { mu1, mu2 })
    }

    pub fn zero() -> Mean2 {
        Mean2 { mu1: 0.0, mu2: 0.0 }
    }

    pub fn norm(&self) -> f64 {
        self.mu1.hypot(self.mu2)
    }

    /// Inner product with the unit vector (cos θ, sin θ).
    pub fn dot_direction(&self, theta: Angle) -> f64 {
        self.mu1 * theta.cos() + self.mu2 * theta.sin()
    }
}

/// A 2×2 covariance stored as variances plus covariance; positive definite
/// by construction. Storing the covariance rather than the correlation
/// keeps determinant identities tight when ρ approaches ±1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cov2 {
    s11: f64,
    s22: f64,
    cov12: f64,
}

impl Cov2 {
    pub fn new(s11: f64, s22: f64, rho: f64) -> Result<Cov2> {
        if !(rho > -1.0 && rho < 1.0) {
            return Err(Error::Domain(format!("correlation must be in (−1, 1), got {rho}")));
        }
        Cov2::with_cov(s11, s22, rho * (s11 * s22).sqrt())
    }

    pub fn with_cov(s11: f64, s22: f64, cov12: f64) -> Result<Cov2> {
        if !(s11 > 0.0 && s11.is_finite()) || !(s22 > 0.0 && s22.is_finite()) {
            return Err(Error::Domain(format!("variances must be positive, got ({s11}, {s22})")));
        }
        if !(cov12 * cov12 < s11 * s22) {
            return Err(Error::Domain(format!(
                "covariance {cov12} violates positive definiteness for ({s11}, {s22})"
            )));
        }
        Ok(Cov2 { s11, s22, cov12 })
    }

    pub fn identity() -> Cov2 {
        Cov2 { s11: 1.0, s22: 1.0, cov12: 0.0 }
    }

    pub fn s11(&self) -> f64 {
        self.s11
    }

    pub fn s22(&self) -> f64 {
        self.s22
    }

    pub fn rho(&self) -> f64 {
        self.cov12 / (self.s11 * self.s22).sqrt()
    }

    pub fn cov12(&self) -> f64 {
        self.cov12
    }

    pub fn det(&self) -> f64 {
        self.s11 * self.s22 - self.cov12 * self.cov12
    }

    /// Quadratic form aᵀ Σ⁻¹ b.
    pub fn inv_quad(&self, a: (f64, f64), b: (f64, f64)) -> f64 {
        let det = self.det();
        let c12 = self.cov12;
        (a.0 * (self.s22 * b.0 - c12 * b.1) + a.1 * (self.s11 * b.1 - c12 * b.0)) / det
    }

    /// Scales the covariance by c² (the non-identifiability direction).
    pub fn scaled(&self, c: f64) -> Cov2 {
        Cov2 { s11: c * c * self.s11, s22: c * c * self.s22, cov12: c * c * self.cov12 }
    }

    /// I₂ + Σ, the marginal covariance once a random effect with covariance
    /// Σ is integrated out.
    pub fn plus_identity(&self) -> Cov2 {
        Cov2 { s11: self.s11 + 1.0, s22: self.s22 + 1.0, cov12: self.cov12 }
    }
}

/// Joint density of (R, θ) for the radial decomposition of N₂(μ, Σ).
pub fn joint_density_r_theta(r: f64, theta: Angle, mu: Mean2, sigma: Cov2) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("radius must be in (0, ∞), got {r}")));
    }
    let w = (theta.cos(), theta.sin());
    let d = (r * w.0 - mu.mu1, r * w.1 - mu.mu2);
    let q = sigma.inv_quad(d, d);
    Ok(r / (2.0 * std::f64::consts::PI * sigma.det().sqrt()) * (-0.5 * q).exp())
}

/// Log marginal density of the angle of N₂(μ, Σ) projected to the circle.
///
/// Computed in log space: the bracket term grows like exp(t²/2) with
/// t = A₂/√A₃, which overflows for concentrated means well inside the
/// parameter ranges used by the simulation presets.
pub fn log_pn_density(theta: Angle, mu: Mean2, sigma: Cov2) -> f64 {
    let w = (theta.cos(), theta.sin());
    let m = (mu.mu1, mu.mu2);
    let a1 = sigma.inv_quad(m, m);
    let a2 = sigma.inv_quad(m, w);
    let a3 = sigma.inv_quad(w, w);
    let t = a2 / a3.sqrt();
    -LN_2PI - 0.5 * sigma.det().ln() - a3.ln() - 0.5 * a1 + ln_bracket(t)
}

/// Marginal density of the projected angle; strictly positive.
pub fn pn_density(theta: Angle, mu: Mean2, sigma: Cov2) -> f64 {
    log_pn_density(theta, mu, sigma).exp()
}

/// Fast path for Σ = I₂, the case used throughout the Gibbs sweeps.
pub fn pn_density_unit(theta: Angle, mu: Mean2) -> f64 {
    log_pn_density_unit(theta, mu).exp()
}

pub fn log_pn_density_unit(theta: Angle, mu: Mean2) -> f64 {
    let a1 = mu.mu1 * mu.mu1 + mu.mu2 * mu.mu2;
    let t = mu.dot_direction(theta);
    -LN_2PI - 0.5 * a1 + ln_bracket(t)
}

/// Probability mass of the projected-normal angle (identity covariance)
/// on an arc, by adaptive quadrature.
pub fn tpn_mass(mu: Mean2, arc: &ArcInterval) -> f64 {
    tpn_mass_between(mu, arc.delta1(), arc.delta2())
}

/// Arc mass between raw endpoints k₁ < k₂ (radians in [−π, π]).
pub fn tpn_mass_between(mu: Mean2, k1: f64, k2: f64) -> f64 {
    quad::integrate(
        |th| pn_density_unit(Angle::wrap(th).expect("finite quadrature node"), mu),
        k1,
        k2,
        ANGLE_QUAD_TOL,
    )
}

/// Mean direction and resultant length of PN(μ, Σ), via quadrature of the
/// two trigonometric moments. The direction is undefined (None) when the
/// resultant is numerically zero, e.g. μ = 0 with isotropic Σ.
pub fn mean_direction_and_resultant(mu: Mean2, sigma: Cov2) -> (Option<Angle>, f64) {
    let pi = std::f64::consts::PI;
    let c = quad::integrate(
        |th| {
            let a = Angle::wrap(th).expect("finite node");
            a.cos() * pn_density(a, mu, sigma)
        },
        -pi,
        pi,
        ANGLE_QUAD_TOL,
    );
    let s = quad::integrate(
        |th| {
            let a = Angle::wrap(th).expect("finite node");
            a.sin() * pn_density(a, mu, sigma)
        },
        -pi,
        pi,
        ANGLE_QUAD_TOL,
    );
    let resultant = c.hypot(s).min(1.0);
    if resultant < 1e-8 {
        (None, resultant)
    } else {
        (Some(atan2_paper(s, c).expect("nonzero resultant")), resultant)
    }
}

/// Mean-direction diagnostics for a single-covariate regression with
/// identity covariance: the direction m(x), its rate of change m′(x), and
/// the rate of change of the squared concentration ‖μ(x)‖².
pub fn slope_diagnostics(
    beta1: (f64, f64),
    beta2: (f64, f64),
    x: f64,
) -> Result<(Angle, f64, f64)> {
    let mu1 = beta1.0 + beta1.1 * x;
    let mu2 = beta2.0 + beta2.1 * x;
    let norm_sq = mu1 * mu1 + mu2 * mu2;
    if norm_sq == 0.0 {
        return Err(Error::UndefinedDirection);
    }
    let m = atan2_paper(mu2, mu1)?;
    let m_prime = (beta1.0 * beta2.1 - beta1.1 * beta2.0) / norm_sq;
    let conc_sq_rate =
        2.0 * (beta1.0 * beta1.1 + beta2.0 * beta2.1) + 2.0 * (beta1.1 * beta1.1 + beta2.1 * beta2.1) * x;
    Ok((m, m_prime, conc_sq_rate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn angle(x: f64) -> Angle {
        Angle::wrap(x).unwrap()
    }

    #[test]
    fn joint_density_plug_in() {
        // r=1, θ=0, μ=0, Σ=I: (1/2π) e^{−1/2}.
        let v = joint_density_r_theta(1.0, angle(0.0), Mean2::zero(), Cov2::identity()).unwrap();
        assert!((v - (1.0 / (2.0 * PI)) * (-0.5f64).exp()).abs() < 1e-12);
        // r=2, θ=π/2, μ=(0,1), Σ=I: (2/2π) e^{−1/2}.
        let v = joint_density_r_theta(
            2.0,
            angle(PI / 2.0),
            Mean2::new(0.0, 1.0).unwrap(),
            Cov2::identity(),
        )
        .unwrap();
        assert!((v - (2.0 / (2.0 * PI)) * (-0.5f64).exp()).abs() < 1e-12);
        assert!(joint_density_r_theta(0.0, angle(0.0), Mean2::zero(), Cov2::identity()).is_err());
    }

    #[test]
    fn joint_density_change_of_variables_oracle() {
        // f(r, θ) must equal r · N₂((r cos θ, r sin θ); μ, Σ).
        let mu = Mean2::new(0.7, -1.2).unwrap();
        let sigma = Cov2::new(1.5, 0.8, 0.4).unwrap();
        for &(r, th) in &[(0.5, 0.3), (2.0, -2.1), (3.7, 1.0)] {
            let theta = angle(th);
            let y = (r * theta.cos(), r * theta.sin());
            let d = (y.0 - mu.mu1, y.1 - mu.mu2);
            let bvn = (-0.5 * sigma.inv_quad(d, d)).exp() / (2.0 * PI * sigma.det().sqrt());
            let ours = joint_density_r_theta(r, theta, mu, sigma).unwrap();
            assert!((ours - r * bvn).abs() < 1e-13);
        }
    }

    #[test]
    fn joint_density_integrates_to_one() {
        let mu = Mean2::new(1.0, 0.5).unwrap();
        let sigma = Cov2::new(1.2, 0.9, -0.3).unwrap();
        let total = quad::integrate(
            |th| {
                quad::integrate(
                    |r| joint_density_r_theta(r, angle(th), mu, sigma).unwrap(),
                    1e-12,
                    40.0,
                    1e-11,
                )
            },
            -PI,
            PI,
            1e-9,
        );
        assert!((total - 1.0).abs() < 1e-7, "got {total}");
    }

    #[test]
    fn pn_uniform_case() {
        for &th in &[-3.0, -0.5, 0.0, 1.2, PI] {
            let v = pn_density(angle(th), Mean2::zero(), Cov2::identity());
            assert!((v - 1.0 / (2.0 * PI)).abs() < 1e-15);
        }
    }

    #[test]
    fn pn_against_radial_quadrature_oracle() {
        // Integrate the joint density over r as an independent route.
        let mu = Mean2::new(1.0, 0.0).unwrap();
        let sigma = Cov2::identity();
        let by_quad = quad::integrate(
            |r| joint_density_r_theta(r, angle(0.0), mu, sigma).unwrap(),
            1e-12,
            40.0,
            1e-12,
        );
        let direct = pn_density(angle(0.0), mu, sigma);
        assert!((direct - by_quad).abs() < 1e-10);
        assert!((direct - 0.43218).abs() < 5e-6, "got {direct}");
    }

    #[test]
    fn pn_normalizes_over_circle() {
        let cases = [
            (Mean2::new(3.0, -2.0).unwrap(), Cov2::new(2.0, 0.5, 0.6).unwrap()),
            (Mean2::new(-8.0, 1.0).unwrap(), Cov2::new(0.7, 1.9, -0.8).unwrap()),
            (Mean2::new(0.0, 15.0).unwrap(), Cov2::identity()),
        ];
        for (mu, sigma) in cases {
            let total = quad::integrate(|th| pn_density(angle(th), mu, sigma), -PI, PI, 1e-11);
            assert!((total - 1.0).abs() < 1e-9, "mu={mu:?} total={total}");
        }
    }

    #[test]
    fn scale_identity() {
        let mu = Mean2::new(2.0, -1.0).unwrap();
        let g = Cov2::new(1.8, 2.5, 0.4).unwrap();
        for c in [2.0, 10.0] {
            for &th in &[-2.0, 0.3, 3.0] {
                let base = pn_density(angle(th), mu, g);
                let scaled = pn_density(
                    angle(th),
                    Mean2::new(c * mu.mu1, c * mu.mu2).unwrap(),
                    g.scaled(c),
                );
                assert!((base - scaled).abs() < 1e-13, "c={c} th={th}");
            }
        }
    }

    #[test]
    fn tpn_mass_basics() {
        let full = ArcInterval::full_circle();
        assert!((tpn_mass(Mean2::new(2.0, 1.0).unwrap(), &full) - 1.0).abs() < 1e-9);
        // Uniform case: mass is arc length over 2π.
        let arc = ArcInterval::symmetric(0.4).unwrap();
        assert!((tpn_mass(Mean2::zero(), &arc) - 0.4 / PI).abs() < 1e-10);
    }

    #[test]
    fn tpn_mass_additive_over_adjacent_arcs() {
        let mu = Mean2::new(1.3, -0.4).unwrap();
        let whole = tpn_mass_between(mu, -1.0, 2.0);
        let parts = tpn_mass_between(mu, -1.0, 0.3) + tpn_mass_between(mu, 0.3, 2.0);
        assert!((whole - parts).abs() < 1e-9);
    }

    #[test]
    fn mean_direction_cases() {
        let (dir, res) = mean_direction_and_resultant(Mean2::zero(), Cov2::identity());
        assert!(dir.is_none());
        assert!(res < 1e-8);

        let (dir, res5) = mean_direction_and_resultant(Mean2::new(5.0, 0.0).unwrap(), Cov2::identity());
        assert!(dir.unwrap().radians().abs() < 1e-8);
        assert!(res5 > 0.0 && res5 <= 1.0);

        let (_, res2) = mean_direction_and_resultant(Mean2::new(2.0, 0.0).unwrap(), Cov2::identity());
        assert!(res2 < res5, "concentration should grow with ‖μ‖");
    }

    #[test]
    fn slope_diagnostics_cases() {
        // Coefficients from the interpretation example: m′(0) = 8/5.
        let (_, m_prime, _) = slope_diagnostics((1.0, 3.0), (-2.0, 2.0), 0.0).unwrap();
        assert!((m_prime - 1.6).abs() < 1e-14);

        // Flat slopes: the direction never moves.
        for &x in &[-3.0, 0.0, 7.0] {
            let (_, mp, rate) = slope_diagnostics((1.5, 0.0), (-0.4, 0.0), x).unwrap();
            assert_eq!(mp, 0.0);
            assert_eq!(rate, 0.0);
        }

        // Proportional case: direction settles at atan2(β₂₁, β₁₁) past the root.
        let (b10, b11, b20, b21) = (1.0f64, 2.0, 0.5, 1.0);
        assert!((b10 * b21 - b11 * b20).abs() < 1e-15);
        let x = -b20 / b21 + 1.0;
        let (m, _, _) = slope_diagnostics((b10, b11), (b20, b21), x).unwrap();
        let expect = atan2_paper(b21, b11).unwrap().radians();
        assert!((m.radians() - expect).abs() < 1e-12);
    }
}
