//! Random-variate generation: truncated normals, the composite
//! truncated-projected-normal algorithm with an exact rejection
//! counterpart, the radius slice kernel, and small standard laws.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand_distr::{Beta as BetaDist, Distribution, Gamma as GammaDist, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::angle::{atan2_paper, Angle, ArcInterval};
use crate::density::{pn_density_unit, tpn_mass_between, Mean2};
use crate::error::{Error, Result};
use crate::normal;
use crate::quad;

/// Truncation bound beyond which inversion hands over to tail rejection.
const TAIL_CUT: f64 = 6.0;

/// Attempt cap for the projected-normal rejection sampler before falling
/// back to inverse-CDF sampling from the tabulated arc density.
const TPN_REJECTION_CAP: usize = 1_000_000;

/// How a truncated-projected-normal draw is produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TpnMode {
    /// The composite two-coordinate algorithm, executed verbatim.
    PaperComposite,
    /// Repeated plane draws accepted when the angle lands in the arc;
    /// exactly TPN-distributed.
    ExactRejection,
}

/// Uniform on (0, 1]; safe to pass through `ln`.
fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Uniform on (0, 1).
fn open_open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u = rng.random::<f64>();
        if u != 0.0 {
            return u;
        }
    }
}

pub fn sample_std_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Draw from N(mu, var) conditioned to the open interval (a, b); either
/// bound may be infinite.
///
/// Central intervals use CDF inversion; intervals lying entirely beyond
/// `TAIL_CUT` standard deviations use a shifted-exponential rejection
/// scheme with a complementary-CDF inversion fallback, so far-tail draws
/// keep full relative precision.
pub fn sample_truncated_normal<R: Rng + ?Sized>(
    rng: &mut R,
    mu: f64,
    var: f64,
    a: f64,
    b: f64,
) -> Result<f64> {
    if !(var > 0.0) || !var.is_finite() {
        return Err(Error::Domain(format!("variance must be positive and finite, got {var}")));
    }
    if !(a < b) {
        return Err(Error::Domain(format!("truncation requires a < b, got ({a}, {b})")));
    }
    let sd = var.sqrt();
    let alpha = (a - mu) / sd;
    let beta = (b - mu) / sd;

    if alpha == f64::NEG_INFINITY && beta == f64::INFINITY {
        return Ok(mu + sd * sample_std_normal(rng));
    }

    let z = if alpha >= TAIL_CUT {
        tail_sample(rng, alpha, beta)?
    } else if beta <= -TAIL_CUT {
        -tail_sample(rng, -beta, -alpha)?
    } else {
        let pa = if alpha == f64::NEG_INFINITY { 0.0 } else { normal::cdf(alpha) };
        let pb = if beta == f64::INFINITY { 1.0 } else { normal::cdf(beta) };
        let mass = pb - pa;
        if !(mass > 1e-300) {
            return Err(Error::DegenerateInterval(format!(
                "truncated normal mass below 1e-300 on ({a}, {b})"
            )));
        }
        let u = pa + mass * open_open_unit(rng);
        clamp_open(normal::quantile(u), alpha, beta)
    };
    Ok(mu + sd * z)
}

/// Standardized draw from N(0,1) on (lo, hi) with lo ≥ `TAIL_CUT`.
///
/// One-sided tails run shifted-exponential rejection directly (well
/// defined at any distance, no mass evaluation); only two-sided slivers
/// whose mass is unrepresentable are rejected as degenerate.
fn tail_sample<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> Result<f64> {
    let lambda = 0.5 * (lo + (lo * lo + 4.0).sqrt());
    if hi == f64::INFINITY {
        // Robert's acceptance rate here is at least ~0.76.
        for _ in 0..1_000_000 {
            let z = lo - open_unit(rng).ln() / lambda;
            let d = z - lambda;
            if open_unit(rng) <= (-0.5 * d * d).exp() {
                return Ok(z);
            }
        }
        return Err(Error::Domain(format!("tail rejection failed at lo = {lo}")));
    }

    let q_lo = normal::cdf(-lo);
    let q_hi = normal::cdf(-hi);
    let mass = q_lo - q_hi;
    if !(mass > 1e-300) {
        return Err(Error::DegenerateInterval(format!(
            "truncated normal mass below 1e-300 on standardized ({lo}, {hi})"
        )));
    }
    // Thin slivers of the tail: invert the complementary CDF directly.
    if mass / q_lo < 1e-3 {
        let u = q_hi + mass * open_open_unit(rng);
        return Ok(clamp_open(-normal::quantile(u), lo, hi));
    }
    // Shifted-exponential rejection thinned to (lo, hi).
    for _ in 0..100_000 {
        let z = lo - open_unit(rng).ln() / lambda;
        if z >= hi {
            continue;
        }
        let d = z - lambda;
        if open_unit(rng) <= (-0.5 * d * d).exp() {
            return Ok(z);
        }
    }
    let u = q_hi + mass * open_open_unit(rng);
    Ok(clamp_open(-normal::quantile(u), lo, hi))
}

/// Clamp into [lo, hi] and nudge off exact endpoints so downstream arcs
/// stay strictly open.
fn clamp_open(x: f64, lo: f64, hi: f64) -> f64 {
    let mut v = x.clamp(lo, hi);
    if v == lo && lo != f64::NEG_INFINITY {
        v = lo + (hi - lo).min(1.0) * 1e-14;
    } else if v == hi && hi != f64::INFINITY {
        v = hi - (hi - lo).min(1.0) * 1e-14;
    }
    v
}

/// Draw an angle from the projected normal PN(μ, I₂) restricted to `arc`.
pub fn sample_tpn<R: Rng + ?Sized>(
    rng: &mut R,
    mu: Mean2,
    arc: &ArcInterval,
    mode: TpnMode,
) -> Result<Angle> {
    match mode {
        TpnMode::ExactRejection => tpn_exact_rejection(rng, mu, arc),
        TpnMode::PaperComposite => tpn_paper_composite(rng, mu, arc),
    }
}

fn tpn_exact_rejection<R: Rng + ?Sized>(rng: &mut R, mu: Mean2, arc: &ArcInterval) -> Result<Angle> {
    for _ in 0..TPN_REJECTION_CAP {
        let y1 = mu.mu1 + sample_std_normal(rng);
        let y2 = mu.mu2 + sample_std_normal(rng);
        if y1 == 0.0 && y2 == 0.0 {
            continue;
        }
        let theta = atan2_paper(y2, y1)?;
        if arc.contains(theta) {
            return Ok(theta);
        }
    }
    tpn_inverse_cdf(rng, mu, arc)
}

/// Inverse-CDF sampling from the quadrature-tabulated arc density; used
/// when rejection exhausts its attempt budget on a sliver arc.
fn tpn_inverse_cdf<R: Rng + ?Sized>(rng: &mut R, mu: Mean2, arc: &ArcInterval) -> Result<Angle> {
    const PANELS: usize = 512;
    let d1 = arc.delta1();
    let h = arc.width() / PANELS as f64;
    let mut cum = [0.0f64; PANELS + 1];
    for k in 0..PANELS {
        let lo = d1 + k as f64 * h;
        let mass = quad::integrate(
            |th| pn_density_unit(Angle::wrap(th).expect("finite node"), mu),
            lo,
            lo + h,
            1e-13,
        );
        cum[k + 1] = cum[k] + mass;
    }
    let total = cum[PANELS];
    if !(total > 1e-300) {
        return Err(Error::DegenerateInterval("arc carries no quadrature mass".into()));
    }
    let target = open_open_unit(rng) * total;
    let k = cum.partition_point(|&c| c < target).saturating_sub(1).min(PANELS - 1);
    let within = (target - cum[k]) / (cum[k + 1] - cum[k]).max(1e-300);
    Angle::wrap(d1 + (k as f64 + within.clamp(0.0, 1.0)) * h)
}

/// The composite algorithm: z₁ from the positive half-line, z₂ from a
/// case-determined truncated normal or mixture, Bernoulli/Trinomial branch
/// indicators with arc-mass weights, and case-specific ±π offsets.
fn tpn_paper_composite<R: Rng + ?Sized>(rng: &mut R, mu: Mean2, arc: &ArcInterval) -> Result<Angle> {
    let (d1, d2) = (arc.delta1(), arc.delta2());
    let z1 = sample_truncated_normal(rng, mu.mu1, 1.0, 0.0, f64::INFINITY)?;
    let t1 = z1 * d1.tan();
    let t2 = z1 * d2.tan();

    let theta = if d1 >= -FRAC_PI_2 && d2 <= FRAC_PI_2 {
        let z2 = sample_truncated_normal(rng, mu.mu2, 1.0, t1, t2)?;
        atan2_paper(z2, z1)?.radians()
    } else if d1 > FRAC_PI_2 {
        let z2 = sample_truncated_normal(rng, mu.mu2, 1.0, t1, t2)?;
        atan2_paper(z2, z1)?.radians() + PI
    } else if d2 < -FRAC_PI_2 {
        let z2 = sample_truncated_normal(rng, mu.mu2, 1.0, t1, t2)?;
        atan2_paper(z2, z1)?.radians() - PI
    } else if d1 < -FRAC_PI_2 && d2 <= FRAC_PI_2 {
        let total = tpn_mass_between(mu, d1, d2);
        let p1 = safe_ratio(tpn_mass_between(mu, d1, -FRAC_PI_2), total);
        if sample_bernoulli(rng, p1)? == 1 {
            let z2 = sample_truncated_normal(rng, mu.mu2, 1.0, t1, f64::INFINITY)?;
            atan2_paper(z2, z1)?.radians() - PI
        } else {
            let z2 = sample_truncated_normal(rng, mu.mu2, 1.0, f64::NEG_INFINITY, t2)?;
            atan2_paper(z2, z1)?.radians()
        }
    } else if d1 >= -FRAC_PI_2 {
        let total = tpn_mass_between(mu, d1, d2);
        let p2 = safe_ratio(tpn_mass_between(mu, d1, FRAC_PI_2), total);
        if sample_bernoulli(rng, p2)? == 1 {
            let z2 = sample_truncated_normal(rng, mu.mu2, 1.0, t1, f64::INFINITY)?;
            atan2_paper(z2, z1)?.radians()
        } else {
            let z2 = sample_truncated_normal(rng, mu.mu2, 1.0, f64::NEG_INFINITY, t2)?;
            atan2_paper(z2, z1)?.radians() + PI
        }
    } else {
        let total = tpn_mass_between(mu, d1, d2);
        let p1 = safe_ratio(tpn_mass_between(mu, d1, -FRAC_PI_2), total);
        let p2 = safe_ratio(tpn_mass_between(mu, -FRAC_PI_2, FRAC_PI_2), total);
        let (h1, h2) = sample_trinomial(rng, p1, p2)?;
        if h1 == 1 {
            let z2 = sample_truncated_normal(rng, mu.mu2, 1.0, t1, f64::INFINITY)?;
            atan2_paper(z2, z1)?.radians() - PI
        } else if h2 == 1 {
            let z2 = mu.mu2 + sample_std_normal(rng);
            atan2_paper(z2, z1)?.radians()
        } else {
            let z2 = sample_truncated_normal(rng, mu.mu2, 1.0, f64::NEG_INFINITY, t2)?;
            atan2_paper(z2, z1)?.radians() + PI
        }
    };

    let wrapped = Angle::wrap(theta)?;
    if arc.contains(wrapped) {
        Ok(wrapped)
    } else {
        // Floating-point landing on an endpoint; move to the nearest
        // interior point.
        let eps = arc.width() * 1e-12;
        let inner = wrapped.radians().clamp(d1 + eps, d2 - eps);
        Angle::wrap(inner)
    }
}

fn safe_ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        (num / den).clamp(0.0, 1.0)
    } else {
        0.0
    }
}

/// One slice transition for the radius density π(r) ∝ r·exp{−½(r − a*)²}
/// on (0, ∞), starting at `r_current`. Leaves the target invariant;
/// successive calls form a Markov chain, not independent draws.
pub fn sample_radius_slice<R: Rng + ?Sized>(rng: &mut R, r_current: f64, a_star: f64) -> Result<f64> {
    if !(r_current > 0.0) || !r_current.is_finite() {
        return Err(Error::Domain(format!("radius must be in (0, ∞), got {r_current}")));
    }
    // t₀ ~ U(0, exp{−½(r₀−a)²}); work with s = √(−2 ln t₀) directly.
    let d = r_current - a_star;
    let s = (d * d - 2.0 * open_unit(rng).ln()).sqrt();
    let zeta1 = (a_star - s).max(0.0);
    let zeta2 = a_star + s;
    let kappa = open_unit(rng);
    Ok(((zeta2 * zeta2 - zeta1 * zeta1) * kappa + zeta1 * zeta1).sqrt())
}

/// Bivariate normal draw with the given mean and covariance.
pub fn sample_mvn2<R: Rng + ?Sized>(rng: &mut R, mean: (f64, f64), cov: crate::density::Cov2) -> (f64, f64) {
    let l11 = cov.s11().sqrt();
    let l21 = cov.cov12() / l11;
    let l22 = (cov.s22() - l21 * l21).max(0.0).sqrt();
    let z1 = sample_std_normal(rng);
    let z2 = sample_std_normal(rng);
    (mean.0 + l11 * z1, mean.1 + l21 * z1 + l22 * z2)
}

/// Gamma in the shape–rate parameterization, so the mean is shape/rate.
pub fn sample_gamma<R: Rng + ?Sized>(rng: &mut R, shape: f64, rate: f64) -> Result<f64> {
    if !(shape > 0.0) || !(rate > 0.0) {
        return Err(Error::Domain(format!("gamma requires shape, rate > 0, got ({shape}, {rate})")));
    }
    let dist = GammaDist::new(shape, 1.0 / rate)
        .map_err(|e| Error::Domain(format!("gamma parameters rejected: {e}")))?;
    Ok(dist.sample(rng))
}

pub fn sample_beta<R: Rng + ?Sized>(rng: &mut R, a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::Domain(format!("beta requires a, b > 0, got ({a}, {b})")));
    }
    let dist = BetaDist::new(a, b).map_err(|e| Error::Domain(format!("beta parameters rejected: {e}")))?;
    Ok(dist.sample(rng))
}

pub fn sample_bernoulli<R: Rng + ?Sized>(rng: &mut R, p: f64) -> Result<u8> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("bernoulli requires p in [0, 1], got {p}")));
    }
    Ok(u8::from(rng.random::<f64>() < p))
}

/// One trial over three categories: (H₁=1, H₂=0) w.p. p₁, (0, 1) w.p. p₂,
/// (0, 0) otherwise.
pub fn sample_trinomial<R: Rng + ?Sized>(rng: &mut R, p1: f64, p2: f64) -> Result<(u8, u8)> {
    if !(0.0..=1.0).contains(&p1) || !(0.0..=1.0).contains(&p2) || p1 + p2 > 1.0 + 1e-12 {
        return Err(Error::Domain(format!("trinomial requires p1, p2 ≥ 0 with p1+p2 ≤ 1, got ({p1}, {p2})")));
    }
    let u = rng.random::<f64>();
    if u < p1 {
        Ok((1, 0))
    } else if u < p1 + p2 {
        Ok((0, 1))
    } else {
        Ok((0, 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    fn mean_var(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n;
        (m, v)
    }

    #[test]
    fn truncated_normal_untruncated_case() {
        let mut rng = RngStream::new(11, 0).rng();
        let xs: Vec<f64> = (0..100_000)
            .map(|_| sample_truncated_normal(&mut rng, 0.0, 1.0, f64::NEG_INFINITY, f64::INFINITY).unwrap())
            .collect();
        let (m, v) = mean_var(&xs);
        assert!(m.abs() < 0.02, "mean {m}");
        assert!((v - 1.0).abs() < 0.03, "var {v}");
    }

    #[test]
    fn truncated_normal_half_normal_mean() {
        let mut rng = RngStream::new(12, 0).rng();
        let xs: Vec<f64> = (0..100_000)
            .map(|_| sample_truncated_normal(&mut rng, 0.0, 1.0, 0.0, f64::INFINITY).unwrap())
            .collect();
        let (m, _) = mean_var(&xs);
        let expect = (2.0 / PI).sqrt();
        assert!((m - expect).abs() < 0.01, "mean {m} vs {expect}");
    }

    #[test]
    fn truncated_normal_ks_against_cdf_oracle() {
        // N(5, 1) on (−1, 1): truncation far into the lower tail.
        let mut rng = RngStream::new(13, 0).rng();
        let n = 100_000;
        let mut xs: Vec<f64> = (0..n)
            .map(|_| sample_truncated_normal(&mut rng, 5.0, 1.0, -1.0, 1.0).unwrap())
            .collect();
        assert!(xs.iter().all(|&x| (-1.0..1.0).contains(&x)));
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let pa = normal::cdf(-1.0 - 5.0);
        let pb = normal::cdf(1.0 - 5.0);
        let mut d: f64 = 0.0;
        for (i, &x) in xs.iter().enumerate() {
            let f = (normal::cdf(x - 5.0) - pa) / (pb - pa);
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            d = d.max((f - lo).abs()).max((f - hi).abs());
        }
        let crit = 1.628 / (n as f64).sqrt();
        assert!(d < crit, "KS {d} ≥ {crit}");
    }

    #[test]
    fn truncated_normal_far_tail() {
        let mut rng = RngStream::new(14, 0).rng();
        for _ in 0..20_000 {
            let x = sample_truncated_normal(&mut rng, 0.0, 1.0, 8.0, 8.5).unwrap();
            assert!((8.0..8.5).contains(&x), "tail draw {x} escaped");
        }
        // Degenerate slice beyond representable mass.
        assert!(matches!(
            sample_truncated_normal(&mut rng, 0.0, 1.0, 40.0, 41.0),
            Err(Error::DegenerateInterval(_))
        ));
        assert!(sample_truncated_normal(&mut rng, 0.0, 1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn tpn_uniform_target_small_resultant() {
        let arc = ArcInterval::full_circle();
        for mode in [TpnMode::ExactRejection, TpnMode::PaperComposite] {
            let mut rng = RngStream::new(15, mode as u64).rng();
            let n = 10_000;
            let (mut c, mut s) = (0.0, 0.0);
            for _ in 0..n {
                let th = sample_tpn(&mut rng, Mean2::zero(), &arc, mode).unwrap();
                c += th.cos();
                s += th.sin();
            }
            let resultant = (c / n as f64).hypot(s / n as f64);
            assert!(resultant < 0.02, "{mode:?}: resultant {resultant}");
        }
    }

    #[test]
    fn tpn_membership_all_cases_both_modes() {
        // One arc per case of the composite algorithm, plus the full circle.
        let arcs = [
            ArcInterval::new(-0.3, 0.4).unwrap(),            // A
            ArcInterval::new(1.7, 2.9).unwrap(),             // B
            ArcInterval::new(-2.9, -1.7).unwrap(),           // C
            ArcInterval::new(-2.2, 0.9).unwrap(),            // D
            ArcInterval::new(-0.9, 2.2).unwrap(),            // E
            ArcInterval::new(-2.5, 2.5).unwrap(),            // F
            ArcInterval::full_circle(),                      // F, degenerate bounds
        ];
        let mus = [Mean2::zero(), Mean2::new(2.0, 1.0).unwrap(), Mean2::new(-1.5, 0.5).unwrap()];
        for (ai, arc) in arcs.iter().enumerate() {
            for (mi, mu) in mus.iter().enumerate() {
                for mode in [TpnMode::ExactRejection, TpnMode::PaperComposite] {
                    let mut rng = RngStream::new(16, (ai * 10 + mi) as u64).rng();
                    for _ in 0..500 {
                        let th = sample_tpn(&mut rng, *mu, arc, mode).unwrap();
                        assert!(arc.contains(th), "{mode:?} arc {ai} mu {mi}: {} outside", th.radians());
                    }
                }
            }
        }
    }

    #[test]
    fn tpn_exact_rejection_ks_against_density_oracle() {
        let arc = ArcInterval::symmetric(0.035).unwrap();
        let mu = Mean2::new(1.0, 0.0).unwrap();
        let mut rng = RngStream::new(17, 0).rng();
        let n = 10_000;
        let mut xs: Vec<f64> = (0..n)
            .map(|_| sample_tpn(&mut rng, mu, &arc, TpnMode::ExactRejection).unwrap().radians())
            .collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let total = tpn_mass_between(mu, arc.delta1(), arc.delta2());
        let mut d: f64 = 0.0;
        for (i, &x) in xs.iter().enumerate() {
            let f = tpn_mass_between(mu, arc.delta1(), x) / total;
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            d = d.max((f - lo).abs()).max((f - hi).abs());
        }
        let crit = 1.628 / (n as f64).sqrt();
        assert!(d < crit, "KS {d} ≥ {crit}");
    }

    #[test]
    fn radius_slice_stays_positive_and_rayleigh_at_zero() {
        let mut rng = RngStream::new(18, 0).rng();
        let n = 100_000;
        let mut r = 1.0;
        let mut xs = Vec::with_capacity(n);
        for _ in 0..n {
            r = sample_radius_slice(&mut rng, r, 0.0).unwrap();
            assert!(r > 0.0);
            xs.push(r);
        }
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // At a* = 0 the stationary law is exactly Rayleigh(1).
        let mut d: f64 = 0.0;
        for (i, &x) in xs.iter().enumerate() {
            let f = 1.0 - (-0.5 * x * x).exp();
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            d = d.max((f - lo).abs()).max((f - hi).abs());
        }
        let crit = 1.628 / (n as f64).sqrt();
        assert!(d < crit, "KS {d} ≥ {crit}");
    }

    #[test]
    fn radius_slice_mean_matches_quadrature_oracle() {
        let a = 10.0;
        let norm = quad::integrate(|r| r * (-0.5 * (r - a) * (r - a)).exp(), 0.0, 30.0, 1e-12);
        let mean = quad::integrate(|r| r * r * (-0.5 * (r - a) * (r - a)).exp(), 0.0, 30.0, 1e-12) / norm;
        let mut rng = RngStream::new(19, 0).rng();
        let n = 100_000;
        let mut r = 10.0;
        let mut sum = 0.0;
        for _ in 0..n {
            r = sample_radius_slice(&mut rng, r, a).unwrap();
            sum += r;
        }
        let emp = sum / n as f64;
        assert!((emp - mean).abs() < 0.05, "empirical {emp} vs {mean}");
        assert!(sample_radius_slice(&mut rng, 0.0, 1.0).is_err());
    }

    #[test]
    fn standard_laws() {
        let mut rng = RngStream::new(20, 0).rng();
        let n = 100_000;
        let betas: Vec<f64> = (0..n).map(|_| sample_beta(&mut rng, 1.0, 1.0).unwrap()).collect();
        let (m, _) = mean_var(&betas);
        assert!((m - 0.5).abs() < 0.01);

        let gammas: Vec<f64> = (0..n).map(|_| sample_gamma(&mut rng, 51.5, 10.0).unwrap()).collect();
        let (m, _) = mean_var(&gammas);
        assert!((m - 5.15).abs() < 0.02, "shape/rate mean {m}");

        for _ in 0..100 {
            assert_eq!(sample_trinomial(&mut rng, 1.0, 0.0).unwrap(), (1, 0));
        }
        assert!(sample_gamma(&mut rng, -1.0, 1.0).is_err());
        assert!(sample_beta(&mut rng, 0.0, 1.0).is_err());
        assert!(sample_bernoulli(&mut rng, 1.5).is_err());
        assert!(sample_trinomial(&mut rng, 0.8, 0.4).is_err());
    }

    #[test]
    fn samplers_are_deterministic_given_stream() {
        let draw = |stream: RngStream| {
            let mut rng = stream.rng();
            let arc = ArcInterval::new(-2.2, 0.9).unwrap();
            let mu = Mean2::new(1.0, -0.5).unwrap();
            (
                sample_truncated_normal(&mut rng, 1.0, 2.0, 0.0, 3.0).unwrap(),
                sample_tpn(&mut rng, mu, &arc, TpnMode::PaperComposite).unwrap().radians(),
                sample_radius_slice(&mut rng, 2.0, 1.0).unwrap(),
                sample_mvn2(&mut rng, (0.5, -0.5), crate::density::Cov2::new(2.0, 1.0, 0.3).unwrap()),
            )
        };
        assert_eq!(draw(RngStream::new(42, 7)), draw(RngStream::new(42, 7)));
    }
}
