//! Post-fit analysis: Geweke convergence scores, HPD intervals,
//! significance ellipses, posterior predictive densities, and
//! donut-plot points.

use serde::{Deserialize, Serialize};

use crate::angle::{wrap, Angle};
use crate::density::{pn_density_unit, Mean2};
use crate::error::{Error, Result};
use crate::gibbs::PosteriorSamples;
use crate::model::{build_design_row, reconstruct_sigma_b};
use crate::rng::RngStream;
use crate::samplers::sample_mvn2;

/// Standardized difference of early/late segment means with lag-window
/// spectral variance estimates. Zero by convention on constant columns.
pub fn geweke_z(samples: &[f64], frac_a: f64, frac_b: f64) -> Result<f64> {
    if samples.len() < 100 {
        return Err(Error::Diagnostics(format!(
            "Geweke needs at least 100 draws, got {}",
            samples.len()
        )));
    }
    if !(frac_a > 0.0 && frac_b > 0.0 && frac_a + frac_b <= 1.0) {
        return Err(Error::Diagnostics("segment fractions must be positive and sum to ≤ 1".into()));
    }
    let n = samples.len();
    let na = ((n as f64 * frac_a) as usize).max(2);
    let nb = ((n as f64 * frac_b) as usize).max(2);
    let seg_a = &samples[..na];
    let seg_b = &samples[n - nb..];
    let (ma, sa) = spectral_zero(seg_a);
    let (mb, sb) = spectral_zero(seg_b);
    let denom = (sa / na as f64 + sb / nb as f64).sqrt();
    if denom == 0.0 {
        return Ok(if ma == mb { 0.0 } else { f64::INFINITY });
    }
    Ok((ma - mb) / denom)
}

/// Mean and Bartlett lag-window estimate of the spectral density at zero
/// with the usual automatic bandwidth.
fn spectral_zero(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let lag_max = (4.0 * (n as f64 / 100.0).powf(2.0 / 9.0)).floor() as usize;
    let lag_max = lag_max.clamp(1, n - 1);
    let gamma = |k: usize| -> f64 {
        xs.iter()
            .take(n - k)
            .zip(xs.iter().skip(k))
            .map(|(a, b)| (a - mean) * (b - mean))
            .sum::<f64>()
            / n as f64
    };
    let mut s = gamma(0);
    for k in 1..=lag_max {
        let w = 1.0 - k as f64 / (lag_max as f64 + 1.0);
        s += 2.0 * w * gamma(k);
    }
    (mean, s.max(0.0))
}

/// Minimal-width interval holding the stated posterior mass.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HpdInterval {
    pub lo: f64,
    pub hi: f64,
    pub mass: f64,
}

impl HpdInterval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// Narrowest window of ⌈mass·N⌉ consecutive sorted draws.
pub fn hpd(samples: &[f64], mass: f64) -> Result<HpdInterval> {
    if samples.len() < 100 {
        return Err(Error::Diagnostics(format!("HPD needs at least 100 draws, got {}", samples.len())));
    }
    if !(mass > 0.0 && mass < 1.0) {
        return Err(Error::Diagnostics(format!("HPD mass must be in (0,1), got {mass}")));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("no NaN draws"));
    let n = sorted.len();
    let k = ((mass * n as f64).ceil() as usize).clamp(1, n);
    let mut best = (0usize, f64::INFINITY);
    for i in 0..=(n - k) {
        let width = sorted[i + k - 1] - sorted[i];
        if width < best.1 {
            best = (i, width);
        }
    }
    Ok(HpdInterval { lo: sorted[best.0], hi: sorted[best.0 + k - 1], mass })
}

/// Symmetric order-statistic window holding the same ⌈mass·N⌉ draws as
/// [`hpd`] counts; by construction never narrower than the HPD interval.
pub fn equal_tailed(samples: &[f64], mass: f64) -> Result<(f64, f64)> {
    if samples.is_empty() {
        return Err(Error::Diagnostics("empty sample".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("no NaN draws"));
    let n = sorted.len();
    let k = ((mass * n as f64).ceil() as usize).clamp(1, n);
    let lo = (n - k) / 2;
    Ok((sorted[lo], sorted[lo + k - 1]))
}

/// Interpolated equal-tailed quantile interval ((1−mass)/2, (1+mass)/2);
/// the convention used for simulation-study coverage.
pub fn equal_tailed_quantiles(samples: &[f64], mass: f64) -> Result<(f64, f64)> {
    if samples.is_empty() {
        return Err(Error::Diagnostics("empty sample".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("no NaN draws"));
    let tail = (1.0 - mass) / 2.0;
    Ok((quantile_sorted(&sorted, tail), quantile_sorted(&sorted, 1.0 - tail)))
}

/// Linear-interpolation sample quantile on a sorted slice.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = p.clamp(0.0, 1.0) * (n - 1) as f64;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 >= n {
        sorted[n - 1]
    } else {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    }
}

/// Normal-approximation confidence ellipse for a posterior pair.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Ellipse {
    pub center: (f64, f64),
    /// Semi-axis lengths, major first.
    pub semi_major: f64,
    pub semi_minor: f64,
    /// Rotation of the major axis, radians.
    pub angle: f64,
    pub level: f64,
    pub contains_origin: bool,
}

/// Ellipse from the sample mean/covariance of two parameter columns at
/// the chi-square(2) quantile of `level`, flagging whether (0, 0) lies
/// inside (the graphical significance check).
pub fn significance_ellipse(xs: &[f64], ys: &[f64], level: f64) -> Result<Ellipse> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::Diagnostics("ellipse needs two equal-length columns of ≥ 3 draws".into()));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Diagnostics(format!("level must be in (0,1), got {level}")));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    sxx /= n - 1.0;
    syy /= n - 1.0;
    sxy /= n - 1.0;
    let det = sxx * syy - sxy * sxy;
    let scale = (sxx.abs() + syy.abs()).max(1e-300);
    if det <= scale * scale * 1e-14 {
        return Err(Error::Diagnostics("rank-deficient sample covariance".into()));
    }
    // χ²₂ quantile in closed form.
    let q = -2.0 * (1.0 - level).ln();
    // Eigen-decomposition of the 2×2 covariance.
    let tr = sxx + syy;
    let disc = ((sxx - syy) * (sxx - syy) + 4.0 * sxy * sxy).sqrt();
    let l1 = 0.5 * (tr + disc);
    let l2 = 0.5 * (tr - disc);
    let angle = if sxy == 0.0 && sxx >= syy {
        0.0
    } else if sxy == 0.0 {
        std::f64::consts::FRAC_PI_2
    } else {
        (l1 - sxx).atan2(sxy)
    };
    // Mahalanobis distance of the origin.
    let d2 = (syy * mx * mx - 2.0 * sxy * mx * my + sxx * my * my) / det;
    Ok(Ellipse {
        center: (mx, my),
        semi_major: (l1 * q).sqrt(),
        semi_minor: (l2 * q).sqrt(),
        angle,
        level,
        contains_origin: d2 <= q,
    })
}

/// A hypothetical subject for posterior prediction: fixed linear
/// covariates plus the circular covariate (e.g. the initial condition).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PredictiveSpec {
    pub x: Vec<f64>,
    pub theta_x: Angle,
    /// Draw a fresh random effect per kept draw (new-subject prediction);
    /// with `false` the population mean b = 0 is used.
    #[serde(default = "default_true")]
    pub new_subject: bool,
}

fn default_true() -> bool {
    true
}

/// Posterior predictive density of the response angle on a grid:
/// averages the Stage-I projected-normal density over kept draws, with
/// the random effect integrated by sampling b ~ N₂(0, Σ_b-draw).
pub fn posterior_predictive_density(
    samples: &PosteriorSamples,
    spec: &PredictiveSpec,
    grid: &[f64],
    seed: u64,
) -> Result<Vec<f64>> {
    let beta_dim = spec.x.len() + 3;
    let names = &samples.names;
    let need: Vec<String> = (0..beta_dim)
        .map(|k| match k {
            0 => "beta1_0".to_string(),
            k if k <= spec.x.len() => format!("beta1_{k}"),
            k if k == spec.x.len() + 1 => "beta1_C".to_string(),
            _ => "beta1_S".to_string(),
        })
        .collect();
    for name in need.iter().chain([&"s1".to_string(), &"tau".to_string()]) {
        if !names.iter().any(|n| n == name) {
            return Err(Error::Diagnostics(format!(
                "posterior is incompatible with the predictive covariates: missing {name}"
            )));
        }
    }
    let row = build_design_row(&spec.x, spec.theta_x);
    let idx = |name: String| samples.column_index(&name).expect("checked above");
    let b1_idx: Vec<usize> = need.iter().map(|n| idx(n.clone())).collect();
    let b2_idx: Vec<usize> = need.iter().map(|n| idx(n.replace("beta1", "beta2"))).collect();
    let s1_idx = idx("s1".into());
    let tau_idx = idx("tau".into());

    let mut rng = RngStream::new(seed, 0).rng();
    let mut curve = vec![0.0; grid.len()];
    for draw in &samples.draws {
        let mut mu = (0.0, 0.0);
        for k in 0..beta_dim {
            mu.0 += row[k] * draw[b1_idx[k]];
            mu.1 += row[k] * draw[b2_idx[k]];
        }
        let b = if spec.new_subject {
            let sigma_b = reconstruct_sigma_b(draw[s1_idx], draw[tau_idx])?;
            sample_mvn2(&mut rng, (0.0, 0.0), sigma_b)
        } else {
            (0.0, 0.0)
        };
        let mean = Mean2::new(mu.0 + b.0, mu.1 + b.1)?;
        for (g, &theta) in grid.iter().enumerate() {
            curve[g] += pn_density_unit(wrap(theta)?, mean);
        }
    }
    let scale = 1.0 / samples.n_kept().max(1) as f64;
    for v in &mut curve {
        *v *= scale;
    }
    Ok(curve)
}

/// Evenly spaced angular grid over (−π, π].
pub fn angle_grid(points: usize) -> Vec<f64> {
    let n = points.max(8);
    let step = 2.0 * std::f64::consts::PI / n as f64;
    (1..=n).map(|k| -std::f64::consts::PI + k as f64 * step).collect()
}

/// One goodness-of-fit point: [1 + cos(θ̂ − θ)]·(cos θ̂, sin θ̂).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DonutPoint {
    pub x: f64,
    pub y: f64,
    /// Sign of the deviation wrap(θ̂ − θ): clockwise when negative.
    pub clockwise: bool,
}

pub fn donut_points(observed: &[Angle], predicted: &[Angle]) -> Result<Vec<DonutPoint>> {
    if observed.len() != predicted.len() {
        return Err(Error::Diagnostics(format!(
            "donut needs equal lengths (observed {}, predicted {})",
            observed.len(),
            predicted.len()
        )));
    }
    observed
        .iter()
        .zip(predicted)
        .map(|(obs, pred)| {
            let dev = wrap(pred.radians() - obs.radians())?;
            let radius = 1.0 + dev.cos();
            Ok(DonutPoint {
                x: radius * pred.cos(),
                y: radius * pred.sin(),
                clockwise: dev.radians() < 0.0,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use std::f64::consts::PI;

    fn white_noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = RngStream::new(seed, 0).rng();
        (0..n).map(|_| crate::samplers::sample_std_normal(&mut rng)).collect()
    }

    #[test]
    fn geweke_calibrated_on_white_noise() {
        let mut extreme = 0usize;
        for s in 0..1000 {
            let xs = white_noise(2000, s);
            if geweke_z(&xs, 0.1, 0.5).unwrap().abs() >= 3.0 {
                extreme += 1;
            }
        }
        assert!(extreme <= 10, "white-noise |z| ≥ 3 in {extreme}/1000 runs");
    }

    #[test]
    fn geweke_detects_mean_shift_and_handles_constants() {
        let mut xs = white_noise(2000, 7);
        for v in xs.iter_mut().skip(1000) {
            *v += 10.0;
        }
        assert!(geweke_z(&xs, 0.1, 0.5).unwrap().abs() > 5.0);
        assert_eq!(geweke_z(&vec![1.5; 500], 0.1, 0.5).unwrap(), 0.0);
        assert!(geweke_z(&xs[..50], 0.1, 0.5).is_err());
    }

    #[test]
    fn hpd_on_known_shapes() {
        let mut rng = RngStream::new(11, 0).rng();
        let uniform: Vec<f64> = (0..20_000).map(|_| rng.random::<f64>()).collect();
        let h = hpd(&uniform, 0.95).unwrap();
        assert!((h.width() - 0.95).abs() < 0.02, "uniform width {}", h.width());

        let normal = white_noise(20_000, 12);
        let h = hpd(&normal, 0.95).unwrap();
        assert!((h.lo + 1.96).abs() < 0.05, "lo {}", h.lo);
        assert!((h.hi - 1.96).abs() < 0.05, "hi {}", h.hi);

        let expo: Vec<f64> = {
            let mut rng = RngStream::new(13, 0).rng();
            (0..20_000).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect()
        };
        let h = hpd(&expo, 0.95).unwrap();
        // Density level sets of Exp(1) start at zero.
        assert!(h.lo < 0.01, "exponential HPD starts at {}", h.lo);
    }

    #[test]
    fn hpd_never_wider_than_equal_tailed() {
        for s in 0..50 {
            let xs: Vec<f64> = white_noise(500, 100 + s).iter().map(|x| x.exp()).collect();
            let h = hpd(&xs, 0.95).unwrap();
            let (lo, hi) = equal_tailed(&xs, 0.95).unwrap();
            assert!(h.width() <= hi - lo + 1e-12);
        }
    }

    #[test]
    fn ellipse_origin_decisions() {
        let xs = white_noise(5000, 21);
        let ys = white_noise(5000, 22);
        let e = significance_ellipse(&xs, &ys, 0.95).unwrap();
        assert!(e.contains_origin);

        let far_x: Vec<f64> = xs.iter().map(|v| v + 10.0).collect();
        let far_y: Vec<f64> = ys.iter().map(|v| v + 10.0).collect();
        let e = significance_ellipse(&far_x, &far_y, 0.95).unwrap();
        assert!(!e.contains_origin);

        let degenerate = vec![1.0; 500];
        assert!(significance_ellipse(&degenerate, &degenerate, 0.95).is_err());
    }

    #[test]
    fn ellipse_scaling_preserves_origin_decision() {
        let xs: Vec<f64> = white_noise(3000, 23).iter().map(|v| v + 2.5).collect();
        let ys: Vec<f64> = white_noise(3000, 24).iter().map(|v| v + 1.5).collect();
        let base = significance_ellipse(&xs, &ys, 0.95).unwrap();
        for c in [0.1, 3.0, 40.0] {
            let sx: Vec<f64> = xs.iter().map(|v| c * v).collect();
            let sy: Vec<f64> = ys.iter().map(|v| c * v).collect();
            let scaled = significance_ellipse(&sx, &sy, 0.95).unwrap();
            assert_eq!(scaled.contains_origin, base.contains_origin);
            assert!((scaled.semi_major / base.semi_major - c).abs() < 1e-9);
        }
    }

    #[test]
    fn donut_geometry() {
        let a = |x: f64| Angle::wrap(x).unwrap();
        let pts = donut_points(&[a(0.7)], &[a(0.7)]).unwrap();
        assert!((pts[0].x.hypot(pts[0].y) - 2.0).abs() < 1e-12);

        let pts = donut_points(&[a(0.0)], &[a(PI)]).unwrap();
        assert!(pts[0].x.abs() < 1e-12 && pts[0].y.abs() < 1e-12);

        let pts = donut_points(&[a(0.0)], &[a(PI / 2.0)]).unwrap();
        assert!(pts[0].x.abs() < 1e-12);
        assert!((pts[0].y - 1.0).abs() < 1e-12);
        assert!(!pts[0].clockwise);

        assert!(donut_points(&[a(0.0)], &[]).is_err());
    }

    #[test]
    fn quantile_interp_basics() {
        let sorted: Vec<f64> = (0..=100).map(|k| k as f64).collect();
        assert!((quantile_sorted(&sorted, 0.5) - 50.0).abs() < 1e-12);
        assert!((quantile_sorted(&sorted, 0.025) - 2.5).abs() < 1e-12);
    }
}
