//! Standard-normal primitives: density, CDF, quantile, and the stable
//! evaluation of the projected-normal bracket 1 + t·Φ(t)/φ(t).
//!
//! The central CDF range uses Cody's rational erf/erfc; tails use the
//! Laplace continued fraction for the Mills ratio, which keeps full
//! relative precision far beyond where naive 1 − Φ cancels. The quantile
//! is Acklam's rational approximation polished with Halley steps against
//! this CDF.

use std::f64::consts::PI;

pub const LN_2PI: f64 = 1.837877066409345483560659472811;
const SQRT_2: f64 = std::f64::consts::SQRT_2;
// Past this point the continued fraction takes over from erfc.
const TAIL_X: f64 = 5.0;
const CF_TERMS: u32 = 256;

/// erfc(y) for |y| ≤ 4 by Cody's rational approximations.
fn erfc_cody(y: f64) -> f64 {
    debug_assert!(y.abs() <= 4.0);
    if y < 0.0 {
        return 2.0 - erfc_cody(-y);
    }
    if y <= 0.46875 {
        const A: [f64; 5] = [
            3.16112374387056560e0,
            1.13864154151050156e2,
            3.77485237685302021e2,
            3.20937758913846947e3,
            1.85777706184603153e-1,
        ];
        const B: [f64; 4] = [
            2.36012909523441209e1,
            2.44024637934444173e2,
            1.28261652607737228e3,
            2.84423683343917062e3,
        ];
        let z = y * y;
        let mut num = A[4] * z;
        let mut den = z;
        for i in 0..3 {
            num = (num + A[i]) * z;
            den = (den + B[i]) * z;
        }
        return 1.0 - y * (num + A[3]) / (den + B[3]);
    }
    const C: [f64; 9] = [
        5.64188496988670089e-1,
        8.88314979438837594e0,
        6.61191906371416295e1,
        2.98635138197400131e2,
        8.81952221241769090e2,
        1.71204761263407058e3,
        2.05107837782607147e3,
        1.23033935479799725e3,
        2.15311535474403846e-8,
    ];
    const D: [f64; 8] = [
        1.57449261107098347e1,
        1.17693950891312499e2,
        5.37181101862009858e2,
        1.62138957456669019e3,
        3.29079923573345963e3,
        4.36261909014324716e3,
        3.43936767414372164e3,
        1.23033935480374942e3,
    ];
    let mut num = C[8] * y;
    let mut den = y;
    for i in 0..7 {
        num = (num + C[i]) * y;
        den = (den + D[i]) * y;
    }
    let ratio = (num + C[7]) / (den + D[7]);
    // Split exp(−y²) to keep the argument reduction exact.
    let ysq = (y * 16.0).trunc() / 16.0;
    let del = (y - ysq) * (y + ysq);
    (-ysq * ysq).exp() * (-del).exp() * ratio
}

/// φ(x), the standard normal density.
pub fn pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// ln φ(x).
pub fn ln_pdf(x: f64) -> f64 {
    -0.5 * x * x - 0.5 * LN_2PI
}

/// Mills ratio of the upper tail, R(x) = (1 − Φ(x))/φ(x), for x ≥ 0, via
/// the Laplace continued fraction R(x) = 1/(x + 1/(x + 2/(x + 3/(x + …)))).
fn mills_ratio_cf(x: f64) -> f64 {
    let mut v = 0.0;
    for k in (1..=CF_TERMS).rev() {
        v = k as f64 / (x + v);
    }
    1.0 / (x + v)
}

/// Φ(x), accurate in both tails.
pub fn cdf(x: f64) -> f64 {
    if x <= -TAIL_X {
        pdf(x) * mills_ratio_cf(-x)
    } else if x >= TAIL_X {
        1.0 - pdf(x) * mills_ratio_cf(x)
    } else {
        0.5 * erfc_cody(-x / SQRT_2)
    }
}

/// The projected-normal bracket g(t) = 1 + t·Φ(t)/φ(t).
///
/// Overflows to +∞ for t ≳ 38; use [`ln_bracket`] in log-space code.
pub fn bracket(t: f64) -> f64 {
    if t <= -TAIL_X {
        // g = 1 − x·R(x) at x = −t, rearranged cancellation-free:
        // with v₁ the first CF tail, g = v₁/(x + v₁).
        let x = -t;
        let mut v = 0.0;
        for k in (2..=CF_TERMS).rev() {
            v = k as f64 / (x + v);
        }
        let v1 = 1.0 / (x + v);
        v1 / (x + v1)
    } else {
        1.0 + t * cdf(t) / pdf(t)
    }
}

/// ln g(t), finite for all t.
pub fn ln_bracket(t: f64) -> f64 {
    if t <= -TAIL_X {
        bracket(t).ln()
    } else if t < 36.0 {
        (t * cdf(t) / pdf(t)).ln_1p()
    } else {
        // Φ(t) = 1 to double precision; g ≈ t/φ(t).
        t.ln() + 0.5 * t * t + 0.5 * LN_2PI
    }
}

/// Acklam's rational approximation to Φ⁻¹(p).
fn quantile_approx(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -quantile_approx(1.0 - p)
    }
}

/// Φ⁻¹(p) for p ∈ (0, 1).
pub fn quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile requires p in (0,1), got {p}");
    let mut x = quantile_approx(p);
    // Halley steps; skipped in the extreme tail where φ goes subnormal
    // and Acklam alone is already far below any usable resolution.
    if x.abs() < 37.5 {
        for _ in 0..2 {
            let e = cdf(x) - p;
            let u = e / pdf(x);
            x -= u / (1.0 + 0.5 * x * u);
        }
    }
    x
}
