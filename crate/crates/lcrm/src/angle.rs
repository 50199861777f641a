//! Angular values on (−π, π] and arcs of the circle.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A wrapped angle in radians, always in (−π, π].
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Angle(f64);

impl Angle {
    /// Wraps an arbitrary finite radian value into (−π, π].
    pub fn wrap(raw: f64) -> Result<Angle> {
        if !raw.is_finite() {
            return Err(Error::Domain(format!("cannot wrap non-finite angle {raw}")));
        }
        Ok(Angle(wrap_raw(raw)))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn cos(self) -> f64 {
        self.0.cos()
    }

    pub fn sin(self) -> f64 {
        self.0.sin()
    }

    /// Exact zero is the censored/inflated observation marker.
    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }
}

/// Maps a finite radian value to its representative in (−π, π].
fn wrap_raw(raw: f64) -> f64 {
    // rem_euclid lands in [0, 2π); shift the upper half down.
    let r = raw.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else if r == 0.0 {
        // rem_euclid may return -0.0; normalize the sign so wrap(0) == 0 bitwise.
        0.0
    } else {
        r
    }
}

/// Wraps a raw radian value into (−π, π].
pub fn wrap(theta_raw: f64) -> Result<Angle> {
    Angle::wrap(theta_raw)
}

/// Two-argument arctangent with the sgn(0) = +1 convention:
///
/// ```text
/// atan2(S, C) = arctan(S/C)              C > 0
///             = arctan(S/C) + π sgn(S)   C < 0
///             = (π/2) sgn(S)             C = 0, S ≠ 0
/// sgn(u) = 1(u ≥ 0) − 1(u < 0)
/// ```
///
/// Differs from the platform `atan2` only on boundary rays where S = ±0
/// with C < 0, where this convention returns +π.
pub fn atan2_paper(s: f64, c: f64) -> Result<Angle> {
    if s == 0.0 && c == 0.0 {
        return Err(Error::UndefinedDirection);
    }
    let sgn_s = if s >= 0.0 { 1.0 } else { -1.0 };
    let value = if c > 0.0 {
        (s / c).atan()
    } else if c < 0.0 {
        (s / c).atan() + PI * sgn_s
    } else {
        (PI / 2.0) * sgn_s
    };
    Ok(Angle(value))
}

/// An open arc (δ₁, δ₂) of the circle with −π ≤ δ₁ < δ₂ ≤ π.
///
/// δ₁ = −π together with δ₂ = π denotes the full circle (−π, π].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcInterval {
    delta1: f64,
    delta2: f64,
}

impl ArcInterval {
    pub fn new(delta1: f64, delta2: f64) -> Result<ArcInterval> {
        if !delta1.is_finite() || !delta2.is_finite() {
            return Err(Error::Domain("arc endpoints must be finite".into()));
        }
        if !(-PI..=PI).contains(&delta1) || !(-PI..=PI).contains(&delta2) {
            return Err(Error::Domain(format!(
                "arc endpoints must lie in [-π, π], got ({delta1}, {delta2})"
            )));
        }
        if delta1 >= delta2 {
            return Err(Error::Domain(format!(
                "arc requires δ1 < δ2, got ({delta1}, {delta2})"
            )));
        }
        Ok(ArcInterval { delta1, delta2 })
    }

    /// Symmetric arc (−δ, δ) used for censoring around zero.
    pub fn symmetric(delta: f64) -> Result<ArcInterval> {
        ArcInterval::new(-delta, delta)
    }

    pub fn full_circle() -> ArcInterval {
        ArcInterval { delta1: -PI, delta2: PI }
    }

    pub fn delta1(&self) -> f64 {
        self.delta1
    }

    pub fn delta2(&self) -> f64 {
        self.delta2
    }

    pub fn width(&self) -> f64 {
        self.delta2 - self.delta1
    }

    pub fn is_full_circle(&self) -> bool {
        self.delta1 == -PI && self.delta2 == PI
    }

    /// Membership in the open arc; the endpoint δ₂ = π is included so that
    /// arcs reaching the wrap point cover the whole image of `wrap`.
    pub fn contains(&self, angle: Angle) -> bool {
        let x = angle.radians();
        x > self.delta1 && (x < self.delta2 || (x == PI && self.delta2 == PI))
    }

    pub fn contains_zero(&self) -> bool {
        self.delta1 < 0.0 && self.delta2 > 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn wrap_identity_and_periodicity() {
        assert_eq!(wrap(0.0).unwrap().radians(), 0.0);
        assert!((wrap(3.0 * PI).unwrap().radians() - PI).abs() < 1e-12);
        assert_eq!(wrap(-PI).unwrap().radians(), PI);
        assert_eq!(wrap(PI).unwrap().radians(), PI);
    }

    #[test]
    fn wrap_rejects_non_finite() {
        assert!(wrap(f64::NAN).is_err());
        assert!(wrap(f64::INFINITY).is_err());
    }

    #[test]
    fn atan2_matches_paper_cases() {
        assert!((atan2_paper(1.0, 0.0).unwrap().radians() - PI / 2.0).abs() < 1e-15);
        // sgn(0) = +1 so (0, −1) maps to +π, not −π.
        assert!((atan2_paper(0.0, -1.0).unwrap().radians() - PI).abs() < 1e-15);
        assert!((atan2_paper(1.0, 1.0).unwrap().radians() - PI / 4.0).abs() < 1e-15);
        assert!(matches!(atan2_paper(0.0, 0.0), Err(Error::UndefinedDirection)));
    }

    #[test]
    fn atan2_agrees_with_platform_off_boundary() {
        let vals = [-2.3, -1.0, -0.4, 0.7, 1.9, 3.0];
        for &s in &vals {
            for &c in &vals {
                let ours = atan2_paper(s, c).unwrap().radians();
                let std = s.atan2(c);
                assert!((ours - std).abs() < 1e-14, "mismatch at ({s}, {c})");
            }
        }
    }

    #[test]
    fn arc_membership() {
        let arc = ArcInterval::symmetric(0.035).unwrap();
        assert!(arc.contains(Angle::wrap(0.0).unwrap()));
        assert!(arc.contains(Angle::wrap(0.034).unwrap()));
        assert!(!arc.contains(Angle::wrap(0.035).unwrap()));
        assert!(!arc.contains(Angle::wrap(-0.035).unwrap()));
        let full = ArcInterval::full_circle();
        assert!(full.contains(Angle::wrap(PI).unwrap()));
        assert!(full.contains(Angle::wrap(-3.0).unwrap()));
    }

    proptest! {
        #[test]
        fn wrap_is_idempotent_and_shift_equivariant(theta in -50.0..50.0f64, k in -5i32..=5) {
            let w = wrap(theta).unwrap().radians();
            prop_assert!(w > -PI && w <= PI);
            let again = wrap(w).unwrap().radians();
            prop_assert!((again - w).abs() < 1e-12);
            let shifted = wrap(theta + 2.0 * PI * k as f64).unwrap().radians();
            // Representatives agree up to rounding of the 2πk shift.
            let diff = (shifted - w).abs();
            prop_assert!(diff < 1e-9 || (2.0 * PI - diff).abs() < 1e-9);
        }
    }
}
