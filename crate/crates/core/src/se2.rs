//! The group SE(2) of proper planar motions.
//!
//! A [`Pose`] is a translation `(x, y)` followed by a rotation `theta`.
//! Composition follows the usual group law
//! `(a·b).position = a.position + R(a.theta) b.position`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduce an angle to `(-π, π]`.
pub fn normalize_angle(a: f64) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::Domain(format!("angle {a} is not finite")));
    }
    Ok(wrap(a))
}

/// Infallible variant of [`normalize_angle`] for values already known to be finite.
pub(crate) fn wrap(a: f64) -> f64 {
    let mut r = a % (2.0 * PI);
    if r <= -PI {
        r += 2.0 * PI;
    } else if r > PI {
        r -= 2.0 * PI;
    }
    r
}

/// Element of SE(2). `theta` is kept in `(-π, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Default for Pose {
    fn default() -> Self {
        Self::identity()
    }
}

impl Pose {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self {
            x,
            y,
            theta: wrap(theta),
        }
    }

    pub const fn identity() -> Self {
        Self {
            x: 0.0,
            y: 0.0,
            theta: 0.0,
        }
    }

    /// Group product `self · other`.
    pub fn compose(&self, other: &Pose) -> Pose {
        let (s, c) = self.theta.sin_cos();
        Pose::new(
            self.x + c * other.x - s * other.y,
            self.y + s * other.x + c * other.y,
            self.theta + other.theta,
        )
    }

    pub fn inverse(&self) -> Pose {
        let (s, c) = self.theta.sin_cos();
        Pose::new(
            -c * self.x - s * self.y,
            s * self.x - c * self.y,
            -self.theta,
        )
    }

    /// Planar distance to `other` plus the wrapped heading difference.
    pub fn distance(&self, other: &Pose) -> f64 {
        (self.x - other.x).hypot(self.y - other.y) + wrap(self.theta - other.theta).abs()
    }

    pub fn planar_norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.theta.is_finite()
    }
}

pub fn compose(a: &Pose, b: &Pose) -> Pose {
    a.compose(b)
}

pub fn inverse(a: &Pose) -> Pose {
    a.inverse()
}

/// Target pose seen from `q0`: `q0⁻¹ · q1`.
///
/// Planning from the identity to the returned pose and left-translating the
/// result by `q0` solves the original problem, because the dynamics commute
/// with left translations.
pub fn relative_target(q0: &Pose, q1: &Pose) -> Pose {
    q0.inverse().compose(q1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: &Pose, b: &Pose, tol: f64) -> bool {
        (a.x - b.x).abs() <= tol && (a.y - b.y).abs() <= tol && wrap(a.theta - b.theta).abs() <= tol
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_angle(0.0).unwrap(), 0.0);
        assert!((normalize_angle(3.0 * PI).unwrap() - PI).abs() < 1e-15);
        assert_eq!(normalize_angle(-PI).unwrap(), PI);
        assert_eq!(normalize_angle(PI).unwrap(), PI);
        assert!(normalize_angle(f64::NAN).is_err());
        assert!(normalize_angle(f64::INFINITY).is_err());
    }

    #[test]
    fn normalize_range_and_congruence() {
        for i in -2000..2000 {
            let a = i as f64 * 0.0137;
            let r = normalize_angle(a).unwrap();
            assert!(r > -PI && r <= PI);
            let turns = (a - r) / (2.0 * PI);
            assert!((turns - turns.round()).abs() < 1e-12);
        }
    }

    #[test]
    fn compose_examples() {
        let p = Pose::new(0.3, -1.2, 2.0);
        assert!(close(&Pose::identity().compose(&p), &p, 1e-15));
        let q = Pose::new(1.0, 0.0, FRAC_PI_2).compose(&Pose::new(1.0, 0.0, 0.0));
        assert!(close(&q, &Pose::new(1.0, 1.0, FRAC_PI_2), 1e-15));
        assert!(close(&p.compose(&p.inverse()), &Pose::identity(), 1e-15));
    }

    #[test]
    fn inverse_examples() {
        assert!(close(&inverse(&Pose::identity()), &Pose::identity(), 0.0));
        assert!(close(
            &inverse(&Pose::new(1.0, 0.0, 0.0)),
            &Pose::new(-1.0, 0.0, 0.0),
            0.0
        ));
        assert!(close(
            &inverse(&Pose::new(0.0, 0.0, FRAC_PI_2)),
            &Pose::new(0.0, 0.0, -FRAC_PI_2),
            1e-16
        ));
    }

    #[test]
    fn relative_target_examples() {
        let q1 = Pose::new(1.0, 2.0, 0.3);
        assert!(close(&relative_target(&Pose::identity(), &q1), &q1, 1e-15));
        let q = Pose::new(5.0, -1.0, 1.0);
        assert!(close(&relative_target(&q, &q), &Pose::identity(), 1e-15));
        let r = relative_target(
            &Pose::new(1.0, 0.0, FRAC_PI_2),
            &Pose::new(1.0, 1.0, FRAC_PI_2),
        );
        assert!(close(&r, &Pose::new(1.0, 0.0, 0.0), 1e-15));
    }
}
