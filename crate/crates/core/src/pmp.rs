//! Vertical (covector) part of the maximum-principle system.
//!
//! The covector is written in left-invariant coordinates `(h1, h2, h3)`.
//! On the normal level `H = 1` the motion splits into two regimes:
//!
//! * `h1 < 0`: rotation in place, `(h1, h3)` turns on a circle at unit speed;
//! * `h1 > 0`: forward motion, `h2` obeys a pendulum equation and the whole
//!   arc is written through Jacobi functions of one phase variable `ξ(t)`.
//!
//! The Casimir `E = h1² + h3²` is conserved in both regimes.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::elliptic::{self, complete_k, incomplete_f, sn_cn_dn_any};
use crate::error::{Error, Result};
use crate::se2::{wrap, Pose};

/// Tolerance defining "zero" for `h1` and `h3` in the branch rules.
pub const ZERO_TOL: f64 = 1e-10;
/// `|E - 1|` below which the separatrix (k = 1) closed forms are used.
pub const SEPARATRIX_TOL: f64 = 1e-6;
/// Admissible deviation from the level `H = 1`.
pub const LEVEL_TOL: f64 = 1e-9;

/// Covector in left-invariant coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Covector {
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
}

impl Covector {
    pub const fn new(h1: f64, h2: f64, h3: f64) -> Self {
        Self { h1, h2, h3 }
    }

    /// Covector on the normal level, rejected unless `|H - 1| <= 1e-9`.
    pub fn normal(h1: f64, h2: f64, h3: f64) -> Result<Self> {
        let h = Self::new(h1, h2, h3);
        h.check_level()?;
        Ok(h)
    }

    pub fn check_level(&self) -> Result<()> {
        let level = hamiltonian(self);
        if !(self.h1.is_finite() && self.h2.is_finite() && self.h3.is_finite()) {
            return Err(Error::Contract(format!("covector {self:?} is not finite")));
        }
        if (level - 1.0).abs() > LEVEL_TOL {
            return Err(Error::Contract(format!(
                "covector {self:?} has H = {level}, expected 1"
            )));
        }
        Ok(())
    }

    /// Radial projection onto `H = 1`.
    pub fn renormalized(&self) -> Result<Self> {
        let level = hamiltonian(self);
        if !(level.is_finite() && level > 0.0) {
            return Err(Error::Domain(format!(
                "covector {self:?} cannot be projected onto H = 1"
            )));
        }
        if self.h1 <= 0.0 {
            Ok(Self::new(self.h1, self.h2.signum(), self.h3))
        } else {
            Ok(Self::new(self.h1 / level, self.h2 / level, self.h3))
        }
    }

    fn s2(&self) -> f64 {
        if self.h2 < 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    /// Sign of `h3`, with the convention `s3 := s2` when `h3` vanishes.
    fn s3(&self) -> f64 {
        if self.h3.abs() <= ZERO_TOL {
            self.s2()
        } else {
            self.h3.signum()
        }
    }
}

/// Admissible control: `u1 >= 0`, `u1² + u2² <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Control {
    pub u1: f64,
    pub u2: f64,
}

/// Regime of an extremal arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    /// Rotation in place, `h1 < 0` (or entering it from `h1 = 0`).
    Rotation,
    /// Forward arc, `h1 > 0`, Casimir away from 1.
    Elliptic,
    /// `h1 = h3 = 0`: rotation in place forever.
    StableEquilibrium,
    /// `h1 = 1, h3 = 0`: straight line forever.
    Line,
    /// Forward arc on the separatrix `E = 1`.
    Tractrix,
}

impl Branch {
    /// Whether the planar projection moves on this regime.
    pub fn is_forward(self) -> bool {
        matches!(self, Branch::Elliptic | Branch::Line | Branch::Tractrix)
    }

    pub fn is_rotation(self) -> bool {
        matches!(self, Branch::Rotation | Branch::StableEquilibrium)
    }
}

/// Hamiltonian of the maximum principle: `|h2|` for `h1 <= 0`, `sqrt(h1² + h2²)` otherwise.
pub fn hamiltonian(h: &Covector) -> f64 {
    if h.h1 <= 0.0 {
        h.h2.abs()
    } else {
        h.h1.hypot(h.h2)
    }
}

/// Casimir function `E = h1² + h3²`.
pub fn casimir(h: &Covector) -> f64 {
    h.h1 * h.h1 + h.h3 * h.h3
}

/// Maximizing control on the level `H = 1`.
pub fn extremal_control(h: &Covector) -> Result<Control> {
    h.check_level()?;
    Ok(control_law(h))
}

/// Maximizing control without the level check; used where the covector is
/// known to be within integration error of `H = 1`.
pub(crate) fn control_law(h: &Covector) -> Control {
    if h.h1 > 0.0 {
        let n = h.h1.hypot(h.h2);
        Control {
            u1: h.h1 / n,
            u2: h.h2 / n,
        }
    } else {
        Control {
            u1: 0.0,
            u2: h.h2.signum(),
        }
    }
}

/// Regime selected by the switching rule, with the default separatrix tolerance.
pub fn branch_of(h: &Covector) -> Branch {
    branch_with_tolerance(h, SEPARATRIX_TOL)
}

/// Regime selected by the switching rule.
///
/// At `h1 = 0` the sign product `s2·s3` decides: non-negative enters
/// rotation (equilibrium when `h3 = 0` too), negative enters a forward arc.
pub fn branch_with_tolerance(h: &Covector, separatrix_tol: f64) -> Branch {
    if h.h1 < -ZERO_TOL {
        return Branch::Rotation;
    }
    if h.h1.abs() <= ZERO_TOL {
        if h.h3.abs() <= ZERO_TOL {
            return Branch::StableEquilibrium;
        }
        if h.s2() * h.s3() >= 0.0 {
            return Branch::Rotation;
        }
    }
    if (h.h1 - 1.0).abs() <= ZERO_TOL && h.h3.abs() <= ZERO_TOL {
        return Branch::Line;
    }
    if (casimir(h) - 1.0).abs() < separatrix_tol {
        Branch::Tractrix
    } else {
        Branch::Elliptic
    }
}

fn require_rotation(h0: &Covector) -> Result<()> {
    match branch_of(h0) {
        Branch::Rotation | Branch::StableEquilibrium => Ok(()),
        other => Err(Error::Contract(format!(
            "covector {h0:?} is on the {other:?} branch, expected Rotation"
        ))),
    }
}

/// Covector after rotating in place for `dt`.
pub fn rotation_vertical_flow(h0: &Covector, dt: f64) -> Result<Covector> {
    require_rotation(h0)?;
    Ok(rotation_flow_unchecked(h0, dt))
}

pub(crate) fn rotation_flow_unchecked(h0: &Covector, dt: f64) -> Covector {
    let s2 = h0.s2();
    let (s, c) = dt.sin_cos();
    Covector::new(h0.h1 * c - s2 * h0.h3 * s, s2, h0.h3 * c + s2 * h0.h1 * s)
}

/// Time until `h1` returns to zero on a rotation arc, in `(0, π]`.
///
/// Returns `f64::INFINITY` at the stable equilibrium, which never switches.
pub fn rotation_switch_time(h0: &Covector) -> Result<f64> {
    require_rotation(h0)?;
    if branch_of(h0) == Branch::StableEquilibrium {
        return Ok(f64::INFINITY);
    }
    let s2 = h0.s2();
    if h0.h1.abs() <= ZERO_TOL {
        // Entered on the switching surface: the next zero is half a turn away.
        return Ok(PI);
    }
    // arg(-s2 h30 - i h10), which lies in (0, π) for h10 < 0.
    Ok((-h0.h1).atan2(-s2 * h0.h3))
}

/// Constants of one forward (`h1 > 0`) arc.
///
/// The phase `ξ(t) = xi0 + direction · (t - t_start) / k` drives
/// `h1 = sn(ξ, k)`, `h2 = -s cn(ξ, k)`, `h3 = h30 + (s3/k)(dn(ξ, k) - dn(ξ0, k))`.
/// For `E < 1` the modulus `k = 1/sqrt(E)` exceeds one; the Jacobi functions
/// are then evaluated through the reciprocal modulus `sqrt(E)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticArcParams {
    /// Casimir level.
    pub energy: f64,
    /// `E - 2`, the linear coefficient of the pendulum equation for `h2`.
    pub m: f64,
    /// `1/sqrt(E)`; equals 1 on the separatrix.
    pub k: f64,
    /// Sign in `h2 = -s cn(ξ)`.
    pub s: f64,
    /// Initial sign of `h3` (`s2` when `h3 = 0`).
    pub s3: f64,
    /// Initial sign of `h2`.
    pub s2: f64,
    /// `+1` when `ξ` increases with time, `-1` otherwise.
    pub direction: f64,
    /// Amplitude angle fixing the initial phase.
    pub alpha: f64,
    pub xi0: f64,
    /// Rotation of the canonical frame of the arc.
    pub beta0: f64,
    pub t_start: f64,
    /// Pose at the start of the arc.
    pub frame: Pose,
    /// Initial covector.
    pub h0: Covector,
    /// Distance in `ξ` between consecutive zeros of `sn`; infinite on the separatrix.
    pub half_period: f64,
    cn0: f64,
    dn0: f64,
    acos_dn0: f64,
    eps0: f64,
    log0: f64,
}

/// Build the constants of the forward arc starting at `h0`, time `t_start`,
/// pose `frame`, with the default separatrix tolerance.
pub fn elliptic_arc_params(h0: &Covector, t_start: f64, frame: Pose) -> Result<EllipticArcParams> {
    elliptic_arc_params_with(h0, t_start, frame, SEPARATRIX_TOL)
}

pub fn elliptic_arc_params_with(
    h0: &Covector,
    t_start: f64,
    frame: Pose,
    separatrix_tol: f64,
) -> Result<EllipticArcParams> {
    match branch_with_tolerance(h0, separatrix_tol) {
        Branch::Elliptic | Branch::Tractrix => {}
        other => {
            return Err(Error::Contract(format!(
                "covector {h0:?} is on the {other:?} branch, expected a forward arc"
            )))
        }
    }
    let h10 = h0.h1.clamp(0.0, 1.0);
    let h20 = h0.h2;
    let h30 = h0.h3;
    let s2 = h0.s2();
    let s3 = h0.s3();
    let energy = h10 * h10 + h30 * h30;

    let (k, s, direction, alpha, xi0, half_period);
    if (energy - 1.0).abs() < separatrix_tol {
        k = 1.0;
        s = -s2;
        direction = if s2 * s3 < 0.0 { 1.0 } else { -1.0 };
        alpha = if direction > 0.0 {
            wrap((-s3 * h10).atan2(-s3 * h20))
        } else {
            wrap(h10.atan2(h20) + 0.5 * (1.0 - s2) * PI)
        };
        xi0 = h10.atanh();
        half_period = f64::INFINITY;
    } else if energy > 1.0 {
        k = 1.0 / energy.sqrt();
        s = s3;
        direction = 1.0;
        // arg(-s3 (h20 + i h10))
        alpha = wrap((-s3 * h10).atan2(-s3 * h20));
        xi0 = -s3 * incomplete_f(alpha, k)?;
        half_period = 2.0 * complete_k(k)?;
    } else {
        k = 1.0 / energy.sqrt();
        s = -s2;
        direction = -s2 * s3;
        alpha = wrap(h10.atan2(h20) + 0.5 * (1.0 - s2) * PI);
        // F(α, k) with k > 1 equals F(β, 1/k) / k where sin β = k sin α.
        let modulus = energy.sqrt();
        let beta = h10.atan2(h30.abs());
        xi0 = incomplete_f(beta, modulus)? / k;
        half_period = 2.0 * complete_k(modulus)? / k;
    }

    let (sn0, cn0, dn0) = sn_cn_dn_any(xi0, k)?;
    let acos_dn0 = acos_dn(sn0, dn0, k);
    let eps0 = elliptic::epsilon_any(xi0, k)?;
    let log0 = (dn0 - k * cn0).abs().ln();
    Ok(EllipticArcParams {
        energy,
        m: energy - 2.0,
        k,
        s,
        s3,
        s2,
        direction,
        alpha,
        xi0,
        beta0: frame.theta + s3 * acos_dn0,
        t_start,
        frame,
        h0: *h0,
        half_period,
        cn0,
        dn0,
        acos_dn0,
        eps0,
        log0,
    })
}

/// `arccos(dn)` through `sin = k |sn|`, which stays accurate where `dn` is near 1.
fn acos_dn(sn: f64, dn: f64, k: f64) -> f64 {
    (k * sn).abs().atan2(dn)
}

impl EllipticArcParams {
    pub fn is_separatrix(&self) -> bool {
        self.k == 1.0
    }

    /// Phase `ξ` at absolute time `t`.
    pub fn phase(&self, t: f64) -> f64 {
        self.xi0 + self.direction * (t - self.t_start) / self.k
    }

    /// Covector at absolute time `t`.
    pub fn covector_at(&self, t: f64) -> Result<Covector> {
        let (sn, cn, dn) = sn_cn_dn_any(self.phase(t), self.k)?;
        Ok(Covector::new(
            sn,
            -self.s * cn,
            self.h0.h3 + self.s3 / self.k * (dn - self.dn0),
        ))
    }

    /// Pose at absolute time `t`.
    pub fn pose_at(&self, t: f64) -> Result<Pose> {
        let xi = self.phase(t);
        let (sn, cn, dn) = sn_cn_dn_any(xi, self.k)?;
        let eps = elliptic::epsilon_any(xi, self.k)?;
        let theta_c = -self.s3 * acos_dn(sn, dn, self.k);
        let x_c = -self.direction * self.k * (cn - self.cn0);
        let y_c = -self.s3 * self.direction * ((xi - self.xi0) - (eps - self.eps0));
        let (sb, cb) = self.beta0.sin_cos();
        Ok(Pose::new(
            self.frame.x + cb * x_c - sb * y_c,
            self.frame.y + sb * x_c + cb * y_c,
            theta_c + self.beta0,
        ))
    }

    /// Planar length travelled from `t_start` to `t`.
    pub fn arclength_at(&self, t: f64) -> Result<f64> {
        let (_, cn, dn) = sn_cn_dn_any(self.phase(t), self.k)?;
        Ok(self.direction * ((dn - self.k * cn).abs().ln() - self.log0))
    }

    /// Accumulated heading change `∫ h2 dt` from `t_start` to `t`.
    pub fn heading_change(&self, t: f64) -> Result<f64> {
        let (sn, _, dn) = sn_cn_dn_any(self.phase(t), self.k)?;
        Ok(-self.s3 * (acos_dn(sn, dn, self.k) - self.acos_dn0))
    }
}

/// Covector on a forward arc at absolute time `t`.
pub fn elliptic_vertical_flow(p: &EllipticArcParams, t: f64) -> Result<Covector> {
    p.covector_at(t)
}

/// Time from `t_start` until `h1` next vanishes; infinite for arcs that
/// approach the unstable equilibrium on the separatrix.
pub fn elliptic_switch_time(p: &EllipticArcParams) -> f64 {
    let dxi = if p.direction > 0.0 {
        p.half_period - p.xi0
    } else {
        p.xi0
    };
    if !dxi.is_finite() {
        return f64::INFINITY;
    }
    let mut dt = p.k * dxi;
    // One Newton step on h1(t) = sn(ξ(t)).
    if let Ok((sn, cn, dn)) = sn_cn_dn_any(p.phase(p.t_start + dt), p.k) {
        let rate = p.direction * cn * dn / p.k;
        if rate.abs() > 1e-8 {
            let step = sn / rate;
            if step.abs() < 1e-6 * (1.0 + dt) {
                dt -= step;
            }
        }
    }
    dt
}
