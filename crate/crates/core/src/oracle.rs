//! Reference integrator for the full six-dimensional extremal system
//!
//! ```text
//! ẋ = u1 cos θ,  ẏ = u1 sin θ,  θ̇ = u2,
//! ḣ1 = -u2 h3,   ḣ2 = u1 h3,    ḣ3 = u2 h1,
//! ```
//!
//! with the control re-evaluated from the covector at every RK4 stage. It
//! shares no code with the closed forms beyond the control law and is used to
//! validate them. Sign changes of `h1` are located by bisection so that no
//! step straddles a switch.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pmp::{self, branch_of, casimir, hamiltonian, Branch, Covector};
use crate::se2::{wrap, Pose};

/// Largest admissible step.
pub const MAX_STEP: f64 = 1e-3;
/// Width of the time bracket at which event bisection stops.
pub const EVENT_TOL: f64 = 1e-12;
/// Drift of `H` that aborts the integration.
pub const DRIFT_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleState {
    pub pose: Pose,
    pub covector: Covector,
    pub t: f64,
}

type State = [f64; 6];

fn rhs(y: &State) -> State {
    let u = pmp::control_law(&Covector::new(y[3], y[4], y[5]));
    let (s, c) = y[2].sin_cos();
    [
        u.u1 * c,
        u.u1 * s,
        u.u2,
        -u.u2 * y[5],
        u.u1 * y[5],
        u.u2 * y[3],
    ]
}

fn rk4(y: &State, dt: f64) -> State {
    let add = |a: &State, b: &State, f: f64| -> State { std::array::from_fn(|i| a[i] + f * b[i]) };
    let k1 = rhs(y);
    let k2 = rhs(&add(y, &k1, 0.5 * dt));
    let k3 = rhs(&add(y, &k2, 0.5 * dt));
    let k4 = rhs(&add(y, &k3, dt));
    std::array::from_fn(|i| y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Side of the switching surface on which the current arc lives.
fn regime(y: &State) -> f64 {
    match branch_of(&Covector::new(y[3], y[4], y[5])) {
        Branch::Rotation => -1.0,
        Branch::StableEquilibrium => 0.0,
        _ => 1.0,
    }
}

fn left_regime(side: f64, h1: f64) -> bool {
    (side > 0.0 && h1 <= 0.0) || (side < 0.0 && h1 >= 0.0)
}

fn to_state(t: f64, y: &State) -> OracleState {
    OracleState {
        pose: Pose::new(y[0], y[1], y[2]),
        covector: Covector::new(y[3], y[4], y[5]),
        t,
    }
}

/// Integrate from the identity with classical RK4 and step `dt`.
///
/// Returns the state at every grid time `i·dt` (the last one clipped to `T`)
/// plus one state at every located switch.
pub fn integrate_pmp(h0: &Covector, total_time: f64, dt: f64) -> Result<Vec<OracleState>> {
    h0.check_level()?;
    if !(dt > 0.0 && dt <= MAX_STEP) {
        return Err(Error::Domain(format!(
            "step {dt} must lie in (0, {MAX_STEP}]"
        )));
    }
    if !(total_time >= 0.0 && total_time.is_finite()) {
        return Err(Error::Domain(format!(
            "horizon {total_time} must be finite and >= 0"
        )));
    }
    let mut y: State = [0.0, 0.0, 0.0, h0.h1, h0.h2, h0.h3];
    let mut t = 0.0;
    let mut out = vec![to_state(t, &y)];
    let mut grid = 1usize;

    while t < total_time {
        let t_next = (grid as f64 * dt).min(total_time);
        let step = t_next - t;
        let side = regime(&y);
        let trial = rk4(&y, step);
        if side != 0.0 && left_regime(side, trial[3]) {
            // Bracket the sign change of h1 and stop exactly on it.
            let (mut lo, mut hi) = (0.0, step);
            while hi - lo > EVENT_TOL {
                let mid = 0.5 * (lo + hi);
                if left_regime(side, rk4(&y, mid)[3]) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let mut ev = rk4(&y, hi);
            ev[3] = 0.0;
            ev[4] = if ev[4] < 0.0 { -1.0 } else { 1.0 };
            t += hi;
            y = ev;
            check_drift(t, &y)?;
            out.push(to_state(t, &y));
            if t_next - t <= EVENT_TOL {
                t = t_next;
                grid += 1;
            }
            continue;
        }
        y = trial;
        t = t_next;
        grid += 1;
        check_drift(t, &y)?;
        out.push(to_state(t, &y));
    }
    Ok(out)
}

fn check_drift(t: f64, y: &State) -> Result<()> {
    let drift = (hamiltonian(&Covector::new(y[3], y[4], y[5])) - 1.0).abs();
    if drift > DRIFT_LIMIT || !drift.is_finite() {
        return Err(Error::IntegrationFailure { t, drift });
    }
    Ok(())
}

/// Drift of the first integrals along an oracle run: `(max |H - 1|, max |E - E0|)`.
pub fn conservation_error(states: &[OracleState]) -> (f64, f64) {
    let e0 = states.first().map(|s| casimir(&s.covector)).unwrap_or(0.0);
    states.iter().fold((0.0f64, 0.0f64), |(dh, de), s| {
        (
            dh.max((hamiltonian(&s.covector) - 1.0).abs()),
            de.max((casimir(&s.covector) - e0).abs()),
        )
    })
}

/// `max_i |Δ(x, y)| + |Δθ|` between two pose sequences on the same time grid.
pub fn trajectory_distance(a: &[(f64, Pose)], b: &[(f64, Pose)]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Domain(format!(
            "sample grids differ in length: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let mut worst = 0.0f64;
    for ((ta, pa), (tb, pb)) in a.iter().zip(b) {
        if (ta - tb).abs() > 1e-9 {
            return Err(Error::Domain(format!("sample times differ: {ta} vs {tb}")));
        }
        let d = (pa.x - pb.x).hypot(pa.y - pb.y) + wrap(pa.theta - pb.theta).abs();
        worst = worst.max(d);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilibrium_and_line() {
        let run = integrate_pmp(&Covector::new(0.0, 1.0, 0.0), 1.0, 1e-3).unwrap();
        let end = run.last().unwrap();
        assert!((end.t - 1.0).abs() < 1e-15);
        assert!(end.pose.distance(&Pose::new(0.0, 0.0, 1.0)) < 1e-9);
        let run = integrate_pmp(&Covector::new(1.0, 0.0, 0.0), 1.0, 1e-3).unwrap();
        assert!(run.last().unwrap().pose.distance(&Pose::new(1.0, 0.0, 0.0)) < 1e-9);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(integrate_pmp(&Covector::new(0.0, 1.0, 0.0), 1.0, 1e-2).is_err());
        assert!(integrate_pmp(&Covector::new(0.5, 0.5, 0.0), 1.0, 1e-3).is_err());
    }

    #[test]
    fn distance_examples() {
        let a: Vec<(f64, Pose)> = (0..5)
            .map(|i| (i as f64, Pose::new(i as f64, 0.5, 0.1)))
            .collect();
        assert_eq!(trajectory_distance(&a, &a).unwrap(), 0.0);
        let b: Vec<(f64, Pose)> = a
            .iter()
            .map(|(t, p)| (*t, Pose::new(p.x + 1e-3, p.y, p.theta)))
            .collect();
        assert!((trajectory_distance(&a, &b).unwrap() - 1e-3).abs() < 1e-12);
        assert!(trajectory_distance(&a, &b[1..]).is_err());
        let c: Vec<(f64, Pose)> = a.iter().map(|(t, p)| (t + 0.5, *p)).collect();
        assert!(trajectory_distance(&a, &c).is_err());
    }

    #[test]
    fn richardson_fourth_order() {
        // Fast forward arc without switches, so truncation dominates roundoff:
        // halving dt cuts the error ~16x.
        let h0 = Covector::new(1.0, 0.0, 30.0);
        let horizon = 0.04;
        let reference = integrate_pmp(&h0, horizon, 1e-4)
            .unwrap()
            .last()
            .unwrap()
            .pose;
        let coarse = integrate_pmp(&h0, horizon, 1e-3)
            .unwrap()
            .last()
            .unwrap()
            .pose;
        let fine = integrate_pmp(&h0, horizon, 5e-4)
            .unwrap()
            .last()
            .unwrap()
            .pose;
        let e1 = coarse.distance(&reference);
        let e2 = fine.distance(&reference);
        let ratio = e1 / e2;
        assert!(ratio > 12.0 && ratio < 20.0, "ratio {ratio}");
    }
}
