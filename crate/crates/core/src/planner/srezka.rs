//! Shortcut across an interior reversal point.
//!
//! When an extremal stops at a point `B`, turns in place by π and drives
//! on, two points `A` and `C` just before and after `B` can be joined by
//! "turn, drive straight, turn". Its duration `|θ0| + |AC| + |θ1|` beats
//! the original `t_C - t_A`, so such an extremal is never time-optimal.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::expmap::Trajectory;
use crate::pmp::Branch;
use crate::se2::wrap;

/// Result of the shortcut construction around one reversal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SrezkaCut {
    /// Start of the interior rotation.
    pub t_reversal: f64,
    pub t_a: f64,
    pub t_c: f64,
    /// Initial turn towards `C`.
    pub theta0: f64,
    /// Final turn onto the heading at `C`.
    pub theta1: f64,
    /// Straight distance `|AC|`.
    pub chord: f64,
    /// `t_C - t_A` along the original trajectory.
    pub original_time: f64,
    /// `|θ0| + |AC| + |θ1|`.
    pub improved_time: f64,
    /// Whether `|θ0| + |θ1| < π` held for the chosen points.
    pub turns_below_pi: bool,
}

impl SrezkaCut {
    pub fn improves(&self) -> bool {
        self.improved_time < self.original_time
    }
}

const REVERSAL_TOL: f64 = 1e-9;

/// Locate the first interior rotation of duration π between two forward
/// arcs and build the shortcut around it. `None` when no such reversal exists.
pub fn srezka_improve(traj: &Trajectory) -> Option<SrezkaCut> {
    let segs = &traj.segments;
    let idx = (1..segs.len().saturating_sub(1)).find(|&i| {
        segs[i].kind == Branch::Rotation
            && (segs[i].duration - PI).abs() < REVERSAL_TOL
            && segs[i - 1].kind.is_forward()
            && segs[i + 1].kind.is_forward()
    })?;
    let before = &segs[idx - 1];
    let after = &segs[idx + 1];
    let t_b = segs[idx].start_time;
    let t_b_end = segs[idx].end_time();

    let mut delta = before.duration.min(after.duration).min(0.25);
    let mut best: Option<SrezkaCut> = None;
    for _ in 0..12 {
        if let Some(cut) = cut_at(traj, t_b, t_b - delta, t_b_end + delta) {
            if cut.turns_below_pi && cut.improves() {
                return Some(cut);
            }
            let gain = |c: &SrezkaCut| c.original_time - c.improved_time;
            if best.as_ref().is_none_or(|b| gain(&cut) > gain(b)) {
                best = Some(cut);
            }
        }
        delta *= 0.5;
    }
    best
}

fn cut_at(traj: &Trajectory, t_b: f64, t_a: f64, t_c: f64) -> Option<SrezkaCut> {
    let a = traj.pose_at(t_a).ok()?;
    let c = traj.pose_at(t_c).ok()?;
    let (dx, dy) = (c.x - a.x, c.y - a.y);
    let chord = dx.hypot(dy);
    let heading = if chord > 0.0 { dy.atan2(dx) } else { a.theta };
    let theta0 = wrap(heading - a.theta);
    let theta1 = wrap(c.theta - heading);
    Some(SrezkaCut {
        t_reversal: t_b,
        t_a,
        t_c,
        theta0,
        theta1,
        chord,
        original_time: t_c - t_a,
        improved_time: theta0.abs() + chord + theta1.abs(),
        turns_below_pi: theta0.abs() + theta1.abs() < PI,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expmap::{exp_map, ExtremalSegment};
    use crate::pmp::Covector;
    use crate::se2::Pose;

    fn segment(
        kind: Branch,
        start_time: f64,
        start_pose: Pose,
        h: Covector,
        duration: f64,
    ) -> ExtremalSegment {
        ExtremalSegment {
            kind,
            start_time,
            start_pose,
            start_covector: h,
            duration,
            params: None,
        }
    }

    #[test]
    fn drive_turn_back_drive_is_shortened() {
        let line = Covector::new(1.0, 0.0, 0.0);
        let segments = vec![
            segment(Branch::Line, 0.0, Pose::identity(), line, 1.0),
            segment(
                Branch::Rotation,
                1.0,
                Pose::new(1.0, 0.0, 0.0),
                Covector::new(0.0, 1.0, 1.0),
                PI,
            ),
            segment(Branch::Line, 1.0 + PI, Pose::new(1.0, 0.0, PI), line, 1.0),
        ];
        let traj = Trajectory {
            start_pose: Pose::identity(),
            start_covector: line,
            segments,
            total_time: 2.0 + PI,
            end_pose: Pose::new(0.0, 0.0, PI),
            end_covector: line,
        };
        let cut = srezka_improve(&traj).unwrap();
        // A and C coincide: turning by π in place replaces the detour of length 2δ.
        let delta = 1.0 - cut.t_a;
        assert!(cut.chord < 1e-15);
        assert!((cut.original_time - (PI + 2.0 * delta)).abs() < 1e-12);
        assert!((cut.improved_time - PI).abs() < 1e-12);
        assert!(cut.improves());
    }

    #[test]
    fn no_interior_reversal() {
        let traj = exp_map(&Covector::new(0.6, 0.8, 0.2), 0.5).unwrap();
        assert!(srezka_improve(&traj).is_none());
        let traj = exp_map(&Covector::new(-0.5, 1.0, 0.3), 1.0).unwrap();
        assert!(srezka_improve(&traj).is_none());
    }
}
