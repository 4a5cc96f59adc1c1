//! Exponential map: whole extremal trajectories assembled from arcs.
//!
//! Starting from a covector on `H = 1`, the trajectory alternates between
//! rotations in place (`h1 < 0`) and forward arcs (`h1 > 0`). Each arc ends
//! at the first zero of `h1`; the covector reached there (snapped back onto
//! `h1 = 0, |h2| = 1`) seeds the next arc.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pmp::{
    self, branch_with_tolerance, elliptic_arc_params_with, elliptic_switch_time, extremal_control,
    Branch, Control, Covector, EllipticArcParams, SEPARATRIX_TOL,
};
use crate::se2::Pose;

/// Two switching instants closer than this are treated as one.
const SWITCH_EPS: f64 = 1e-12;

/// One arc of an extremal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalSegment {
    pub kind: Branch,
    pub start_time: f64,
    pub start_pose: Pose,
    pub start_covector: Covector,
    pub duration: f64,
    /// Arc constants, present for forward arcs other than [`Branch::Line`].
    pub params: Option<EllipticArcParams>,
}

impl ExtremalSegment {
    pub fn end_time(&self) -> f64 {
        self.start_time + self.duration
    }

    /// State after `dt` time units on this arc (no snapping at the end).
    pub fn state_after(&self, dt: f64) -> Result<(Pose, Covector)> {
        let p0 = self.start_pose;
        let h0 = self.start_covector;
        match self.kind {
            Branch::Rotation | Branch::StableEquilibrium => {
                let s2 = if h0.h2 < 0.0 { -1.0 } else { 1.0 };
                let h = if self.kind == Branch::StableEquilibrium {
                    Covector::new(0.0, s2, 0.0)
                } else {
                    pmp::rotation_flow_unchecked(&h0, dt)
                };
                Ok((Pose::new(p0.x, p0.y, p0.theta + s2 * dt), h))
            }
            Branch::Line => {
                let (s, c) = p0.theta.sin_cos();
                Ok((Pose::new(p0.x + dt * c, p0.y + dt * s, p0.theta), h0))
            }
            Branch::Elliptic | Branch::Tractrix => {
                let p = self.params.as_ref().ok_or_else(|| {
                    Error::Contract("forward arc without elliptic parameters".into())
                })?;
                let t = self.start_time + dt;
                Ok((p.pose_at(t)?, p.covector_at(t)?))
            }
        }
    }

    /// Planar length covered after `dt` on this arc.
    pub fn arclength_after(&self, dt: f64) -> Result<f64> {
        match self.kind {
            Branch::Rotation | Branch::StableEquilibrium => Ok(0.0),
            Branch::Line => Ok(dt),
            Branch::Elliptic | Branch::Tractrix => {
                let p = self.params.as_ref().ok_or_else(|| {
                    Error::Contract("forward arc without elliptic parameters".into())
                })?;
                p.arclength_at(self.start_time + dt)
            }
        }
    }
}

/// Extremal trajectory on `[0, total_time]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub start_pose: Pose,
    pub start_covector: Covector,
    pub segments: Vec<ExtremalSegment>,
    pub total_time: f64,
    pub end_pose: Pose,
    /// Covector at `total_time`, snapped onto the switching surface when the
    /// trajectory ends exactly at a switch.
    pub end_covector: Covector,
}

/// One row of a sampled trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub pose: Pose,
    pub covector: Covector,
    pub control: Control,
}

impl Trajectory {
    /// Pose and covector at time `t ∈ [0, total_time]`. At a switching
    /// instant the post-switch covector is returned.
    pub fn state_at(&self, t: f64) -> Result<(Pose, Covector)> {
        if !(0.0..=self.total_time).contains(&t) {
            return Err(Error::Domain(format!(
                "time {t} outside [0, {}]",
                self.total_time
            )));
        }
        if t >= self.total_time {
            return Ok((self.end_pose, self.end_covector));
        }
        let seg = self.segment_at(t).expect("non-empty trajectory");
        seg.state_after(t - seg.start_time)
    }

    pub fn pose_at(&self, t: f64) -> Result<Pose> {
        Ok(self.state_at(t)?.0)
    }

    /// Segment active at `t` (the later one at a switching instant).
    pub fn segment_at(&self, t: f64) -> Option<&ExtremalSegment> {
        let idx = self.segments.partition_point(|s| s.start_time <= t);
        idx.checked_sub(1).map(|i| &self.segments[i])
    }

    /// Same trajectory with every pose left-translated by `g`.
    pub fn left_translated(&self, g: &Pose) -> Result<Trajectory> {
        exp_map_with(
            &self.start_covector,
            self.total_time,
            g.compose(&self.start_pose),
            SEPARATRIX_TOL,
        )
    }

    /// Kinds of the segments, in order.
    pub fn kinds(&self) -> Vec<Branch> {
        self.segments.iter().map(|s| s.kind).collect()
    }
}

/// Exponential map from the identity.
pub fn exp_map(h0: &Covector, total_time: f64) -> Result<Trajectory> {
    exp_map_with(h0, total_time, Pose::identity(), SEPARATRIX_TOL)
}

/// Exponential map from `q0`.
pub fn exp_map_from(h0: &Covector, total_time: f64, q0: Pose) -> Result<Trajectory> {
    exp_map_with(h0, total_time, q0, SEPARATRIX_TOL)
}

/// Upper bound on segment count for horizon `total_time`. Every
/// forward/rotation pair after the first lasts more than π.
pub fn segment_guard(total_time: f64) -> usize {
    10 + 2 * (total_time / std::f64::consts::PI).ceil() as usize
}

pub fn exp_map_with(
    h0: &Covector,
    total_time: f64,
    q0: Pose,
    separatrix_tol: f64,
) -> Result<Trajectory> {
    h0.check_level()?;
    if !(total_time >= 0.0 && total_time.is_finite()) {
        return Err(Error::Domain(format!(
            "horizon {total_time} must be finite and >= 0"
        )));
    }
    let guard = segment_guard(total_time);
    let mut segments = Vec::new();
    let mut t = 0.0;
    let mut pose = q0;
    let mut h = *h0;

    while t < total_time {
        if segments.len() >= guard {
            return Err(Error::SegmentGuard(guard));
        }
        let kind = branch_with_tolerance(&h, separatrix_tol);
        let (switch, params) = match kind {
            Branch::Rotation => (pmp::rotation_switch_time(&h)?, None),
            Branch::StableEquilibrium | Branch::Line => (f64::INFINITY, None),
            Branch::Elliptic | Branch::Tractrix => {
                let p = elliptic_arc_params_with(&h, t, pose, separatrix_tol)?;
                (elliptic_switch_time(&p), Some(p))
            }
        };
        let remaining = total_time - t;
        let reaches_switch = switch <= remaining + SWITCH_EPS;
        let duration = if reaches_switch {
            switch.min(remaining)
        } else {
            remaining
        };
        let seg = ExtremalSegment {
            kind,
            start_time: t,
            start_pose: pose,
            start_covector: h,
            duration,
            params,
        };
        let (end_pose, end_h) = seg.state_after(duration)?;
        segments.push(seg);
        pose = end_pose;
        h = if reaches_switch {
            snap_to_switch(&end_h)
        } else {
            end_h
        };
        if !reaches_switch || remaining - duration <= SWITCH_EPS {
            break;
        }
        t += duration;
    }

    Ok(Trajectory {
        start_pose: q0,
        start_covector: *h0,
        segments,
        total_time,
        end_pose: pose,
        end_covector: h,
    })
}

/// Project a covector reached at a switch onto `h1 = 0, |h2| = 1`.
fn snap_to_switch(h: &Covector) -> Covector {
    Covector::new(0.0, if h.h2 < 0.0 { -1.0 } else { 1.0 }, h.h3)
}

/// `n >= 2` samples at uniform times over `[0, total_time]`.
pub fn sample_trajectory(traj: &Trajectory, n: usize) -> Result<Vec<Sample>> {
    if n < 2 {
        return Err(Error::Domain(format!("sample count {n} must be >= 2")));
    }
    (0..n)
        .map(|i| {
            let t = if i + 1 == n {
                traj.total_time
            } else {
                traj.total_time * i as f64 / (n - 1) as f64
            };
            let (pose, covector) = traj.state_at(t)?;
            Ok(Sample {
                t,
                pose,
                covector,
                control: extremal_control(&covector)?,
            })
        })
        .collect()
}

/// Planar length of the trajectory's projection on `[0, t]`.
pub fn arclength(traj: &Trajectory, t: f64) -> Result<f64> {
    if !(0.0..=traj.total_time).contains(&t) {
        return Err(Error::Domain(format!(
            "time {t} outside [0, {}]",
            traj.total_time
        )));
    }
    let mut total = 0.0;
    for seg in &traj.segments {
        if seg.start_time >= t {
            break;
        }
        let dt = (t - seg.start_time).min(seg.duration);
        total += seg.arclength_after(dt)?;
    }
    Ok(total)
}
