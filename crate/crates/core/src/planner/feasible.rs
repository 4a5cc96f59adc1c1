use serde::{Deserialize, Serialize};

use crate::pmp::Control;
use crate::se2::{relative_target, wrap, Pose};

/// Turn in place by `alpha`, drive straight for `l`, turn in place by `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasiblePlan {
    pub alpha: f64,
    pub l: f64,
    pub beta: f64,
    #[serde(rename = "T")]
    pub total_time: f64,
}

/// Three-phase admissible plan from `q0` to `q1`. Its duration
/// `|alpha| + l + |beta|` bounds the optimal time from above.
pub fn feasible_plan(q0: &Pose, q1: &Pose) -> FeasiblePlan {
    let target = relative_target(q0, q1);
    let l = target.planar_norm();
    // Any heading works when the target sits on the start point; 0 keeps the plan shortest.
    let alpha = if l == 0.0 {
        0.0
    } else {
        wrap(target.y.atan2(target.x))
    };
    let beta = wrap(target.theta - alpha);
    FeasiblePlan {
        alpha,
        l,
        beta,
        total_time: alpha.abs() + l + beta.abs(),
    }
}

impl FeasiblePlan {
    fn switch_times(&self) -> (f64, f64) {
        let t1 = self.alpha.abs();
        (t1, t1 + self.l)
    }

    /// Control applied at time `t`.
    pub fn control_at(&self, t: f64) -> Control {
        let (t1, t2) = self.switch_times();
        if t < t1 {
            Control {
                u1: 0.0,
                u2: self.alpha.signum(),
            }
        } else if t < t2 {
            Control { u1: 1.0, u2: 0.0 }
        } else if self.beta == 0.0 {
            Control { u1: 0.0, u2: 0.0 }
        } else {
            Control {
                u1: 0.0,
                u2: self.beta.signum(),
            }
        }
    }

    /// Pose at time `t` of the plan started at the identity, in closed form.
    pub fn pose_at(&self, t: f64) -> Pose {
        let (t1, t2) = self.switch_times();
        let t = t.clamp(0.0, self.total_time);
        if t < t1 {
            Pose::new(0.0, 0.0, self.alpha.signum() * t)
        } else if t < t2 {
            let (s, c) = self.alpha.sin_cos();
            Pose::new((t - t1) * c, (t - t1) * s, self.alpha)
        } else {
            let (s, c) = self.alpha.sin_cos();
            Pose::new(
                self.l * c,
                self.l * s,
                self.alpha + self.beta.signum() * (t - t2),
            )
        }
    }

    /// Integrate the plan's controls from `q0` with explicit phase-exact steps
    /// of at most `dt`; returns the final pose.
    pub fn simulate(&self, q0: &Pose, dt: f64) -> Pose {
        let (t1, t2) = self.switch_times();
        let mut x = q0.x;
        let mut y = q0.y;
        let mut theta = q0.theta;
        for (start, end) in [(0.0, t1), (t1, t2), (t2, self.total_time)] {
            let mut t = start;
            while t < end {
                let h = dt.min(end - t);
                let u = self.control_at(t + 0.5 * h);
                // Within a phase the control is constant, so the update is exact.
                if u.u1 > 0.0 {
                    x += u.u1 * h * theta.cos();
                    y += u.u1 * h * theta.sin();
                }
                theta += u.u2 * h;
                t += h;
            }
        }
        Pose::new(x, y, theta)
    }
}
