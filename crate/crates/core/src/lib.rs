//! Time-optimal trajectories of a planar car that moves forward and turns in
//! place, i.e. the control system on SE(2)
//!
//! ```text
//! ẋ = u1 cos θ,  ẏ = u1 sin θ,  θ̇ = u2,   u1 >= 0,  u1² + u2² <= 1.
//! ```
//!
//! The crate provides the group layer ([`se2`]), elliptic functions
//! ([`elliptic`]), the closed-form extremals of the maximum principle
//! ([`pmp`], [`expmap`]), an independent RK4 integrator used as a reference
//! ([`oracle`]), boundary-value solving ([`planner`]) and the command-line
//! front end ([`cli`]).

pub mod cli;
pub mod elliptic;
pub mod error;
pub mod expmap;
pub mod oracle;
pub mod planner;
pub mod pmp;
pub mod se2;

pub use error::{Error, Result};
pub use expmap::{exp_map, ExtremalSegment, Sample, Trajectory};
pub use planner::{
    feasible_plan, optimal_trajectory, solve_bvp, FeasiblePlan, ShootingConfig, ShootingSolution,
};
pub use pmp::{Branch, Control, Covector};
pub use se2::Pose;
