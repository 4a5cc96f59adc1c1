//! Boundary-value solving: an admissible three-phase plan, the shooting
//! inverse of the exponential map, and the shortcut test for interior
//! reversals.

mod feasible;
mod shooting;
mod srezka;

pub use feasible::{feasible_plan, FeasiblePlan};
pub use shooting::{
    has_optimal_structure, optimal_trajectory, shooting_residual, solve_bvp, structure_summary,
    CylinderPoint, ShootingConfig, ShootingSolution,
};
pub use srezka::{srezka_improve, SrezkaCut};
