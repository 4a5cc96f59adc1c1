//! Minimal-time trajectory between two poses by multi-start shooting.
use halfdisk::planner::has_optimal_structure;
use halfdisk::{feasible_plan, optimal_trajectory, solve_bvp, Pose, ShootingConfig};

fn main() -> halfdisk::Result<()> {
    let cfg = ShootingConfig::default();
    let target = Pose::new(1.0, 1.0, 0.5);
    let solutions = solve_bvp(&target, &cfg)?;
    println!(
        "{} extremals reach {target:?}; the five fastest:",
        solutions.len()
    );
    for s in solutions.iter().take(5) {
        let tr = s
            .trajectory
            .as_ref()
            .expect("solutions carry their trajectory");
        println!(
            "  T = {:.9}  psi = {:+.6}  h3 = {:+.6}  residual {:.1e}  {:?}  optimal shape: {}",
            s.total_time,
            s.start.psi,
            s.start.h3,
            s.residual,
            tr.kinds(),
            has_optimal_structure(tr)
        );
    }

    let q0 = Pose::new(2.0, -1.0, 1.0);
    let q1 = Pose::new(2.5, 0.5, -0.5);
    let best = optimal_trajectory(&q0, &q1, &cfg)?;
    println!(
        "\n{q0:?} -> {q1:?}: T = {:.9} (feasible plan {:.6}), kinds {:?}",
        best.total_time,
        feasible_plan(&q0, &q1).total_time,
        best.kinds()
    );
    println!("end pose {:?}", best.end_pose);
    Ok(())
}
