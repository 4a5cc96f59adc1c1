//! The turn / drive / turn plan that shows every pose is reachable.
use halfdisk::{feasible_plan, Pose};

fn main() {
    let q0 = Pose::new(0.0, 0.0, 0.0);
    for q1 in [
        Pose::new(1.0, 0.0, 0.0),
        Pose::new(0.0, 1.0, 0.0),
        Pose::new(-2.0, 1.0, 2.5),
    ] {
        let plan = feasible_plan(&q0, &q1);
        println!(
            "to {q1:?}: turn {:+.6}, drive {:.6}, turn {:+.6}, T = {:.6}",
            plan.alpha, plan.l, plan.beta, plan.total_time
        );
        println!("  simulated end {:?}", plan.simulate(&q0, 1e-3));
    }
}
