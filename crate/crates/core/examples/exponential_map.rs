//! Extremal trajectories from the closed-form exponential map.
use halfdisk::expmap::{arclength, sample_trajectory};
use halfdisk::{exp_map, Covector};

fn main() -> halfdisk::Result<()> {
    for h3 in [1.0, 0.7] {
        let h0 = Covector::normal(0.5, 3f64.sqrt() / 2.0, h3)?;
        let traj = exp_map(&h0, 20.0)?;
        println!("h0 = {h0:?}, T = 20");
        for seg in &traj.segments {
            println!(
                "  {:<10} t = {:>8.4} .. {:>8.4}  start {:?}",
                format!("{:?}", seg.kind),
                seg.start_time,
                seg.end_time(),
                seg.start_pose
            );
        }
        println!("  end pose {:?}", traj.end_pose);
        println!("  path length {:.6}", arclength(&traj, traj.total_time)?);
        let samples = sample_trajectory(&traj, 5)?;
        for s in samples {
            println!(
                "  t = {:>5.1}  u = ({:.3}, {:+.3})",
                s.t, s.control.u1, s.control.u2
            );
        }
    }
    Ok(())
}
