//! Compare the closed forms with direct RK4 integration of the extremal system.
use halfdisk::oracle::{conservation_error, integrate_pmp, trajectory_distance};
use halfdisk::{exp_map, Covector, Pose};

fn main() -> halfdisk::Result<()> {
    let cases = [
        Covector::normal(0.5, 3f64.sqrt() / 2.0, 1.0)?,
        Covector::normal(0.5, 3f64.sqrt() / 2.0, 0.7)?,
        Covector::normal(-0.3, -1.0, 2.0)?,
    ];
    for h0 in cases {
        let horizon = 10.0;
        let states = integrate_pmp(&h0, horizon, 1e-4)?;
        let traj = exp_map(&h0, horizon)?;
        let a: Vec<(f64, Pose)> = states.iter().map(|s| (s.t, s.pose)).collect();
        let b = states
            .iter()
            .map(|s| Ok((s.t, traj.pose_at(s.t)?)))
            .collect::<halfdisk::Result<Vec<_>>>()?;
        let (dh, de) = conservation_error(&states);
        println!(
            "{h0:?}: max distance {:.2e}, oracle drift |H-1| {dh:.1e}, |E-E0| {de:.1e}",
            trajectory_distance(&a, &b)?
        );
    }
    Ok(())
}
