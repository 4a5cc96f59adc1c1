//! Shortcut across an interior reversal, showing such extremals are not optimal.
use halfdisk::planner::srezka_improve;
use halfdisk::{exp_map, Covector};

fn main() -> halfdisk::Result<()> {
    let h0 = Covector::normal(0.5, 3f64.sqrt() / 2.0, 1.0)?;
    let traj = exp_map(&h0, 6.0)?;
    println!("kinds {:?}", traj.kinds());
    match srezka_improve(&traj) {
        Some(cut) => {
            println!("reversal at t = {:.6}", cut.t_reversal);
            println!("A at t = {:.6}, C at t = {:.6}", cut.t_a, cut.t_c);
            println!(
                "turn {:+.6}, drive {:.6}, turn {:+.6}",
                cut.theta0, cut.chord, cut.theta1
            );
            println!(
                "original {:.6} vs shortcut {:.6}",
                cut.original_time, cut.improved_time
            );
        }
        None => println!("no interior reversal"),
    }
    Ok(())
}
