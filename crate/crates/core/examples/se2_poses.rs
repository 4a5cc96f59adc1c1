//! Group operations on SE(2) poses.
use std::f64::consts::FRAC_PI_2;

use halfdisk::se2::{normalize_angle, relative_target};
use halfdisk::Pose;

fn main() -> halfdisk::Result<()> {
    let a = Pose::new(1.0, 0.0, FRAC_PI_2);
    let b = Pose::new(1.0, 0.0, 0.0);
    println!("a = {a:?}");
    println!("b = {b:?}");
    println!("a · b      = {:?}", a.compose(&b));
    println!("a⁻¹        = {:?}", a.inverse());
    println!("a⁻¹ · b    = {:?}", relative_target(&a, &b));
    println!(
        "wrap(7π/2) = {}",
        normalize_angle(3.5 * std::f64::consts::PI)?
    );
    Ok(())
}
