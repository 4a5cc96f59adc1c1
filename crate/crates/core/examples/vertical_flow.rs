//! Branch classification, switching times and the covector flow on one arc.
use halfdisk::pmp::{
    branch_of, casimir, elliptic_arc_params, elliptic_switch_time, elliptic_vertical_flow,
    hamiltonian, rotation_switch_time, rotation_vertical_flow,
};
use halfdisk::{Covector, Pose};

fn main() -> halfdisk::Result<()> {
    let samples = [
        Covector::new(0.0, 1.0, 0.0),
        Covector::new(1.0, 0.0, 0.0),
        Covector::new(-0.6, 1.0, 0.8),
        Covector::new(0.0, 1.0, -1.0),
        Covector::new(0.5, 3f64.sqrt() / 2.0, 1.0),
        Covector::new(0.5, 3f64.sqrt() / 2.0, 0.7),
    ];
    for h in &samples {
        println!("{h:?}: {:?}, E = {:.4}", branch_of(h), casimir(h));
    }

    let rot = Covector::new(-0.6, 1.0, 0.8);
    let t = rotation_switch_time(&rot)?;
    println!(
        "\nrotation from {rot:?} ends after {t:.12}: {:?}",
        rotation_vertical_flow(&rot, t)?
    );

    let fwd = Covector::new(0.5, 3f64.sqrt() / 2.0, 1.0);
    let p = elliptic_arc_params(&fwd, 0.0, Pose::identity())?;
    let t = elliptic_switch_time(&p);
    println!("forward arc: k = {:.6}, switch after {t:.12}", p.k);
    for i in 0..=4 {
        let s = t * i as f64 / 4.0;
        let h = elliptic_vertical_flow(&p, s)?;
        println!(
            "  t = {s:.4}  h = ({:+.6}, {:+.6}, {:+.6})  H = {:.15}",
            h.h1,
            h.h2,
            h.h3,
            hamiltonian(&h)
        );
    }
    Ok(())
}
