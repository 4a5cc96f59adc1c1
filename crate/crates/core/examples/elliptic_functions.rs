//! Elliptic integrals and Jacobi functions.
use halfdisk::elliptic::{
    complete_e, complete_k, incomplete_e, incomplete_f, jacobi, jacobi_epsilon,
};

fn main() -> halfdisk::Result<()> {
    for k in [0.0, 0.5, 0.9, 0.999] {
        println!(
            "k = {k:<6} K = {:.15}  E = {:.15}",
            complete_k(k)?,
            complete_e(k)?
        );
    }
    let (phi, k) = (1.2, 0.8);
    let u = incomplete_f(phi, k)?;
    let j = jacobi(u, k)?;
    println!(
        "F({phi}, {k}) = {u:.15}, E({phi}, {k}) = {:.15}",
        incomplete_e(phi, k)?
    );
    println!(
        "am(F) = {:.15}  sn = {:.15}  cn = {:.15}  dn = {:.15}",
        j.am, j.sn, j.cn, j.dn
    );
    println!("ε(u, k) = ∫ dn² = {:.15}", jacobi_epsilon(u, k)?);
    let j1 = jacobi(0.7, 1.0)?;
    println!(
        "k = 1: sn = tanh = {:.15}, cn = dn = sech = {:.15}",
        j1.sn, j1.cn
    );
    Ok(())
}
