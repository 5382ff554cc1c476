//! Pseudohyperbolic distances, horodisks and automorphisms.
use inner_sublevel::geometry::{
    horodisk, pseudo_disk_to_euclidean, pseudo_dist, rho_one_minus, Automorphism, DiskPoint,
};

fn main() -> inner_sublevel::Result<()> {
    let a = DiskPoint::real(0.5)?;
    let b = DiskPoint::real(-0.5)?;
    println!("rho(1/2, -1/2) = {}", pseudo_dist(a, b));

    // distance between 1 - 2^-10 and 1 - 2^-11 from the gaps alone
    let rho = rho_one_minus(2f64.powi(-10), 2f64.powi(-11))?;
    println!("rho(1 - 2^-10, 1 - 2^-11) = {rho:.12} (1/(3 - 2^-10) = {:.12})", 1.0 / (3.0 - 2f64.powi(-10)));

    for eta in [(-1.0f64).exp(), 0.5, (-3.0f64).exp()] {
        let d = horodisk(eta)?;
        println!("horodisk({eta:.4}): center {:.6}, radius {:.6}", d.center.re, d.radius);
    }

    let d = pseudo_disk_to_euclidean(DiskPoint::real(0.9)?, 0.25)?;
    println!("pseudodisk(0.9, 1/4): center {:.6}, radius {:.6}", d.center.re, d.radius);

    let phi = Automorphism::new(a, 0.0);
    let w = phi.apply(DiskPoint::new(0.1, 0.3)?);
    println!("phi_(1/2)(0.1 + 0.3i) = {:.6} + {:.6}i, involution: {:?}", w.re, w.im, phi.apply(w));
    Ok(())
}
