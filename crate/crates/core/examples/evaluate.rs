//! Evaluation of inner functions with certified truncation bounds.
use inner_sublevel::geometry::{BoundaryPoint, DiskPoint};
use inner_sublevel::inner::{
    boundary_derivatives, certified_radius, eval, eval_log_modulus_bounded, zeros_within, InnerSpec,
};
use inner_sublevel::sequence::ZeroSequence;

fn main() -> inner_sublevel::Result<()> {
    let s = InnerSpec::s();
    let z = DiskPoint::real(0.9)?;
    let v = eval(&s, z, 1e-12)?;
    println!("S(0.9) = {:.6e} (closed form {:.6e})", v.value.re, (-19.0f64).exp());

    let geo = InnerSpec::infinite(ZeroSequence::geometric());
    for r in [0.5, 0.99, 0.999] {
        let l = eval_log_modulus_bounded(&geo, DiskPoint::new(0.0, r)?, 1e-9)?;
        println!("log|B(i {r})| = {:.9} +/- {:.1e}", l.value, l.bound);
    }
    println!("certified radius at tol 1e-6: {:.6}", certified_radius(&geo, 1e-6));

    let sq = InnerSpec::compose(InnerSpec::s(), InnerSpec::monomial(2));
    let jet = boundary_derivatives(&sq, BoundaryPoint::from_angle(1.0))?;
    println!("S(z^2) at e^i: u' = {:.6}, u'' = {:.6}", jet.d1, jet.d2);

    let f = InnerSpec::s().frostman_shift(DiskPoint::real(0.5)?);
    let zeros = zeros_within(&f, 0.9)?;
    println!("zeros of the Frostman shift inside |z| < 0.9: {zeros:?}");
    Ok(())
}
