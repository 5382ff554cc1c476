//! Zero-sequence generators and their classifying constants.
use inner_sublevel::geometry::BoundaryPoint;
use inner_sublevel::sequence::{
    blaschke_sum, consecutive_rho, eta_star, frostman_sum, hoffman_constants,
    interpolation_constant, separation_constant, vhn_ratio, ZeroSequence,
    DEFAULT_FROSTMAN_CEILING,
};

fn main() -> inner_sublevel::Result<()> {
    let seqs = [
        ("geometric", ZeroSequence::geometric()),
        ("hyperbolic orbit", ZeroSequence::hyperbolic_orbit()),
        ("parabolic orbit", ZeroSequence::parabolic_orbit()),
        ("interleaved", ZeroSequence::interleaved_thin()),
        ("thin", ZeroSequence::thin()),
        ("1 - n^-2", ZeroSequence::power(2.0)?),
    ];
    for (name, seq) in &seqs {
        let n = 40;
        println!("{name}");
        println!("  rho(z_1, z_2) = {:.10}", consecutive_rho(seq, 1)?);
        println!("  rho(z_{}, z_{}) = {:.10}", n - 1, n, consecutive_rho(seq, n - 1)?);
        println!("  separation(N = {n}) = {:.6}", separation_constant(seq, n)?);
        println!("  eta*(N = {n}) = {:.6}", eta_star(seq, n)?);
        println!("  inf delta_n (N = {n}) = {:.6}", interpolation_constant(seq, n)?);
        let b = blaschke_sum(seq, n)?;
        println!("  sum (1 - |z|^2) = {:.6}, tail bound {:.1e}", b.sum_sq, b.tail_bound);
        match vhn_ratio(seq, n) {
            Ok(v) => println!("  VHN sup = {:.6}", v.sup),
            Err(e) => println!("  VHN: {e}"),
        }
        let f = frostman_sum(seq, BoundaryPoint::ONE, n, DEFAULT_FROSTMAN_CEILING)?;
        println!("  Frostman at 1: {:.4} (diverging: {})", f.partial, f.diverging);
    }
    let h = hoffman_constants(0.9, Some(0.5))?;
    println!("Hoffman constants for delta = 0.9, eta = 0.5: epsilon = {:.6}", h.epsilon);
    Ok(())
}
