//! Certified connectivity verdicts for sublevel sets `{|u| < eta}`.
use inner_sublevel::inner::InnerSpec;
use inner_sublevel::sublevel::{is_connected, ladder_scan, RefinementPolicy};

fn main() -> inner_sublevel::Result<()> {
    let policy = RefinementPolicy::default();
    let sq = InnerSpec::compose(InnerSpec::s(), InnerSpec::monomial(2));
    for (name, u, eta) in [
        ("S", InnerSpec::s(), 0.5),
        ("S(z^2)", sq.clone(), (-2.0f64).exp()),
        ("S(z^2)", sq.clone(), 0.5),
    ] {
        let v = is_connected(&u, eta, &policy)?;
        println!(
            "{name} at {eta:.4}: {:?}, {} component(s), {} witness(es), {}",
            v.verdict,
            v.in_components,
            v.witnesses.len(),
            v.resolution()
        );
        for w in &v.witnesses {
            println!("    witness at {:+.4} {:+.4}i, log|u| = {:.3}", w.center[0], w.center[1], w.log_modulus);
        }
    }
    let ladder = ladder_scan(&sq, &[0.1, 0.3, 0.36, 0.38, 0.5, 0.8], &policy)?;
    println!("ladder {:?}", ladder.etas);
    println!("  verdicts {:?}", ladder.verdicts);
    println!("  monotone {}, nested {}", ladder.monotone, ladder.nested);
    Ok(())
}
