//! Bisection for the level where a sublevel set becomes connected.
use inner_sublevel::geometry::DiskPoint;
use inner_sublevel::inner::InnerSpec;
use inner_sublevel::sublevel::{threshold_search, RefinementPolicy};

fn main() -> inner_sublevel::Result<()> {
    let policy = RefinementPolicy::default();
    let pair = InnerSpec::blaschke(vec![DiskPoint::real(0.5)?, DiskPoint::real(-0.5)?]);
    let sq = InnerSpec::compose(InnerSpec::s(), InnerSpec::monomial(2));
    for (name, u) in [("B(+-1/2)", pair), ("S(z^2)", sq), ("S", InnerSpec::s())] {
        let t = threshold_search(&u, 0.05, 0.95, 0.005, &policy)?;
        println!("{name}: {:?} in [{:.4}, {:.4}] after {} probes", t.outcome, t.lo, t.hi, t.probes.len());
    }
    println!("expected flips: |B(0)| = 0.25 and 1/e = {:.4}", (-1.0f64).exp());
    Ok(())
}
