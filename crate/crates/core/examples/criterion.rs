//! Spectrum, boundary derivative ratio and radial probes.
use inner_sublevel::criterion::{aleksandrov_ratio, criterion_scan, spectrum, CriterionConfig};
use inner_sublevel::geometry::{BoundaryPoint, DiskPoint};
use inner_sublevel::inner::InnerSpec;

fn main() -> inner_sublevel::Result<()> {
    let s = InnerSpec::s();
    for t in [0.3, 1.0, 3.0] {
        println!("ratio for S at e^({t}i) = {:.12}", aleksandrov_ratio(&s, BoundaryPoint::from_angle(t))?);
    }
    let specs = [
        ("S", s.clone()),
        ("S(z^2)", InnerSpec::compose(s.clone(), InnerSpec::monomial(2))),
        ("Frostman shift of S", s.clone().frostman_shift(DiskPoint::real(0.5)?)),
        ("z^2", InnerSpec::monomial(2)),
    ];
    let config = CriterionConfig::default();
    for (name, u) in &specs {
        let sp = spectrum(u)?;
        let r = criterion_scan(u, &config)?;
        println!(
            "{name}: spectrum {:?}, sup ratio {:.6} ({:?}), {:?} [{}]",
            sp.points.iter().map(|p| p.angle()).collect::<Vec<_>>(),
            r.sup_ratio,
            r.sup_by_density,
            r.verdict_hint,
            r.hint_label
        );
        for p in &r.radial_probes {
            println!("    radial probe at angle {:.4}: log min |u| = {:.3}", p.point.angle(), p.log_min_modulus);
        }
    }
    Ok(())
}
