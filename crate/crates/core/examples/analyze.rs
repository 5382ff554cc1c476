//! A full JSON report for a spec file, as the `analyze` command writes it.
use inner_sublevel::report::{cmd_analyze, AnalysisOptions};
use std::path::PathBuf;

fn main() -> inner_sublevel::Result<()> {
    let spec = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/specs/atomic_squared.json"));
    let out = std::env::temp_dir().join("inner-sublevel-analyze.json");
    let report = cmd_analyze(&spec, &[(-2.0f64).exp(), 0.5], &out, &AnalysisOptions::default())?;
    println!("spec sha256 {}", report.spec_sha256);
    for v in &report.verdicts {
        println!("eta {:.4}: {:?} [{}]", v.verdict.eta, v.verdict.verdict, v.resolution);
    }
    for c in &report.constants {
        println!("leaf {} ({}): separation {:?}, eta* {:?}", c.leaf, c.generator, c.separation, c.eta_star);
    }
    println!("wrote {}", out.display());
    Ok(())
}
