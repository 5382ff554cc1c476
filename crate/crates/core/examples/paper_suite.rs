//! Every stock experiment with its summary table.
use inner_sublevel::suite::{cmd_paper_suite, SuiteOptions};

fn main() -> inner_sublevel::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("inner-sublevel-suite"));
    let summary = cmd_paper_suite(&dir, &SuiteOptions::default())?;
    print!("{}", summary.to_text());
    println!("reports in {}", dir.display());
    Ok(())
}
