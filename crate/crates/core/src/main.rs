use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use inner_sublevel::report::{
    cmd_analyze, cmd_render, default_output, parse_eta_list, AnalysisOptions, DEFAULT_OUT_DIR,
    OUT_DIR_ENV,
};
use inner_sublevel::sublevel::{ImageFormat, ImageSpec};
use inner_sublevel::suite::{cmd_paper_suite, SuiteOptions};
use inner_sublevel::Error;

/// Sublevel-set connectivity of inner functions on the unit disk.
#[derive(Parser)]
#[command(name = "inner-sublevel", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Refinement levels between the first grid and --r-max
    #[arg(long, global = true, default_value_t = 4)]
    grid_levels: usize,
    /// Largest sampled radius
    #[arg(long, global = true, default_value_t = 0.9999)]
    r_max: f64,
    /// Index budget of every generated zero sequence [default: per generator, 64 or 10000]
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Leaf tolerance for log|u|
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    /// Worker threads [default: all cores]
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Default output directory
    #[arg(long, global = true, env = OUT_DIR_ENV, default_value = DEFAULT_OUT_DIR)]
    out_dir: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Constants, connectivity verdicts and boundary criterion for a spec
    Analyze {
        /// JSON spec of the inner function
        #[arg(long)]
        spec: PathBuf,
        /// Comma-separated levels in (0, 1)
        #[arg(long, default_value = "")]
        eta: String,
        /// Report path [default: <out-dir>/<spec stem>.json]
        #[arg(long)]
        out: Option<PathBuf>,
        /// Skip the boundary criterion scan
        #[arg(long)]
        no_criterion: bool,
    },
    /// Image of the nested sublevel sets
    Render {
        /// JSON spec of the inner function
        #[arg(long)]
        spec: PathBuf,
        /// Comma-separated levels in (0, 1)
        #[arg(long)]
        eta: String,
        /// Image format
        #[arg(long, default_value = "ppm", value_parser = ["ppm", "svg"])]
        format: String,
        /// Width in pixels
        #[arg(long, default_value_t = 512)]
        width: usize,
        /// Height in pixels
        #[arg(long, default_value_t = 512)]
        height: usize,
        /// Image path [default: <out-dir>/<spec stem>.<format>]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Every stock experiment, one report each plus a summary.
    /// Experiments use their own grid policies; only --workers applies.
    PaperSuite {
        /// Output directory [default: --out-dir]
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let g = cli.global;
    let opts = AnalysisOptions {
        grid_levels: g.grid_levels,
        r_max: g.r_max,
        budget: g.budget,
        tol: g.tol,
        workers: g.workers,
        criterion: true,
    };
    match cli.command {
        Command::Analyze {
            spec,
            eta,
            out,
            no_criterion,
        } => {
            let etas = parse_eta_list(&eta)?;
            let out = out.unwrap_or_else(|| default_output(&g.out_dir, &spec, "json"));
            let opts = AnalysisOptions {
                criterion: !no_criterion,
                ..opts
            };
            let report = cmd_analyze(&spec, &etas, &out, &opts)?;
            for v in &report.verdicts {
                println!("eta {}: {:?} [{}]", v.verdict.eta, v.verdict.verdict, v.resolution);
            }
            println!("wrote {}", out.display());
        }
        Command::Render {
            spec,
            eta,
            format,
            width,
            height,
            out,
        } => {
            let etas = parse_eta_list(&eta)?;
            let format: ImageFormat = format.parse()?;
            let image = ImageSpec {
                width,
                height,
                format,
                tol: g.tol,
            };
            let out = out.unwrap_or_else(|| default_output(&g.out_dir, &spec, &format_ext(format)));
            cmd_render(&spec, &etas, &out, &image, &opts)?;
            println!("wrote {}", out.display());
        }
        Command::PaperSuite { out } => {
            let dir = out.unwrap_or(g.out_dir);
            let summary = cmd_paper_suite(&dir, &SuiteOptions { workers: g.workers })?;
            print!("{}", summary.to_text());
            println!("wrote {}", dir.display());
            if !summary.all_ran() {
                eprintln!("error: some experiments failed; see summary");
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn format_ext(f: ImageFormat) -> String {
    match f {
        ImageFormat::Ppm => "ppm".into(),
        ImageFormat::Svg => "svg".into(),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
