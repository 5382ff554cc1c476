//! Machine-readable analysis reports and the commands that write them.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::criterion::{criterion_scan, CriterionConfig, CriterionReport};
use crate::error::{Error, Result};
use crate::inner::{certified_radius, InnerSpec};
use crate::sequence::{
    blaschke_sum, consecutive_rho, eta_star, frostman_sum, hoffman_constants,
    interpolation_constant, separation_constant, vhn_ratio, BlaschkeSum, FrostmanSum,
    HoffmanConstants, VhnRatio, ZeroSequence, DEFAULT_FROSTMAN_CEILING,
};
use crate::sublevel::{
    is_connected, render, ConnectivityVerdict, ImageFormat, ImageSpec, LadderReport,
    RefinementPolicy, ThresholdReport,
};

pub const TOOL_NAME: &str = "inner-sublevel";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "INNER_SUBLEVEL_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "out";
/// Points of a sequence used for the constants block.
pub const CONSTANTS_WINDOW: usize = 200;

/// Knobs shared by the commands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    pub grid_levels: usize,
    pub r_max: f64,
    /// Overrides the index budget of every generated sequence.
    pub budget: Option<usize>,
    pub tol: f64,
    pub workers: Option<usize>,
    pub criterion: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        let p = RefinementPolicy::default();
        AnalysisOptions {
            grid_levels: p.levels,
            r_max: p.r_max,
            budget: None,
            tol: p.tol,
            workers: None,
            criterion: true,
        }
    }
}

impl AnalysisOptions {
    pub fn policy(&self) -> RefinementPolicy {
        RefinementPolicy {
            levels: self.grid_levels,
            r_max: self.r_max,
            tol: self.tol,
            workers: self.workers,
            ..RefinementPolicy::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsecutiveRho {
    pub min: f64,
    pub max: f64,
    /// `ρ(z_{w-1}, z_w)` at the end of the window.
    pub last: f64,
}

/// Classifier output for one zero set of the spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceConstants {
    pub leaf: usize,
    pub generator: String,
    pub budget: usize,
    pub window: usize,
    pub blaschke_sum: Option<BlaschkeSum>,
    pub consecutive_rho: Option<ConsecutiveRho>,
    pub separation: Option<f64>,
    /// `inf δ_n` over the window.
    pub interpolation_delta: Option<f64>,
    pub hoffman: Option<HoffmanConstants>,
    pub vhn: Option<VhnRatio>,
    pub eta_star: Option<f64>,
    /// Frostman sum at the cluster point 1.
    pub frostman: Option<FrostmanSum>,
    pub notes: Vec<String>,
}

fn keep<T>(notes: &mut Vec<String>, what: &str, r: Result<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            notes.push(format!("{what}: {e}"));
            None
        }
    }
}

pub fn sequence_constants(leaf: usize, seq: &ZeroSequence) -> SequenceConstants {
    let window = seq.budget().min(CONSTANTS_WINDOW);
    let mut notes = Vec::new();
    let consecutive = (window >= 2).then(|| {
        (1..window)
            .map(|n| consecutive_rho(seq, n))
            .collect::<Result<Vec<f64>>>()
            .map(|v| ConsecutiveRho {
                min: v.iter().copied().fold(f64::INFINITY, f64::min),
                max: v.iter().copied().fold(0.0, f64::max),
                last: *v.last().unwrap(),
            })
    });
    let consecutive_rho = consecutive.and_then(|r| keep(&mut notes, "consecutive rho", r));
    let separation = keep(&mut notes, "separation", separation_constant(seq, window));
    let interpolation_delta = keep(&mut notes, "interpolation", interpolation_constant(seq, window));
    let hoffman = interpolation_delta
        .filter(|d| *d > 0.0 && *d < 1.0)
        .and_then(|d| keep(&mut notes, "hoffman", hoffman_constants(d, None)));
    let vhn = keep(&mut notes, "vhn", vhn_ratio(seq, window));
    let eta_star = keep(&mut notes, "eta*", eta_star(seq, window));
    let frostman = if seq.is_finite() {
        None
    } else {
        keep(
            &mut notes,
            "frostman",
            frostman_sum(seq, crate::geometry::BoundaryPoint::ONE, window, DEFAULT_FROSTMAN_CEILING),
        )
    };
    SequenceConstants {
        leaf,
        generator: seq.generator().name().to_string(),
        budget: seq.budget(),
        window,
        blaschke_sum: keep(&mut notes, "blaschke sum", blaschke_sum(seq, window)),
        consecutive_rho,
        separation,
        interpolation_delta,
        hoffman,
        vhn,
        eta_star,
        frostman,
        notes,
    }
}

/// Constants for every zero set in the spec: generated sequences and finite
/// zero lists with at least two points.
pub fn spec_constants(spec: &InnerSpec) -> Result<Vec<SequenceConstants>> {
    let mut out = Vec::new();
    for (k, leaf) in spec.leaves().enumerate() {
        match leaf {
            InnerSpec::InfiniteBlaschke { sequence } => out.push(sequence_constants(k, sequence)),
            InnerSpec::FiniteBlaschke { zeros, .. } if zeros.len() >= 2 => {
                out.push(sequence_constants(k, &ZeroSequence::explicit(zeros.clone())?))
            }
            _ => {}
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CriterionBlock {
    Computed(Box<CriterionReport>),
    Unavailable { reason: String },
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictEntry {
    /// "truncation (N, r_max)" under which the verdict holds.
    pub resolution: String,
    #[serde(flatten)]
    pub verdict: ConnectivityVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub policy: RefinementPolicy,
    pub criterion_config: Option<CriterionConfig>,
    pub certified_radius: f64,
    pub sequence_budgets: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub spec: InnerSpec,
    pub spec_sha256: String,
    pub constants: Vec<SequenceConstants>,
    pub verdicts: Vec<VerdictEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ladder: Option<LadderReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<ThresholdReport>,
    pub criterion: CriterionBlock,
    pub provenance: Provenance,
    pub timing: Timing,
}

impl AnalysisReport {
    /// Pretty JSON with a trailing newline; non-finite numbers become `null`.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// SHA-256 of the canonical JSON form of `spec`.
pub fn spec_hash(spec: &InnerSpec) -> String {
    hex::encode(Sha256::digest(spec.to_json().as_bytes()))
}

/// Replaces the index budget of every generated sequence in `spec`.
pub fn with_budget(spec: &InnerSpec, budget: usize) -> Result<InnerSpec> {
    Ok(match spec {
        InnerSpec::InfiniteBlaschke { sequence } => InnerSpec::InfiniteBlaschke {
            sequence: sequence.with_budget(budget)?,
        },
        InnerSpec::Product { factors } => InnerSpec::Product {
            factors: factors.iter().map(|f| with_budget(f, budget)).collect::<Result<_>>()?,
        },
        InnerSpec::Compose { outer, inner } => InnerSpec::Compose {
            outer: Box::new(with_budget(outer, budget)?),
            inner: Box::new(with_budget(inner, budget)?),
        },
        InnerSpec::FrostmanShift { base, a } => InnerSpec::FrostmanShift {
            base: Box::new(with_budget(base, budget)?),
            a: *a,
        },
        leaf => leaf.clone(),
    })
}

/// Constants, one verdict per level, and the boundary criterion.
pub fn analyze(spec: &InnerSpec, etas: &[f64], opts: &AnalysisOptions) -> Result<AnalysisReport> {
    analyze_with(spec, etas, &opts.policy(), opts.criterion)
}

pub(crate) fn analyze_with(
    spec: &InnerSpec,
    etas: &[f64],
    policy: &RefinementPolicy,
    criterion: bool,
) -> Result<AnalysisReport> {
    let start = Instant::now();
    let constants = spec_constants(spec)?;
    let verdicts = etas
        .iter()
        .map(|&eta| {
            is_connected(spec, eta, policy).map(|v| VerdictEntry {
                resolution: v.resolution(),
                verdict: v,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let config = CriterionConfig::default();
    let criterion = if !criterion {
        CriterionBlock::Skipped
    } else {
        match policy.run(|| criterion_scan(spec, &config))? {
            Ok(r) => CriterionBlock::Computed(Box::new(r)),
            Err(e) => CriterionBlock::Unavailable {
                reason: e.to_string(),
            },
        }
    };
    Ok(AnalysisReport {
        spec: spec.clone(),
        spec_sha256: spec_hash(spec),
        constants,
        verdicts,
        ladder: None,
        threshold: None,
        criterion,
        provenance: Provenance {
            tool: TOOL_NAME.to_string(),
            version: TOOL_VERSION.to_string(),
            policy: policy.clone(),
            criterion_config: Some(config),
            certified_radius: certified_radius(spec, policy.tol),
            sequence_budgets: spec.sequence_budgets(),
        },
        timing: Timing {
            seconds: start.elapsed().as_secs_f64(),
        },
    })
}

/// Reads and validates a spec file. Unreadable files count as malformed input.
pub fn load_spec(path: &Path) -> Result<InnerSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidSpec(format!("{}: {e}", path.display())))?;
    InnerSpec::from_json(&text).map_err(|e| match e {
        Error::InvalidSpec(m) => Error::InvalidSpec(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn load_with_budget(path: &Path, opts: &AnalysisOptions) -> Result<InnerSpec> {
    let spec = load_spec(path)?;
    match opts.budget {
        Some(n) => with_budget(&spec, n),
        None => Ok(spec),
    }
}

/// Default output path `<dir>/<spec stem>.<ext>`.
pub fn default_output(dir: &Path, spec_path: &Path, ext: &str) -> PathBuf {
    let stem = spec_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".into());
    dir.join(format!("{stem}.{ext}"))
}

/// `analyze`: loads the spec, writes the report to `out`, returns it.
pub fn cmd_analyze(
    spec_path: &Path,
    etas: &[f64],
    out: &Path,
    opts: &AnalysisOptions,
) -> Result<AnalysisReport> {
    let spec = load_with_budget(spec_path, opts)?;
    let report = analyze(&spec, etas, opts)?;
    write_atomic(out, report.to_json().as_bytes())?;
    Ok(report)
}

/// `render`: writes the nested sublevel picture of the spec to `out`.
pub fn cmd_render(
    spec_path: &Path,
    etas: &[f64],
    out: &Path,
    image: &ImageSpec,
    opts: &AnalysisOptions,
) -> Result<()> {
    let spec = load_with_budget(spec_path, opts)?;
    let bytes = opts.policy().run(|| render(&spec, etas, image))??;
    write_atomic(out, &bytes)
}

/// Parses `"0.5,0.9"` into levels in `(0, 1)`.
pub fn parse_eta_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let v: f64 = t
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("not a number: {t:?}")))?;
            if v > 0.0 && v < 1.0 {
                Ok(v)
            } else {
                Err(Error::InvalidArgument(format!("eta = {v} outside (0, 1)")))
            }
        })
        .collect()
}

pub fn parse_format(s: &str) -> Result<ImageFormat> {
    s.parse()
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file()
            .set_permissions(std::fs::Permissions::from_mode(0o644))
            .map_err(|e| Error::io(path, e))?;
    }
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}
