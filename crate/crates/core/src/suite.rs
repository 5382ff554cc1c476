//! Stock experiments: one report per worked example plus a summary table of
//! computed constants next to their closed forms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::DiskPoint;
use crate::inner::InnerSpec;
use crate::report::{analyze_with, write_atomic, AnalysisReport, TOOL_NAME, TOOL_VERSION};
use crate::sequence::{
    consecutive_rho, eta_star, hoffman_constants, nearest_neighbor_distances, interpolation_constant, vhn_ratio, ZeroSequence,
};
use crate::sublevel::{
    ladder_scan, threshold_search, RefinementPolicy, ThresholdOutcome, Verdict,
};

/// One stock experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Experiment {
    pub name: String,
    pub spec: InnerSpec,
    /// Levels reported as verdicts.
    pub etas: Vec<f64>,
    /// Levels scanned jointly on one grid for the monotonicity check.
    pub ladder: Vec<f64>,
    /// `(lo, hi, tol_eta)` for a threshold search.
    pub threshold: Option<(f64, f64, f64)>,
    pub policy: RefinementPolicy,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub workers: Option<usize>,
}

fn real_points(seq: &ZeroSequence, n: usize) -> Result<Vec<DiskPoint>> {
    seq.points(n)?
        .iter()
        .map(|g| DiskPoint::from_complex(g.to_complex()))
        .collect()
}

/// Level used for the thin experiment: the Hoffman `ε` of the measured `δ`
/// of the first six thin zeros.
pub fn thin_epsilon() -> Result<f64> {
    hoffman_epsilon(&real_points(&ZeroSequence::thin(), 6)?)
}

/// Policy that keeps refining near the rim until every zero sits in an IN cell.
pub fn capture_policy() -> RefinementPolicy {
    RefinementPolicy {
        levels: 1,
        base_level: 2,
        r_max: 0.99999,
        max_depth: 24,
        polish_depth: 24,
        capture_zeros: true,
        ..RefinementPolicy::default()
    }
}

/// Hoffman `ε` of the measured `δ` of a finite zero set.
pub fn hoffman_epsilon(zeros: &[DiskPoint]) -> Result<f64> {
    let seq = ZeroSequence::explicit(zeros.to_vec())?;
    let delta = interpolation_constant(&seq, zeros.len())?;
    Ok(hoffman_constants(delta, None)?.epsilon)
}

/// Zeros of the interleaved sequence, split by parity into two thin halves.
pub fn interleaved_halves(pairs: usize) -> Result<(Vec<DiskPoint>, Vec<DiskPoint>)> {
    let pts = real_points(&ZeroSequence::interleaved_thin(), 2 * pairs)?;
    let odd = pts.iter().step_by(2).copied().collect();
    let even = pts.iter().skip(1).step_by(2).copied().collect();
    Ok((odd, even))
}

pub fn stock_experiments() -> Result<Vec<Experiment>> {
    let e = |x: f64| x.exp();
    let base = RefinementPolicy::default();
    let coarse = RefinementPolicy {
        tol: 1e-2,
        ..base.clone()
    };
    let half = DiskPoint::real(0.5)?;
    let pair = InnerSpec::blaschke(vec![half, DiskPoint::real(-0.5)?]);
    let thin = InnerSpec::blaschke(real_points(&ZeroSequence::thin(), 6)?);
    let eps = thin_epsilon()?;
    let (odd, even) = interleaved_halves(3)?;
    let split_eps = hoffman_epsilon(&[odd.clone(), even.clone()].concat())?;
    let split = InnerSpec::multiply(vec![InnerSpec::blaschke(odd), InnerSpec::blaschke(even)]);
    let ex = |name: &str, spec: InnerSpec, etas: &[f64], ladder: &[f64]| Experiment {
        name: name.to_string(),
        spec,
        etas: etas.to_vec(),
        ladder: ladder.to_vec(),
        threshold: None,
        policy: base.clone(),
    };
    Ok(vec![
        ex(
            "geometric",
            InnerSpec::infinite(ZeroSequence::geometric()),
            &[0.5],
            &[0.05, 0.2, 0.5, 0.8],
        ),
        ex(
            "hyperbolic_orbit",
            InnerSpec::infinite(ZeroSequence::hyperbolic_orbit()),
            &[0.75],
            &[0.1, 0.5, 0.75, 0.9],
        ),
        Experiment {
            policy: RefinementPolicy {
                levels: 2,
                r_max: 0.95,
                ..coarse.clone()
            },
            ..ex(
                "parabolic_orbit",
                InnerSpec::infinite(ZeroSequence::parabolic_orbit()),
                &[0.9],
                &[0.5, 0.9],
            )
        },
        ex(
            "blaschke_times_atomic",
            InnerSpec::multiply(vec![pair.clone(), InnerSpec::s()]),
            &[0.5, 0.9],
            &[0.1, 0.3, 0.5, 0.9],
        ),
        Experiment {
            threshold: Some((0.05, 0.95, 0.01)),
            ..ex("blaschke_pair", pair, &[0.2, 0.3], &[0.1, 0.2, 0.3, 0.5])
        },
        Experiment {
            threshold: Some((0.05, 0.95, 0.01)),
            ..ex(
                "atomic",
                InnerSpec::s(),
                &[e(-1.0), 0.5, e(-3.0)],
                &[e(-3.0), 0.1, e(-1.0), 0.5, 0.9],
            )
        },
        Experiment {
            threshold: Some((0.05, 0.95, 0.005)),
            ..ex(
                "atomic_squared",
                InnerSpec::compose(InnerSpec::s(), InnerSpec::monomial(2)),
                &[e(-2.0), 0.5],
                &[0.1, e(-2.0), 0.3, 0.36, 0.375, 0.5, 0.8],
            )
        },
        ex(
            "frostman_atomic",
            InnerSpec::s().frostman_shift(half),
            &[0.3, 0.6, 0.9],
            &[0.3, 0.6, 0.9],
        ),
        Experiment {
            policy: capture_policy(),
            ..ex("thin", thin, &[eps], &[eps, 0.5, 0.9])
        },
        Experiment {
            policy: capture_policy(),
            ..ex("interleaved_split", split, &[split_eps], &[split_eps, 0.05, 0.5, 0.9])
        },
        Experiment {
            policy: coarse,
            ..ex(
                "inverse_square",
                InnerSpec::infinite(ZeroSequence::power(2.0)?),
                &[0.5],
                &[0.5, 0.9],
            )
        },
    ])
}

/// Outcome of one experiment as listed in the summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutcome {
    pub name: String,
    pub report: Option<String>,
    pub error: Option<String>,
    pub verdicts: Vec<(f64, Verdict)>,
    pub ladder_monotone: Option<bool>,
    /// Every final component of every verdict and ladder level passes the
    /// topology checks.
    pub topology_pass: Option<bool>,
}

/// One line of the comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub experiment: String,
    pub quantity: String,
    pub computed: String,
    pub reference: String,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub tool: String,
    pub version: String,
    pub experiments: Vec<ExperimentOutcome>,
    pub rows: Vec<SummaryRow>,
}

impl SuiteSummary {
    pub fn all_ran(&self) -> bool {
        self.experiments.iter().all(|e| e.error.is_none())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{TOOL_NAME} {} stock experiments", self.version);
        let _ = writeln!(s);
        for e in &self.experiments {
            let v: Vec<String> = e
                .verdicts
                .iter()
                .map(|(eta, v)| format!("{eta:.6}:{}", verdict_name(*v)))
                .collect();
            match &e.error {
                Some(err) => {
                    let _ = writeln!(s, "{:<24} ERROR {err}", e.name);
                }
                None => {
                    let _ = writeln!(
                        s,
                        "{:<24} {}  monotone={} topology={}",
                        e.name,
                        v.join(" "),
                        flag(e.ladder_monotone),
                        flag(e.topology_pass)
                    );
                }
            }
        }
        let _ = writeln!(s);
        let _ = writeln!(
            s,
            "{:<24} {:<34} {:<40} {:<26} ok",
            "experiment", "quantity", "computed", "reference"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:<24} {:<34} {:<40} {:<26} {}",
                r.experiment,
                r.quantity,
                r.computed,
                r.reference,
                if r.agrees { "yes" } else { "NO" }
            );
        }
        s
    }
}

fn flag(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "pass",
        Some(false) => "FAIL",
        None => "-",
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Connected => "connected",
        Verdict::Disconnected => "disconnected",
        Verdict::Unresolved => "unresolved",
    }
}

/// Runs one experiment: verdicts, constants, criterion, ladder and threshold.
pub fn run_experiment(ex: &Experiment, opts: &SuiteOptions) -> Result<AnalysisReport> {
    let policy = RefinementPolicy {
        workers: opts.workers,
        ..ex.policy.clone()
    };
    let start = std::time::Instant::now();
    let mut report = analyze_with(&ex.spec, &ex.etas, &policy, true)?;
    report.ladder = Some(ladder_scan(&ex.spec, &ex.ladder, &policy)?);
    if let Some((lo, hi, tol)) = ex.threshold {
        report.threshold = Some(threshold_search(&ex.spec, lo, hi, tol, &policy)?);
    }
    report.timing.seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn outcome(ex: &Experiment, r: &Result<AnalysisReport>) -> ExperimentOutcome {
    match r {
        Ok(rep) => {
            let ladder = rep.ladder.as_ref();
            let topo = rep.verdicts.iter().all(|v| v.verdict.topology.all_pass())
                && ladder.is_none_or(|l| l.topology_pass.iter().all(|b| *b));
            ExperimentOutcome {
                name: ex.name.clone(),
                report: Some(format!("{}.json", ex.name)),
                error: None,
                verdicts: rep
                    .verdicts
                    .iter()
                    .map(|v| (v.verdict.eta, v.verdict.verdict))
                    .collect(),
                ladder_monotone: ladder.map(|l| l.monotone),
                topology_pass: Some(topo),
            }
        }
        Err(e) => ExperimentOutcome {
            name: ex.name.clone(),
            report: None,
            error: Some(e.to_string()),
            verdicts: Vec::new(),
            ladder_monotone: None,
            topology_pass: None,
        },
    }
}

fn row(experiment: &str, quantity: &str, computed: String, reference: &str, agrees: bool) -> SummaryRow {
    SummaryRow {
        experiment: experiment.into(),
        quantity: quantity.into(),
        computed,
        reference: reference.into(),
        agrees,
    }
}

/// Largest deviation of `f(n)` from `g(n)` over `n` in `range`.
fn max_dev(
    range: std::ops::RangeInclusive<usize>,
    f: impl Fn(usize) -> Result<f64>,
    g: impl Fn(usize) -> f64,
) -> Result<f64> {
    range.map(|n| Ok((f(n)? - g(n)).abs())).try_fold(0.0f64, |a, d: Result<f64>| Ok(a.max(d?)))
}

/// Closed-form comparisons that need no grid.
pub fn constant_rows() -> Result<Vec<SummaryRow>> {
    let mut rows = Vec::new();
    let hyp = ZeroSequence::hyperbolic_orbit();
    let d = max_dev(1..=30, |j| consecutive_rho(&hyp, j), |_| 0.5)?;
    rows.push(row("hyperbolic_orbit", "consecutive rho, j <= 30", format!("0.5 +/- {d:.1e}"), "1/2", d <= 1e-13));

    let par = ZeroSequence::parabolic_orbit();
    let d = max_dev(1..=1000, |n| consecutive_rho(&par, n), |_| 0.5f64.sqrt())?;
    rows.push(row(
        "parabolic_orbit",
        "consecutive rho, n <= 1000",
        format!("{:.10} +/- {d:.1e}", 0.5f64.sqrt()),
        "1/sqrt(2)",
        d <= 1e-13,
    ));
    let d = max_dev(
        1..=1000,
        |n| {
            let z = par.point(n)?.to_complex();
            Ok((z - num_complex::Complex64::new(0.5, 0.0)).norm())
        },
        |_| 0.5,
    )?;
    rows.push(row("parabolic_orbit", "|z_n - 1/2|, n <= 1000", format!("0.5 +/- {d:.1e}"), "1/2", d <= 1e-14));

    let geo = ZeroSequence::geometric();
    let v = vhn_ratio(&geo, 64)?;
    rows.push(row("geometric", "VHN ratio sup", format!("{}", v.sup), "1/2", v.sup == 0.5));

    let il = ZeroSequence::interleaved_thin();
    let d = max_dev(
        1..=10,
        |m| consecutive_rho(&il, 2 * m - 1),
        |m| {
            let m = m + 1;
            1.0 / (3.0 - 2.0 * (m as f64).powi(-(m as i32)))
        },
    )?;
    let last = consecutive_rho(&il, 19)?;
    rows.push(row(
        "interleaved",
        "pair rho vs 1/(3 - 2 m^-m)",
        format!("{last:.10} (dev {d:.1e})"),
        "-> 1/3",
        d <= 1e-6 && (last - 1.0 / 3.0).abs() < 1e-6,
    ));
    let es = eta_star(&il, 20)?;
    let nn = nearest_neighbor_distances(&il.points(20)?);
    let tail = nn[18].max(nn[19]);
    rows.push(row(
        "interleaved",
        "eta* over 20 points; tail",
        format!("{es:.4}; {tail:.10}"),
        "< 1; -> 1/3",
        es < 1.0 && (tail - 1.0 / 3.0).abs() < 1e-6,
    ));
    Ok(rows)
}

fn verdict_at(r: &AnalysisReport, i: usize) -> Option<Verdict> {
    r.verdicts.get(i).map(|v| v.verdict.verdict)
}

/// Rows drawn from the experiment reports.
fn report_rows(exps: &[Experiment], reports: &[Result<AnalysisReport>]) -> Vec<SummaryRow> {
    let mut rows = Vec::new();
    for (ex, r) in exps.iter().zip(reports) {
        let Ok(r) = r else { continue };
        let name = ex.name.as_str();
        let th = r.threshold.as_ref();
        match name {
            "blaschke_pair" => {
                if let Some(t) = th {
                    rows.push(row(
                        name,
                        "connectivity threshold",
                        format!("{:?} [{:.4}, {:.4}]", t.outcome, t.lo, t.hi),
                        "|B(0)| = 1/4",
                        t.outcome == ThresholdOutcome::Bracket && t.lo <= 0.25 && 0.25 <= t.hi,
                    ));
                }
            }
            "atomic" => {
                if let Some(t) = th {
                    rows.push(row(
                        name,
                        "connectivity threshold",
                        format!("{:?}", t.outcome),
                        "connected at every level",
                        t.outcome == ThresholdOutcome::AllConnected,
                    ));
                }
            }
            "atomic_squared" => {
                if let Some(t) = th {
                    let pinch = (-1.0f64).exp();
                    rows.push(row(
                        name,
                        "connectivity threshold",
                        format!("{:?} [{:.4}, {:.4}]", t.outcome, t.lo, t.hi),
                        "pinch at 1/e",
                        t.outcome == ThresholdOutcome::Bracket && t.lo <= pinch && pinch <= t.hi,
                    ));
                }
            }
            "thin" => {
                if let Some(v) = r.verdicts.first() {
                    let v = &v.verdict;
                    let one_each = v.components.iter().all(|c| c.zeros == 1);
                    rows.push(row(
                        name,
                        "components at Hoffman eps",
                        format!("{} ({}, one zero each: {one_each})", v.in_components, verdict_name(v.verdict)),
                        "6, one zero each",
                        v.verdict == Verdict::Disconnected && v.in_components == 6 && one_each,
                    ));
                }
            }
            "interleaved_split" => {
                if let Some(v) = r.verdicts.first() {
                    let v = &v.verdict;
                    rows.push(row(
                        name,
                        "witnesses at Hoffman eps",
                        format!("{} ({})", v.witnesses.len(), verdict_name(v.verdict)),
                        "disconnected, >= 2",
                        v.verdict == Verdict::Disconnected && v.witnesses.len() >= 2,
                    ));
                }
            }
            "inverse_square" => {
                let vhn = r.constants.first().and_then(|c| c.vhn);
                let trend = vhn.map(|v| format!(", VHN sup {:.6}", v.sup)).unwrap_or_default();
                let v = verdict_at(r, 0);
                rows.push(row(
                    name,
                    "verdict at eta = 0.5",
                    format!("{}{trend}", v.map(verdict_name).unwrap_or("-")),
                    "open question: unresolved",
                    v == Some(Verdict::Unresolved),
                ));
            }
            _ => {
                if !r.verdicts.is_empty() {
                    let all = r.verdicts.iter().all(|v| v.verdict.verdict == Verdict::Connected);
                    rows.push(row(
                        name,
                        "verdicts",
                        r.verdicts
                            .iter()
                            .map(|v| verdict_name(v.verdict.verdict))
                            .collect::<Vec<_>>()
                            .join(","),
                        "connected",
                        all,
                    ));
                }
            }
        }
    }
    rows
}

/// Runs every stock experiment and collects the summary. Reports are
/// returned in experiment order.
pub fn run_suite(opts: &SuiteOptions) -> Result<(Vec<Experiment>, Vec<Result<AnalysisReport>>, SuiteSummary)> {
    let exps = stock_experiments()?;
    let reports: Vec<Result<AnalysisReport>> =
        exps.par_iter().map(|ex| run_experiment(ex, opts)).collect();
    let mut rows = constant_rows()?;
    rows.extend(report_rows(&exps, &reports));
    let summary = SuiteSummary {
        tool: TOOL_NAME.to_string(),
        version: TOOL_VERSION.to_string(),
        experiments: exps.iter().zip(&reports).map(|(e, r)| outcome(e, r)).collect(),
        rows,
    };
    Ok((exps, reports, summary))
}

/// `paper-suite`: writes `<name>.json` per experiment plus `summary.json` and
/// `summary.txt` into `out_dir`.
pub fn cmd_paper_suite(out_dir: &Path, opts: &SuiteOptions) -> Result<SuiteSummary> {
    let (exps, reports, summary) = run_suite(opts)?;
    for (ex, r) in exps.iter().zip(&reports) {
        if let Ok(rep) = r {
            write_atomic(&out_dir.join(format!("{}.json", ex.name)), rep.to_json().as_bytes())?;
        }
    }
    let json = serde_json::to_string_pretty(&summary).map_err(|e| Error::io(out_dir, e))? + "\n";
    write_atomic(&out_dir.join("summary.json"), json.as_bytes())?;
    write_atomic(&out_dir.join("summary.txt"), summary.to_text().as_bytes())?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_rows_agree() {
        for r in constant_rows().unwrap() {
            assert!(r.agrees, "{r:?}");
        }
    }

    #[test]
    fn halves_interleave() {
        let (odd, even) = interleaved_halves(3).unwrap();
        assert_eq!(odd.len(), 3);
        assert!((odd[0].re - 0.75).abs() < 1e-15 && (even[0].re - 0.5).abs() < 1e-15);
        assert!(odd.windows(2).all(|w| w[0].re < w[1].re));
    }

    #[test]
    fn stock_specs_round_trip() {
        for ex in stock_experiments().unwrap() {
            let back = InnerSpec::from_json(&ex.spec.to_json()).unwrap();
            assert_eq!(back, ex.spec, "{}", ex.name);
        }
    }

    #[test]
    fn thin_level_is_small() {
        let eps = thin_epsilon().unwrap();
        assert!(eps > 0.0 && eps < 0.1);
    }
}
