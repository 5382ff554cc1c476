use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    check_eta, classify_samples, label_components, label_mask, sample_cells, topology_checks,
    dump_grid, CellClass, ComponentStats, DiskGrid, GridDump, TopologyReport,
};
use crate::error::{Error, Result};
use crate::geometry::{pseudo_disk_to_euclidean, DiskPoint, EuclideanDisk};
use crate::inner::{certified_radius, zeros_within, InnerSpec, LogModulus};

/// Refinement schedule for connectivity verdicts.
///
/// Level `k` of `levels` uses grid level `base_level + k` on the disk of
/// radius `1 - (1 - r_max)^{(k+1)/levels}`; with the defaults this is
/// 0.9, 0.99, 0.999, 0.9999. Within a level, uncertain cells are bisected
/// up to `max_depth` times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementPolicy {
    pub levels: usize,
    pub base_level: u32,
    pub r_max: f64,
    pub max_depth: u32,
    pub max_cells: usize,
    /// Leaf tolerance for `log|u|` at cell centers.
    pub tol: f64,
    /// Scale applied to the classification margin.
    pub kappa: f64,
    /// Extra bisection passes spent on topology defects after a verdict.
    pub polish_depth: u32,
    /// Keep refining until every known zero sits in an IN cell.
    pub capture_zeros: bool,
    /// Worker threads for cell sampling; `None` uses the global pool.
    pub workers: Option<usize>,
    /// Attach the final grid classification to verdicts.
    pub dump_grid: bool,
}

impl Default for RefinementPolicy {
    fn default() -> Self {
        RefinementPolicy {
            levels: 4,
            base_level: 1,
            r_max: 0.9999,
            max_depth: 14,
            max_cells: 1_500_000,
            tol: 1e-6,
            kappa: 1.0,
            polish_depth: 4,
            capture_zeros: false,
            workers: None,
            dump_grid: false,
        }
    }
}

impl RefinementPolicy {
    /// Radii visited by the schedule.
    pub fn schedule(&self) -> Vec<f64> {
        let k = self.levels.max(1) as f64;
        (0..self.levels.max(1))
            .map(|i| {
                let r = 1.0 - (1.0 - self.r_max).powf((i + 1) as f64 / k);
                (r * 1e12).round() / 1e12
            })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if !(self.r_max > 0.0 && self.r_max < 1.0) {
            return Err(Error::InvalidArgument(format!("r_max = {} outside (0, 1)", self.r_max)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidArgument(format!("tol = {} must be positive", self.tol)));
        }
        if !(self.kappa > 0.0) {
            return Err(Error::InvalidArgument(format!("kappa = {} must be positive", self.kappa)));
        }
        Ok(())
    }

    /// Runs `f` on the configured worker pool.
    pub fn run<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        match self.workers {
            None => Ok(f()),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build()
                    .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
                Ok(pool.install(f))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Connected,
    Disconnected,
    Unresolved,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub tol: f64,
    pub kappa: f64,
    /// Largest evaluation bound met at a cell center.
    pub max_eval_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub level: u32,
    pub r_max: f64,
    pub rings: usize,
    pub cells: usize,
    pub depth: u32,
    pub in_cells: usize,
    pub out_cells: usize,
    pub uncertain_cells: usize,
}

/// An IN cell standing for a component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub cell: usize,
    pub center: [f64; 2],
    pub log_modulus: f64,
    /// Component of IN ∪ UNCERTAIN holding the cell.
    pub merged_component: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectivityVerdict {
    pub verdict: Verdict,
    /// What the grid showed before the certification rule below was applied.
    pub grid_verdict: Verdict,
    pub eta: f64,
    /// Radius requested by the schedule exceeded the certified radius, so the
    /// verdict is reported as unresolved.
    pub clipped: bool,
    pub certified_radius: f64,
    /// Truncation index per infinite leaf at the final radius.
    pub truncation: Vec<usize>,
    pub margin: Margin,
    pub grid: GridSummary,
    pub in_components: usize,
    pub merged_components: usize,
    pub witnesses: Vec<Witness>,
    pub components: Vec<ComponentStats>,
    pub topology: TopologyReport,
    /// Known zeros inside the final radius and how many fell in IN cells.
    pub zeros_known: usize,
    pub zeros_captured: usize,
    pub levels_used: usize,
    /// Grid verdict recomputed with half the margin on the final grid.
    pub half_margin_verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cells: Option<GridDump>,
}

impl ConnectivityVerdict {
    /// "truncation (N, r_max)" tag under which the verdict holds.
    pub fn resolution(&self) -> String {
        let n = if self.truncation.is_empty() {
            "finite".to_string()
        } else {
            self.truncation.iter().map(|n| n.to_string()).collect::<Vec<_>>().join("+")
        };
        format!("truncation ({n}, {})", self.grid.r_max)
    }
}

/// A grid with `log|u|` sampled at every cell center.
struct Sampled {
    grid: DiskGrid,
    logs: Vec<LogModulus>,
    edges: Vec<[u32; 2]>,
}

impl Sampled {
    fn new(u: &InnerSpec, level: u32, r_max: f64, tol: f64) -> Result<Self> {
        let grid = DiskGrid::new(level, r_max)?;
        let all: Vec<usize> = (0..grid.len()).collect();
        let logs = sample_cells(u, &grid, &all, tol)?;
        let edges = grid.edges();
        Ok(Sampled { grid, logs, edges })
    }

    fn refine(&mut self, u: &InnerSpec, selected: &[bool], tol: f64) -> Result<()> {
        let parent = self.grid.refine(selected);
        let fresh: Vec<usize> = (0..parent.len()).filter(|&i| selected[parent[i]]).collect();
        let values = sample_cells(u, &self.grid, &fresh, tol)?;
        let mut logs: Vec<LogModulus> = parent.iter().map(|&p| self.logs[p]).collect();
        for (i, v) in fresh.into_iter().zip(values) {
            logs[i] = v;
        }
        self.logs = logs;
        self.edges = self.grid.edges();
        Ok(())
    }

    fn max_bound(&self) -> f64 {
        self.logs.iter().map(|l| l.bound).fold(0.0, f64::max)
    }
}

/// Classification of a sampled grid at one level, with both bounds labeled.
struct Assessment {
    classes: Vec<CellClass>,
    in_labels: Vec<Option<u32>>,
    in_count: usize,
    merged_labels: Vec<Option<u32>>,
    merged_count: usize,
    /// Merged components holding at least one IN cell, ascending.
    merged_with_in: Vec<u32>,
    verdict: Verdict,
}

fn assess(s: &Sampled, eta: f64, kappa: f64) -> Assessment {
    let classes = classify_samples(&s.grid, &s.logs, eta, kappa);
    let in_mask: Vec<bool> = classes.iter().map(|c| *c == CellClass::In).collect();
    let (in_labels, in_count) = label_mask(&in_mask, &s.edges);
    let up_mask: Vec<bool> = classes.iter().map(|c| *c != CellClass::Out).collect();
    let (merged_labels, merged_count) = label_mask(&up_mask, &s.edges);
    let mut merged_with_in: Vec<u32> = (0..classes.len())
        .filter(|&i| in_mask[i])
        .filter_map(|i| merged_labels[i])
        .collect();
    merged_with_in.sort_unstable();
    merged_with_in.dedup();
    let verdict = if in_count == 1 && merged_count == 1 {
        Verdict::Connected
    } else if merged_with_in.len() >= 2 {
        Verdict::Disconnected
    } else {
        Verdict::Unresolved
    };
    Assessment {
        classes,
        in_labels,
        in_count,
        merged_labels,
        merged_count,
        merged_with_in,
        verdict,
    }
}

fn summary(s: &Sampled, classes: &[CellClass]) -> GridSummary {
    let count = |k| classes.iter().filter(|c| **c == k).count();
    GridSummary {
        level: s.grid.level(),
        r_max: s.grid.r_max(),
        rings: s.grid.rings().len(),
        cells: s.grid.len(),
        depth: s.grid.depth(),
        in_cells: count(CellClass::In),
        out_cells: count(CellClass::Out),
        uncertain_cells: count(CellClass::Uncertain),
    }
}

fn captured(s: &Sampled, a: &Assessment, zeros: &[Complex64]) -> usize {
    zeros
        .iter()
        .filter(|z| s.grid.locate(**z).iter().any(|&i| a.in_labels[i].is_some()))
        .count()
}

fn witnesses(s: &Sampled, a: &Assessment) -> Vec<Witness> {
    let mut best: Vec<Option<usize>> = vec![None; a.merged_count];
    for i in 0..a.classes.len() {
        if a.classes[i] != CellClass::In {
            continue;
        }
        let m = a.merged_labels[i].unwrap() as usize;
        match best[m] {
            Some(j) if s.logs[j].value <= s.logs[i].value => {}
            _ => best[m] = Some(i),
        }
    }
    a.merged_with_in
        .iter()
        .filter_map(|&m| best[m as usize].map(|i| (m, i)))
        .map(|(m, i)| {
            let c = s.grid.geometry(i).center;
            Witness {
                cell: i,
                center: [c.re, c.im],
                log_modulus: s.logs[i].value,
                merged_component: m as usize,
            }
        })
        .collect()
}

fn uncertain(a: &Assessment) -> Vec<bool> {
    a.classes.iter().map(|c| *c == CellClass::Uncertain).collect()
}

fn known_zeros(u: &InnerSpec, r: f64) -> Vec<Complex64> {
    zeros_within(u, r).unwrap_or_default()
}

/// Radii of the schedule that the truncation certificate allows, whether any
/// was cut, and the certified radius itself.
fn certified_schedule(u: &InnerSpec, policy: &RefinementPolicy) -> Result<(Vec<f64>, bool, f64)> {
    let cert = certified_radius(u, policy.tol);
    let sched = policy.schedule();
    let clipped = sched.iter().any(|r| *r > cert);
    let mut radii: Vec<f64> = sched.iter().copied().filter(|r| *r <= cert).collect();
    if radii.is_empty() {
        if cert < 0.5 {
            let budget = u.sequence_budgets().into_iter().max().unwrap_or(0);
            return Err(Error::TruncationBudgetExceeded {
                radius: sched[0],
                budget,
                tol: policy.tol,
            });
        }
        radii.push(cert * (1.0 - 1e-9));
    }
    Ok((radii, clipped, cert))
}

/// Connectivity of `Ω_u(η)` inside the scheduled disks.
///
/// Uncertain cells count as inside for the upper bound (merged components)
/// and as outside for the lower bound (IN components). The grid reports
/// connected when both bounds have one component, disconnected when two
/// merged components hold IN cells, and unresolved otherwise. Refinement
/// stops at the first level giving a verdict; a further few passes repair
/// topology defects left by coarse cells. When the schedule asks for radii
/// beyond the truncation certificate the verdict is reported as unresolved.
pub fn is_connected(u: &InnerSpec, eta: f64, policy: &RefinementPolicy) -> Result<ConnectivityVerdict> {
    check_eta(eta)?;
    policy.validate()?;
    policy.run(|| connected_inner(u, eta, policy))?
}

fn connected_inner(u: &InnerSpec, eta: f64, policy: &RefinementPolicy) -> Result<ConnectivityVerdict> {
    let (radii, clipped, cert) = certified_schedule(u, policy)?;
    let mut last = None;
    for (k, &r) in radii.iter().enumerate() {
        let v = run_level(u, eta, policy, policy.base_level + k as u32, r, k + 1)?;
        let done = v.grid_verdict != Verdict::Unresolved;
        last = Some(v);
        if done {
            break;
        }
    }
    let mut v = last.expect("schedule is never empty");
    v.clipped = clipped;
    v.certified_radius = cert;
    if clipped {
        v.verdict = Verdict::Unresolved;
    }
    Ok(v)
}

fn run_level(
    u: &InnerSpec,
    eta: f64,
    policy: &RefinementPolicy,
    level: u32,
    r: f64,
    levels_used: usize,
) -> Result<ConnectivityVerdict> {
    let mut s = Sampled::new(u, level, r, policy.tol)?;
    let zeros = known_zeros(u, r);
    let (mut depth, mut polish) = (0, 0);
    loop {
        let a = assess(&s, eta, policy.kappa);
        let map = label_components(&s.grid, &a.classes, &s.edges, &s.logs, &zeros);
        let topo = topology_checks(&s.grid, &map, &a.classes, &s.edges);
        let caught = captured(&s, &a, &zeros);
        let sel = uncertain(&a);
        let n_sel = sel.iter().filter(|b| **b).count();
        let room = s.grid.len() + 3 * n_sel <= policy.max_cells && n_sel > 0;
        let stop = if a.verdict != Verdict::Unresolved {
            let clean = topo.all_pass() && (!policy.capture_zeros || caught == zeros.len());
            if !clean {
                polish += 1;
            }
            clean || polish > policy.polish_depth || !room
        } else {
            depth += 1;
            depth > policy.max_depth || !room
        };
        if stop {
            let half = assess(&s, eta, 0.5 * policy.kappa).verdict;
            return Ok(ConnectivityVerdict {
                verdict: a.verdict,
                grid_verdict: a.verdict,
                eta,
                clipped: false,
                certified_radius: 1.0,
                truncation: crate::inner::truncation_indices(u, r, policy.tol).unwrap_or_default(),
                margin: Margin {
                    tol: policy.tol,
                    kappa: policy.kappa,
                    max_eval_bound: s.max_bound(),
                },
                grid: summary(&s, &a.classes),
                in_components: a.in_count,
                merged_components: a.merged_count,
                witnesses: witnesses(&s, &a),
                components: map.components,
                topology: topo,
                zeros_known: zeros.len(),
                zeros_captured: caught,
                levels_used,
                half_margin_verdict: half,
                cells: policy.dump_grid.then(|| dump_grid(&s.grid, &a.classes)),
            });
        }
        s.refine(u, &sel, policy.tol)?;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderReport {
    /// Levels in increasing order.
    pub etas: Vec<f64>,
    pub verdicts: Vec<Verdict>,
    pub grid_verdicts: Vec<Verdict>,
    pub components: Vec<usize>,
    pub topology_pass: Vec<bool>,
    /// No connected level is followed by a disconnected one.
    pub monotone: bool,
    /// IN cells at each level are IN at every higher level.
    pub nested: bool,
    pub clipped: bool,
    pub grid: GridSummary,
}

/// Verdicts for several levels on one shared grid. Cells uncertain at any
/// unresolved level are refined jointly.
pub fn ladder_scan(u: &InnerSpec, etas: &[f64], policy: &RefinementPolicy) -> Result<LadderReport> {
    policy.validate()?;
    let mut etas = etas.to_vec();
    for &e in &etas {
        check_eta(e)?;
    }
    etas.sort_by(f64::total_cmp);
    etas.dedup();
    if etas.is_empty() {
        return Err(Error::InvalidArgument("empty eta ladder".into()));
    }
    policy.run(|| ladder_inner(u, &etas, policy))?
}

fn ladder_inner(u: &InnerSpec, etas: &[f64], policy: &RefinementPolicy) -> Result<LadderReport> {
    let (radii, clipped, _) = certified_schedule(u, policy)?;
    let mut out = None;
    for (k, &r) in radii.iter().enumerate() {
        let mut s = Sampled::new(u, policy.base_level + k as u32, r, policy.tol)?;
        let zeros = known_zeros(u, r);
        let (mut depth, mut polish) = (0, 0);
        let report = loop {
            let all: Vec<Assessment> = etas.iter().map(|&e| assess(&s, e, policy.kappa)).collect();
            let topo: Vec<bool> = all
                .iter()
                .map(|a| {
                    let map = label_components(&s.grid, &a.classes, &s.edges, &s.logs, &zeros);
                    topology_checks(&s.grid, &map, &a.classes, &s.edges).all_pass()
                })
                .collect();
            let open: Vec<usize> = (0..etas.len())
                .filter(|&i| all[i].verdict == Verdict::Unresolved)
                .collect();
            let dirty: Vec<usize> = (0..etas.len())
                .filter(|&i| all[i].verdict != Verdict::Unresolved && !topo[i])
                .collect();
            let mut sel = vec![false; s.grid.len()];
            let targets: Vec<usize> = if open.is_empty() { dirty.clone() } else { open.clone() };
            for &i in &targets {
                for (j, c) in all[i].classes.iter().enumerate() {
                    sel[j] |= *c == CellClass::Uncertain;
                }
            }
            let n_sel = sel.iter().filter(|b| **b).count();
            let room = s.grid.len() + 3 * n_sel <= policy.max_cells && n_sel > 0;
            let stop = if open.is_empty() {
                if !dirty.is_empty() {
                    polish += 1;
                }
                dirty.is_empty() || polish > policy.polish_depth || !room
            } else {
                depth += 1;
                depth > policy.max_depth || !room
            };
            if stop {
                let grid_verdicts: Vec<Verdict> = all.iter().map(|a| a.verdict).collect();
                let nested = all.windows(2).all(|w| {
                    w[0].classes
                        .iter()
                        .zip(&w[1].classes)
                        .all(|(a, b)| *a != CellClass::In || *b == CellClass::In)
                });
                let last = all.last().unwrap();
                break LadderReport {
                    etas: etas.to_vec(),
                    verdicts: if clipped {
                        vec![Verdict::Unresolved; etas.len()]
                    } else {
                        grid_verdicts.clone()
                    },
                    monotone: monotone(&grid_verdicts),
                    grid_verdicts,
                    components: all.iter().map(|a| a.in_count).collect(),
                    topology_pass: topo,
                    nested,
                    clipped,
                    grid: summary(&s, &last.classes),
                };
            }
            s.refine(u, &sel, policy.tol)?;
        };
        let resolved = report.grid_verdicts.iter().all(|v| *v != Verdict::Unresolved);
        out = Some(report);
        if resolved {
            break;
        }
    }
    Ok(out.expect("schedule is never empty"))
}

fn monotone(v: &[Verdict]) -> bool {
    let mut seen_connected = false;
    for x in v {
        match x {
            Verdict::Connected => seen_connected = true,
            Verdict::Disconnected if seen_connected => return false,
            _ => {}
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdOutcome {
    /// The verdict flips inside `[lo, hi]`.
    Bracket,
    /// Connected at every probed level.
    AllConnected,
    /// Not connected at the top of the search range.
    NotConnectedAtTop,
    /// A probe inside the bracket stayed unresolved.
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub outcome: ThresholdOutcome,
    pub lo: f64,
    pub hi: f64,
    pub probes: Vec<(f64, Verdict)>,
}

/// Bisection for the level where `Ω_u(η)` becomes connected, between `lo` and
/// `hi`. Connectivity at `η` implies connectivity above it, so each probe
/// halves the bracket.
pub fn threshold_search(
    u: &InnerSpec,
    lo: f64,
    hi: f64,
    tol_eta: f64,
    policy: &RefinementPolicy,
) -> Result<ThresholdReport> {
    check_eta(lo)?;
    check_eta(hi)?;
    if !(lo < hi) || !(tol_eta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need lo < hi and tol_eta > 0, got [{lo}, {hi}] and {tol_eta}"
        )));
    }
    let mut probes = Vec::new();
    let mut probe = |eta: f64| -> Result<Verdict> {
        let v = is_connected(u, eta, policy)?.verdict;
        probes.push((eta, v));
        Ok(v)
    };
    if probe(hi)? != Verdict::Connected {
        return Ok(ThresholdReport {
            outcome: ThresholdOutcome::NotConnectedAtTop,
            lo,
            hi,
            probes,
        });
    }
    let (mut a, mut b) = (lo, hi);
    match probe(lo)? {
        Verdict::Connected => {
            return Ok(ThresholdReport {
                outcome: ThresholdOutcome::AllConnected,
                lo,
                hi,
                probes,
            })
        }
        Verdict::Unresolved => {
            return Ok(ThresholdReport {
                outcome: ThresholdOutcome::Unresolved,
                lo,
                hi,
                probes,
            })
        }
        Verdict::Disconnected => {}
    }
    while b - a > tol_eta {
        let mid = 0.5 * (a + b);
        match probe(mid)? {
            Verdict::Connected => b = mid,
            Verdict::Disconnected => a = mid,
            Verdict::Unresolved => {
                return Ok(ThresholdReport {
                    outcome: ThresholdOutcome::Unresolved,
                    lo: a,
                    hi: b,
                    probes,
                })
            }
        }
    }
    Ok(ThresholdReport {
        outcome: ThresholdOutcome::Bracket,
        lo: a,
        hi: b,
        probes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoffmanCheck {
    pub in_cells: usize,
    /// IN cells not covered by any single disk.
    pub uncovered: usize,
    pub disks_disjoint: bool,
}

/// Checks that every IN cell lies in one of the pseudohyperbolic disks of
/// radius `eta` around `zeros`, and that those disks are pairwise disjoint.
pub fn hoffman_inclusion(
    zeros: &[DiskPoint],
    eta: f64,
    grid: &DiskGrid,
    classes: &[CellClass],
) -> Result<HoffmanCheck> {
    let disks: Vec<EuclideanDisk> = zeros
        .iter()
        .map(|z| pseudo_disk_to_euclidean(*z, eta))
        .collect::<Result<_>>()?;
    let mut disjoint = true;
    for i in 0..disks.len() {
        for j in i + 1..disks.len() {
            disjoint &= disks[i].is_disjoint_from(&disks[j]);
        }
    }
    let mut in_cells = 0;
    let mut uncovered = 0;
    for (i, c) in classes.iter().enumerate() {
        if *c != CellClass::In {
            continue;
        }
        in_cells += 1;
        let g = grid.geometry(i);
        let inside = disks
            .iter()
            .any(|d| (g.center - d.center).norm() + g.radius <= d.radius * (1.0 + 1e-12));
        if !inside {
            uncovered += 1;
        }
    }
    Ok(HoffmanCheck {
        in_cells,
        uncovered,
        disks_disjoint: disjoint,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> RefinementPolicy {
        RefinementPolicy {
            levels: 2,
            r_max: 0.99,
            ..RefinementPolicy::default()
        }
    }

    #[test]
    fn schedule_defaults() {
        let s = RefinementPolicy::default().schedule();
        let want = [0.9, 0.99, 0.999, 0.9999];
        for (a, b) in s.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn two_zeros_split_at_small_levels() {
        let b = InnerSpec::blaschke(vec![DiskPoint::real(0.5).unwrap(), DiskPoint::real(-0.5).unwrap()]);
        let v = is_connected(&b, 0.05, &quick()).unwrap();
        assert_eq!(v.verdict, Verdict::Disconnected);
        assert_eq!(v.components.len(), 2);
        assert!(v.components.iter().all(|c| c.contains_zero && c.zeros == 1));
        assert!(v.topology.all_pass());
        assert_eq!(v.half_margin_verdict, Verdict::Disconnected);
        let v = is_connected(&b, 0.5, &quick()).unwrap();
        assert_eq!(v.verdict, Verdict::Connected);
    }

    #[test]
    fn atomic_single_rim_component() {
        let v = is_connected(&InnerSpec::s(), 0.5, &quick()).unwrap();
        assert_eq!(v.verdict, Verdict::Connected);
        assert_eq!(v.components.len(), 1);
        assert!(v.components[0].touches_rim);
        assert_eq!(v.topology.simply_connected, vec![true]);
    }

    #[test]
    fn ladder_is_monotone_and_nested() {
        let b = InnerSpec::blaschke(vec![DiskPoint::real(0.5).unwrap(), DiskPoint::real(-0.5).unwrap()]);
        let r = ladder_scan(&b, &[0.6, 0.1, 0.05, 0.4], &quick()).unwrap();
        assert_eq!(r.etas, vec![0.05, 0.1, 0.4, 0.6]);
        assert_eq!(r.grid_verdicts[0], Verdict::Disconnected);
        assert_eq!(*r.grid_verdicts.last().unwrap(), Verdict::Connected);
        assert!(r.monotone && r.nested);
    }

    #[test]
    fn monotone_flag() {
        use Verdict::*;
        assert!(monotone(&[Disconnected, Unresolved, Connected, Connected]));
        assert!(!monotone(&[Connected, Disconnected]));
    }
}
