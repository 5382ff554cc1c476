//! Acceptance criteria 1-8. Prints one PASS/FAIL line per criterion and
//! exits nonzero when any criterion fails.

use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use inner_sublevel::criterion::{aleksandrov_ratio, criterion_scan, CriterionConfig};
use inner_sublevel::geometry::{horodisk, BoundaryPoint, DiskPoint};
use inner_sublevel::inner::InnerSpec;
use inner_sublevel::sequence::{
    consecutive_rho, hoffman_constants, interpolation_constant, vhn_ratio, ZeroSequence,
};
use inner_sublevel::sublevel::{
    classify_cells, hoffman_inclusion, is_connected, threshold_search, CellClass, DiskGrid,
    RefinementPolicy, ThresholdOutcome, Verdict,
};
use inner_sublevel::suite::{
    capture_policy, cmd_paper_suite, run_suite, stock_experiments, thin_epsilon, SuiteOptions,
};

type Outcome = Result<String, String>;

fn check(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn closed_forms() -> Outcome {
    let hyp = ZeroSequence::hyperbolic_orbit();
    let mut hyp_dev = 0.0f64;
    for j in 1..=30 {
        hyp_dev = hyp_dev.max((consecutive_rho(&hyp, j).map_err(|e| e.to_string())? - 0.5).abs());
    }
    let par = ZeroSequence::parabolic_orbit();
    let (mut rho_dev, mut circle_dev) = (0.0f64, 0.0f64);
    for n in 1..par.budget() {
        rho_dev = rho_dev.max((consecutive_rho(&par, n).unwrap() - 0.5f64.sqrt()).abs());
        let z = par.point(n).unwrap().to_complex();
        circle_dev = circle_dev.max(((z.re - 0.5).hypot(z.im) - 0.5).abs());
    }
    let vhn = vhn_ratio(&ZeroSequence::geometric(), 64).unwrap().sup;
    let il = ZeroSequence::interleaved_thin();
    let mut il_dev = 0.0f64;
    for m in 2..=30usize {
        let want = 1.0 / (3.0 - 2.0 * (m as f64).powi(-(m as i32)));
        il_dev = il_dev.max((consecutive_rho(&il, 2 * m - 3).unwrap() - want).abs());
    }
    check(
        hyp_dev <= 1e-13 && rho_dev <= 1e-13 && circle_dev <= 1e-14 && vhn == 0.5 && il_dev <= 1e-6,
        format!(
            "hyperbolic dev {hyp_dev:.1e}, parabolic rho dev {rho_dev:.1e} and circle dev {circle_dev:.1e} (n < {}), geometric VHN {vhn}, interleaved dev {il_dev:.1e}",
            par.budget()
        ),
    )
}

fn horodisk_equivalence() -> Outcome {
    let policy = RefinementPolicy::default();
    let mut parts = Vec::new();
    let mut ok = true;
    for eta in [(-1.0f64).exp(), 0.5, (-3.0f64).exp()] {
        let grid = DiskGrid::new(3, 0.999).map_err(|e| e.to_string())?;
        let classes = classify_cells(&InnerSpec::s(), eta, &grid, 1e-9).map_err(|e| e.to_string())?;
        let disk = horodisk(eta).unwrap();
        let (mut agree, mut certified) = (0usize, 0usize);
        for (i, c) in classes.iter().enumerate() {
            if *c == CellClass::Uncertain {
                continue;
            }
            certified += 1;
            agree += ((*c == CellClass::In) == disk.contains(grid.geometry(i).center)) as usize;
        }
        let frac = agree as f64 / certified as f64;
        let v = is_connected(&InnerSpec::s(), eta, &policy).map_err(|e| e.to_string())?;
        ok &= frac >= 0.999 && v.verdict == Verdict::Connected;
        parts.push(format!("eta {eta:.4}: {agree}/{certified} agree, {:?}", v.verdict));
    }
    check(ok, parts.join("; "))
}

fn squared_atomic_flip() -> Outcome {
    let policy = RefinementPolicy::default();
    let u = InnerSpec::compose(InnerSpec::s(), InnerSpec::monomial(2));
    let low = is_connected(&u, (-2.0f64).exp(), &policy).map_err(|e| e.to_string())?;
    let symmetric = match low.witnesses.as_slice() {
        [a, b] => {
            let (a, b) = (a.center, b.center);
            // z -> -z, possibly composed with the conjugation symmetry
            let minus = (a[0] + b[0]).abs() < 1e-12 && (a[1] + b[1]).abs() < 1e-12;
            let mirror = (a[0] + b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12;
            (minus || mirror) && a[0].signum() != b[0].signum()
        }
        _ => false,
    };
    let high = is_connected(&u, 0.5, &policy).map_err(|e| e.to_string())?;
    let t = threshold_search(&u, 0.3, 0.45, 0.005, &policy).map_err(|e| e.to_string())?;
    let bracket = t.outcome == ThresholdOutcome::Bracket && t.lo >= 0.3 && t.hi <= 0.45;
    check(
        low.verdict == Verdict::Disconnected
            && symmetric
            && high.verdict == Verdict::Connected
            && bracket,
        format!(
            "e^-2: {:?} with {} symmetric witnesses: {symmetric}; 0.5: {:?}; threshold {:?} [{:.4}, {:.4}]",
            low.verdict,
            low.witnesses.len(),
            high.verdict,
            t.outcome,
            t.lo,
            t.hi
        ),
    )
}

fn aleksandrov_pin() -> Outcome {
    let s = InnerSpec::s();
    let mut dev = 0.0f64;
    for k in 1..=1000 {
        let t = 2.0 * std::f64::consts::PI * k as f64 / 1001.0;
        let r = aleksandrov_ratio(&s, BoundaryPoint::from_angle(t)).map_err(|e| e.to_string())?;
        dev = dev.max((r - 1.0).abs());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let config = CriterionConfig::default();
    let mut worst_probe = 0.0f64;
    let mut stable = true;
    let mut sups = Vec::new();
    for _ in 0..5 {
        let deg = rng.gen_range(1..=4);
        let zeros: Vec<DiskPoint> = (0..deg)
            .map(|_| {
                DiskPoint::from_polar(0.9 * rng.gen::<f64>(), rng.gen_range(-3.14..3.14)).unwrap()
            })
            .collect();
        let u = InnerSpec::compose(InnerSpec::s(), InnerSpec::blaschke(zeros));
        let r = criterion_scan(&u, &config).map_err(|e| e.to_string())?;
        stable &= r.sup_ratio.is_finite() && !r.blowup;
        for p in &r.radial_probes {
            worst_probe = worst_probe.max(p.min_modulus);
        }
        sups.push(format!("{:.3}", r.sup_ratio));
    }
    check(
        dev <= 1e-9 && stable && worst_probe < 0.5,
        format!(
            "S ratio dev {dev:.1e} over 1000 points; S(B) sups [{}] stable: {stable}; largest probe {worst_probe:.2e}",
            sups.join(", ")
        ),
    )
}

fn hoffman_at_truncation() -> Outcome {
    let geo = ZeroSequence::geometric().with_budget(20).unwrap();
    let zeros: Vec<DiskPoint> = geo
        .points(20)
        .unwrap()
        .iter()
        .map(|g| DiskPoint::from_complex(g.to_complex()).unwrap())
        .collect();
    let b = InnerSpec::blaschke(zeros.clone());
    let delta = interpolation_constant(&geo, 20).map_err(|e| e.to_string())?;
    let h = hoffman_constants(delta, None).map_err(|e| e.to_string())?;
    let mut grid = DiskGrid::new(1, 0.9999).unwrap();
    let mut classes = classify_cells(&b, h.epsilon, &grid, 1e-9).map_err(|e| e.to_string())?;
    // resolve the level curve around each zero by bisecting undecided cells
    let mut rounds = 0;
    while rounds < 40 && grid.len() < 2_000_000 {
        let pick: Vec<bool> = classes.iter().map(|c| *c == CellClass::Uncertain).collect();
        if !pick.contains(&true) {
            break;
        }
        grid.refine(&pick);
        classes = classify_cells(&b, h.epsilon, &grid, 1e-9).map_err(|e| e.to_string())?;
        rounds += 1;
    }
    let inc = hoffman_inclusion(&zeros, h.eta, &grid, &classes).map_err(|e| e.to_string())?;
    let sigma = (1..20)
        .map(|n| consecutive_rho(&geo, n).unwrap())
        .fold(0.0, f64::max)
        + 0.1;
    let v = is_connected(&b, sigma, &RefinementPolicy::default()).map_err(|e| e.to_string())?;
    check(
        inc.in_cells > 0 && inc.uncovered == 0 && inc.disks_disjoint && v.verdict == Verdict::Connected,
        format!(
            "delta {delta:.4}, eta {:.4}, eps {:.3e}: {} IN cells after {rounds} refinements ({} cells), {} uncovered, disjoint {}; sigma {sigma:.3}: {:?}",
            h.eta, h.epsilon, inc.in_cells, grid.len(), inc.uncovered, inc.disks_disjoint, v.verdict
        ),
    )
}

fn thin_counterexample() -> Outcome {
    let eps = thin_epsilon().map_err(|e| e.to_string())?;
    let ex = stock_experiments()
        .map_err(|e| e.to_string())?
        .into_iter()
        .find(|e| e.name == "thin")
        .unwrap();
    let v = is_connected(&ex.spec, eps, &capture_policy()).map_err(|e| e.to_string())?;
    let zeros: Vec<usize> = v.components.iter().map(|c| c.zeros).collect();
    check(
        v.verdict == Verdict::Disconnected && zeros.len() == 6 && zeros.iter().all(|z| *z == 1),
        format!("eps {eps:.5}: {:?}, zeros per component {zeros:?}", v.verdict),
    )
}

fn topology_suite() -> Outcome {
    let (_, reports, summary) = run_suite(&SuiteOptions::default()).map_err(|e| e.to_string())?;
    let mut bad = Vec::new();
    for (e, r) in summary.experiments.iter().zip(&reports) {
        let Ok(r) = r else {
            bad.push(format!("{}: {}", e.name, e.error.clone().unwrap_or_default()));
            continue;
        };
        let ladder = r.ladder.as_ref().unwrap();
        let per_verdict = r.verdicts.iter().all(|v| v.verdict.topology.all_pass());
        if !(per_verdict && ladder.topology_pass.iter().all(|b| *b)) {
            bad.push(format!("{}: topology", e.name));
        }
        if !ladder.monotone {
            bad.push(format!("{}: ladder {:?}", e.name, ladder.verdicts));
        }
    }
    let n = summary.experiments.len();
    check(bad.is_empty(), if bad.is_empty() { format!("{n} experiments pass") } else { bad.join("; ") })
}

fn strip_timing(v: &mut serde_json::Value) {
    if let Some(m) = v.as_object_mut() {
        m.remove("timing");
    }
}

fn read_dir_stripped(dir: &Path) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            let text = std::fs::read_to_string(&p).unwrap();
            let text = if name.ends_with(".json") && name != "summary.json" {
                let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
                strip_timing(&mut v);
                serde_json::to_string_pretty(&v).unwrap()
            } else {
                text
            };
            (name, text)
        })
        .collect();
    out.sort();
    out
}

fn determinism() -> Outcome {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let one = cmd_paper_suite(a.path(), &SuiteOptions { workers: Some(1) }).map_err(|e| e.to_string())?;
    let eight = cmd_paper_suite(b.path(), &SuiteOptions { workers: Some(8) }).map_err(|e| e.to_string())?;
    let c = tempfile::tempdir().unwrap();
    cmd_paper_suite(c.path(), &SuiteOptions { workers: Some(1) }).map_err(|e| e.to_string())?;
    let (ra, rc) = (read_dir_stripped(a.path()), read_dir_stripped(c.path()));
    let identical = ra == rc;
    let differing: Vec<&str> = ra
        .iter()
        .zip(&rc)
        .filter(|(x, y)| x != y)
        .map(|(x, _)| x.0.as_str())
        .collect();
    let same_verdicts = one
        .experiments
        .iter()
        .zip(&eight.experiments)
        .all(|(x, y)| x.verdicts == y.verdicts && x.ladder_monotone == y.ladder_monotone);
    let rb = read_dir_stripped(b.path());
    let ladders_match = ra.iter().zip(&rb).all(|((n, x), (_, y))| {
        if n.starts_with("summary") {
            return true;
        }
        let (x, y): (serde_json::Value, serde_json::Value) =
            (serde_json::from_str(x).unwrap(), serde_json::from_str(y).unwrap());
        x["ladder"]["verdicts"] == y["ladder"]["verdicts"] && x["threshold"] == y["threshold"]
    });
    check(
        identical && same_verdicts && ladders_match,
        format!(
            "{} files byte-identical modulo timing: {identical} {differing:?}; 1 vs 8 workers agree: {}",
            ra.len(),
            same_verdicts && ladders_match
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Option<f64>); 8] = [
        ("closed-form constants", closed_forms, Some(1.0)),
        ("horodisk equivalence", horodisk_equivalence, Some(30.0)),
        ("S(z^2) flip", squared_atomic_flip, Some(60.0)),
        ("boundary ratio pin", aleksandrov_pin, Some(10.0)),
        ("Hoffman inclusion at truncation", hoffman_at_truncation, Some(60.0)),
        ("thin counterexample", thin_counterexample, Some(60.0)),
        ("topology invariants", topology_suite, None),
        ("determinism", determinism, None),
    ];
    let mut failed = 0;
    for (k, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let secs = start.elapsed().as_secs_f64();
        let slow = limit.is_some_and(|l| secs > l);
        let (pass, detail) = match result {
            Ok(d) if !slow => (true, d),
            Ok(d) => (false, format!("{d}; over the {}s limit", limit.unwrap())),
            Err(d) => (false, d),
        };
        failed += !pass as usize;
        println!(
            "criterion {}: {} {name} [{secs:.2}s] {detail}",
            k + 1,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
