use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::InnerSpec;
use crate::error::{Error, Result};
use crate::geometry::{one_minus_mod_sq, pseudo_dist_c, DiskPoint, GapPoint};
use crate::sequence::ZeroSequence;

/// A value together with a guaranteed bound on `|computed - true|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: Complex64,
    pub truncation_bound: f64,
}

/// `log|u(z)|` with a guaranteed bound on the absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogModulus {
    pub value: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Approx {
    pub value: Complex64,
    pub err: f64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct LogApprox {
    pub log: f64,
    pub err: f64,
}

const RETRIES: usize = 8;

/// Evaluates `u(z)` so that the reported truncation bound is at most `tol`.
pub fn eval(u: &InnerSpec, z: DiskPoint, tol: f64) -> Result<EvalResult> {
    check_tol(tol)?;
    let mut leaf = tol;
    let mut last = f64::INFINITY;
    for _ in 0..RETRIES {
        let a = u.value_at(z.to_complex(), leaf)?;
        if a.err <= tol {
            return Ok(EvalResult {
                value: a.value,
                truncation_bound: a.err,
            });
        }
        last = a.err;
        leaf = tighten(leaf, a.err, tol);
    }
    Err(Error::PrecisionUnattainable { bound: last, tol })
}

/// `log|u(z)|` with certified absolute error at most `tol`.
pub fn eval_log_modulus(u: &InnerSpec, z: DiskPoint, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let mut leaf = tol;
    let mut last = f64::INFINITY;
    for _ in 0..RETRIES {
        let a = eval_log_modulus_bounded(u, z, leaf)?;
        if a.bound <= tol {
            return Ok(a.value);
        }
        last = a.bound;
        leaf = tighten(leaf, a.bound, tol);
    }
    Err(Error::PrecisionUnattainable { bound: last, tol })
}

/// One pass of `log|u(z)|` with every infinite leaf truncated to `leaf_tol`;
/// the returned bound accounts for propagation through the tree and may
/// exceed `leaf_tol`.
pub fn eval_log_modulus_bounded(u: &InnerSpec, z: DiskPoint, leaf_tol: f64) -> Result<LogModulus> {
    check_tol(leaf_tol)?;
    let a = u.log_at(z.to_complex(), leaf_tol)?;
    Ok(LogModulus {
        value: a.log.min(0.0),
        bound: a.err,
    })
}

/// Largest radius on which every infinite leaf meets `tol` in log scale within
/// its index budget. Equals 1 when the spec has no infinite leaf.
pub fn certified_radius(u: &InnerSpec, tol: f64) -> f64 {
    u.leaves()
        .filter_map(|l| match l {
            InnerSpec::InfiniteBlaschke { sequence } => Some(leaf_radius(sequence, tol)),
            _ => None,
        })
        .fold(1.0, f64::min)
}

fn leaf_radius(seq: &ZeroSequence, tol: f64) -> f64 {
    let n = seq.budget();
    let tail = seq.tail_gap_bound(n);
    let r_tail = if tail == 0.0 {
        1.0
    } else {
        let c = tol / (4.0 * tail);
        ((c - 1.0) / (c + 1.0)).max(0.0)
    };
    r_tail.min(1.0 - 2.0 * seq.max_tail_gap(n)).max(0.0)
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("tol = {tol} must be positive")))
    }
}

fn tighten(leaf: f64, got: f64, tol: f64) -> f64 {
    if got.is_finite() && got > 0.0 {
        (leaf * 0.5 * tol / got).min(leaf * 0.5)
    } else {
        leaf * 1e-3
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Value,
    Log,
}

/// Smallest truncation meeting `tol` at radius `r`, with the tail bound it
/// achieves (multiplicative value error in value mode, additive log error in
/// log mode).
fn truncation(seq: &ZeroSequence, r: f64, tol: f64, mode: Mode) -> Result<(usize, f64)> {
    let k = (1.0 + r) / (1.0 - r);
    let bound = |n: usize| -> Option<f64> {
        let tail = seq.tail_gap_bound(n);
        match mode {
            Mode::Value => {
                let t = k * tail;
                (t <= tol.ln_1p()).then(|| t.exp_m1())
            }
            Mode::Log => {
                // the per-factor estimate needs |z - a| >= (1 - r) / 2 on the tail
                let t = 4.0 * k * tail;
                (t <= tol && seq.max_tail_gap(n) <= 0.5 * (1.0 - r)).then_some(t)
            }
        }
    };
    let budget = seq.budget();
    let Some(at_budget) = bound(budget) else {
        return Err(Error::TruncationBudgetExceeded {
            radius: r,
            budget,
            tol,
        });
    };
    let (mut lo, mut hi, mut best) = (1usize, budget, at_budget);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match bound(mid) {
            Some(b) => {
                hi = mid;
                best = b;
            }
            None => lo = mid + 1,
        }
    }
    Ok((hi, best))
}

/// Truncation indices of the infinite leaves at radius `r` for log-scale
/// tolerance `tol`, in leaf order.
pub(crate) fn truncation_indices(u: &InnerSpec, r: f64, tol: f64) -> Result<Vec<usize>> {
    u.leaves()
        .filter_map(|l| match l {
            InnerSpec::InfiniteBlaschke { sequence } => {
                Some(truncation(sequence, r, tol, Mode::Log).map(|(n, _)| n))
            }
            _ => None,
        })
        .collect()
}

/// `1 - b(z)` for the factor with zero `a` normalized positive at 0:
/// `g (1 + u) / (1 - (1 - g) u)` with `u = e^{-iθ} z`.
fn one_minus_factor(a: GapPoint, z: Complex64) -> Complex64 {
    let u = Complex64::from_polar(1.0, -a.angle) * z;
    a.gap * (1.0 + u) / (1.0 - (1.0 - a.gap) * u)
}

/// `log|(z - a) / (1 - conj(a) z)| = -½ log(1 + (1-|a|²)(1-|z|²) / |z - a|²)`.
fn log_factor(one_minus_a2: f64, a: Complex64, z: Complex64, one_minus_z2: f64) -> f64 {
    let d2 = (z - a).norm_sqr();
    -0.5 * (one_minus_a2 * one_minus_z2 / d2).ln_1p()
}

/// Upper bound on `ρ(v, w)` over all `w` with `|w - v| <= e`.
fn rho_radius(v: Complex64, e: f64) -> f64 {
    if e == 0.0 {
        return 0.0;
    }
    let m = v.norm();
    let den = 1.0 - m * (m + e);
    if den <= 0.0 {
        1.0
    } else {
        (e / den).min(1.0)
    }
}

/// Worst change of `log|p|` when `p` moves pseudohyperbolic distance `d`,
/// given `log|p| >= log_low`.
fn log_perturbation(log_low: f64, d: f64) -> f64 {
    if d == 0.0 {
        return 0.0;
    }
    let m = log_low.exp();
    if m <= d {
        return f64::INFINITY;
    }
    m.ln() - ((m - d) / (1.0 - m * d)).ln()
}

/// Pulls a computed inner value back into the open disk, charging the move
/// to its error.
fn clamp_to_disk(a: Approx) -> Approx {
    let m = a.value.norm();
    let cap = 1.0 - f64::EPSILON;
    if m <= cap {
        a
    } else {
        Approx {
            value: a.value * (cap / m),
            err: a.err + (m - cap),
        }
    }
}

fn frostman(a: Complex64, w: Complex64) -> Complex64 {
    (a - w) / (1.0 - a.conj() * w)
}

impl InnerSpec {
    pub(crate) fn value_at(&self, z: Complex64, leaf_tol: f64) -> Result<Approx> {
        let exact = |value| Ok(Approx { value, err: 0.0 });
        match self {
            InnerSpec::FiniteBlaschke { zeros, unimodular } => {
                let mut v = unimodular.to_complex();
                for a in zeros {
                    let a = a.to_complex();
                    v *= (z - a) / (1.0 - a.conj() * z);
                }
                exact(v)
            }
            InnerSpec::Singular { atoms } => {
                let mut g = Complex64::new(0.0, 0.0);
                for at in atoms {
                    let p = at.point.to_complex();
                    g -= at.mass * (p + z) / (p - z);
                }
                exact(g.exp())
            }
            InnerSpec::InfiniteBlaschke { sequence } => {
                let r = interior_radius(z)?;
                let (n, bound) = truncation(sequence, r, leaf_tol, Mode::Value)?;
                let mut v = Complex64::new(1.0, 0.0);
                for k in 1..=n {
                    let a = sequence.point(k)?;
                    // a zero at the origin contributes the factor z
                    v *= if a.gap == 1.0 { z } else { 1.0 - one_minus_factor(a, z) };
                }
                Ok(Approx {
                    value: v,
                    err: bound,
                })
            }
            InnerSpec::Product { factors } => {
                let mut v = Complex64::new(1.0, 0.0);
                let mut growth = 1.0;
                for f in factors {
                    let a = f.value_at(z, leaf_tol)?;
                    v *= a.value;
                    growth *= 1.0 + a.err;
                }
                Ok(Approx {
                    value: v,
                    err: growth - 1.0,
                })
            }
            InnerSpec::Compose { outer, inner } => {
                let w = clamp_to_disk(inner.value_at(z, leaf_tol)?);
                let o = outer.value_at(w.value, leaf_tol)?;
                let d = rho_radius(w.value, w.err);
                Ok(Approx {
                    value: o.value,
                    err: o.err + (2.0 * d).min(2.0),
                })
            }
            InnerSpec::FrostmanShift { base, a } => {
                let w = clamp_to_disk(base.value_at(z, leaf_tol)?);
                let d = rho_radius(w.value, w.err);
                Ok(Approx {
                    value: frostman(a.to_complex(), w.value),
                    err: 2.0 * d,
                })
            }
        }
    }

    pub(crate) fn log_at(&self, z: Complex64, leaf_tol: f64) -> Result<LogApprox> {
        let exact = |log| Ok(LogApprox { log, err: 0.0 });
        match self {
            InnerSpec::FiniteBlaschke { zeros, .. } => {
                let q = one_minus_mod_sq(z);
                exact(
                    zeros
                        .iter()
                        .map(|a| log_factor(a.one_minus_mod_sq(), a.to_complex(), z, q))
                        .sum(),
                )
            }
            InnerSpec::Singular { atoms } => {
                let q = one_minus_mod_sq(z);
                exact(
                    -atoms
                        .iter()
                        .map(|at| at.mass * q / (at.point.to_complex() - z).norm_sqr())
                        .sum::<f64>(),
                )
            }
            InnerSpec::InfiniteBlaschke { sequence } => {
                let r = interior_radius(z)?;
                let (n, bound) = truncation(sequence, r, leaf_tol, Mode::Log)?;
                let q = one_minus_mod_sq(z);
                let mut s = 0.0;
                for k in 1..=n {
                    let a = sequence.point(k)?;
                    s += log_factor(a.one_minus_mod_sq(), a.to_complex(), z, q);
                }
                Ok(LogApprox { log: s, err: bound })
            }
            InnerSpec::Product { factors } => {
                let (mut log, mut err) = (0.0, 0.0);
                for f in factors {
                    let a = f.log_at(z, leaf_tol)?;
                    log += a.log;
                    err += a.err;
                }
                Ok(LogApprox { log, err })
            }
            InnerSpec::Compose { outer, inner } => {
                let w = clamp_to_disk(inner.value_at(z, leaf_tol)?);
                let o = outer.log_at(w.value, leaf_tol)?;
                let d = rho_radius(w.value, w.err);
                Ok(LogApprox {
                    log: o.log,
                    err: o.err + log_perturbation(o.log - o.err, d),
                })
            }
            InnerSpec::FrostmanShift { base, a } => {
                let w = clamp_to_disk(base.value_at(z, leaf_tol)?);
                let log = pseudo_dist_c(a.to_complex(), w.value).ln();
                let d = rho_radius(w.value, w.err);
                Ok(LogApprox {
                    log,
                    err: log_perturbation(log, d),
                })
            }
        }
    }
}

fn interior_radius(z: Complex64) -> Result<f64> {
    let r = z.norm();
    if r < 1.0 {
        Ok(r)
    } else {
        Err(Error::NotInterior { re: z.re, im: z.im })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{pseudo_dist, BoundaryPoint};
    use crate::inner::Atom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dp(re: f64, im: f64) -> DiskPoint {
        DiskPoint::new(re, im).unwrap()
    }

    #[test]
    fn atomic_values() {
        let s = InnerSpec::s();
        let v = eval(&s, DiskPoint::ORIGIN, 1e-12).unwrap();
        assert!((v.value.re - (-1f64).exp()).abs() < 1e-15 && v.truncation_bound == 0.0);
        let v = eval(&s, dp(0.5, 0.0), 1e-12).unwrap();
        assert!((v.value.re - (-3f64).exp()).abs() < 1e-15);
        assert_eq!(eval_log_modulus(&s, DiskPoint::ORIGIN, 1e-9).unwrap(), -1.0);
        for x in [-0.9, -0.3, 0.2, 0.7, 0.99] {
            let l = eval_log_modulus(&s, dp(x, 0.0), 1e-9).unwrap();
            assert!((l + (1.0 + x) / (1.0 - x)).abs() < 1e-12 * (1.0 + l.abs()));
        }
        let ss = InnerSpec::multiply(vec![s.clone(), s.clone()]);
        assert!((eval_log_modulus(&ss, DiskPoint::ORIGIN, 1e-9).unwrap() + 2.0).abs() < 1e-15);
        let s2 = InnerSpec::atomic(BoundaryPoint::ONE, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let z = DiskPoint::from_polar(rng.gen::<f64>().sqrt() * 0.99, rng.gen::<f64>() * 6.3)
                .unwrap();
            let a = eval(&ss, z, 1e-9).unwrap().value;
            let b = eval(&s2, z, 1e-9).unwrap().value;
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn blaschke_vanishes_at_zero() {
        let a = dp(0.3, -0.4);
        let b = InnerSpec::blaschke(vec![a, dp(-0.5, 0.1)]);
        assert_eq!(eval(&b, a, 1e-9).unwrap().value.norm(), 0.0);
        assert_eq!(eval_log_modulus(&b, a, 1e-9).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn infinite_product_against_longer_truncation() {
        let seq = ZeroSequence::geometric();
        let u = InnerSpec::infinite(seq.clone());
        let tol = 1e-10;
        for z in [DiskPoint::ORIGIN, dp(0.6, 0.3), dp(-0.9, 0.0), dp(0.95, 0.0)] {
            let r = z.modulus();
            let (n, _) = truncation(&seq, r, tol, Mode::Value).unwrap();
            let got = eval(&u, z, tol).unwrap();
            assert!(got.truncation_bound <= tol);
            // oracle: 4N factors in the textbook form (|a|/a)(a - z)/(1 - conj(a) z)
            let zc = z.to_complex();
            let mut oracle = Complex64::new(1.0, 0.0);
            for k in 1..=(4 * n).min(seq.budget()) {
                let a = 1.0 - 0.5f64.powi(k as i32);
                oracle *= (a - zc) / (1.0 - a * zc);
            }
            assert!((got.value - oracle).norm() <= tol + 1e-14, "{z:?}");
        }
        // modulus at the origin is the product of the zeros' moduli
        let l = eval_log_modulus(&u, DiskPoint::ORIGIN, 1e-12).unwrap();
        let oracle: f64 = (1..=64).map(|k| (1.0 - 0.5f64.powi(k)).ln()).sum();
        assert!((l - oracle).abs() < 1e-12);
    }

    #[test]
    fn truncation_budget_and_radius() {
        let u = InnerSpec::infinite(ZeroSequence::power(2.0).unwrap());
        let r = certified_radius(&u, 1e-2);
        assert!(r > 0.9 && r < 0.95, "{r}");
        assert!(eval_log_modulus(&u, dp(0.5, 0.0), 1e-2).is_ok());
        assert!(matches!(
            eval_log_modulus(&u, dp(0.97, 0.0), 1e-2),
            Err(Error::TruncationBudgetExceeded { .. })
        ));
        assert_eq!(certified_radius(&InnerSpec::s(), 1e-9), 1.0);
        let th = InnerSpec::infinite(ZeroSequence::thin());
        assert!(certified_radius(&th, 1e-9) > 0.999_999);
    }

    #[test]
    fn compose_and_frostman() {
        let s = InnerSpec::s();
        let sz2 = InnerSpec::compose(s.clone(), InnerSpec::monomial(2));
        for t in [0.1, 0.5, 0.9] {
            let l = eval_log_modulus(&sz2, dp(0.0, t), 1e-9).unwrap();
            assert!((l + (1.0 - t * t) / (1.0 + t * t)).abs() < 1e-13);
        }
        let u = InnerSpec::multiply(vec![s.clone(), InnerSpec::blaschke(vec![dp(0.2, 0.3)])]);
        let m0 = u.clone().frostman_shift(DiskPoint::ORIGIN);
        let a = dp(0.4, -0.2);
        let ma = u.clone().frostman_shift(a);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let z = DiskPoint::from_polar(rng.gen::<f64>() * 0.99, rng.gen::<f64>() * 6.3)
                .unwrap();
            let uz = eval(&u, z, 1e-9).unwrap().value;
            let m = eval(&m0, z, 1e-9).unwrap().value;
            assert!((m + uz).norm() < 1e-15);
            let shifted = eval(&ma, z, 1e-9).unwrap().value.norm();
            let w = DiskPoint::from_complex(uz).unwrap();
            assert!((shifted - pseudo_dist(a, w)).abs() < 1e-12);
            let l = eval_log_modulus(&ma, z, 1e-9).unwrap();
            assert!((l - shifted.ln()).abs() < 1e-9 * (1.0 + l.abs()));
        }
    }

    #[test]
    fn compose_with_infinite_inner_propagates_bounds() {
        let b = InnerSpec::infinite(ZeroSequence::hyperbolic_orbit());
        let u = InnerSpec::compose(InnerSpec::s(), b.clone());
        let z = dp(0.3, 0.5);
        let tol = 1e-8;
        let r = eval(&u, z, tol).unwrap();
        assert!(r.truncation_bound <= tol && r.truncation_bound > 0.0);
        let inner = eval(&b, z, 1e-14).unwrap().value;
        let direct = (-(1.0 + inner) / (1.0 - inner)).exp();
        assert!((r.value - direct).norm() <= tol);
        let l = eval_log_modulus(&u, z, tol).unwrap();
        assert!((l - direct.norm().ln()).abs() <= tol + 1e-12);
    }

    #[test]
    fn singular_atoms_log_matches_value() {
        let u = InnerSpec::singular(vec![
            Atom::new(BoundaryPoint::from_angle(1.0), 0.5).unwrap(),
            Atom::new(BoundaryPoint::from_angle(-2.0), 1.5).unwrap(),
        ]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let z = DiskPoint::from_polar(rng.gen::<f64>() * 0.95, rng.gen::<f64>() * 6.3)
                .unwrap();
            let v = eval(&u, z, 1e-9).unwrap().value.norm();
            let l = eval_log_modulus(&u, z, 1e-9).unwrap();
            if v > 1e-6 {
                assert!((l - v.ln()).abs() < 1e-10 * (1.0 + l.abs()));
            }
        }
    }
}
