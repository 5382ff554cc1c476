use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ZeroSequence;
use crate::error::{Error, Result};
use crate::geometry::{pseudo_dist_gap, BoundaryPoint, GapPoint};

/// Partial Blaschke sums up to an index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeSum {
    pub upto: usize,
    /// `sum (1 - |z_n|^2)`
    pub sum_sq: f64,
    /// `sum (1 - |z_n|)`
    pub sum_gap: f64,
    /// Bound on the remaining `sum (1 - |z_n|^2)` beyond `upto`.
    pub tail_bound: f64,
}

pub fn blaschke_sum(seq: &ZeroSequence, upto: usize) -> Result<BlaschkeSum> {
    let pts = seq.points(upto)?;
    let sum_sq = pts.iter().map(|p| p.one_minus_mod_sq()).sum();
    let sum_gap = pts.iter().map(|p| p.gap).sum();
    Ok(BlaschkeSum {
        upto,
        sum_sq,
        sum_gap,
        tail_bound: 2.0 * seq.tail_gap_bound(upto),
    })
}

/// `ρ(z_n, z_{n+1})`.
pub fn consecutive_rho(seq: &ZeroSequence, n: usize) -> Result<f64> {
    Ok(pseudo_dist_gap(seq.point(n)?, seq.point(n + 1)?))
}

/// `min_{n < m <= upto} ρ(z_n, z_m)`.
pub fn separation_constant(seq: &ZeroSequence, upto: usize) -> Result<f64> {
    if upto < 2 {
        return Err(Error::InvalidArgument("separation needs at least two points".into()));
    }
    let pts = seq.points(upto)?;
    Ok(pairwise_extreme(&pts, f64::INFINITY, f64::min, |_, d| d))
}

/// Reduces `f(i, ρ(z_i, z_j))` over all unordered pairs. Rows run in parallel;
/// the fold is order-independent for min/max.
fn pairwise_extreme(
    pts: &[GapPoint],
    init: f64,
    fold: fn(f64, f64) -> f64,
    f: impl Fn(usize, f64) -> f64 + Sync,
) -> f64 {
    (0..pts.len())
        .into_par_iter()
        .map(|i| {
            pts[i + 1..]
                .iter()
                .fold(init, |acc, q| fold(acc, f(i, pseudo_dist_gap(pts[i], *q))))
        })
        .reduce(|| init, fold)
}

/// Supremum of `(1 - x_{n+1}) / (1 - x_n)` over `n < upto`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VhnRatio {
    pub upto: usize,
    pub sup: f64,
    /// Index `n` attaining the supremum (first one on ties).
    pub argmax: usize,
    /// The ratios are still increasing at the end of the window, so the
    /// reported value is a lower bound of a supremum that may approach 1.
    pub increasing_at_end: bool,
}

pub fn vhn_ratio(seq: &ZeroSequence, upto: usize) -> Result<VhnRatio> {
    if upto < 2 {
        return Err(Error::InvalidArgument("ratio needs at least two points".into()));
    }
    let pts = seq.points(upto)?;
    for (i, w) in pts.windows(2).enumerate() {
        if !w[0].is_positive_real() || !w[1].is_positive_real() {
            return Err(Error::NotRadial(format!("point {} is not on [0, 1)", i + 1)));
        }
        if !(w[1].gap < w[0].gap) {
            return Err(Error::NotRadial(format!(
                "points {} and {} are not increasing",
                i + 1,
                i + 2
            )));
        }
    }
    let ratios: Vec<f64> = pts.windows(2).map(|w| w[1].gap / w[0].gap).collect();
    let (mut argmax, mut sup) = (1, ratios[0]);
    for (i, &r) in ratios.iter().enumerate() {
        if r > sup {
            sup = r;
            argmax = i + 1;
        }
    }
    let tail = &ratios[ratios.len().saturating_sub(10)..];
    let increasing_at_end = tail.len() >= 2 && tail.windows(2).all(|w| w[1] > w[0]);
    Ok(VhnRatio {
        upto,
        sup,
        argmax,
        increasing_at_end,
    })
}

/// `δ_n = prod_{k != n, k <= truncation} ρ(z_k, z_n)`; nonincreasing in `truncation`.
pub fn interp_delta_n(seq: &ZeroSequence, n: usize, truncation: usize) -> Result<f64> {
    if n == 0 || n > truncation {
        return Err(Error::InvalidArgument(format!(
            "index {n} outside 1..={truncation}"
        )));
    }
    let pts = seq.points(truncation)?;
    let zn = pts[n - 1];
    Ok(pts
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != n - 1)
        .map(|(_, zk)| pseudo_dist_gap(*zk, zn))
        .product())
}

/// All `δ_n` for `n <= truncation` at a fixed truncation.
pub fn interp_delta_profile(seq: &ZeroSequence, truncation: usize) -> Result<Vec<f64>> {
    let pts = seq.points(truncation)?;
    Ok(delta_profile(&pts))
}

pub(crate) fn delta_profile(pts: &[GapPoint]) -> Vec<f64> {
    (0..pts.len())
        .into_par_iter()
        .map(|n| {
            pts.iter()
                .enumerate()
                .filter(|(k, _)| *k != n)
                .map(|(_, zk)| pseudo_dist_gap(*zk, pts[n]))
                .product()
        })
        .collect()
}

/// `inf_n δ_n` over a finite truncation, the measured interpolation constant.
pub fn interpolation_constant(seq: &ZeroSequence, truncation: usize) -> Result<f64> {
    Ok(interp_delta_profile(seq, truncation)?
        .into_iter()
        .fold(1.0, f64::min))
}

/// Default ceiling above which a growing Frostman sum is flagged.
pub const DEFAULT_FROSTMAN_CEILING: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrostmanSum {
    pub upto: usize,
    pub partial: f64,
    pub half_partial: f64,
    pub diverging: bool,
}

/// Partial sum of `(1 - |z_n|^2) / |ξ - z_n|`.
///
/// Flagged as diverging when the sum exceeds `ceiling` and the second half of
/// the window still contributes at least a quarter of the first half.
pub fn frostman_sum(
    seq: &ZeroSequence,
    xi: BoundaryPoint,
    upto: usize,
    ceiling: f64,
) -> Result<FrostmanSum> {
    let pts = seq.points(upto)?;
    let phi = xi.angle();
    let terms: Vec<f64> = pts
        .iter()
        .map(|p| {
            // |e^{iφ} - r e^{iθ}|^2 = gap^2 + 4 r sin^2((φ - θ)/2)
            let s = (0.5 * (phi - p.angle)).sin();
            let d = (p.gap * p.gap + 4.0 * (1.0 - p.gap) * s * s).sqrt();
            p.one_minus_mod_sq() / d
        })
        .collect();
    let half_partial: f64 = terms[..upto / 2].iter().sum();
    let partial: f64 = terms.iter().sum();
    let diverging = partial > ceiling && (partial - half_partial) >= 0.25 * half_partial;
    Ok(FrostmanSum {
        upto,
        partial,
        half_partial,
        diverging,
    })
}

/// Hoffman constants `(δ, η, ε)` with `0 < η < (1 - sqrt(1 - δ²))/δ` and
/// `0 < ε < η (δ - η) / (1 - δ η)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoffmanConstants {
    pub delta: f64,
    pub eta: f64,
    pub epsilon: f64,
}

impl HoffmanConstants {
    pub fn eta_max(delta: f64) -> f64 {
        // (1 - sqrt(1 - δ²)) / δ without the cancellation
        delta / (1.0 + (1.0 - delta * delta).sqrt())
    }

    pub fn epsilon_max(delta: f64, eta: f64) -> f64 {
        eta * (delta - eta) / (1.0 - delta * eta)
    }
}

/// Picks Hoffman constants for a measured `δ`. Without an explicit `η` the
/// midpoint `η_max / 2` is used; `ε` is always half its upper bound.
pub fn hoffman_constants(delta: f64, eta: Option<f64>) -> Result<HoffmanConstants> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!("delta = {delta} outside (0, 1)")));
    }
    let eta_max = HoffmanConstants::eta_max(delta);
    let eta = match eta {
        Some(e) if !(e > 0.0 && e < eta_max) => {
            return Err(Error::EtaOutOfRange { eta: e, eta_max })
        }
        Some(e) => e,
        None => 0.5 * eta_max,
    };
    Ok(HoffmanConstants {
        delta,
        eta,
        epsilon: 0.5 * HoffmanConstants::epsilon_max(delta, eta),
    })
}

/// `max_n min_{m != n} ρ(z_n, z_m)` over the first `upto` points.
pub fn eta_star(seq: &ZeroSequence, upto: usize) -> Result<f64> {
    if upto < 2 {
        return Err(Error::InvalidArgument("eta* needs at least two points".into()));
    }
    let pts = seq.points(upto)?;
    Ok(nearest_neighbor_distances(&pts)
        .into_iter()
        .fold(0.0, f64::max))
}

pub(crate) fn nearest_neighbor_distances(pts: &[GapPoint]) -> Vec<f64> {
    (0..pts.len())
        .into_par_iter()
        .map(|n| {
            pts.iter()
                .enumerate()
                .filter(|(m, _)| *m != n)
                .map(|(_, q)| pseudo_dist_gap(pts[n], *q))
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}
