//! Sampling of `Ω_u(η) = {|u| < η}` on an adaptive polar grid, component
//! labeling, connectivity verdicts and rendering.

mod components;
mod connect;
mod dump;
mod grid;
mod render;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::DiskPoint;
use crate::inner::{eval_log_modulus_bounded, InnerSpec, LogModulus};

pub use components::{
    label_components, label_mask, topology_checks, ComponentMap, ComponentStats, TopologyReport,
    UnionFind,
};
pub use connect::{
    hoffman_inclusion, is_connected, ladder_scan, threshold_search, GridSummary, HoffmanCheck,
    LadderReport, Margin, RefinementPolicy, ThresholdOutcome, ThresholdReport, Verdict,
    ConnectivityVerdict, Witness,
};
pub use dump::{dump_grid, GridDump, RingDump};
pub use grid::{Cell, CellGeometry, DiskGrid, Ring, MAX_SECTORS, MIN_SECTORS};
pub use render::{render, render_levels, write_image, ImageFormat, ImageSpec, LevelRaster};

/// Certified position of a cell relative to `Ω_u(η)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellClass {
    /// Every point of the cell lies in `Ω_u(η)`.
    In,
    /// No point of the cell lies in `Ω_u(η)`.
    Out,
    Uncertain,
}

impl CellClass {
    pub fn symbol(self) -> char {
        match self {
            CellClass::In => 'I',
            CellClass::Out => 'O',
            CellClass::Uncertain => 'U',
        }
    }
}

/// `log|u|` at every cell center, with leaf tolerance `tol`.
pub fn sample_log_modulus(u: &InnerSpec, grid: &DiskGrid, tol: f64) -> Result<Vec<LogModulus>> {
    sample_cells(u, grid, (0..grid.len()).collect::<Vec<_>>().as_slice(), tol)
}

pub(crate) fn sample_cells(
    u: &InnerSpec,
    grid: &DiskGrid,
    idx: &[usize],
    tol: f64,
) -> Result<Vec<LogModulus>> {
    idx.par_iter()
        .map(|&i| {
            let c = grid.geometry(i).center;
            eval_log_modulus_bounded(u, center_point(c)?, tol)
        })
        .collect()
}

fn center_point(c: Complex64) -> Result<DiskPoint> {
    DiskPoint::from_complex(c)
}

/// Classification of one cell. The cell's pseudohyperbolic slack `s`, scaled
/// by `kappa`, bounds how far `u` can move over the cell (Schwarz–Pick), so
/// the cell is inside when `|u(c)| < (η - s)/(1 - sη)` and outside when
/// `|u(c)| > (η + s)/(1 + sη)`, after charging the evaluation bound (also
/// scaled by `kappa`).
pub fn classify_one(log: LogModulus, slack: f64, eta: f64, kappa: f64) -> CellClass {
    let s = (slack * kappa).min(1.0);
    let l = log.value;
    let b = log.bound * kappa;
    if !b.is_finite() {
        return CellClass::Uncertain;
    }
    if eta > s && l + b < ((eta - s) / (1.0 - s * eta)).ln() {
        return CellClass::In;
    }
    if s < 1.0 && l - b > ((eta + s) / (1.0 + s * eta)).ln() {
        return CellClass::Out;
    }
    CellClass::Uncertain
}

/// Classifies sampled cells at level `eta` with margin scale `kappa`.
pub fn classify_samples(
    grid: &DiskGrid,
    logs: &[LogModulus],
    eta: f64,
    kappa: f64,
) -> Vec<CellClass> {
    (0..grid.len())
        .map(|i| classify_one(logs[i], grid.geometry(i).slack, eta, kappa))
        .collect()
}

/// Classifies every cell of `grid` at level `eta`.
pub fn classify_cells(
    u: &InnerSpec,
    eta: f64,
    grid: &DiskGrid,
    tol: f64,
) -> Result<Vec<CellClass>> {
    check_eta(eta)?;
    let logs = sample_log_modulus(u, grid, tol)?;
    Ok(classify_samples(grid, &logs, eta, 1.0))
}

pub(crate) fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("eta = {eta} outside (0, 1)")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::horodisk;

    #[test]
    fn identity_classification() {
        let grid = DiskGrid::new(2, 0.95).unwrap();
        let cls = classify_cells(&InnerSpec::identity(), 0.5, &grid, 1e-9).unwrap();
        for (i, c) in cls.iter().enumerate() {
            let g = grid.geometry(i);
            match c {
                CellClass::In => assert!(g.r_out < 0.5),
                CellClass::Out => assert!(g.r_in > 0.5),
                CellClass::Uncertain => {}
            }
        }
        assert!(cls.contains(&CellClass::In) && cls.contains(&CellClass::Out));
    }

    #[test]
    fn atomic_matches_horodisk() {
        let eta = (-1.0f64).exp();
        let grid = DiskGrid::new(2, 0.99).unwrap();
        let cls = classify_cells(&InnerSpec::s(), eta, &grid, 1e-9).unwrap();
        let disk = horodisk(eta).unwrap();
        for (i, c) in cls.iter().enumerate() {
            let g = grid.geometry(i);
            let inside = disk.contains(g.center);
            match c {
                CellClass::In => assert!(inside),
                CellClass::Out => assert!(!inside),
                CellClass::Uncertain => {}
            }
            // the horodisk touches the origin at this level
            if g.center.re < -0.2 {
                assert_eq!(*c, CellClass::Out);
            }
        }
    }

    #[test]
    fn squared_atomic_has_two_lobes() {
        let u = InnerSpec::compose(InnerSpec::s(), InnerSpec::monomial(2));
        let grid = DiskGrid::new(3, 0.99).unwrap();
        let cls = classify_cells(&u, (-2.0f64).exp(), &grid, 1e-9).unwrap();
        let ins: Vec<Complex64> = (0..grid.len())
            .filter(|&i| cls[i] == CellClass::In)
            .map(|i| grid.geometry(i).center)
            .collect();
        assert!(ins.iter().any(|z| z.re > 0.5));
        assert!(ins.iter().any(|z| z.re < -0.5));
        assert!(ins.iter().all(|z| z.re.abs() > 0.3));
    }

    #[test]
    fn smaller_margin_only_resolves_more() {
        let u = InnerSpec::s();
        let grid = DiskGrid::new(2, 0.99).unwrap();
        let logs = sample_log_modulus(&u, &grid, 1e-9).unwrap();
        let full = classify_samples(&grid, &logs, 0.5, 1.0);
        let half = classify_samples(&grid, &logs, 0.5, 0.5);
        for (a, b) in full.iter().zip(&half) {
            if *a != CellClass::Uncertain {
                assert_eq!(a, b);
            }
        }
    }
}
