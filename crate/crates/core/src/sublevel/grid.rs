use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Radial subdivision units per ring.
pub(crate) const U_FULL: u64 = 1 << 32;
/// Angular subdivision units per base sector.
pub(crate) const V_UNIT: u64 = 1 << 32;

/// An annulus `r0 <= |z| <= r1` split into `sectors` equal angular sectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ring {
    pub r0: f64,
    pub r1: f64,
    pub sectors: u64,
}

/// A polar rectangle addressed by dyadic integer coordinates inside its ring:
/// radii `r0 + (r1 - r0) u / 2^32` for `u` in `[u0, u1]`, angles
/// `2π v / (sectors 2^32)` for `v` in `[v0, v1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub ring: u32,
    pub u0: u64,
    pub u1: u64,
    pub v0: u64,
    pub v1: u64,
}

/// Polar geometry of a cell with the Schwarz–Pick slack of its center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellGeometry {
    pub r_in: f64,
    pub r_out: f64,
    pub theta0: f64,
    pub theta1: f64,
    pub center: Complex64,
    /// Upper bound on `|z - center|` over the cell.
    pub radius: f64,
    /// Upper bound on the pseudohyperbolic distance from the center to any
    /// point of the cell.
    pub slack: f64,
}

impl CellGeometry {
    /// Closed-cell membership test.
    pub fn contains(&self, z: Complex64) -> bool {
        let r = z.norm();
        if r < self.r_in || r > self.r_out {
            return false;
        }
        if self.r_in == 0.0 && r == 0.0 {
            return true;
        }
        let mut t = z.arg();
        if t < 0.0 {
            t += 2.0 * PI;
        }
        let eps = 1e-15;
        (t >= self.theta0 - eps && t <= self.theta1 + eps)
            || (self.theta1 >= 2.0 * PI - eps && t <= eps)
    }
}

/// Polar sampling grid over `{|z| <= r_max}`, refined toward the circle.
///
/// Ring boundaries follow `1 - t_k = q^k` with `q = 2^{-1/2^level}`, clipped
/// at `r_max`; each ring has about `2π t / (2^{-level} (1 - t))` sectors, so
/// cells shrink with the distance to the circle until the per-ring cap is
/// reached. Cells can then be bisected individually.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskGrid {
    level: u32,
    r_max: f64,
    rings: Vec<Ring>,
    cells: Vec<Cell>,
    depth: u32,
}

/// Sector-count bounds per ring at level `l`: `MIN_SECTORS 2^l ..= MAX_SECTORS 2^l`.
pub const MIN_SECTORS: u64 = 8;
pub const MAX_SECTORS: u64 = 256;

impl DiskGrid {
    pub fn new(level: u32, r_max: f64) -> Result<Self> {
        if !(r_max > 0.0 && r_max < 1.0) {
            return Err(Error::InvalidArgument(format!("r_max = {r_max} outside (0, 1)")));
        }
        if level > 12 {
            return Err(Error::InvalidArgument(format!("grid level {level} above 12")));
        }
        let scale = 1u64 << level;
        let q = 0.5f64.powf(1.0 / scale as f64);
        let cap = 1.0 / scale as f64;
        let mut rings = Vec::new();
        let mut gap = 1.0;
        let mut r0 = 0.0;
        while r0 < r_max {
            gap *= q;
            let mut r1 = 1.0 - gap;
            // avoid a sliver ring just below r_max
            if r1 >= r_max || (r_max - r1) < 0.25 * (1.0 - q) * (1.0 - r1) {
                r1 = r_max;
            }
            let want = (2.0 * PI * r1 / (cap * (1.0 - r1))).ceil() as u64;
            let m = want.clamp(MIN_SECTORS * scale, MAX_SECTORS * scale);
            let m = m.div_ceil(4) * 4;
            rings.push(Ring { r0, r1, sectors: m });
            r0 = r1;
        }
        let mut cells = Vec::new();
        for (k, ring) in rings.iter().enumerate() {
            for j in 0..ring.sectors {
                cells.push(Cell {
                    ring: k as u32,
                    u0: 0,
                    u1: U_FULL,
                    v0: j * V_UNIT,
                    v1: (j + 1) * V_UNIT,
                });
            }
        }
        Ok(DiskGrid {
            level,
            r_max,
            rings,
            cells,
            depth: 0,
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn rings(&self) -> &[Ring] {
        &self.rings
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Number of refinement passes applied so far.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn geometry(&self, idx: usize) -> CellGeometry {
        self.cell_geometry(&self.cells[idx])
    }

    pub fn cell_geometry(&self, c: &Cell) -> CellGeometry {
        let ring = self.rings[c.ring as usize];
        let dr = ring.r1 - ring.r0;
        let r_in = ring.r0 + dr * (c.u0 as f64 / U_FULL as f64);
        let r_out = if c.u1 == U_FULL {
            ring.r1
        } else {
            ring.r0 + dr * (c.u1 as f64 / U_FULL as f64)
        };
        let per = 2.0 * PI / (ring.sectors as f64 * V_UNIT as f64);
        let theta0 = c.v0 as f64 * per;
        let theta1 = c.v1 as f64 * per;
        let rc = 0.5 * (r_in + r_out);
        let tc = 0.5 * (theta0 + theta1);
        let center = Complex64::from_polar(rc, tc);
        let radius = 0.5 * (r_out - r_in) + r_out * 0.5 * (theta1 - theta0).min(2.0 * PI);
        // ρ(z, c) = |z - c| / sqrt(|z - c|² + (1 - |z|²)(1 - |c|²))
        let k = (1.0 - r_out) * (1.0 + r_out) * (1.0 - rc) * (1.0 + rc);
        let slack = (radius / (radius * radius + k).sqrt()).min(1.0);
        CellGeometry {
            r_in,
            r_out,
            theta0,
            theta1,
            center,
            radius,
            slack,
        }
    }

    /// True when the cell's outer edge lies on the circle `|z| = r_max`.
    pub fn touches_rim(&self, idx: usize) -> bool {
        let c = &self.cells[idx];
        c.ring as usize == self.rings.len() - 1 && c.u1 == U_FULL
    }

    /// Bisects the selected cells. A cell is halved across its longer side,
    /// or into four when the sides are within a factor of two. Order is
    /// preserved: children replace their parent in place. Returns, for each
    /// new cell, the index of the cell it came from.
    pub fn refine(&mut self, selected: &[bool]) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.cells.len());
        let mut parent = Vec::with_capacity(self.cells.len());
        for (i, c) in self.cells.iter().enumerate() {
            if !selected.get(i).copied().unwrap_or(false) {
                out.push(*c);
                parent.push(i);
                continue;
            }
            let g = self.cell_geometry(c);
            let radial = g.r_out - g.r_in;
            let angular = g.r_out * (g.theta1 - g.theta0);
            let can_u = c.u1 - c.u0 >= 2;
            let can_v = c.v1 - c.v0 >= 2;
            let split_u = can_u && (radial * 2.0 > angular || !can_v);
            let split_v = can_v && (angular * 2.0 > radial || !can_u);
            let us: Vec<(u64, u64)> = if split_u {
                let m = c.u0 + (c.u1 - c.u0) / 2;
                vec![(c.u0, m), (m, c.u1)]
            } else {
                vec![(c.u0, c.u1)]
            };
            let vs: Vec<(u64, u64)> = if split_v {
                let m = c.v0 + (c.v1 - c.v0) / 2;
                vec![(c.v0, m), (m, c.v1)]
            } else {
                vec![(c.v0, c.v1)]
            };
            for &(u0, u1) in &us {
                for &(v0, v1) in &vs {
                    out.push(Cell {
                        ring: c.ring,
                        u0,
                        u1,
                        v0,
                        v1,
                    });
                    parent.push(i);
                }
            }
        }
        self.cells = out;
        self.depth += 1;
        parent
    }

    /// Pairs of cells sharing an edge of positive length.
    ///
    /// Cells meet along circles (radial neighbours, possibly in different
    /// rings with different sector counts) and along rays (angular
    /// neighbours). Each edge family is grouped by its position and the two
    /// sides are merged as sorted interval lists.
    pub fn edges(&self) -> Vec<[u32; 2]> {
        // (family, ring, position, side, start, end, cell)
        let mut ends: Vec<(u8, u32, u64, u8, u128, u128, u32)> =
            Vec::with_capacity(4 * self.cells.len());
        let last = self.rings.len() as u32 - 1;
        for (i, c) in self.cells.iter().enumerate() {
            let i = i as u32;
            let m_here = self.rings[c.ring as usize].sectors as u128;
            // circle above the cell
            if c.u1 < U_FULL {
                ends.push((0, c.ring, c.u1, 0, c.v0 as u128, c.v1 as u128, i));
            } else if c.ring < last {
                let m_next = self.rings[c.ring as usize + 1].sectors as u128;
                ends.push((0, c.ring, U_FULL, 0, c.v0 as u128 * m_next, c.v1 as u128 * m_next, i));
            }
            // circle below the cell
            if c.u0 > 0 {
                ends.push((0, c.ring, c.u0, 1, c.v0 as u128, c.v1 as u128, i));
            } else if c.ring > 0 {
                let below = c.ring - 1;
                let m_below = self.rings[below as usize].sectors as u128;
                ends.push((0, below, U_FULL, 1, c.v0 as u128 * m_below, c.v1 as u128 * m_below, i));
            }
            let period = self.rings[c.ring as usize].sectors * V_UNIT;
            let _ = m_here;
            // ray at the cell's end angle, then at its start angle
            ends.push((1, c.ring, c.v1 % period, 0, c.u0 as u128, c.u1 as u128, i));
            ends.push((1, c.ring, c.v0, 1, c.u0 as u128, c.u1 as u128, i));
        }
        ends.sort_unstable_by(|a, b| (a.0, a.1, a.2, a.3, a.4).cmp(&(b.0, b.1, b.2, b.3, b.4)));
        let mut edges = Vec::with_capacity(2 * self.cells.len());
        let mut i = 0;
        while i < ends.len() {
            let key = (ends[i].0, ends[i].1, ends[i].2);
            let mut j = i;
            while j < ends.len() && (ends[j].0, ends[j].1, ends[j].2) == key {
                j += 1;
            }
            let group = &ends[i..j];
            let split = group.iter().position(|e| e.3 == 1).unwrap_or(group.len());
            let (lo, hi) = group.split_at(split);
            let (mut a, mut b) = (0, 0);
            while a < lo.len() && b < hi.len() {
                let (s0, e0) = (lo[a].4, lo[a].5);
                let (s1, e1) = (hi[b].4, hi[b].5);
                if s0.max(s1) < e0.min(e1) {
                    edges.push([lo[a].6.min(hi[b].6), lo[a].6.max(hi[b].6)]);
                }
                if e0 <= e1 {
                    a += 1;
                } else {
                    b += 1;
                }
            }
            i = j;
        }
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    /// Indices of the cells whose closed rectangle contains `z`.
    pub fn locate(&self, z: Complex64) -> Vec<usize> {
        let r = z.norm();
        if r > self.r_max {
            return Vec::new();
        }
        let mut t = z.arg();
        if t < 0.0 {
            t += 2.0 * PI;
        }
        if r == 0.0 {
            return (0..self.cells.len())
                .filter(|&i| self.cells[i].ring == 0 && self.cells[i].u0 == 0)
                .collect();
        }
        let mut hits = Vec::new();
        for (k, g) in self.rings.iter().enumerate() {
            if r < g.r0 - 1e-15 || r > g.r1 + 1e-15 {
                continue;
            }
            // cells are stored ring by ring, base sector by base sector
            let j = ((t / (2.0 * PI) * g.sectors as f64) as u64).min(g.sectors - 1);
            for s in [j + g.sectors - 1, j, j + 1] {
                let s = s % g.sectors;
                let key = (k as u32, s);
                let lo = self.cells.partition_point(|c| (c.ring, c.v0 / V_UNIT) < key);
                let hi = self.cells.partition_point(|c| (c.ring, c.v0 / V_UNIT) <= key);
                for i in lo..hi {
                    if self.cell_geometry(&self.cells[i]).contains(z) && !hits.contains(&i) {
                        hits.push(i);
                    }
                }
            }
        }
        hits.sort_unstable();
        hits
    }
}
