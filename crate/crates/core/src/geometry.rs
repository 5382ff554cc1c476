//! Pseudohyperbolic geometry of the unit disk.
//!
//! Distances are computed from the identity
//! `|1 - conj(z) w|^2 = |z - w|^2 + (1 - |z|^2)(1 - |w|^2)`, which keeps the
//! denominator free of cancellation for points close to the circle. Points that
//! approach the circle faster than `f64` can resolve are carried as a
//! [`GapPoint`] (distance to the circle plus argument) instead of a cartesian
//! pair.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Tolerance used when snapping a point onto the unit circle.
pub const UNIMODULAR_TOL: f64 = 1e-12;

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct DiskPoint {
    pub re: f64,
    pub im: f64,
}

impl DiskPoint {
    pub const ORIGIN: DiskPoint = DiskPoint { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Result<Self> {
        if re.is_finite() && im.is_finite() && re * re + im * im < 1.0 {
            Ok(DiskPoint { re, im })
        } else {
            Err(Error::NotInterior { re, im })
        }
    }

    pub fn real(x: f64) -> Result<Self> {
        Self::new(x, 0.0)
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        Self::from_complex(Complex64::from_polar(r, theta))
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn modulus(self) -> f64 {
        self.re.hypot(self.im)
    }

    /// `1 - |z|^2`, factored as `(1 - |z|)(1 + |z|)`.
    pub fn one_minus_mod_sq(self) -> f64 {
        one_minus_mod_sq(self.to_complex())
    }
}

impl TryFrom<[f64; 2]> for DiskPoint {
    type Error = Error;
    fn try_from(v: [f64; 2]) -> Result<Self> {
        DiskPoint::new(v[0], v[1])
    }
}

impl From<DiskPoint> for [f64; 2] {
    fn from(p: DiskPoint) -> Self {
        [p.re, p.im]
    }
}

impl From<DiskPoint> for Complex64 {
    fn from(p: DiskPoint) -> Self {
        p.to_complex()
    }
}

/// A point of the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct BoundaryPoint {
    pub re: f64,
    pub im: f64,
}

impl BoundaryPoint {
    pub const ONE: BoundaryPoint = BoundaryPoint { re: 1.0, im: 0.0 };

    /// Accepts points within [`UNIMODULAR_TOL`] of the circle and normalizes
    /// them. Points already unimodular to rounding are kept bit for bit.
    pub fn new(re: f64, im: f64) -> Result<Self> {
        let m = re.hypot(im);
        if !m.is_finite() || (m - 1.0).abs() > UNIMODULAR_TOL {
            return Err(Error::NotUnimodular { re, im });
        }
        if (m - 1.0).abs() <= 4.0 * f64::EPSILON {
            return Ok(BoundaryPoint { re, im });
        }
        Ok(BoundaryPoint {
            re: re / m,
            im: im / m,
        })
    }

    pub fn from_angle(theta: f64) -> Self {
        BoundaryPoint {
            re: theta.cos(),
            im: theta.sin(),
        }
    }

    /// Projects a nonzero complex number radially onto the circle.
    pub fn project(w: Complex64) -> Self {
        let m = w.norm();
        BoundaryPoint {
            re: w.re / m,
            im: w.im / m,
        }
    }

    pub fn angle(self) -> f64 {
        self.im.atan2(self.re)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    /// Arc-length distance along the circle.
    pub fn arc_distance(self, other: BoundaryPoint) -> f64 {
        angle_diff(self.angle(), other.angle()).abs()
    }
}

impl TryFrom<[f64; 2]> for BoundaryPoint {
    type Error = Error;
    fn try_from(v: [f64; 2]) -> Result<Self> {
        BoundaryPoint::new(v[0], v[1])
    }
}

impl From<BoundaryPoint> for [f64; 2] {
    fn from(p: BoundaryPoint) -> Self {
        [p.re, p.im]
    }
}

/// Signed difference `a - b` reduced to `(-pi, pi]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let mut d = (a - b) % (2.0 * PI);
    if d > PI {
        d -= 2.0 * PI;
    } else if d <= -PI {
        d += 2.0 * PI;
    }
    d
}

pub(crate) fn one_minus_mod_sq(z: Complex64) -> f64 {
    let m = z.norm();
    ((1.0 - m) * (1.0 + m)).max(0.0)
}

/// A disk point stored by its distance to the circle and its argument.
///
/// `z = (1 - gap) e^{i angle}`. Sequence generators emit these so that points
/// like `1 - n^{-n}` keep full relative precision in `1 - |z|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapPoint {
    pub gap: f64,
    pub angle: f64,
    /// Low-order part of the argument, so that `angle + angle_lo` resolves
    /// differences between nearby arguments below one ulp of `angle`.
    pub angle_lo: f64,
}

impl GapPoint {
    pub fn new(gap: f64, angle: f64) -> Self {
        GapPoint {
            gap,
            angle,
            angle_lo: 0.0,
        }
    }

    pub fn with_angle_lo(gap: f64, angle: f64, angle_lo: f64) -> Self {
        GapPoint {
            gap,
            angle,
            angle_lo,
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        GapPoint::new(
            1.0 - z.norm(),
            if z == Complex64::new(0.0, 0.0) { 0.0 } else { z.arg() },
        )
    }

    pub fn modulus(self) -> f64 {
        1.0 - self.gap
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(1.0 - self.gap, self.angle)
    }

    /// `1 - |z|^2 = gap (2 - gap)`.
    pub fn one_minus_mod_sq(self) -> f64 {
        self.gap * (2.0 - self.gap)
    }

    /// True for points on the positive real axis.
    pub fn is_positive_real(self) -> bool {
        self.angle == 0.0
    }
}

/// Pseudohyperbolic distance `|z - w| / |1 - conj(z) w|`.
pub fn pseudo_dist(z: DiskPoint, w: DiskPoint) -> f64 {
    pseudo_dist_c(z.to_complex(), w.to_complex())
}

pub(crate) fn pseudo_dist_c(z: Complex64, w: Complex64) -> f64 {
    let d2 = (z - w).norm_sqr();
    if d2 == 0.0 {
        return 0.0;
    }
    let k = one_minus_mod_sq(z) * one_minus_mod_sq(w);
    (d2 / (d2 + k)).sqrt()
}

/// Pseudohyperbolic distance between two gap-encoded points.
///
/// With `a, b` the gaps and `r = 1 - a`, `s = 1 - b`:
/// `|z - w|^2 = (a - b)^2 + 4 r s sin^2(dθ/2)` and
/// `|1 - conj(z) w|^2 = (a + b - ab)^2 + 4 r s sin^2(dθ/2)`.
pub fn pseudo_dist_gap(z: GapPoint, w: GapPoint) -> f64 {
    let (a, b) = (z.gap, w.gap);
    let half = 0.5 * (angle_diff(z.angle, w.angle) + (z.angle_lo - w.angle_lo));
    let t = 4.0 * (1.0 - a) * (1.0 - b) * half.sin().powi(2);
    let num = (a - b).powi(2) + t;
    if num == 0.0 {
        return 0.0;
    }
    let den = (a + b - a * b).powi(2) + t;
    (num / den).sqrt()
}

/// `ρ(1 - a, 1 - b) = |a - b| / (a + b - ab)` for `0 < a, b <= 1`.
///
/// For the geometric points `1 - 2^{-n}` this gives a consecutive distance of
/// `1 / (3 - 2^{-n})`; the form `1 / (3 + 2^{-n})` that is sometimes quoted has
/// the sign of the correction flipped.
pub fn rho_one_minus(a: f64, b: f64) -> Result<f64> {
    for (name, v) in [("a", a), ("b", b)] {
        if !(v > 0.0 && v <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "{name} = {v} outside (0, 1]"
            )));
        }
    }
    if a == b {
        return Ok(0.0);
    }
    Ok((a - b).abs() / (a + b - a * b))
}

/// A closed Euclidean disk in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EuclideanDisk {
    pub center: Complex64,
    pub radius: f64,
}

impl EuclideanDisk {
    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.radius
    }

    /// True when the closed disk lies in the closed unit disk (within 1e-12).
    pub fn inside_closed_unit_disk(&self) -> bool {
        self.radius >= 0.0 && self.center.norm() + self.radius <= 1.0 + 1e-12
    }

    pub fn is_disjoint_from(&self, other: &EuclideanDisk) -> bool {
        (self.center - other.center).norm() > self.radius + other.radius
    }

    /// Point on the boundary circle at angle `t`.
    pub fn boundary_point(&self, t: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, t)
    }
}

/// The disk `{|z - L/(L+1)| < 1/(L+1)}`, `L = log(1/eta)`: the sublevel set of
/// the atomic inner function `exp(-(1+z)/(1-z))` at level `eta`.
pub fn horodisk(eta: f64) -> Result<EuclideanDisk> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidArgument(format!("eta = {eta} outside (0, 1)")));
    }
    let l = -eta.ln();
    Ok(EuclideanDisk {
        center: Complex64::new(l / (l + 1.0), 0.0),
        radius: 1.0 / (l + 1.0),
    })
}

/// Euclidean description of the pseudohyperbolic disk `{ρ(z, center) < r}`.
pub fn pseudo_disk_to_euclidean(center: DiskPoint, r: f64) -> Result<EuclideanDisk> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!("radius {r} outside (0, 1)")));
    }
    let z0 = center.to_complex();
    let q = center.one_minus_mod_sq();
    let m2 = z0.norm_sqr();
    let den = 1.0 - r * r * m2;
    Ok(EuclideanDisk {
        center: z0 * ((1.0 - r * r) / den),
        radius: r * q / den,
    })
}

/// Nontangential approach region `{|vertex - z| < C (1 - |z|)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StolzAngle {
    pub vertex: BoundaryPoint,
    pub opening_constant: f64,
}

impl StolzAngle {
    pub fn new(vertex: BoundaryPoint, opening_constant: f64) -> Result<Self> {
        if !(opening_constant > 1.0) {
            return Err(Error::InvalidArgument(format!(
                "Stolz constant {opening_constant} must exceed 1"
            )));
        }
        Ok(StolzAngle {
            vertex,
            opening_constant,
        })
    }
}

pub fn in_stolz(angle: &StolzAngle, z: DiskPoint) -> bool {
    let d = (angle.vertex.to_complex() - z.to_complex()).norm();
    d < angle.opening_constant * (1.0 - z.modulus())
}

/// Disk automorphism `z -> e^{i theta} (a - z) / (1 - conj(a) z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Automorphism {
    pub a: Complex64,
    pub rotation: f64,
}

impl Automorphism {
    pub fn new(a: DiskPoint, rotation: f64) -> Self {
        Automorphism {
            a: a.to_complex(),
            rotation,
        }
    }

    pub fn apply_c(&self, z: Complex64) -> Complex64 {
        Complex64::from_polar(1.0, self.rotation) * (self.a - z) / (1.0 - self.a.conj() * z)
    }

    pub fn apply(&self, z: DiskPoint) -> DiskPoint {
        let w = self.apply_c(z.to_complex());
        // Automorphisms preserve the disk; rounding can only push |w| up by an ulp.
        let m = w.norm();
        if m < 1.0 {
            DiskPoint { re: w.re, im: w.im }
        } else {
            let s = (1.0 - f64::EPSILON) / m;
            DiskPoint {
                re: w.re * s,
                im: w.im * s,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(re: f64, im: f64) -> DiskPoint {
        DiskPoint::new(re, im).unwrap()
    }

    #[test]
    fn pseudo_dist_examples() {
        let w = p(0.3, -0.4);
        assert!((pseudo_dist(DiskPoint::ORIGIN, w) - 0.5).abs() < 1e-15);
        assert!((pseudo_dist(p(0.5, 0.0), p(0.75, 0.0)) - 0.4).abs() < 1e-15);
        // x1 = 1/2, x2 = 4/5 on the hyperbolic orbit
        assert!((pseudo_dist(p(0.5, 0.0), p(0.8, 0.0)) - 0.5).abs() < 1e-15);
        assert_eq!(pseudo_dist(w, w), 0.0);
    }

    #[test]
    fn rho_one_minus_examples() {
        assert_eq!(rho_one_minus(0.3, 0.3).unwrap(), 0.0);
        assert!((rho_one_minus(0.5, 0.25).unwrap() - 0.4).abs() < 1e-15);
        for n in 2..12 {
            let a = (n as f64).powi(-(n as i32));
            let v = rho_one_minus(a, 2.0 * a).unwrap();
            assert!((v - 1.0 / (3.0 - 2.0 * a)).abs() < 1e-15);
        }
        assert!(rho_one_minus(0.0, 0.5).is_err());
        assert!(rho_one_minus(0.5, 1.5).is_err());
        assert!(rho_one_minus(1.0, 1.0).is_ok());
    }

    #[test]
    fn rho_one_minus_matches_pseudo_dist() {
        assert!(
            (rho_one_minus(0.5, 0.25).unwrap() - pseudo_dist(p(0.5, 0.0), p(0.75, 0.0))).abs()
                < 1e-14
        );
    }

    #[test]
    fn gap_distance_agrees_with_cartesian() {
        let z = GapPoint::new(0.3, 0.7);
        let w = GapPoint::new(0.05, -1.1);
        let a = pseudo_dist_gap(z, w);
        let b = pseudo_dist_c(z.to_complex(), w.to_complex());
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn gap_distance_resolves_points_beyond_f64() {
        // 1 - 20^{-20} rounds to 1.0 as a cartesian number
        let a = 20f64.powi(-20);
        let z = GapPoint::new(a, 0.0);
        let w = GapPoint::new(2.0 * a, 0.0);
        assert_eq!(z.to_complex().re, 1.0);
        assert!((pseudo_dist_gap(z, w) - 1.0 / (3.0 - 2.0 * a)).abs() < 1e-15);
    }

    #[test]
    fn horodisk_examples() {
        let d = horodisk((-1.0f64).exp()).unwrap();
        assert!((d.center.re - 0.5).abs() < 1e-15 && (d.radius - 0.5).abs() < 1e-15);
        let d = horodisk((-3.0f64).exp()).unwrap();
        assert!((d.center.re - 0.75).abs() < 1e-15 && (d.radius - 0.25).abs() < 1e-15);
        let d = horodisk(1.0 - 1e-12).unwrap();
        assert!(d.center.re < 1e-11 && d.radius > 1.0 - 1e-11);
        for eta in [0.01, 0.3, 0.9] {
            let d = horodisk(eta).unwrap();
            assert!((d.center.re + d.radius - 1.0).abs() < 1e-15);
        }
        assert!(horodisk(0.0).is_err() && horodisk(1.0).is_err());
    }

    #[test]
    fn pseudo_disk_conversion() {
        let d = pseudo_disk_to_euclidean(DiskPoint::ORIGIN, 0.3).unwrap();
        assert_eq!(d.center, Complex64::new(0.0, 0.0));
        assert!((d.radius - 0.3).abs() < 1e-16);

        let d = pseudo_disk_to_euclidean(p(0.9, 0.0), 0.5).unwrap();
        assert!((d.center.re - 0.9 * 0.75 / (1.0 - 0.25 * 0.81)).abs() < 1e-14);
        assert!((d.center.re - 0.846_394_984).abs() < 1e-8);
        assert!((d.radius - 0.119_122_257).abs() < 1e-8);

        // sampling oracle: boundary points are at pseudo-distance r
        for (z0, r) in [(p(0.9, 0.0), 0.5), (p(-0.2, 0.7), 0.8), (p(0.0, 0.99), 0.1)] {
            let d = pseudo_disk_to_euclidean(z0, r).unwrap();
            assert!(d.inside_closed_unit_disk());
            for k in 0..64 {
                let w = d.boundary_point(k as f64 * 2.0 * PI / 64.0);
                let w = DiskPoint::from_complex(w).unwrap();
                assert!((pseudo_dist(z0, w) - r).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn stolz_examples() {
        let s = StolzAngle::new(BoundaryPoint::ONE, 2.0).unwrap();
        assert!(in_stolz(&s, DiskPoint::ORIGIN));
        assert!(!in_stolz(&s, p(0.0, 0.5)));
        for c in [1.01, 2.0, 10.0] {
            let s = StolzAngle::new(BoundaryPoint::ONE, c).unwrap();
            for r in [0.1, 0.5, 0.999] {
                assert!(in_stolz(&s, p(r, 0.0)));
            }
        }
        assert!(StolzAngle::new(BoundaryPoint::ONE, 1.0).is_err());
    }

    #[test]
    fn boundary_point_normalizes() {
        let b = BoundaryPoint::new(1.0 + 5e-13, 0.0).unwrap();
        assert_eq!(b.re, 1.0);
        assert!(BoundaryPoint::new(0.9, 0.0).is_err());
        assert!(DiskPoint::new(1.0, 0.0).is_err());
        assert!(DiskPoint::new(f64::NAN, 0.0).is_err());
    }
}
