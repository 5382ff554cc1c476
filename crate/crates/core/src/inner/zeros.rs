use num_complex::Complex64;
use std::f64::consts::PI;

use super::InnerSpec;
use crate::error::{Error, Result};
use crate::geometry::{BoundaryPoint, DiskPoint};

/// Points of `{|z| <= r_max}` where `u` vanishes.
pub fn zeros_within(u: &InnerSpec, r_max: f64) -> Result<Vec<Complex64>> {
    preimages(u, Complex64::new(0.0, 0.0), r_max)
}

/// Solutions of `u(z) = c` with `|z| <= r_max`, for `|c| < 1`.
///
/// Covered: finite Blaschke products (polynomial roots), single-atom singular
/// functions (closed form), zeros of infinite products and of products,
/// Frostman shifts (the shift is an involution) and compositions (recursively).
pub fn preimages(u: &InnerSpec, c: Complex64, r_max: f64) -> Result<Vec<Complex64>> {
    if c.norm() >= 1.0 {
        return Err(Error::InvalidArgument(format!("target {c} not in the disk")));
    }
    let mut out = match u {
        InnerSpec::FiniteBlaschke { zeros, unimodular } => {
            blaschke_preimages(zeros, unimodular.to_complex(), c)
        }
        InnerSpec::Singular { atoms } => {
            let first = atoms.first().map(|a| a.point);
            if atoms.iter().any(|a| Some(a.point) != first) {
                return Err(Error::Unsupported(
                    "level points of singular functions with several atoms".into(),
                ));
            }
            let mass: f64 = atoms.iter().map(|a| a.mass).sum();
            match first {
                Some(p) if c.norm() > 0.0 => atom_preimages(p.to_complex(), mass, c, r_max),
                _ => Vec::new(),
            }
        }
        InnerSpec::InfiniteBlaschke { sequence } => {
            if c.norm() > 0.0 {
                return Err(Error::Unsupported(
                    "level points of infinite Blaschke products".into(),
                ));
            }
            sequence
                .points(sequence.budget())?
                .into_iter()
                .filter(|p| p.modulus() <= r_max)
                .map(|p| p.to_complex())
                .collect()
        }
        InnerSpec::Product { factors } => {
            if c.norm() > 0.0 {
                return Err(Error::Unsupported("level points of products".into()));
            }
            let mut all = Vec::new();
            for f in factors {
                all.extend(preimages(f, c, r_max)?);
            }
            all
        }
        InnerSpec::FrostmanShift { base, a } => {
            let a = a.to_complex();
            preimages(base, (a - c) / (1.0 - a.conj() * c), r_max)?
        }
        InnerSpec::Compose { outer, inner } => {
            // Schwarz–Pick: inner maps {|z| <= r} into a disk of radius R
            let m0 = inner.value_at(Complex64::new(0.0, 0.0), 1e-12)?.value.norm();
            let big_r = ((m0 + r_max) / (1.0 + m0 * r_max)).min(1.0 - f64::EPSILON);
            let mut all = Vec::new();
            for w in preimages(outer, c, big_r)? {
                all.extend(preimages(inner, w, r_max)?);
            }
            all
        }
    };
    out.retain(|z| z.norm() <= r_max);
    Ok(out)
}

fn blaschke_preimages(zeros: &[DiskPoint], lambda: Complex64, c: Complex64) -> Vec<Complex64> {
    if c.norm() == 0.0 {
        return zeros.iter().map(|a| a.to_complex()).collect();
    }
    // λ Π (z - a_k) - c Π (1 - conj(a_k) z)
    let mut p = vec![lambda];
    let mut q = vec![c];
    for a in zeros {
        let a = a.to_complex();
        p = poly_mul(&p, &[-a, Complex64::new(1.0, 0.0)]);
        q = poly_mul(&q, &[Complex64::new(1.0, 0.0), -a.conj()]);
    }
    let coeffs: Vec<Complex64> = p.iter().zip(&q).map(|(x, y)| x - y).collect();
    poly_roots(&coeffs)
}

fn atom_preimages(zeta: Complex64, mass: f64, c: Complex64, r_max: f64) -> Vec<Complex64> {
    // -mass (ζ + z)/(ζ - z) = log c + 2πik, z = ζ (w - 1)/(w + 1)
    let x = -c.norm().ln() / mass;
    let y0 = -c.arg() / mass;
    let step = 2.0 * PI / mass;
    let at = |k: i64| {
        let w = Complex64::new(x, y0 - step * k as f64);
        zeta * (w - 1.0) / (w + 1.0)
    };
    let mut out = Vec::new();
    for dir in [1i64, -1] {
        let mut k = if dir == 1 { 0 } else { -1 };
        // |z| grows with |Im w|; start from the k nearest Im w = 0
        let center = (y0 / step).round() as i64;
        k += center;
        let mut misses = 0;
        while misses < 2 && (k - center).abs() < 1_000_000 {
            let z = at(k);
            if z.norm() <= r_max {
                out.push(z);
                misses = 0;
            } else {
                misses += 1;
            }
            k += dir;
        }
    }
    out
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Roots of `sum coeffs[k] z^k` (Aberth iteration followed by Newton polish).
pub(crate) fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut coeffs = coeffs.to_vec();
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() == 0.0) {
        coeffs.pop();
    }
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let bound = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(0.5 * bound.min(2.0), 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner(&monic, roots[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| 1.0 / (roots[i] - roots[j]))
                .sum();
            let step = ratio / (1.0 - ratio * s);
            roots[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-16 {
            break;
        }
    }
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(&monic, *r);
            if dp.norm() == 0.0 {
                break;
            }
            *r -= p / dp;
        }
    }
    roots
}

/// Solutions of `B(ζ) = σ` on the circle for `B = λ Π (z - a)/(1 - conj(a) z)`.
///
/// On the circle `arg B(e^{it}) = arg λ + n t + 2 Σ arg(1 - a_k e^{-it})`, a
/// strictly increasing function, so each of the `n` solutions is bracketed and
/// bisected.
pub(crate) fn unit_circle_preimages(
    zeros: &[DiskPoint],
    lambda: BoundaryPoint,
    sigma: BoundaryPoint,
) -> Vec<BoundaryPoint> {
    let n = zeros.len();
    if n == 0 {
        return Vec::new();
    }
    let zs: Vec<Complex64> = zeros.iter().map(|a| a.to_complex()).collect();
    let phi = |t: f64| {
        let e = Complex64::from_polar(1.0, -t);
        lambda.angle()
            + n as f64 * t
            + 2.0 * zs.iter().map(|a| (1.0 - a * e).arg()).sum::<f64>()
    };
    let phi0 = phi(0.0);
    let s = sigma.angle();
    let first = s + 2.0 * PI * ((phi0 - s) / (2.0 * PI)).ceil();
    (0..n)
        .map(|j| {
            let target = first + 2.0 * PI * j as f64;
            let (mut lo, mut hi) = (0.0, 2.0 * PI);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if phi(mid) < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-15 {
                    break;
                }
            }
            BoundaryPoint::from_angle(0.5 * (lo + hi))
        })
        .collect()
}
