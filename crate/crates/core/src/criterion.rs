//! Boundary-derivative evidence for the one-component property: spectra,
//! the ratio `|u''| / |u'|²` along the circle, and radial limits at spectrum
//! points.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{BoundaryPoint, DiskPoint};
use crate::inner::{
    boundary_derivatives, certified_radius, eval_log_modulus, unit_circle_preimages, InnerSpec,
};

/// Spectrum points closer than this are merged.
pub const SPECTRUM_DEDUP: f64 = 1e-10;

/// Boundary points where the function does not continue analytically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Sorted by angle in `(-π, π]`.
    pub points: Vec<BoundaryPoint>,
    /// True when some points are cluster points of generated zeros rather
    /// than singular atoms or their preimages.
    pub includes_cluster_points: bool,
}

impl Spectrum {
    fn from_points(mut points: Vec<BoundaryPoint>, includes_cluster_points: bool) -> Self {
        points.sort_by(|a, b| a.angle().total_cmp(&b.angle()));
        let mut out: Vec<BoundaryPoint> = Vec::with_capacity(points.len());
        for p in points {
            let dup = out
                .iter()
                .any(|q| (q.to_complex() - p.to_complex()).norm() < SPECTRUM_DEDUP);
            if !dup {
                out.push(p);
            }
        }
        Spectrum {
            points: out,
            includes_cluster_points,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Euclidean distance from `zeta` to the nearest spectrum point.
    pub fn distance(&self, zeta: BoundaryPoint) -> f64 {
        self.points
            .iter()
            .map(|p| (p.to_complex() - zeta.to_complex()).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn spectrum(u: &InnerSpec) -> Result<Spectrum> {
    let (points, cluster) = spectrum_points(u)?;
    Ok(Spectrum::from_points(points, cluster))
}

fn spectrum_points(u: &InnerSpec) -> Result<(Vec<BoundaryPoint>, bool)> {
    Ok(match u {
        InnerSpec::FiniteBlaschke { .. } => (Vec::new(), false),
        InnerSpec::Singular { atoms } => (atoms.iter().map(|a| a.point).collect(), false),
        InnerSpec::InfiniteBlaschke { sequence } => (sequence.cluster_points(), true),
        InnerSpec::Product { factors } => {
            let mut all = Vec::new();
            let mut cluster = false;
            for f in factors {
                let (p, c) = spectrum_points(f)?;
                all.extend(p);
                cluster |= c;
            }
            (all, cluster)
        }
        InnerSpec::FrostmanShift { base, .. } => spectrum_points(base)?,
        InnerSpec::Compose { outer, inner } => {
            let (zeros, lambda) = inner.as_finite_blaschke().ok_or_else(|| {
                Error::Unsupported("spectrum of a composition with a non-finite inner part".into())
            })?;
            let (outer_pts, cluster) = spectrum_points(outer)?;
            let pts = outer_pts
                .into_iter()
                .flat_map(|s| unit_circle_preimages(&zeros, lambda, s))
                .collect();
            (pts, cluster)
        }
    })
}

/// `|u''(ζ)| / |u'(ζ)|²`.
pub fn aleksandrov_ratio(u: &InnerSpec, zeta: BoundaryPoint) -> Result<f64> {
    let j = boundary_derivatives(u, zeta)?;
    let d1 = j.d1.norm();
    if d1 < 1e-12 {
        return Err(Error::DerivativeVanishes(d1));
    }
    Ok(j.d2.norm() / (d1 * d1))
}

/// Sampling plan for [`criterion_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriterionConfig {
    /// Uniform arc samples at the coarse and fine density.
    pub densities: [usize; 2],
    /// Extra samples at `σ e^{±i 2^{-k}}`, `k = 1..=accumulation_depth`, around
    /// every spectrum point `σ`.
    pub accumulation_depth: u32,
    /// Radial probes use `r = 1 - 2^{-k}`, `k = 1..=radial_depth`.
    pub radial_depth: u32,
    /// Log-scale tolerance of the radial probes.
    pub tol: f64,
}

impl Default for CriterionConfig {
    fn default() -> Self {
        CriterionConfig {
            densities: [2048, 4096],
            accumulation_depth: 26,
            radial_depth: 20,
            tol: 1e-6,
        }
    }
}

/// Relative gap between the two sampled suprema above which they are
/// treated as still growing.
pub const BLOWUP_RATIO: f64 = 0.1;

/// Liminf probes below this count as consistent.
pub const PROBE_CEILING: f64 = 1.0 - 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictHint {
    Consistent,
    Inconsistent,
}

/// The radial behaviour at one spectrum point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProbe {
    pub point: BoundaryPoint,
    /// `min |u(r ζ)|` over the last half of the radii.
    pub min_modulus: f64,
    /// Its logarithm, which stays informative after `min_modulus` underflows.
    pub log_min_modulus: f64,
    pub radii: Vec<f64>,
    /// The schedule was cut short by the certified evaluation radius.
    pub clipped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub sup_ratio: f64,
    pub argmax: BoundaryPoint,
    /// Suprema at the coarse and fine density, after local refinement.
    pub sup_by_density: [f64; 2],
    pub blowup: bool,
    pub samples: usize,
    pub spectrum: Spectrum,
    pub radial_probes: Vec<RadialProbe>,
    pub verdict_hint: VerdictHint,
    /// Always "evidence, not proof".
    pub hint_label: String,
}

pub const HINT_LABEL: &str = "evidence, not proof";

/// Samples the ratio on the circle at two densities and probes radial limits
/// at every spectrum point.
pub fn criterion_scan(u: &InnerSpec, config: &CriterionConfig) -> Result<CriterionReport> {
    let spec = spectrum(u)?;
    let accum: Vec<f64> = spec
        .points
        .iter()
        .flat_map(|s| {
            let a = s.angle();
            (1..=config.accumulation_depth).flat_map(move |k| {
                let h = 0.5f64.powi(k as i32);
                [a - h, a + h]
            })
        })
        .collect();
    let mut sups = [0.0; 2];
    let mut best = (f64::NEG_INFINITY, 0.0);
    let mut samples = 0;
    for (slot, &m) in config.densities.iter().enumerate() {
        if m == 0 {
            return Err(Error::InvalidArgument("arc density must be positive".into()));
        }
        let angles: Vec<f64> = (0..m)
            .map(|j| 2.0 * PI * (j as f64 + 0.5) / m as f64 - PI)
            .chain(accum.iter().copied())
            .collect();
        samples += angles.len();
        let (t, v) = sample_sup(u, &angles)?;
        let (t, v) = refine(u, t, v, 2.0 * PI / m as f64);
        sups[slot] = v;
        if v > best.0 {
            best = (v, t);
        }
    }
    let blowup = (sups[1] - sups[0]).abs() > BLOWUP_RATIO * sups[0].max(f64::MIN_POSITIVE);

    let radii = default_radii(u, config.radial_depth, config.tol);
    let radial_probes = spec
        .points
        .iter()
        .map(|&p| radial_liminf_probe(u, p, &radii.0, config.tol).map(|mut r| {
            r.clipped = radii.1;
            r
        }))
        .collect::<Result<Vec<_>>>()?;
    let consistent = !blowup
        && best.0.is_finite()
        && radial_probes.iter().all(|p| p.min_modulus < PROBE_CEILING);
    Ok(CriterionReport {
        sup_ratio: best.0,
        argmax: BoundaryPoint::from_angle(best.1),
        sup_by_density: sups,
        blowup,
        samples,
        spectrum: spec,
        radial_probes,
        verdict_hint: if consistent {
            VerdictHint::Consistent
        } else {
            VerdictHint::Inconsistent
        },
        hint_label: HINT_LABEL.to_string(),
    })
}

/// Largest ratio over the sampled angles; spectrum hits are skipped, the
/// first index wins ties.
fn sample_sup(u: &InnerSpec, angles: &[f64]) -> Result<(f64, f64)> {
    let vals: Vec<Option<f64>> = angles
        .par_iter()
        .map(|&t| ratio_or_skip(u, t))
        .collect::<Result<_>>()?;
    let mut best = (0.0, f64::NEG_INFINITY);
    for (t, v) in angles.iter().zip(vals) {
        if let Some(v) = v {
            if v > best.1 {
                best = (*t, v);
            }
        }
    }
    Ok(best)
}

fn ratio_or_skip(u: &InnerSpec, t: f64) -> Result<Option<f64>> {
    match aleksandrov_ratio(u, BoundaryPoint::from_angle(t)) {
        Ok(v) => Ok(Some(v)),
        Err(Error::SpectrumHit { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Golden-section search for a local maximum within `h` of `t`.
fn refine(u: &InnerSpec, t: f64, v: f64, h: f64) -> (f64, f64) {
    if !v.is_finite() {
        return (t, v);
    }
    let f = |s: f64| ratio_or_skip(u, s).ok().flatten().unwrap_or(f64::NEG_INFINITY);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (t - h, t + h);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let (tm, vm) = if fc > fd { (c, fc) } else { (d, fd) };
    if vm > v {
        (tm, vm)
    } else {
        (t, v)
    }
}

/// `1 - 2^{-k}` for `k = 1..=depth`, dropping radii beyond the certified
/// evaluation radius. The flag reports whether any were dropped.
pub fn default_radii(u: &InnerSpec, depth: u32, tol: f64) -> (Vec<f64>, bool) {
    let limit = certified_radius(u, tol);
    let all: Vec<f64> = (1..=depth).map(|k| 1.0 - 0.5f64.powi(k as i32)).collect();
    let kept: Vec<f64> = all.iter().copied().filter(|&r| r <= limit).collect();
    let clipped = kept.len() < all.len();
    (kept, clipped)
}

/// `min |u(r ζ)|` over the last half of an increasing radius schedule.
pub fn radial_liminf_probe(
    u: &InnerSpec,
    zeta: BoundaryPoint,
    radii: &[f64],
    tol: f64,
) -> Result<RadialProbe> {
    if radii.is_empty() {
        return Err(Error::InvalidArgument("empty radius schedule".into()));
    }
    if radii.windows(2).any(|w| !(w[1] > w[0])) || radii.iter().any(|r| !(0.0..1.0).contains(r)) {
        return Err(Error::InvalidArgument("radii must increase inside [0, 1)".into()));
    }
    let tail = &radii[radii.len() / 2..];
    let mut log_min = f64::INFINITY;
    for &r in tail {
        let z = DiskPoint::from_complex(zeta.to_complex() * r)?;
        log_min = log_min.min(eval_log_modulus(u, z, tol)?);
    }
    Ok(RadialProbe {
        point: zeta,
        min_modulus: log_min.exp(),
        log_min_modulus: log_min,
        radii: radii.to_vec(),
        clipped: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inner::Atom;
    use crate::sequence::ZeroSequence;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dp(re: f64, im: f64) -> DiskPoint {
        DiskPoint::new(re, im).unwrap()
    }

    #[test]
    fn spectrum_rules() {
        assert!(spectrum(&InnerSpec::blaschke(vec![dp(0.2, 0.1)])).unwrap().is_empty());
        let s = spectrum(&InnerSpec::s()).unwrap();
        assert_eq!(s.points, vec![BoundaryPoint::ONE]);
        let sz2 = spectrum(&InnerSpec::compose(InnerSpec::s(), InnerSpec::monomial(2))).unwrap();
        assert_eq!(sz2.points.len(), 2);
        assert!(sz2.distance(BoundaryPoint::ONE) < 1e-12);
        assert!(sz2.distance(BoundaryPoint::from_angle(PI)) < 1e-12);
        let u = InnerSpec::singular(vec![Atom::new(BoundaryPoint::from_angle(2.0), 1.0).unwrap()]);
        let p = InnerSpec::multiply(vec![InnerSpec::s(), u.clone(), InnerSpec::s()]);
        assert_eq!(spectrum(&p).unwrap().points.len(), 2);
        assert_eq!(
            spectrum(&p.clone().frostman_shift(dp(0.3, 0.3))).unwrap(),
            spectrum(&p).unwrap()
        );
        let inf = InnerSpec::infinite(ZeroSequence::geometric());
        assert!(spectrum(&inf).unwrap().includes_cluster_points);
        assert!(matches!(
            spectrum(&InnerSpec::compose(InnerSpec::s(), inf)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(aleksandrov_ratio(&InnerSpec::identity(), BoundaryPoint::from_angle(1.0)).unwrap(), 0.0);
        let r = aleksandrov_ratio(&InnerSpec::monomial(2), BoundaryPoint::ONE).unwrap();
        assert!((r - 0.5).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let t = rng.gen::<f64>() * 2.0 * PI - PI;
            if t.abs() < 1e-6 {
                continue;
            }
            let r = aleksandrov_ratio(&InnerSpec::s(), BoundaryPoint::from_angle(t)).unwrap();
            assert!((r - 1.0).abs() < 1e-9, "{t}: {r}");
        }
    }

    #[test]
    fn scan_of_s() {
        let rep = criterion_scan(&InnerSpec::s(), &CriterionConfig::default()).unwrap();
        assert!((rep.sup_ratio - 1.0).abs() < 1e-9);
        assert!(!rep.blowup);
        assert_eq!(rep.radial_probes.len(), 1);
        assert!(rep.radial_probes[0].min_modulus < 1e-100);
        assert_eq!(rep.verdict_hint, VerdictHint::Consistent);
        assert_eq!(rep.hint_label, HINT_LABEL);
    }

    #[test]
    fn radial_probe_examples() {
        let s = InnerSpec::s();
        let radii: Vec<f64> = (1..=10).map(|k| 1.0 - 0.5f64.powi(k)).collect();
        let p = radial_liminf_probe(&s, BoundaryPoint::ONE, &radii, 1e-9).unwrap();
        let r = radii[9];
        assert!((p.log_min_modulus + (1.0 + r) / (1.0 - r)).abs() < 1e-9);
        let fixed = [0.5, 0.9, 0.99, 0.999];
        let p = radial_liminf_probe(&s, BoundaryPoint::from_angle(PI), &fixed, 1e-9).unwrap();
        assert!((p.min_modulus - (-(1.0 - 0.99f64) / 1.99).exp()).abs() < 1e-12);
        let b = InnerSpec::blaschke(vec![dp(0.1, 0.2)]);
        let p = radial_liminf_probe(&b, BoundaryPoint::from_angle(PI), &fixed, 1e-9).unwrap();
        assert!(p.min_modulus > 0.99 && p.min_modulus < 1.0);
    }

    #[test]
    fn frostman_scan_consistent() {
        let u = InnerSpec::s().frostman_shift(dp(0.5, 0.0));
        let rep = criterion_scan(&u, &CriterionConfig::default()).unwrap();
        assert!(!rep.blowup && rep.sup_ratio.is_finite());
        assert_eq!(rep.verdict_hint, VerdictHint::Consistent);
    }
}
