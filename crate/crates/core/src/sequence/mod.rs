//! Closed-form zero sequences and the constants that classify them.
//!
//! Every generator emits [`GapPoint`]s, so `1 - |z_n|` is exact even when
//! `z_n` itself rounds to 1 in `f64`. Indices are 1-based throughout.

mod classify;

pub use classify::*;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::geometry::{BoundaryPoint, DiskPoint, GapPoint};

/// Default index budget for sequences whose gaps decay superexponentially.
pub const DEFAULT_BUDGET_FAST: usize = 64;
/// Default index budget for sequences whose gaps decay polynomially.
pub const DEFAULT_BUDGET_SLOW: usize = 10_000;

/// A closed-form rule `n -> z_n`.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// `z_n = 1 - ratio^n`, `n >= 1`.
    Geometric { ratio: f64 },
    /// `z_n = 1 - n^{-p}`, `n >= 1` (so `z_1 = 0`).
    Power { p: f64 },
    /// `x_j = (3^j - 1) / (3^j + 1)`, the zeros of the iterates of
    /// `(z - 1/2) / (1 - z/2)`.
    HyperbolicOrbit,
    /// `z_n = n / (n - i)`, the zeros of the iterates of a parabolic automorphism.
    ParabolicOrbit,
    /// `1 - n^{-n}` and `1 - 2 n^{-n}` for `n = 2, 3, ...`, interleaved.
    InterleavedThin,
    /// `z_n = 1 - n^{-n}`, `n >= 1`.
    Thin,
    /// A finite list.
    Explicit { points: Vec<DiskPoint> },
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::Geometric { .. } => "geometric",
            Generator::Power { .. } => "power",
            Generator::HyperbolicOrbit => "hyperbolic_orbit",
            Generator::ParabolicOrbit => "parabolic_orbit",
            Generator::InterleavedThin => "interleaved_thin",
            Generator::Thin => "thin",
            Generator::Explicit { .. } => "explicit",
        }
    }

    fn default_budget(&self) -> usize {
        match self {
            Generator::Power { .. } | Generator::ParabolicOrbit => DEFAULT_BUDGET_SLOW,
            Generator::Explicit { points } => points.len(),
            _ => DEFAULT_BUDGET_FAST,
        }
    }

    fn is_finite(&self) -> bool {
        matches!(self, Generator::Explicit { .. })
    }

    /// `1 - |z_n|` and `arg z_n`.
    fn point(&self, n: usize) -> GapPoint {
        debug_assert!(n >= 1);
        let nf = n as f64;
        match self {
            Generator::Geometric { ratio } => GapPoint::new(ratio.powf(nf), 0.0),
            Generator::Power { p } => GapPoint::new(nf.powf(-p), 0.0),
            Generator::HyperbolicOrbit => GapPoint::new(2.0 / (3f64.powi(n as i32) + 1.0), 0.0),
            Generator::ParabolicOrbit => {
                let h = (nf * nf + 1.0).sqrt();
                let (hi, lo) = atan_inv(n);
                GapPoint::with_angle_lo(1.0 / (h * (h + nf)), hi, lo)
            }
            Generator::InterleavedThin => {
                let m = (n - 1) / 2 + 2;
                let base = (m as f64).powi(-(m as i32));
                let gap = if n % 2 == 1 { base } else { 2.0 * base };
                GapPoint::new(gap, 0.0)
            }
            Generator::Thin => GapPoint::new(nf.powf(-nf), 0.0),
            Generator::Explicit { points } => GapPoint::from_complex(points[n - 1].to_complex()),
        }
    }

    /// Upper bound on `sum_{n > big_n} (1 - |z_n|)` for the untruncated sequence.
    fn tail_gap_bound(&self, big_n: usize) -> f64 {
        let nf = big_n as f64;
        match self {
            Generator::Geometric { ratio } => ratio.powf(nf + 1.0) / (1.0 - ratio),
            Generator::Power { p } => {
                if big_n == 0 {
                    1.0 + 1.0 / (p - 1.0)
                } else {
                    nf.powf(1.0 - p) / (p - 1.0)
                }
            }
            Generator::HyperbolicOrbit => 3f64.powf(-nf),
            Generator::ParabolicOrbit => {
                if big_n == 0 {
                    1.0
                } else {
                    0.5 / nf
                }
            }
            Generator::Thin => {
                if big_n == 0 {
                    1.0 + superexp_tail(2)
                } else {
                    superexp_tail(big_n + 1)
                }
            }
            Generator::InterleavedThin => {
                if big_n == 0 {
                    return 3.0 * superexp_tail(2);
                }
                let m = (big_n - 1) / 2 + 2;
                let rest = 3.0 * superexp_tail(m + 1);
                if big_n % 2 == 1 {
                    rest + 2.0 * (m as f64).powi(-(m as i32))
                } else {
                    rest
                }
            }
            Generator::Explicit { points } => points
                .iter()
                .skip(big_n)
                .map(|p| 1.0 - p.modulus())
                .sum(),
        }
    }

    fn cluster_points(&self) -> Vec<BoundaryPoint> {
        match self {
            Generator::Explicit { .. } => Vec::new(),
            _ => vec![BoundaryPoint::ONE],
        }
    }
}

/// `atan(1/n)` as an unevaluated sum `hi + lo`. For `n >= 8` the odd power
/// series is summed around a double-double `1/n`.
fn atan_inv(n: usize) -> (f64, f64) {
    let nf = n as f64;
    if n < 8 {
        return ((1.0 / nf).atan(), 0.0);
    }
    let x = 1.0 / nf;
    let x_lo = (-x).mul_add(nf, 1.0) / nf;
    let x2 = x * x;
    let mut term = x;
    let mut tail = 0.0;
    for k in 1..40 {
        term *= -x2;
        let t = term / (2 * k + 1) as f64;
        tail += t;
        if t.abs() < 1e-34 {
            break;
        }
    }
    let s = x + tail;
    let bb = s - x;
    let err = (x - (s - bb)) + (tail - bb);
    (s, err + x_lo)
}

/// `sum_{n >= m} n^{-n} <= m^{-m} / (1 - 1/m)` for `m >= 2`.
fn superexp_tail(m: usize) -> f64 {
    let mf = m as f64;
    mf.powf(-mf) / (1.0 - 1.0 / mf)
}

/// A lazily generated zero sequence with an index budget.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSequence {
    generator: Generator,
    budget: usize,
}

impl ZeroSequence {
    pub fn new(generator: Generator, budget: Option<usize>) -> Result<Self> {
        match &generator {
            Generator::Geometric { ratio } if !(*ratio > 0.0 && *ratio < 1.0) => {
                return Err(Error::InvalidSpec(format!(
                    "geometric ratio {ratio} outside (0, 1)"
                )))
            }
            Generator::Power { p } if !(*p > 1.0 && p.is_finite()) => {
                return Err(Error::InvalidSpec(format!(
                    "power exponent {p} must exceed 1 for a convergent Blaschke sum"
                )))
            }
            Generator::Explicit { points } if points.is_empty() => {
                return Err(Error::InvalidSpec("explicit sequence is empty".into()))
            }
            _ => {}
        }
        let budget = budget.unwrap_or_else(|| generator.default_budget());
        if budget == 0 {
            return Err(Error::InvalidSpec("sequence budget must be positive".into()));
        }
        if let Generator::Explicit { points } = &generator {
            if budget > points.len() {
                return Err(Error::InvalidSpec(format!(
                    "budget {budget} exceeds explicit list length {}",
                    points.len()
                )));
            }
        }
        let seq = ZeroSequence { generator, budget };
        // every materializable point must keep a normal, positive gap
        let g = seq.generator.point(budget).gap;
        if !(g.is_normal() && g > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "budget {budget} drives 1 - |z_n| below f64 range for {}",
                seq.generator.name()
            )));
        }
        Ok(seq)
    }

    pub fn geometric() -> Self {
        Self::new(Generator::Geometric { ratio: 0.5 }, None).expect("valid")
    }

    pub fn power(p: f64) -> Result<Self> {
        Self::new(Generator::Power { p }, None)
    }

    pub fn hyperbolic_orbit() -> Self {
        Self::new(Generator::HyperbolicOrbit, None).expect("valid")
    }

    pub fn parabolic_orbit() -> Self {
        Self::new(Generator::ParabolicOrbit, None).expect("valid")
    }

    pub fn interleaved_thin() -> Self {
        Self::new(Generator::InterleavedThin, None).expect("valid")
    }

    pub fn thin() -> Self {
        Self::new(Generator::Thin, None).expect("valid")
    }

    pub fn explicit(points: Vec<DiskPoint>) -> Result<Self> {
        Self::new(Generator::Explicit { points }, None)
    }

    pub fn with_budget(&self, budget: usize) -> Result<Self> {
        Self::new(self.generator.clone(), Some(budget))
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// True when the sequence has finitely many points (an explicit list).
    pub fn is_finite(&self) -> bool {
        self.generator.is_finite()
    }

    /// The `n`-th point, `1 <= n <= budget`.
    pub fn point(&self, n: usize) -> Result<GapPoint> {
        self.check_index(n)?;
        Ok(self.generator.point(n))
    }

    pub fn points(&self, upto: usize) -> Result<Vec<GapPoint>> {
        self.check_index(upto)?;
        Ok((1..=upto).map(|n| self.generator.point(n)).collect())
    }

    /// Upper bound on `sum_{n > upto} (1 - |z_n|)` over the full sequence.
    pub fn tail_gap_bound(&self, upto: usize) -> f64 {
        self.generator.tail_gap_bound(upto)
    }

    /// Upper bound on `sup_{n > upto} (1 - |z_n|)`.
    pub fn max_tail_gap(&self, upto: usize) -> f64 {
        match &self.generator {
            Generator::Explicit { points } => points
                .iter()
                .skip(upto)
                .map(|p| 1.0 - p.modulus())
                .fold(0.0, f64::max),
            g => g.point(upto + 1).gap.max(g.point(upto + 2).gap),
        }
    }

    /// Boundary accumulation points of the zeros.
    pub fn cluster_points(&self) -> Vec<BoundaryPoint> {
        self.generator.cluster_points()
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.budget {
            return Err(Error::InvalidArgument(format!(
                "index {n} outside 1..={} for {}",
                self.budget,
                self.generator.name()
            )));
        }
        Ok(())
    }

    fn params_json(&self) -> Value {
        match &self.generator {
            Generator::Geometric { ratio } => json!({ "ratio": ratio }),
            Generator::Power { p } => json!({ "p": p }),
            Generator::Explicit { points } => json!({ "points": points }),
            _ => Value::Object(Map::new()),
        }
    }
}

/// Wire form `{"generator": name, "params": {...}, "budget": N}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SequenceWire {
    generator: String,
    #[serde(default)]
    params: Value,
    #[serde(default)]
    budget: Option<usize>,
}

fn param_f64(params: &Value, key: &str, default: Option<f64>) -> Result<f64> {
    match params.get(key) {
        Some(v) => v
            .as_f64()
            .ok_or_else(|| Error::InvalidSpec(format!("param {key} must be a number"))),
        None => default.ok_or_else(|| Error::InvalidSpec(format!("missing param {key}"))),
    }
}

impl TryFrom<SequenceWire> for ZeroSequence {
    type Error = Error;
    fn try_from(w: SequenceWire) -> Result<Self> {
        let generator = match w.generator.as_str() {
            "geometric" => Generator::Geometric {
                ratio: param_f64(&w.params, "ratio", Some(0.5))?,
            },
            "power" => Generator::Power {
                p: param_f64(&w.params, "p", None)?,
            },
            "hyperbolic_orbit" => Generator::HyperbolicOrbit,
            "parabolic_orbit" => Generator::ParabolicOrbit,
            "interleaved_thin" => Generator::InterleavedThin,
            "thin" => Generator::Thin,
            "explicit" => {
                let pts = w
                    .params
                    .get("points")
                    .cloned()
                    .ok_or_else(|| Error::InvalidSpec("explicit needs params.points".into()))?;
                let points: Vec<DiskPoint> = serde_json::from_value(pts)
                    .map_err(|e| Error::InvalidSpec(format!("explicit points: {e}")))?;
                Generator::Explicit { points }
            }
            other => return Err(Error::InvalidSpec(format!("unknown generator {other:?}"))),
        };
        ZeroSequence::new(generator, w.budget)
    }
}

impl Serialize for ZeroSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SequenceWire {
            generator: self.generator.name().to_string(),
            params: self.params_json(),
            budget: Some(self.budget),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ZeroSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = SequenceWire::deserialize(d)?;
        ZeroSequence::try_from(w).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::pseudo_dist_gap;

    #[test]
    fn closed_forms() {
        let g = ZeroSequence::geometric();
        assert_eq!(g.point(3).unwrap().gap, 0.125);
        let h = ZeroSequence::hyperbolic_orbit();
        assert!((h.point(1).unwrap().modulus() - 0.5).abs() < 1e-16);
        assert!((h.point(2).unwrap().modulus() - 0.8).abs() < 1e-16);
        let p = ZeroSequence::parabolic_orbit();
        let z = p.point(1).unwrap().to_complex();
        assert!((z.re - 0.5).abs() < 1e-15 && (z.im - 0.5).abs() < 1e-15);
        let t = ZeroSequence::interleaved_thin();
        assert_eq!(t.point(1).unwrap().gap, 0.25);
        assert_eq!(t.point(2).unwrap().gap, 0.5);
        assert_eq!(t.point(3).unwrap().gap, 1.0 / 27.0);
        assert_eq!(t.point(4).unwrap().gap, 2.0 / 27.0);
        let q = ZeroSequence::power(2.0).unwrap();
        assert_eq!(q.point(1).unwrap().modulus(), 0.0);
    }

    #[test]
    fn parabolic_points_lie_on_circle_through_half() {
        let p = ZeroSequence::parabolic_orbit();
        for n in [1, 2, 10, 1000, 10_000] {
            let z = p.point(n).unwrap().to_complex();
            let nf = n as f64;
            let exact = num_complex::Complex64::new(nf, 0.0) / num_complex::Complex64::new(nf, -1.0);
            assert!((z - exact).norm() < 1e-15);
        }
    }

    #[test]
    fn hyperbolic_recurrence() {
        // x_{j+1} is the preimage of x_j under (z - 1/2) / (1 - z/2)
        let h = ZeroSequence::hyperbolic_orbit();
        for j in 1..30 {
            let x = h.point(j).unwrap().modulus();
            let next = h.point(j + 1).unwrap().modulus();
            let inv = (x + 0.5) / (1.0 + 0.5 * x);
            assert!((inv - next).abs() < 1e-14);
        }
    }

    #[test]
    fn tail_bounds_dominate_partial_tails() {
        for seq in [
            ZeroSequence::geometric(),
            ZeroSequence::hyperbolic_orbit(),
            ZeroSequence::thin(),
            ZeroSequence::interleaved_thin(),
            ZeroSequence::power(2.0).unwrap(),
            ZeroSequence::power(3.5).unwrap(),
            ZeroSequence::parabolic_orbit(),
        ] {
            let budget = seq.budget().min(2000);
            for upto in [0usize, 1, 2, 3, 7, 10, 20] {
                let partial: f64 = (upto + 1..=budget).map(|n| seq.point(n).unwrap().gap).sum();
                let bound = seq.tail_gap_bound(upto);
                assert!(
                    partial <= bound * (1.0 + 1e-12),
                    "{} upto {upto}: {partial} > {bound}",
                    seq.generator().name()
                );
                let mx = (upto + 1..=budget).map(|n| seq.point(n).unwrap().gap).fold(0.0, f64::max);
                assert!(mx <= seq.max_tail_gap(upto));
            }
        }
    }

    #[test]
    fn validation() {
        assert!(ZeroSequence::power(1.0).is_err());
        assert!(ZeroSequence::new(Generator::Geometric { ratio: 1.0 }, None).is_err());
        assert!(ZeroSequence::explicit(vec![]).is_err());
        assert!(ZeroSequence::new(Generator::Thin, Some(200)).is_err());
        assert!(ZeroSequence::geometric().point(0).is_err());
        assert!(ZeroSequence::geometric().point(65).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = r#"{"generator":"power","params":{"p":2.0},"budget":100}"#;
        let seq: ZeroSequence = serde_json::from_str(s).unwrap();
        assert_eq!(seq.budget(), 100);
        let back: ZeroSequence = serde_json::from_str(&serde_json::to_string(&seq).unwrap()).unwrap();
        assert_eq!(back, seq);
        let e: ZeroSequence =
            serde_json::from_str(r#"{"generator":"explicit","params":{"points":[[0.5,0.0],[0.0,-0.5]]}}"#)
                .unwrap();
        assert_eq!(e.budget(), 2);
        assert!(serde_json::from_str::<ZeroSequence>(r#"{"generator":"nope"}"#).is_err());
        let d = pseudo_dist_gap(e.point(1).unwrap(), e.point(2).unwrap());
        assert!(d > 0.0);
    }
}
