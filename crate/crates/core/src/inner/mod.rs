//! Inner functions as expression trees.
//!
//! Leaves are finite Blaschke products, truncatable infinite Blaschke products
//! and finitely atomic singular inner functions; nodes multiply, compose and
//! Frostman-shift them.

mod boundary;
mod eval;
mod zeros;

pub use boundary::{boundary_derivatives, BoundaryJet};
pub use eval::{
    certified_radius, eval, eval_log_modulus, eval_log_modulus_bounded, EvalResult, LogModulus,
};
pub(crate) use eval::truncation_indices;
pub use zeros::{preimages, zeros_within};
pub(crate) use zeros::unit_circle_preimages;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BoundaryPoint, DiskPoint};
use crate::sequence::ZeroSequence;

/// A point mass `mass · δ_point` of a singular measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AtomWire")]
pub struct Atom {
    pub point: BoundaryPoint,
    pub mass: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomWire {
    point: BoundaryPoint,
    mass: f64,
}

impl TryFrom<AtomWire> for Atom {
    type Error = Error;
    fn try_from(w: AtomWire) -> Result<Self> {
        Atom::new(w.point, w.mass)
    }
}

impl Atom {
    pub fn new(point: BoundaryPoint, mass: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidSpec(format!("atom mass {mass} must be positive")));
        }
        Ok(Atom { point, mass })
    }
}

fn unit() -> BoundaryPoint {
    BoundaryPoint::ONE
}

fn is_unit(p: &BoundaryPoint) -> bool {
    *p == BoundaryPoint::ONE
}

/// An inner function on the unit disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InnerSpec {
    /// `λ Π (z - a) / (1 - conj(a) z)`, zeros repeated by multiplicity.
    FiniteBlaschke {
        zeros: Vec<DiskPoint>,
        #[serde(default = "unit", skip_serializing_if = "is_unit")]
        unimodular: BoundaryPoint,
    },
    /// `Π (|a|/a) (a - z) / (1 - conj(a) z)` over a generated sequence, each
    /// factor positive at the origin.
    InfiniteBlaschke { sequence: ZeroSequence },
    /// `exp(-Σ λ_k (ζ_k + z) / (ζ_k - z))`.
    Singular { atoms: Vec<Atom> },
    Product { factors: Vec<InnerSpec> },
    Compose {
        outer: Box<InnerSpec>,
        inner: Box<InnerSpec>,
    },
    /// `(a - u) / (1 - conj(a) u)`.
    FrostmanShift { base: Box<InnerSpec>, a: DiskPoint },
}

impl InnerSpec {
    /// The atomic singular function `exp(-(1 + z) / (1 - z))`.
    pub fn s() -> Self {
        Self::atomic(BoundaryPoint::ONE, 1.0).expect("unit mass is positive")
    }

    pub fn atomic(point: BoundaryPoint, mass: f64) -> Result<Self> {
        Ok(InnerSpec::Singular {
            atoms: vec![Atom::new(point, mass)?],
        })
    }

    pub fn singular(atoms: Vec<Atom>) -> Self {
        InnerSpec::Singular { atoms }
    }

    pub fn blaschke(zeros: Vec<DiskPoint>) -> Self {
        InnerSpec::FiniteBlaschke {
            zeros,
            unimodular: BoundaryPoint::ONE,
        }
    }

    pub fn blaschke_rotated(zeros: Vec<DiskPoint>, unimodular: BoundaryPoint) -> Self {
        InnerSpec::FiniteBlaschke { zeros, unimodular }
    }

    /// `z -> z`.
    pub fn identity() -> Self {
        Self::monomial(1)
    }

    /// `z -> z^k`.
    pub fn monomial(k: usize) -> Self {
        Self::blaschke(vec![DiskPoint::ORIGIN; k])
    }

    pub fn infinite(sequence: ZeroSequence) -> Self {
        InnerSpec::InfiniteBlaschke { sequence }
    }

    /// Pointwise product; a single factor is returned unchanged and the empty
    /// product is the constant 1.
    pub fn multiply(mut factors: Vec<InnerSpec>) -> Self {
        match factors.len() {
            0 => Self::blaschke(Vec::new()),
            1 => factors.pop().expect("one factor"),
            _ => InnerSpec::Product { factors },
        }
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: InnerSpec, inner: InnerSpec) -> Self {
        InnerSpec::Compose {
            outer: Box::new(outer),
            inner: Box::new(inner),
        }
    }

    /// `(a - u) / (1 - conj(a) u)`.
    pub fn frostman_shift(self, a: DiskPoint) -> Self {
        InnerSpec::FrostmanShift {
            base: Box::new(self),
            a,
        }
    }

    /// Parses and validates a JSON spec.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    /// True when some leaf is an infinite Blaschke product.
    pub fn has_infinite_leaf(&self) -> bool {
        self.leaves().any(|l| matches!(l, InnerSpec::InfiniteBlaschke { .. }))
    }

    /// Leaves in depth-first order.
    pub fn leaves(&self) -> impl Iterator<Item = &InnerSpec> {
        let mut stack = vec![self];
        std::iter::from_fn(move || {
            while let Some(node) = stack.pop() {
                match node {
                    InnerSpec::Product { factors } => stack.extend(factors.iter().rev()),
                    InnerSpec::Compose { outer, inner } => {
                        stack.push(inner);
                        stack.push(outer);
                    }
                    InnerSpec::FrostmanShift { base, .. } => stack.push(base),
                    leaf => return Some(leaf),
                }
            }
            None
        })
    }

    /// Truncation indices of the infinite leaves, in leaf order.
    pub fn sequence_budgets(&self) -> Vec<usize> {
        self.leaves()
            .filter_map(|l| match l {
                InnerSpec::InfiniteBlaschke { sequence } => Some(sequence.budget()),
                _ => None,
            })
            .collect()
    }

    /// Zeros and rotation when the spec is a finite Blaschke product or a
    /// product of them.
    pub fn as_finite_blaschke(&self) -> Option<(Vec<DiskPoint>, BoundaryPoint)> {
        match self {
            InnerSpec::FiniteBlaschke { zeros, unimodular } => Some((zeros.clone(), *unimodular)),
            InnerSpec::Product { factors } => {
                let mut zs = Vec::new();
                let mut lam = num_complex::Complex64::new(1.0, 0.0);
                for f in factors {
                    let (z, l) = f.as_finite_blaschke()?;
                    zs.extend(z);
                    lam *= l.to_complex();
                }
                Some((zs, BoundaryPoint::project(lam)))
            }
            InnerSpec::InfiniteBlaschke { sequence } if sequence.is_finite() => {
                // each factor rotated to be positive at the origin
                let pts = sequence.points(sequence.budget()).ok()?;
                let mut lam = num_complex::Complex64::new(1.0, 0.0);
                let mut zs = Vec::with_capacity(pts.len());
                for p in pts {
                    let a = p.to_complex();
                    if a.norm() > 0.0 {
                        lam *= -a.conj() / a.norm();
                    }
                    zs.push(DiskPoint::from_complex(a).ok()?);
                }
                Some((zs, BoundaryPoint::project(lam)))
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let b = InnerSpec::blaschke(vec![DiskPoint::new(0.5, 0.0).unwrap()]);
        let spec = InnerSpec::multiply(vec![
            InnerSpec::compose(InnerSpec::s(), InnerSpec::monomial(2)),
            b.clone().frostman_shift(DiskPoint::new(0.1, -0.2).unwrap()),
            InnerSpec::infinite(ZeroSequence::geometric()),
        ]);
        let text = spec.to_json();
        assert_eq!(InnerSpec::from_json(&text).unwrap(), spec);
        assert!(text.contains(r#""kind":"compose""#));
        let s = InnerSpec::from_json(r#"{"kind":"singular","atoms":[{"point":[1,0],"mass":1}]}"#)
            .unwrap();
        assert_eq!(s, InnerSpec::s());
    }

    #[test]
    fn json_rejects_bad_specs() {
        for bad in [
            r#"{"kind":"singular","atoms":[{"point":[1,0],"mass":0}]}"#,
            r#"{"kind":"singular","atoms":[{"point":[0.5,0],"mass":1}]}"#,
            r#"{"kind":"finite_blaschke","zeros":[[1,0]]}"#,
            r#"{"kind":"finite_blaschke","zeros":[],"unimodular":[0.5,0]}"#,
            r#"{"kind":"mystery"}"#,
            r#"{"kind":"product","factors":[],"extra":1}"#,
            r#"{"kind":"infinite_blaschke","sequence":{"generator":"thin","budget":500}}"#,
        ] {
            assert!(matches!(InnerSpec::from_json(bad), Err(Error::InvalidSpec(_))), "{bad}");
        }
    }

    #[test]
    fn constructors() {
        let u = InnerSpec::s();
        assert_eq!(InnerSpec::multiply(vec![u.clone()]), u);
        assert_eq!(InnerSpec::monomial(2).as_finite_blaschke().unwrap().0.len(), 2);
        assert!(!u.has_infinite_leaf());
        let p = InnerSpec::multiply(vec![u.clone(), InnerSpec::infinite(ZeroSequence::thin())]);
        assert!(p.has_infinite_leaf());
        assert_eq!(p.leaves().count(), 2);
        assert_eq!(p.sequence_budgets(), vec![64]);
    }
}
