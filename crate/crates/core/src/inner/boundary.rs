use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::InnerSpec;
use crate::error::{Error, Result};
use crate::geometry::BoundaryPoint;

/// Distance to a singular atom below which boundary calculus is refused.
pub const SPECTRUM_CLEARANCE: f64 = 1e-9;

/// `(u(ζ), u'(ζ), u''(ζ))` at a boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryJet {
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

impl BoundaryJet {
    /// `u'/u` and `(u'/u)'`.
    fn log_derivatives(&self) -> (Complex64, Complex64) {
        let l1 = self.d1 / self.value;
        (l1, self.d2 / self.value - l1 * l1)
    }
}

/// Boundary value and first two derivatives, assembled node by node.
pub fn boundary_derivatives(u: &InnerSpec, zeta: BoundaryPoint) -> Result<BoundaryJet> {
    u.jet(zeta)
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl InnerSpec {
    fn jet(&self, zeta: BoundaryPoint) -> Result<BoundaryJet> {
        let z = zeta.to_complex();
        match self {
            InnerSpec::FiniteBlaschke { zeros, unimodular } => {
                let mut value = unimodular.to_complex();
                let (mut l1, mut l2) = (c(0.0), c(0.0));
                for a in zeros {
                    let a = a.to_complex();
                    let p = z - a;
                    let q = 1.0 - a.conj() * z;
                    value *= p / q;
                    l1 += (1.0 - a.norm_sqr()) / (p * q);
                    l2 += -1.0 / (p * p) + a.conj() * a.conj() / (q * q);
                }
                // the value is unimodular on the circle; strip rounding drift
                value /= value.norm();
                Ok(BoundaryJet {
                    value,
                    d1: value * l1,
                    d2: value * (l1 * l1 + l2),
                })
            }
            InnerSpec::Singular { atoms } => {
                let beta = zeta.angle();
                let (mut phase, mut g1, mut g2) = (0.0, c(0.0), c(0.0));
                for at in atoms {
                    let p = at.point.to_complex();
                    let dist = (p - z).norm();
                    if dist < SPECTRUM_CLEARANCE {
                        return Err(Error::SpectrumHit { distance: dist });
                    }
                    // (p + z)/(p - z) = -i cot((α - β)/2) on the circle
                    let h = 0.5 * (at.point.angle() - beta);
                    phase += at.mass * h.cos() / h.sin();
                    let d = p - z;
                    g1 -= at.mass * 2.0 * p / (d * d);
                    g2 -= at.mass * 4.0 * p / (d * d * d);
                }
                let value = Complex64::from_polar(1.0, phase);
                Ok(BoundaryJet {
                    value,
                    d1: g1 * value,
                    d2: (g2 + g1 * g1) * value,
                })
            }
            InnerSpec::InfiniteBlaschke { .. } => Err(Error::Unsupported(
                "boundary derivatives of infinite Blaschke products".into(),
            )),
            InnerSpec::Product { factors } => {
                let mut value = c(1.0);
                let (mut l1, mut l2) = (c(0.0), c(0.0));
                for f in factors {
                    let j = f.jet(zeta)?;
                    let (a, b) = j.log_derivatives();
                    value *= j.value;
                    l1 += a;
                    l2 += b;
                }
                Ok(BoundaryJet {
                    value,
                    d1: value * l1,
                    d2: value * (l1 * l1 + l2),
                })
            }
            InnerSpec::Compose { outer, inner } => {
                let i = inner.jet(zeta)?;
                let w = unimodular(i.value)?;
                let o = outer.jet(w)?;
                Ok(BoundaryJet {
                    value: o.value,
                    d1: o.d1 * i.d1,
                    d2: o.d2 * i.d1 * i.d1 + o.d1 * i.d2,
                })
            }
            InnerSpec::FrostmanShift { base, a } => {
                let b = base.jet(zeta)?;
                let a = a.to_complex();
                let w = b.value;
                let q = 1.0 - a.conj() * w;
                let k = a.norm_sqr() - 1.0;
                let t1 = k / (q * q);
                let t2 = 2.0 * a.conj() * k / (q * q * q);
                Ok(BoundaryJet {
                    value: (a - w) / q,
                    d1: t1 * b.d1,
                    d2: t2 * b.d1 * b.d1 + t1 * b.d2,
                })
            }
        }
    }
}

fn unimodular(w: Complex64) -> Result<BoundaryPoint> {
    if (w.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::NotUnimodular { re: w.re, im: w.im });
    }
    Ok(BoundaryPoint::project(w))
}
