//! Analytic maps of the disc: closed-form catalog entries, truncated series,
//! and expressions built from them.

use num_complex::Complex64;

use crate::disk::DiskPoint;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::quadrature;
use crate::series::{certified_radius, TaylorSeries};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Below this modulus a first derivative counts as vanishing.
pub const LOCAL_UNIVALENCE_TOLERANCE: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub enum AnalyticMap {
    Constant(Complex64),
    Identity,
    /// `(a z + b) / (c z + d)`
    Mobius {
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
    },
    /// `z / (1 - z)`
    HalfPlane,
    /// `z / (1 - z)^2`
    Koebe,
    /// `(e^{c z} - 1) / c`
    Exponential {
        c: Complex64,
    },
    /// `½ log((1 + z) / (1 - z))`
    LogStrip,
    Series(TaylorSeries),
    Scaled(Complex64, Box<AnalyticMap>),
    Sum(Vec<AnalyticMap>),
    Product(Box<AnalyticMap>, Box<AnalyticMap>),
    Compose {
        outer: Box<AnalyticMap>,
        inner: Box<AnalyticMap>,
    },
    /// `z ↦ ∫_0^z ω(ζ) h'(ζ) dζ`, the co-analytic part determined by `h` and a dilatation.
    DilatationPrimitive {
        h: Box<AnalyticMap>,
        omega: Box<AnalyticMap>,
    },
}

impl AnalyticMap {
    pub fn zero() -> Self {
        AnalyticMap::Constant(ZERO)
    }

    pub fn constant(c: Complex64) -> Self {
        AnalyticMap::Constant(c)
    }

    pub fn mobius(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        if det.norm() < LOCAL_UNIVALENCE_TOLERANCE {
            return Err(Error::parameter(
                "mobius determinant",
                det.norm(),
                "ad - bc must be nonzero",
            ));
        }
        Ok(AnalyticMap::Mobius { a, b, c, d })
    }

    /// The disc automorphism σ_a as a Möbius map.
    pub fn automorphism(a: DiskPoint) -> Self {
        let a = a.value();
        AnalyticMap::Mobius {
            a: ONE,
            b: a,
            c: a.conj(),
            d: ONE,
        }
    }

    pub fn exponential(c: Complex64) -> Result<Self> {
        if c.norm() == 0.0 {
            return Err(Error::parameter(
                "c",
                0.0,
                "exponential rate must be nonzero",
            ));
        }
        Ok(AnalyticMap::Exponential { c })
    }

    /// Polynomial `Σ c_k z^k` (exact, radius 1).
    pub fn polynomial(coefficients: &[Complex64]) -> Result<Self> {
        let mut v = coefficients.to_vec();
        if v.len() < 2 {
            v.resize(2, ZERO);
        }
        Ok(AnalyticMap::Series(TaylorSeries::new(v, 1.0)?))
    }

    pub fn scaled(self, c: Complex64) -> Self {
        AnalyticMap::Scaled(c, Box::new(self))
    }

    pub fn plus(self, other: AnalyticMap) -> Self {
        AnalyticMap::Sum(vec![self, other])
    }

    pub fn times(self, other: AnalyticMap) -> Self {
        AnalyticMap::Product(Box::new(self), Box::new(other))
    }

    pub fn compose(self, inner: AnalyticMap) -> Self {
        AnalyticMap::Compose {
            outer: Box::new(self),
            inner: Box::new(inner),
        }
    }

    /// Structurally the zero map.
    pub fn is_zero(&self) -> bool {
        match self {
            AnalyticMap::Constant(c) => *c == ZERO,
            AnalyticMap::Scaled(c, m) => *c == ZERO || m.is_zero(),
            AnalyticMap::Series(s) => s.coefficients().iter().all(|c| *c == ZERO),
            AnalyticMap::Sum(v) => v.iter().all(AnalyticMap::is_zero),
            AnalyticMap::Product(a, b) => a.is_zero() || b.is_zero(),
            _ => false,
        }
    }

    /// Structurally constant (derivatives vanish identically).
    pub fn is_constant(&self) -> bool {
        match self {
            AnalyticMap::Constant(_) => true,
            AnalyticMap::Scaled(c, m) => *c == ZERO || m.is_constant(),
            AnalyticMap::Series(s) => s.is_polynomial_of_degree(0),
            AnalyticMap::Sum(v) => v.iter().all(AnalyticMap::is_constant),
            AnalyticMap::Product(a, b) => a.is_constant() && b.is_constant(),
            AnalyticMap::Compose { outer, .. } => outer.is_constant(),
            _ => false,
        }
    }

    /// The Möbius coefficients when the map is a bare Möbius entry (identity included).
    pub fn as_mobius(&self) -> Option<[Complex64; 4]> {
        match self {
            AnalyticMap::Identity => Some([ONE, ZERO, ZERO, ONE]),
            AnalyticMap::Mobius { a, b, c, d } => Some([*a, *b, *c, *d]),
            AnalyticMap::HalfPlane => Some([ONE, ZERO, -ONE, ONE]),
            _ => None,
        }
    }

    /// Value and derivatives through third order at `z`.
    pub fn jet(&self, z: Complex64) -> Result<Jet> {
        let jet = self.raw_jet(z)?;
        if jet.0.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            Ok(jet)
        } else {
            Err(Error::Singular {
                what: "analytic map",
                point: z,
            })
        }
    }

    fn raw_jet(&self, z: Complex64) -> Result<Jet> {
        Ok(match self {
            AnalyticMap::Constant(c) => Jet::constant(*c),
            AnalyticMap::Identity => Jet::variable(z),
            AnalyticMap::Mobius { a, b, c, d } => {
                let den = c * z + d;
                if den.norm() == 0.0 {
                    return Err(Error::Singular {
                        what: "Möbius map",
                        point: z,
                    });
                }
                let det = a * d - b * c;
                let inv = ONE / den;
                let inv2 = inv * inv;
                Jet([
                    (a * z + b) * inv,
                    det * inv2,
                    -2.0 * c * det * inv2 * inv,
                    6.0 * c * c * det * inv2 * inv2,
                ])
            }
            AnalyticMap::HalfPlane => {
                let inv = ONE / (ONE - z);
                let inv2 = inv * inv;
                Jet([z * inv, inv2, 2.0 * inv2 * inv, 6.0 * inv2 * inv2])
            }
            AnalyticMap::Koebe => {
                let inv = ONE / (ONE - z);
                let inv2 = inv * inv;
                let inv3 = inv2 * inv;
                let inv4 = inv2 * inv2;
                Jet([
                    z * inv2,
                    (ONE + z) * inv3,
                    (4.0 + 2.0 * z) * inv4,
                    (18.0 + 6.0 * z) * inv4 * inv,
                ])
            }
            AnalyticMap::Exponential { c } => {
                let e = (c * z).exp();
                Jet([(e - ONE) / c, e, c * e, c * c * e])
            }
            AnalyticMap::LogStrip => {
                let w = ONE - z * z;
                let inv = ONE / w;
                let inv2 = inv * inv;
                Jet([
                    0.5 * ((ONE + z) / (ONE - z)).ln(),
                    inv,
                    2.0 * z * inv2,
                    (2.0 + 6.0 * z * z) * inv2 * inv,
                ])
            }
            AnalyticMap::Series(s) => s.jet(z)?,
            AnalyticMap::Scaled(c, m) => m.jet(z)?.scale(*c),
            AnalyticMap::Sum(terms) => {
                let mut acc = Jet::constant(ZERO);
                for t in terms {
                    acc = acc + t.jet(z)?;
                }
                acc
            }
            AnalyticMap::Product(a, b) => a.jet(z)? * b.jet(z)?,
            AnalyticMap::Compose { outer, inner } => {
                let u = inner.jet(z)?;
                Jet::compose(outer.jet(u.value())?, u)
            }
            AnalyticMap::DilatationPrimitive { h, omega } => {
                let hj = h.jet(z)?;
                let wj = omega.jet(z)?;
                let [w0, w1, w2, _] = wj.0;
                let [_, h1, h2, h3] = hj.0;
                let value = if z == ZERO {
                    ZERO
                } else {
                    let integral = quadrature::integrate(
                        |t| {
                            let zt = z * t;
                            Ok(omega.jet(zt)?.value() * h.jet(zt)?.d1())
                        },
                        0.0,
                        1.0,
                        1e-16,
                        1e-14,
                    )?;
                    z * integral
                };
                Jet([
                    value,
                    w0 * h1,
                    w1 * h1 + w0 * h2,
                    w2 * h1 + 2.0 * w1 * h2 + w0 * h3,
                ])
            }
        })
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self {
            // cheaper than the jet: no derivative work inside the quadrature
            AnalyticMap::DilatationPrimitive { h, omega } => {
                if z == ZERO {
                    return Ok(ZERO);
                }
                let integral = quadrature::integrate(
                    |t| {
                        let zt = z * t;
                        Ok(omega.eval(zt)? * h.jet(zt)?.d1())
                    },
                    0.0,
                    1.0,
                    1e-16,
                    1e-14,
                )?;
                Ok(z * integral)
            }
            AnalyticMap::Compose { outer, inner } => outer.eval(inner.eval(z)?),
            AnalyticMap::Scaled(c, m) => Ok(*c * m.eval(z)?),
            AnalyticMap::Sum(terms) => terms.iter().map(|t| t.eval(z)).sum(),
            _ => Ok(self.jet(z)?.value()),
        }
    }

    /// Taylor expansion at the origin truncated at `order`.
    pub fn to_series(&self, order: usize) -> Result<TaylorSeries> {
        let order = order.max(1);
        let build = |f: &dyn Fn(usize) -> Complex64| {
            TaylorSeries::with_certified_radius((0..=order).map(f).collect())
        };
        match self {
            AnalyticMap::Constant(c) => build(&|k| if k == 0 { *c } else { ZERO }),
            AnalyticMap::Identity => build(&|k| if k == 1 { ONE } else { ZERO }),
            AnalyticMap::Mobius { a, b, c, d } => {
                if d.norm() == 0.0 {
                    return Err(Error::Singular {
                        what: "Möbius map",
                        point: ZERO,
                    });
                }
                // (b + a z)/d · Σ (-c/d)^n z^n
                let q = -c / d;
                let mut geo = Vec::with_capacity(order + 1);
                let mut p = ONE;
                for _ in 0..=order {
                    geo.push(p);
                    p *= q;
                }
                let coeffs: Vec<Complex64> = (0..=order)
                    .map(|k| {
                        let mut v = b * geo[k];
                        if k >= 1 {
                            v += a * geo[k - 1];
                        }
                        v / d
                    })
                    .collect();
                TaylorSeries::with_certified_radius(coeffs)
            }
            AnalyticMap::HalfPlane => build(&|k| if k == 0 { ZERO } else { ONE }),
            AnalyticMap::Koebe => build(&|k| Complex64::new(k as f64, 0.0)),
            AnalyticMap::Exponential { c } => {
                let mut coeffs = vec![ZERO; order + 1];
                let mut term = ONE;
                for (k, slot) in coeffs.iter_mut().enumerate().skip(1) {
                    // c^{k-1}/k!
                    term /= k as f64;
                    *slot = term;
                    term *= c;
                }
                TaylorSeries::with_certified_radius(coeffs)
            }
            AnalyticMap::LogStrip => build(&|k| {
                if k % 2 == 1 {
                    Complex64::new(1.0 / k as f64, 0.0)
                } else {
                    ZERO
                }
            }),
            AnalyticMap::Series(s) => {
                let mut coeffs = s.coefficients().to_vec();
                coeffs.resize(order + 1, ZERO);
                TaylorSeries::new(coeffs, s.reliable_radius())
            }
            AnalyticMap::Scaled(c, m) => Ok(m.to_series(order)?.scale(*c)),
            AnalyticMap::Sum(terms) => {
                let mut acc = AnalyticMap::zero().to_series(order)?;
                for t in terms {
                    acc = acc.add(&t.to_series(order)?);
                }
                Ok(acc)
            }
            AnalyticMap::Product(a, b) => Ok(a.to_series(order)?.multiply(&b.to_series(order)?)),
            AnalyticMap::Compose { outer, inner } => {
                let outer = outer.to_series(order)?;
                if let Some([a, b, c, d]) = inner.as_mobius() {
                    if a == ONE && d == ONE && c == b.conj() {
                        if let Ok(p) = DiskPoint::new(b) {
                            return Ok(outer.compose_with_automorphism(p));
                        }
                    }
                }
                outer.compose(&inner.to_series(order)?)
            }
            AnalyticMap::DilatationPrimitive { h, omega } => {
                let hp = h.to_series(order + 1)?.differentiate();
                let integrand = omega.to_series(order)?.multiply(&hp);
                let g = integrand.integrate();
                let mut coeffs = g.coefficients().to_vec();
                coeffs.truncate(order + 1);
                let r = g.reliable_radius().min(certified_radius(&coeffs));
                TaylorSeries::new(coeffs, r)
            }
        }
    }
}

/// `(m(z), m'(z), ...)` up to the requested order (at most 3).
pub fn eval_derivatives(m: &AnalyticMap, z: DiskPoint, up_to: usize) -> Result<Vec<Complex64>> {
    if up_to > 3 {
        return Err(Error::parameter(
            "up_to",
            up_to as f64,
            "derivatives are available through third order",
        ));
    }
    let jet = m.jet(z.value())?;
    Ok(jet.0[..=up_to].to_vec())
}

/// `φ_a(z) = (φ(σ_a(z)) - φ(a)) / ((1 - |a|^2) φ'(a))`.
pub fn koebe_transform(phi: &AnalyticMap, a: DiskPoint) -> Result<AnalyticMap> {
    let jet = phi.jet(a.value())?;
    let scale = a.weight() * jet.d1();
    if jet.d1().norm() < LOCAL_UNIVALENCE_TOLERANCE {
        return Err(Error::Singular {
            what: "Koebe transform (φ'(a) = 0)",
            point: a.value(),
        });
    }
    let moved = if a.value() == ZERO {
        phi.clone()
    } else {
        phi.clone().compose(AnalyticMap::automorphism(a))
    };
    Ok(moved
        .plus(AnalyticMap::Constant(-jet.value()))
        .scaled(ONE / scale))
}
