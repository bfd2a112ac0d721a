//! Sense-preserving harmonic maps `f = h + conj(g)` of the unit disc.

use num_complex::Complex64;
use serde::Serialize;

use crate::analytic::{AnalyticMap, LOCAL_UNIVALENCE_TOLERANCE};
use crate::disk::DiskPoint;
use crate::error::{Error, Result};
use crate::jet::Jet;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Dilatations within this distance of the unit circle are rejected.
pub const DILATATION_MARGIN: f64 = 1e-12;

/// Tolerance used when recording normalization flags.
const NORMALIZATION_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Normalization {
    pub h_vanishes: bool,
    pub g_vanishes: bool,
    pub unit_derivative: bool,
}

impl Normalization {
    pub fn is_full(&self) -> bool {
        self.h_vanishes && self.g_vanishes && self.unit_derivative
    }
}

/// The second complex dilatation `ω = g'/h'`.
#[derive(Clone, Debug, PartialEq)]
pub enum Dilatation {
    Explicit(AnalyticMap),
    Quotient { h: AnalyticMap, g: AnalyticMap },
}

impl Dilatation {
    /// `(ω, ω', ω'')` at `z`.
    pub fn jet2(&self, z: Complex64) -> Result<[Complex64; 3]> {
        match self {
            Dilatation::Explicit(w) => {
                let j = w.jet(z)?;
                Ok([j.0[0], j.0[1], j.0[2]])
            }
            Dilatation::Quotient { h, g } => {
                let hj = h.jet(z)?;
                if hj.d1().norm() < LOCAL_UNIVALENCE_TOLERANCE {
                    return Err(Error::Singular {
                        what: "dilatation (h' = 0)",
                        point: z,
                    });
                }
                if g.is_zero() {
                    return Ok([ZERO; 3]);
                }
                let q = g.jet(z)?.derivative() / hj.derivative();
                Ok([q.0[0], q.0[1], q.0[2]])
            }
        }
    }

    pub fn value(&self, z: Complex64) -> Result<Complex64> {
        match self {
            Dilatation::Explicit(w) => w.eval(z),
            Dilatation::Quotient { h, g } => {
                if g.is_zero() {
                    return Ok(ZERO);
                }
                Ok(g.jet(z)?.d1() / h.jet(z)?.d1())
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Dilatation::Explicit(w) => w.is_zero(),
            Dilatation::Quotient { g, .. } => g.is_zero(),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Dilatation::Explicit(w) => w.is_constant(),
            Dilatation::Quotient { g, .. } => g.is_zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicMap {
    h: AnalyticMap,
    g: AnalyticMap,
    omega: Dilatation,
    normalization: Normalization,
    mobius_alpha: Option<Complex64>,
}

/// Pointwise data of a harmonic map: jets of `h`, `g` and the dilatation.
#[derive(Clone, Copy, Debug)]
pub struct HarmonicJet {
    pub h: Jet,
    pub g_prime: Complex64,
    pub omega: [Complex64; 3],
}

impl HarmonicMap {
    fn build(h: AnalyticMap, g: AnalyticMap, omega: Dilatation) -> Result<Self> {
        let hj = h.jet(ZERO)?;
        let g0 = g.eval(ZERO)?;
        let normalization = Normalization {
            h_vanishes: hj.value().norm() <= NORMALIZATION_TOLERANCE,
            g_vanishes: g0.norm() <= NORMALIZATION_TOLERANCE,
            unit_derivative: (hj.d1() - ONE).norm() <= NORMALIZATION_TOLERANCE,
        };
        Ok(HarmonicMap {
            h,
            g,
            omega,
            normalization,
            mobius_alpha: None,
        })
    }

    /// The analytic map `h` viewed as a harmonic map with `g ≡ 0`.
    pub fn analytic(h: AnalyticMap) -> Result<Self> {
        let g = AnalyticMap::zero();
        Self::build(h.clone(), g.clone(), Dilatation::Quotient { h, g })
    }

    /// `f = h + conj(g)` with the dilatation taken as `g'/h'`.
    pub fn new(h: AnalyticMap, g: AnalyticMap) -> Result<Self> {
        Self::build(h.clone(), g.clone(), Dilatation::Quotient { h, g })
    }

    pub fn h(&self) -> &AnalyticMap {
        &self.h
    }

    pub fn g(&self) -> &AnalyticMap {
        &self.g
    }

    pub fn dilatation(&self) -> &Dilatation {
        &self.omega
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// `α` when the map was built by [`harmonic_mobius`].
    pub fn mobius_alpha(&self) -> Option<Complex64> {
        self.mobius_alpha
    }

    pub fn is_analytic(&self) -> bool {
        self.g.is_zero()
    }

    /// `f(z) = h(z) + conj(g(z))`.
    pub fn eval(&self, z: DiskPoint) -> Result<Complex64> {
        let z = z.value();
        let h = self.h.eval(z)?;
        if self.g.is_zero() {
            return Ok(h);
        }
        Ok(h + self.g.eval(z)?.conj())
    }

    /// Jets at `z`, after the sense-preserving gate.
    pub fn jets(&self, z: DiskPoint) -> Result<HarmonicJet> {
        let zv = z.value();
        let h = self.h.jet(zv)?;
        if h.d1().norm() < LOCAL_UNIVALENCE_TOLERANCE {
            return Err(Error::Singular {
                what: "analytic part (h' = 0)",
                point: zv,
            });
        }
        let omega = self.omega.jet2(zv)?;
        let g_prime = match &self.omega {
            Dilatation::Explicit(_) => omega[0] * h.d1(),
            Dilatation::Quotient { g, .. } => {
                if g.is_zero() {
                    ZERO
                } else {
                    g.jet(zv)?.d1()
                }
            }
        };
        if 1.0 - omega[0].norm_sqr() < DILATATION_MARGIN {
            return Err(Error::NotSensePreserving { point: zv });
        }
        Ok(HarmonicJet { h, g_prime, omega })
    }

    /// `f + a·conj(f) = (h + a g) + conj(g + conj(a) h)`.
    pub fn affine(&self, a: Complex64) -> Result<Self> {
        if a.norm() >= 1.0 {
            return Err(Error::parameter("a", a.norm(), "must lie in the unit disc"));
        }
        let h = self.h.clone().plus(self.g.clone().scaled(a));
        let g = self.g.clone().plus(self.h.clone().scaled(a.conj()));
        // ω ↦ (ω + conj a)/(1 + a ω)
        let omega = match &self.omega {
            Dilatation::Explicit(w) => {
                Dilatation::Explicit(AnalyticMap::mobius(ONE, a.conj(), a, ONE)?.compose(w.clone()))
            }
            Dilatation::Quotient { .. } => Dilatation::Quotient {
                h: h.clone(),
                g: g.clone(),
            },
        };
        let mut out = Self::build(h, g, omega)?;
        out.mobius_alpha = None;
        Ok(out)
    }
}

/// The harmonic map with analytic part `h` and dilatation `omega`:
/// `g = ∫_0^z ω h'`, so `g(0) = 0`.
///
/// When `h'` and `ω` are polynomials whose product has degree below `order`
/// the primitive is stored as an exact polynomial. Otherwise `g` is evaluated
/// by quadrature with exact derivatives, so it stays valid on the whole disc.
pub fn from_h_and_omega(h: AnalyticMap, omega: AnalyticMap, order: usize) -> Result<HarmonicMap> {
    check_dilatation_on_grid(&omega)?;
    let g = if omega.is_zero() {
        AnalyticMap::zero()
    } else {
        match polynomial_primitive(&h, &omega, order)? {
            Some(poly) => poly,
            None => AnalyticMap::DilatationPrimitive {
                h: Box::new(h.clone()),
                omega: Box::new(omega.clone()),
            },
        }
    };
    HarmonicMap::build(h, g, Dilatation::Explicit(omega))
}

fn polynomial_primitive(
    h: &AnalyticMap,
    omega: &AnalyticMap,
    order: usize,
) -> Result<Option<AnalyticMap>> {
    let is_poly = |m: &AnalyticMap| match m {
        AnalyticMap::Identity | AnalyticMap::Constant(_) => true,
        AnalyticMap::Series(s) => s.reliable_radius() == 1.0 && s.truncation_order() < order,
        _ => false,
    };
    if !(is_poly(h) && is_poly(omega)) {
        return Ok(None);
    }
    let n = order.max(2);
    let hp = h.to_series(n + 1)?.differentiate();
    let w = omega.to_series(n)?;
    let g = w.multiply(&hp).integrate();
    if !g.is_polynomial_of_degree(n) {
        return Ok(None);
    }
    let coeffs = g.coefficients()[..=n].to_vec();
    Ok(Some(AnalyticMap::polynomial(&coeffs)?))
}

/// Rejects dilatations reaching modulus `1 - DILATATION_MARGIN` on a polar sample of the disc.
fn check_dilatation_on_grid(omega: &AnalyticMap) -> Result<()> {
    const RADII: usize = 40;
    const ANGLES: usize = 96;
    let mut points = vec![ZERO];
    for i in 1..=RADII {
        let r = 0.999 * (i as f64 / RADII as f64).sqrt();
        for j in 0..ANGLES {
            points.push(Complex64::from_polar(
                r,
                std::f64::consts::TAU * j as f64 / ANGLES as f64,
            ));
        }
    }
    for z in points {
        let w = omega.eval(z)?;
        if w.norm() >= 1.0 - DILATATION_MARGIN {
            return Err(Error::NotSensePreserving { point: z });
        }
    }
    Ok(())
}

/// `f = h + α·conj(h)` for a Möbius `h`; the dilatation is the constant `conj(α)`.
pub fn harmonic_mobius(h: AnalyticMap, alpha: Complex64) -> Result<HarmonicMap> {
    if h.as_mobius().is_none() {
        return Err(Error::parameter(
            "h",
            f64::NAN,
            "harmonic Möbius maps need a Möbius analytic part",
        ));
    }
    if alpha.norm() >= 1.0 - DILATATION_MARGIN {
        return Err(Error::NotSensePreserving { point: ZERO });
    }
    let g = h.clone().scaled(alpha.conj());
    let mut f = HarmonicMap::build(
        h,
        g,
        Dilatation::Explicit(AnalyticMap::Constant(alpha.conj())),
    )?;
    f.mobius_alpha = Some(alpha);
    Ok(f)
}

/// `J_f = |h'|^2 - |g'|^2`.
pub fn jacobian(f: &HarmonicMap, z: DiskPoint) -> Result<f64> {
    let j = f.jets(z)?;
    let jac = j.h.d1().norm_sqr() - j.g_prime.norm_sqr();
    if jac <= 0.0 {
        return Err(Error::NotSensePreserving { point: z.value() });
    }
    Ok(jac)
}
