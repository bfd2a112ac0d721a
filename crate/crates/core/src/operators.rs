//! Pre-Schwarzian and Schwarzian derivatives, analytic and harmonic, and the
//! pointwise scale factors `R`, `Q`, `R_h`.

use num_complex::Complex64;
use serde::Serialize;

use crate::analytic::{AnalyticMap, LOCAL_UNIVALENCE_TOLERANCE};
use crate::disk::DiskPoint;
use crate::error::{Error, Result};
use crate::harmonic::{Dilatation, HarmonicJet, HarmonicMap, DILATATION_MARGIN};
use crate::jet::Jet;

/// An operator value with its disc-weighted modulus `|value| (1 - |z|^2)^k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OperatorValue {
    pub value: Complex64,
    pub point: DiskPoint,
    pub weight_value: f64,
}

impl OperatorValue {
    fn new(value: Complex64, point: DiskPoint, power: i32) -> Self {
        OperatorValue {
            value,
            point,
            weight_value: value.norm() * point.weight().powi(power),
        }
    }

    pub fn pre_schwarzian(f: &HarmonicMap, z: DiskPoint) -> Result<Self> {
        Ok(Self::new(harmonic_pre_schwarzian(f, z)?, z, 1))
    }

    pub fn schwarzian(f: &HarmonicMap, z: DiskPoint) -> Result<Self> {
        Ok(Self::new(harmonic_schwarzian(f, z)?, z, 2))
    }
}

fn locally_univalent_jet(phi: &AnalyticMap, z: DiskPoint) -> Result<Jet> {
    let j = phi.jet(z.value())?;
    if j.d1().norm() < LOCAL_UNIVALENCE_TOLERANCE {
        return Err(Error::Singular {
            what: "first derivative",
            point: z.value(),
        });
    }
    Ok(j)
}

fn pre_from_jet(j: &Jet) -> Complex64 {
    j.d2() / j.d1()
}

fn schwarzian_from_jet(j: &Jet) -> Complex64 {
    let p = j.d2() / j.d1();
    j.d3() / j.d1() - 1.5 * p * p
}

/// `Pφ = φ''/φ'`.
pub fn pre_schwarzian(phi: &AnalyticMap, z: DiskPoint) -> Result<Complex64> {
    Ok(pre_from_jet(&locally_univalent_jet(phi, z)?))
}

/// `Sφ = φ'''/φ' - (3/2)(φ''/φ')^2`.
pub fn schwarzian(phi: &AnalyticMap, z: DiskPoint) -> Result<Complex64> {
    Ok(schwarzian_from_jet(&locally_univalent_jet(phi, z)?))
}

/// `conj(ω) / (1 - |ω|^2)`, after checking the dilatation stays off the unit circle.
fn dilatation_factor(j: &HarmonicJet, z: DiskPoint) -> Result<Complex64> {
    let w = j.omega[0];
    let gap = 1.0 - w.norm_sqr();
    if gap < DILATATION_MARGIN {
        return Err(Error::NotSensePreserving { point: z.value() });
    }
    Ok(w.conj() / gap)
}

fn harmonic_pre_from(j: &HarmonicJet, z: DiskPoint) -> Result<Complex64> {
    let k = dilatation_factor(j, z)?;
    Ok(pre_from_jet(&j.h) - k * j.omega[1])
}

fn harmonic_schwarzian_from(j: &HarmonicJet, z: DiskPoint) -> Result<Complex64> {
    let k = dilatation_factor(j, z)?;
    let [_, w1, w2] = j.omega;
    let t = w1 * k;
    Ok(schwarzian_from_jet(&j.h) + k * (w1 * pre_from_jet(&j.h) - w2) - 1.5 * t * t)
}

/// `P_f = h''/h' - conj(ω) ω' / (1 - |ω|^2)`.
pub fn harmonic_pre_schwarzian(f: &HarmonicMap, z: DiskPoint) -> Result<Complex64> {
    let j = f.jets(z)?;
    harmonic_pre_from(&j, z)
}

/// `S_f = Sh + conj(ω)/(1-|ω|^2) (ω' h''/h' - ω'') - (3/2) (ω' conj(ω)/(1-|ω|^2))^2`.
pub fn harmonic_schwarzian(f: &HarmonicMap, z: DiskPoint) -> Result<Complex64> {
    let j = f.jets(z)?;
    harmonic_schwarzian_from(&j, z)
}

/// Schwarz–Pick quantity `|ω'| (1 - |z|^2) / (1 - |ω|^2)`.
pub fn omega_star_at(omega: &Dilatation, z: DiskPoint) -> Result<f64> {
    let [w, w1, _] = omega.jet2(z.value())?;
    let gap = 1.0 - w.norm_sqr();
    if gap <= 0.0 {
        return Err(Error::Domain { point: w });
    }
    Ok(w1.norm() * z.weight() / gap)
}

/// `R = (1-|z|^2)(|h'| - |g'|)`, `Q = (1-|z|^2)(|h'| + |g'|)`, `R_h = (1-|z|^2)|h'|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DistortionQuantities {
    pub r: f64,
    pub q: f64,
    pub r_h: f64,
}

pub fn distortion_quantities(f: &HarmonicMap, z: DiskPoint) -> Result<DistortionQuantities> {
    let j = f.jets(z)?;
    let h1 = j.h.d1().norm();
    let g1 = j.g_prime.norm();
    if h1 * h1 - g1 * g1 <= 0.0 {
        return Err(Error::NotSensePreserving { point: z.value() });
    }
    let w = z.weight();
    Ok(DistortionQuantities {
        r: w * (h1 - g1),
        q: w * (h1 + g1),
        r_h: w * h1,
    })
}

/// `R_φ = (1-|z|^2)|φ'|` for an analytic map.
pub fn analytic_scale(phi: &AnalyticMap, z: DiskPoint) -> Result<f64> {
    Ok(z.weight() * locally_univalent_jet(phi, z)?.d1().norm())
}

/// Becker functional `(1-|z|^2)|z P_f| + |z ω'| (1-|z|^2) / (1-|ω|^2)`.
pub fn becker_harmonic_functional(f: &HarmonicMap, z: DiskPoint) -> Result<f64> {
    let j = f.jets(z)?;
    let pf = harmonic_pre_from(&j, z)?;
    let zv = z.value();
    let w = z.weight();
    let analytic_term = w * (zv * pf).norm();
    if f.dilatation().is_constant() {
        return Ok(analytic_term);
    }
    let gap = 1.0 - j.omega[0].norm_sqr();
    Ok(analytic_term + (zv * j.omega[1]).norm() * w / gap)
}

/// Order integrand `|½(1-|z|^2) φ''/φ' - conj(z)|`.
pub fn order_integrand(phi: &AnalyticMap, z: DiskPoint) -> Result<f64> {
    let p = pre_schwarzian(phi, z)?;
    Ok((0.5 * z.weight() * p - z.value().conj()).norm())
}
