//! Hyperbolic geometry of the unit disc.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points with modulus at least `1 - BOUNDARY_FLAG` are accepted but flagged.
pub const BOUNDARY_FLAG: f64 = 1e-12;

/// A point of the open unit disc.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub const ORIGIN: DiskPoint = DiskPoint(Complex64 { re: 0.0, im: 0.0 });

    pub fn new(value: Complex64) -> Result<Self> {
        if value.re.is_finite() && value.im.is_finite() && value.norm_sqr() < 1.0 {
            Ok(DiskPoint(value))
        } else {
            Err(Error::Domain { point: value })
        }
    }

    pub fn from_re_im(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        Self::new(Complex64::from_polar(r, theta))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn modulus(self) -> f64 {
        self.0.norm()
    }

    /// `1 - |z|^2`, the conformal weight of the disc.
    pub fn weight(self) -> f64 {
        1.0 - self.0.norm_sqr()
    }

    /// True when the point is within `BOUNDARY_FLAG` of the unit circle.
    pub fn near_boundary(self) -> bool {
        self.modulus() >= 1.0 - BOUNDARY_FLAG
    }

    /// Argument normalized to `[0, 2π)`.
    pub fn arg(self) -> f64 {
        let t = self.0.arg();
        if t < 0.0 {
            t + std::f64::consts::TAU
        } else {
            t
        }
    }
}

impl fmt::Display for DiskPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TryFrom<Complex64> for DiskPoint {
    type Error = Error;

    fn try_from(value: Complex64) -> Result<Self> {
        DiskPoint::new(value)
    }
}

impl TryFrom<[f64; 2]> for DiskPoint {
    type Error = Error;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        DiskPoint::from_re_im(v[0], v[1])
    }
}

impl From<DiskPoint> for [f64; 2] {
    fn from(p: DiskPoint) -> Self {
        [p.0.re, p.0.im]
    }
}

impl From<DiskPoint> for Complex64 {
    fn from(p: DiskPoint) -> Self {
        p.0
    }
}

/// Pseudo-hyperbolic distance `|(a - b) / (1 - conj(a) b)|`.
pub fn pseudo_hyperbolic(a: DiskPoint, b: DiskPoint) -> f64 {
    let (a, b) = (a.0, b.0);
    let rho = (a - b).norm() / (Complex64::new(1.0, 0.0) - a.conj() * b).norm();
    rho.min(1.0)
}

/// `1 - ρ(a,b)^2` computed without cancellation:
/// `(1 - |a|^2)(1 - |b|^2) / |1 - conj(a) b|^2`.
pub fn pseudo_hyperbolic_complement(a: DiskPoint, b: DiskPoint) -> f64 {
    let den = (Complex64::new(1.0, 0.0) - a.0.conj() * b.0).norm_sqr();
    a.weight() * b.weight() / den
}

/// Hyperbolic distance `artanh ρ(a,b)`, evaluated in log form.
pub fn hyperbolic(a: DiskPoint, b: DiskPoint) -> f64 {
    let rho = pseudo_hyperbolic(a, b);
    if rho == 0.0 {
        return 0.0;
    }
    // (1+ρ)/(1-ρ) = (1+ρ)^2 / (1-ρ^2); the complement avoids losing 1-ρ near the boundary.
    let complement = pseudo_hyperbolic_complement(a, b);
    0.5 * ((1.0 + rho) * (1.0 + rho) / complement).ln()
}

/// The disc automorphism `σ_a(z) = (z + a) / (1 + conj(a) z)`.
pub fn automorphism(a: DiskPoint, z: DiskPoint) -> DiskPoint {
    let w = automorphism_value(a.0, z.0);
    // σ_a preserves the disc; rounding can only push |w| to 1 for |z| within an ulp of 1.
    DiskPoint::new(w).unwrap_or_else(|_| DiskPoint(w / (w.norm() * (1.0 + f64::EPSILON))))
}

pub(crate) fn automorphism_value(a: Complex64, z: Complex64) -> Complex64 {
    (z + a) / (Complex64::new(1.0, 0.0) + a.conj() * z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(re: f64, im: f64) -> DiskPoint {
        DiskPoint::from_re_im(re, im).unwrap()
    }

    fn random_point(rng: &mut ChaCha8Rng, r_max: f64) -> DiskPoint {
        let r = r_max * rng.gen::<f64>().sqrt();
        DiskPoint::from_polar(r, rng.gen::<f64>() * std::f64::consts::TAU).unwrap()
    }

    #[test]
    fn rejects_points_outside() {
        assert!(DiskPoint::from_re_im(1.0, 0.0).is_err());
        assert!(DiskPoint::from_re_im(0.8, 0.8).is_err());
        assert!(DiskPoint::from_re_im(f64::NAN, 0.0).is_err());
        let edge = p(1.0 - 1e-13, 0.0);
        assert!(edge.near_boundary());
        assert!(!p(0.5, 0.0).near_boundary());
    }

    #[test]
    fn pseudo_hyperbolic_examples() {
        assert_abs_diff_eq!(
            pseudo_hyperbolic(p(0.0, 0.0), p(0.5, 0.0)),
            0.5,
            epsilon = 1e-15
        );
        let a = p(0.3, -0.2);
        assert_eq!(pseudo_hyperbolic(a, a), 0.0);
        assert_abs_diff_eq!(
            pseudo_hyperbolic(p(0.3, 0.0), p(-0.3, 0.0)),
            0.6 / 1.09,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(0.6 / 1.09, 0.5504587155963303, epsilon = 1e-12);
    }

    #[test]
    fn hyperbolic_examples() {
        let a = p(-0.1, 0.7);
        assert_eq!(hyperbolic(a, a), 0.0);
        assert_abs_diff_eq!(
            hyperbolic(p(0.0, 0.0), p(0.5, 0.0)),
            0.5493061443340549,
            epsilon = 1e-14
        );
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let (a, b) = (random_point(&mut rng, 0.99), random_point(&mut rng, 0.99));
            assert_eq!(hyperbolic(a, b), hyperbolic(b, a));
        }
    }

    #[test]
    fn hyperbolic_stable_near_boundary() {
        let a = p(0.0, 0.0);
        let b = p(1.0 - 1e-12, 0.0);
        let d = hyperbolic(a, b);
        assert!(d.is_finite());
        // artanh(1 - ε) ≈ ½ log(2/ε)
        assert_abs_diff_eq!(d, 0.5 * (2.0f64 / 1e-12).ln(), epsilon = 1e-3);
    }

    #[test]
    fn automorphism_examples() {
        let a = p(0.3, 0.4);
        assert_eq!(automorphism(a, DiskPoint::ORIGIN), a);
        let z = p(-0.6, 0.1);
        assert_eq!(automorphism(DiskPoint::ORIGIN, z), z);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let (a, z) = (random_point(&mut rng, 0.999), random_point(&mut rng, 0.999));
            assert!(automorphism(a, z).modulus() < 1.0);
        }
    }

    #[test]
    fn distance_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut pairs = Vec::new();
        for _ in 0..500 {
            let (a, b, c) = (
                random_point(&mut rng, 0.99),
                random_point(&mut rng, 0.99),
                random_point(&mut rng, 0.9),
            );
            let rho = pseudo_hyperbolic(a, b);
            assert!((0.0..1.0).contains(&rho));
            assert!(hyperbolic(a, b) > 0.0);
            let moved = pseudo_hyperbolic(automorphism(c, a), automorphism(c, b));
            assert_abs_diff_eq!(moved, rho, epsilon = 1e-12);
            pairs.push((rho, hyperbolic(a, b)));
        }
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        for w in pairs.windows(2) {
            assert!(w[0].1 <= w[1].1);
        }
    }
}
