//! Truncated power series with complex coefficients.
//!
//! A [`TaylorSeries`] carries the radius up to which its truncation error is
//! considered negligible. Closed-form catalog entries are expanded with
//! [`certified_radius`]; arithmetic takes the minimum radius of its operands
//! and composition with a disc automorphism shrinks it by
//! [`COMPOSITION_SHRINK`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::disk::DiskPoint;
use crate::error::{Error, Result};
use crate::jet::Jet;

pub const DEFAULT_ORDER: usize = 100;
pub const COMPOSITION_SHRINK: f64 = 0.7;
/// Tail size below which truncation counts as negligible.
pub const TRUNCATION_TOLERANCE: f64 = 1e-12;
const SINGULAR_TOLERANCE: f64 = 1e-14;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaylorSeries {
    coefficients: Vec<Complex64>,
    reliable_radius: f64,
}

/// Radius where the last quarter of the coefficients contributes at most
/// `TRUNCATION_TOLERANCE`: `(tol / max|c_k|)^(1/N)`, capped at 1.
pub fn certified_radius(coefficients: &[Complex64]) -> f64 {
    let n = coefficients.len().saturating_sub(1).max(1);
    let start = coefficients.len() - coefficients.len().div_ceil(4);
    let tail = coefficients[start..]
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    if tail == 0.0 {
        return 1.0;
    }
    (TRUNCATION_TOLERANCE / tail).powf(1.0 / n as f64).min(1.0)
}

impl TaylorSeries {
    /// Builds a series from coefficients `c_0..c_N` (at least two).
    pub fn new(coefficients: Vec<Complex64>, reliable_radius: f64) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::parameter(
                "truncation_order",
                coefficients.len() as f64 - 1.0,
                "must be at least 1",
            ));
        }
        if !(reliable_radius > 0.0 && reliable_radius <= 1.0) {
            return Err(Error::parameter(
                "reliable_radius",
                reliable_radius,
                "must lie in (0, 1]",
            ));
        }
        Ok(TaylorSeries {
            coefficients,
            reliable_radius,
        })
    }

    /// Series whose radius is chosen by [`certified_radius`].
    pub fn with_certified_radius(coefficients: Vec<Complex64>) -> Result<Self> {
        let r = certified_radius(&coefficients);
        Self::new(coefficients, r)
    }

    pub fn from_real(coefficients: &[f64]) -> Result<Self> {
        Self::with_certified_radius(
            coefficients
                .iter()
                .map(|&c| Complex64::new(c, 0.0))
                .collect(),
        )
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn truncation_order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn reliable_radius(&self) -> f64 {
        self.reliable_radius
    }

    fn truncated(mut coefficients: Vec<Complex64>, order: usize, radius: f64) -> Self {
        coefficients.resize(order + 1, ZERO);
        TaylorSeries {
            coefficients,
            reliable_radius: radius,
        }
    }

    pub fn add(&self, rhs: &TaylorSeries) -> TaylorSeries {
        let order = self.truncation_order().min(rhs.truncation_order());
        let coefficients = (0..=order)
            .map(|k| self.coefficients[k] + rhs.coefficients[k])
            .collect();
        Self::truncated(
            coefficients,
            order,
            self.reliable_radius.min(rhs.reliable_radius),
        )
    }

    pub fn scale(&self, c: Complex64) -> TaylorSeries {
        TaylorSeries {
            coefficients: self.coefficients.iter().map(|&x| x * c).collect(),
            reliable_radius: self.reliable_radius,
        }
    }

    pub fn multiply(&self, rhs: &TaylorSeries) -> TaylorSeries {
        let order = self.truncation_order().min(rhs.truncation_order());
        let mut out = vec![ZERO; order + 1];
        for (i, &a) in self.coefficients.iter().take(order + 1).enumerate() {
            if a == ZERO {
                continue;
            }
            for (j, &b) in rhs.coefficients.iter().take(order + 1 - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::truncated(out, order, self.reliable_radius.min(rhs.reliable_radius))
    }

    pub fn reciprocal(&self) -> Result<TaylorSeries> {
        let c0 = self.coefficients[0];
        if c0.norm() < SINGULAR_TOLERANCE {
            return Err(Error::Singular {
                what: "series reciprocal",
                point: ZERO,
            });
        }
        let n = self.truncation_order();
        let mut out = vec![ZERO; n + 1];
        out[0] = 1.0 / c0;
        for k in 1..=n {
            let acc: Complex64 = (1..=k).map(|j| self.coefficients[j] * out[k - j]).sum();
            out[k] = -acc / c0;
        }
        let radius = self.reliable_radius.min(certified_radius(&out));
        Ok(Self::truncated(out, n, radius))
    }

    pub fn differentiate(&self) -> TaylorSeries {
        let n = self.truncation_order().saturating_sub(1).max(1);
        let out = self
            .coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Self::truncated(out, n, self.reliable_radius)
    }

    /// Primitive vanishing at the origin; the order grows by one.
    pub fn integrate(&self) -> TaylorSeries {
        let mut out = Vec::with_capacity(self.coefficients.len() + 1);
        out.push(ZERO);
        out.extend(
            self.coefficients
                .iter()
                .enumerate()
                .map(|(k, &c)| c / (k as f64 + 1.0)),
        );
        let n = out.len() - 1;
        Self::truncated(out, n, self.reliable_radius)
    }

    /// Series of `σ_a` itself: `a + (1 - |a|^2) Σ (-conj a)^(n-1) z^n`.
    pub fn automorphism(a: DiskPoint, order: usize) -> TaylorSeries {
        let a = a.value();
        let mut out = vec![ZERO; order + 1];
        out[0] = a;
        let w = 1.0 - a.norm_sqr();
        let mut power = Complex64::new(1.0, 0.0);
        for c in out.iter_mut().skip(1) {
            *c = w * power;
            power *= -a.conj();
        }
        let radius = certified_radius(&out);
        Self::truncated(out, order, radius)
    }

    /// `self ∘ σ_a`, by Horner's scheme on truncated series.
    pub fn compose_with_automorphism(&self, a: DiskPoint) -> TaylorSeries {
        let n = self.truncation_order();
        let sigma = TaylorSeries::automorphism(a, n);
        let mut acc = TaylorSeries::truncated(vec![self.coefficients[n]], n, 1.0);
        for &c in self.coefficients[..n].iter().rev() {
            acc = acc.multiply(&sigma);
            acc.coefficients[0] += c;
        }
        acc.reliable_radius = COMPOSITION_SHRINK * self.reliable_radius.min(sigma.reliable_radius);
        acc
    }

    /// `self ∘ inner` for an inner series vanishing at the origin.
    pub fn compose(&self, inner: &TaylorSeries) -> Result<TaylorSeries> {
        if inner.coefficients[0].norm() > SINGULAR_TOLERANCE {
            return Err(Error::Internal(
                "series composition requires an inner series vanishing at 0".into(),
            ));
        }
        let n = self.truncation_order().min(inner.truncation_order());
        let mut acc = TaylorSeries::truncated(vec![self.coefficients[n]], n, 1.0);
        for &c in self.coefficients[..n].iter().rev() {
            acc = acc.multiply(inner);
            acc.coefficients[0] += c;
        }
        acc.reliable_radius = COMPOSITION_SHRINK * self.reliable_radius.min(inner.reliable_radius);
        Ok(acc)
    }

    /// Value and first three derivatives, by Horner's scheme.
    pub fn jet(&self, z: Complex64) -> Result<Jet> {
        if z.norm() > self.reliable_radius * (1.0 + 1e-12) {
            return Err(Error::Precision {
                point: z,
                radius: self.reliable_radius,
            });
        }
        let mut p = [ZERO; 4];
        for &c in self.coefficients.iter().rev() {
            p[3] = p[3] * z + p[2];
            p[2] = p[2] * z + p[1];
            p[1] = p[1] * z + p[0];
            p[0] = p[0] * z + c;
        }
        Ok(Jet([p[0], p[1], 2.0 * p[2], 6.0 * p[3]]))
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.jet(z).map(|j| j.value())
    }

    /// True when all coefficients past the first `k + 1` vanish.
    pub fn is_polynomial_of_degree(&self, k: usize) -> bool {
        self.coefficients.iter().skip(k + 1).all(|c| *c == ZERO)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn reals(s: &TaylorSeries) -> Vec<f64> {
        s.coefficients().iter().map(|c| c.re).collect()
    }

    #[test]
    fn differentiate_term_by_term() {
        let s = TaylorSeries::from_real(&[0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(reals(&s.differentiate()), vec![1.0, 4.0, 9.0]);
    }

    #[test]
    fn reciprocal_geometric() {
        let s = TaylorSeries::from_real(&[1.0, -1.0, 0.0, 0.0]).unwrap();
        assert_eq!(reals(&s.reciprocal().unwrap()), vec![1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn reciprocal_singular() {
        let s = TaylorSeries::from_real(&[1e-15, 1.0]).unwrap();
        assert!(matches!(s.reciprocal(), Err(Error::Singular { .. })));
    }

    #[test]
    fn multiply_difference_of_squares() {
        let a = TaylorSeries::from_real(&[1.0, 1.0, 0.0]).unwrap();
        let b = TaylorSeries::from_real(&[1.0, -1.0, 0.0]).unwrap();
        assert_eq!(reals(&a.multiply(&b)), vec![1.0, 0.0, -1.0]);
    }

    #[test]
    fn integrate_then_differentiate() {
        let s = TaylorSeries::from_real(&[2.0, 3.0, 4.0]).unwrap();
        let i = s.integrate();
        assert_eq!(i.truncation_order(), 3);
        assert_eq!(reals(&i), vec![0.0, 2.0, 1.5, 4.0 / 3.0]);
        assert_eq!(reals(&i.differentiate()), vec![2.0, 3.0, 4.0]);
    }

    #[test]
    fn new_validates() {
        assert!(TaylorSeries::new(vec![c(1.0)], 0.5).is_err());
        assert!(TaylorSeries::new(vec![c(1.0), c(1.0)], 0.0).is_err());
        assert!(TaylorSeries::new(vec![c(1.0), c(1.0)], 1.5).is_err());
    }

    #[test]
    fn precision_error_beyond_radius() {
        let s = TaylorSeries::new(vec![c(0.0), c(1.0)], 0.5).unwrap();
        assert!(matches!(s.eval(c(0.6)), Err(Error::Precision { .. })));
        assert!(s.eval(c(0.4)).is_ok());
    }

    #[test]
    fn certified_radius_policy() {
        let poly = TaylorSeries::from_real(&[0.0, 1.0, 0.5, 0.0, 0.0]).unwrap();
        assert_eq!(poly.reliable_radius(), 1.0);
        let geometric: Vec<f64> = (0..=DEFAULT_ORDER).map(|_| 1.0).collect();
        let g = TaylorSeries::from_real(&geometric).unwrap();
        // 1e-12^(1/100)
        assert!((g.reliable_radius() - 0.7585775750291838).abs() < 1e-12);
    }

    #[test]
    fn automorphism_series_matches_closed_form() {
        let a = DiskPoint::from_re_im(0.3, -0.2).unwrap();
        let s = TaylorSeries::automorphism(a, DEFAULT_ORDER);
        for &z in &[c(0.0), Complex64::new(0.2, 0.3), c(-0.5)] {
            let want = crate::disk::automorphism_value(a.value(), z);
            assert!((s.eval(z).unwrap() - want).norm() < 1e-12);
        }
    }

    #[test]
    fn compose_with_automorphism_of_polynomial() {
        // (z^2) ∘ σ_a
        let s = TaylorSeries::from_real(&{
            let mut v = vec![0.0; 61];
            v[2] = 1.0;
            v
        })
        .unwrap();
        let a = DiskPoint::from_re_im(0.25, 0.1).unwrap();
        let comp = s.compose_with_automorphism(a);
        assert!(comp.reliable_radius() <= COMPOSITION_SHRINK + 1e-15);
        let z = Complex64::new(0.3, 0.2);
        let sigma = crate::disk::automorphism_value(a.value(), z);
        assert!((comp.eval(z).unwrap() - sigma * sigma).norm() < 1e-12);
    }

    proptest! {
        #[test]
        fn jet_matches_series_derivatives(
            coeffs in prop::collection::vec(-2.0f64..2.0, 2..12),
            re in -0.6f64..0.6, im in -0.6f64..0.6,
        ) {
            let s = TaylorSeries::new(coeffs.iter().map(|&x| c(x)).collect(), 1.0).unwrap();
            let z = Complex64::new(re, im);
            let j = s.jet(z).unwrap();
            let d1 = s.differentiate();
            let d2 = d1.differentiate();
            let d3 = d2.differentiate();
            prop_assert!((j.d1() - d1.eval(z).unwrap()).norm() < 1e-10);
            prop_assert!((j.d2() - d2.eval(z).unwrap()).norm() < 1e-10);
            prop_assert!((j.d3() - d3.eval(z).unwrap()).norm() < 1e-9);
        }

        #[test]
        fn reciprocal_times_self_is_one(
            coeffs in prop::collection::vec(-1.0f64..1.0, 1..10),
        ) {
            let mut v = vec![c(2.0)];
            v.extend(coeffs.iter().map(|&x| c(x)));
            if v.len() < 2 { v.push(c(0.0)); }
            let s = TaylorSeries::new(v, 1.0).unwrap();
            let prod = s.multiply(&s.reciprocal().unwrap());
            prop_assert!((prod.coefficients()[0] - c(1.0)).norm() < 1e-12);
            for k in prod.coefficients().iter().skip(1) {
                prop_assert!(k.norm() < 1e-9);
            }
        }
    }
}
