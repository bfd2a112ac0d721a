//! Third-order jets `(f, f', f'', f''')` of analytic functions at a point.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet(pub [Complex64; 4]);

impl Jet {
    pub fn constant(c: Complex64) -> Self {
        Jet([c, ZERO, ZERO, ZERO])
    }

    pub fn variable(z: Complex64) -> Self {
        Jet([z, ONE, ZERO, ZERO])
    }

    pub fn value(&self) -> Complex64 {
        self.0[0]
    }

    pub fn d1(&self) -> Complex64 {
        self.0[1]
    }

    pub fn d2(&self) -> Complex64 {
        self.0[2]
    }

    pub fn d3(&self) -> Complex64 {
        self.0[3]
    }

    pub fn scale(self, c: Complex64) -> Self {
        Jet(self.0.map(|x| x * c))
    }

    /// Jet of the derivative; the top slot becomes unknown and is set to zero.
    pub fn derivative(self) -> Self {
        let [_, a, b, c] = self.0;
        Jet([a, b, c, ZERO])
    }

    /// `outer ∘ inner`, where `outer` is the jet of the outer function taken at `inner.value()`.
    pub fn compose(outer: Jet, inner: Jet) -> Self {
        let [f0, f1, f2, f3] = outer.0;
        let [_, u1, u2, u3] = inner.0;
        Jet([
            f0,
            f1 * u1,
            f2 * u1 * u1 + f1 * u2,
            f3 * u1 * u1 * u1 + 3.0 * f2 * u1 * u2 + f1 * u3,
        ])
    }

    pub fn recip(self) -> Self {
        let w = self.value();
        let inv = ONE / w;
        let inv2 = inv * inv;
        let outer = Jet([inv, -inv2, 2.0 * inv2 * inv, -6.0 * inv2 * inv2]);
        Jet::compose(outer, self)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0) {
            *o += r;
        }
        Jet(out)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet(self.0.map(|x| -x))
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        self * rhs.recip()
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let [f0, f1, f2, f3] = self.0;
        let [g0, g1, g2, g3] = rhs.0;
        Jet([
            f0 * g0,
            f1 * g0 + f0 * g1,
            f2 * g0 + 2.0 * f1 * g1 + f0 * g2,
            f3 * g0 + 3.0 * f2 * g1 + 3.0 * f1 * g2 + f0 * g3,
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn product_of_variables_is_square() {
        let z = Jet::variable(c(3.0));
        let sq = z * z;
        assert_eq!(sq.0, [c(9.0), c(6.0), c(2.0), c(0.0)]);
    }

    #[test]
    fn reciprocal_of_one_minus_z() {
        // 1/(1-z) at z=0.5: derivatives k!/(1-z)^{k+1}
        let z = Jet::variable(c(0.5));
        let r = (Jet::constant(c(1.0)) - z).recip();
        let expected = [2.0, 4.0, 16.0, 96.0];
        for (got, want) in r.0.iter().zip(expected) {
            assert!((got - c(want)).norm() < 1e-12);
        }
    }
}
