//! Two-point distortion bounds. Each evaluator returns the lower and/or upper
//! estimate for `|f(a) - f(b)|` at a pair; hypotheses are checked elsewhere.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::analytic::AnalyticMap;
use crate::disk::{hyperbolic, pseudo_hyperbolic, DiskPoint};
use crate::error::{Error, Result};
use crate::harmonic::HarmonicMap;
use crate::operators::{analytic_scale, distortion_quantities, DistortionQuantities};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairBound {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub bound_name: &'static str,
    /// Name of the criterion whose verdict gates this bound.
    pub hypothesis: &'static str,
    pub parameters: BTreeMap<&'static str, f64>,
}

impl PairBound {
    fn new(bound_name: &'static str, hypothesis: &'static str) -> Self {
        PairBound {
            lower: None,
            upper: None,
            bound_name,
            hypothesis,
            parameters: BTreeMap::new(),
        }
    }

    fn lower(mut self, v: f64) -> Self {
        self.lower = Some(v);
        self
    }

    fn upper(mut self, v: f64) -> Self {
        self.upper = Some(v);
        self
    }

    fn with(mut self, name: &'static str, v: f64) -> Self {
        self.parameters.insert(name, v);
        self
    }

    /// Collapse whichever sides are present to 0, used when `a == b`.
    fn degenerate(mut self) -> Self {
        self.lower = self.lower.map(|_| 0.0);
        self.upper = self.upper.map(|_| 0.0);
        self
    }
}

fn same(a: DiskPoint, b: DiskPoint) -> bool {
    a.value() == b.value()
}

fn quantities(
    f: &HarmonicMap,
    a: DiskPoint,
    b: DiskPoint,
) -> Result<(DistortionQuantities, DistortionQuantities)> {
    Ok((
        distortion_quantities(f, a).map_err(|e| e.at(a.value()))?,
        distortion_quantities(f, b).map_err(|e| e.at(b.value()))?,
    ))
}

fn analytic_scales(phi: &AnalyticMap, a: DiskPoint, b: DiskPoint) -> Result<(f64, f64)> {
    Ok((
        analytic_scale(phi, a).map_err(|e| e.at(a.value()))?,
        analytic_scale(phi, b).map_err(|e| e.at(b.value()))?,
    ))
}

/// `(1 - e^{-k d}) / k`
fn lower_growth(k: f64, d: f64) -> f64 {
    -(-k * d).exp_m1() / k
}

/// `(e^{k d} - 1) / k`
fn upper_growth(k: f64, d: f64) -> f64 {
    (k * d).exp_m1() / k
}

fn geometric_mean(x: f64, y: f64) -> f64 {
    (x * y).sqrt()
}

fn chuaqui_pommerenke(d: f64, ra: f64, rb: f64) -> f64 {
    d * geometric_mean(ra, rb)
}

fn mmm(t: f64, d: f64, ra: f64, rb: f64) -> f64 {
    (ra * rb / (1.0 + t)).sqrt() * ((1.0 + t).sqrt() * d).sinh()
}

fn becker_pair(d: f64, la: f64, lb: f64, ua: f64, ub: f64) -> (f64, f64) {
    (
        lower_growth(3.0, d) * geometric_mean(la, lb),
        upper_growth(3.0, d) * geometric_mean(ua, ub),
    )
}

/// `sqrt(sinh²(2d) (R(a)² + R(b)²) / (8 cosh(4d)))`
pub fn blatter_lower(f: &HarmonicMap, a: DiskPoint, b: DiskPoint) -> Result<PairBound> {
    let bound = PairBound::new("blatter_lower", "univalent").lower(0.0);
    if same(a, b) {
        return Ok(bound.degenerate());
    }
    let (qa, qb) = quantities(f, a, b)?;
    let d = hyperbolic(a, b);
    let s = (2.0 * d).sinh();
    let v = (s * s * (qa.r * qa.r + qb.r * qb.r) / (8.0 * (4.0 * d).cosh())).sqrt();
    Ok(bound.lower(v))
}

/// Convex conformal maps: `sinh d / (2 cosh(p d)^{1/p}) (R(a)^p + R(b)^p)^{1/p}`.
pub fn kim_minda_convex_lower(
    f: &HarmonicMap,
    a: DiskPoint,
    b: DiskPoint,
    p: f64,
) -> Result<PairBound> {
    if !(p > 1.0) {
        return Err(Error::parameter("p", p, "must exceed 1"));
    }
    let bound = PairBound::new("kim_minda_convex_lower", "convexity")
        .lower(0.0)
        .with("p", p);
    if same(a, b) {
        return Ok(bound.degenerate());
    }
    let (qa, qb) = quantities(f, a, b)?;
    let d = hyperbolic(a, b);
    // cosh(pd)^{1/p} and the p-mean are formed in log space to survive large p
    let log_cosh = p * d + (-(2.0 * p * d)).exp().ln_1p() - std::f64::consts::LN_2;
    let (hi, lo) = if qa.r >= qb.r {
        (qa.r, qb.r)
    } else {
        (qb.r, qa.r)
    };
    let mean = if hi == 0.0 {
        0.0
    } else {
        hi * (1.0 + (lo / hi).powf(p)).powf(1.0 / p)
    };
    let v = d.sinh() / (2.0 * (log_cosh / p).exp()) * mean;
    Ok(bound.lower(v))
}

/// `d(a, b) sqrt(R_φ(a) R_φ(b))` under `‖Sφ‖ <= 2`.
pub fn chuaqui_pommerenke_lower(
    phi: &AnalyticMap,
    a: DiskPoint,
    b: DiskPoint,
) -> Result<PairBound> {
    let bound = PairBound::new("chuaqui_pommerenke_lower", "nehari_analytic")
        .lower(0.0)
        .with("t", 1.0);
    if same(a, b) {
        return Ok(bound.degenerate());
    }
    let (ra, rb) = analytic_scales(phi, a, b)?;
    Ok(bound.lower(chuaqui_pommerenke(hyperbolic(a, b), ra, rb)))
}

/// `sqrt(R_φ(a) R_φ(b) / (1+t)) sinh(sqrt(1+t) d)` under `‖Sφ‖ <= 2t`.
pub fn mmm_upper(phi: &AnalyticMap, a: DiskPoint, b: DiskPoint, t: f64) -> Result<PairBound> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::parameter("t", t, "must lie in [0, 1]"));
    }
    let bound = PairBound::new("mmm_upper", "nehari_analytic")
        .upper(0.0)
        .with("t", t);
    if same(a, b) {
        return Ok(bound.degenerate());
    }
    let (ra, rb) = analytic_scales(phi, a, b)?;
    Ok(bound.upper(mmm(t, hyperbolic(a, b), ra, rb)))
}

/// Order-α family bounds with the corrected `(e^{2αd} - 1)` upper factor.
/// Read literally as `e^{2αd - 1}` the upper bound would not vanish at `a = b`.
pub fn dhk_bounds(f: &HarmonicMap, a: DiskPoint, b: DiskPoint, alpha: f64) -> Result<PairBound> {
    if !(alpha >= 1.0) {
        return Err(Error::parameter("alpha", alpha, "order is at least 1"));
    }
    dhk_unchecked(f, a, b, alpha)
}

/// Same formula without the `α >= 1` guard; the verifier uses it to feed
/// deliberately wrong orders to the detector.
pub fn dhk_unchecked(f: &HarmonicMap, a: DiskPoint, b: DiskPoint, alpha: f64) -> Result<PairBound> {
    if !(alpha > 0.0) {
        return Err(Error::parameter("alpha", alpha, "must be positive"));
    }
    let bound = PairBound::new("dhk_bounds", "normalized")
        .lower(0.0)
        .upper(0.0)
        .with("alpha", alpha);
    if same(a, b) {
        return Ok(bound);
    }
    let (qa, qb) = quantities(f, a, b)?;
    let d = hyperbolic(a, b);
    let k = 2.0 * alpha;
    Ok(bound
        .lower(lower_growth(k, d) * qa.r.max(qb.r))
        .upper(upper_growth(k, d) * qa.q.min(qb.q)))
}

/// `(1 - e^{-3d})/3` and `(e^{3d} - 1)/3` times `sqrt(R_φ(a) R_φ(b))`.
pub fn becker_analytic_bounds(phi: &AnalyticMap, a: DiskPoint, b: DiskPoint) -> Result<PairBound> {
    let bound = PairBound::new("becker_analytic_bounds", "becker_analytic")
        .lower(0.0)
        .upper(0.0);
    if same(a, b) {
        return Ok(bound);
    }
    let (ra, rb) = analytic_scales(phi, a, b)?;
    let (lo, hi) = becker_pair(hyperbolic(a, b), ra, rb, ra, rb);
    Ok(bound.lower(lo).upper(hi))
}

/// Statement form: `R` on the lower side, `Q` on the upper side.
pub fn becker_harmonic_bounds(f: &HarmonicMap, a: DiskPoint, b: DiskPoint) -> Result<PairBound> {
    let bound = PairBound::new("becker_harmonic_bounds", "becker_harmonic")
        .lower(0.0)
        .upper(0.0);
    if same(a, b) {
        return Ok(bound);
    }
    let (qa, qb) = quantities(f, a, b)?;
    let (lo, hi) = becker_pair(hyperbolic(a, b), qa.r, qb.r, qa.q, qb.q);
    Ok(bound.lower(lo).upper(hi))
}

/// The squared variant that ends the published argument:
/// `|f(a)-f(b)|^2 <= (e^{3d}-1)/3 Q(a)Q(b)` and the matching lower side,
/// returned after taking square roots.
pub fn becker_harmonic_proof_form(
    f: &HarmonicMap,
    a: DiskPoint,
    b: DiskPoint,
) -> Result<PairBound> {
    let bound = PairBound::new("becker_harmonic_proof_form", "becker_harmonic")
        .lower(0.0)
        .upper(0.0);
    if same(a, b) {
        return Ok(bound);
    }
    let (qa, qb) = quantities(f, a, b)?;
    let d = hyperbolic(a, b);
    Ok(bound
        .lower((lower_growth(3.0, d) * qa.r * qb.r).sqrt())
        .upper((upper_growth(3.0, d) * qa.q * qb.q).sqrt()))
}

/// `d sqrt(R(a)R(b))` and `sqrt(Q(a)Q(b)/2) sinh(√2 d)` under `‖S_f‖ <= ε`.
pub fn nehari_harmonic_bounds(f: &HarmonicMap, a: DiskPoint, b: DiskPoint) -> Result<PairBound> {
    let bound = PairBound::new("nehari_harmonic_bounds", "nehari_harmonic")
        .lower(0.0)
        .upper(0.0);
    if same(a, b) {
        return Ok(bound);
    }
    let (qa, qb) = quantities(f, a, b)?;
    let d = hyperbolic(a, b);
    Ok(bound
        .lower(chuaqui_pommerenke(d, qa.r, qb.r))
        .upper(mmm(1.0, d, qa.q, qb.q)))
}

/// `(1 ∓ ‖ω‖_∞) ρ (R_h(a) + R_h(b)) / 2` for convex `h`.
pub fn convex_h_bounds(
    f: &HarmonicMap,
    a: DiskPoint,
    b: DiskPoint,
    omega_inf: f64,
) -> Result<PairBound> {
    if !(0.0..1.0).contains(&omega_inf) {
        return Err(Error::parameter(
            "omega_inf",
            omega_inf,
            "sense-preserving maps need a dilatation bound below 1",
        ));
    }
    let bound = PairBound::new("convex_h_bounds", "convexity")
        .lower(0.0)
        .upper(0.0)
        .with("omega_inf", omega_inf);
    if same(a, b) {
        return Ok(bound);
    }
    let (qa, qb) = quantities(f, a, b)?;
    let base = pseudo_hyperbolic(a, b) * (qa.r_h + qb.r_h) / 2.0;
    Ok(bound
        .lower((1.0 - omega_inf) * base)
        .upper((1.0 + omega_inf) * base))
}

/// `c`-linearly connected `h` of order `β`, with `c ‖ω‖_∞ < 1`.
pub fn linconn_bounds(
    f: &HarmonicMap,
    a: DiskPoint,
    b: DiskPoint,
    c: f64,
    beta: f64,
    omega_inf: f64,
) -> Result<PairBound> {
    if !(c >= 1.0) {
        return Err(Error::parameter("c", c, "must be at least 1"));
    }
    if !(1.0..=2.0).contains(&beta) {
        return Err(Error::parameter("beta", beta, "must lie in [1, 2]"));
    }
    let spread = c * omega_inf;
    if !(0.0..1.0).contains(&spread) {
        return Err(Error::parameter(
            "omega_inf",
            omega_inf,
            "c times the dilatation bound must stay below 1",
        ));
    }
    let bound = PairBound::new("linconn_bounds", "linearly_connected_dilatation")
        .lower(0.0)
        .upper(0.0)
        .with("c", c)
        .with("beta", beta)
        .with("omega_inf", omega_inf);
    if same(a, b) {
        return Ok(bound);
    }
    let (qa, qb) = quantities(f, a, b)?;
    let d = hyperbolic(a, b);
    let scale = geometric_mean(qa.r_h, qb.r_h);
    let k = 2.0 * beta;
    Ok(bound
        .lower((1.0 - spread) * lower_growth(k, d) * scale)
        .upper((1.0 + spread) * upper_growth(k, d) * scale))
}

/// Order-`β_λ` bounds with the harmonic `R` on both sides.
pub fn corollary_bounds(
    f: &HarmonicMap,
    a: DiskPoint,
    b: DiskPoint,
    beta_lambda: f64,
) -> Result<PairBound> {
    if !(1.0..=2.0).contains(&beta_lambda) {
        return Err(Error::parameter(
            "beta_lambda",
            beta_lambda,
            "must lie in [1, 2]",
        ));
    }
    let bound = PairBound::new("corollary_bounds", "linearly_connected_dilatation")
        .lower(0.0)
        .upper(0.0)
        .with("beta_lambda", beta_lambda);
    if same(a, b) {
        return Ok(bound);
    }
    let (qa, qb) = quantities(f, a, b)?;
    let d = hyperbolic(a, b);
    let scale = geometric_mean(qa.r, qb.r);
    let k = 2.0 * beta_lambda;
    Ok(bound
        .lower(lower_growth(k, d) * scale)
        .upper(upper_growth(k, d) * scale))
}

/// Closed form of `|f(a) - f(b)|` for `f = h + conj(α h)` with Möbius `h`:
/// `sqrt(R_h(a) R_h(b)) sinh(d) |1 + λα|`, `λ = conj(Δh)/Δh`.
/// Returns 0 at `a == b`, where `λ` is undefined.
pub fn mobius_exact(f: &HarmonicMap, a: DiskPoint, b: DiskPoint) -> Result<f64> {
    let alpha = f
        .mobius_alpha()
        .ok_or_else(|| Error::Normalization("map is not a harmonic Möbius map".into()))?;
    if f.h().as_mobius().is_none() {
        return Err(Error::Normalization("analytic part is not Möbius".into()));
    }
    if same(a, b) {
        return Ok(0.0);
    }
    let (ra, rb) = analytic_scales(f.h(), a, b)?;
    let dh = f.h().eval(a.value())? - f.h().eval(b.value())?;
    let lambda = dh.conj() / dh;
    Ok(geometric_mean(ra, rb)
        * hyperbolic(a, b).sinh()
        * (Complex64::new(1.0, 0.0) + lambda * alpha).norm())
}

pub fn mobius_exact_bound(f: &HarmonicMap, a: DiskPoint, b: DiskPoint) -> Result<PairBound> {
    let v = mobius_exact(f, a, b)?;
    Ok(PairBound::new("mobius_exact", "harmonic_mobius")
        .lower(v)
        .upper(v))
}

/// Growth estimate for a normalized map of order `α`:
/// `(1 - ((1-r)/(1+r))^α)/(2α) <= |φ(z)| <= (((1+r)/(1-r))^α - 1)/(2α)`.
pub fn growth_sandwich(z: DiskPoint, alpha: f64) -> Result<(f64, f64)> {
    if !(alpha > 0.0) {
        return Err(Error::parameter("alpha", alpha, "must be positive"));
    }
    let r = z.modulus();
    if r == 0.0 {
        return Ok((0.0, 0.0));
    }
    // ((1+r)/(1-r))^α = e^{2α artanh r}
    let d = r.atanh();
    let k = 2.0 * alpha;
    Ok((lower_growth(k, d), upper_growth(k, d)))
}

/// [`growth_sandwich`] at `z` as a bound on `|φ(z) - φ(0)|`.
pub fn growth_sandwich_bound(z: DiskPoint, alpha: f64) -> Result<PairBound> {
    let (lo, hi) = growth_sandwich(z, alpha)?;
    Ok(PairBound::new("growth_sandwich", "normalized_univalent")
        .lower(lo)
        .upper(hi)
        .with("alpha", alpha))
}
