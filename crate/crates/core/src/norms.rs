//! Sampled suprema of disc functionals: weighted operator norms, `‖ω‖_∞`,
//! `‖ω*‖`, and the order of an analytic map.
//!
//! Every estimate is a lower bound on the true supremum. The functional is
//! evaluated on a polar grid whose radii cluster toward `r_max`, and the best
//! grid point is then polished by a pattern search confined to `|z| <= r_max`.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{koebe_transform, AnalyticMap};
use crate::disk::DiskPoint;
use crate::error::{Error, Result};
use crate::harmonic::{Dilatation, HarmonicMap};
use crate::operators::{
    becker_harmonic_functional, harmonic_schwarzian, omega_star_at, order_integrand,
    pre_schwarzian, schwarzian,
};
use crate::parallel::Parallelism;

pub const DEFAULT_R_MAX: f64 = 0.999;
pub const DEFAULT_GRID: (usize, usize) = (64, 256);
const REFINE_ITERATIONS: usize = 30;
const REFINE_CONTRACTION: f64 = 0.5;
const REFINE_CONVERGED_STEP: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupConfig {
    pub r_max: f64,
    pub grid: (usize, usize),
    pub refine: bool,
    pub parallelism: Parallelism,
}

impl Default for SupConfig {
    fn default() -> Self {
        SupConfig {
            r_max: DEFAULT_R_MAX,
            grid: DEFAULT_GRID,
            refine: true,
            parallelism: Parallelism::default(),
        }
    }
}

impl SupConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_max > 0.0 && self.r_max < 1.0) {
            return Err(Error::parameter("r_max", self.r_max, "must lie in (0, 1)"));
        }
        if self.grid.0 < 2 || self.grid.1 < 1 {
            return Err(Error::parameter(
                "grid",
                self.grid.0.min(self.grid.1) as f64,
                "needs at least 2 radii and 1 angle",
            ));
        }
        Ok(())
    }

    /// Radii `r_max · sin(π/2 · i/(n-1))`, clustered toward `r_max`; index 0 is the centre.
    pub fn radii(&self) -> Vec<f64> {
        let n = self.grid.0;
        (0..n)
            .map(|i| self.r_max * (FRAC_PI_2 * i as f64 / (n - 1) as f64).sin())
            .collect()
    }

    /// Grid points: the centre first, then ring by ring.
    pub fn points(&self) -> Vec<Complex64> {
        let radii = self.radii();
        let m = self.grid.1;
        let mut pts = Vec::with_capacity(1 + (radii.len() - 1) * m);
        pts.push(Complex64::new(0.0, 0.0));
        for &r in &radii[1..] {
            for j in 0..m {
                pts.push(Complex64::from_polar(r, TAU * j as f64 / m as f64));
            }
        }
        pts
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    PreSchwarzianNorm,
    SchwarzianNorm,
    OmegaInf,
    OmegaStar,
    Order,
    BeckerFunctional,
    ConvexityDeficit,
}

/// A pointwise functional whose supremum over the disc is estimated.
#[derive(Clone, Copy, Debug)]
pub enum Functional<'a> {
    /// `(1-|z|^2) |Pφ|`
    PreSchwarzian(&'a AnalyticMap),
    /// `(1-|z|^2) |z Pφ|`
    ZPreSchwarzian(&'a AnalyticMap),
    /// `(1-|z|^2)^2 |Sφ|`
    Schwarzian(&'a AnalyticMap),
    /// `(1-|z|^2)^2 |S_f|`
    HarmonicSchwarzian(&'a HarmonicMap),
    /// `|ω|`
    OmegaModulus(&'a Dilatation),
    /// `|ω'| (1-|z|^2) / (1-|ω|^2)`
    OmegaStar(&'a Dilatation),
    /// The harmonic Becker functional.
    BeckerHarmonic(&'a HarmonicMap),
    /// `|½(1-|z|^2) Pφ - conj z|`
    Order(&'a AnalyticMap),
    /// `-Re(1 + z φ''/φ')`; nonpositive everywhere iff φ is convex.
    ConvexityDeficit(&'a AnalyticMap),
}

impl Functional<'_> {
    pub fn kind(&self) -> NormKind {
        match self {
            Functional::PreSchwarzian(_) | Functional::ZPreSchwarzian(_) => {
                NormKind::PreSchwarzianNorm
            }
            Functional::Schwarzian(_) | Functional::HarmonicSchwarzian(_) => {
                NormKind::SchwarzianNorm
            }
            Functional::OmegaModulus(_) => NormKind::OmegaInf,
            Functional::OmegaStar(_) => NormKind::OmegaStar,
            Functional::BeckerHarmonic(_) => NormKind::BeckerFunctional,
            Functional::Order(_) => NormKind::Order,
            Functional::ConvexityDeficit(_) => NormKind::ConvexityDeficit,
        }
    }

    pub fn eval(&self, z: DiskPoint) -> Result<f64> {
        let w = z.weight();
        match self {
            Functional::PreSchwarzian(phi) => Ok(w * pre_schwarzian(phi, z)?.norm()),
            Functional::ZPreSchwarzian(phi) => Ok(w * (z.value() * pre_schwarzian(phi, z)?).norm()),
            Functional::Schwarzian(phi) => Ok(w * w * schwarzian(phi, z)?.norm()),
            Functional::HarmonicSchwarzian(f) => Ok(w * w * harmonic_schwarzian(f, z)?.norm()),
            Functional::OmegaModulus(omega) => Ok(omega.value(z.value())?.norm()),
            Functional::OmegaStar(omega) => omega_star_at(omega, z),
            Functional::BeckerHarmonic(f) => becker_harmonic_functional(f, z),
            Functional::Order(phi) => order_integrand(phi, z),
            Functional::ConvexityDeficit(phi) => {
                Ok(-(1.0 + z.value() * pre_schwarzian(phi, z)?).re)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub kind: NormKind,
    pub r_max: f64,
    pub grid: (usize, usize),
    pub refined: bool,
    pub argmax_point: DiskPoint,
}

/// Strictly better than the incumbent: larger value; ties go to smaller `|z|`, then smaller argument.
fn better(value: f64, z: DiskPoint, best: f64, best_z: DiskPoint) -> bool {
    if value != best {
        return value > best;
    }
    let (m, bm) = (z.modulus(), best_z.modulus());
    if m != bm {
        return m < bm;
    }
    z.arg() < best_z.arg()
}

/// Sampled and refined supremum of `functional` over `|z| <= r_max`.
pub fn sup_weighted(functional: &Functional<'_>, cfg: &SupConfig) -> Result<NormEstimate> {
    cfg.validate()?;
    let points = cfg.points();
    let values = cfg.parallelism.map(points.len(), |i| {
        let z = DiskPoint::new(points[i])?;
        functional.eval(z)
    });
    let mut best = f64::NEG_INFINITY;
    let mut best_z = DiskPoint::ORIGIN;
    let mut best_index = 0;
    for (i, v) in values.into_iter().enumerate() {
        let v = v.map_err(|e| e.at(points[i]))?;
        if v.is_nan() {
            return Err(Error::Singular {
                what: "functional (NaN)",
                point: points[i],
            });
        }
        let z = DiskPoint::new(points[i])?;
        if i == 0 || better(v, z, best, best_z) {
            best = v;
            best_z = z;
            best_index = i;
        }
    }
    let mut refined = false;
    if cfg.refine {
        let step = initial_step(cfg, best_index);
        let (v, z, converged) = pattern_search(functional, cfg.r_max, best, best_z, step);
        best = v;
        best_z = z;
        refined = converged;
    }
    Ok(NormEstimate {
        value: best,
        kind: functional.kind(),
        r_max: cfg.r_max,
        grid: cfg.grid,
        refined,
        argmax_point: best_z,
    })
}

/// Local grid spacing at grid point `index`.
fn initial_step(cfg: &SupConfig, index: usize) -> f64 {
    let radii = cfg.radii();
    let m = cfg.grid.1;
    let ring = if index == 0 { 0 } else { 1 + (index - 1) / m };
    let dr = if ring + 1 < radii.len() {
        radii[ring + 1] - radii[ring]
    } else {
        radii[ring] - radii[ring - 1]
    };
    let arc = radii[ring] * TAU / m as f64;
    dr.max(arc).max(1e-6)
}

fn pattern_search(
    functional: &Functional<'_>,
    r_max: f64,
    mut best: f64,
    mut best_z: DiskPoint,
    mut step: f64,
) -> (f64, DiskPoint, bool) {
    const DIRECTIONS: [(f64, f64); 8] = [
        (1.0, 0.0),
        (-1.0, 0.0),
        (0.0, 1.0),
        (0.0, -1.0),
        (
            std::f64::consts::FRAC_1_SQRT_2,
            std::f64::consts::FRAC_1_SQRT_2,
        ),
        (
            -std::f64::consts::FRAC_1_SQRT_2,
            std::f64::consts::FRAC_1_SQRT_2,
        ),
        (
            std::f64::consts::FRAC_1_SQRT_2,
            -std::f64::consts::FRAC_1_SQRT_2,
        ),
        (
            -std::f64::consts::FRAC_1_SQRT_2,
            -std::f64::consts::FRAC_1_SQRT_2,
        ),
    ];
    for _ in 0..REFINE_ITERATIONS {
        let mut moved = false;
        let centre = best_z.value();
        for (dx, dy) in DIRECTIONS {
            let trial = centre + Complex64::new(dx * step, dy * step);
            if trial.norm() > r_max {
                continue;
            }
            let Ok(z) = DiskPoint::new(trial) else {
                continue;
            };
            if let Ok(v) = functional.eval(z) {
                if v > best {
                    best = v;
                    best_z = z;
                    moved = true;
                }
            }
        }
        if !moved {
            step *= REFINE_CONTRACTION;
            if step < REFINE_CONVERGED_STEP {
                return (best, best_z, true);
            }
        }
    }
    (best, best_z, step < REFINE_CONVERGED_STEP)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OrderEstimate {
    pub alpha: f64,
    pub argmax_point: DiskPoint,
    /// Whether the input already satisfied φ(0) = 0, φ'(0) = 1.
    pub normalized: bool,
}

/// Sampled order `sup |½(1-|z|^2) φ''/φ' - conj z|` of a locally univalent map.
pub fn order_of(phi: &AnalyticMap, cfg: &SupConfig) -> Result<OrderEstimate> {
    let j = phi.jet(Complex64::new(0.0, 0.0))?;
    let normalized = j.value().norm() <= 1e-12 && (j.d1() - 1.0).norm() <= 1e-12;
    let renormalized;
    let target = if normalized {
        phi
    } else {
        renormalized = koebe_transform(phi, DiskPoint::ORIGIN)
            .map_err(|e| Error::Normalization(e.to_string()))?;
        &renormalized
    };
    let est = sup_weighted(&Functional::Order(target), cfg)?;
    Ok(OrderEstimate {
        alpha: est.value,
        argmax_point: est.argmax_point,
        normalized,
    })
}

/// `β_λ = min(2, β + ‖ω*‖)`.
pub fn beta_lambda(beta: f64, omega: &Dilatation, cfg: &SupConfig) -> Result<f64> {
    if !(1.0..=2.0).contains(&beta) {
        return Err(Error::parameter("beta", beta, "must lie in [1, 2]"));
    }
    if omega.is_constant() {
        return Ok(beta.min(2.0));
    }
    let star = sup_weighted(&Functional::OmegaStar(omega), cfg)?;
    Ok((beta + star.value).min(2.0))
}
