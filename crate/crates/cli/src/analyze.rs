use harmdist::criteria::{self, BeckerVariant, CriterionVerdict};
use harmdist::norms::{order_of, sup_weighted, Functional, NormEstimate, OrderEstimate};
use harmdist::operators::{harmonic_pre_schwarzian, harmonic_schwarzian};
use harmdist::{jacobian, DiskPoint, Result};
use num_complex::Complex64;
use serde::Serialize;

use crate::config::Settings;

const SAMPLE_RADII: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 0.9];
const SAMPLE_ANGLES: usize = 8;

/// Either a value or the error that prevented computing it.
#[derive(Serialize)]
#[serde(untagged)]
pub enum Entry<T> {
    Ok(T),
    Err { error: String },
}

impl<T> From<Result<T>> for Entry<T> {
    fn from(r: Result<T>) -> Self {
        match r {
            Ok(v) => Entry::Ok(v),
            Err(e) => Entry::Err {
                error: e.to_string(),
            },
        }
    }
}

#[derive(Serialize)]
pub struct PointSample {
    pub z: DiskPoint,
    pub pre_schwarzian: Entry<Complex64>,
    pub schwarzian: Entry<Complex64>,
    pub jacobian: Entry<f64>,
    pub omega: Entry<Complex64>,
}

#[derive(Serialize)]
pub struct Norms {
    pub pre_schwarzian_h: Entry<NormEstimate>,
    pub schwarzian_h: Entry<NormEstimate>,
    pub harmonic_schwarzian: Entry<NormEstimate>,
    pub omega_inf: Entry<NormEstimate>,
    pub omega_star: Entry<NormEstimate>,
    pub becker_functional: Entry<NormEstimate>,
    pub order_h: Entry<OrderEstimate>,
}

#[derive(Serialize)]
pub struct Analysis {
    pub map_id: String,
    pub analytic: bool,
    pub r_max: f64,
    pub grid: (usize, usize),
    pub samples: Vec<PointSample>,
    pub norms: Norms,
    pub criteria: Vec<Entry<CriterionVerdict>>,
}

pub fn analyze(s: &Settings) -> Analysis {
    let f = &s.mapping.map;
    let h = f.h();
    let cfg = &s.sup;
    let mut samples = Vec::new();
    for &r in &SAMPLE_RADII {
        let n = if r == 0.0 { 1 } else { SAMPLE_ANGLES };
        for k in 0..n {
            let theta = std::f64::consts::TAU * k as f64 / n as f64;
            let z = DiskPoint::from_polar(r, theta).expect("sample radii are inside the disc");
            samples.push(PointSample {
                z,
                pre_schwarzian: harmonic_pre_schwarzian(f, z).into(),
                schwarzian: harmonic_schwarzian(f, z).into(),
                jacobian: jacobian(f, z).into(),
                omega: f.dilatation().value(z.value()).into(),
            });
        }
    }
    let norms = Norms {
        pre_schwarzian_h: sup_weighted(&Functional::PreSchwarzian(h), cfg).into(),
        schwarzian_h: sup_weighted(&Functional::Schwarzian(h), cfg).into(),
        harmonic_schwarzian: sup_weighted(&Functional::HarmonicSchwarzian(f), cfg).into(),
        omega_inf: sup_weighted(&Functional::OmegaModulus(f.dilatation()), cfg).into(),
        omega_star: sup_weighted(&Functional::OmegaStar(f.dilatation()), cfg).into(),
        becker_functional: sup_weighted(&Functional::BeckerHarmonic(f), cfg).into(),
        order_h: order_of(h, cfg).into(),
    };
    let p = &s.params;
    let criteria = vec![
        criteria::becker_analytic(h, BeckerVariant::Plain, cfg).into(),
        criteria::becker_analytic(h, BeckerVariant::Classical, cfg).into(),
        criteria::becker_harmonic(f, cfg).into(),
        criteria::nehari_analytic(h, p.t, cfg).into(),
        criteria::nehari_harmonic(f, p.epsilon, cfg).into(),
        criteria::convexity_check(h, cfg).into(),
        criteria::linearly_connected_dilatation(f, p.c, cfg).into(),
    ];
    Analysis {
        map_id: s.map_id.clone(),
        analytic: f.is_analytic(),
        r_max: cfg.r_max,
        grid: cfg.grid,
        samples,
        norms,
        criteria,
    }
}
