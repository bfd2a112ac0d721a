//! Adaptive Gauss–Kronrod (7, 15) quadrature of complex integrands on an interval.

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 4000;

struct Segment {
    lo: f64,
    hi: f64,
    value: Complex64,
    error: f64,
    magnitude: f64,
}

fn kronrod<F>(f: &F, lo: f64, hi: f64) -> Result<Segment>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center)?;
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut abs = fc.norm() * WGK[7];
    for i in 0..7 {
        let dx = half * XGK[i];
        let (fl, fr) = (f(center - dx)?, f(center + dx)?);
        let s = fl + fr;
        k += s * WGK[i];
        abs += (fl.norm() + fr.norm()) * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    Ok(Segment {
        lo,
        hi,
        value: k * half,
        error: ((k - g) * half).norm(),
        magnitude: abs * half.abs(),
    })
}

/// Integral of `f` over `[lo, hi]` to absolute tolerance `abs_tol` or relative tolerance `rel_tol`.
///
/// Globally adaptive: the segment with the largest error estimate is bisected
/// until the summed estimate meets the tolerance or reaches the rounding floor.
pub fn integrate<F>(f: F, lo: f64, hi: f64, abs_tol: f64, rel_tol: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let mut segments = vec![kronrod(&f, lo, hi)?];
    loop {
        let value: Complex64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        let magnitude: f64 = segments.iter().map(|s| s.magnitude).sum();
        let floor = 50.0 * f64::EPSILON * magnitude;
        if error <= abs_tol.max(rel_tol * value.norm()).max(floor) {
            return Ok(value);
        }
        if segments.len() >= MAX_INTERVALS {
            return Err(Error::Internal(format!(
                "quadrature failed to converge on [{lo}, {hi}] (error {error:e})"
            )));
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.lo + s.hi);
        if mid <= s.lo || mid >= s.hi {
            return Ok(value);
        }
        segments.push(kronrod(&f, s.lo, mid)?);
        segments.push(kronrod(&f, mid, s.hi)?);
    }
}
