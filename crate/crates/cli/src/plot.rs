//! Images of circles and radii under `f`, as SVG polylines and raw CSV.

use std::fmt::Write as _;
use std::io::Write;

use harmdist::verifier::PairRecord;
use harmdist::{DiskPoint, HarmonicMap};
use num_complex::Complex64;

use crate::config::CliError;

pub const CIRCLE_RADII: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95];
pub const RAY_COUNT: usize = 16;
const CIRCLE_SAMPLES: usize = 256;
const RAY_SAMPLES: usize = 128;
const RAY_END: f64 = 0.95;
const CANVAS: f64 = 800.0;

pub struct Curve {
    pub kind: &'static str,
    /// Radius for circles, angle for rays.
    pub param: f64,
    pub points: Vec<(Complex64, Complex64)>,
}

pub fn image_curves(f: &HarmonicMap) -> Result<Vec<Curve>, CliError> {
    let mut curves = Vec::new();
    for &r in &CIRCLE_RADII {
        let points = (0..=CIRCLE_SAMPLES)
            .map(|k| {
                let theta = std::f64::consts::TAU * k as f64 / CIRCLE_SAMPLES as f64;
                let z = DiskPoint::from_polar(r, theta)?;
                Ok((z.value(), f.eval(z)?))
            })
            .collect::<harmdist::Result<Vec<_>>>()?;
        curves.push(Curve {
            kind: "circle",
            param: r,
            points,
        });
    }
    for j in 0..RAY_COUNT {
        let theta = std::f64::consts::TAU * j as f64 / RAY_COUNT as f64;
        let points = (0..=RAY_SAMPLES)
            .map(|k| {
                let z = DiskPoint::from_polar(RAY_END * k as f64 / RAY_SAMPLES as f64, theta)?;
                Ok((z.value(), f.eval(z)?))
            })
            .collect::<harmdist::Result<Vec<_>>>()?;
        curves.push(Curve {
            kind: "ray",
            param: theta,
            points,
        });
    }
    Ok(curves)
}

pub fn write_curves_csv<W: Write>(curves: &[Curve], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(["curve", "kind", "param", "re_z", "im_z", "re_f", "im_f"])
        .map_err(io)?;
    for (i, c) in curves.iter().enumerate() {
        for (z, fz) in &c.points {
            w.write_record([
                i.to_string(),
                c.kind.to_string(),
                c.param.to_string(),
                z.re.to_string(),
                z.im.to_string(),
                fz.re.to_string(),
                fz.im.to_string(),
            ])
            .map_err(io)?;
        }
    }
    w.flush().map_err(CliError::from)
}

/// The view box is fitted to every circle but the outermost, so a single
/// near-boundary blow-up (Koebe) does not shrink the rest of the picture.
pub fn render_svg(curves: &[Curve]) -> String {
    let fit_limit = CIRCLE_RADII[CIRCLE_RADII.len() - 2];
    let (mut lo, mut hi) = (
        Complex64::new(f64::MAX, f64::MAX),
        Complex64::new(f64::MIN, f64::MIN),
    );
    for c in curves
        .iter()
        .filter(|c| c.kind == "circle" && c.param <= fit_limit)
    {
        for (_, w) in &c.points {
            lo = Complex64::new(lo.re.min(w.re), lo.im.min(w.im));
            hi = Complex64::new(hi.re.max(w.re), hi.im.max(w.im));
        }
    }
    let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-12) * 1.1;
    let centre = (lo + hi) / 2.0;
    let scale = CANVAS / span;
    let map = |w: Complex64| {
        (
            CANVAS / 2.0 + (w.re - centre.re) * scale,
            CANVAS / 2.0 - (w.im - centre.im) * scale,
        )
    };
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" viewBox="0 0 {CANVAS} {CANVAS}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for c in curves {
        let stroke = if c.kind == "circle" {
            "#1f4e9c"
        } else {
            "#b0462a"
        };
        let pts: Vec<String> = c
            .points
            .iter()
            .map(|(_, w)| {
                let (x, y) = map(*w);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{stroke}" stroke-width="1" data-{}="{:.6}" points="{}"/>"#,
            c.kind,
            c.param,
            pts.join(" ")
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Margin-versus-ρ scatter data from a verification run.
pub fn write_margins_csv<W: Write>(records: &[PairRecord], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record([
        "rho",
        "d",
        "lower_margin",
        "upper_margin",
        "relative_margin",
    ])
    .map_err(io)?;
    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    for r in records {
        w.write_record([
            r.rho.to_string(),
            r.d.to_string(),
            opt(r.lower_margin),
            opt(r.upper_margin),
            r.relative_margin().to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(CliError::from)
}
