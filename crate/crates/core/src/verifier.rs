//! Sampling harness: gate a bound on its hypothesis, evaluate it on seeded
//! pairs against directly computed `|f(a) - f(b)|`, and aggregate margins.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, PairBound};
use crate::criteria::{self, BeckerVariant, CriterionVerdict};
use crate::disk::{automorphism_value, hyperbolic, pseudo_hyperbolic, DiskPoint};
use crate::error::{Error, Result};
use crate::harmonic::HarmonicMap;
use crate::norms::{beta_lambda, sup_weighted, Functional, SupConfig};

/// The single comparison tolerance: a margin counts as a violation when it
/// is below `-TOLERANCE * max(1, |f(a) - f(b)|)`.
pub const TOLERANCE: f64 = 1e-9;

/// Near-diagonal pairs keep `ρ(a, b)` below this.
pub const NEAR_DIAGONAL_RHO: f64 = 0.05;

/// Inner radius of the boundary-biased annulus.
pub const BOUNDARY_ANNULUS: f64 = 0.8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Strategy {
    #[serde(rename = "uniform-in-disc")]
    Uniform,
    #[serde(rename = "boundary-biased")]
    BoundaryBiased,
    #[serde(rename = "near-diagonal")]
    NearDiagonal,
}

impl Strategy {
    fn stream(self) -> u64 {
        match self {
            Strategy::Uniform => 1,
            Strategy::BoundaryBiased => 2,
            Strategy::NearDiagonal => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairSample {
    pub a: DiskPoint,
    pub b: DiskPoint,
    pub strategy: Strategy,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleCounts {
    pub uniform: usize,
    pub boundary: usize,
    pub near_diagonal: usize,
}

impl Default for SampleCounts {
    fn default() -> Self {
        SampleCounts {
            uniform: 10_000,
            boundary: 1_000,
            near_diagonal: 1_000,
        }
    }
}

/// Area-uniform point with `lo <= |z| <= hi`.
fn annulus_point(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex64 {
    let u: f64 = rng.gen();
    let r = (lo * lo + u * (hi * hi - lo * lo)).sqrt();
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(r, theta)
}

pub fn sample_pairs(
    strategy: Strategy,
    count: usize,
    seed: u64,
    r_max: f64,
) -> Result<Vec<PairSample>> {
    if count == 0 {
        return Err(Error::parameter("count", 0.0, "must be at least 1"));
    }
    if !(r_max > 0.0 && r_max < 1.0) {
        return Err(Error::parameter("r_max", r_max, "must lie in (0, 1)"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(strategy.stream());
    let inner = BOUNDARY_ANNULUS.min(r_max);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (a, b) = match strategy {
            Strategy::Uniform => (
                annulus_point(&mut rng, 0.0, r_max),
                annulus_point(&mut rng, 0.0, r_max),
            ),
            Strategy::BoundaryBiased => (
                annulus_point(&mut rng, inner, r_max),
                annulus_point(&mut rng, inner, r_max),
            ),
            Strategy::NearDiagonal => {
                let a = annulus_point(&mut rng, 0.0, r_max);
                let w = annulus_point(&mut rng, 0.0, NEAR_DIAGONAL_RHO);
                let b = automorphism_value(a, w);
                if b.norm() > r_max || pseudo_hyperbolic_raw(a, b) >= NEAR_DIAGONAL_RHO {
                    continue;
                }
                (a, b)
            }
        };
        out.push(PairSample {
            a: DiskPoint::new(a)?,
            b: DiskPoint::new(b)?,
            strategy,
            seed,
        });
    }
    Ok(out)
}

fn pseudo_hyperbolic_raw(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / (Complex64::new(1.0, 0.0) - a.conj() * b).norm()
}

/// The default three-regime sample set.
pub fn default_samples(counts: SampleCounts, seed: u64, r_max: f64) -> Result<Vec<PairSample>> {
    let mut out = Vec::new();
    for (strategy, n) in [
        (Strategy::Uniform, counts.uniform),
        (Strategy::BoundaryBiased, counts.boundary),
        (Strategy::NearDiagonal, counts.near_diagonal),
    ] {
        if n > 0 {
            out.extend(sample_pairs(strategy, n, seed, r_max)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    BlatterLower,
    KimMindaConvexLower,
    ChuaquiPommerenkeLower,
    MmmUpper,
    DhkBounds,
    BeckerAnalyticBounds,
    BeckerHarmonicBounds,
    NehariHarmonicBounds,
    ConvexHBounds,
    LinconnBounds,
    CorollaryBounds,
    MobiusExact,
    GrowthSandwich,
}

impl BoundKind {
    pub const ALL: [BoundKind; 13] = [
        BoundKind::BlatterLower,
        BoundKind::KimMindaConvexLower,
        BoundKind::ChuaquiPommerenkeLower,
        BoundKind::MmmUpper,
        BoundKind::DhkBounds,
        BoundKind::BeckerAnalyticBounds,
        BoundKind::BeckerHarmonicBounds,
        BoundKind::NehariHarmonicBounds,
        BoundKind::ConvexHBounds,
        BoundKind::LinconnBounds,
        BoundKind::CorollaryBounds,
        BoundKind::MobiusExact,
        BoundKind::GrowthSandwich,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::BlatterLower => "blatter_lower",
            BoundKind::KimMindaConvexLower => "kim_minda_convex_lower",
            BoundKind::ChuaquiPommerenkeLower => "chuaqui_pommerenke_lower",
            BoundKind::MmmUpper => "mmm_upper",
            BoundKind::DhkBounds => "dhk_bounds",
            BoundKind::BeckerAnalyticBounds => "becker_analytic_bounds",
            BoundKind::BeckerHarmonicBounds => "becker_harmonic_bounds",
            BoundKind::NehariHarmonicBounds => "nehari_harmonic_bounds",
            BoundKind::ConvexHBounds => "convex_h_bounds",
            BoundKind::LinconnBounds => "linconn_bounds",
            BoundKind::CorollaryBounds => "corollary_bounds",
            BoundKind::MobiusExact => "mobius_exact",
            BoundKind::GrowthSandwich => "growth_sandwich",
        }
    }

    /// Bounds stated for analytic maps only.
    pub fn analytic_only(self) -> bool {
        matches!(
            self,
            BoundKind::ChuaquiPommerenkeLower
                | BoundKind::MmmUpper
                | BoundKind::BeckerAnalyticBounds
        )
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Descriptor {
                path: "bound".into(),
                message: format!("unknown bound {s:?}"),
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundParams {
    pub p: f64,
    pub t: f64,
    /// Order used by the DHK and growth bounds.
    pub alpha: f64,
    /// Order of `h` for the linear-connectivity bounds; 2 is always safe.
    pub beta: f64,
    pub c: f64,
    pub epsilon: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams {
            p: 2.0,
            t: 1.0,
            alpha: 2.0,
            beta: 2.0,
            c: 1.0,
            epsilon: criteria::DEFAULT_NEHARI_EPSILON,
        }
    }
}

/// A map under test together with what is known about it.
#[derive(Clone, Debug)]
pub struct Target {
    pub id: String,
    pub map: HarmonicMap,
    /// Univalence known from the catalog rather than from a criterion.
    pub declared_univalent: bool,
}

impl Target {
    pub fn new(id: impl Into<String>, map: HarmonicMap) -> Self {
        Target {
            id: id.into(),
            map,
            declared_univalent: false,
        }
    }

    pub fn univalent(mut self) -> Self {
        self.declared_univalent = true;
        self
    }
}

fn combine(name: &str, verdicts: Vec<CriterionVerdict>) -> CriterionVerdict {
    let worst = verdicts
        .iter()
        .min_by(|x, y| x.margin.total_cmp(&y.margin))
        .expect("at least one verdict");
    let mut out = CriterionVerdict::new(name, worst.margin, worst.witness);
    out.holds = verdicts.iter().all(|v| v.holds);
    for v in &verdicts {
        for (k, val) in &v.parameters {
            out.parameters
                .insert(format!("{}.{}", v.criterion, k), *val);
        }
        out.parameters
            .insert(format!("{}.margin", v.criterion), v.margin);
    }
    out
}

fn normalized_verdict(f: &HarmonicMap) -> Result<CriterionVerdict> {
    let zero = Complex64::new(0.0, 0.0);
    let h = f.h().jet(zero)?;
    let g = f.g().eval(zero)?;
    let defect = h.value().norm().max(g.norm()).max((h.d1() - 1.0).norm());
    Ok(CriterionVerdict::new(
        "normalized",
        -defect,
        DiskPoint::ORIGIN,
    ))
}

fn analytic_verdict(f: &HarmonicMap, cfg: &SupConfig) -> Result<CriterionVerdict> {
    if f.is_analytic() {
        return Ok(CriterionVerdict::new("analytic", 0.0, DiskPoint::ORIGIN));
    }
    let est = sup_weighted(&Functional::OmegaModulus(f.dilatation()), cfg)?;
    let mut v = CriterionVerdict::new("analytic", -est.value, est.argmax_point);
    v.holds = false;
    Ok(v)
}

/// Univalence from the catalog, or else from the first sufficient criterion
/// that holds.
fn univalent_verdict(target: &Target, cfg: &SupConfig) -> Result<CriterionVerdict> {
    if target.declared_univalent {
        return Ok(CriterionVerdict::new("univalent", 0.0, DiskPoint::ORIGIN).with("declared", 1.0));
    }
    let f = &target.map;
    let mut tried = Vec::new();
    if f.is_analytic() {
        tried.push(criteria::nehari_analytic(f.h(), 1.0, cfg)?);
        tried.push(criteria::becker_analytic(
            f.h(),
            BeckerVariant::Classical,
            cfg,
        )?);
        tried.push(criteria::convexity_check(f.h(), cfg)?);
    } else {
        tried.push(criteria::becker_harmonic(f, cfg)?);
    }
    let best = tried
        .into_iter()
        .max_by(|x, y| x.margin.total_cmp(&y.margin))
        .expect("at least one criterion");
    Ok(
        CriterionVerdict::new("univalent", best.margin, best.witness)
            .with("declared", 0.0)
            .with(&format!("via.{}", best.criterion), best.margin),
    )
}

fn mobius_verdict(f: &HarmonicMap) -> CriterionVerdict {
    let mut v = CriterionVerdict::new("harmonic_mobius", 0.0, DiskPoint::ORIGIN);
    v.holds = f.mobius_alpha().is_some() && f.h().as_mobius().is_some();
    if !v.holds {
        v.margin = -1.0;
    }
    v
}

/// Hypothesis verdict plus the scalar inputs a bound needs.
#[derive(Clone, Debug)]
struct Prepared {
    verdict: CriterionVerdict,
    omega_inf: f64,
    beta_lambda: f64,
    parameters: BTreeMap<String, f64>,
    notes: Vec<String>,
}

fn prepare(
    target: &Target,
    kind: BoundKind,
    params: &BoundParams,
    cfg: &SupConfig,
) -> Result<Prepared> {
    let f = &target.map;
    let mut parameters = BTreeMap::new();
    let mut notes = Vec::new();
    let mut omega_inf = 0.0;
    let mut beta_l = params.beta;
    let with_analytic = |v: CriterionVerdict, name: &str| -> Result<CriterionVerdict> {
        Ok(combine(name, vec![analytic_verdict(f, cfg)?, v]))
    };
    let verdict = match kind {
        BoundKind::BlatterLower => univalent_verdict(target, cfg)?,
        BoundKind::KimMindaConvexLower => {
            parameters.insert("p".into(), params.p);
            criteria::convexity_check(f.h(), cfg)?
        }
        BoundKind::ChuaquiPommerenkeLower => {
            parameters.insert("t".into(), 1.0);
            with_analytic(
                criteria::nehari_analytic(f.h(), 1.0, cfg)?,
                "nehari_analytic",
            )?
        }
        BoundKind::MmmUpper => {
            parameters.insert("t".into(), params.t);
            with_analytic(
                criteria::nehari_analytic(f.h(), params.t, cfg)?,
                "nehari_analytic",
            )?
        }
        BoundKind::BeckerAnalyticBounds => with_analytic(
            criteria::becker_analytic(f.h(), BeckerVariant::Plain, cfg)?,
            "becker_analytic",
        )?,
        BoundKind::DhkBounds => {
            parameters.insert("alpha".into(), params.alpha);
            if params.alpha < 1.0 {
                notes.push(format!(
                    "alpha = {} is below the minimum order 1; evaluated as a detector check",
                    params.alpha
                ));
            }
            normalized_verdict(f)?
        }
        BoundKind::GrowthSandwich => {
            parameters.insert("alpha".into(), params.alpha);
            combine(
                "normalized_univalent",
                vec![normalized_verdict(f)?, univalent_verdict(target, cfg)?],
            )
        }
        BoundKind::BeckerHarmonicBounds => criteria::becker_harmonic(f, cfg)?,
        BoundKind::NehariHarmonicBounds => {
            parameters.insert("epsilon".into(), params.epsilon);
            criteria::nehari_harmonic(f, params.epsilon, cfg)?
        }
        BoundKind::ConvexHBounds => {
            let est = sup_weighted(&Functional::OmegaModulus(f.dilatation()), cfg)?;
            omega_inf = est.value;
            parameters.insert("omega_inf".into(), omega_inf);
            let mut sense =
                CriterionVerdict::new("dilatation_below_one", 1.0 - omega_inf, est.argmax_point);
            sense.holds = omega_inf < 1.0;
            combine(
                "convexity",
                vec![criteria::convexity_check(f.h(), cfg)?, sense],
            )
        }
        BoundKind::LinconnBounds | BoundKind::CorollaryBounds => {
            let d = criteria::linearly_connected_dilatation(f, params.c, cfg)?;
            omega_inf = d.parameters["omega_inf"];
            parameters.insert("c".into(), params.c);
            parameters.insert("beta".into(), params.beta);
            parameters.insert("omega_inf".into(), omega_inf);
            // c = 1 is convexity; larger c uses the mesh estimate of h(D)
            let connected = if params.c == 1.0 {
                criteria::convexity_check(f.h(), cfg)?
            } else {
                let est = criteria::linear_connectivity_estimate(f.h(), 0.95, 200, 80, 0)?;
                CriterionVerdict::new(
                    "linear_connectivity",
                    params.c - est.c_hat,
                    est.worst_pair.0,
                )
                .with("c_hat", est.c_hat)
                .with("r_sample", est.r_sample)
            };
            if kind == BoundKind::CorollaryBounds {
                beta_l = beta_lambda(params.beta, f.dilatation(), cfg)?;
                parameters.insert("beta_lambda".into(), beta_l);
            }
            combine("linearly_connected_dilatation", vec![d, connected])
        }
        BoundKind::MobiusExact => mobius_verdict(f),
    };
    parameters.insert("r_max".into(), cfg.r_max);
    Ok(Prepared {
        verdict,
        omega_inf,
        beta_lambda: beta_l,
        parameters,
        notes,
    })
}

fn evaluate_bound(
    f: &HarmonicMap,
    kind: BoundKind,
    params: &BoundParams,
    prep: &Prepared,
    a: DiskPoint,
    b: DiskPoint,
) -> Result<PairBound> {
    match kind {
        BoundKind::BlatterLower => bounds::blatter_lower(f, a, b),
        BoundKind::KimMindaConvexLower => bounds::kim_minda_convex_lower(f, a, b, params.p),
        BoundKind::ChuaquiPommerenkeLower => bounds::chuaqui_pommerenke_lower(f.h(), a, b),
        BoundKind::MmmUpper => bounds::mmm_upper(f.h(), a, b, params.t),
        BoundKind::DhkBounds => bounds::dhk_unchecked(f, a, b, params.alpha),
        BoundKind::BeckerAnalyticBounds => bounds::becker_analytic_bounds(f.h(), a, b),
        BoundKind::BeckerHarmonicBounds => bounds::becker_harmonic_bounds(f, a, b),
        BoundKind::NehariHarmonicBounds => bounds::nehari_harmonic_bounds(f, a, b),
        BoundKind::ConvexHBounds => bounds::convex_h_bounds(f, a, b, prep.omega_inf),
        BoundKind::LinconnBounds => {
            bounds::linconn_bounds(f, a, b, params.c, params.beta, prep.omega_inf)
        }
        BoundKind::CorollaryBounds => bounds::corollary_bounds(f, a, b, prep.beta_lambda),
        BoundKind::MobiusExact => bounds::mobius_exact_bound(f, a, b),
        BoundKind::GrowthSandwich => bounds::growth_sandwich_bound(b, params.alpha),
    }
}

/// Growth is a one-point estimate: `|φ(z)| = |φ(z) - φ(0)|`, so the pair is
/// re-anchored at the origin.
fn anchor(kind: BoundKind, s: &PairSample) -> (DiskPoint, DiskPoint) {
    match kind {
        BoundKind::GrowthSandwich => (DiskPoint::ORIGIN, s.b),
        _ => (s.a, s.b),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairRecord {
    pub a: DiskPoint,
    pub b: DiskPoint,
    pub rho: f64,
    pub d: f64,
    pub lower: Option<f64>,
    pub actual: f64,
    pub upper: Option<f64>,
    pub lower_margin: Option<f64>,
    pub upper_margin: Option<f64>,
}

impl PairRecord {
    fn scale(&self) -> f64 {
        self.actual.max(1.0)
    }

    /// Smallest margin relative to the tolerance scale; `+inf` if no side.
    pub fn relative_margin(&self) -> f64 {
        let s = self.scale();
        self.lower_margin
            .into_iter()
            .chain(self.upper_margin)
            .map(|m| m / s)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn violated(&self) -> bool {
        self.relative_margin() < -TOLERANCE
    }
}

fn record(f: &HarmonicMap, bound: &PairBound, a: DiskPoint, b: DiskPoint) -> Result<PairRecord> {
    let actual = (f.eval(a)? - f.eval(b)?).norm();
    Ok(PairRecord {
        a,
        b,
        rho: pseudo_hyperbolic(a, b),
        d: hyperbolic(a, b),
        lower: bound.lower,
        actual,
        upper: bound.upper,
        lower_margin: bound.lower.map(|lo| actual - lo),
        upper_margin: bound.upper.map(|hi| hi - actual),
    })
}

/// How the squared variant of the harmonic Becker bound compares with the
/// stated one, pair by pair.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProofFormComparison {
    pub statement_tighter_upper: usize,
    pub proof_tighter_upper: usize,
    pub statement_tighter_lower: usize,
    pub proof_tighter_lower: usize,
    pub proof_form_violations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyStatus {
    Passed,
    Violations,
    HypothesisNotMet,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound_name: &'static str,
    pub map_id: String,
    pub status: VerifyStatus,
    pub hypothesis_verdict: CriterionVerdict,
    pub pairs: usize,
    pub evaluated: usize,
    pub violations: usize,
    pub skipped: usize,
    pub min_lower_margin: Option<f64>,
    pub min_upper_margin: Option<f64>,
    pub worst_pair: Option<PairSample>,
    pub worst_relative_margin: Option<f64>,
    /// Best `lower / actual` (or `actual / upper` for one-sided upper bounds).
    pub tightness: Option<f64>,
    pub tolerance: f64,
    pub parameters: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proof_form: Option<ProofFormComparison>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verification {
    pub report: BoundReport,
    /// One record per evaluated pair, in sample order.
    pub records: Vec<PairRecord>,
}

#[allow(clippy::large_enum_variant)]
enum Outcome {
    Done(PairRecord, Option<PairBound>),
    Skipped,
}

pub fn verify_bound(
    target: &Target,
    kind: BoundKind,
    params: &BoundParams,
    cfg: &SupConfig,
    samples: &[PairSample],
) -> Result<Verification> {
    cfg.validate()?;
    let prep = prepare(target, kind, params, cfg)?;
    let mut report = BoundReport {
        bound_name: kind.name(),
        map_id: target.id.clone(),
        status: VerifyStatus::HypothesisNotMet,
        hypothesis_verdict: prep.verdict.clone(),
        pairs: samples.len(),
        evaluated: 0,
        violations: 0,
        skipped: 0,
        min_lower_margin: None,
        min_upper_margin: None,
        worst_pair: None,
        worst_relative_margin: None,
        tightness: None,
        tolerance: TOLERANCE,
        parameters: prep.parameters.clone(),
        proof_form: None,
        notes: prep.notes.clone(),
    };
    if !prep.verdict.holds {
        return Ok(Verification {
            report,
            records: Vec::new(),
        });
    }
    let f = &target.map;
    let outcomes = cfg.parallelism.map(samples.len(), |i| {
        let (a, b) = anchor(kind, &samples[i]);
        let run = || -> Result<Outcome> {
            let bound = evaluate_bound(f, kind, params, &prep, a, b)?;
            let rec = record(f, &bound, a, b)?;
            let proof = if kind == BoundKind::BeckerHarmonicBounds {
                Some(bounds::becker_harmonic_proof_form(f, a, b)?)
            } else {
                None
            };
            Ok(Outcome::Done(rec, proof))
        };
        run().unwrap_or(Outcome::Skipped)
    });

    let mut records = Vec::with_capacity(samples.len());
    let mut proof = ProofFormComparison::default();
    let mut worst: Option<(f64, usize)> = None;
    for (i, outcome) in outcomes.into_iter().enumerate() {
        let (rec, proof_bound) = match outcome {
            Outcome::Done(r, p) => (r, p),
            Outcome::Skipped => {
                report.skipped += 1;
                continue;
            }
        };
        if rec.violated() {
            report.violations += 1;
        }
        let rel = rec.relative_margin();
        if worst.is_none_or(|(w, _)| rel < w) {
            worst = Some((rel, i));
        }
        if let Some(m) = rec.lower_margin {
            report.min_lower_margin = Some(report.min_lower_margin.map_or(m, |x| x.min(m)));
        }
        if let Some(m) = rec.upper_margin {
            report.min_upper_margin = Some(report.min_upper_margin.map_or(m, |x| x.min(m)));
        }
        if rec.actual > 0.0 {
            let ratio = match (rec.lower, rec.upper) {
                (Some(lo), _) => Some(lo / rec.actual),
                (None, Some(hi)) if hi > 0.0 => Some(rec.actual / hi),
                _ => None,
            };
            if let Some(t) = ratio {
                report.tightness = Some(report.tightness.map_or(t, |x| x.max(t)));
            }
        }
        if let Some(pb) = proof_bound {
            let (plo, phi) = (pb.lower.unwrap_or(0.0), pb.upper.unwrap_or(0.0));
            let (slo, shi) = (rec.lower.unwrap_or(0.0), rec.upper.unwrap_or(0.0));
            if phi < shi {
                proof.proof_tighter_upper += 1;
            } else {
                proof.statement_tighter_upper += 1;
            }
            if plo > slo {
                proof.proof_tighter_lower += 1;
            } else {
                proof.statement_tighter_lower += 1;
            }
            let tol = TOLERANCE * rec.scale();
            if rec.actual - plo < -tol || phi - rec.actual < -tol {
                proof.proof_form_violations += 1;
            }
        }
        records.push(rec);
    }
    report.evaluated = records.len();
    if let Some((rel, i)) = worst {
        report.worst_pair = Some(samples[i]);
        report.worst_relative_margin = Some(rel);
    }
    if kind == BoundKind::BeckerHarmonicBounds {
        report.proof_form = Some(proof);
    }
    report.status = if report.violations == 0 {
        VerifyStatus::Passed
    } else {
        VerifyStatus::Violations
    };
    Ok(Verification { report, records })
}

impl BoundReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Internal(e.to_string()))
    }
}

#[derive(Serialize)]
struct CsvRow {
    re_a: f64,
    im_a: f64,
    re_b: f64,
    im_b: f64,
    rho: f64,
    d: f64,
    lower: Option<f64>,
    actual: f64,
    upper: Option<f64>,
    lower_margin: Option<f64>,
    upper_margin: Option<f64>,
}

/// Per-pair CSV; absent bound sides are empty cells.
pub fn write_pairs_csv<W: Write>(records: &[PairRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Internal(e.to_string());
    for r in records {
        w.serialize(CsvRow {
            re_a: r.a.value().re,
            im_a: r.a.value().im,
            re_b: r.b.value().re,
            im_b: r.b.value().im,
            rho: r.rho,
            d: r.d,
            lower: r.lower,
            actual: r.actual,
            upper: r.upper,
            lower_margin: r.lower_margin,
            upper_margin: r.upper_margin,
        })
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Internal(e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    pub pair: PairSample,
    pub relative_margin: f64,
    pub lower_margin: Option<f64>,
    pub upper_margin: Option<f64>,
    pub evaluations: usize,
}

const SEARCH_INITIAL_STEP: f64 = 0.05;
const SEARCH_MIN_STEP: f64 = 1e-10;

/// Pattern search over `(a, b)` in `R^4` minimizing the relative margin,
/// starting from `start`. Points are kept inside `|z| <= cfg.r_max`.
pub fn counterexample_search(
    target: &Target,
    kind: BoundKind,
    params: &BoundParams,
    cfg: &SupConfig,
    start: &PairSample,
    budget: usize,
) -> Result<SearchResult> {
    let prep = prepare(target, kind, params, cfg)?;
    if !prep.verdict.holds {
        return Err(Error::Hypothesis(format!(
            "{} for {} on {}",
            prep.verdict.criterion,
            kind.name(),
            target.id
        )));
    }
    let f = &target.map;
    let evaluations = std::cell::Cell::new(0usize);
    let objective = |x: [f64; 4]| -> Option<PairRecord> {
        evaluations.set(evaluations.get() + 1);
        let a = Complex64::new(x[0], x[1]);
        let b = Complex64::new(x[2], x[3]);
        if a.norm() > cfg.r_max || b.norm() > cfg.r_max {
            return None;
        }
        let s = PairSample {
            a: DiskPoint::new(a).ok()?,
            b: DiskPoint::new(b).ok()?,
            strategy: start.strategy,
            seed: start.seed,
        };
        let (a, b) = anchor(kind, &s);
        let bound = evaluate_bound(f, kind, params, &prep, a, b).ok()?;
        record(f, &bound, a, b).ok()
    };
    let (sa, sb) = (start.a.value(), start.b.value());
    let mut x = [sa.re, sa.im, sb.re, sb.im];
    let mut best = objective(x).ok_or_else(|| Error::Evaluation {
        point: sa,
        source: Box::new(Error::Internal("start pair cannot be evaluated".into())),
    })?;
    let mut step = SEARCH_INITIAL_STEP;
    while evaluations.get() < budget && step >= SEARCH_MIN_STEP {
        let mut improved: Option<([f64; 4], PairRecord)> = None;
        for axis in 0..4 {
            for sign in [1.0, -1.0] {
                if evaluations.get() >= budget {
                    break;
                }
                let mut y = x;
                y[axis] += sign * step;
                if let Some(rec) = objective(y) {
                    let current = improved
                        .as_ref()
                        .map_or(best.relative_margin(), |(_, r)| r.relative_margin());
                    if rec.relative_margin() < current {
                        improved = Some((y, rec));
                    }
                }
            }
        }
        match improved {
            Some((y, rec)) => {
                x = y;
                best = rec;
            }
            None => step *= 0.5,
        }
    }
    Ok(SearchResult {
        pair: PairSample {
            a: best.a,
            b: best.b,
            strategy: start.strategy,
            seed: start.seed,
        },
        relative_margin: best.relative_margin(),
        lower_margin: best.lower_margin,
        upper_margin: best.upper_margin,
        evaluations: evaluations.get(),
    })
}
