//! Univalence criteria as executable predicates over sampled suprema.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticMap;
use crate::disk::DiskPoint;
use crate::error::{Error, Result};
use crate::harmonic::HarmonicMap;
use crate::norms::{sup_weighted, Functional, SupConfig};

/// A verdict holds when its margin is at least `-CRITERION_SLACK`; sampled
/// suprema that sit exactly on a threshold can overshoot it by rounding.
pub const CRITERION_SLACK: f64 = 1e-9;

/// Default ε for the harmonic Nehari criterion.
pub const DEFAULT_NEHARI_EPSILON: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionVerdict {
    pub criterion: String,
    pub holds: bool,
    /// Threshold minus attained supremum; positive means slack.
    pub margin: f64,
    pub witness: DiskPoint,
    pub parameters: BTreeMap<String, f64>,
}

impl CriterionVerdict {
    pub fn new(criterion: &str, margin: f64, witness: DiskPoint) -> Self {
        CriterionVerdict {
            criterion: criterion.to_string(),
            holds: margin >= -CRITERION_SLACK,
            margin,
            witness,
            parameters: BTreeMap::new(),
        }
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.parameters.insert(name.to_string(), value);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BeckerVariant {
    /// `(1-|z|^2)|Pφ| <= 1`
    Plain,
    /// `(1-|z|^2)|z Pφ| <= 1`
    Classical,
}

pub fn becker_analytic(
    phi: &AnalyticMap,
    variant: BeckerVariant,
    cfg: &SupConfig,
) -> Result<CriterionVerdict> {
    let functional = match variant {
        BeckerVariant::Plain => Functional::PreSchwarzian(phi),
        BeckerVariant::Classical => Functional::ZPreSchwarzian(phi),
    };
    let est = sup_weighted(&functional, cfg)?;
    let name = match variant {
        BeckerVariant::Plain => "becker_analytic",
        BeckerVariant::Classical => "becker_analytic_classical",
    };
    Ok(CriterionVerdict::new(name, 1.0 - est.value, est.argmax_point).with("r_max", cfg.r_max))
}

pub fn becker_harmonic(f: &HarmonicMap, cfg: &SupConfig) -> Result<CriterionVerdict> {
    let est = sup_weighted(&Functional::BeckerHarmonic(f), cfg)?;
    Ok(
        CriterionVerdict::new("becker_harmonic", 1.0 - est.value, est.argmax_point)
            .with("r_max", cfg.r_max),
    )
}

/// `‖Sφ‖ <= 2t`.
pub fn nehari_analytic(phi: &AnalyticMap, t: f64, cfg: &SupConfig) -> Result<CriterionVerdict> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::parameter("t", t, "must lie in [0, 1]"));
    }
    let est = sup_weighted(&Functional::Schwarzian(phi), cfg)?;
    Ok(
        CriterionVerdict::new("nehari_analytic", 2.0 * t - est.value, est.argmax_point)
            .with("t", t)
            .with("r_max", cfg.r_max),
    )
}

/// `‖S_f‖ <= ε`, with ε supplied by the caller.
pub fn nehari_harmonic(f: &HarmonicMap, epsilon: f64, cfg: &SupConfig) -> Result<CriterionVerdict> {
    if !(epsilon > 0.0) {
        return Err(Error::parameter("epsilon", epsilon, "must be positive"));
    }
    let est = sup_weighted(&Functional::HarmonicSchwarzian(f), cfg)?;
    Ok(
        CriterionVerdict::new("nehari_harmonic", epsilon - est.value, est.argmax_point)
            .with("epsilon", epsilon)
            .with("r_max", cfg.r_max),
    )
}

/// `inf Re(1 + z h''/h') >= 0` on the grid; the margin is the attained infimum.
pub fn convexity_check(h: &AnalyticMap, cfg: &SupConfig) -> Result<CriterionVerdict> {
    let est = sup_weighted(&Functional::ConvexityDeficit(h), cfg)?;
    Ok(CriterionVerdict::new("convexity", -est.value, est.argmax_point).with("r_max", cfg.r_max))
}

/// `‖ω‖_∞ < 1/c` for a `c`-linearly connected analytic part.
pub fn linearly_connected_dilatation(
    f: &HarmonicMap,
    c: f64,
    cfg: &SupConfig,
) -> Result<CriterionVerdict> {
    if !(c >= 1.0) {
        return Err(Error::parameter(
            "c",
            c,
            "linear connectivity constant must be >= 1",
        ));
    }
    let est = sup_weighted(&Functional::OmegaModulus(f.dilatation()), cfg)?;
    Ok(CriterionVerdict::new(
        "linearly_connected_dilatation",
        1.0 / c - est.value,
        est.argmax_point,
    )
    .with("c", c)
    .with("omega_inf", est.value)
    .with("r_max", cfg.r_max))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConnectivityEstimate {
    pub c_hat: f64,
    pub pairs_sampled: usize,
    pub worst_pair: (DiskPoint, DiskPoint),
    /// Image-plane polyline of the worst pair's shortest path.
    pub path: Vec<[f64; 2]>,
    pub method: &'static str,
    /// Only `|z| <= r_sample` was meshed; nothing is claimed beyond it.
    pub r_sample: f64,
    pub mesh: usize,
}

/// Lattice offsets of the 16-neighbourhood (half of them; edges are undirected).
const OFFSETS: [(i64, i64); 8] = [
    (1, 0),
    (0, 1),
    (1, 1),
    (1, -1),
    (1, 2),
    (2, 1),
    (2, -1),
    (1, -2),
];

struct ImageGraph {
    points: Vec<DiskPoint>,
    images: Vec<Complex64>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

fn build_graph(h: &AnalyticMap, r_sample: f64, mesh: usize) -> Result<ImageGraph> {
    let n = mesh as i64;
    let spacing = 2.0 * r_sample / mesh as f64;
    let mut index = vec![usize::MAX; ((n + 1) * (n + 1)) as usize];
    let mut points = Vec::new();
    let mut images = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            let z = Complex64::new(
                -r_sample + i as f64 * spacing,
                -r_sample + j as f64 * spacing,
            );
            if z.norm() <= r_sample {
                let p = DiskPoint::new(z)?;
                index[(i * (n + 1) + j) as usize] = points.len();
                images.push(h.eval(z).map_err(|e| e.at(z))?);
                points.push(p);
            }
        }
    }
    let mut adjacency = vec![Vec::new(); points.len()];
    for i in 0..=n {
        for j in 0..=n {
            let u = index[(i * (n + 1) + j) as usize];
            if u == usize::MAX {
                continue;
            }
            for (di, dj) in OFFSETS {
                let (a, b) = (i + di, j + dj);
                if a < 0 || b < 0 || a > n || b > n {
                    continue;
                }
                let v = index[(a * (n + 1) + b) as usize];
                if v == usize::MAX {
                    continue;
                }
                let w = (images[u] - images[v]).norm();
                adjacency[u].push((v, w));
                adjacency[v].push((u, w));
            }
        }
    }
    Ok(ImageGraph {
        points,
        images,
        adjacency,
    })
}

#[derive(PartialEq)]
struct Frontier(f64, usize);

impl Eq for Frontier {}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frontier {
    // min-heap on distance, then index
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .total_cmp(&self.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

/// Dijkstra from `source` to `target`; returns the length and the node path.
fn shortest_path(graph: &ImageGraph, source: usize, target: usize) -> Option<(f64, Vec<usize>)> {
    let n = graph.points.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut prev = vec![usize::MAX; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Frontier(0.0, source));
    while let Some(Frontier(d, u)) = heap.pop() {
        if u == target {
            break;
        }
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &graph.adjacency[u] {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                prev[v] = u;
                heap.push(Frontier(nd, v));
            }
        }
    }
    if !dist[target].is_finite() {
        return None;
    }
    let mut path = vec![target];
    let mut cur = target;
    while cur != source {
        cur = prev[cur];
        path.push(cur);
    }
    path.reverse();
    Some((dist[target], path))
}

/// Estimates the linear connectivity constant of `h(|z| <= r_sample)` by
/// shortest paths on the image of a lattice mesh. Mesh paths are longer than
/// the best curves, so `c_hat` errs upward.
pub fn linear_connectivity_estimate(
    h: &AnalyticMap,
    r_sample: f64,
    pair_count: usize,
    mesh: usize,
    seed: u64,
) -> Result<ConnectivityEstimate> {
    if !(r_sample > 0.0 && r_sample < 1.0) {
        return Err(Error::parameter("r_sample", r_sample, "must lie in (0, 1)"));
    }
    if mesh < 4 {
        return Err(Error::parameter("mesh", mesh as f64, "must be at least 4"));
    }
    if pair_count == 0 {
        return Err(Error::parameter("pair_count", 0.0, "must be at least 1"));
    }
    let graph = build_graph(h, r_sample, mesh)?;
    let n = graph.points.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c_hat = 1.0;
    let mut worst: Option<(usize, usize, Vec<usize>)> = None;
    let mut sampled = 0;
    while sampled < pair_count {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let chord = (graph.images[a] - graph.images[b]).norm();
        if a == b || chord == 0.0 {
            continue;
        }
        sampled += 1;
        let (length, path) = shortest_path(&graph, a, b)
            .ok_or_else(|| Error::Internal("mesh graph is disconnected".into()))?;
        let ratio = length / chord;
        if worst.is_none() || ratio > c_hat {
            c_hat = ratio.max(c_hat);
            worst = Some((a, b, path));
        }
    }
    let (a, b, path) = worst.ok_or_else(|| Error::Internal("no pairs sampled".into()))?;
    Ok(ConnectivityEstimate {
        c_hat,
        pairs_sampled: sampled,
        worst_pair: (graph.points[a], graph.points[b]),
        path: path
            .iter()
            .map(|&i| [graph.images[i].re, graph.images[i].im])
            .collect(),
        method: "grid-graph shortest path",
        r_sample,
        mesh,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::{from_h_and_omega, harmonic_mobius};
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn cfg() -> SupConfig {
        SupConfig {
            grid: (32, 128),
            ..SupConfig::default()
        }
    }

    /// max over r in [0, r_max] of f(r), by dense 1-d sampling
    fn oracle_1d(r_max: f64, f: impl Fn(f64) -> f64) -> f64 {
        (0..=200_000)
            .map(|i| f(r_max * i as f64 / 200_000.0))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn becker_analytic_examples() {
        let id = becker_analytic(&AnalyticMap::Identity, BeckerVariant::Plain, &cfg()).unwrap();
        assert!(id.holds);
        assert_eq!(id.margin, 1.0);
        let exp = AnalyticMap::exponential(c(1.0)).unwrap();
        let v = becker_analytic(&exp, BeckerVariant::Plain, &cfg()).unwrap();
        assert!(v.holds);
        assert_abs_diff_eq!(v.margin, 0.0, epsilon = 1e-9);
        let hp = becker_analytic(&AnalyticMap::HalfPlane, BeckerVariant::Plain, &cfg()).unwrap();
        assert!(!hp.holds);
        let oracle = oracle_1d(0.999, |r| 2.0 * (1.0 + r));
        assert_abs_diff_eq!(hp.margin, 1.0 - oracle, epsilon = 1e-9);
        assert!((hp.margin + 3.0).abs() < 0.01);
    }

    #[test]
    fn becker_harmonic_examples() {
        let f = HarmonicMap::analytic(AnalyticMap::Identity).unwrap();
        let v = becker_harmonic(&f, &cfg()).unwrap();
        assert!(v.holds && v.margin == 1.0);

        let f = from_h_and_omega(
            AnalyticMap::Identity,
            AnalyticMap::Identity.scaled(c(0.3)),
            40,
        )
        .unwrap();
        let v = becker_harmonic(&f, &cfg()).unwrap();
        let oracle = oracle_1d(0.999, |r| {
            (1.0 - r * r) * (0.09 * r * r + 0.3 * r) / (1.0 - 0.09 * r * r)
        });
        assert!(v.holds);
        assert_abs_diff_eq!(v.margin, 1.0 - oracle, epsilon = 1e-8);

        let f = from_h_and_omega(
            AnalyticMap::HalfPlane,
            AnalyticMap::Identity.scaled(c(0.1)),
            40,
        )
        .unwrap();
        assert!(!becker_harmonic(&f, &cfg()).unwrap().holds);
    }

    #[test]
    fn becker_harmonic_agrees_with_classical_on_analytic_maps() {
        for m in [
            AnalyticMap::Koebe,
            AnalyticMap::HalfPlane,
            AnalyticMap::exponential(c(1.0)).unwrap(),
        ] {
            let f = HarmonicMap::analytic(m.clone()).unwrap();
            let a = becker_harmonic(&f, &cfg()).unwrap();
            let b = becker_analytic(&m, BeckerVariant::Classical, &cfg()).unwrap();
            assert!((a.margin - b.margin).abs() <= 1e-12);
        }
    }

    #[test]
    fn nehari_analytic_examples() {
        let mob = AnalyticMap::mobius(c(1.0), c(-0.2), c(-0.2), c(1.0)).unwrap();
        let v = nehari_analytic(&mob, 0.4, &cfg()).unwrap();
        assert!(v.holds);
        assert_abs_diff_eq!(v.margin, 0.8, epsilon = 1e-12);
        let v = nehari_analytic(&AnalyticMap::LogStrip, 1.0, &cfg()).unwrap();
        assert!(v.holds);
        assert_abs_diff_eq!(v.margin, 0.0, epsilon = 1e-6);
        let v = nehari_analytic(&AnalyticMap::Koebe, 1.0, &cfg()).unwrap();
        assert!(!v.holds);
        assert_abs_diff_eq!(v.margin, -4.0, epsilon = 1e-6);
        assert!(nehari_analytic(&mob, 1.5, &cfg()).is_err());
    }

    #[test]
    fn nehari_harmonic_examples() {
        let f = harmonic_mobius(AnalyticMap::HalfPlane, Complex64::new(0.1, 0.4)).unwrap();
        let v = nehari_harmonic(&f, 0.05, &cfg()).unwrap();
        assert!(v.holds);
        assert!((v.margin - 0.05).abs() < 1e-9);
        let f = HarmonicMap::analytic(AnalyticMap::LogStrip).unwrap();
        let a = nehari_harmonic(&f, 2.0, &cfg()).unwrap();
        let b = nehari_analytic(&AnalyticMap::LogStrip, 1.0, &cfg()).unwrap();
        assert_eq!(a.margin, b.margin);
        assert!(nehari_harmonic(&f, 0.0, &cfg()).is_err());
    }

    #[test]
    fn convexity_examples() {
        let v = convexity_check(&AnalyticMap::Identity, &cfg()).unwrap();
        assert!(v.holds && v.margin == 1.0);
        let v = convexity_check(&AnalyticMap::HalfPlane, &cfg()).unwrap();
        // Re((1+z)/(1-z)) on |z| = 0.999 has minimum (1 - 0.999)/(1 + 0.999)
        assert!(v.holds);
        assert_abs_diff_eq!(v.margin, 0.001 / 1.999, epsilon = 1e-9);
        let v = convexity_check(&AnalyticMap::Koebe, &cfg()).unwrap();
        assert!(!v.holds);
        assert!(v.witness.value().re < 0.0);
    }

    #[test]
    fn linearly_connected_examples() {
        let f = from_h_and_omega(
            AnalyticMap::HalfPlane,
            AnalyticMap::Identity.scaled(c(0.5)),
            40,
        )
        .unwrap();
        let v = linearly_connected_dilatation(&f, 1.0, &cfg()).unwrap();
        assert!(v.holds);
        assert_abs_diff_eq!(v.margin, 1.0 - 0.5 * 0.999, epsilon = 1e-12);
        let f = HarmonicMap::analytic(AnalyticMap::Koebe).unwrap();
        let v = linearly_connected_dilatation(&f, 3.0, &cfg()).unwrap();
        assert!(v.holds);
        assert_abs_diff_eq!(v.margin, 1.0 / 3.0, epsilon = 1e-15);
        let f = from_h_and_omega(
            AnalyticMap::Identity,
            AnalyticMap::Identity.scaled(c(0.6)),
            40,
        )
        .unwrap();
        let v = linearly_connected_dilatation(&f, 2.0, &cfg()).unwrap();
        assert!(!v.holds);
        assert_abs_diff_eq!(v.margin, 0.5 - 0.6 * 0.999, epsilon = 1e-12);
        assert!(linearly_connected_dilatation(&f, 0.5, &cfg()).is_err());
    }

    #[test]
    fn connectivity_of_convex_images() {
        let id = linear_connectivity_estimate(&AnalyticMap::Identity, 0.9, 60, 40, 1).unwrap();
        assert!(id.c_hat >= 1.0 && id.c_hat <= 1.05, "{}", id.c_hat);
        let coarse = linear_connectivity_estimate(&AnalyticMap::HalfPlane, 0.8, 60, 16, 2).unwrap();
        let fine = linear_connectivity_estimate(&AnalyticMap::HalfPlane, 0.8, 60, 64, 2).unwrap();
        assert!(fine.c_hat <= 1.05, "{}", fine.c_hat);
        assert!(fine.c_hat <= coarse.c_hat + 0.02);
        assert_eq!(fine.method, "grid-graph shortest path");
        assert_eq!(fine.r_sample, 0.8);
        let first = fine.path.first().unwrap();
        let a = AnalyticMap::HalfPlane
            .eval(fine.worst_pair.0.value())
            .unwrap();
        assert_eq!(*first, [a.re, a.im]);
    }

    #[test]
    fn connectivity_is_deterministic() {
        let a = linear_connectivity_estimate(&AnalyticMap::Koebe, 0.9, 30, 30, 9).unwrap();
        let b = linear_connectivity_estimate(&AnalyticMap::Koebe, 0.9, 30, 30, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn connectivity_rejects_bad_parameters() {
        assert!(linear_connectivity_estimate(&AnalyticMap::Identity, 1.0, 5, 10, 0).is_err());
        assert!(linear_connectivity_estimate(&AnalyticMap::Identity, 0.5, 0, 10, 0).is_err());
        assert!(linear_connectivity_estimate(&AnalyticMap::Identity, 0.5, 5, 2, 0).is_err());
    }
}
