//! Spherical k-means with k-means++ seeding, and the MSCD elbow estimate of k.
//!
//! Points are L2-normalized, assigned to the centroid of highest cosine
//! similarity, and centroids are normalized means. Restarts are ranked by
//! `Σ d(x, c)²` with `d(x, y) = (1 - cos(x, y)) / 2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::types::{ClusteringResult, EmbeddingVector};

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansParams {
    /// Number of clusters; `None` means estimate it with [`estimate_k_elbow`].
    pub k: Option<usize>,
    pub max_iters: usize,
    pub tol: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for KMeansParams {
    fn default() -> Self {
        Self {
            k: None,
            max_iters: 300,
            tol: 1e-6,
            restarts: 10,
            seed: 0,
        }
    }
}

/// Best run across restarts.
#[derive(Debug, Clone)]
pub struct KMeansFit {
    pub result: ClusteringResult,
    /// Unit-norm centroids, indexed by the ids in `result`.
    pub centroids: Vec<Vec<f64>>,
    /// `Σ d(x_i, c_{a(i)})²`.
    pub squared_distance_sum: f64,
    /// `Σ d(x_i, c_{a(i)})` after the initial assignment and after every
    /// Lloyd iteration of the winning restart.
    pub trace: Vec<f64>,
    pub iterations: usize,
}

impl KMeansFit {
    /// Mean squared cosine distance to the assigned centroid.
    pub fn mscd(&self) -> f64 {
        self.squared_distance_sum / self.result.len() as f64
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    ((1.0 - dot(a, b).clamp(-1.0, 1.0)) / 2.0).max(0.0)
}

pub(crate) fn unit_rows(embeddings: &[EmbeddingVector]) -> Result<Vec<Vec<f64>>> {
    let dim = embeddings.first().map_or(0, EmbeddingVector::dim);
    embeddings
        .iter()
        .enumerate()
        .map(|(i, e)| {
            if e.dim() != dim {
                return Err(Error::invalid(format!(
                    "embedding {i} has dimension {}, expected {dim}",
                    e.dim()
                )));
            }
            e.normalized()
                .map(EmbeddingVector::into_inner)
                .map_err(|_| Error::invalid(format!("embedding {i} is the zero vector")))
        })
        .collect()
}

fn seed_plus_plus(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut centroids = vec![points[rng.random_range(0..n)].clone()];
    let mut nearest: Vec<f64> = points.iter().map(|x| distance(x, &centroids[0])).collect();
    while centroids.len() < k {
        let weights: Vec<f64> = nearest.iter().map(|d| d * d).collect();
        let total: f64 = weights.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = n - 1;
            for (i, w) in weights.iter().enumerate() {
                if *w > 0.0 && target < *w {
                    chosen = i;
                    break;
                }
                target -= w;
            }
            // guard against rounding leaving a zero-weight tail pick
            if weights[chosen] == 0.0 {
                chosen = weights.iter().rposition(|w| *w > 0.0).unwrap_or(chosen);
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        let c = points[pick].clone();
        for (d, x) in nearest.iter_mut().zip(points) {
            *d = d.min(distance(x, &c));
        }
        centroids.push(c);
    }
    centroids
}

fn assign(points: &[Vec<f64>], centroids: &[Vec<f64>]) -> Vec<usize> {
    points
        .iter()
        .map(|x| {
            let mut best = 0;
            let mut best_sim = f64::NEG_INFINITY;
            for (j, c) in centroids.iter().enumerate() {
                let s = dot(x, c);
                if s > best_sim {
                    best_sim = s;
                    best = j;
                }
            }
            best
        })
        .collect()
}

/// Moves the point farthest from its centroid (taken from a cluster with at
/// least two members) into each empty cluster.
fn repair_empty(points: &[Vec<f64>], centroids: &mut [Vec<f64>], labels: &mut [usize]) {
    let k = centroids.len();
    loop {
        let mut sizes = vec![0usize; k];
        for &l in labels.iter() {
            sizes[l] += 1;
        }
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return;
        };
        let mut far = None;
        let mut far_d = f64::NEG_INFINITY;
        for (i, x) in points.iter().enumerate() {
            if sizes[labels[i]] < 2 {
                continue;
            }
            let d = distance(x, &centroids[labels[i]]);
            if d > far_d {
                far_d = d;
                far = Some(i);
            }
        }
        let Some(i) = far else { return };
        labels[i] = empty;
        centroids[empty] = points[i].clone();
    }
}

fn update(points: &[Vec<f64>], labels: &[usize], centroids: &mut [Vec<f64>]) {
    let dim = points[0].len();
    let mut sums = vec![vec![0.0; dim]; centroids.len()];
    for (x, &l) in points.iter().zip(labels) {
        for (s, v) in sums[l].iter_mut().zip(x) {
            *s += v;
        }
    }
    for (c, s) in centroids.iter_mut().zip(sums) {
        let norm = dot(&s, &s).sqrt();
        // antipodal members cancel; any centroid is then equally good
        if norm > 1e-12 {
            *c = s.into_iter().map(|v| v / norm).collect();
        }
    }
}

fn objective(points: &[Vec<f64>], centroids: &[Vec<f64>], labels: &[usize]) -> f64 {
    points
        .iter()
        .zip(labels)
        .map(|(x, &l)| distance(x, &centroids[l]))
        .sum()
}

fn squared_objective(points: &[Vec<f64>], centroids: &[Vec<f64>], labels: &[usize]) -> f64 {
    points
        .iter()
        .zip(labels)
        .map(|(x, &l)| distance(x, &centroids[l]).powi(2))
        .sum()
}

struct Run {
    labels: Vec<usize>,
    centroids: Vec<Vec<f64>>,
    trace: Vec<f64>,
    iterations: usize,
}

fn lloyd(points: &[Vec<f64>], k: usize, params: &KMeansParams, rng: &mut ChaCha8Rng) -> Run {
    let mut centroids = seed_plus_plus(points, k, rng);
    let mut labels = assign(points, &centroids);
    repair_empty(points, &mut centroids, &mut labels);
    let mut trace = vec![objective(points, &centroids, &labels)];
    let mut iterations = 0;
    while iterations < params.max_iters {
        iterations += 1;
        update(points, &labels, &mut centroids);
        let mut next = assign(points, &centroids);
        repair_empty(points, &mut centroids, &mut next);
        let obj = objective(points, &centroids, &next);
        let prev = *trace.last().unwrap();
        trace.push(obj);
        let changed = next != labels;
        labels = next;
        if !changed || prev - obj < params.tol {
            break;
        }
    }
    update(points, &labels, &mut centroids);
    Run {
        labels,
        centroids,
        trace,
        iterations,
    }
}

/// Spherical k-means. `params.k` must be set.
pub fn kmeans_fit(embeddings: &[EmbeddingVector], params: &KMeansParams) -> Result<KMeansFit> {
    let k = params
        .k
        .ok_or_else(|| Error::invalid("kmeans needs k; use estimate_k_elbow"))?;
    let n = embeddings.len();
    if k == 0 {
        return Err(Error::invalid("k must be >= 1"));
    }
    if k > n {
        return Err(Error::invalid(format!("k = {k} exceeds {n} points")));
    }
    if params.restarts == 0 {
        return Err(Error::invalid("restarts must be >= 1"));
    }
    let points = unit_rows(embeddings)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut best: Option<(f64, Run)> = None;
    for _ in 0..params.restarts {
        let run = lloyd(&points, k, params, &mut rng);
        let score = squared_objective(&points, &run.centroids, &run.labels);
        if best.as_ref().is_none_or(|(s, _)| score < *s) {
            best = Some((score, run));
        }
    }
    let (score, run) = best.expect("restarts >= 1");

    // canonical ids by first appearance; centroids follow
    let result = ClusteringResult::from_labels(&run.labels);
    let mut centroids = vec![Vec::new(); k];
    for (&raw, &dense) in run.labels.iter().zip(result.labels()) {
        if centroids[dense].is_empty() {
            centroids[dense] = run.centroids[raw].clone();
        }
    }
    debug_assert_eq!(result.k(), k);
    Ok(KMeansFit {
        result,
        centroids,
        squared_distance_sum: score,
        trace: run.trace,
        iterations: run.iterations,
    })
}

pub fn kmeans(embeddings: &[EmbeddingVector], params: &KMeansParams) -> Result<ClusteringResult> {
    kmeans_fit(embeddings, params).map(|f| f.result)
}

/// `MSCD(k)` for `k = 1..=max_clusters`, all runs sharing `params.seed`.
pub fn mscd_curve(
    embeddings: &[EmbeddingVector],
    max_clusters: usize,
    params: &KMeansParams,
) -> Result<Vec<f64>> {
    if max_clusters > embeddings.len() {
        return Err(Error::invalid(format!(
            "max_clusters = {max_clusters} exceeds {} points",
            embeddings.len()
        )));
    }
    (1..=max_clusters)
        .map(|k| {
            let p = KMeansParams {
                k: Some(k),
                ..params.clone()
            };
            kmeans_fit(embeddings, &p).map(|f| f.mscd())
        })
        .collect()
}

/// Elbow estimate: argmax over `k ∈ [max(2, min_clusters), max_clusters]` of
/// the backward difference `MSCD(k-1) - MSCD(k)`; ties go to the smaller k.
/// Returns 1 when `max_clusters < 2`.
pub fn estimate_k_elbow(
    embeddings: &[EmbeddingVector],
    min_clusters: usize,
    max_clusters: usize,
    params: &KMeansParams,
) -> Result<usize> {
    if max_clusters == 0 {
        return Err(Error::invalid("max_clusters must be >= 1"));
    }
    let curve = mscd_curve(embeddings, max_clusters, params)?;
    let lo = min_clusters.max(2);
    if max_clusters < 2 {
        return Ok(1);
    }
    if lo > max_clusters {
        return Err(Error::invalid(format!(
            "min_clusters = {min_clusters} exceeds max_clusters = {max_clusters}"
        )));
    }
    let mut best_k = lo;
    let mut best_drop = f64::NEG_INFINITY;
    for k in lo..=max_clusters {
        let drop = curve[k - 2] - curve[k - 1];
        if drop > best_drop {
            best_drop = drop;
            best_k = k;
        }
    }
    Ok(best_k)
}
