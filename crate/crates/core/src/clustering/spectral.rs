use crate::error::{Error, Result};
use crate::numerics::{eigh, EigenDecomposition, Matrix};
use crate::types::{AffinityMatrix, ClusteringResult, EmbeddingVector};

use super::affinity::build_affinity;
use super::kmeans::{kmeans, KMeansParams};
use super::refine::{refine_chain, refine_chain_with_stages, Stage};

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralParams {
    /// Blur standard deviation in matrix index units.
    pub sigma: f64,
    /// Row-wise threshold percentile, in (0, 100).
    pub p_percentile: f64,
    /// Factor applied to sub-percentile entries; 0 is a hard threshold.
    pub soft_multiplier: f64,
    pub min_clusters: usize,
    pub max_clusters: usize,
    /// Floor for eigen-gap denominators.
    pub eig_floor: f64,
    pub seed: u64,
}

impl Default for SpectralParams {
    fn default() -> Self {
        Self {
            sigma: 1.0,
            p_percentile: 95.0,
            soft_multiplier: 0.01,
            min_clusters: 2,
            max_clusters: 8,
            eig_floor: 1e-10,
            seed: 0,
        }
    }
}

/// Spectral clustering output with the intermediate quantities.
#[derive(Debug, Clone)]
pub struct SpectralOutput {
    pub result: ClusteringResult,
    /// Eigenvalues of the symmetrized refined affinity, descending.
    pub eigenvalues: Vec<f64>,
    pub k: usize,
    /// Raw affinity followed by the five refinement snapshots, when traced.
    pub stages: Option<Vec<(String, Matrix)>>,
}

/// `argmax_k values[k-1] / max(values[k], eig_floor)` over
/// `k ∈ [min_clusters, min(max_clusters, n-1)]`, ties to the smaller k.
pub fn estimate_k_eigengap(
    values: &[f64],
    min_clusters: usize,
    max_clusters: usize,
    eig_floor: f64,
) -> Result<usize> {
    let n = values.len();
    if n < 2 {
        return Err(Error::invalid("eigen-gap needs at least 2 eigenvalues"));
    }
    let lo = min_clusters.max(1);
    let hi = max_clusters.min(n - 1);
    if lo > hi {
        return Err(Error::invalid(format!(
            "empty eigen-gap search range [{lo}, {hi}]"
        )));
    }
    let mut best_k = lo;
    let mut best = f64::NEG_INFINITY;
    for k in lo..=hi {
        let ratio = values[k - 1] / values[k].max(eig_floor);
        if ratio > best {
            best = ratio;
            best_k = k;
        }
    }
    Ok(best_k)
}

/// Rows of the top-`k` eigenvector matrix, each L2-normalized; an all-zero
/// row becomes the first unit vector.
pub fn spectral_embed(decomp: &EigenDecomposition, k: usize) -> Result<Vec<EmbeddingVector>> {
    let n = decomp.n();
    if k == 0 || k > n {
        return Err(Error::invalid(format!(
            "spectral embedding k = {k} outside [1, {n}]"
        )));
    }
    (0..n)
        .map(|i| {
            let mut row: Vec<f64> = (0..k).map(|j| decomp.vectors[(i, j)]).collect();
            let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                row.iter_mut().for_each(|v| *v /= norm);
            } else {
                row[0] = 1.0;
            }
            EmbeddingVector::new(row)
        })
        .collect()
}

fn validate(params: &SpectralParams, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "spectral clustering needs at least 2 segments, got {n}"
        )));
    }
    if params.min_clusters == 0 {
        return Err(Error::invalid("min_clusters must be >= 1"));
    }
    if params.min_clusters > params.max_clusters {
        return Err(Error::invalid(format!(
            "min_clusters {} exceeds max_clusters {}",
            params.min_clusters, params.max_clusters
        )));
    }
    if params.min_clusters > n {
        return Err(Error::invalid(format!(
            "min_clusters {} exceeds {n} segments",
            params.min_clusters
        )));
    }
    Ok(())
}

fn finish(
    refined: &Matrix,
    params: &SpectralParams,
) -> Result<(ClusteringResult, Vec<f64>, usize)> {
    let n = refined.rows();
    let sym = Matrix::from_fn(n, n, |i, j| 0.5 * (refined[(i, j)] + refined[(j, i)]));
    let decomp = eigh(&sym)?;
    // when the admissible range is empty (e.g. n = min_clusters) k is forced
    let k = if params.min_clusters > params.max_clusters.min(n - 1) {
        params.min_clusters
    } else {
        estimate_k_eigengap(
            &decomp.values,
            params.min_clusters,
            params.max_clusters,
            params.eig_floor,
        )?
    };
    let embedded = spectral_embed(&decomp, k)?;
    let result = kmeans(
        &embedded,
        &KMeansParams {
            k: Some(k),
            seed: params.seed,
            ..KMeansParams::default()
        },
    )?;
    Ok((result, decomp.values, k))
}

/// Affinity → refinement → eigen-decomposition of `(M + Mᵀ)/2` → eigen-gap
/// k → spectral embedding → spherical k-means.
pub fn spectral_cluster(
    embeddings: &[EmbeddingVector],
    params: &SpectralParams,
) -> Result<SpectralOutput> {
    validate(params, embeddings.len())?;
    let affinity = build_affinity(embeddings)?;
    let refined = refine_chain(&affinity, params)?;
    let (result, eigenvalues, k) = finish(&refined, params)?;
    Ok(SpectralOutput {
        result,
        eigenvalues,
        k,
        stages: None,
    })
}

/// [`spectral_cluster`] that also keeps the affinity snapshots.
pub fn spectral_cluster_traced(
    embeddings: &[EmbeddingVector],
    params: &SpectralParams,
) -> Result<SpectralOutput> {
    validate(params, embeddings.len())?;
    let affinity = build_affinity(embeddings)?;
    spectral_from_affinity_traced(affinity, params)
}

fn spectral_from_affinity_traced(
    affinity: AffinityMatrix,
    params: &SpectralParams,
) -> Result<SpectralOutput> {
    let (refined, snapshots) = refine_chain_with_stages(&affinity, params)?;
    let (result, eigenvalues, k) = finish(&refined, params)?;
    let mut stages = vec![("affinity".to_string(), affinity.into_matrix())];
    stages.extend(
        snapshots
            .into_iter()
            .map(|(s, m): (Stage, Matrix)| (s.name().to_string(), m)),
    );
    Ok(SpectralOutput {
        result,
        eigenvalues,
        k,
        stages: Some(stages),
    })
}
