//! Online clustering: one embedding in, one label out, no lookahead.

use crate::error::{Error, Result};
use crate::types::{ClusteringResult, EmbeddingVector};

/// Contract for streaming clusterers. A label, once returned, is final, and
/// depends only on the embeddings pushed so far.
pub trait OnlineClusterer {
    fn push(&mut self, embedding: &EmbeddingVector) -> Result<usize>;

    fn num_clusters(&self) -> usize;
}

/// Feeds `embeddings` in order and collects the emitted labels.
pub fn cluster_stream<C: OnlineClusterer + ?Sized>(
    clusterer: &mut C,
    embeddings: &[EmbeddingVector],
) -> Result<ClusteringResult> {
    let labels = embeddings
        .iter()
        .map(|e| clusterer.push(e))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClusteringResult::from_labels(&labels))
}

/// Threshold clusterer over centroids of L2-normalized members.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveOnlineClusterer {
    threshold: f64,
    sums: Vec<Vec<f64>>,
    counts: Vec<usize>,
}

impl NaiveOnlineClusterer {
    pub fn new(threshold: f64) -> Result<Self> {
        if !(threshold > -1.0 && threshold < 1.0) {
            return Err(Error::invalid(format!(
                "online threshold {threshold} outside (-1, 1)"
            )));
        }
        Ok(Self {
            threshold,
            sums: Vec::new(),
            counts: Vec::new(),
        })
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Mean of the normalized members of cluster `label`.
    pub fn centroid(&self, label: usize) -> Option<Vec<f64>> {
        let c = *self.counts.get(label)? as f64;
        Some(self.sums[label].iter().map(|v| v / c).collect())
    }

    fn step(&mut self, e: &EmbeddingVector) -> Result<usize> {
        let unit = e
            .normalized()
            .map_err(|_| Error::invalid("online clusterer got a zero vector"))?
            .into_inner();
        if let Some(first) = self.sums.first() {
            if first.len() != unit.len() {
                return Err(Error::invalid(format!(
                    "embedding dimension {} does not match {}",
                    unit.len(),
                    first.len()
                )));
            }
        }
        let mut best: Option<(usize, f64)> = None;
        for (j, s) in self.sums.iter().enumerate() {
            let norm = s.iter().map(|v| v * v).sum::<f64>().sqrt();
            // a zero sum (cancelled members) has no direction
            let sim = if norm > 0.0 {
                s.iter().zip(&unit).map(|(a, b)| a * b).sum::<f64>() / norm
            } else {
                f64::NEG_INFINITY
            };
            if best.is_none_or(|(_, b)| sim > b) {
                best = Some((j, sim));
            }
        }
        match best {
            Some((j, sim)) if sim >= self.threshold => {
                for (s, v) in self.sums[j].iter_mut().zip(&unit) {
                    *s += v;
                }
                self.counts[j] += 1;
                Ok(j)
            }
            _ => {
                self.sums.push(unit);
                self.counts.push(1);
                Ok(self.sums.len() - 1)
            }
        }
    }
}

impl OnlineClusterer for NaiveOnlineClusterer {
    fn push(&mut self, embedding: &EmbeddingVector) -> Result<usize> {
        self.step(embedding)
    }

    fn num_clusters(&self) -> usize {
        self.sums.len()
    }
}

/// Functional form of one naive online step.
pub fn naive_online_step(
    mut state: NaiveOnlineClusterer,
    e: &EmbeddingVector,
) -> Result<(NaiveOnlineClusterer, usize)> {
    let label = state.step(e)?;
    Ok((state, label))
}
