//! End-to-end diarization of one recording: windows → segments → clusters →
//! annotation.

use std::fmt;
use std::str::FromStr;

use crate::aggregation::{
    aggregate, regions_from_windows, segmentize, SpeechRegion, WindowEmbedding,
    DEFAULT_MAX_SEGMENT_LEN,
};
use crate::clustering::{
    cluster_stream, estimate_k_elbow, kmeans, spectral_cluster, spectral_cluster_traced,
    KMeansParams, NaiveOnlineClusterer, SpectralParams,
};
use crate::error::{Error, Result};
use crate::numerics::Matrix;
use crate::types::{Annotation, ClusteringResult, EmbeddingVector, TimeInterval};

pub const DEFAULT_ONLINE_THRESHOLD: f64 = 0.5;

/// Named affinity snapshots, raw affinity first.
pub type StageSnapshots = Vec<(String, Matrix)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Spectral,
    KMeans,
    Naive,
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(Self::Spectral),
            "kmeans" => Ok(Self::KMeans),
            "naive" => Ok(Self::Naive),
            other => Err(Error::invalid(format!("unknown algorithm {other:?}"))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Spectral => "spectral",
            Self::KMeans => "kmeans",
            Self::Naive => "naive",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiarizeConfig {
    pub algorithm: Algorithm,
    pub max_segment_len: f64,
    /// Also bounds the k-means elbow search through `min_clusters`/`max_clusters`.
    pub spectral: SpectralParams,
    pub kmeans: KMeansParams,
    pub online_threshold: f64,
    /// Fixes the number of speakers for the offline algorithms.
    pub num_speakers: Option<usize>,
    /// Keep the affinity snapshots (spectral only).
    pub trace_stages: bool,
}

impl Default for DiarizeConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Spectral,
            max_segment_len: DEFAULT_MAX_SEGMENT_LEN,
            spectral: SpectralParams::default(),
            kmeans: KMeansParams::default(),
            online_threshold: DEFAULT_ONLINE_THRESHOLD,
            num_speakers: None,
            trace_stages: false,
        }
    }
}

impl DiarizeConfig {
    pub fn with_algorithm(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            ..Self::default()
        }
    }

    /// Sets the seed of both offline algorithms.
    pub fn seeded(mut self, seed: u64) -> Self {
        self.spectral.seed = seed;
        self.kmeans.seed = seed;
        self
    }
}

#[derive(Debug, Clone)]
pub struct Diarization {
    pub annotation: Annotation,
    pub segments: Vec<TimeInterval>,
    pub clustering: ClusteringResult,
    /// Segments that received no window and were left unlabeled.
    pub dropped_segments: usize,
    /// Named affinity snapshots, when requested for spectral.
    pub stages: Option<StageSnapshots>,
}

/// Clusters segment embeddings with the configured algorithm.
pub fn cluster_segments(
    embeddings: &[EmbeddingVector],
    config: &DiarizeConfig,
) -> Result<(ClusteringResult, Option<StageSnapshots>)> {
    let n = embeddings.len();
    match config.algorithm {
        Algorithm::Spectral => {
            let mut params = config.spectral.clone();
            if let Some(k) = config.num_speakers {
                params.min_clusters = k;
                params.max_clusters = k;
            }
            let out = if config.trace_stages {
                spectral_cluster_traced(embeddings, &params)?
            } else {
                spectral_cluster(embeddings, &params)?
            };
            Ok((out.result, out.stages))
        }
        Algorithm::KMeans => {
            let k = match config.num_speakers {
                Some(k) => k,
                None => {
                    let max = config.spectral.max_clusters.min(n);
                    let min = config.spectral.min_clusters.min(max);
                    estimate_k_elbow(embeddings, min, max, &config.kmeans)?
                }
            };
            let params = KMeansParams {
                k: Some(k),
                ..config.kmeans.clone()
            };
            Ok((kmeans(embeddings, &params)?, None))
        }
        Algorithm::Naive => {
            let mut c = NaiveOnlineClusterer::new(config.online_threshold)?;
            Ok((cluster_stream(&mut c, embeddings)?, None))
        }
    }
}

/// Segmentizes `regions` (the union of window extents when `None`),
/// aggregates windows per segment, clusters, and labels segments `spk0..`.
pub fn diarize(
    recording_id: &str,
    windows: &[WindowEmbedding],
    regions: Option<&[SpeechRegion]>,
    config: &DiarizeConfig,
) -> Result<Diarization> {
    if windows.is_empty() {
        return Err(Error::invalid("no window embeddings"));
    }
    let derived;
    let regions = match regions {
        Some(r) => r,
        None => {
            derived = regions_from_windows(windows);
            &derived
        }
    };
    let pieces = segmentize(regions, config.max_segment_len)?;
    let agg = aggregate(windows, &pieces)?;
    let segments: Vec<TimeInterval> = agg.segments.iter().map(|s| s.interval).collect();
    let embeddings: Vec<EmbeddingVector> = agg.segments.into_iter().map(|s| s.embedding).collect();
    let (clustering, stages) = cluster_segments(&embeddings, config)?;
    let annotation = Annotation::from_cluster_labels(recording_id, &segments, clustering.labels())?;
    Ok(Diarization {
        annotation,
        segments,
        clustering,
        dropped_segments: agg.dropped,
        stages,
    })
}
