//! Speaker diarization downstream of a neural speaker embedder.
//!
//! Window-level embeddings are aggregated into short segments, clustered
//! (naive online, spherical k-means with an elbow estimate, or spectral
//! clustering over a refined cosine affinity) and scored with the diarization
//! error rate under the usual collar, overlap and UEM conventions.
//!
//! ```
//! use diarkit::pipeline::{diarize, DiarizeConfig};
//! use diarkit::synth::{generate, SynthScenario};
//!
//! let s = generate(&SynthScenario { n_speakers: 3, duration: 60.0, ..Default::default() }).unwrap();
//! let d = diarize("synth", &s.windows, Some(&s.regions), &DiarizeConfig::default()).unwrap();
//! assert_eq!(d.clustering.k(), 3);
//! ```

pub mod aggregation;
pub mod cli;
pub mod clustering;
pub mod error;
pub mod io;
pub mod metrics;
pub mod numerics;
pub mod pipeline;
pub mod synth;
pub mod types;

pub use error::{Error, Result};
pub use types::{
    AffinityMatrix, Annotation, ClusteringResult, EmbeddingVector, Segment, SegmentEmbedding,
    TimeInterval,
};
