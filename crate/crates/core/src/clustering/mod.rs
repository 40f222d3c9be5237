//! Clustering of segment embeddings: naive online, spherical k-means with an
//! elbow estimate of k, and spectral clustering over a refined affinity.

mod affinity;
mod kmeans;
mod online;
mod refine;
mod spectral;

pub use affinity::build_affinity;
pub use kmeans::{estimate_k_elbow, kmeans, kmeans_fit, mscd_curve, KMeansFit, KMeansParams};
pub use online::{cluster_stream, naive_online_step, NaiveOnlineClusterer, OnlineClusterer};
pub use refine::{
    refine_chain, refine_chain_with_stages, refine_diffuse, refine_row_max_normalize,
    refine_symmetrize, refine_threshold, Stage,
};
pub use spectral::{
    estimate_k_eigengap, spectral_cluster, spectral_cluster_traced, spectral_embed, SpectralOutput,
    SpectralParams,
};
