//! Adaptive dynamic neuro-fuzzy (ADNF) stream clustering.
//!
//! The pipeline runs in four phases over `d`-dimensional feature vectors:
//!
//! 1. [`fcm`]: batch Fuzzy C-Means on an initial batch, each centroid
//!    wrapped into a [`MicroCluster`].
//! 2. [`stream`]: points arrive one at a time and are absorbed by the
//!    nearest covering micro-cluster with a dynamic learning rate, or seed a
//!    new one.
//! 3. [`adapt`]: per-cluster fuzziness is retuned from the fuzzy temporal
//!    index, the entropy change relative to displacement.
//! 4. [`topology`]: nearby clusters merge by density-weighted averaging and
//!    high-entropy clusters split via DBSCAN on their uncertain points.
//!
//! [`metrics`] provides hard assignment and silhouette scoring, and [`pca`]
//! the dimensionality reduction used ahead of clustering and for plotting.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod adapt;
pub mod cluster;
pub mod config;
pub mod dbscan;
pub mod error;
pub mod fcm;
pub mod geometry;
pub mod matrix;
pub mod metrics;
pub mod pca;
pub mod stream;
pub mod topology;

pub use adapt::{cluster_entropy, compute_fti, compute_ftis, tune_fuzziness, AdaptationReport, AdaptationRow};
pub use cluster::{HistoryEntry, MicroCluster, ModelState};
pub use config::AdnfConfig;
pub use dbscan::{dbscan, Label};
pub use error::{Error, Result};
pub use fcm::{fcm_centroids, fcm_memberships, fcm_objective, fit_fcm, fit_fcm_observed, init_micro_clusters, FuzzyPartition};
pub use geometry::{euclidean_distance, median, percentile_radius};
pub use matrix::{FeatureMatrix, Matrix};
pub use metrics::{hard_assign, silhouette};
pub use pca::{fit_pca, inverse_transform, transform, PcaModel};
pub use stream::{absorb, dynamic_learning_rate, process_stream, streaming_membership, AbsorptionReport};
pub use topology::{
    local_entropy, merge_clusters, merge_threshold, refine, split_clusters, split_threshold, MergeGroup,
    RefinementReport, SplitEvent,
};
