//! Entropy accounting, the fuzzy temporal index (FTI), and per-cluster
//! fuzziness retuning.
//!
//! The FTI of a cluster is its entropy change since the last adaptation pass
//! divided by `‖Δv‖ + ‖ΔP‖ + ε`, where `Δv` is the centroid displacement
//! since that pass, `ΔP` the displacement from the most recent absorption,
//! and `ε` the cluster's sensitivity radius. Fuzziness is then rescaled
//! around `m0` by each cluster's FTI relative to the median FTI.

use alloc::vec::Vec;

use crate::cluster::{entropy_term, MicroCluster, ModelState};
use crate::config::AdnfConfig;
use crate::error::{Error, Result};
use crate::geometry::{distance, median};

/// Per-cluster adaptation diagnostics.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AdaptationRow {
    pub entropy: f64,
    pub delta_entropy: f64,
    pub delta_v: f64,
    pub delta_p: f64,
    pub fti: f64,
    pub new_fuzziness: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AdaptationReport {
    pub rows: Vec<AdaptationRow>,
    pub median_fti: f64,
}

impl AdaptationReport {
    pub fn ftis(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.fti).collect()
    }
}

/// `H = −Σ u · ln(u + eps)` over the cluster history.
pub fn cluster_entropy(cluster: &MicroCluster, cfg: &AdnfConfig) -> f64 {
    cluster
        .history
        .iter()
        .map(|h| entropy_term(h.membership, cfg.numeric_eps))
        .sum()
}

fn fti_parts(cluster: &MicroCluster, cfg: &AdnfConfig) -> AdaptationRow {
    let entropy = cluster_entropy(cluster, cfg);
    let delta_entropy = entropy - cluster.prev_entropy;
    let delta_v = distance(&cluster.centroid, &cluster.anchor_centroid);
    let delta_p = distance(&cluster.centroid, &cluster.prev_centroid);
    let fti = delta_entropy / (delta_v + delta_p + cluster.radius);
    AdaptationRow { entropy, delta_entropy, delta_v, delta_p, fti, new_fuzziness: cluster.fuzziness }
}

/// Fuzzy temporal index of one cluster. Finite for any positive radius;
/// negative when entropy fell.
pub fn compute_fti(cluster: &MicroCluster, cfg: &AdnfConfig) -> f64 {
    fti_parts(cluster, cfg).fti
}

/// Current FTI of every cluster, without touching adaptation bookkeeping.
pub fn compute_ftis(state: &ModelState, cfg: &AdnfConfig) -> Vec<f64> {
    state.clusters.iter().map(|c| compute_fti(c, cfg)).collect()
}

/// Retunes every cluster's fuzziness from its FTI and closes the adaptation
/// pass (entropy and centroid anchors move to the current values).
///
/// With a non-positive median FTI all clusters fall back to `m0`.
pub fn tune_fuzziness(state: &mut ModelState, cfg: &AdnfConfig) -> Result<AdaptationReport> {
    if state.is_empty() {
        return Err(Error::EmptyModel);
    }
    let mut rows: Vec<AdaptationRow> = state.clusters.iter().map(|c| fti_parts(c, cfg)).collect();
    let ftis: Vec<f64> = rows.iter().map(|r| r.fti).collect();
    let median_fti = median(&ftis).ok_or(Error::EmptyModel)?;

    for (cluster, row) in state.clusters.iter_mut().zip(rows.iter_mut()) {
        let m = if median_fti <= cfg.numeric_eps {
            cfg.m0
        } else {
            let raw = 1.0 + (cfg.m0 - 1.0) * row.fti.max(0.0) / median_fti;
            raw.clamp(1.0 + cfg.numeric_eps, cfg.m_max)
        };
        cluster.fuzziness = m;
        cluster.entropy = row.entropy;
        cluster.prev_entropy = row.entropy;
        cluster.anchor_centroid.clone_from(&cluster.centroid);
        row.new_fuzziness = m;
    }
    Ok(AdaptationReport { rows, median_fti })
}
