//! Online absorption of streamed points into the micro-cluster set.
//!
//! A point is absorbed by the nearest cluster whose sensitivity radius
//! covers it. The centroid moves toward the point with weight
//! `λ_t · u^m` against the cluster's accumulated density, so heavy clusters
//! move slowly. Points outside every radius seed a new cluster.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::cluster::{HistoryEntry, MicroCluster, ModelState};
use crate::config::AdnfConfig;
use crate::error::{Error, Result};
use crate::fcm::membership_from_distances;
use crate::geometry::{distance, median};

/// Outcome of absorbing one point.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AbsorptionReport {
    pub matched_cluster: Option<usize>,
    pub membership_used: f64,
    pub learning_rate_used: f64,
    pub created_new: bool,
    pub step: u64,
}

fn check_point(x: &[f64], state: &ModelState) -> Result<()> {
    let d = state.dim().ok_or(Error::EmptyModel)?;
    if x.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: x.len() });
    }
    if let Some(col) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { row: 0, col });
    }
    Ok(())
}

/// Membership of `x` in cluster `target` relative to all current centroids,
/// using the target cluster's fuzziness for every term.
pub fn streaming_membership(x: &[f64], state: &ModelState, target: usize) -> Result<f64> {
    check_point(x, state)?;
    let cluster = state
        .clusters
        .get(target)
        .ok_or(Error::InvalidCluster { index: target, len: state.len() })?;
    let dists: Vec<f64> = state.clusters.iter().map(|c| distance(x, &c.centroid)).collect();
    Ok(membership_from_distances(&dists, target, cluster.fuzziness))
}

/// `λ_t = clamp(½(ΔD/D_max + ΔP/P_max), λ_min, 1)` from the cluster's most
/// recent change. A ratio whose normaliser has not yet exceeded
/// `numeric_eps` counts as zero.
pub fn dynamic_learning_rate(cluster: &MicroCluster, state: &ModelState, cfg: &AdnfConfig) -> f64 {
    let delta_d = (cluster.density - cluster.prev_density).abs();
    let delta_p = distance(&cluster.centroid, &cluster.prev_centroid);
    let ratio = |delta: f64, max: f64| if max > cfg.numeric_eps { delta / max } else { 0.0 };
    let raw = 0.5 * (ratio(delta_d, state.d_max) + ratio(delta_p, state.p_max));
    raw.max(cfg.lambda_min).min(1.0)
}

/// Index of the nearest cluster whose radius covers `x` (lowest index on ties).
fn nearest_candidate(x: &[f64], state: &ModelState) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, c) in state.clusters.iter().enumerate() {
        let d = distance(x, &c.centroid);
        if d <= c.radius && best.is_none_or(|(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    best
}

/// Applies the weighted centroid/density update to cluster `index` with an
/// explicit membership and learning rate, and refreshes the global maxima.
///
/// The centroid moves along `x − v` by `λu^m / (λu^m + D + eps)`, so it
/// stays on the segment between the old centroid and `x`.
pub(crate) fn apply_update(
    state: &mut ModelState,
    index: usize,
    x: &[f64],
    membership: f64,
    learning_rate: f64,
    cfg: &AdnfConfig,
) {
    let step = state.step + 1;
    let cluster = &mut state.clusters[index];
    let mass = libm::pow(membership, cluster.fuzziness);
    let weight = learning_rate * mass;
    let density = cluster.density;
    let denom = weight + density + cfg.numeric_eps;

    cluster.prev_centroid.clone_from(&cluster.centroid);
    cluster.prev_density = density;
    for (v, xv) in cluster.centroid.iter_mut().zip(x) {
        *v += weight * (xv - *v) / denom;
    }
    cluster.density += mass;
    cluster.fuzzy_count += mass;
    cluster.push_history(HistoryEntry::new(x.to_vec(), membership), cfg.history_cap, cfg.numeric_eps);
    cluster.last_update_step = step;

    let delta_d = cluster.density - cluster.prev_density;
    let delta_p = distance(&cluster.centroid, &cluster.prev_centroid);
    state.d_max = state.d_max.max(delta_d);
    state.p_max = state.p_max.max(delta_p);
    state.step = step;
}

/// Absorbs one point, or spawns a new cluster when no radius covers it.
pub fn absorb(x: &[f64], state: &mut ModelState, cfg: &AdnfConfig) -> Result<AbsorptionReport> {
    check_point(x, state)?;
    match nearest_candidate(x, state) {
        Some((index, _)) => {
            let membership = streaming_membership(x, state, index)?;
            let learning_rate = dynamic_learning_rate(&state.clusters[index], state, cfg);
            apply_update(state, index, x, membership, learning_rate, cfg);
            Ok(AbsorptionReport {
                matched_cluster: Some(index),
                membership_used: membership,
                learning_rate_used: learning_rate,
                created_new: false,
                step: state.step,
            })
        }
        None => {
            state.step += 1;
            let radius = median(&state.radii()).ok_or(Error::EmptyModel)?;
            state
                .clusters
                .push(MicroCluster::spawn(x, radius, cfg.m0, state.step));
            Ok(AbsorptionReport {
                matched_cluster: None,
                membership_used: 1.0,
                learning_rate_used: 1.0,
                created_new: true,
                step: state.step,
            })
        }
    }
}

/// Absorbs points in order. The first rejected point aborts the stream; the
/// state then reflects every point before it.
pub fn process_stream<I, P>(points: I, state: &mut ModelState, cfg: &AdnfConfig) -> Result<Vec<AbsorptionReport>>
where
    I: IntoIterator<Item = P>,
    P: AsRef<[f64]>,
{
    points
        .into_iter()
        .enumerate()
        .map(|(index, p)| {
            absorb(p.as_ref(), state, cfg).map_err(|e| Error::StreamPoint { index, source: Box::new(e) })
        })
        .collect()
}
