//! Topology refinement: density-weighted merging of nearby micro-clusters
//! followed by entropy-guided splitting of heterogeneous ones.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::cluster::{cap_history, HistoryEntry, MicroCluster, ModelState};
use crate::config::AdnfConfig;
use crate::dbscan::{dbscan, Label};
use crate::error::{Error, Result};
use crate::geometry::{distance, median};
use crate::matrix::FeatureMatrix;

/// A merged component. Indices refer to the cluster list before merging;
/// the merged cluster takes the slot of `survivor`, the lowest member index.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MergeGroup {
    pub absorbed: Vec<usize>,
    pub survivor: usize,
}

/// A split attempt on cluster `source` (index in the pre-split list).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SplitEvent {
    pub source: usize,
    pub new_clusters: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RefinementReport {
    pub merges: Vec<MergeGroup>,
    pub splits: Vec<SplitEvent>,
    /// Merge threshold; absent when fewer than two clusters existed.
    pub tau_m: Option<f64>,
    pub tau_s: Option<f64>,
}

fn pairwise_centroid_distances(state: &ModelState) -> Vec<(usize, usize, f64)> {
    let n = state.len();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j, distance(&state.clusters[i].centroid, &state.clusters[j].centroid)));
        }
    }
    out
}

/// `τ_m = ρ_merge · median{‖v_i − v_j‖}`; `None` with fewer than two clusters.
pub fn merge_threshold(state: &ModelState, cfg: &AdnfConfig) -> Option<f64> {
    let d: Vec<f64> = pairwise_centroid_distances(state).into_iter().map(|(_, _, d)| d).collect();
    median(&d).map(|m| cfg.rho_merge * m)
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Keeps the smaller index as the root.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

fn weighted_mean(values: impl Iterator<Item = f64>, weights: &[f64], total: f64) -> f64 {
    if total > 0.0 {
        values.zip(weights).map(|(v, w)| v * w).sum::<f64>() / total
    } else {
        let (s, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
        s / n as f64
    }
}

fn merge_group(members: &[&MicroCluster], cfg: &AdnfConfig) -> MicroCluster {
    let weights: Vec<f64> = members.iter().map(|c| c.density).collect();
    let total: f64 = weights.iter().sum();
    let dim = members[0].dim();
    let centroid: Vec<f64> = (0..dim)
        .map(|k| weighted_mean(members.iter().map(|c| c.centroid[k]), &weights, total))
        .collect();
    let radius = weighted_mean(members.iter().map(|c| c.radius), &weights, total);
    let fuzziness = weighted_mean(members.iter().map(|c| c.fuzziness), &weights, total);
    let mut history: VecDeque<HistoryEntry> = members.iter().flat_map(|c| c.history.iter().cloned()).collect();
    cap_history(&mut history, cfg.history_cap);
    let step = members.iter().map(|c| c.last_update_step).max().unwrap_or(0);

    let mut merged = MicroCluster::from_parts(centroid, total, radius, fuzziness, history, step, cfg.numeric_eps);
    merged.fuzzy_count = members.iter().map(|c| c.fuzzy_count).sum();
    merged
}

/// Merges every connected component of the graph linking clusters closer
/// than `τ_m` (coincident centroids always linked). The threshold is taken
/// once from the pre-merge state; merged clusters are not re-examined.
pub fn merge_clusters(state: &mut ModelState, cfg: &AdnfConfig) -> RefinementReport {
    let mut report = RefinementReport::default();
    let Some(tau_m) = merge_threshold(state, cfg) else {
        return report;
    };
    report.tau_m = Some(tau_m);

    let n = state.len();
    let mut sets = DisjointSet::new(n);
    for (i, j, d) in pairwise_centroid_distances(state) {
        if d < tau_m || d == 0.0 {
            sets.union(i, j);
        }
    }
    let mut components: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let root = sets.find(i);
        components[root].push(i);
    }
    if components.iter().all(|c| c.len() <= 1) {
        return report;
    }

    let old = core::mem::take(&mut state.clusters);
    for (root, members) in components.into_iter().enumerate() {
        match members.len() {
            0 => {}
            1 => state.clusters.push(old[root].clone()),
            _ => {
                let refs: Vec<&MicroCluster> = members.iter().map(|&i| &old[i]).collect();
                state.clusters.push(merge_group(&refs, cfg));
                report.merges.push(MergeGroup { survivor: root, absorbed: members });
            }
        }
    }
    report
}

/// Local uncertainty `−(u + eps) · ln(u + eps)` of a single membership.
pub fn local_entropy(u: f64, cfg: &AdnfConfig) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::InvalidConfig("membership must lie in [0, 1]"));
    }
    let v = u + cfg.numeric_eps;
    Ok(-v * libm::log(v))
}

/// `τ_s = (H̄ + k_σ σ_H)(1 + γ · mean FTI)` with the population standard
/// deviation of cluster entropies.
pub fn split_threshold(state: &ModelState, ftis: &[f64], cfg: &AdnfConfig) -> f64 {
    let n = state.len().max(1) as f64;
    let mean_h = state.clusters.iter().map(|c| c.entropy).sum::<f64>() / n;
    let var_h = state.clusters.iter().map(|c| (c.entropy - mean_h) * (c.entropy - mean_h)).sum::<f64>() / n;
    let mean_fti = if ftis.is_empty() { 0.0 } else { ftis.iter().sum::<f64>() / ftis.len() as f64 };
    (mean_h + cfg.k_sigma * libm::sqrt(var_h)) * (1.0 + cfg.gamma * mean_fti)
}

fn history_matrix(entries: &[&HistoryEntry]) -> Result<FeatureMatrix> {
    let rows: Vec<&[f64]> = entries.iter().map(|h| h.point.as_slice()).collect();
    FeatureMatrix::from_rows(&rows)
}

/// Splits clusters whose entropy exceeds `τ_s`: their uncertain history
/// points are reclustered with DBSCAN and each large enough subcluster
/// becomes a new micro-cluster appended to the list. The parent keeps the
/// remaining history with density and entropy recomputed; a parent left
/// without history is removed.
pub fn split_clusters(state: &mut ModelState, ftis: &[f64], cfg: &AdnfConfig) -> Result<RefinementReport> {
    let mut report = RefinementReport::default();
    if state.is_empty() {
        return Ok(report);
    }
    let tau_s = split_threshold(state, ftis, cfg);
    report.tau_s = Some(tau_s);
    let min_card = cfg.split_cardinality();

    let mut children = Vec::new();
    for (index, parent) in state.clusters.iter_mut().enumerate() {
        if parent.entropy <= tau_s {
            continue;
        }
        let mut uncertain = Vec::new();
        for (k, h) in parent.history.iter().enumerate() {
            if local_entropy(h.membership.clamp(0.0, 1.0), cfg)? > tau_s {
                uncertain.push(k);
            }
        }
        let mut made = 0;
        if !uncertain.is_empty() {
            let entries: Vec<&HistoryEntry> = uncertain.iter().map(|&k| &parent.history[k]).collect();
            let labels = dbscan(&history_matrix(&entries)?, cfg.eps_split, cfg.min_samples)?;
            let n_groups = labels.iter().filter_map(|l| l.cluster()).max().map_or(0, |m| m + 1);
            let mut moved = vec![false; parent.history.len()];
            for g in 0..n_groups {
                let members: Vec<usize> = labels
                    .iter()
                    .zip(&uncertain)
                    .filter(|(l, _)| **l == Label::Cluster(g))
                    .map(|(_, &k)| k)
                    .collect();
                if members.len() < min_card {
                    continue;
                }
                let history: VecDeque<HistoryEntry> = members.iter().map(|&k| parent.history[k].clone()).collect();
                let mut centroid = vec![0.0; parent.dim()];
                for h in &history {
                    centroid.iter_mut().zip(&h.point).for_each(|(c, p)| *c += p);
                }
                centroid.iter_mut().for_each(|c| *c /= history.len() as f64);
                let density = history.iter().map(|h| libm::pow(h.membership, parent.fuzziness)).sum();
                children.push(MicroCluster::from_parts(
                    centroid,
                    density,
                    parent.radius,
                    parent.fuzziness,
                    history,
                    parent.last_update_step,
                    cfg.numeric_eps,
                ));
                members.iter().for_each(|&k| moved[k] = true);
                made += 1;
            }
            if made > 0 {
                let retained: VecDeque<HistoryEntry> = core::mem::take(&mut parent.history)
                    .into_iter()
                    .zip(moved)
                    .filter(|(_, m)| !m)
                    .map(|(h, _)| h)
                    .collect();
                parent.history = retained;
                parent.density = parent.history_mass();
                parent.fuzzy_count = parent.density;
                parent.recompute_entropy(cfg.numeric_eps);
            }
        }
        report.splits.push(SplitEvent { source: index, new_clusters: made });
    }
    state.clusters.retain(|c| !c.history.is_empty());
    state.clusters.extend(children);
    Ok(report)
}

/// One refinement pass: merge, then split.
pub fn refine(state: &mut ModelState, ftis: &[f64], cfg: &AdnfConfig) -> Result<RefinementReport> {
    let merged = merge_clusters(state, cfg);
    let split = split_clusters(state, ftis, cfg)?;
    Ok(RefinementReport {
        merges: merged.merges,
        splits: split.splits,
        tau_m: merged.tau_m,
        tau_s: split.tau_s,
    })
}
