//! Micro-cluster summaries and the evolving model state.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

/// One logged assignment: the point and the membership it was absorbed with.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HistoryEntry {
    pub point: Vec<f64>,
    pub membership: f64,
}

impl HistoryEntry {
    pub fn new(point: Vec<f64>, membership: f64) -> Self {
        Self { point, membership }
    }
}

/// Contribution `−u · ln(u + eps)` of one membership to a cluster's entropy.
#[inline]
pub(crate) fn entropy_term(u: f64, eps: f64) -> f64 {
    -u * libm::log(u + eps)
}

/// Compact local summary of a data region.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MicroCluster {
    pub centroid: Vec<f64>,
    /// Soft mass: accumulated `u^m` of absorbed points.
    pub density: f64,
    pub fuzzy_count: f64,
    /// Sensitivity radius gating absorption.
    pub radius: f64,
    /// Per-cluster fuzziness exponent, always > 1.
    pub fuzziness: f64,
    /// Running entropy of the history memberships.
    pub entropy: f64,
    /// Entropy at the last adaptation pass.
    pub prev_entropy: f64,
    /// Centroid immediately before the most recent absorption.
    pub prev_centroid: Vec<f64>,
    /// Centroid at the last adaptation pass.
    pub anchor_centroid: Vec<f64>,
    /// Density immediately before the most recent absorption.
    pub prev_density: f64,
    pub history: VecDeque<HistoryEntry>,
    pub last_update_step: u64,
}

impl MicroCluster {
    /// A fresh cluster centred on `point` with unit density and a single
    /// fully-certain history entry.
    pub fn spawn(point: &[f64], radius: f64, fuzziness: f64, step: u64) -> Self {
        let mut history = VecDeque::with_capacity(1);
        history.push_back(HistoryEntry::new(point.to_vec(), 1.0));
        Self {
            centroid: point.to_vec(),
            density: 1.0,
            fuzzy_count: 1.0,
            radius,
            fuzziness,
            entropy: 0.0,
            prev_entropy: 0.0,
            prev_centroid: point.to_vec(),
            anchor_centroid: point.to_vec(),
            prev_density: 1.0,
            history,
            last_update_step: step,
        }
    }

    /// Builds a cluster from explicit statistics and history; entropy is
    /// computed from the history and all trackers start at the current values.
    pub fn from_parts(
        centroid: Vec<f64>,
        density: f64,
        radius: f64,
        fuzziness: f64,
        history: VecDeque<HistoryEntry>,
        step: u64,
        numeric_eps: f64,
    ) -> Self {
        let mut mc = Self {
            prev_centroid: centroid.clone(),
            anchor_centroid: centroid.clone(),
            centroid,
            density,
            fuzzy_count: density,
            radius,
            fuzziness,
            entropy: 0.0,
            prev_entropy: 0.0,
            prev_density: density,
            history,
            last_update_step: step,
        };
        mc.recompute_entropy(numeric_eps);
        mc.prev_entropy = mc.entropy;
        mc
    }

    pub fn dim(&self) -> usize {
        self.centroid.len()
    }

    /// Recomputes the running entropy from the retained history.
    pub fn recompute_entropy(&mut self, numeric_eps: f64) {
        self.entropy = self
            .history
            .iter()
            .map(|h| entropy_term(h.membership, numeric_eps))
            .sum();
    }

    /// Appends to the history, evicting the oldest entries beyond `cap`.
    pub fn push_history(&mut self, entry: HistoryEntry, cap: Option<usize>, numeric_eps: f64) {
        let term = entropy_term(entry.membership, numeric_eps);
        self.history.push_back(entry);
        match cap {
            Some(cap) if self.history.len() > cap => {
                while self.history.len() > cap {
                    self.history.pop_front();
                }
                self.recompute_entropy(numeric_eps);
            }
            _ => self.entropy += term,
        }
    }

    /// Sum of `u^m` over the history using this cluster's fuzziness.
    pub fn history_mass(&self) -> f64 {
        self.history
            .iter()
            .map(|h| libm::pow(h.membership, self.fuzziness))
            .sum()
    }
}

/// Trims a history to its newest `cap` entries.
pub(crate) fn cap_history(history: &mut VecDeque<HistoryEntry>, cap: Option<usize>) {
    if let Some(cap) = cap {
        while history.len() > cap {
            history.pop_front();
        }
    }
}

/// Collection of micro-clusters plus the running global maxima used to
/// normalise the dynamic learning rate.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModelState {
    pub clusters: Vec<MicroCluster>,
    /// Largest single-absorption density change seen so far.
    pub d_max: f64,
    /// Largest single-absorption centroid displacement seen so far.
    pub p_max: f64,
    pub step: u64,
}

impl ModelState {
    pub fn new(clusters: Vec<MicroCluster>) -> Self {
        Self { clusters, d_max: 0.0, p_max: 0.0, step: 0 }
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.clusters.first().map(MicroCluster::dim)
    }

    pub fn total_density(&self) -> f64 {
        self.clusters.iter().map(|c| c.density).sum()
    }

    pub fn centroids(&self) -> Vec<Vec<f64>> {
        self.clusters.iter().map(|c| c.centroid.clone()).collect()
    }

    pub fn radii(&self) -> Vec<f64> {
        self.clusters.iter().map(|c| c.radius).collect()
    }

    pub fn history_len(&self) -> usize {
        self.clusters.iter().map(|c| c.history.len()).sum()
    }
}
