use crate::error::{Error, Result};

/// Hyperparameters for every phase of the pipeline.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct AdnfConfig {
    /// Initial cluster count for batch FCM.
    pub c: usize,
    /// Base fuzziness, strictly greater than 1.
    pub m0: f64,
    /// Floor of the dynamic learning rate, in (0, 1].
    pub lambda_min: f64,
    /// Merge threshold factor applied to the median centroid distance.
    pub rho_merge: f64,
    /// Standard-deviation multiplier in the split threshold.
    pub k_sigma: f64,
    /// Coupling between the mean temporal index and the split threshold.
    pub gamma: f64,
    /// DBSCAN neighbourhood radius used when splitting.
    pub eps_split: f64,
    /// DBSCAN core-point neighbour count (the point itself included).
    pub min_samples: usize,
    /// Minimum size of a DBSCAN subcluster promoted to a micro-cluster.
    /// Falls back to `min_samples` when unset.
    pub min_split_cardinality: Option<usize>,
    /// Upper clamp on adapted fuzziness.
    pub m_max: f64,
    pub fcm_max_iter: usize,
    pub fcm_tol: f64,
    /// Guard added inside logarithms and compared against denominators.
    pub numeric_eps: f64,
    /// Per-cluster history length; `None` keeps every entry.
    pub history_cap: Option<usize>,
}

impl Default for AdnfConfig {
    fn default() -> Self {
        Self {
            c: 2,
            m0: 2.0,
            lambda_min: 0.1,
            rho_merge: 0.5,
            k_sigma: 0.5,
            gamma: 0.5,
            eps_split: 0.5,
            min_samples: 5,
            min_split_cardinality: None,
            m_max: 5.0,
            fcm_max_iter: 300,
            fcm_tol: 1e-5,
            numeric_eps: 1e-10,
            history_cap: None,
        }
    }
}

impl AdnfConfig {
    pub fn split_cardinality(&self) -> usize {
        self.min_split_cardinality.unwrap_or(self.min_samples)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |v: f64| v.is_finite();
        if self.c == 0 {
            return Err(Error::InvalidConfig("c must be positive"));
        }
        if !(finite(self.m0) && self.m0 > 1.0) {
            return Err(Error::InvalidConfig("m0 must be > 1"));
        }
        if !(self.lambda_min > 0.0 && self.lambda_min <= 1.0) {
            return Err(Error::InvalidConfig("lambda_min must lie in (0, 1]"));
        }
        if !(finite(self.rho_merge) && self.rho_merge > 0.0) {
            return Err(Error::InvalidConfig("rho_merge must be > 0"));
        }
        if !(finite(self.k_sigma) && self.k_sigma >= 0.0) {
            return Err(Error::InvalidConfig("k_sigma must be >= 0"));
        }
        if !(finite(self.gamma) && self.gamma >= 0.0) {
            return Err(Error::InvalidConfig("gamma must be >= 0"));
        }
        if !(finite(self.eps_split) && self.eps_split > 0.0) {
            return Err(Error::InvalidConfig("eps_split must be > 0"));
        }
        if self.min_samples == 0 {
            return Err(Error::InvalidConfig("min_samples must be positive"));
        }
        if self.min_split_cardinality == Some(0) {
            return Err(Error::InvalidConfig("min_split_cardinality must be positive"));
        }
        if !(finite(self.m_max) && self.m_max > self.m0) {
            return Err(Error::InvalidConfig("m_max must exceed m0"));
        }
        if self.fcm_max_iter == 0 {
            return Err(Error::InvalidConfig("fcm_max_iter must be positive"));
        }
        if !(finite(self.fcm_tol) && self.fcm_tol > 0.0) {
            return Err(Error::InvalidConfig("fcm_tol must be > 0"));
        }
        if !(finite(self.numeric_eps) && self.numeric_eps > 0.0) {
            return Err(Error::InvalidConfig("numeric_eps must be > 0"));
        }
        if self.history_cap == Some(0) {
            return Err(Error::InvalidConfig("history_cap must be positive"));
        }
        Ok(())
    }
}
