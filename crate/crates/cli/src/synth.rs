//! Seeded Gaussian-mixture streams with optional linear drift, used as
//! ground-truth fixtures.

use std::f64::consts::PI;

use adnf_core::FeatureMatrix;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureComponent {
    pub mean: Vec<f64>,
    /// Isotropic standard deviation.
    pub std: f64,
    pub weight: f64,
    /// Total mean displacement over the whole stream; zero when absent.
    #[serde(default)]
    pub drift: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticStreamSpec {
    pub components: Vec<MixtureComponent>,
    pub count: usize,
    pub seed: u64,
}

impl SyntheticStreamSpec {
    /// `k` equally weighted blobs whose means sit on a regular polygon in the
    /// first two coordinates with neighbouring means `spacing` apart (on a
    /// line when `dim == 1`).
    pub fn blobs(k: usize, spacing: f64, std: f64, count: usize, dim: usize, seed: u64) -> Self {
        let components = (0..k)
            .map(|i| {
                let mut mean = vec![0.0; dim];
                if dim == 1 || k == 1 {
                    mean[0] = i as f64 * spacing;
                } else {
                    let radius = spacing / (2.0 * (PI / k as f64).sin());
                    let angle = 2.0 * PI * i as f64 / k as f64;
                    mean[0] = radius * angle.cos();
                    mean[1] = radius * angle.sin();
                }
                MixtureComponent { mean, std, weight: 1.0 / k as f64, drift: None }
            })
            .collect();
        Self { components, count, seed }
    }

    pub fn dim(&self) -> usize {
        self.components.first().map_or(0, |c| c.mean.len())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(CliError::Synthetic(m.to_string()));
        if self.components.is_empty() {
            return bad("at least one component is required");
        }
        if self.count == 0 {
            return bad("count must be positive");
        }
        let d = self.dim();
        if d == 0 {
            return bad("component means must be non-empty");
        }
        for c in &self.components {
            if c.mean.len() != d || c.drift.as_ref().is_some_and(|v| v.len() != d) {
                return bad("all means and drifts must share one dimension");
            }
            if !(c.std >= 0.0 && c.std.is_finite()) {
                return bad("std must be finite and non-negative");
            }
            if !(c.weight > 0.0 && c.weight.is_finite()) {
                return bad("weights must be positive");
            }
        }
        let total: f64 = self.components.iter().map(|c| c.weight).sum();
        if (total - 1.0).abs() > 1e-9 {
            return bad("weights must sum to 1");
        }
        Ok(())
    }
}

/// Draws the stream and returns it with the generating component of each row.
pub fn generate_stream(spec: &SyntheticStreamSpec) -> Result<(FeatureMatrix, Vec<usize>)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let weights: Vec<f64> = spec.components.iter().map(|c| c.weight).collect();
    let chooser = WeightedIndex::new(&weights).map_err(|e| CliError::Synthetic(e.to_string()))?;
    let d = spec.dim();
    let mut data = Vec::with_capacity(spec.count * d);
    let mut labels = Vec::with_capacity(spec.count);
    for j in 0..spec.count {
        let k = chooser.sample(&mut rng);
        let c = &spec.components[k];
        let t = j as f64 / spec.count as f64;
        for i in 0..d {
            let noise: f64 = StandardNormal.sample(&mut rng);
            let drift = c.drift.as_ref().map_or(0.0, |v| v[i] * t);
            data.push(c.mean[i] + drift + c.std * noise);
        }
        labels.push(k);
    }
    Ok((FeatureMatrix::from_vec(spec.count, d, data)?, labels))
}
