//! Hard assignment and silhouette scoring.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::cluster::ModelState;
use crate::error::{Error, Result};
use crate::geometry::distance;
use crate::matrix::FeatureMatrix;

/// Index of the nearest centroid for every row (lowest index on ties).
pub fn hard_assign(x: &FeatureMatrix, state: &ModelState) -> Result<Vec<usize>> {
    let d = state.dim().ok_or(Error::EmptyModel)?;
    if d != x.dim() {
        return Err(Error::DimensionMismatch { expected: d, found: x.dim() });
    }
    Ok(x.iter_rows()
        .map(|row| {
            let mut best = (0, f64::INFINITY);
            for (i, c) in state.clusters.iter().enumerate() {
                let dist = distance(row, &c.centroid);
                if dist < best.1 {
                    best = (i, dist);
                }
            }
            best.0
        })
        .collect())
}

/// Mean silhouette coefficient of a labeling. Points in singleton clusters
/// score 0.
pub fn silhouette(x: &FeatureMatrix, labels: &[usize]) -> Result<f64> {
    let n = x.n_samples();
    if labels.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: labels.len() });
    }
    // compact label ids to 0..k
    let mut ids = BTreeMap::new();
    for &l in labels {
        let next = ids.len();
        ids.entry(l).or_insert(next);
    }
    let k = ids.len();
    if k < 2 {
        return Err(Error::UndefinedMetric("silhouette needs at least two clusters"));
    }
    let compact: Vec<usize> = labels.iter().map(|l| ids[l]).collect();
    let mut sizes = vec![0usize; k];
    compact.iter().for_each(|&c| sizes[c] += 1);

    let mut sums = vec![0.0; k];
    let mut total = 0.0;
    for i in 0..n {
        sums.iter_mut().for_each(|s| *s = 0.0);
        for j in 0..n {
            if i != j {
                sums[compact[j]] += distance(x.row(i), x.row(j));
            }
        }
        let own = compact[i];
        if sizes[own] == 1 {
            continue;
        }
        let a = sums[own] / (sizes[own] - 1) as f64;
        let b = (0..k)
            .filter(|&c| c != own)
            .map(|c| sums[c] / sizes[c] as f64)
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    Ok(total / n as f64)
}
