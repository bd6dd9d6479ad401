//! Distances and order statistics shared by every phase.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::FeatureMatrix;

/// Euclidean distance between two equal-length vectors.
pub fn euclidean_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    Ok(distance(a, b))
}

/// Unchecked variant used on hot paths where lengths are already validated.
#[inline]
pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(squared_distance(a, b))
}

#[inline]
pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Percentile `p ∈ [0, 1]` of an ascending-sorted slice, by linear
/// interpolation at index `p · (n − 1)`.
pub fn percentile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = p * (sorted.len() - 1) as f64;
    let lo = libm::floor(pos) as usize;
    let hi = libm::ceil(pos) as usize;
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Median of an unsorted slice; mean of the middle two for even lengths.
/// Returns `None` for an empty slice.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    Some(if n % 2 == 1 { sorted[n / 2] } else { 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]) })
}

/// All `N(N−1)/2` pairwise distances between rows, in row-major pair order.
pub fn pairwise_distances(x: &FeatureMatrix) -> Vec<f64> {
    let n = x.n_samples();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push(distance(x.row(i), x.row(j)));
        }
    }
    out
}

/// Sensitivity radius `½(P10 + P90)` of the pairwise distance distribution.
pub fn percentile_radius(x: &FeatureMatrix) -> Result<f64> {
    if x.n_samples() < 2 {
        return Err(Error::InsufficientData { needed: 2, found: x.n_samples() });
    }
    let mut d = pairwise_distances(x);
    d.sort_by(f64::total_cmp);
    let radius = 0.5 * (percentile_sorted(&d, 0.1) + percentile_sorted(&d, 0.9));
    if radius > 0.0 {
        Ok(radius)
    } else {
        Err(Error::DegenerateRadius)
    }
}
