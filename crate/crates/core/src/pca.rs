//! Principal component analysis via eigen-decomposition of the sample
//! covariance.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{FeatureMatrix, Matrix};

/// Fitted projection: `k` orthonormal component rows over `d` features.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PcaModel {
    pub mean: Vec<f64>,
    pub components: Matrix,
    pub explained_variance: Vec<f64>,
}

impl PcaModel {
    pub fn n_components(&self) -> usize {
        self.components.rows()
    }
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues and a matrix whose columns are the eigenvectors.
pub fn symmetric_eigen(a: &Matrix) -> (Vec<f64>, Matrix) {
    let n = a.rows();
    let mut m = a.clone();
    let mut v = Matrix::zeros(n, n);
    for i in 0..n {
        v.set(i, i, 1.0);
    }
    let scale: f64 = m.as_slice().iter().map(|x| x * x).sum::<f64>();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m.get(i, j) * m.get(i, j))
            .sum();
        if off <= 1e-30 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (m.get(p, p), m.get(q, q));
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m.get(k, p), m.get(k, q));
                    m.set(k, p, c * mkp - s * mkq);
                    m.set(k, q, s * mkp + c * mkq);
                }
                for k in 0..n {
                    let (mpk, mqk) = (m.get(p, k), m.get(q, k));
                    m.set(p, k, c * mpk - s * mqk);
                    m.set(q, k, s * mpk + c * mqk);
                }
                for k in 0..n {
                    let (vkp, vkq) = (v.get(k, p), v.get(k, q));
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    ((0..n).map(|i| m.get(i, i)).collect(), v)
}

/// Sample covariance (divisor `N − 1`) of `x` around `mean`.
pub fn covariance(x: &FeatureMatrix, mean: &[f64]) -> Matrix {
    let d = x.dim();
    let mut cov = Matrix::zeros(d, d);
    let mut centered = vec![0.0; d];
    for row in x.iter_rows() {
        centered.iter_mut().zip(row.iter().zip(mean)).for_each(|(c, (v, m))| *c = v - m);
        for i in 0..d {
            for j in i..d {
                cov.set(i, j, cov.get(i, j) + centered[i] * centered[j]);
            }
        }
    }
    let denom = (x.n_samples() - 1) as f64;
    for i in 0..d {
        for j in i..d {
            let v = cov.get(i, j) / denom;
            cov.set(i, j, v);
            cov.set(j, i, v);
        }
    }
    cov
}

/// Flips `component` so its largest-magnitude entry (earliest on ties) is positive.
pub(crate) fn canonical_sign(component: &mut [f64]) {
    let mut best = 0;
    for (i, v) in component.iter().enumerate() {
        if v.abs() > component[best].abs() {
            best = i;
        }
    }
    if component[best] < 0.0 {
        component.iter_mut().for_each(|v| *v = -*v);
    }
}

/// Fits the top-`k` principal components, `1 ≤ k ≤ min(N − 1, d)`.
pub fn fit_pca(x: &FeatureMatrix, k: usize) -> Result<PcaModel> {
    let (n, d) = (x.n_samples(), x.dim());
    if k == 0 || k > d || k + 1 > n {
        return Err(Error::InvalidConfig("component count must lie in [1, min(N - 1, d)]"));
    }
    let mean = x.mean();
    let (values, vectors) = symmetric_eigen(&covariance(x, &mean));
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));

    let mut components = Matrix::zeros(k, d);
    let mut explained_variance = Vec::with_capacity(k);
    for (r, &idx) in order.iter().take(k).enumerate() {
        let row = components.row_mut(r);
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = vectors.get(j, idx);
        }
        canonical_sign(row);
        explained_variance.push(values[idx].max(0.0));
    }
    Ok(PcaModel { mean, components, explained_variance })
}

/// Projects rows of `x` onto the fitted components.
pub fn transform(model: &PcaModel, x: &FeatureMatrix) -> Result<FeatureMatrix> {
    let d = model.mean.len();
    if x.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: x.dim() });
    }
    let k = model.n_components();
    let mut out = Vec::with_capacity(x.n_samples() * k);
    for row in x.iter_rows() {
        for c in 0..k {
            let comp = model.components.row(c);
            out.push(row.iter().zip(&model.mean).zip(comp).map(|((v, m), w)| (v - m) * w).sum());
        }
    }
    FeatureMatrix::from_vec(x.n_samples(), k, out)
}

/// Maps projected coordinates back to feature space.
pub fn inverse_transform(model: &PcaModel, y: &FeatureMatrix) -> Result<FeatureMatrix> {
    let k = model.n_components();
    if y.dim() != k {
        return Err(Error::DimensionMismatch { expected: k, found: y.dim() });
    }
    let d = model.mean.len();
    let mut out = Vec::with_capacity(y.n_samples() * d);
    for row in y.iter_rows() {
        for j in 0..d {
            out.push(model.mean[j] + (0..k).map(|c| row[c] * model.components.get(c, j)).sum::<f64>());
        }
    }
    FeatureMatrix::from_vec(y.n_samples(), d, out)
}
