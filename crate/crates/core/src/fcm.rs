//! Batch Fuzzy C-Means and construction of the initial micro-cluster set.

use alloc::collections::VecDeque;
use alloc::vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cluster::{HistoryEntry, MicroCluster, ModelState};
use crate::config::AdnfConfig;
use crate::error::{Error, Result};
use crate::geometry::{distance, percentile_radius, squared_distance};
use crate::matrix::{FeatureMatrix, Matrix};

/// Result of batch FCM: memberships (`c × N`), centroids (`c × d`) and the
/// final objective value.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FuzzyPartition {
    pub memberships: Matrix,
    pub centroids: Matrix,
    pub objective: f64,
    pub iterations_run: usize,
}

impl FuzzyPartition {
    pub fn n_clusters(&self) -> usize {
        self.centroids.rows()
    }
}

/// Membership of the point with centroid distances `dists` in cluster
/// `target`, using exponent `2/(m − 1)`. Points sitting exactly on one or
/// more centroids split their membership equally among those centroids.
pub(crate) fn membership_from_distances(dists: &[f64], target: usize, m: f64) -> f64 {
    let zeros = dists.iter().filter(|&&d| d == 0.0).count();
    if zeros > 0 {
        return if dists[target] == 0.0 { 1.0 / zeros as f64 } else { 0.0 };
    }
    let p = 2.0 / (m - 1.0);
    let di = dists[target];
    let sum: f64 = dists.iter().map(|&dk| libm::pow(di / dk, p)).sum();
    1.0 / sum
}

fn check_fuzziness(m: f64) -> Result<()> {
    if m > 1.0 && m.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig("fuzziness must be > 1"))
    }
}

/// Closed-form membership update for fixed centroids.
pub fn fcm_memberships(x: &FeatureMatrix, centroids: &Matrix, m: f64) -> Result<Matrix> {
    check_fuzziness(m)?;
    if centroids.cols() != x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: centroids.cols() });
    }
    let c = centroids.rows();
    if c == 0 {
        return Err(Error::EmptyModel);
    }
    let mut u = Matrix::zeros(c, x.n_samples());
    let mut dists = vec![0.0; c];
    for (j, xj) in x.iter_rows().enumerate() {
        for (i, d) in dists.iter_mut().enumerate() {
            *d = distance(xj, centroids.row(i));
        }
        for i in 0..c {
            u.set(i, j, membership_from_distances(&dists, i, m));
        }
    }
    Ok(u)
}

/// Closed-form centroid update: `v_i = Σ_j u_ij^m x_j / Σ_j u_ij^m`.
pub fn fcm_centroids(x: &FeatureMatrix, memberships: &Matrix, m: f64, numeric_eps: f64) -> Result<Matrix> {
    check_fuzziness(m)?;
    if memberships.cols() != x.n_samples() {
        return Err(Error::DimensionMismatch { expected: x.n_samples(), found: memberships.cols() });
    }
    let (c, d) = (memberships.rows(), x.dim());
    let mut v = Matrix::zeros(c, d);
    for i in 0..c {
        let mut weight_sum = 0.0;
        let row = v.row_mut(i);
        for (j, xj) in x.iter_rows().enumerate() {
            let w = libm::pow(memberships.get(i, j), m);
            weight_sum += w;
            for (acc, xv) in row.iter_mut().zip(xj) {
                *acc += w * xv;
            }
        }
        if weight_sum <= numeric_eps {
            return Err(Error::DegenerateCluster(i));
        }
        row.iter_mut().for_each(|acc| *acc /= weight_sum);
    }
    Ok(v)
}

/// Objective `J = Σ_j Σ_i u_ij^m ‖x_j − v_i‖²`.
pub fn fcm_objective(x: &FeatureMatrix, memberships: &Matrix, centroids: &Matrix, m: f64) -> Result<f64> {
    if memberships.cols() != x.n_samples() {
        return Err(Error::DimensionMismatch { expected: x.n_samples(), found: memberships.cols() });
    }
    if memberships.rows() != centroids.rows() {
        return Err(Error::DimensionMismatch { expected: memberships.rows(), found: centroids.rows() });
    }
    if centroids.cols() != x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: centroids.cols() });
    }
    let mut j_total = 0.0;
    for (j, xj) in x.iter_rows().enumerate() {
        for i in 0..centroids.rows() {
            j_total += libm::pow(memberships.get(i, j), m) * squared_distance(xj, centroids.row(i));
        }
    }
    Ok(j_total)
}

/// Seeded random column-stochastic `c × n` matrix.
fn random_memberships(c: usize, n: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = Matrix::zeros(c, n);
    let mut col = vec![0.0; c];
    for j in 0..n {
        for v in col.iter_mut() {
            // (0, 1]: keeps every initial weight strictly positive
            *v = 1.0 - rng.random::<f64>();
        }
        let s: f64 = col.iter().sum();
        for (i, v) in col.iter().enumerate() {
            u.set(i, j, v / s);
        }
    }
    u
}

/// Runs batch FCM with fuzziness `cfg.m0`.
pub fn fit_fcm(x: &FeatureMatrix, cfg: &AdnfConfig, seed: u64) -> Result<FuzzyPartition> {
    fit_fcm_observed(x, cfg, seed, |_, _| {})
}

/// [`fit_fcm`] reporting `(iteration, objective)` after every iteration.
///
/// The reported objective is `J(U_t, V_t)` where `V_t` is computed from the
/// previous memberships and `U_t` from `V_t`; this sequence is
/// non-increasing.
pub fn fit_fcm_observed<F>(x: &FeatureMatrix, cfg: &AdnfConfig, seed: u64, mut observer: F) -> Result<FuzzyPartition>
where
    F: FnMut(usize, f64),
{
    cfg.validate()?;
    let (n, c, m) = (x.n_samples(), cfg.c, cfg.m0);
    if n < c {
        return Err(Error::InsufficientData { needed: c, found: n });
    }
    let mut u = random_memberships(c, n, seed);
    let mut v = Matrix::zeros(c, x.dim());
    let mut objective = f64::INFINITY;
    let mut iterations = 0;
    for it in 1..=cfg.fcm_max_iter {
        iterations = it;
        v = fcm_centroids(x, &u, m, cfg.numeric_eps)?;
        let u_next = fcm_memberships(x, &v, m)?;
        let change = u
            .as_slice()
            .iter()
            .zip(u_next.as_slice())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        u = u_next;
        objective = fcm_objective(x, &u, &v, m)?;
        observer(it, objective);
        if change < cfg.fcm_tol {
            break;
        }
    }
    Ok(FuzzyPartition { memberships: u, centroids: v, objective, iterations_run: iterations })
}

/// Wraps each FCM centroid into a micro-cluster.
///
/// Every cluster logs all `N` points with their memberships, receives
/// density `Σ_j u_ij^{m0}` and shares the global percentile radius of `x`.
pub fn init_micro_clusters(x: &FeatureMatrix, partition: &FuzzyPartition, cfg: &AdnfConfig) -> Result<ModelState> {
    if partition.memberships.cols() != x.n_samples() {
        return Err(Error::DimensionMismatch { expected: x.n_samples(), found: partition.memberships.cols() });
    }
    if partition.centroids.cols() != x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: partition.centroids.cols() });
    }
    let radius = percentile_radius(x)?;
    let clusters = (0..partition.n_clusters())
        .map(|i| {
            let mut history = VecDeque::with_capacity(x.n_samples());
            let mut density = 0.0;
            for (j, xj) in x.iter_rows().enumerate() {
                let u = partition.memberships.get(i, j);
                density += libm::pow(u, cfg.m0);
                history.push_back(HistoryEntry::new(xj.to_vec(), u));
            }
            crate::cluster::cap_history(&mut history, cfg.history_cap);
            MicroCluster::from_parts(
                partition.centroids.row(i).to_vec(),
                density,
                radius,
                cfg.m0,
                history,
                0,
                cfg.numeric_eps,
            )
        })
        .collect();
    Ok(ModelState::new(clusters))
}
