//! Brute-force reference implementations. Written from the definitions,
//! without calling into the library's internals, so the library can be
//! checked against them.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use adnf_core::{AdnfConfig, FeatureMatrix, Label, Matrix, ModelState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for k in 0..a.len() {
        s += (a[k] - b[k]).powi(2);
    }
    s.sqrt()
}

pub fn uniform_points(rng: &mut impl Rng, n: usize, d: usize, scale: f64) -> FeatureMatrix {
    let data: Vec<f64> = (0..n * d).map(|_| rng.random::<f64>() * scale).collect();
    FeatureMatrix::from_vec(n, d, data).unwrap()
}

/// Points drawn around `k` random centres, so clusters and noise both occur.
pub fn clumpy_points(rng: &mut impl Rng, n: usize, d: usize, k: usize, spread: f64) -> FeatureMatrix {
    let centres: Vec<Vec<f64>> = (0..k).map(|_| (0..d).map(|_| rng.random::<f64>() * 10.0).collect()).collect();
    let mut data = Vec::with_capacity(n * d);
    for _ in 0..n {
        let c = &centres[rng.random_range(0..k)];
        for v in c {
            data.push(v + (rng.random::<f64>() - 0.5) * spread);
        }
    }
    FeatureMatrix::from_vec(n, d, data).unwrap()
}

/// Percentile by linear interpolation between closest ranks.
fn percentile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let below = h.floor();
    let i = below as usize;
    if i + 1 >= sorted.len() {
        return sorted[sorted.len() - 1];
    }
    sorted[i] * (1.0 - (h - below)) + sorted[i + 1] * (h - below)
}

pub fn radius_oracle(x: &FeatureMatrix) -> f64 {
    let mut d = Vec::new();
    for i in 0..x.n_samples() {
        for j in 0..i {
            d.push(dist(x.row(i), x.row(j)));
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    (percentile(&d, 0.1) + percentile(&d, 0.9)) / 2.0
}

pub fn objective_oracle(x: &FeatureMatrix, u: &Matrix, v: &Matrix, m: f64) -> f64 {
    let mut j = 0.0;
    for i in 0..v.rows() {
        for p in 0..x.n_samples() {
            j += u.get(i, p).powf(m) * dist(x.row(p), v.row(i)).powi(2);
        }
    }
    j
}

/// `u_i = 1 / Σ_k (d_i / d_k)^{2/(m−1)}`, with points sitting on centroids
/// shared equally among the coincident centroids.
pub fn membership_oracle(dists: &[f64], target: usize, m: f64) -> f64 {
    let zeros = dists.iter().filter(|d| **d == 0.0).count();
    if zeros > 0 {
        return if dists[target] == 0.0 { 1.0 / zeros as f64 } else { 0.0 };
    }
    let mut s = 0.0;
    for d in dists {
        s += (dists[target] / d).powf(2.0 / (m - 1.0));
    }
    1.0 / s
}

pub fn entropy_oracle(memberships: &[f64], eps: f64) -> f64 {
    let mut h = 0.0;
    for u in memberships {
        h -= u * (u + eps).ln();
    }
    h
}

/// Minimal re-statement of the streaming model: just the numbers the
/// update rule touches.
#[derive(Debug, Clone)]
pub struct Replay {
    pub centroids: Vec<Vec<f64>>,
    pub prev_centroids: Vec<Vec<f64>>,
    pub densities: Vec<f64>,
    pub prev_densities: Vec<f64>,
    pub radii: Vec<f64>,
    pub fuzziness: Vec<f64>,
    pub d_max: f64,
    pub p_max: f64,
}

impl Replay {
    pub fn from_state(state: &ModelState) -> Self {
        Replay {
            centroids: state.clusters.iter().map(|c| c.centroid.clone()).collect(),
            prev_centroids: state.clusters.iter().map(|c| c.prev_centroid.clone()).collect(),
            densities: state.clusters.iter().map(|c| c.density).collect(),
            prev_densities: state.clusters.iter().map(|c| c.prev_density).collect(),
            radii: state.clusters.iter().map(|c| c.radius).collect(),
            fuzziness: state.clusters.iter().map(|c| c.fuzziness).collect(),
            d_max: state.d_max,
            p_max: state.p_max,
        }
    }

    fn median_radius(&self) -> f64 {
        let mut r = self.radii.clone();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = r.len();
        if n % 2 == 1 {
            r[n / 2]
        } else {
            (r[n / 2 - 1] + r[n / 2]) / 2.0
        }
    }

    /// Returns the index of the updated cluster, or `None` for a spawn.
    pub fn step(&mut self, x: &[f64], cfg: &AdnfConfig) -> Option<usize> {
        let dists: Vec<f64> = self.centroids.iter().map(|c| dist(x, c)).collect();
        let mut winner: Option<usize> = None;
        for i in 0..dists.len() {
            if dists[i] <= self.radii[i] && winner.is_none_or(|w| dists[i] < dists[w]) {
                winner = Some(i);
            }
        }
        let Some(i) = winner else {
            let r = self.median_radius();
            self.centroids.push(x.to_vec());
            self.prev_centroids.push(x.to_vec());
            self.densities.push(1.0);
            self.prev_densities.push(1.0);
            self.radii.push(r);
            self.fuzziness.push(cfg.m0);
            return None;
        };
        let m = self.fuzziness[i];
        let u = membership_oracle(&dists, i, m);

        let dd = (self.densities[i] - self.prev_densities[i]).abs();
        let dp = dist(&self.centroids[i], &self.prev_centroids[i]);
        let rd = if self.d_max > cfg.numeric_eps { dd / self.d_max } else { 0.0 };
        let rp = if self.p_max > cfg.numeric_eps { dp / self.p_max } else { 0.0 };
        let lr = (0.5 * (rd + rp)).max(cfg.lambda_min).min(1.0);

        let um = u.powf(m);
        let dens = self.densities[i];
        let old = self.centroids[i].clone();
        let new: Vec<f64> =
            old.iter().zip(x).map(|(v, xv)| (lr * um * xv + dens * v) / (lr * um + dens)).collect();
        self.prev_centroids[i] = old;
        self.prev_densities[i] = dens;
        self.centroids[i] = new;
        self.densities[i] = dens + um;
        self.d_max = self.d_max.max(self.densities[i] - dens);
        self.p_max = self.p_max.max(dist(&self.centroids[i], &self.prev_centroids[i]));
        Some(i)
    }
}

/// Residual of `p` from the segment `[a, b]` and whether its projection
/// parameter falls inside `[0, 1]`.
pub fn segment_residual(a: &[f64], b: &[f64], p: &[f64]) -> (f64, f64) {
    let ab: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    let ap: Vec<f64> = a.iter().zip(p).map(|(x, y)| y - x).collect();
    let len2: f64 = ab.iter().map(|v| v * v).sum();
    let t = if len2 > 0.0 { ab.iter().zip(&ap).map(|(x, y)| x * y).sum::<f64>() / len2 } else { 0.0 };
    let resid: f64 = ap.iter().zip(&ab).map(|(q, r)| (q - t * r).powi(2)).sum::<f64>().sqrt();
    (resid, t)
}

/// Connected components (by breadth-first search) of the graph linking
/// centroids closer than `tau`, or coincident. Each component is sorted and
/// components are ordered by their smallest member.
pub fn merge_components(centroids: &[Vec<f64>], tau: f64) -> Vec<Vec<usize>> {
    let n = centroids.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut k = 0;
        while k < comp.len() {
            let a = comp[k];
            for b in 0..n {
                let d = dist(&centroids[a], &centroids[b]);
                if !seen[b] && (d < tau || d == 0.0) {
                    seen[b] = true;
                    comp.push(b);
                }
            }
            k += 1;
        }
        comp.sort();
        out.push(comp);
    }
    out
}

pub fn median_pairwise(centroids: &[Vec<f64>]) -> f64 {
    let mut d = Vec::new();
    for i in 0..centroids.len() {
        for j in i + 1..centroids.len() {
            d.push(dist(&centroids[i], &centroids[j]));
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = d.len();
    if n % 2 == 1 {
        d[n / 2]
    } else {
        (d[n / 2 - 1] + d[n / 2]) / 2.0
    }
}

/// DBSCAN by definition: core points are those with `min_samples` points
/// (themselves included) within `eps`; clusters are the connected
/// components of core points; a border point goes to the earliest-created
/// cluster among its core neighbours, clusters being created in order of
/// their first core point.
pub fn dbscan_oracle(x: &FeatureMatrix, eps: f64, min_samples: usize) -> Vec<Option<usize>> {
    let n = x.n_samples();
    let near = |a: usize, b: usize| dist(x.row(a), x.row(b)) <= eps;
    let core: Vec<bool> = (0..n).map(|i| (0..n).filter(|&j| near(i, j)).count() >= min_samples).collect();
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if !core[s] || comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = next;
        while let Some(a) = stack.pop() {
            for b in 0..n {
                if core[b] && comp[b] == usize::MAX && near(a, b) {
                    comp[b] = next;
                    stack.push(b);
                }
            }
        }
        next += 1;
    }
    (0..n)
        .map(|i| {
            if core[i] {
                Some(comp[i])
            } else {
                (0..n).filter(|&j| core[j] && near(i, j)).map(|j| comp[j]).min()
            }
        })
        .collect()
}

/// True when two labelings agree up to a renaming of cluster ids, with
/// noise matched to noise.
pub fn same_partition(a: &[Label], b: &[Option<usize>]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut fwd = HashMap::new();
    let mut back = HashMap::new();
    for (x, y) in a.iter().zip(b) {
        match (x.cluster(), y) {
            (None, None) => {}
            (Some(p), Some(q)) => {
                if *fwd.entry(p).or_insert(*q) != *q || *back.entry(*q).or_insert(p) != p {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}

pub fn silhouette_oracle(x: &FeatureMatrix, labels: &[usize]) -> f64 {
    let n = x.n_samples();
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        groups.entry(*l).or_default().push(i);
    }
    let mut total = 0.0;
    for i in 0..n {
        let own = &groups[&labels[i]];
        if own.len() == 1 {
            continue;
        }
        let a = own.iter().filter(|&&j| j != i).map(|&j| dist(x.row(i), x.row(j))).sum::<f64>() / (own.len() - 1) as f64;
        let mut b = f64::INFINITY;
        for (l, members) in &groups {
            if *l == labels[i] {
                continue;
            }
            let mean = members.iter().map(|&j| dist(x.row(i), x.row(j))).sum::<f64>() / members.len() as f64;
            b = b.min(mean);
        }
        let s = if a.max(b) > 0.0 { (b - a) / a.max(b) } else { 0.0 };
        total += s;
    }
    total / n as f64
}

pub fn nearest_oracle(x: &FeatureMatrix, centroids: &[Vec<f64>]) -> Vec<usize> {
    x.iter_rows()
        .map(|r| {
            let mut best = 0;
            for (i, c) in centroids.iter().enumerate() {
                if dist(r, c) < dist(r, &centroids[best]) {
                    best = i;
                }
            }
            best
        })
        .collect()
}

/// Eigenpairs of the sample covariance from nalgebra, sorted by
/// decreasing eigenvalue.
pub fn pca_oracle(x: &FeatureMatrix) -> (Vec<f64>, Vec<Vec<f64>>) {
    let (n, d) = (x.n_samples(), x.dim());
    let data = nalgebra::DMatrix::from_row_slice(n, d, x.as_matrix().as_slice());
    let mean = data.row_mean();
    let mut centered = data.clone();
    for mut row in centered.row_iter_mut() {
        row -= &mean;
    }
    let cov = centered.transpose() * &centered / (n as f64 - 1.0);
    let eig = nalgebra::SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order.iter().map(|&i| eig.eigenvectors.column(i).iter().copied().collect()).collect();
    (values, vectors)
}

/// Sample covariance of the rows of `y`, computed directly.
pub fn covariance_oracle(y: &FeatureMatrix) -> Vec<Vec<f64>> {
    let (n, d) = (y.n_samples(), y.dim());
    let mean: Vec<f64> = (0..d).map(|k| y.iter_rows().map(|r| r[k]).sum::<f64>() / n as f64).collect();
    let mut c = vec![vec![0.0; d]; d];
    for r in y.iter_rows() {
        for a in 0..d {
            for b in 0..d {
                c[a][b] += (r[a] - mean[a]) * (r[b] - mean[b]) / (n as f64 - 1.0);
            }
        }
    }
    c
}
