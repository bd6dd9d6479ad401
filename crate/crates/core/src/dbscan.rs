//! Density-based clustering used to recluster uncertain points when a
//! micro-cluster is split.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::distance;
use crate::matrix::FeatureMatrix;

/// DBSCAN assignment of a single point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Label {
    Cluster(usize),
    Noise,
}

impl Label {
    pub fn cluster(self) -> Option<usize> {
        match self {
            Label::Cluster(id) => Some(id),
            Label::Noise => None,
        }
    }
}

fn neighbours(points: &FeatureMatrix, i: usize, eps: f64) -> Vec<usize> {
    let p = points.row(i);
    (0..points.n_samples())
        .filter(|&j| distance(p, points.row(j)) <= eps)
        .collect()
}

/// Labels every point as a member of a density-connected cluster or noise.
///
/// A core point has at least `min_samples` points within `eps`, itself
/// included. Points are visited in index order, so cluster ids follow the
/// lowest-index core point of each cluster and a border point reachable
/// from several clusters joins the one created first.
pub fn dbscan(points: &FeatureMatrix, eps: f64, min_samples: usize) -> Result<Vec<Label>> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidConfig("dbscan eps must be > 0"));
    }
    if min_samples == 0 {
        return Err(Error::InvalidConfig("dbscan min_samples must be positive"));
    }
    let n = points.n_samples();
    let mut labels: Vec<Option<Label>> = vec![None; n];
    let mut next_id = 0;
    let mut queue = VecDeque::new();

    for i in 0..n {
        if labels[i].is_some() {
            continue;
        }
        let seeds = neighbours(points, i, eps);
        if seeds.len() < min_samples {
            labels[i] = Some(Label::Noise);
            continue;
        }
        let id = next_id;
        next_id += 1;
        labels[i] = Some(Label::Cluster(id));
        queue.extend(seeds.into_iter().filter(|&j| j != i));

        while let Some(q) = queue.pop_front() {
            match labels[q] {
                Some(Label::Cluster(_)) => continue,
                Some(Label::Noise) => {
                    // border point previously rejected as a seed
                    labels[q] = Some(Label::Cluster(id));
                    continue;
                }
                None => labels[q] = Some(Label::Cluster(id)),
            }
            let reach = neighbours(points, q, eps);
            if reach.len() >= min_samples {
                queue.extend(reach.into_iter().filter(|&j| !matches!(labels[j], Some(Label::Cluster(_)))));
            }
        }
    }
    Ok(labels.into_iter().map(|l| l.unwrap_or(Label::Noise)).collect())
}
