//! Lloyd's k-means on unit vectors with renormalized centers.
//!
//! For unit `u` and unit `c`, `‖u − c‖² = 2 − 2 u·c`, so assigning by
//! squared Euclidean distance picks the same center as assigning by largest
//! cosine. Centers are renormalized after each mean update to keep that
//! equivalence exact.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{axpy, dot, normalized, squared_distance};
use crate::{Error, Result};

pub const DEFAULT_CLUSTERS: usize = 50;
pub const DEFAULT_MAX_ITERS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct PurposeClustering {
    pub k: usize,
    /// Cluster of each point, aligned with the input rows.
    pub assignments: Vec<usize>,
    pub centers: Vec<Vec<f64>>,
    /// Mean squared Euclidean distance of members to their center; 0 when empty.
    pub homogeneity: Vec<f64>,
    pub sizes: Vec<usize>,
    pub iterations: usize,
    pub converged: bool,
}

impl PurposeClustering {
    pub fn members(&self, cluster: usize) -> impl Iterator<Item = usize> + '_ {
        self.assignments.iter().enumerate().filter(move |(_, &c)| c == cluster).map(|(i, _)| i)
    }
}

fn argmin_by(centers: &[Vec<f64>], mut key: impl FnMut(&[f64]) -> f64) -> usize {
    let mut best = 0;
    let mut best_v = f64::INFINITY;
    for (c, center) in centers.iter().enumerate() {
        let v = key(center);
        if v < best_v {
            best = c;
            best_v = v;
        }
    }
    best
}

/// Nearest center by squared Euclidean distance, lowest index on ties.
pub fn assign_euclidean(points: &[Vec<f64>], centers: &[Vec<f64>]) -> Vec<usize> {
    points.iter().map(|p| argmin_by(centers, |c| squared_distance(p, c))).collect()
}

/// Center with the largest cosine, lowest index on ties.
pub fn assign_cosine(points: &[Vec<f64>], centers: &[Vec<f64>]) -> Vec<usize> {
    points
        .iter()
        .map(|p| {
            argmin_by(centers, |c| {
                let cn = crate::linalg::norm(c);
                -dot(p, c) / cn
            })
        })
        .collect()
}

fn plus_plus_init(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut centers = vec![points[rng.gen_range(0..n)].clone()];
    let mut d2: Vec<f64> = points.iter().map(|p| squared_distance(p, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.gen_range(0.0..total);
            let mut pick = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                if target < w {
                    pick = i;
                    break;
                }
                target -= w;
            }
            pick
        } else {
            rng.gen_range(0..n)
        };
        centers.push(points[next].clone());
        for (d, p) in d2.iter_mut().zip(points) {
            *d = d.min(squared_distance(p, &centers[centers.len() - 1]));
        }
    }
    centers
}

/// Clusters unit vectors. `observe(iteration, centers, assignments)` is called
/// after every assignment step.
pub fn kmeans_observed(
    points: &[Vec<f64>],
    k: usize,
    seed: u64,
    max_iters: usize,
    mut observe: impl FnMut(usize, &[Vec<f64>], &[usize]),
) -> Result<PurposeClustering> {
    let n = points.len();
    if k == 0 {
        return Err(Error::InvalidConfig("cluster count must be positive".into()));
    }
    if n < k {
        return Err(Error::TooFewPoints { needed: k, found: n });
    }
    let dim = points[0].len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers = plus_plus_init(points, k, &mut rng);
    let mut assignments: Vec<usize> = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < max_iters.max(1) {
        let next = assign_euclidean(points, &centers);
        observe(iterations, &centers, &next);
        iterations += 1;
        if next == assignments {
            converged = true;
            break;
        }
        assignments = next;

        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &c) in points.iter().zip(&assignments) {
            axpy(1.0, p, &mut sums[c]);
            counts[c] += 1;
        }
        let mut reseeded: Vec<usize> = Vec::new();
        for c in 0..k {
            if counts[c] > 0 {
                if let Ok(u) = normalized(&sums[c]) {
                    centers[c] = u;
                }
                continue;
            }
            // empty cluster: move it onto the point farthest from its center
            let far = (0..n)
                .filter(|i| !reseeded.contains(i))
                .map(|i| (i, squared_distance(&points[i], &centers[assignments[i]])))
                .fold(None, |best: Option<(usize, f64)>, (i, d)| match best {
                    Some((_, bd)) if bd >= d => best,
                    _ => Some((i, d)),
                });
            if let Some((i, _)) = far {
                reseeded.push(i);
                centers[c] = points[i].clone();
            }
        }
    }

    let mut sizes = vec![0usize; k];
    let mut homogeneity = vec![0.0; k];
    for (p, &c) in points.iter().zip(&assignments) {
        sizes[c] += 1;
        homogeneity[c] += squared_distance(p, &centers[c]);
    }
    for c in 0..k {
        if sizes[c] > 0 {
            homogeneity[c] /= sizes[c] as f64;
        }
    }
    Ok(PurposeClustering { k, assignments, centers, homogeneity, sizes, iterations, converged })
}

pub fn kmeans(points: &[Vec<f64>], k: usize, seed: u64, max_iters: usize) -> Result<PurposeClustering> {
    kmeans_observed(points, k, seed, max_iters, |_, _, _| {})
}
