//! Inspiration sets: products close in purpose to a seed product but spread
//! out in mechanism.
//!
//! The pipeline clusters purpose vectors, keeps the most homogeneous
//! clusters, takes the member nearest each center as the seed and picks
//! mechanism-diverse cluster-mates with greedy MAX-MIN dispersion.

mod dispersion;
mod kmeans;
mod seeds;

use alloc::string::String;
use alloc::vec::Vec;

pub use dispersion::{
    average_pairwise_distance, maxavg_diversify, maxmin_diversify, min_pairwise_distance, PoolItem, Selection,
};
pub use kmeans::{
    assign_cosine, assign_euclidean, kmeans, kmeans_observed, PurposeClustering, DEFAULT_CLUSTERS, DEFAULT_MAX_ITERS,
};
pub use seeds::{pick_seed_clusters, SeedCluster};

use crate::linalg::dot;
use crate::retrieval::EmbeddingIndex;
use crate::Result;

pub const DEFAULT_SEEDS: usize = 12;
pub const DEFAULT_INSPIRATIONS: usize = 12;

/// Clusters the index's purpose vectors.
pub fn kmeans_purpose(index: &EmbeddingIndex, k: usize, seed: u64, max_iters: usize) -> Result<PurposeClustering> {
    kmeans(index.purpose_rows(), k, seed, max_iters)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InspirationConfig {
    /// Number of seeds (P).
    pub seeds: usize,
    /// Inspirations per seed (M).
    pub inspirations: usize,
    /// Cluster count (K).
    pub clusters: usize,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for InspirationConfig {
    fn default() -> Self {
        InspirationConfig {
            seeds: DEFAULT_SEEDS,
            inspirations: DEFAULT_INSPIRATIONS,
            clusters: DEFAULT_CLUSTERS,
            max_iters: DEFAULT_MAX_ITERS,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Inspiration {
    pub id: String,
    pub purpose_similarity: f64,
    pub mechanism_similarity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InspirationSet {
    pub seed_id: String,
    pub cluster: usize,
    pub homogeneity: f64,
    /// Cluster members other than the seed.
    pub pool: Vec<String>,
    /// In selection order.
    pub inspirations: Vec<Inspiration>,
    pub min_pairwise_distance: Option<f64>,
}

/// Runs clustering, seed picking and MAX-MIN selection over `index`.
pub fn generate_inspirations(index: &EmbeddingIndex, cfg: &InspirationConfig) -> Result<Vec<InspirationSet>> {
    let clustering = kmeans_purpose(index, cfg.clusters, cfg.seed, cfg.max_iters)?;
    inspirations_from_clustering(index, &clustering, cfg.seeds, cfg.inspirations)
}

pub fn inspirations_from_clustering(
    index: &EmbeddingIndex,
    clustering: &PurposeClustering,
    p: usize,
    m: usize,
) -> Result<Vec<InspirationSet>> {
    pick_seed_clusters(clustering, index, p, m)
        .into_iter()
        .map(|sc| {
            let pool_pos: Vec<usize> = sc.members.iter().copied().filter(|&i| i != sc.seed).collect();
            let pool: Vec<PoolItem<'_>> =
                pool_pos.iter().map(|&i| PoolItem { id: index.id(i), vector: index.mechanism(i) }).collect();
            let sel = maxmin_diversify(index.mechanism(sc.seed), &pool, m)?;
            let inspirations = sel
                .selected
                .iter()
                .map(|&j| {
                    let i = pool_pos[j];
                    Inspiration {
                        id: index.id(i).into(),
                        purpose_similarity: dot(index.purpose(sc.seed), index.purpose(i)),
                        mechanism_similarity: dot(index.mechanism(sc.seed), index.mechanism(i)),
                    }
                })
                .collect();
            Ok(InspirationSet {
                seed_id: index.id(sc.seed).into(),
                cluster: sc.cluster,
                homogeneity: sc.homogeneity,
                pool: pool_pos.iter().map(|&i| index.id(i).into()).collect(),
                inspirations,
                min_pairwise_distance: sel.min_pairwise_distance,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn single_seed_single_inspiration() {
        // two tight purpose groups; mechanism varies inside group 0
        let ids = ["a", "b", "c", "d", "e"].iter().map(|s| String::from(*s)).collect();
        let purpose = vec![vec![1.0, 0.0], vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 1.0]];
        let mechanism = vec![vec![1.0, 0.0], vec![0.8, 0.6], vec![-1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let index = EmbeddingIndex::new(ids, purpose, mechanism).unwrap();
        let cfg = InspirationConfig { seeds: 1, inspirations: 1, clusters: 2, max_iters: 50, seed: 4 };
        let sets = generate_inspirations(&index, &cfg).unwrap();
        assert_eq!(sets.len(), 1);
        let s = &sets[0];
        // zero-MSE clusters tie; the one whose seed id is smaller ("a") wins
        assert_eq!(s.seed_id, "a");
        assert_eq!(s.inspirations.len(), 1);
        assert_eq!(s.inspirations[0].id, "c");
        assert_eq!(s.inspirations[0].mechanism_similarity, -1.0);
        assert_eq!(s.min_pairwise_distance, None);
    }
}
