use alloc::vec::Vec;

use super::PurposeClustering;
use crate::linalg::squared_distance;
use crate::retrieval::EmbeddingIndex;

/// A surviving cluster and the member chosen as its seed.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedCluster {
    pub cluster: usize,
    pub homogeneity: f64,
    /// Index position of the seed product.
    pub seed: usize,
    /// Index positions of all members, seed included, in index order.
    pub members: Vec<usize>,
}

/// Drops clusters with fewer than `m + 1` members, ranks the rest by
/// ascending homogeneity and keeps the first `p`. Ranking ties go to the
/// cluster whose seed id sorts first, so the order does not depend on the
/// arbitrary cluster numbering.
pub fn pick_seed_clusters(
    clustering: &PurposeClustering,
    index: &EmbeddingIndex,
    p: usize,
    m: usize,
) -> Vec<SeedCluster> {
    let mut members: Vec<Vec<usize>> = alloc::vec![Vec::new(); clustering.k];
    for (i, &c) in clustering.assignments.iter().enumerate() {
        members[c].push(i);
    }
    let mut ranked: Vec<SeedCluster> = members
        .into_iter()
        .enumerate()
        .filter(|(_, ms)| ms.len() > m)
        .map(|(c, ms)| {
            let center = &clustering.centers[c];
            let seed = *ms
                .iter()
                .min_by(|&&a, &&b| {
                    squared_distance(index.purpose(a), center)
                        .total_cmp(&squared_distance(index.purpose(b), center))
                        .then_with(|| index.id(a).cmp(index.id(b)))
                })
                .expect("cluster has more than m members");
            SeedCluster { cluster: c, homogeneity: clustering.homogeneity[c], seed, members: ms }
        })
        .collect();
    ranked.sort_by(|a, b| a.homogeneity.total_cmp(&b.homogeneity).then_with(|| index.id(a.seed).cmp(index.id(b.seed))));
    if ranked.len() < p {
        log::warn!("only {} clusters have at least {} members; wanted {}", ranked.len(), m + 1, p);
    }
    ranked.truncate(p);
    ranked
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::String;
    use alloc::vec;

    fn index(n: usize) -> EmbeddingIndex {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let a = i as f64 * 0.1;
                vec![libm::cos(a), libm::sin(a)]
            })
            .collect();
        let ids = (0..n).map(|i| alloc::format!("p{i}")).collect();
        EmbeddingIndex::new(ids, rows.clone(), rows).unwrap()
    }

    fn clustering(assignments: Vec<usize>, centers: Vec<Vec<f64>>, homogeneity: Vec<f64>) -> PurposeClustering {
        let k = centers.len();
        let mut sizes = vec![0; k];
        for &c in &assignments {
            sizes[c] += 1;
        }
        PurposeClustering { k, assignments, centers, homogeneity, sizes, iterations: 1, converged: true }
    }

    #[test]
    fn cluster_of_exactly_m_is_pruned() {
        let idx = index(5);
        let c = clustering(vec![0, 0, 1, 1, 1], vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.0, 0.0]);
        let picked = pick_seed_clusters(&c, &idx, 5, 2);
        assert_eq!(picked.iter().map(|s| s.cluster).collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn smaller_mse_ranks_first() {
        let idx = index(6);
        let c = clustering(vec![0, 0, 0, 1, 1, 1], vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.4, 0.1]);
        let picked = pick_seed_clusters(&c, &idx, 2, 1);
        assert_eq!(picked[0].cluster, 1);
        assert_eq!(picked[1].cluster, 0);
    }

    #[test]
    fn member_at_center_is_seed() {
        let idx = index(4);
        let center = idx.purpose(2).to_vec();
        let c = clustering(vec![0; 4], vec![center], vec![0.01]);
        let picked = pick_seed_clusters(&c, &idx, 1, 1);
        assert_eq!(String::from(idx.id(picked[0].seed)), "p2");
    }

    #[test]
    fn relabeling_clusters_keeps_ranking() {
        let idx = index(6);
        let a = clustering(vec![0, 0, 0, 1, 1, 1], vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.2, 0.2]);
        let b = clustering(vec![1, 1, 1, 0, 0, 0], vec![vec![0.0, 1.0], vec![1.0, 0.0]], vec![0.2, 0.2]);
        let seeds = |c| pick_seed_clusters(c, &idx, 2, 1).iter().map(|s| s.seed).collect::<Vec<_>>();
        assert_eq!(seeds(&a), seeds(&b));
    }
}
