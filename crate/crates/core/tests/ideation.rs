mod common;

use analogy_core::ideation::{
    assign_cosine, generate_inspirations, kmeans_observed, maxmin_diversify, min_pairwise_distance, InspirationConfig,
    PoolItem,
};
use analogy_core::retrieval::EmbeddingIndex;
use common::{dot, orthonormal, random_unit, unit};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ids(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("i{i:02}")).collect()
}

fn brute_force_maxmin(vecs: &[Vec<f64>], m: usize) -> f64 {
    fn rec(vecs: &[Vec<f64>], m: usize, start: usize, chosen: &mut Vec<usize>, best: &mut f64) {
        if chosen.len() == m {
            let mut d = f64::INFINITY;
            for a in 0..m {
                for b in a + 1..m {
                    d = d.min(1.0 - dot(&vecs[chosen[a]], &vecs[chosen[b]]));
                }
            }
            *best = best.max(d);
            return;
        }
        for i in start..vecs.len() {
            chosen.push(i);
            rec(vecs, m, i + 1, chosen, best);
            chosen.pop();
        }
    }
    let mut best = f64::NEG_INFINITY;
    rec(vecs, m, 0, &mut Vec::new(), &mut best);
    best
}

proptest! {
    #[test]
    fn cosine_and_euclidean_assignments_agree(seed in 0u64..500, n in 8usize..60, k in 1usize..8, dim in 2usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<Vec<f64>> = (0..n).map(|_| random_unit(&mut rng, dim)).collect();
        let mut agree = true;
        kmeans_observed(&pts, k, seed, 50, |_, centers, assigned| {
            agree &= assign_cosine(&pts, centers) == assigned;
        })
        .unwrap();
        prop_assert!(agree);
    }

    #[test]
    fn maxmin_selection_is_valid(seed in 0u64..500, n in 2usize..12, m in 2usize..5) {
        prop_assume!(m <= n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vecs: Vec<Vec<f64>> = (0..n).map(|_| random_unit(&mut rng, 4)).collect();
        let names = ids(n);
        let pool: Vec<PoolItem> = names.iter().zip(&vecs).map(|(id, v)| PoolItem { id, vector: v }).collect();
        let sel = maxmin_diversify(&random_unit(&mut rng, 4), &pool, m).unwrap();
        let mut distinct = sel.selected.clone();
        distinct.sort();
        distinct.dedup();
        prop_assert_eq!(distinct.len(), m);
        let recomputed = min_pairwise_distance(sel.selected.iter().map(|&i| vecs[i].as_slice())).unwrap();
        prop_assert_eq!(sel.min_pairwise_distance, Some(recomputed));
        prop_assert!(recomputed <= brute_force_maxmin(&vecs, m) + 1e-12);
    }

    #[test]
    fn an_exact_duplicate_with_a_later_id_changes_nothing(seed in 0u64..500, n in 3usize..12, m in 1usize..4) {
        prop_assume!(m <= n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vecs: Vec<Vec<f64>> = (0..n).map(|_| random_unit(&mut rng, 5)).collect();
        let names = ids(n);
        let q = random_unit(&mut rng, 5);
        let dup = rng.gen_range(0..n);
        let mut pool: Vec<PoolItem> = names.iter().zip(&vecs).map(|(id, v)| PoolItem { id, vector: v }).collect();
        let before = maxmin_diversify(&q, &pool, m).unwrap();
        pool.push(PoolItem { id: "zz", vector: &vecs[dup] });
        let after = maxmin_diversify(&q, &pool, m).unwrap();
        prop_assert_eq!(before.ids, after.ids);
    }
}

#[test]
fn planted_purpose_groups_yield_one_seed_each() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let centers = orthonormal(&mut rng, 8, 4);
    let mut names = Vec::new();
    let mut purpose = Vec::new();
    let mut mechanism = Vec::new();
    let mut group = std::collections::BTreeMap::new();
    for (g, c) in centers.iter().enumerate() {
        for j in 0..10 {
            let id = format!("g{g}m{j}");
            let jitter: Vec<f64> = c.iter().map(|x| x + 0.02 * rng.gen_range(-1.0..1.0)).collect();
            purpose.push(unit(jitter));
            mechanism.push(random_unit(&mut rng, 8));
            group.insert(id.clone(), g);
            names.push(id);
        }
    }
    let index = EmbeddingIndex::new(names, purpose, mechanism).unwrap();
    let cfg = InspirationConfig { seeds: 4, inspirations: 3, clusters: 4, max_iters: 100, seed: 1 };
    let sets = generate_inspirations(&index, &cfg).unwrap();
    assert_eq!(sets.len(), 4);
    let mut seen: Vec<usize> = sets.iter().map(|s| group[&s.seed_id]).collect();
    seen.sort();
    assert_eq!(seen, vec![0, 1, 2, 3]);
    for s in &sets {
        assert_eq!(s.inspirations.len(), 3);
        assert_eq!(s.pool.len(), 9);
        for insp in &s.inspirations {
            assert_eq!(group[&insp.id], group[&s.seed_id]);
            assert_ne!(insp.id, s.seed_id);
        }
    }
    for w in sets.windows(2) {
        assert!(w[0].homogeneity <= w[1].homogeneity);
    }
}
