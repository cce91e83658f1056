mod common;

use analogy_core::interpret::{nearest_words, omp_sparse_code};
use analogy_core::vectors::WordVectorStore;
use common::{dot, gaussian, orthonormal};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn store_from(atoms: &[Vec<f64>]) -> WordVectorStore {
    WordVectorStore::from_entries(atoms.iter().enumerate().map(|(i, a)| (format!("w{i:02}"), a.clone()))).unwrap()
}

#[test]
fn omp_recovers_sparse_codes_over_orthonormal_atoms() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let atoms = orthonormal(&mut rng, 32, 20);
        let store = store_from(&atoms);
        let support = sample(&mut rng, 20, 3).into_vec();
        let coeffs: Vec<f64> = (0..3).map(|_| rng.gen_range(0.5..2.0) * if rng.gen() { 1.0 } else { -1.0 }).collect();
        let mut v = vec![0.0; 32];
        for (&j, &c) in support.iter().zip(&coeffs) {
            v.iter_mut().zip(&atoms[j]).for_each(|(x, a)| *x += c * a);
        }
        let code = omp_sparse_code(&v, &store, 10).unwrap();
        assert_eq!(code.code.len(), 3, "stops once the residual vanishes");
        assert!(code.residual_norm < 1e-10);
        for (tok, a) in &code.code {
            let j: usize = tok[1..].parse().unwrap();
            // orthonormal atoms: the exact coefficient is the projection
            assert!((a - dot(&v, &atoms[j])).abs() < 1e-10);
            assert!(support.contains(&j));
        }
    }
}

#[test]
fn omp_residual_never_increases() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let atoms: Vec<Vec<f64>> = (0..40).map(|_| gaussian(&mut rng, 12)).collect();
    let store = store_from(&atoms);
    let v = gaussian(&mut rng, 12);
    let code = omp_sparse_code(&v, &store, 8).unwrap();
    assert_eq!(code.code.len(), 8);
    for w in code.residual_history.windows(2) {
        assert!(w[1] <= w[0] + 1e-12);
    }
    // least-squares residual is orthogonal to every selected atom
    let mut r = v.clone();
    for (tok, a) in &code.code {
        let u = common::unit(store.vector(tok).unwrap().to_vec());
        r.iter_mut().zip(&u).for_each(|(x, ui)| *x -= a * ui);
    }
    for (tok, _) in &code.code {
        assert!(dot(&r, store.vector(tok).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn nearest_words_match_a_full_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let atoms: Vec<Vec<f64>> = (0..30).map(|_| gaussian(&mut rng, 6)).collect();
    let store = store_from(&atoms);
    let v = common::random_unit(&mut rng, 6);
    let mut oracle: Vec<(String, f64)> = atoms
        .iter()
        .enumerate()
        .map(|(i, a)| (format!("w{i:02}"), dot(&v, a) / dot(a, a).sqrt()))
        .collect();
    oracle.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let got = nearest_words(&v, &store, 7).unwrap();
    assert_eq!(got.len(), 7);
    for ((gt, gs), (ot, os)) in got.iter().zip(&oracle) {
        assert_eq!(gt, ot);
        assert!((gs - os).abs() < 1e-12);
    }
}
