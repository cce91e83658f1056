//! Greedy MAX-MIN and MAX-AVG dispersion over mechanism vectors.
//!
//! Distance between two unit mechanism vectors is `1 − u·v`. All ties are
//! broken by product id.

use alloc::string::String;
use alloc::vec::Vec;

use crate::linalg::dot;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PoolItem<'a> {
    pub id: &'a str,
    pub vector: &'a [f64],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    /// Positions in the pool, in selection order.
    pub selected: Vec<usize>,
    pub ids: Vec<String>,
    /// Smallest pairwise distance among the selection; `None` below two items.
    pub min_pairwise_distance: Option<f64>,
}

#[inline]
fn mech_distance(a: &[f64], b: &[f64]) -> f64 {
    1.0 - dot(a, b)
}

/// Smallest pairwise `1 − u·v` over `vectors`.
pub fn min_pairwise_distance<'a>(vectors: impl IntoIterator<Item = &'a [f64]>) -> Option<f64> {
    let v: Vec<&[f64]> = vectors.into_iter().collect();
    let mut best: Option<f64> = None;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let d = mech_distance(v[i], v[j]);
            best = Some(best.map_or(d, |b: f64| b.min(d)));
        }
    }
    best
}

/// Position of the highest `score`; ties go to the smaller id.
fn argmax(pool: &[PoolItem<'_>], taken: &[bool], score: impl Fn(usize) -> f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for i in (0..pool.len()).filter(|&i| !taken[i]) {
        let s = score(i);
        best = match best {
            Some((b, bs)) if bs > s || (bs == s && pool[b].id <= pool[i].id) => Some((b, bs)),
            _ => Some((i, s)),
        };
    }
    best.map(|(i, _)| i)
}

fn check_pool(pool: &[PoolItem<'_>], m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidConfig("selection size must be positive".into()));
    }
    if pool.len() < m {
        return Err(Error::PoolTooSmall { pool: pool.len(), needed: m });
    }
    Ok(())
}

fn finish(pool: &[PoolItem<'_>], selected: Vec<usize>) -> Selection {
    Selection {
        ids: selected.iter().map(|&i| pool[i].id.into()).collect(),
        min_pairwise_distance: min_pairwise_distance(selected.iter().map(|&i| pool[i].vector)),
        selected,
    }
}

/// GMM: start from the member farthest from `seed`, then repeatedly add the
/// candidate whose distance to its nearest selected item is largest.
pub fn maxmin_diversify(seed: &[f64], pool: &[PoolItem<'_>], m: usize) -> Result<Selection> {
    check_pool(pool, m)?;
    let mut taken = alloc::vec![false; pool.len()];
    let first = argmax(pool, &taken, |i| mech_distance(seed, pool[i].vector)).expect("pool non-empty");
    taken[first] = true;
    let mut selected = alloc::vec![first];
    let mut nearest: Vec<f64> = pool.iter().map(|p| mech_distance(p.vector, pool[first].vector)).collect();
    while selected.len() < m {
        let next = argmax(pool, &taken, |i| nearest[i]).expect("pool has m members");
        taken[next] = true;
        selected.push(next);
        for (d, p) in nearest.iter_mut().zip(pool) {
            *d = d.min(mech_distance(p.vector, pool[next].vector));
        }
    }
    Ok(finish(pool, selected))
}

/// Greedy MAX-AVG: start from the member with the largest summed distance to
/// the rest of the pool, then add the candidate with the largest summed
/// distance to the current selection.
pub fn maxavg_diversify(pool: &[PoolItem<'_>], m: usize) -> Result<Selection> {
    check_pool(pool, m)?;
    let mut taken = alloc::vec![false; pool.len()];
    let first = argmax(pool, &taken, |i| pool.iter().map(|q| mech_distance(pool[i].vector, q.vector)).sum())
        .expect("pool non-empty");
    taken[first] = true;
    let mut selected = alloc::vec![first];
    let mut summed: Vec<f64> = pool.iter().map(|p| mech_distance(p.vector, pool[first].vector)).collect();
    while selected.len() < m {
        let next = argmax(pool, &taken, |i| summed[i]).expect("pool has m members");
        taken[next] = true;
        selected.push(next);
        for (s, p) in summed.iter_mut().zip(pool) {
            *s += mech_distance(p.vector, pool[next].vector);
        }
    }
    Ok(finish(pool, selected))
}

/// Mean pairwise distance of a selection; 0 below two items.
pub fn average_pairwise_distance<'a>(vectors: impl IntoIterator<Item = &'a [f64]>) -> f64 {
    let v: Vec<&[f64]> = vectors.into_iter().collect();
    let mut sum = 0.0;
    let mut count = 0usize;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            sum += mech_distance(v[i], v[j]);
            count += 1;
        }
    }
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::string::ToString;
    use alloc::vec;

    fn items<'a>(ids: &'a [String], vecs: &'a [Vec<f64>]) -> Vec<PoolItem<'a>> {
        ids.iter().zip(vecs).map(|(id, v)| PoolItem { id, vector: v }).collect()
    }

    fn ids(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("p{i:02}")).collect()
    }

    #[test]
    fn exhausting_the_pool() {
        let vecs = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.6, 0.8]];
        let names = ids(3);
        let sel = maxmin_diversify(&[1.0, 0.0], &items(&names, &vecs), 3).unwrap();
        let mut got = sel.selected.clone();
        got.sort();
        assert_eq!(got, vec![0, 1, 2]);
    }

    #[test]
    fn square_corners_give_a_diagonal() {
        let vecs = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![-1.0, 0.0, 0.0], vec![0.0, -1.0, 0.0]];
        let names = ids(4);
        let sel = maxmin_diversify(&[0.0, 0.0, 1.0], &items(&names, &vecs), 2).unwrap();
        assert_eq!(sel.min_pairwise_distance, Some(2.0));
        let (a, b) = (sel.selected[0], sel.selected[1]);
        assert_eq!((a + 2) % 4, b);
    }

    #[test]
    fn pool_too_small() {
        let vecs = vec![vec![1.0, 0.0]];
        let names = ids(1);
        assert_eq!(
            maxmin_diversify(&[1.0, 0.0], &items(&names, &vecs), 2),
            Err(Error::PoolTooSmall { pool: 1, needed: 2 })
        );
        assert!(maxavg_diversify(&items(&names, &vecs), 2).is_err());
    }

    #[test]
    fn maxavg_single_pick_is_farthest_on_average() {
        let vecs = vec![vec![1.0, 0.0], vec![0.8, 0.6], vec![0.6, 0.8], vec![-1.0, 0.0]];
        let names = ids(4);
        // summed distances: p00 0.2+0.4+2=2.6, p01 0.2+0.04+1.8=2.04, p02 0.4+0.04+1.6=2.04, p03 2+1.8+1.6=5.4
        let sel = maxavg_diversify(&items(&names, &vecs), 1).unwrap();
        assert_eq!(sel.ids, vec!["p03".to_string()]);
        assert_eq!(sel.min_pairwise_distance, None);
    }

    #[test]
    fn maxavg_identical_pair() {
        let vecs = vec![vec![0.6, 0.8], vec![0.6, 0.8]];
        let names = ids(2);
        let sel = maxavg_diversify(&items(&names, &vecs), 2).unwrap();
        assert_eq!(sel.selected.len(), 2);
        assert!(average_pairwise_distance(sel.selected.iter().map(|&i| vecs[i].as_slice())).abs() < 1e-15);
    }

    #[test]
    fn ties_by_id() {
        let vecs = vec![vec![0.0, 1.0], vec![0.0, 1.0]];
        let names = vec!["b".to_string(), "a".to_string()];
        let sel = maxmin_diversify(&[1.0, 0.0], &items(&names, &vecs), 1).unwrap();
        assert_eq!(sel.ids, vec!["a".to_string()]);
    }
}
