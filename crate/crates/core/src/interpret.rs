//! Explaining predicted vectors in terms of vocabulary words.
//!
//! Two views are offered: the `k` vocabulary words with highest cosine
//! similarity, and a sparse code found by Orthogonal Matching Pursuit over
//! the unit-normalized word vectors. OMP re-fits every selected coefficient
//! by least squares at each iteration; the fit is kept in an incrementally
//! built orthonormal basis of the selected atoms.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::Label;
use crate::linalg::{self, axpy, dot, norm};
use crate::vectors::WordVectorStore;
use crate::{Error, Result};

pub const DEFAULT_NEAREST: usize = 10;
pub const DEFAULT_SPARSITY: usize = 10;
pub const DEFAULT_DISPLAY_THRESHOLD: f64 = 0.1;
/// OMP stops once the residual norm falls below this.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// An atom whose component orthogonal to the current support is shorter
/// than this is treated as linearly dependent.
const DEPENDENCE_TOL: f64 = 1e-10;

fn check_query(v: &[f64], store: &WordVectorStore) -> Result<f64> {
    if store.is_empty() {
        return Err(Error::EmptyDictionary);
    }
    if v.len() != store.dim() {
        return Err(Error::DimensionMismatch { expected: store.dim(), found: v.len() });
    }
    let n = norm(v);
    if n == 0.0 || !n.is_finite() {
        return Err(Error::ZeroVector);
    }
    Ok(n)
}

/// Top `k` vocabulary words by cosine similarity to `v`.
pub fn nearest_words(v: &[f64], store: &WordVectorStore, k: usize) -> Result<Vec<(String, f64)>> {
    let vn = check_query(v, store)?;
    let mut scored: Vec<(&str, f64)> = store
        .iter()
        .filter_map(|(t, w)| {
            let wn = norm(w);
            (wn > 0.0).then(|| (t, dot(v, w) / (vn * wn)))
        })
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    scored.truncate(k);
    Ok(scored.into_iter().map(|(t, s)| (t.to_string(), s)).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseCode {
    /// `(token, coefficient)` against unit-norm atoms, in selection order.
    pub code: Vec<(String, f64)>,
    /// `‖v − Σ α_j a_j‖₂` for the final code.
    pub residual_norm: f64,
    /// Residual norm after each accepted atom.
    pub residual_history: Vec<f64>,
    /// Atoms that were selected but rejected as linearly dependent on the support.
    pub dropped: Vec<String>,
}

impl SparseCode {
    /// Entries with `|α| ≥ threshold`.
    pub fn displayed(&self, threshold: f64) -> impl Iterator<Item = &(String, f64)> + '_ {
        self.code.iter().filter(move |(_, a)| a.abs() >= threshold)
    }
}

/// Greedy `‖a‖₀ ≤ sparsity` approximation of `v` by word vectors.
pub fn omp_sparse_code(v: &[f64], store: &WordVectorStore, sparsity: usize) -> Result<SparseCode> {
    check_query(v, store)?;
    let dim = store.dim();
    let atoms: Vec<(usize, Vec<f64>)> = (0..store.len())
        .filter_map(|i| linalg::normalized(store.row(i)).ok().map(|a| (i, a)))
        .collect();
    if atoms.is_empty() {
        return Err(Error::EmptyDictionary);
    }

    let mut excluded = vec![false; atoms.len()];
    let mut support: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    // column j of the triangular factor: atom_j = Σ_i r[j][i] · basis_i
    let mut r_cols: Vec<Vec<f64>> = Vec::new();
    let mut residual = v.to_vec();
    let mut history = Vec::new();
    let mut dropped = Vec::new();

    while support.len() < sparsity && norm(&residual) >= RESIDUAL_TOL {
        let best = atoms
            .iter()
            .enumerate()
            .filter(|(j, _)| !excluded[*j])
            .map(|(j, (i, a))| (j, *i, dot(&residual, a).abs()))
            .max_by(|a, b| a.2.total_cmp(&b.2).then_with(|| store.token(b.1).cmp(store.token(a.1))));
        let Some((j, token_idx, corr)) = best else { break };
        if corr == 0.0 {
            break;
        }
        excluded[j] = true;

        let atom = &atoms[j].1;
        let mut w = atom.clone();
        let mut coeffs = vec![0.0; basis.len()];
        // two Gram-Schmidt passes for numerical orthogonality
        for _ in 0..2 {
            for (c, q) in coeffs.iter_mut().zip(&basis) {
                let proj = dot(q, &w);
                *c += proj;
                axpy(-proj, q, &mut w);
            }
        }
        let wn = norm(&w);
        if wn < DEPENDENCE_TOL {
            dropped.push(store.token(token_idx).to_string());
            continue;
        }
        w.iter_mut().for_each(|x| *x /= wn);
        coeffs.push(wn);
        basis.push(w);
        r_cols.push(coeffs);
        support.push(j);

        residual.copy_from_slice(v);
        for q in &basis {
            axpy(-dot(q, v), q, &mut residual);
        }
        history.push(norm(&residual));
    }

    // back-substitution for R α = Qᵀ v
    let k = support.len();
    let qtv: Vec<f64> = basis.iter().map(|q| dot(q, v)).collect();
    let mut alpha = vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = qtv[i];
        for (jj, a) in alpha.iter().enumerate().skip(i + 1) {
            s -= r_cols[jj][i] * a;
        }
        alpha[i] = s / r_cols[i][i];
    }

    let mut approx = vec![0.0; dim];
    for (&j, &a) in support.iter().zip(&alpha) {
        axpy(a, &atoms[j].1, &mut approx);
    }
    let residual_norm = libm::sqrt(linalg::squared_distance(v, &approx));
    let code = support
        .iter()
        .zip(alpha)
        .map(|(&j, a)| (store.token(atoms[j].0).to_string(), a))
        .collect();
    Ok(SparseCode { code, residual_norm, residual_history: history, dropped })
}

/// Both interpretations of one predicted vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpretation {
    pub vector_kind: Label,
    pub nearest_words: Vec<(String, f64)>,
    pub sparse: SparseCode,
    pub display_threshold: f64,
}

pub fn interpret(
    v: &[f64],
    kind: Label,
    store: &WordVectorStore,
    k: usize,
    sparsity: usize,
    display_threshold: f64,
) -> Result<Interpretation> {
    Ok(Interpretation {
        vector_kind: kind,
        nearest_words: nearest_words(v, store, k)?,
        sparse: omp_sparse_code(v, store, sparsity)?,
        display_threshold,
    })
}
