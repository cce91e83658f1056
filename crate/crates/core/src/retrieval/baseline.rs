//! Surface-similarity baselines.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::PairScorer;
use crate::corpus::ProductDoc;
use crate::linalg::dot;
use crate::vectors::{tfidf_weights, weighted_average, WordVectorStore};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineMethod {
    /// Cosine between full TF-IDF bags of words.
    TfidfCosine,
    /// Cosine between TF-IDF weighted averages of all word vectors.
    GloveTfidfAvg,
    /// As above, restricted to each document's top five TF-IDF tokens.
    GloveTfidfTop5,
}

impl BaselineMethod {
    pub const ALL: [BaselineMethod; 3] =
        [BaselineMethod::TfidfCosine, BaselineMethod::GloveTfidfAvg, BaselineMethod::GloveTfidfTop5];

    pub fn name(self) -> &'static str {
        match self {
            BaselineMethod::TfidfCosine => "tfidf-cosine",
            BaselineMethod::GloveTfidfAvg => "glove-tfidf-avg",
            BaselineMethod::GloveTfidfTop5 => "glove-tfidf-top5",
        }
    }
}

#[derive(Debug, Clone)]
enum DocVector {
    Sparse { weights: BTreeMap<String, f64>, norm: f64 },
    Dense(Vec<f64>),
    Missing,
}

/// Per-document vectors for one baseline; scores pairs on demand.
#[derive(Debug, Clone)]
pub struct BaselineScorer {
    method: BaselineMethod,
    positions: BTreeMap<String, usize>,
    vectors: Vec<DocVector>,
}

impl BaselineScorer {
    pub fn method(&self) -> BaselineMethod {
        self.method
    }

    pub fn score_positions(&self, i: usize, j: usize) -> f64 {
        match (&self.vectors[i], &self.vectors[j]) {
            (DocVector::Sparse { weights: a, norm: na }, DocVector::Sparse { weights: b, norm: nb }) => {
                let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
                let d: f64 = small.iter().filter_map(|(t, w)| large.get(t).map(|v| w * v)).sum();
                d / (na * nb)
            }
            (DocVector::Dense(a), DocVector::Dense(b)) => dot(a, b),
            _ => 0.0,
        }
    }
}

impl PairScorer for BaselineScorer {
    fn score(&self, a: &str, b: &str) -> Option<f64> {
        Some(self.score_positions(*self.positions.get(a)?, *self.positions.get(b)?))
    }
}

/// Prepares `method` over `docs`. IDF comes from `store`'s document frequencies.
pub fn baseline_scores(docs: &[ProductDoc], store: &WordVectorStore, method: BaselineMethod) -> BaselineScorer {
    let vectors = docs
        .iter()
        .map(|d| {
            let weights = tfidf_weights(d.tokens.iter().map(String::as_str), store);
            let averaged = |top| match weighted_average(weights.clone(), store, top) {
                Some((v, _)) => DocVector::Dense(v),
                None => {
                    log::warn!("{}: document {:?} has no in-vocabulary token; scores 0", method.name(), d.id);
                    DocVector::Missing
                }
            };
            match method {
                BaselineMethod::TfidfCosine => {
                    let norm = libm::sqrt(weights.values().map(|w| w * w).sum::<f64>());
                    DocVector::Sparse { weights, norm }
                }
                BaselineMethod::GloveTfidfAvg => averaged(usize::MAX),
                BaselineMethod::GloveTfidfTop5 => averaged(5),
            }
        })
        .collect();
    let positions = docs.iter().enumerate().map(|(i, d)| (d.id.clone(), i)).collect();
    BaselineScorer { method, positions, vectors }
}
