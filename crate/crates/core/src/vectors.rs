//! Word vectors, corpus TF-IDF statistics and annotation targets.
//!
//! A target vector summarises what annotators marked as the purpose (or the
//! mechanism) of a product. All tokens flagged for a label are pooled across
//! annotators with multiplicity, weighted by TF-IDF over that pooled sequence,
//! and the top `D` distinct tokens that have a word vector are averaged with
//! those weights. The result is scaled to unit length.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::corpus::{AnnotationSet, Label, ProductDoc};
use crate::linalg;
use crate::{Error, Result};

/// Number of top-weighted tokens averaged into a target.
pub const DEFAULT_TOP_TOKENS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct WordVectorStore {
    dim: usize,
    tokens: Vec<String>,
    index: BTreeMap<String, usize>,
    data: Vec<f64>,
    doc_freq: BTreeMap<String, usize>,
    n_docs: usize,
}

impl WordVectorStore {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            tokens: Vec::new(),
            index: BTreeMap::new(),
            data: Vec::new(),
            doc_freq: BTreeMap::new(),
            n_docs: 0,
        }
    }

    /// Builds a store from `(token, vector)` pairs. The dimension is taken
    /// from the first entry; later duplicates of a token are ignored.
    pub fn from_entries<I, S>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: Into<String>,
    {
        let mut store: Option<Self> = None;
        for (token, v) in entries {
            let s = store.get_or_insert_with(|| Self::new(v.len()));
            s.insert(token, v)?;
        }
        match store {
            Some(s) if !s.is_empty() && s.dim > 0 => Ok(s),
            _ => Err(Error::NoVectors),
        }
    }

    /// Adds a vector. Returns `Ok(false)` if the token was already present.
    pub fn insert(&mut self, token: impl Into<String>, vector: Vec<f64>) -> Result<bool> {
        if vector.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: vector.len() });
        }
        let token = token.into();
        if self.index.contains_key(&token) {
            return Ok(false);
        }
        self.index.insert(token.clone(), self.tokens.len());
        self.tokens.push(token);
        self.data.extend_from_slice(&vector);
        Ok(true)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    pub fn vector(&self, token: &str) -> Option<&[f64]> {
        self.index.get(token).map(|&i| self.row(i))
    }

    pub fn token(&self, i: usize) -> &str {
        &self.tokens[i]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// `(token, vector)` pairs in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> + '_ {
        self.tokens.iter().enumerate().map(|(i, t)| (t.as_str(), self.row(i)))
    }

    /// Copy of the store holding only tokens in `vocab`.
    pub fn restricted_to(&self, vocab: &BTreeSet<String>) -> Result<Self> {
        let mut out = Self::new(self.dim);
        for (t, v) in self.iter().filter(|(t, _)| vocab.contains(*t)) {
            out.insert(t, v.to_vec())?;
        }
        out.doc_freq = self.doc_freq.clone();
        out.n_docs = self.n_docs;
        if out.is_empty() {
            return Err(Error::NoVectors);
        }
        Ok(out)
    }

    /// Recomputes document frequencies over `docs`, covering every corpus
    /// token whether or not it has a vector.
    pub fn set_document_frequencies(&mut self, docs: &[ProductDoc]) {
        self.doc_freq.clear();
        for d in docs {
            let distinct: BTreeSet<&str> = d.tokens.iter().map(String::as_str).collect();
            for t in distinct {
                *self.doc_freq.entry(t.to_string()).or_insert(0) += 1;
            }
        }
        self.n_docs = docs.len();
    }

    pub fn document_frequency(&self, token: &str) -> usize {
        self.doc_freq.get(token).copied().unwrap_or(0)
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    /// Smoothed inverse document frequency, `ln((1+N)/(1+df)) + 1`.
    pub fn idf(&self, token: &str) -> f64 {
        let n = self.n_docs as f64;
        let df = self.document_frequency(token) as f64;
        libm::log((1.0 + n) / (1.0 + df)) + 1.0
    }
}

/// Raw-count TF times smoothed IDF for every distinct token in `tokens`.
pub fn tfidf_weights<'a, I>(tokens: I, store: &WordVectorStore) -> BTreeMap<String, f64>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for t in tokens {
        *counts.entry(t).or_insert(0) += 1;
    }
    counts
        .into_iter()
        .map(|(t, c)| (t.to_string(), c as f64 * store.idf(t)))
        .collect()
}

/// Orders `(token, weight)` by weight descending, then token ascending.
pub(crate) fn sort_by_weight(weights: &mut [(String, f64)]) {
    weights.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
}

/// Unit-length weighted average of the top-`top_d` in-vocabulary tokens.
pub(crate) fn weighted_average(
    weights: BTreeMap<String, f64>,
    store: &WordVectorStore,
    top_d: usize,
) -> Option<(Vec<f64>, Vec<(String, f64)>)> {
    let mut ranked: Vec<(String, f64)> = weights.into_iter().filter(|(t, _)| store.contains(t)).collect();
    sort_by_weight(&mut ranked);
    ranked.truncate(top_d);
    if ranked.is_empty() {
        return None;
    }
    let mut acc = alloc::vec![0.0; store.dim()];
    for (t, w) in &ranked {
        linalg::axpy(*w, store.vector(t).expect("filtered to vocabulary"), &mut acc);
    }
    let v = linalg::normalized(&acc).ok()?;
    Some((v, ranked))
}

/// A unit-norm target and the tokens that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Target {
    pub vector: Vec<f64>,
    pub contributing: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetPair {
    pub product_id: String,
    pub purpose: Target,
    pub mechanism: Target,
}

/// Builds the purpose or mechanism target for one document.
pub fn build_target(
    annotations: &AnnotationSet,
    doc: &ProductDoc,
    label: Label,
    store: &WordVectorStore,
    top_d: usize,
) -> Result<Target> {
    if top_d == 0 {
        return Err(Error::InvalidConfig("top token count must be at least 1".into()));
    }
    if annotations.token_len() != doc.len() {
        return Err(Error::LengthMismatch { expected: doc.len(), found: annotations.token_len() });
    }
    let pooled = annotations.flagged_tokens(doc, label);
    let weights = tfidf_weights(pooled.iter().copied(), store);
    let (vector, contributing) =
        weighted_average(weights, store, top_d).ok_or_else(|| Error::Untargetable(doc.id.clone()))?;
    Ok(Target { vector, contributing })
}

/// Both targets for a document; untargetable if either label is.
pub fn build_target_pair(
    annotations: &AnnotationSet,
    doc: &ProductDoc,
    store: &WordVectorStore,
    top_d: usize,
) -> Result<TargetPair> {
    Ok(TargetPair {
        product_id: doc.id.clone(),
        purpose: build_target(annotations, doc, Label::Purpose, store, top_d)?,
        mechanism: build_target(annotations, doc, Label::Mechanism, store, top_d)?,
    })
}
