use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::EmbeddingIndex;
use crate::linalg::dot;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Purpose,
    Mechanism,
    /// `[p; m]` renormalized to unit length.
    Concat,
}

impl Representation {
    pub fn name(self) -> &'static str {
        match self {
            Representation::Purpose => "purpose",
            Representation::Mechanism => "mechanism",
            Representation::Concat => "concat",
        }
    }
}

/// Anything that can score an unordered product pair.
pub trait PairScorer {
    fn score(&self, a: &str, b: &str) -> Option<f64>;
}

/// Scores pairs of an [`EmbeddingIndex`] on demand.
#[derive(Debug, Clone)]
pub struct IndexScorer<'a> {
    index: &'a EmbeddingIndex,
    representation: Representation,
}

impl<'a> IndexScorer<'a> {
    pub fn new(index: &'a EmbeddingIndex, representation: Representation) -> Self {
        Self { index, representation }
    }

    pub fn score_positions(&self, i: usize, j: usize) -> f64 {
        let ix = self.index;
        match self.representation {
            Representation::Purpose => dot(ix.purpose(i), ix.purpose(j)),
            Representation::Mechanism => dot(ix.mechanism(i), ix.mechanism(j)),
            // [p; m] / √2 for unit p and m
            Representation::Concat => 0.5 * (dot(ix.purpose(i), ix.purpose(j)) + dot(ix.mechanism(i), ix.mechanism(j))),
        }
    }
}

impl PairScorer for IndexScorer<'_> {
    fn score(&self, a: &str, b: &str) -> Option<f64> {
        Some(self.score_positions(self.index.position(a)?, self.index.position(b)?))
    }
}

/// Dense symmetric table of pair scores.
#[derive(Debug, Clone, PartialEq)]
pub struct PairScores {
    ids: Vec<String>,
    positions: BTreeMap<String, usize>,
    scores: Vec<f64>,
}

impl PairScores {
    pub fn from_fn(ids: Vec<String>, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let n = ids.len();
        let mut scores = vec![0.0; n * n];
        for i in 0..n {
            scores[i * n + i] = f(i, i);
            for j in i + 1..n {
                let s = f(i, j);
                scores[i * n + j] = s;
                scores[j * n + i] = s;
            }
        }
        let positions = ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();
        Self { ids, positions, scores }
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.scores[i * self.ids.len() + j]
    }

    /// Every unordered pair `(i < j)` with its score; `n(n−1)/2` items.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str, f64)> + '_ {
        let n = self.ids.len();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (self.ids[i].as_str(), self.ids[j].as_str(), self.get(i, j))))
    }
}

impl PairScorer for PairScores {
    fn score(&self, a: &str, b: &str) -> Option<f64> {
        Some(self.get(*self.positions.get(a)?, *self.positions.get(b)?))
    }
}

/// All pair similarities under one representation.
pub fn pair_scores(index: &EmbeddingIndex, representation: Representation) -> PairScores {
    let scorer = IndexScorer::new(index, representation);
    PairScores::from_fn(index.ids().to_vec(), |i, j| scorer.score_positions(i, j))
}
