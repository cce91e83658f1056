//! Dual-metric analogy retrieval and its evaluation.
//!
//! Similarity is the dot product of unit vectors and distance is
//! `1 − similarity`, so distances lie in `[0, 2]`. The same convention is
//! used by the constrained queries, pair ranking and the ideation module.

mod baseline;
mod eval;
mod index;
mod keyword;
mod labels;
mod pairs;
mod query;

pub use baseline::{baseline_scores, BaselineMethod, BaselineScorer};
pub use eval::{evaluate, LevelMetrics, RankingResult, ScoredLabel, TABLE_LEVELS};
pub use index::EmbeddingIndex;
pub use keyword::{expand, keyword_search, lemma, KeywordHit};
pub use labels::{build_labels_from_search_log, pair_key, AnalogyPairLabel, Polarity, Provenance, SearchLogEntry, TOP_RESULTS_READ};
pub use pairs::{pair_scores, IndexScorer, PairScorer, PairScores, Representation};
pub use query::{
    query_same_mechanism_diff_purpose, query_same_purpose_diff_mechanism, Candidate, QueryOutcome, QueryStatus, Seed,
    DEFAULT_FAR_THRESHOLD,
};

use crate::linalg::{dot, norm, UNIT_NORM_TOL};
use crate::{Error, Result};

fn check_unit(v: &[f64]) -> Result<()> {
    let n = norm(v);
    if (n - 1.0).abs() > UNIT_NORM_TOL {
        return Err(Error::NotUnitNorm(n));
    }
    Ok(())
}

/// Dot product of two unit vectors.
pub fn similarity(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: u.len(), found: v.len() });
    }
    check_unit(u)?;
    check_unit(v)?;
    Ok(dot(u, v))
}

/// `1 − similarity(u, v)`
pub fn distance(u: &[f64], v: &[f64]) -> Result<f64> {
    similarity(u, v).map(|s| 1.0 - s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn similarity_extremes() {
        let u = [0.6, 0.8];
        assert!((similarity(&u, &u).unwrap() - 1.0).abs() < 1e-15);
        assert!(distance(&u, &u).unwrap().abs() < 1e-15);
        assert_eq!(similarity(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert_eq!(distance(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        assert_eq!(similarity(&[1.0, 0.0], &[-1.0, 0.0]).unwrap(), -1.0);
        assert_eq!(distance(&[1.0, 0.0], &[-1.0, 0.0]).unwrap(), 2.0);
    }

    #[test]
    fn non_unit_rejected() {
        assert!(matches!(similarity(&[1.0, 1.0], &[1.0, 0.0]), Err(Error::NotUnitNorm(_))));
        assert!(similarity(&[1.0 + 5e-7, 0.0], &[1.0, 0.0]).is_ok());
    }
}
