use alloc::string::String;
use alloc::vec::Vec;

use super::EmbeddingIndex;
use crate::linalg::dot;
use crate::{Error, Result};

/// Default minimum mechanism distance for "far" mechanism queries.
pub const DEFAULT_FAR_THRESHOLD: f64 = 0.6;

/// The product a query starts from.
#[derive(Debug, Clone, Copy)]
pub enum Seed<'a> {
    /// A product already in the index; it is excluded from the results.
    Id(&'a str),
    /// Unit-norm vectors for a product outside the index.
    Vectors { purpose: &'a [f64], mechanism: &'a [f64] },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub id: String,
    pub purpose_distance: f64,
    pub mechanism_distance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryStatus {
    Ok,
    /// No candidate satisfies the distance constraint at this threshold.
    Unsatisfiable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryOutcome {
    pub candidates: Vec<Candidate>,
    pub status: QueryStatus,
}

#[derive(Clone, Copy)]
enum Axis {
    Purpose,
    Mechanism,
}

fn constrained_query(index: &EmbeddingIndex, seed: Seed<'_>, threshold: f64, rank_by: Axis) -> Result<QueryOutcome> {
    if threshold.is_nan() {
        return Err(Error::InvalidThreshold(threshold));
    }
    let (seed_pos, sp, sm) = match seed {
        Seed::Id(id) => {
            let i = index.position(id).ok_or_else(|| Error::UnknownId(id.into()))?;
            (Some(i), index.purpose(i), index.mechanism(i))
        }
        Seed::Vectors { purpose, mechanism } => {
            super::check_unit(purpose)?;
            super::check_unit(mechanism)?;
            (None, purpose, mechanism)
        }
    };
    let mut candidates: Vec<Candidate> = (0..index.len())
        .filter(|&i| Some(i) != seed_pos)
        .map(|i| Candidate {
            id: index.id(i).into(),
            purpose_distance: 1.0 - dot(sp, index.purpose(i)),
            mechanism_distance: 1.0 - dot(sm, index.mechanism(i)),
        })
        .filter(|c| match rank_by {
            Axis::Purpose => c.mechanism_distance >= threshold,
            Axis::Mechanism => c.purpose_distance >= threshold,
        })
        .collect();
    candidates.sort_by(|a, b| {
        let (x, y) = match rank_by {
            Axis::Purpose => (a.purpose_distance, b.purpose_distance),
            Axis::Mechanism => (a.mechanism_distance, b.mechanism_distance),
        };
        x.total_cmp(&y).then_with(|| a.id.cmp(&b.id))
    });
    let status = if candidates.is_empty() { QueryStatus::Unsatisfiable } else { QueryStatus::Ok };
    Ok(QueryOutcome { candidates, status })
}

/// Candidates with mechanism distance `≥ threshold`, nearest purpose first.
pub fn query_same_purpose_diff_mechanism(
    index: &EmbeddingIndex,
    seed: Seed<'_>,
    mechanism_threshold: f64,
) -> Result<QueryOutcome> {
    constrained_query(index, seed, mechanism_threshold, Axis::Purpose)
}

/// Candidates with purpose distance `≥ threshold`, nearest mechanism first.
pub fn query_same_mechanism_diff_purpose(
    index: &EmbeddingIndex,
    seed: Seed<'_>,
    purpose_threshold: f64,
) -> Result<QueryOutcome> {
    constrained_query(index, seed, purpose_threshold, Axis::Mechanism)
}
