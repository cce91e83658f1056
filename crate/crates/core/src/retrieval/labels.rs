//! Analogy labels from search sessions.
//!
//! Workers search for analogies to a seed and tag matches. A result tagged
//! by a strict majority of the seed's workers becomes a positive pair.
//! Untagged results ranked above the lowest-ranked majority match, within
//! the top five results, are treated as implicitly rejected negatives.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

/// Only this many top results are assumed to have been read.
pub const TOP_RESULTS_READ: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchLogEntry {
    pub seed_id: String,
    /// Result ids in ranked order.
    pub results: Vec<String>,
    /// Ids tagged as matches, one set per worker.
    pub worker_matches: Vec<BTreeSet<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Polarity {
    Negative,
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Matched,
    ImplicitlyRejected,
    /// Ground truth from a generated corpus.
    Generated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalogyPairLabel {
    pub seed_id: String,
    pub candidate_id: String,
    pub label: Polarity,
    pub provenance: Provenance,
}

impl AnalogyPairLabel {
    pub fn key(&self) -> (&str, &str) {
        pair_key(&self.seed_id, &self.candidate_id)
    }

    pub fn is_positive(&self) -> bool {
        self.label == Polarity::Positive
    }
}

/// Order-free identity of a pair.
pub fn pair_key<'a>(a: &'a str, b: &'a str) -> (&'a str, &'a str) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Builds the label set; a pair labeled both ways resolves to positive.
/// Output is sorted by pair key.
pub fn build_labels_from_search_log(entries: &[SearchLogEntry]) -> Vec<AnalogyPairLabel> {
    let mut labels: BTreeMap<(String, String), AnalogyPairLabel> = BTreeMap::new();
    for entry in entries {
        if entry.results.is_empty() {
            log::warn!("search log entry for seed {:?} has no results; skipped", entry.seed_id);
            continue;
        }
        if entry.worker_matches.is_empty() {
            log::warn!("search log entry for seed {:?} has no workers; skipped", entry.seed_id);
            continue;
        }
        let workers = entry.worker_matches.len();
        let mut votes: BTreeMap<&str, usize> = BTreeMap::new();
        for m in &entry.worker_matches {
            for id in m {
                *votes.entry(id.as_str()).or_insert(0) += 1;
            }
        }
        let majority: BTreeSet<&str> =
            votes.into_iter().filter(|&(_, v)| 2 * v > workers).map(|(id, _)| id).collect();

        let mut add = |candidate: &str, label: Polarity, provenance: Provenance| {
            if candidate == entry.seed_id {
                return;
            }
            let (a, b) = pair_key(&entry.seed_id, candidate);
            let new = AnalogyPairLabel {
                seed_id: entry.seed_id.clone(),
                candidate_id: candidate.into(),
                label,
                provenance,
            };
            labels
                .entry((a.into(), b.into()))
                .and_modify(|old| {
                    if new.label > old.label {
                        *old = new.clone();
                    }
                })
                .or_insert(new);
        };

        for id in &majority {
            add(id, Polarity::Positive, Provenance::Matched);
        }
        let lowest_match = entry.results.iter().rposition(|r| majority.contains(r.as_str()));
        if let Some(last) = lowest_match {
            for r in entry.results.iter().take(last.min(TOP_RESULTS_READ)) {
                if !majority.contains(r.as_str()) {
                    add(r, Polarity::Negative, Provenance::ImplicitlyRejected);
                }
            }
        }
    }
    labels.into_values().collect()
}
