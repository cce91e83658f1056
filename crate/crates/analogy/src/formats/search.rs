use std::collections::BTreeSet;
use std::path::Path;

use analogy_core::retrieval::{AnalogyPairLabel, Polarity, Provenance, SearchLogEntry};
use serde::{Deserialize, Serialize};

use super::{malformed, read_jsonl, write_jsonl};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchLogRecord {
    pub seed_id: String,
    /// Result ids in ranked order.
    pub results: Vec<String>,
    /// One set of matched ids per worker.
    pub worker_matches: Vec<BTreeSet<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelRecord {
    pub seed_id: String,
    pub candidate_id: String,
    pub label: String,
    pub provenance: String,
}

impl From<&AnalogyPairLabel> for LabelRecord {
    fn from(l: &AnalogyPairLabel) -> Self {
        LabelRecord {
            seed_id: l.seed_id.clone(),
            candidate_id: l.candidate_id.clone(),
            label: match l.label {
                Polarity::Positive => "positive",
                Polarity::Negative => "negative",
            }
            .into(),
            provenance: match l.provenance {
                Provenance::Matched => "matched",
                Provenance::ImplicitlyRejected => "implicitly_rejected",
                Provenance::Generated => "generated",
            }
            .into(),
        }
    }
}

pub fn load_search_log(path: &Path) -> Result<Vec<SearchLogEntry>> {
    Ok(read_jsonl::<SearchLogRecord>(path)?
        .into_iter()
        .map(|(_, r)| SearchLogEntry { seed_id: r.seed_id, results: r.results, worker_matches: r.worker_matches })
        .collect())
}

pub fn load_labels(path: &Path) -> Result<Vec<AnalogyPairLabel>> {
    read_jsonl::<LabelRecord>(path)?
        .into_iter()
        .map(|(n, r)| {
            let label = match r.label.as_str() {
                "positive" => Polarity::Positive,
                "negative" => Polarity::Negative,
                other => return Err(malformed(path, n, format!("unknown label {other:?}"))),
            };
            let provenance = match r.provenance.as_str() {
                "matched" => Provenance::Matched,
                "implicitly_rejected" => Provenance::ImplicitlyRejected,
                "generated" => Provenance::Generated,
                other => return Err(malformed(path, n, format!("unknown provenance {other:?}"))),
            };
            if r.seed_id == r.candidate_id {
                return Err(malformed(path, n, "a product cannot be labeled against itself"));
            }
            Ok(AnalogyPairLabel { seed_id: r.seed_id, candidate_id: r.candidate_id, label, provenance })
        })
        .collect()
}

pub fn save_labels(path: &Path, labels: &[AnalogyPairLabel]) -> Result<()> {
    let records: Vec<LabelRecord> = labels.iter().map(LabelRecord::from).collect();
    write_jsonl(path, &records)
}
