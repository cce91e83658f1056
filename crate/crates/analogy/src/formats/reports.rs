use std::fmt::Write as _;
use std::path::Path;

use analogy_core::encoder::EncodedDoc;
use analogy_core::interpret::Interpretation;
use analogy_core::retrieval::RankingResult;
use analogy_core::vectors::TargetPair;
use serde::{Deserialize, Serialize};

use super::{read_jsonl, write_jsonl};
use crate::error::{FormatError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetRecord {
    pub product_id: String,
    pub p: Vec<f64>,
    pub m: Vec<f64>,
    pub p_tokens: Vec<(String, f64)>,
    pub m_tokens: Vec<(String, f64)>,
}

impl From<&TargetPair> for TargetRecord {
    fn from(t: &TargetPair) -> Self {
        TargetRecord {
            product_id: t.product_id.clone(),
            p: t.purpose.vector.clone(),
            m: t.mechanism.vector.clone(),
            p_tokens: t.purpose.contributing.clone(),
            m_tokens: t.mechanism.contributing.clone(),
        }
    }
}

pub fn save_targets(path: &Path, targets: &[TargetPair]) -> Result<()> {
    let records: Vec<TargetRecord> = targets.iter().map(TargetRecord::from).collect();
    write_jsonl(path, &records)
}

pub fn load_targets(path: &Path) -> Result<Vec<TargetRecord>> {
    Ok(read_jsonl(path)?.into_iter().map(|(_, r)| r).collect())
}

/// Unit-normalized predictions for one product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodedRecord {
    pub product_id: String,
    pub p: Vec<f64>,
    pub m: Vec<f64>,
}

pub fn save_encoded(path: &Path, docs: &[EncodedDoc]) -> Result<()> {
    let records: Vec<EncodedRecord> = docs
        .iter()
        .map(|d| EncodedRecord { product_id: d.product_id.clone(), p: d.purpose_unit.clone(), m: d.mechanism_unit.clone() })
        .collect();
    write_jsonl(path, &records)
}

pub fn load_encoded(path: &Path) -> Result<Vec<EncodedRecord>> {
    Ok(read_jsonl(path)?.into_iter().map(|(_, r)| r).collect())
}

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| super::io_err(dir, e))?;
    }
    csv::Writer::from_path(path).map_err(|source| FormatError::Csv { path: path.to_path_buf(), source })
}

fn write_csv<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let csv_err = |source| FormatError::Csv { path: path.to_path_buf(), source };
    let mut w = csv_writer(path)?;
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| super::io_err(path, e))
}

pub fn save_train_log(path: &Path, epoch_losses: &[f64]) -> Result<()> {
    #[derive(Serialize)]
    struct Row {
        epoch: usize,
        mean_loss: f64,
    }
    write_csv(path, epoch_losses.iter().enumerate().map(|(epoch, &mean_loss)| Row { epoch, mean_loss }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRow {
    pub method: String,
    pub level_percent: u32,
    pub top: usize,
    pub precision: f64,
    pub recall: f64,
}

/// One row per method and level.
pub fn save_evaluation(path: &Path, results: &[RankingResult]) -> Result<()> {
    write_csv(
        path,
        results.iter().flat_map(|r| {
            r.levels.iter().map(|l| EvaluationRow {
                method: r.method.clone(),
                level_percent: l.percent,
                top: l.top,
                precision: l.precision,
                recall: l.recall,
            })
        }),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InspirationEntry {
    pub id: String,
    pub text: String,
    pub purpose_similarity: f64,
    pub mechanism_similarity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InspirationRecord {
    pub seed_id: String,
    pub seed_text: String,
    pub cluster: usize,
    pub homogeneity: f64,
    pub pool_size: usize,
    pub min_pairwise_distance: Option<f64>,
    pub inspirations: Vec<InspirationEntry>,
}

pub fn save_inspirations(path: &Path, records: &[InspirationRecord]) -> Result<()> {
    write_jsonl(path, records)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordScore {
    pub token: String,
    pub score: f64,
}

/// The nearest-word list and the sparse code of one predicted vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpretationReport {
    pub product_id: String,
    pub kind: String,
    pub top_similar: Vec<WordScore>,
    /// Entries with |α| at or above the display threshold.
    pub sparse_coding: Vec<WordScore>,
    pub full_code: Vec<WordScore>,
    pub residual_norm: f64,
    pub dropped: Vec<String>,
    pub display_threshold: f64,
}

impl InterpretationReport {
    pub fn new(product_id: &str, it: &Interpretation) -> Self {
        let ws = |v: &[(String, f64)]| v.iter().map(|(t, s)| WordScore { token: t.clone(), score: *s }).collect();
        let shown: Vec<(String, f64)> = it.sparse.displayed(it.display_threshold).cloned().collect();
        InterpretationReport {
            product_id: product_id.into(),
            kind: it.vector_kind.as_str().into(),
            top_similar: ws(&it.nearest_words),
            sparse_coding: ws(&shown),
            full_code: ws(&it.sparse.code),
            residual_norm: it.sparse.residual_norm,
            dropped: it.sparse.dropped.clone(),
            display_threshold: it.display_threshold,
        }
    }

    /// Two side-by-side columns: "Top similar" and "Sparse coding".
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} ({})", self.product_id, self.kind);
        let _ = writeln!(s, "{:<28}  {}", "Top similar", "Sparse coding");
        let rows = self.top_similar.len().max(self.sparse_coding.len());
        for i in 0..rows {
            let left = self.top_similar.get(i).map_or(String::new(), |w| format!("{} {:.3}", w.token, w.score));
            let right = self.sparse_coding.get(i).map_or(String::new(), |w| format!("{} {:.3}", w.token, w.score));
            let _ = writeln!(s, "{left:<28}  {right}");
        }
        let _ = writeln!(s, "residual {:.3e}", self.residual_norm);
        if !self.dropped.is_empty() {
            let _ = writeln!(s, "dropped as dependent: {}", self.dropped.join(", "));
        }
        s
    }
}
