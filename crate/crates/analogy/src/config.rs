//! Pipeline settings. Values come from, in increasing priority: built-in
//! defaults, an optional JSON config file, command-line flags.

use std::path::{Path, PathBuf};

use analogy_core::encoder::{DEFAULT_HIDDEN, DEFAULT_MAX_LEN};
use analogy_core::ideation::{DEFAULT_CLUSTERS, DEFAULT_INSPIRATIONS, DEFAULT_MAX_ITERS, DEFAULT_SEEDS};
use analogy_core::interpret::{DEFAULT_DISPLAY_THRESHOLD, DEFAULT_NEAREST, DEFAULT_SPARSITY};
use analogy_core::retrieval::DEFAULT_FAR_THRESHOLD;
use analogy_core::vectors::DEFAULT_TOP_TOKENS;
use serde::{Deserialize, Serialize};

use crate::error::{FormatError, Result};
use crate::formats::{io_err, malformed, open};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub corpus: Option<PathBuf>,
    pub annotations: Option<PathBuf>,
    pub vectors: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
    /// Where outputs go, and where inputs are looked up when not given.
    pub out_dir: PathBuf,

    /// D: tokens kept per target.
    pub top_tokens: usize,
    /// H
    pub hidden: usize,
    pub max_len: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub clip_norm: f64,
    /// λ
    pub purpose_weight: f64,
    /// K
    pub clusters: usize,
    /// P
    pub seeds: usize,
    /// M
    pub inspirations: usize,
    pub kmeans_iters: usize,
    /// τ
    pub threshold: f64,
    pub nearest: usize,
    pub sparsity: usize,
    pub display_threshold: f64,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            corpus: None,
            annotations: None,
            vectors: None,
            checkpoint: None,
            out_dir: PathBuf::from("."),
            top_tokens: DEFAULT_TOP_TOKENS,
            hidden: DEFAULT_HIDDEN,
            max_len: DEFAULT_MAX_LEN,
            learning_rate: 1e-3,
            epochs: 20,
            batch_size: 16,
            clip_norm: 5.0,
            purpose_weight: 0.5,
            clusters: DEFAULT_CLUSTERS,
            seeds: DEFAULT_SEEDS,
            inspirations: DEFAULT_INSPIRATIONS,
            kmeans_iters: DEFAULT_MAX_ITERS,
            threshold: DEFAULT_FAR_THRESHOLD,
            nearest: DEFAULT_NEAREST,
            sparsity: DEFAULT_SPARSITY,
            display_threshold: DEFAULT_DISPLAY_THRESHOLD,
            seed: 0,
        }
    }
}

pub const CORPUS_FILE: &str = "corpus.jsonl";
pub const ANNOTATIONS_FILE: &str = "annotations.jsonl";
pub const VECTORS_FILE: &str = "vectors.txt";
pub const LABELS_FILE: &str = "labels.jsonl";
pub const TARGETS_FILE: &str = "targets.jsonl";
pub const CHECKPOINT_FILE: &str = "checkpoint.json";
pub const TRAIN_LOG_FILE: &str = "train_log.csv";
pub const ENCODED_FILE: &str = "encoded.jsonl";
pub const EVALUATION_FILE: &str = "evaluation.csv";
pub const INSPIRATIONS_FILE: &str = "inspirations.jsonl";

impl PipelineConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::io::read_to_string(open(path)?).map_err(|e| io_err(path, e))?;
        serde_json::from_str(&text).map_err(|e| malformed(path, e.line(), e))
    }

    pub fn in_out_dir(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    pub fn corpus_path(&self) -> PathBuf {
        self.corpus.clone().unwrap_or_else(|| self.in_out_dir(CORPUS_FILE))
    }

    pub fn annotations_path(&self) -> PathBuf {
        self.annotations.clone().unwrap_or_else(|| self.in_out_dir(ANNOTATIONS_FILE))
    }

    pub fn vectors_path(&self) -> PathBuf {
        self.vectors.clone().unwrap_or_else(|| self.in_out_dir(VECTORS_FILE))
    }

    pub fn checkpoint_path(&self) -> PathBuf {
        self.checkpoint.clone().unwrap_or_else(|| self.in_out_dir(CHECKPOINT_FILE))
    }

    /// Checks the documented numeric ranges.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(FormatError::Core(analogy_core::Error::InvalidConfig(m)));
        let positive = [
            ("top_tokens", self.top_tokens),
            ("hidden", self.hidden),
            ("max_len", self.max_len),
            ("batch_size", self.batch_size),
            ("clusters", self.clusters),
            ("seeds", self.seeds),
            ("inspirations", self.inspirations),
            ("nearest", self.nearest),
            ("sparsity", self.sparsity),
        ];
        for (name, v) in positive {
            if v == 0 {
                return bad(format!("{name} must be positive"));
            }
        }
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return bad(format!("learning_rate must be finite and non-negative, got {}", self.learning_rate));
        }
        if !(self.clip_norm > 0.0) {
            return bad(format!("clip_norm must be positive, got {}", self.clip_norm));
        }
        if !(0.0..=1.0).contains(&self.purpose_weight) {
            return bad(format!("purpose_weight must lie in [0, 1], got {}", self.purpose_weight));
        }
        if !(0.0..=2.0).contains(&self.threshold) {
            return bad(format!("threshold must lie in [0, 2], got {}", self.threshold));
        }
        if !(self.display_threshold >= 0.0) {
            return bad(format!("display_threshold must be non-negative, got {}", self.display_threshold));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        PipelineConfig::default().validate().unwrap();
    }

    #[test]
    fn partial_file_keeps_other_defaults() {
        let c: PipelineConfig = serde_json::from_str(r#"{"hidden": 8, "out_dir": "run"}"#).unwrap();
        assert_eq!(c.hidden, 8);
        assert_eq!(c.epochs, PipelineConfig::default().epochs);
        assert_eq!(c.corpus_path(), PathBuf::from("run").join(CORPUS_FILE));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<PipelineConfig>(r#"{"hiden": 8}"#).is_err());
    }

    #[test]
    fn out_of_range_rejected() {
        let c = PipelineConfig { purpose_weight: 1.5, ..Default::default() };
        assert!(c.validate().is_err());
    }
}
