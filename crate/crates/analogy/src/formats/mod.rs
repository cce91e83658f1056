//! On-disk formats. JSONL files hold one object per line; blank lines are
//! ignored and errors carry 1-based line numbers.

mod checkpoint;
mod corpus;
mod reports;
mod search;
mod vectors;

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{FormatError, Result};

pub use checkpoint::{load_checkpoint, save_checkpoint, CHECKPOINT_VERSION};
pub use corpus::{load_annotations, load_corpus, save_annotations, save_corpus, AnnotationLine, CorpusRecord};
pub use reports::{
    load_encoded, load_targets, save_encoded, save_evaluation, save_inspirations, save_targets, save_train_log,
    EncodedRecord, EvaluationRow, InspirationEntry, InspirationRecord, InterpretationReport, TargetRecord, WordScore,
};
pub use search::{load_labels, load_search_log, save_labels, LabelRecord, SearchLogRecord};
pub use vectors::{load_word_vectors, save_word_vectors};

pub(crate) fn open(path: &Path) -> Result<BufReader<File>> {
    match File::open(path) {
        Ok(f) => Ok(BufReader::new(f)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Err(FormatError::Missing(path.to_path_buf())),
        Err(e) => Err(io_err(path, e)),
    }
}

pub(crate) fn io_err(path: &Path, source: std::io::Error) -> FormatError {
    FormatError::Io { path: path.to_path_buf(), source }
}

pub(crate) fn malformed(path: &Path, line: usize, message: impl ToString) -> FormatError {
    FormatError::Malformed { path: path.to_path_buf(), line, message: message.to_string() }
}

/// Non-blank lines with their 1-based numbers.
pub(crate) fn read_lines(path: &Path) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    for (i, line) in open(path)?.lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        if !line.trim().is_empty() {
            out.push((i + 1, line));
        }
    }
    Ok(out)
}

pub(crate) fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<(usize, T)>> {
    read_lines(path)?
        .into_iter()
        .map(|(n, line)| serde_json::from_str(&line).map(|v| (n, v)).map_err(|e| malformed(path, n, e)))
        .collect()
}

pub(crate) struct Output {
    path: PathBuf,
    w: BufWriter<File>,
}

impl Output {
    pub(crate) fn create(path: &Path) -> Result<Self> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        }
        let f = File::create(path).map_err(|e| io_err(path, e))?;
        Ok(Self { path: path.to_path_buf(), w: BufWriter::new(f) })
    }

    pub(crate) fn line(&mut self, s: &str) -> Result<()> {
        self.w.write_all(s.as_bytes()).and_then(|_| self.w.write_all(b"\n")).map_err(|e| io_err(&self.path, e))
    }

    pub(crate) fn json<T: Serialize>(&mut self, value: &T) -> Result<()> {
        let s = serde_json::to_string(value).expect("records serialize");
        self.line(&s)
    }

    pub(crate) fn finish(mut self) -> Result<()> {
        self.w.flush().map_err(|e| io_err(&self.path, e))
    }
}

pub(crate) fn write_jsonl<'a, T: Serialize + 'a>(path: &Path, items: impl IntoIterator<Item = &'a T>) -> Result<()> {
    let mut out = Output::create(path)?;
    for item in items {
        out.json(item)?;
    }
    out.finish()
}
