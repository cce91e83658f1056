//! Whitespace-separated word vectors: a token followed by `d` reals per line.

use std::collections::BTreeSet;
use std::io::BufRead;
use std::path::Path;

use analogy_core::vectors::WordVectorStore;
use analogy_core::Error as CoreError;

use super::{io_err, malformed, open, Output};
use crate::error::Result;

/// Reads a vector file, keeping only tokens in `filter` when one is given.
/// The dimension comes from the first line and is enforced on every line.
/// Repeated tokens keep their first vector.
pub fn load_word_vectors(path: &Path, filter: Option<&BTreeSet<String>>) -> Result<WordVectorStore> {
    let mut store: Option<WordVectorStore> = None;
    let mut dim: Option<usize> = None;
    for (i, line) in open(path)?.lines().enumerate() {
        let n = i + 1;
        let line = line.map_err(|e| io_err(path, e))?;
        let mut fields = line.split_whitespace();
        let Some(token) = fields.next() else { continue };
        let values: Vec<&str> = fields.collect();
        let d = *dim.get_or_insert(values.len());
        if d == 0 {
            return Err(malformed(path, n, "no coordinates after token"));
        }
        if values.len() != d {
            return Err(malformed(path, n, format!("expected {d} coordinates, found {}", values.len())));
        }
        if filter.is_some_and(|f| !f.contains(token)) {
            continue;
        }
        let v = values
            .iter()
            .map(|s| s.parse::<f64>().map_err(|e| malformed(path, n, format!("{s:?}: {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        let s = store.get_or_insert_with(|| WordVectorStore::new(d));
        if !s.insert(token, v)? {
            log::warn!("{}:{n}: repeated token {token:?} ignored", path.display());
        }
    }
    Ok(store.ok_or(CoreError::NoVectors)?)
}

pub fn save_word_vectors<'a>(path: &Path, entries: impl IntoIterator<Item = (&'a str, &'a [f64])>) -> Result<()> {
    let mut out = Output::create(path)?;
    for (token, v) in entries {
        let mut line = String::from(token);
        for x in v {
            line.push(' ');
            line.push_str(&x.to_string());
        }
        out.line(&line)?;
    }
    out.finish()
}
