use std::collections::BTreeMap;
use std::path::Path;

use analogy_core::corpus::{ProductDoc, SpanAnnotation};
use analogy_core::Error as CoreError;
use serde::{Deserialize, Serialize};

use super::{malformed, read_jsonl, write_jsonl};
use crate::error::{FormatError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: String,
    #[serde(default)]
    pub title: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationLine {
    pub product_id: String,
    pub annotator_id: String,
    #[serde(default)]
    pub purpose_spans: Vec<(usize, usize)>,
    #[serde(default)]
    pub mechanism_spans: Vec<(usize, usize)>,
}

/// Loads a corpus. Documents with no tokens are skipped with a warning.
pub fn load_corpus(path: &Path) -> Result<Vec<ProductDoc>> {
    let mut first_seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut docs = Vec::new();
    for (line, rec) in read_jsonl::<CorpusRecord>(path)? {
        if let Some(&first) = first_seen.get(&rec.id) {
            return Err(FormatError::DuplicateId { path: path.to_path_buf(), id: rec.id, first, line });
        }
        first_seen.insert(rec.id.clone(), line);
        match ProductDoc::new(rec.id, rec.title, rec.text) {
            Ok(doc) => docs.push(doc),
            Err(CoreError::EmptyDocument) => {
                log::warn!("{}:{line}: document has no tokens; skipped", path.display());
            }
            Err(e) => return Err(malformed(path, line, e)),
        }
    }
    Ok(docs)
}

pub fn save_corpus(path: &Path, docs: &[ProductDoc]) -> Result<()> {
    let records: Vec<CorpusRecord> =
        docs.iter().map(|d| CorpusRecord { id: d.id.clone(), title: d.title.clone(), text: d.text.clone() }).collect();
    write_jsonl(path, &records)
}

/// Span annotations grouped by product, in file order within each product.
pub fn load_annotations(path: &Path) -> Result<BTreeMap<String, Vec<SpanAnnotation>>> {
    let mut out: BTreeMap<String, Vec<SpanAnnotation>> = BTreeMap::new();
    for (_, rec) in read_jsonl::<AnnotationLine>(path)? {
        out.entry(rec.product_id).or_default().push(SpanAnnotation {
            annotator_id: rec.annotator_id,
            purpose_spans: rec.purpose_spans,
            mechanism_spans: rec.mechanism_spans,
        });
    }
    Ok(out)
}

pub fn save_annotations<'a>(path: &Path, items: impl IntoIterator<Item = (&'a str, &'a SpanAnnotation)>) -> Result<()> {
    let records: Vec<AnnotationLine> = items
        .into_iter()
        .map(|(id, a)| AnnotationLine {
            product_id: id.to_string(),
            annotator_id: a.annotator_id.clone(),
            purpose_spans: a.purpose_spans.clone(),
            mechanism_spans: a.mechanism_spans.clone(),
        })
        .collect();
    write_jsonl(path, &records)
}
