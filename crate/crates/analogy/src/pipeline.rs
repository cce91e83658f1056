//! In-memory pipeline stages shared by the command-line tool and tests.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use analogy_core::corpus::{align_annotations, ProductDoc, SpanAnnotation};
use analogy_core::encoder::{input_sequence, EncodedDoc, EncoderModel, TrainingExample};
use analogy_core::ideation::{generate_inspirations, InspirationConfig};
use analogy_core::retrieval::{
    baseline_scores, evaluate, AnalogyPairLabel, BaselineMethod, EmbeddingIndex, IndexScorer, RankingResult,
    Representation,
};
use analogy_core::synth::SyntheticCorpus;
use analogy_core::vectors::{build_target_pair, TargetPair, WordVectorStore};
use analogy_core::Error as CoreError;

use crate::config::{ANNOTATIONS_FILE, CORPUS_FILE, LABELS_FILE, VECTORS_FILE};
use crate::error::{FormatError, Result};
use crate::formats::{
    load_word_vectors, save_annotations, save_corpus, save_labels, save_word_vectors, EncodedRecord,
    InspirationEntry, InspirationRecord, TargetRecord,
};

pub fn vocabulary(docs: &[ProductDoc]) -> BTreeSet<String> {
    docs.iter().flat_map(|d| d.tokens.iter().cloned()).collect()
}

/// Word vectors restricted to the corpus vocabulary, with corpus document
/// frequencies.
pub fn load_store(path: &Path, docs: &[ProductDoc]) -> Result<WordVectorStore> {
    let mut store = load_word_vectors(path, Some(&vocabulary(docs)))?;
    store.set_document_frequencies(docs);
    Ok(store)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TargetSummary {
    pub built: usize,
    pub unannotated: usize,
    pub untargetable: usize,
    pub unknown_products: usize,
}

/// Targets for every annotated document. Documents without annotations or
/// without an in-vocabulary flagged token are skipped and counted.
pub fn build_targets(
    docs: &[ProductDoc],
    annotations: &BTreeMap<String, Vec<SpanAnnotation>>,
    store: &WordVectorStore,
    top_tokens: usize,
) -> Result<(Vec<TargetPair>, TargetSummary)> {
    let mut summary = TargetSummary::default();
    let known: BTreeSet<&str> = docs.iter().map(|d| d.id.as_str()).collect();
    for id in annotations.keys().filter(|id| !known.contains(id.as_str())) {
        log::warn!("annotations for unknown product {id:?} ignored");
        summary.unknown_products += 1;
    }
    let mut targets = Vec::new();
    for doc in docs {
        let Some(raw) = annotations.get(&doc.id) else {
            summary.unannotated += 1;
            continue;
        };
        let in_product = |source| FormatError::InProduct { id: doc.id.clone(), source };
        let set = align_annotations(doc, raw).map_err(in_product)?;
        match build_target_pair(&set, doc, store, top_tokens) {
            Ok(t) => targets.push(t),
            Err(CoreError::Untargetable(_)) => {
                log::warn!("product {:?} has no in-vocabulary annotated token; skipped", doc.id);
                summary.untargetable += 1;
            }
            Err(e) => return Err(in_product(e)),
        }
    }
    summary.built = targets.len();
    Ok((targets, summary))
}

/// Pairs each target with its document's word-vector sequence.
pub fn training_examples(
    docs: &[ProductDoc],
    targets: &[TargetRecord],
    store: &WordVectorStore,
    max_len: usize,
) -> Vec<TrainingExample> {
    let by_id: BTreeMap<&str, &ProductDoc> = docs.iter().map(|d| (d.id.as_str(), d)).collect();
    targets
        .iter()
        .filter_map(|t| {
            let Some(doc) = by_id.get(t.product_id.as_str()) else {
                log::warn!("target for unknown product {:?} ignored", t.product_id);
                return None;
            };
            let inputs: Vec<Vec<f64>> =
                input_sequence(&doc.tokens, store, max_len).into_iter().map(<[f64]>::to_vec).collect();
            if inputs.is_empty() {
                log::warn!("product {:?} has no in-vocabulary token; not trained on", t.product_id);
                return None;
            }
            Some(TrainingExample { product_id: t.product_id.clone(), inputs, purpose: t.p.clone(), mechanism: t.m.clone() })
        })
        .collect()
}

pub fn target_records(targets: &[TargetPair]) -> Vec<TargetRecord> {
    targets.iter().map(TargetRecord::from).collect()
}

/// Predictions for every document with at least one in-vocabulary token.
pub fn encode_corpus(model: &EncoderModel, docs: &[ProductDoc], store: &WordVectorStore) -> Result<Vec<EncodedDoc>> {
    let mut out = Vec::with_capacity(docs.len());
    for doc in docs {
        let seq = input_sequence(&doc.tokens, store, model.max_len());
        if seq.is_empty() {
            log::warn!("product {:?} has no in-vocabulary token; not encoded", doc.id);
            continue;
        }
        out.push(model.predict(doc.id.clone(), &seq).map_err(|source| FormatError::InProduct { id: doc.id.clone(), source })?);
    }
    Ok(out)
}

pub fn index_from_records(records: &[EncodedRecord]) -> Result<EmbeddingIndex> {
    Ok(EmbeddingIndex::new(
        records.iter().map(|r| r.product_id.clone()).collect(),
        records.iter().map(|r| r.p.clone()).collect(),
        records.iter().map(|r| r.m.clone()).collect(),
    )?)
}

pub const LEARNED: [Representation; 3] = [Representation::Concat, Representation::Purpose, Representation::Mechanism];

/// Scores `labels` with the learned representations and the three baselines.
pub fn evaluate_all(
    labels: &[AnalogyPairLabel],
    index: &EmbeddingIndex,
    docs: &[ProductDoc],
    store: &WordVectorStore,
    levels: &[u32],
) -> Result<Vec<RankingResult>> {
    let mut results = Vec::new();
    for r in LEARNED {
        results.push(evaluate(r.name(), labels, &IndexScorer::new(index, r), levels)?);
    }
    for m in BaselineMethod::ALL {
        results.push(evaluate(m.name(), labels, &baseline_scores(docs, store, m), levels)?);
    }
    Ok(results)
}

/// Inspiration sets as report records.
pub fn inspiration_records(
    index: &EmbeddingIndex,
    docs: &[ProductDoc],
    cfg: &InspirationConfig,
) -> Result<Vec<InspirationRecord>> {
    let texts: BTreeMap<&str, &str> = docs.iter().map(|d| (d.id.as_str(), d.text.as_str())).collect();
    let text = |id: &str| texts.get(id).copied().unwrap_or_default().to_string();
    Ok(generate_inspirations(index, cfg)?
        .into_iter()
        .map(|s| InspirationRecord {
            seed_text: text(&s.seed_id),
            pool_size: s.pool.len(),
            inspirations: s
                .inspirations
                .iter()
                .map(|i| InspirationEntry {
                    id: i.id.clone(),
                    text: text(&i.id),
                    purpose_similarity: i.purpose_similarity,
                    mechanism_similarity: i.mechanism_similarity,
                })
                .collect(),
            seed_id: s.seed_id,
            cluster: s.cluster,
            homogeneity: s.homogeneity,
            min_pairwise_distance: s.min_pairwise_distance,
        })
        .collect())
}

/// Writes a generated corpus as corpus, annotation, vector and label files.
pub fn write_synthetic(dir: &Path, corpus: &SyntheticCorpus) -> Result<()> {
    save_corpus(&dir.join(CORPUS_FILE), &corpus.docs())?;
    save_annotations(
        &dir.join(ANNOTATIONS_FILE),
        corpus.products.iter().flat_map(|p| p.annotations.iter().map(move |a| (p.doc.id.as_str(), a))),
    )?;
    save_word_vectors(&dir.join(VECTORS_FILE), corpus.vectors.iter().map(|(t, v)| (t.as_str(), v.as_slice())))?;
    save_labels(&dir.join(LABELS_FILE), &corpus.labels)
}
