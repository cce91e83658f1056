//! Product documents, tokenization and token-level annotations.
//!
//! Tokens are lowercase runs of letters, digits, apostrophes and hyphens.
//! Runs made only of apostrophes and hyphens are dropped. Annotations arrive
//! as character spans over the original text and are turned into one binary
//! flag per token: a token is flagged when its character range overlaps any
//! span carrying that label.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Result};

/// A token together with its `[start, end)` range in characters of the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub start: usize,
    pub end: usize,
}

#[inline]
fn is_token_char(c: char) -> bool {
    c.is_alphanumeric() || c == '\'' || c == '-'
}

/// Splits `text` into tokens, keeping character offsets.
///
/// Returns an empty vector for text without any word characters; see
/// [`tokenize`] for the erroring variant.
pub fn tokenize_with_offsets(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut start = 0;
    let mut has_word_char = false;

    let mut flush = |current: &mut String, start: usize, end: usize, has_word_char: &mut bool| {
        if *has_word_char {
            out.push(Token { text: core::mem::take(current), start, end });
        } else {
            current.clear();
        }
        *has_word_char = false;
    };

    let mut len = 0;
    for (i, c) in text.chars().enumerate() {
        len = i + 1;
        if is_token_char(c) {
            if current.is_empty() && !has_word_char {
                start = i;
            }
            for lc in c.to_lowercase().filter(|&lc| is_token_char(lc)) {
                has_word_char |= lc.is_alphanumeric();
                current.push(lc);
            }
        } else if !current.is_empty() || has_word_char {
            flush(&mut current, start, i, &mut has_word_char);
        }
    }
    if !current.is_empty() {
        flush(&mut current, start, len, &mut has_word_char);
    }
    out
}

/// Lowercases and splits `text`; [`Error::EmptyDocument`] when nothing survives.
pub fn tokenize(text: &str) -> Result<Vec<String>> {
    let tokens: Vec<String> = tokenize_with_offsets(text).into_iter().map(|t| t.text).collect();
    if tokens.is_empty() {
        return Err(Error::EmptyDocument);
    }
    Ok(tokens)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductDoc {
    pub id: String,
    pub title: String,
    pub text: String,
    pub tokens: Vec<String>,
    offsets: Vec<(usize, usize)>,
}

impl ProductDoc {
    pub fn new(id: impl Into<String>, title: impl Into<String>, text: impl Into<String>) -> Result<Self> {
        let text = text.into();
        let (tokens, offsets) = tokenize_with_offsets(&text)
            .into_iter()
            .map(|t| (t.text, (t.start, t.end)))
            .unzip::<_, _, Vec<_>, Vec<_>>();
        if tokens.is_empty() {
            return Err(Error::EmptyDocument);
        }
        Ok(Self { id: id.into(), title: title.into(), text, tokens, offsets })
    }

    /// Character range of each token in [`ProductDoc::text`].
    pub fn offsets(&self) -> &[(usize, usize)] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Checks that every id in `docs` is unique.
pub fn check_unique_ids(docs: &[ProductDoc]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for d in docs {
        if !seen.insert(d.id.as_str()) {
            return Err(Error::DuplicateId(d.id.clone()));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Purpose,
    Mechanism,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Purpose => "purpose",
            Label::Mechanism => "mechanism",
        }
    }
}

/// One annotator's character spans over a product text.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SpanAnnotation {
    pub annotator_id: String,
    pub purpose_spans: Vec<(usize, usize)>,
    pub mechanism_spans: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationRecord {
    pub product_id: String,
    pub annotator_id: String,
    pub purpose_flags: Vec<bool>,
    pub mechanism_flags: Vec<bool>,
}

impl AnnotationRecord {
    pub fn flags(&self, label: Label) -> &[bool] {
        match label {
            Label::Purpose => &self.purpose_flags,
            Label::Mechanism => &self.mechanism_flags,
        }
    }
}

/// All annotators' token flags for one product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationSet {
    product_id: String,
    records: Vec<AnnotationRecord>,
}

impl AnnotationSet {
    pub fn new(product_id: impl Into<String>, records: Vec<AnnotationRecord>) -> Result<Self> {
        let product_id = product_id.into();
        let Some(first) = records.first() else {
            return Err(Error::NoAnnotators(product_id));
        };
        let len = first.purpose_flags.len();
        let mut annotators = BTreeSet::new();
        for r in &records {
            if r.product_id != product_id {
                return Err(Error::UnknownId(r.product_id.clone()));
            }
            for flags in [&r.purpose_flags, &r.mechanism_flags] {
                if flags.len() != len {
                    return Err(Error::LengthMismatch { expected: len, found: flags.len() });
                }
            }
            if !annotators.insert(r.annotator_id.as_str()) {
                return Err(Error::DuplicateAnnotator {
                    product: product_id.clone(),
                    annotator: r.annotator_id.clone(),
                });
            }
        }
        Ok(Self { product_id, records })
    }

    pub fn product_id(&self) -> &str {
        &self.product_id
    }

    pub fn records(&self) -> &[AnnotationRecord] {
        &self.records
    }

    /// Token sequence length shared by every record.
    pub fn token_len(&self) -> usize {
        self.records[0].purpose_flags.len()
    }

    /// Every token flagged for `label`, concatenated across annotators in
    /// record order, keeping multiplicity.
    pub fn flagged_tokens<'a>(&self, doc: &'a ProductDoc, label: Label) -> Vec<&'a str> {
        self.records
            .iter()
            .flat_map(|r| {
                r.flags(label)
                    .iter()
                    .zip(&doc.tokens)
                    .filter(|(f, _)| **f)
                    .map(|(_, t)| t.as_str())
            })
            .collect()
    }
}

fn flags_for(doc: &ProductDoc, spans: &[(usize, usize)], text_len: usize) -> Result<Vec<bool>> {
    for &(start, end) in spans {
        if end < start || end > text_len {
            return Err(Error::SpanOutOfBounds { start, end, len: text_len });
        }
    }
    Ok(doc
        .offsets
        .iter()
        .map(|&(a, b)| spans.iter().any(|&(s, e)| a < e && s < b))
        .collect())
}

/// Converts span annotations over `doc.text` into per-token flags.
pub fn align_annotations(doc: &ProductDoc, raw: &[SpanAnnotation]) -> Result<AnnotationSet> {
    if raw.is_empty() {
        return Err(Error::NoAnnotators(doc.id.clone()));
    }
    let text_len = doc.text.chars().count();
    let records = raw
        .iter()
        .map(|a| {
            Ok(AnnotationRecord {
                product_id: doc.id.clone(),
                annotator_id: a.annotator_id.clone(),
                purpose_flags: flags_for(doc, &a.purpose_spans, text_len)?,
                mechanism_flags: flags_for(doc, &a.mechanism_spans, text_len)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    AnnotationSet::new(doc.id.clone(), records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn strs(v: &[String]) -> Vec<&str> {
        v.iter().map(String::as_str).collect()
    }

    #[test]
    fn splits_on_slash() {
        assert_eq!(strs(&tokenize("Pet water bowl/dispenser").unwrap()), ["pet", "water", "bowl", "dispenser"]);
    }

    #[test]
    fn empty_text_signals() {
        assert_eq!(tokenize(""), Err(Error::EmptyDocument));
        assert_eq!(tokenize(" -- '' !!"), Err(Error::EmptyDocument));
    }

    #[test]
    fn punctuation_dropped() {
        assert_eq!(strs(&tokenize("Dishwasher safe!!").unwrap()), ["dishwasher", "safe"]);
        assert_eq!(strs(&tokenize("Don't  over-fill - ok\nNew line").unwrap()), ["don't", "over-fill", "ok", "new", "line"]);
    }

    #[test]
    fn offsets_are_character_based() {
        let t = tokenize_with_offsets("café au-lait");
        assert_eq!(t[0], Token { text: "café".to_string(), start: 0, end: 4 });
        assert_eq!(t[1], Token { text: "au-lait".to_string(), start: 5, end: 12 });
    }

    #[test]
    fn span_over_water_bowl() {
        let doc = ProductDoc::new("a", "", "Pet water bowl/dispenser").unwrap();
        let raw = [SpanAnnotation {
            annotator_id: "w1".into(),
            purpose_spans: vec![(4, 14)],
            mechanism_spans: vec![],
        }];
        let set = align_annotations(&doc, &raw).unwrap();
        assert_eq!(set.records()[0].purpose_flags, vec![false, true, true, false]);
        assert_eq!(set.records()[0].mechanism_flags, vec![false; 4]);
    }

    #[test]
    fn empty_spans_keep_zero_flags() {
        let doc = ProductDoc::new("a", "", "one two").unwrap();
        let raw = [SpanAnnotation { annotator_id: "w1".into(), ..Default::default() }];
        let set = align_annotations(&doc, &raw).unwrap();
        assert_eq!(set.records().len(), 1);
        assert_eq!(set.records()[0].purpose_flags, vec![false, false]);
    }

    #[test]
    fn reversed_span_rejected() {
        let doc = ProductDoc::new("a", "", "one two").unwrap();
        let raw = [SpanAnnotation {
            annotator_id: "w1".into(),
            purpose_spans: vec![(5, 2)],
            mechanism_spans: vec![],
        }];
        assert!(matches!(align_annotations(&doc, &raw), Err(Error::SpanOutOfBounds { .. })));
        let past_end = [SpanAnnotation {
            annotator_id: "w1".into(),
            purpose_spans: vec![],
            mechanism_spans: vec![(0, 8)],
        }];
        assert!(matches!(align_annotations(&doc, &past_end), Err(Error::SpanOutOfBounds { .. })));
    }

    #[test]
    fn zero_annotators_rejected() {
        let doc = ProductDoc::new("a", "", "one").unwrap();
        assert_eq!(align_annotations(&doc, &[]), Err(Error::NoAnnotators("a".into())));
    }

    #[test]
    fn duplicate_annotators_rejected() {
        let doc = ProductDoc::new("a", "", "one").unwrap();
        let a = SpanAnnotation { annotator_id: "w".into(), ..Default::default() };
        assert!(matches!(
            align_annotations(&doc, &[a.clone(), a]),
            Err(Error::DuplicateAnnotator { .. })
        ));
    }

    #[test]
    fn duplicate_doc_ids_detected() {
        let docs = vec![
            ProductDoc::new("q-1", "", "a").unwrap(),
            ProductDoc::new("q-7", "", "b").unwrap(),
            ProductDoc::new("q-7", "", "c").unwrap(),
        ];
        assert_eq!(check_unique_ids(&docs), Err(Error::DuplicateId("q-7".into())));
    }

    proptest! {
        #[test]
        fn tokenize_idempotent(text in "\\PC{0,60}") {
            if let Ok(tokens) = tokenize(&text) {
                let joined = tokens.join(" ");
                prop_assert_eq!(tokenize(&joined).unwrap(), tokens.clone());
                for t in &tokens {
                    prop_assert!(!t.is_empty());
                    prop_assert!(!t.chars().any(char::is_whitespace));
                }
            }
        }

        #[test]
        fn flag_lengths_sum(words in proptest::collection::vec("[a-z]{1,5}", 1..8), k in 1usize..5) {
            let text = words.join(" ");
            let doc = ProductDoc::new("p", "", text.clone()).unwrap();
            let len = text.chars().count();
            let raw: Vec<SpanAnnotation> = (0..k)
                .map(|i| SpanAnnotation {
                    annotator_id: alloc::format!("w{i}"),
                    purpose_spans: vec![(0, len / 2)],
                    mechanism_spans: vec![(len / 2, len)],
                })
                .collect();
            let set = align_annotations(&doc, &raw).unwrap();
            let total: usize = set.records().iter().map(|r| r.purpose_flags.len()).sum();
            prop_assert_eq!(total, k * doc.len());
        }
    }
}
