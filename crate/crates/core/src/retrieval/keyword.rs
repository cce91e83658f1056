//! Word-matching search with lemma expansion.
//!
//! Every product token and every query term is expanded to the set
//! `{word, lemma(word)}`. A product's score is the number of distinct query
//! terms whose expansion meets the product's expanded bag of words. Results
//! are sorted by score, then by product id.
//!
//! The lemmatizer is a small rule set: an exception table for irregular
//! forms, then suffix rules tried in order:
//!
//! | suffix | rule | example |
//! |---|---|---|
//! | `ies` | → `y` | batteries → battery |
//! | `sses` | → `ss` | glasses → glass |
//! | `ches`, `shes`, `xes`, `zes` | drop `es` | boxes → box |
//! | `s` (not `ss`, `us`, `is`) | drop `s` | dogs → dog |
//! | `ing` | drop, undouble final consonant | running → run |
//! | `ed` | drop, undouble final consonant | stopped → stop |
//!
//! Suffix rules only fire when at least three characters remain.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::corpus::ProductDoc;
use crate::{Error, Result};

const EXCEPTIONS: &[(&str, &str)] = &[
    ("children", "child"),
    ("men", "man"),
    ("women", "woman"),
    ("people", "person"),
    ("feet", "foot"),
    ("teeth", "tooth"),
    ("mice", "mouse"),
    ("geese", "goose"),
    ("knives", "knife"),
    ("leaves", "leaf"),
    ("lives", "life"),
    ("wives", "wife"),
    ("shelves", "shelf"),
    ("halves", "half"),
    ("is", "be"),
    ("are", "be"),
    ("was", "be"),
    ("were", "be"),
    ("been", "be"),
    ("has", "have"),
    ("had", "have"),
    ("does", "do"),
    ("did", "do"),
    ("done", "do"),
    ("made", "make"),
    ("kept", "keep"),
    ("held", "hold"),
    ("built", "build"),
    ("ran", "run"),
    ("went", "go"),
    ("gone", "go"),
    ("fed", "feed"),
    ("bred", "breed"),
    ("sped", "speed"),
    ("led", "lead"),
    ("this", "this"),
    ("gas", "gas"),
    ("bus", "bus"),
    ("lens", "lens"),
    ("news", "news"),
    ("series", "series"),
    ("species", "species"),
];

fn undouble(stem: &str) -> String {
    let b = stem.as_bytes();
    let n = b.len();
    if n >= 2 && b[n - 1] == b[n - 2] && !matches!(b[n - 1], b'a' | b'e' | b'i' | b'o' | b'u' | b'l' | b's' | b'z') {
        stem[..n - 1].to_string()
    } else {
        stem.to_string()
    }
}

/// Base form of a lowercase word under the rules above.
pub fn lemma(word: &str) -> String {
    if let Some((_, base)) = EXCEPTIONS.iter().find(|(w, _)| *w == word) {
        return (*base).to_string();
    }
    let stem_ok = |suffix: &str| word.len() >= suffix.len() + 3 && word.is_char_boundary(word.len() - suffix.len());
    let strip = |suffix: &str| &word[..word.len() - suffix.len()];

    if word.ends_with("ies") && stem_ok("ies") {
        return alloc::format!("{}y", strip("ies"));
    }
    if word.ends_with("sses") && stem_ok("es") {
        return strip("es").to_string();
    }
    for s in ["ches", "shes", "xes", "zes"] {
        if word.ends_with(s) && stem_ok("es") {
            return strip("es").to_string();
        }
    }
    if word.ends_with('s') && !["ss", "us", "is"].iter().any(|s| word.ends_with(s)) && stem_ok("s") {
        return strip("s").to_string();
    }
    if word.ends_with("ing") && stem_ok("ing") {
        return undouble(strip("ing"));
    }
    if word.ends_with("ed") && stem_ok("ed") {
        return undouble(strip("ed"));
    }
    word.to_string()
}

/// `{word, lemma(word)}`
pub fn expand(word: &str) -> BTreeSet<String> {
    let mut s = BTreeSet::new();
    s.insert(word.to_string());
    s.insert(lemma(word));
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeywordHit {
    pub id: String,
    pub score: usize,
}

/// Products matching at least one query term, best first.
pub fn keyword_search(query: &[String], docs: &[ProductDoc]) -> Result<Vec<KeywordHit>> {
    let terms: BTreeSet<&str> = query.iter().map(String::as_str).filter(|t| !t.is_empty()).collect();
    if terms.is_empty() {
        return Err(Error::EmptyQuery);
    }
    let expanded_terms: Vec<BTreeSet<String>> = terms.iter().map(|t| expand(t)).collect();
    let mut hits: Vec<KeywordHit> = docs
        .iter()
        .filter_map(|d| {
            let bag: BTreeSet<String> = d.tokens.iter().flat_map(|t| expand(t)).collect();
            let score = expanded_terms.iter().filter(|e| e.iter().any(|x| bag.contains(x))).count();
            (score > 0).then(|| KeywordHit { id: d.id.clone(), score })
        })
        .collect();
    hits.sort_by(|a, b| b.score.cmp(&a.score).then_with(|| a.id.cmp(&b.id)));
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn doc(id: &str, text: &str) -> ProductDoc {
        ProductDoc::new(id, "", text).unwrap()
    }

    fn q(words: &[&str]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn lemma_rules() {
        assert_eq!(lemma("dogs"), "dog");
        assert_eq!(lemma("batteries"), "battery");
        assert_eq!(lemma("glasses"), "glass");
        assert_eq!(lemma("boxes"), "box");
        assert_eq!(lemma("running"), "run");
        assert_eq!(lemma("cleaned"), "clean");
        assert_eq!(lemma("stopped"), "stop");
        assert_eq!(lemma("children"), "child");
        assert_eq!(lemma("glass"), "glass");
        assert_eq!(lemma("bus"), "bus");
        assert_eq!(lemma("cup"), "cup");
    }

    #[test]
    fn plural_query_matches_singular() {
        let hits = keyword_search(&q(&["dogs"]), &[doc("a", "dog leash"), doc("b", "cat")]).unwrap();
        assert_eq!(hits, vec![KeywordHit { id: "a".into(), score: 1 }]);
    }

    #[test]
    fn more_terms_rank_higher_ties_by_id() {
        let docs = [
            doc("z", "water bowl"),
            doc("y", "water bowl pump"),
            doc("b", "bowl pump"),
            doc("a", "pumps for water"),
        ];
        let hits = keyword_search(&q(&["water", "bowl", "pump"]), &docs).unwrap();
        let order: Vec<(&str, usize)> = hits.iter().map(|h| (h.id.as_str(), h.score)).collect();
        assert_eq!(order, vec![("y", 3), ("a", 2), ("b", 2), ("z", 2)]);
    }

    #[test]
    fn empty_query_rejected() {
        assert_eq!(keyword_search(&[], &[doc("a", "x")]), Err(Error::EmptyQuery));
    }
}
