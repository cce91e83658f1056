use alloc::string::String;
use alloc::vec::Vec;

use super::{AnalogyPairLabel, PairScorer};
use crate::{Error, Result};

/// Cut-offs, in percent of the labeled pairs, reported by default.
pub const TABLE_LEVELS: [u32; 6] = [1, 5, 10, 15, 20, 25];

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredLabel {
    pub a: String,
    pub b: String,
    pub score: f64,
    pub positive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelMetrics {
    pub percent: u32,
    /// `⌈percent · |labels| / 100⌉`, capped at `|labels|`.
    pub top: usize,
    pub precision: f64,
    pub recall: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingResult {
    pub method: String,
    pub ranked: Vec<ScoredLabel>,
    pub levels: Vec<LevelMetrics>,
}

impl RankingResult {
    pub fn level(&self, percent: u32) -> Option<&LevelMetrics> {
        self.levels.iter().find(|l| l.percent == percent)
    }
}

/// Precision and recall of positive labels among the top-scoring labeled pairs.
pub fn evaluate(
    method: impl Into<String>,
    labels: &[AnalogyPairLabel],
    scorer: &dyn PairScorer,
    levels: &[u32],
) -> Result<RankingResult> {
    let total_pos = labels.iter().filter(|l| l.is_positive()).count();
    if total_pos == 0 {
        return Err(Error::NoPositives);
    }
    let mut ranked = labels
        .iter()
        .map(|l| {
            let (a, b) = l.key();
            let score = scorer
                .score(a, b)
                .filter(|s| !s.is_nan())
                .ok_or_else(|| Error::UnscoredPair(a.into(), b.into()))?;
            Ok(ScoredLabel { a: a.into(), b: b.into(), score, positive: l.is_positive() })
        })
        .collect::<Result<Vec<_>>>()?;
    ranked.sort_by(|x, y| {
        y.score
            .total_cmp(&x.score)
            .then_with(|| x.a.cmp(&y.a))
            .then_with(|| x.b.cmp(&y.b))
            // duplicates of one pair with different polarity: positives last
            .then_with(|| x.positive.cmp(&y.positive))
    });

    let n = ranked.len();
    let mut cumulative = Vec::with_capacity(n + 1);
    cumulative.push(0usize);
    for r in &ranked {
        cumulative.push(cumulative.last().unwrap() + usize::from(r.positive));
    }
    let levels = levels
        .iter()
        .map(|&percent| {
            let top = ((percent as usize * n).div_ceil(100)).min(n);
            let hits = cumulative[top];
            LevelMetrics {
                percent,
                top,
                precision: if top == 0 { 0.0 } else { hits as f64 / top as f64 },
                recall: hits as f64 / total_pos as f64,
            }
        })
        .collect();
    Ok(RankingResult { method: method.into(), ranked, levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::retrieval::{Polarity, Provenance};
    use alloc::collections::BTreeMap;
    use alloc::format;
    use alloc::vec;

    struct MapScorer(BTreeMap<(String, String), f64>);

    impl PairScorer for MapScorer {
        fn score(&self, a: &str, b: &str) -> Option<f64> {
            self.0.get(&(a.into(), b.into())).copied()
        }
    }

    fn label(a: &str, b: &str, positive: bool) -> AnalogyPairLabel {
        AnalogyPairLabel {
            seed_id: a.into(),
            candidate_id: b.into(),
            label: if positive { Polarity::Positive } else { Polarity::Negative },
            provenance: if positive { Provenance::Matched } else { Provenance::ImplicitlyRejected },
        }
    }

    /// 10 labels, 4 positive; the top five by score hold 3 positives.
    fn fixture() -> (Vec<AnalogyPairLabel>, MapScorer) {
        let spec = [
            (0.95, true),
            (0.90, false),
            (0.85, true),
            (0.80, true),
            (0.75, false),
            (0.70, false),
            (0.65, true),
            (0.60, false),
            (0.55, false),
            (0.50, false),
        ];
        let mut labels = Vec::new();
        let mut scores = BTreeMap::new();
        for (i, (s, p)) in spec.iter().enumerate() {
            let (a, b) = (format!("a{i}"), format!("b{i}"));
            labels.push(label(&a, &b, *p));
            scores.insert((a, b), *s);
        }
        (labels, MapScorer(scores))
    }

    #[test]
    fn hand_counted_half() {
        let (labels, scorer) = fixture();
        let r = evaluate("x", &labels, &scorer, &[50]).unwrap();
        assert_eq!(r.levels[0].top, 5);
        assert_eq!(r.levels[0].precision, 0.6);
        assert_eq!(r.levels[0].recall, 0.75);
    }

    #[test]
    fn perfect_ranking() {
        let (mut labels, _) = fixture();
        let mut scores = BTreeMap::new();
        for l in &mut labels {
            scores.insert((l.seed_id.clone(), l.candidate_id.clone()), if l.is_positive() { 1.0 } else { 0.0 });
        }
        let r = evaluate("x", &labels, &MapScorer(scores), &[40]).unwrap();
        assert_eq!(r.levels[0].precision, 1.0);
        assert_eq!(r.levels[0].recall, 1.0);
    }

    #[test]
    fn top_rounds_up() {
        let (labels, scorer) = fixture();
        let r = evaluate("x", &labels, &scorer, &TABLE_LEVELS).unwrap();
        assert_eq!(r.level(1).unwrap().top, 1);
        assert_eq!(r.level(15).unwrap().top, 2);
    }

    #[test]
    fn no_positives_is_an_error() {
        let labels = vec![label("a", "b", false)];
        let scorer = MapScorer(BTreeMap::from([(("a".into(), "b".into()), 0.5)]));
        assert_eq!(evaluate("x", &labels, &scorer, &[10]), Err(Error::NoPositives));
    }

    #[test]
    fn missing_score_is_an_error() {
        let labels = vec![label("a", "b", true)];
        let scorer = MapScorer(BTreeMap::new());
        assert!(matches!(evaluate("x", &labels, &scorer, &[10]), Err(Error::UnscoredPair(..))));
    }
}
