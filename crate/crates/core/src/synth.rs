//! Generated corpora with known purpose and mechanism structure.
//!
//! Every product draws a few tokens from one purpose pool and a few from one
//! mechanism pool, plus noise tokens. Word vectors put each pool's tokens in
//! a tight cone around a pool center. Purpose centers are mutually
//! orthogonal; mechanism centers share a common direction so that any two of
//! them have cosine `mechanism_affinity`, and are orthogonal to every purpose
//! center. Noise tokens are isotropic random unit vectors.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::corpus::{ProductDoc, SpanAnnotation};
use crate::linalg::normalized;
use crate::retrieval::{pair_key, AnalogyPairLabel, Polarity, Provenance};
use crate::vectors::WordVectorStore;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub purpose_pools: usize,
    pub mechanism_pools: usize,
    pub tokens_per_pool: usize,
    /// Products for each (purpose pool, mechanism pool) combination.
    pub products_per_combination: usize,
    /// Each content token is followed by a noise token with this probability.
    pub noise_rate: f64,
    /// Distinct pool tokens each product draws from each of its two pools.
    pub picks_per_pool: usize,
    pub noise_vocabulary: usize,
    pub vector_dim: usize,
    /// Per-token angular spread around the pool center.
    pub cluster_spread: f64,
    /// Cosine between any two mechanism centers.
    pub mechanism_affinity: f64,
    pub annotators: usize,
    /// Probability that an annotator misses a given pool token.
    pub flag_dropout: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            purpose_pools: 4,
            mechanism_pools: 3,
            tokens_per_pool: 10,
            products_per_combination: 50,
            noise_rate: 0.3,
            picks_per_pool: 3,
            noise_vocabulary: 200,
            vector_dim: 32,
            cluster_spread: 0.05,
            mechanism_affinity: 0.5,
            annotators: 4,
            flag_dropout: 0.2,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    pub fn product_count(&self) -> usize {
        self.purpose_pools * self.mechanism_pools * self.products_per_combination
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        for (name, r) in [
            ("noise_rate", self.noise_rate),
            ("flag_dropout", self.flag_dropout),
            ("mechanism_affinity", self.mechanism_affinity),
        ] {
            if !(0.0..=1.0).contains(&r) {
                return bad(format!("{name} must lie in [0, 1], got {r}"));
            }
        }
        if !(self.cluster_spread >= 0.0 && self.cluster_spread.is_finite()) {
            return bad(format!("cluster_spread must be finite and non-negative, got {}", self.cluster_spread));
        }
        for (name, n) in [
            ("purpose_pools", self.purpose_pools),
            ("mechanism_pools", self.mechanism_pools),
            ("tokens_per_pool", self.tokens_per_pool),
            ("products_per_combination", self.products_per_combination),
            ("picks_per_pool", self.picks_per_pool),
            ("annotators", self.annotators),
        ] {
            if n == 0 {
                return bad(format!("{name} must be positive"));
            }
        }
        if self.picks_per_pool > self.tokens_per_pool {
            return bad(format!(
                "picks_per_pool ({}) exceeds tokens_per_pool ({})",
                self.picks_per_pool, self.tokens_per_pool
            ));
        }
        if self.noise_rate > 0.0 && self.noise_vocabulary == 0 {
            return bad("noise_vocabulary must be positive when noise_rate > 0".into());
        }
        let needed = self.purpose_pools + self.mechanism_pools + 1;
        if self.vector_dim < needed {
            return bad(format!("vector_dim must be at least {needed} for this pool layout"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticProduct {
    pub doc: ProductDoc,
    pub annotations: Vec<SpanAnnotation>,
    pub purpose_pool: usize,
    pub mechanism_pool: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCorpus {
    pub products: Vec<SyntheticProduct>,
    /// Word vectors in generation order: purpose pools, mechanism pools, noise.
    pub vectors: Vec<(String, Vec<f64>)>,
    /// Sorted by pair key.
    pub labels: Vec<AnalogyPairLabel>,
}

impl SyntheticCorpus {
    pub fn docs(&self) -> Vec<ProductDoc> {
        self.products.iter().map(|p| p.doc.clone()).collect()
    }

    /// Word vectors with document frequencies taken from this corpus.
    pub fn store(&self) -> Result<WordVectorStore> {
        let mut store = WordVectorStore::from_entries(self.vectors.iter().cloned())?;
        store.set_document_frequencies(&self.docs());
        Ok(store)
    }
}

pub fn purpose_token(pool: usize, t: usize) -> String {
    format!("pur{pool}t{t}")
}

pub fn mechanism_token(pool: usize, t: usize) -> String {
    format!("mech{pool}t{t}")
}

pub fn noise_token(i: usize) -> String {
    format!("noise{i}")
}

fn gaussian(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.sample(StandardNormal)).collect()
}

fn unit(i: usize, dim: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[i] = 1.0;
    v
}

fn around(center: &[f64], spread: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let jitter = gaussian(rng, center.len());
    let scale = spread / libm::sqrt(center.len() as f64);
    let v: Vec<f64> = center.iter().zip(&jitter).map(|(c, j)| c + scale * j).collect();
    normalized(&v).expect("jittered center is non-zero")
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        if let Ok(v) = normalized(&gaussian(rng, dim)) {
            return v;
        }
    }
}

pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<SyntheticCorpus> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let dim = spec.vector_dim;
    let (np, nm) = (spec.purpose_pools, spec.mechanism_pools);

    let purpose_pools: Vec<Vec<String>> =
        (0..np).map(|p| (0..spec.tokens_per_pool).map(|t| purpose_token(p, t)).collect()).collect();
    let mechanism_pools: Vec<Vec<String>> =
        (0..nm).map(|m| (0..spec.tokens_per_pool).map(|t| mechanism_token(m, t)).collect()).collect();
    let noise: Vec<String> = (0..spec.noise_vocabulary).map(noise_token).collect();

    let mut seen = BTreeSet::new();
    for t in purpose_pools.iter().chain(&mechanism_pools).flatten().chain(&noise) {
        if !seen.insert(t.as_str()) {
            return Err(Error::InvalidConfig(format!("pool collision on token {t:?}")));
        }
    }

    let a = spec.mechanism_affinity;
    let shared = unit(np, dim);
    let mut vectors = Vec::with_capacity(seen.len());
    for (p, pool) in purpose_pools.iter().enumerate() {
        let center = unit(p, dim);
        for t in pool {
            vectors.push((t.clone(), around(&center, spec.cluster_spread, &mut rng)));
        }
    }
    for (m, pool) in mechanism_pools.iter().enumerate() {
        let own = unit(np + 1 + m, dim);
        let center: Vec<f64> =
            shared.iter().zip(&own).map(|(s, o)| libm::sqrt(a) * s + libm::sqrt(1.0 - a) * o).collect();
        for t in pool {
            vectors.push((t.clone(), around(&center, spec.cluster_spread, &mut rng)));
        }
    }
    for t in &noise {
        vectors.push((t.clone(), random_unit(&mut rng, dim)));
    }

    let width = format!("{}", spec.product_count().saturating_sub(1)).len();
    let mut products = Vec::with_capacity(spec.product_count());
    for p in 0..np {
        for m in 0..nm {
            for _ in 0..spec.products_per_combination {
                let id = format!("syn{:0width$}", products.len());
                products.push(product(id, p, m, &purpose_pools[p], &mechanism_pools[m], &noise, spec, &mut rng)?);
            }
        }
    }
    let labels = ground_truth(&products, &mut rng);
    Ok(SyntheticCorpus { products, vectors, labels })
}

#[allow(clippy::too_many_arguments)]
fn product(
    id: String,
    p: usize,
    m: usize,
    purpose_pool: &[String],
    mechanism_pool: &[String],
    noise: &[String],
    spec: &SyntheticSpec,
    rng: &mut ChaCha8Rng,
) -> Result<SyntheticProduct> {
    #[derive(Clone, Copy, PartialEq)]
    enum Kind {
        Purpose,
        Mechanism,
        Noise,
    }
    let mut words: Vec<(&str, Kind)> = Vec::new();
    for (pool, kind) in [(purpose_pool, Kind::Purpose), (mechanism_pool, Kind::Mechanism)] {
        for t in pool.choose_multiple(rng, spec.picks_per_pool) {
            words.push((t, kind));
            if rng.gen_bool(spec.noise_rate) {
                words.push((&noise[rng.gen_range(0..noise.len())], Kind::Noise));
            }
        }
    }
    words.shuffle(rng);

    let mut text = String::new();
    let mut spans = Vec::with_capacity(words.len());
    for (w, kind) in &words {
        if !text.is_empty() {
            text.push(' ');
        }
        let start = text.chars().count();
        text.push_str(w);
        spans.push((start, start + w.chars().count(), *kind));
    }

    let annotations = (0..spec.annotators)
        .map(|k| {
            let mut ann = SpanAnnotation { annotator_id: format!("w{k}"), ..Default::default() };
            for &(s, e, kind) in &spans {
                if kind == Kind::Noise || rng.gen_bool(spec.flag_dropout) {
                    continue;
                }
                match kind {
                    Kind::Purpose => ann.purpose_spans.push((s, e)),
                    _ => ann.mechanism_spans.push((s, e)),
                }
            }
            ann
        })
        .collect();

    let doc = ProductDoc::new(id, format!("purpose {p} mechanism {m}"), text)?;
    Ok(SyntheticProduct { doc, annotations, purpose_pool: p, mechanism_pool: m })
}

/// Positives: every pair sharing a purpose pool but not a mechanism pool.
/// Negatives: as many pairs again, sampled without replacement from pairs
/// with different purpose pools.
fn ground_truth(products: &[SyntheticProduct], rng: &mut ChaCha8Rng) -> Vec<AnalogyPairLabel> {
    let mut positives = Vec::new();
    let mut others = Vec::new();
    for i in 0..products.len() {
        for j in i + 1..products.len() {
            let (a, b) = (&products[i], &products[j]);
            if a.purpose_pool == b.purpose_pool {
                if a.mechanism_pool != b.mechanism_pool {
                    positives.push((i, j));
                }
            } else {
                others.push((i, j));
            }
        }
    }
    let n_neg = positives.len().min(others.len());
    let mut picked = rand::seq::index::sample(rng, others.len(), n_neg).into_vec();
    picked.sort_unstable();

    let label = |(i, j): (usize, usize), positive: bool| {
        let (a, b) = pair_key(&products[i].doc.id, &products[j].doc.id);
        AnalogyPairLabel {
            seed_id: a.into(),
            candidate_id: b.into(),
            label: if positive { Polarity::Positive } else { Polarity::Negative },
            provenance: Provenance::Generated,
        }
    };
    let mut labels: Vec<AnalogyPairLabel> = positives
        .into_iter()
        .map(|pair| label(pair, true))
        .chain(picked.into_iter().map(|k| label(others[k], false)))
        .collect();
    labels.sort_by(|x, y| x.key().cmp(&y.key()));
    labels
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::align_annotations;
    use crate::linalg::dot;

    fn small() -> SyntheticSpec {
        SyntheticSpec { products_per_combination: 5, ..Default::default() }
    }

    #[test]
    fn single_pools_give_no_positives() {
        let spec = SyntheticSpec { purpose_pools: 1, mechanism_pools: 1, ..small() };
        let c = generate_synthetic(&spec).unwrap();
        assert!(c.labels.iter().all(|l| !l.is_positive()));
        assert!(c.labels.is_empty());
    }

    #[test]
    fn zero_dropout_annotators_agree() {
        let spec = SyntheticSpec { flag_dropout: 0.0, ..small() };
        let c = generate_synthetic(&spec).unwrap();
        for p in &c.products {
            let first = &p.annotations[0];
            assert_eq!(p.annotations.len(), 4);
            for a in &p.annotations[1..] {
                assert_eq!(a.purpose_spans, first.purpose_spans);
                assert_eq!(a.mechanism_spans, first.mechanism_spans);
            }
        }
    }

    #[test]
    fn positives_per_product() {
        let c = generate_synthetic(&SyntheticSpec::default()).unwrap();
        assert_eq!(c.products.len(), 600);
        let mut per = alloc::collections::BTreeMap::<&str, usize>::new();
        for l in c.labels.iter().filter(|l| l.is_positive()) {
            *per.entry(&l.seed_id).or_default() += 1;
            *per.entry(&l.candidate_id).or_default() += 1;
        }
        assert_eq!(per.len(), 600);
        assert!(per.values().all(|&n| n == 100));
        let neg = c.labels.iter().filter(|l| !l.is_positive()).count();
        assert_eq!(neg, 600 * 100 / 2);
    }

    #[test]
    fn annotations_flag_only_pool_tokens() {
        let c = generate_synthetic(&small()).unwrap();
        for p in &c.products {
            let set = align_annotations(&p.doc, &p.annotations).unwrap();
            for r in set.records() {
                for (tok, (&fp, &fm)) in p.doc.tokens.iter().zip(r.purpose_flags.iter().zip(&r.mechanism_flags)) {
                    assert!(!fp || tok.starts_with("pur"));
                    assert!(!fm || tok.starts_with("mech"));
                }
            }
        }
    }

    #[test]
    fn center_geometry() {
        let spec = SyntheticSpec { cluster_spread: 0.0, ..small() };
        let c = generate_synthetic(&spec).unwrap();
        let v = |t: &str| c.vectors.iter().find(|(k, _)| k == t).unwrap().1.clone();
        assert!((dot(&v("mech0t0"), &v("mech1t0")) - 0.5).abs() < 1e-12);
        assert!(dot(&v("pur0t0"), &v("pur1t0")).abs() < 1e-12);
        assert!(dot(&v("pur0t0"), &v("mech2t0")).abs() < 1e-12);
    }

    #[test]
    fn deterministic_and_rejects_bad_rates() {
        assert_eq!(generate_synthetic(&small()).unwrap(), generate_synthetic(&small()).unwrap());
        assert!(generate_synthetic(&SyntheticSpec { noise_rate: 1.5, ..small() }).is_err());
        assert!(generate_synthetic(&SyntheticSpec { picks_per_pool: 11, ..small() }).is_err());
    }
}
