//! Command-line definitions and the command runner.

use std::io::Write;
use std::path::{Path, PathBuf};

use analogy_core::corpus::Label;
use analogy_core::encoder::{gradient_check, train, EncoderModel, TrainConfig, TrainingExample};
use analogy_core::ideation::InspirationConfig;
use analogy_core::interpret::interpret;
use analogy_core::retrieval::{
    build_labels_from_search_log, keyword_search, query_same_mechanism_diff_purpose,
    query_same_purpose_diff_mechanism, QueryStatus, Seed, TABLE_LEVELS,
};
use analogy_core::synth::{generate_synthetic, SyntheticSpec};
use analogy_core::Error as CoreError;
use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::*;
use crate::error::FormatError;
use crate::formats::*;
use crate::pipeline::*;

/// Gradient checks pass below this maximum relative error.
pub const GRADCHECK_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Parser)]
#[command(name = "analogy", version, about = "Purpose/mechanism analogy mining")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a corpus, its annotations and word vectors; write cleaned copies.
    Ingest(IngestArgs),
    /// Build purpose and mechanism target vectors from annotations.
    Targets(TargetsArgs),
    /// Train the encoder on targets.
    Train(TrainArgs),
    /// Encode every product with a trained checkpoint.
    Predict(PredictArgs),
    /// Explain a product's predicted vectors with nearest words and a sparse code.
    Interpret(InterpretArgs),
    /// Constrained analogy queries, or keyword search.
    Query(QueryArgs),
    /// Precision and recall of learned and baseline scorers on labeled pairs.
    Evaluate(EvaluateArgs),
    /// Generate diversified inspiration sets.
    Inspire(InspireArgs),
    /// Compare analytic and finite-difference gradients on a random model.
    Gradcheck(GradcheckArgs),
    /// Write a generated corpus with annotations, word vectors and labels.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory; also where inputs are looked up by default.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct Inputs {
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub vectors: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub inputs: Inputs,
    #[arg(long)]
    pub annotations: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TargetsArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub inputs: Inputs,
    #[arg(long)]
    pub annotations: Option<PathBuf>,
    /// D: annotated tokens kept per target.
    #[arg(long)]
    pub top_tokens: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub inputs: Inputs,
    #[arg(long)]
    pub targets: Option<PathBuf>,
    /// Where to write the trained checkpoint.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long)]
    pub hidden: Option<usize>,
    #[arg(long)]
    pub max_len: Option<usize>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub clip_norm: Option<f64>,
    /// λ, the weight of the purpose loss.
    #[arg(long)]
    pub purpose_weight: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub inputs: Inputs,
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Purpose,
    Mechanism,
    Both,
}

#[derive(Debug, Args)]
pub struct InterpretArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub inputs: Inputs,
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Product to explain.
    #[arg(long)]
    pub id: String,
    #[arg(long, value_enum, default_value_t = Kind::Both)]
    pub kind: Kind,
    #[arg(long)]
    pub nearest: Option<usize>,
    #[arg(long)]
    pub sparsity: Option<usize>,
    #[arg(long)]
    pub display_threshold: Option<f64>,
    /// Print JSON instead of the two-column text report.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Same {
    /// Near purpose, mechanism distance at least the threshold.
    Purpose,
    /// Near mechanism, purpose distance at least the threshold.
    Mechanism,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[command(flatten)]
    pub common: Common,
    /// Encoded products written by `predict`.
    #[arg(long)]
    pub encoded: Option<PathBuf>,
    /// Seed product id.
    #[arg(long, required_unless_present = "keywords", conflicts_with = "keywords")]
    pub id: Option<String>,
    #[arg(long, value_enum, default_value_t = Same::Purpose)]
    pub same: Same,
    /// Minimum distance on the axis that must differ.
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long, default_value_t = 10)]
    pub limit: usize,
    /// Rank products by matching keywords instead.
    #[arg(long, num_args = 1..)]
    pub keywords: Option<Vec<String>>,
    #[arg(long)]
    pub corpus: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub inputs: Inputs,
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long, conflicts_with = "search_log")]
    pub labels: Option<PathBuf>,
    #[arg(long)]
    pub search_log: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InspireArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub inputs: Inputs,
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// K
    #[arg(long)]
    pub clusters: Option<usize>,
    /// P
    #[arg(long)]
    pub seeds: Option<usize>,
    /// M
    #[arg(long)]
    pub inspirations: Option<usize>,
    #[arg(long)]
    pub kmeans_iters: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GradcheckArgs {
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub hidden: usize,
    #[arg(long, default_value_t = 6)]
    pub dim: usize,
    /// Longest sequence; the batch holds sequences of length 1 up to this.
    #[arg(long, default_value_t = 5)]
    pub len: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub eps: f64,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 4)]
    pub purpose_pools: usize,
    #[arg(long, default_value_t = 3)]
    pub mechanism_pools: usize,
    #[arg(long, default_value_t = 10)]
    pub tokens_per_pool: usize,
    /// Products per (purpose pool, mechanism pool) combination.
    #[arg(long, default_value_t = 50)]
    pub products: usize,
    #[arg(long, default_value_t = 0.3)]
    pub noise_rate: f64,
    #[arg(long, default_value_t = 0.2)]
    pub dropout: f64,
}

macro_rules! set {
    ($cfg:ident . $field:ident, $value:expr) => {
        if let Some(v) = $value {
            $cfg.$field = v.clone();
        }
    };
}

fn base_config(common: &Common) -> anyhow::Result<PipelineConfig> {
    let mut cfg = match &common.config {
        Some(p) => PipelineConfig::from_file(p)?,
        None => PipelineConfig::default(),
    };
    set!(cfg.out_dir, &common.out_dir);
    set!(cfg.seed, &common.seed);
    Ok(cfg)
}

fn with_inputs(common: &Common, inputs: &Inputs) -> anyhow::Result<PipelineConfig> {
    let mut cfg = base_config(common)?;
    if let Some(p) = &inputs.corpus {
        cfg.corpus = Some(p.clone());
    }
    if let Some(p) = &inputs.vectors {
        cfg.vectors = Some(p.clone());
    }
    Ok(cfg)
}

fn set_path(slot: &mut Option<PathBuf>, flag: &Option<PathBuf>) {
    if flag.is_some() {
        slot.clone_from(flag);
    }
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (a.canonicalize(), b.canonicalize()) {
        (Ok(x), Ok(y)) => x == y,
        _ => a == b,
    }
}

fn guard_inputs(output: &Path, inputs: &[&Path]) -> Result<(), FormatError> {
    match inputs.iter().find(|i| same_file(output, i)) {
        Some(_) => Err(FormatError::WouldOverwriteInput(output.to_path_buf())),
        None => Ok(()),
    }
}

/// Runs one command, writing its summary line to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<()> {
    match cli.command {
        Command::Ingest(a) => ingest(a, out),
        Command::Targets(a) => targets(a, out),
        Command::Train(a) => train_cmd(a, out),
        Command::Predict(a) => predict(a, out),
        Command::Interpret(a) => interpret_cmd(a, out),
        Command::Query(a) => query(a, out),
        Command::Evaluate(a) => evaluate_cmd(a, out),
        Command::Inspire(a) => inspire(a, out),
        Command::Gradcheck(a) => gradcheck(a, out),
        Command::Synth(a) => synth(a, out),
    }
}

fn ingest(a: IngestArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let mut cfg = with_inputs(&a.common, &a.inputs)?;
    set_path(&mut cfg.annotations, &a.annotations);
    cfg.validate()?;
    let (corpus_in, vectors_in) = (cfg.corpus_path(), cfg.vectors_path());
    let corpus_out = cfg.in_out_dir(CORPUS_FILE);
    let vectors_out = cfg.in_out_dir(VECTORS_FILE);
    let annotations_out = cfg.in_out_dir(ANNOTATIONS_FILE);
    let mut inputs = vec![corpus_in.as_path(), vectors_in.as_path()];
    let annotations_in = cfg.annotations.clone();
    if let Some(p) = &annotations_in {
        inputs.push(p);
    }
    for o in [&corpus_out, &vectors_out, &annotations_out] {
        guard_inputs(o, &inputs)?;
    }

    let docs = load_corpus(&corpus_in)?;
    check_unique(&docs)?;
    let store = load_store(&vectors_in, &docs)?;
    let vocab = vocabulary(&docs);
    let mut annotated = 0;
    if let Some(p) = &annotations_in {
        let ann = load_annotations(p)?;
        let (targets, summary) = build_targets(&docs, &ann, &store, cfg.top_tokens)?;
        annotated = targets.len() + summary.untargetable;
        save_annotations(
            &annotations_out,
            docs.iter().filter_map(|d| ann.get(&d.id).map(|v| (d.id.as_str(), v))).flat_map(|(id, v)| v.iter().map(move |a| (id, a))),
        )?;
    }
    save_corpus(&corpus_out, &docs)?;
    save_word_vectors(&vectors_out, store.iter())?;
    writeln!(
        out,
        "ingested {} products ({annotated} annotated); {} of {} vocabulary tokens have vectors (d = {})",
        docs.len(),
        store.len(),
        vocab.len(),
        store.dim()
    )?;
    Ok(())
}

fn check_unique(docs: &[analogy_core::corpus::ProductDoc]) -> anyhow::Result<()> {
    analogy_core::corpus::check_unique_ids(docs)?;
    Ok(())
}

fn targets(a: TargetsArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let mut cfg = with_inputs(&a.common, &a.inputs)?;
    set_path(&mut cfg.annotations, &a.annotations);
    set!(cfg.top_tokens, &a.top_tokens);
    cfg.validate()?;
    let docs = load_corpus(&cfg.corpus_path())?;
    let store = load_store(&cfg.vectors_path(), &docs)?;
    let ann = load_annotations(&cfg.annotations_path())?;
    let (targets, summary) = build_targets(&docs, &ann, &store, cfg.top_tokens)?;
    let path = a.out.unwrap_or_else(|| cfg.in_out_dir(TARGETS_FILE));
    save_targets(&path, &targets)?;
    writeln!(
        out,
        "wrote {} targets to {} ({} unannotated, {} untargetable)",
        summary.built,
        path.display(),
        summary.unannotated,
        summary.untargetable
    )?;
    Ok(())
}

fn train_cmd(a: TrainArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let mut cfg = with_inputs(&a.common, &a.inputs)?;
    set_path(&mut cfg.checkpoint, &a.checkpoint);
    set!(cfg.hidden, &a.hidden);
    set!(cfg.max_len, &a.max_len);
    set!(cfg.learning_rate, &a.lr);
    set!(cfg.epochs, &a.epochs);
    set!(cfg.batch_size, &a.batch_size);
    set!(cfg.clip_norm, &a.clip_norm);
    set!(cfg.purpose_weight, &a.purpose_weight);
    cfg.validate()?;
    let docs = load_corpus(&cfg.corpus_path())?;
    let store = load_store(&cfg.vectors_path(), &docs)?;
    let targets = load_targets(&a.targets.unwrap_or_else(|| cfg.in_out_dir(TARGETS_FILE)))?;
    let data = training_examples(&docs, &targets, &store, cfg.max_len);
    if data.is_empty() {
        bail!("no trainable examples");
    }

    let mut model = EncoderModel::new(store.dim(), cfg.hidden, cfg.seed).with_max_len(cfg.max_len);
    let tc = TrainConfig {
        learning_rate: cfg.learning_rate,
        epochs: cfg.epochs,
        batch_size: cfg.batch_size,
        clip_norm: cfg.clip_norm,
        seed: cfg.seed,
        purpose_weight: cfg.purpose_weight,
    };
    let ck = cfg.checkpoint_path();
    let log = match train(&mut model, &data, &tc) {
        Ok(log) => log,
        Err(e @ CoreError::Diverged { .. }) => {
            save_checkpoint(&ck, &model)?;
            return Err(e).context(format!("last good parameters saved to {}", ck.display()));
        }
        Err(e) => return Err(e.into()),
    };
    save_checkpoint(&ck, &model)?;
    save_train_log(&cfg.in_out_dir(TRAIN_LOG_FILE), &log.epoch_losses)?;
    let first = log.epoch_losses.first().copied().unwrap_or(f64::NAN);
    let last = log.epoch_losses.last().copied().unwrap_or(f64::NAN);
    writeln!(
        out,
        "trained on {} examples for {} epochs: loss {first:.6} -> {last:.6}; checkpoint {}",
        data.len(),
        cfg.epochs,
        ck.display()
    )?;
    Ok(())
}

fn load_model_and_inputs(
    cfg: &PipelineConfig,
) -> anyhow::Result<(EncoderModel, Vec<analogy_core::corpus::ProductDoc>, analogy_core::vectors::WordVectorStore)> {
    let model = load_checkpoint(&cfg.checkpoint_path())?;
    let docs = load_corpus(&cfg.corpus_path())?;
    let store = load_store(&cfg.vectors_path(), &docs)?;
    if store.dim() != model.input_dim() {
        bail!("word vectors have dimension {} but the checkpoint expects {}", store.dim(), model.input_dim());
    }
    Ok((model, docs, store))
}

fn predict(a: PredictArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let mut cfg = with_inputs(&a.common, &a.inputs)?;
    set_path(&mut cfg.checkpoint, &a.checkpoint);
    let (model, docs, store) = load_model_and_inputs(&cfg)?;
    let encoded = encode_corpus(&model, &docs, &store)?;
    let path = a.out.unwrap_or_else(|| cfg.in_out_dir(ENCODED_FILE));
    save_encoded(&path, &encoded)?;
    writeln!(out, "encoded {} of {} products to {}", encoded.len(), docs.len(), path.display())?;
    Ok(())
}

fn interpret_cmd(a: InterpretArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let mut cfg = with_inputs(&a.common, &a.inputs)?;
    set_path(&mut cfg.checkpoint, &a.checkpoint);
    set!(cfg.nearest, &a.nearest);
    set!(cfg.sparsity, &a.sparsity);
    set!(cfg.display_threshold, &a.display_threshold);
    cfg.validate()?;
    let (model, docs, store) = load_model_and_inputs(&cfg)?;
    let doc = docs.iter().find(|d| d.id == a.id).ok_or_else(|| CoreError::UnknownId(a.id.clone()))?;
    let seq = analogy_core::encoder::input_sequence(&doc.tokens, &store, model.max_len());
    let f = model.forward(&seq).map_err(|source| FormatError::InProduct { id: doc.id.clone(), source })?;
    let kinds: &[(Label, &Vec<f64>)] = &[(Label::Purpose, &f.purpose), (Label::Mechanism, &f.mechanism)];
    let mut reports = Vec::new();
    for (label, v) in kinds {
        let wanted = matches!(
            (a.kind, label),
            (Kind::Both, _) | (Kind::Purpose, Label::Purpose) | (Kind::Mechanism, Label::Mechanism)
        );
        if wanted {
            let it = interpret(v, *label, &store, cfg.nearest, cfg.sparsity, cfg.display_threshold)?;
            reports.push(InterpretationReport::new(&doc.id, &it));
        }
    }
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&reports)?)?;
    } else {
        for r in &reports {
            write!(out, "{}", r.to_text())?;
        }
    }
    Ok(())
}

fn query(a: QueryArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let mut cfg = base_config(&a.common)?;
    set_path(&mut cfg.corpus, &a.corpus);
    set!(cfg.threshold, &a.threshold);
    cfg.validate()?;
    if let Some(words) = &a.keywords {
        let docs = load_corpus(&cfg.corpus_path())?;
        let terms: Vec<String> = words.iter().flat_map(|w| analogy_core::corpus::tokenize(w).unwrap_or_default()).collect();
        let hits = keyword_search(&terms, &docs)?;
        for h in hits.iter().take(a.limit) {
            writeln!(out, "{}\t{}", h.id, h.score)?;
        }
        writeln!(out, "{} products match {} terms", hits.len(), terms.len())?;
        return Ok(());
    }
    let id = a.id.as_deref().expect("clap requires --id without --keywords");
    let records = load_encoded(&a.encoded.unwrap_or_else(|| cfg.in_out_dir(ENCODED_FILE)))?;
    let index = index_from_records(&records)?;
    let outcome = match a.same {
        Same::Purpose => query_same_purpose_diff_mechanism(&index, Seed::Id(id), cfg.threshold)?,
        Same::Mechanism => query_same_mechanism_diff_purpose(&index, Seed::Id(id), cfg.threshold)?,
    };
    for c in outcome.candidates.iter().take(a.limit) {
        writeln!(out, "{}\t{:.6}\t{:.6}", c.id, c.purpose_distance, c.mechanism_distance)?;
    }
    match outcome.status {
        QueryStatus::Ok => writeln!(out, "{} candidates satisfy the threshold {}", outcome.candidates.len(), cfg.threshold)?,
        QueryStatus::Unsatisfiable => writeln!(out, "constraint unsatisfiable at threshold {}", cfg.threshold)?,
    }
    Ok(())
}

fn evaluate_cmd(a: EvaluateArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let mut cfg = with_inputs(&a.common, &a.inputs)?;
    set_path(&mut cfg.checkpoint, &a.checkpoint);
    let (model, docs, store) = load_model_and_inputs(&cfg)?;
    let labels = match (&a.labels, &a.search_log) {
        (_, Some(log)) => build_labels_from_search_log(&load_search_log(log)?),
        (Some(p), None) => load_labels(p)?,
        (None, None) => load_labels(&cfg.in_out_dir(LABELS_FILE))?,
    };
    let encoded = encode_corpus(&model, &docs, &store)?;
    let index = analogy_core::retrieval::EmbeddingIndex::from_encoded(&encoded)?;
    let results = evaluate_all(&labels, &index, &docs, &store, &TABLE_LEVELS)?;
    let path = a.out.unwrap_or_else(|| cfg.in_out_dir(EVALUATION_FILE));
    save_evaluation(&path, &results)?;
    let at5 = |m: &str| {
        results.iter().find(|r| r.method == m).and_then(|r| r.level(5)).map_or(f64::NAN, |l| l.precision)
    };
    writeln!(
        out,
        "evaluated {} labeled pairs; precision@5%: concat {:.3}, tfidf-cosine {:.3}; report {}",
        labels.len(),
        at5("concat"),
        at5("tfidf-cosine"),
        path.display()
    )?;
    Ok(())
}

fn inspire(a: InspireArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let mut cfg = with_inputs(&a.common, &a.inputs)?;
    set_path(&mut cfg.checkpoint, &a.checkpoint);
    set!(cfg.clusters, &a.clusters);
    set!(cfg.seeds, &a.seeds);
    set!(cfg.inspirations, &a.inspirations);
    set!(cfg.kmeans_iters, &a.kmeans_iters);
    cfg.validate()?;
    let (model, docs, store) = load_model_and_inputs(&cfg)?;
    let encoded = encode_corpus(&model, &docs, &store)?;
    let index = analogy_core::retrieval::EmbeddingIndex::from_encoded(&encoded)?;
    let ic = InspirationConfig {
        seeds: cfg.seeds,
        inspirations: cfg.inspirations,
        clusters: cfg.clusters,
        max_iters: cfg.kmeans_iters,
        seed: cfg.seed,
    };
    let records = inspiration_records(&index, &docs, &ic)?;
    let path = a.out.unwrap_or_else(|| cfg.in_out_dir(INSPIRATIONS_FILE));
    save_inspirations(&path, &records)?;
    let total: usize = records.iter().map(|r| r.inspirations.len()).sum();
    writeln!(out, "wrote {} seeds with {total} inspirations to {}", records.len(), path.display())?;
    Ok(())
}

fn gradcheck(a: GradcheckArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    if a.hidden == 0 || a.dim == 0 || a.len == 0 {
        bail!("hidden, dim and len must be positive");
    }
    let model = EncoderModel::new(a.dim, a.hidden, a.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed.wrapping_add(1));
    let unit = |rng: &mut ChaCha8Rng| {
        let v: Vec<f64> = (0..a.dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        analogy_core::linalg::normalized(&v)
    };
    let mut batch = Vec::new();
    for t in 1..=a.len {
        let inputs = (0..t).map(|_| (0..a.dim).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let purpose = unit(&mut rng)?;
        let mechanism = unit(&mut rng)?;
        batch.push(TrainingExample { product_id: format!("g{t}"), inputs, purpose, mechanism });
    }
    let r = gradient_check(&model, &batch, 0.5, a.eps)?;
    writeln!(
        out,
        "max relative error {:.3e} over {} parameters (worst: {}[{}], analytic {:.6e}, numeric {:.6e})",
        r.max_relative_error, r.checked, r.worst_block, r.worst_index, r.analytic, r.numeric
    )?;
    if !(r.max_relative_error < GRADCHECK_TOLERANCE) {
        bail!("gradient check failed: {:.3e} ≥ {GRADCHECK_TOLERANCE:e}", r.max_relative_error);
    }
    Ok(())
}

fn synth(a: SynthArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let cfg = base_config(&a.common)?;
    let spec = SyntheticSpec {
        purpose_pools: a.purpose_pools,
        mechanism_pools: a.mechanism_pools,
        tokens_per_pool: a.tokens_per_pool,
        products_per_combination: a.products,
        noise_rate: a.noise_rate,
        flag_dropout: a.dropout,
        seed: cfg.seed,
        ..Default::default()
    };
    let corpus = generate_synthetic(&spec)?;
    write_synthetic(&cfg.out_dir, &corpus)?;
    let positives = corpus.labels.iter().filter(|l| l.is_positive()).count();
    writeln!(
        out,
        "wrote {} products, {} word vectors and {} labels ({positives} positive) to {}",
        corpus.products.len(),
        corpus.vectors.len(),
        corpus.labels.len(),
        cfg.out_dir.display()
    )?;
    Ok(())
}
