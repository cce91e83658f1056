//! Bidirectional GRU encoder with purpose and mechanism projection heads.
//!
//! A document's word vectors are read left-to-right by one GRU and
//! right-to-left by another. The two final states are concatenated into a
//! shared state `h` of size `2H`, and two bias-free linear heads map it to
//! the purpose and mechanism predictions: `p̂ = W_p h`, `m̂ = W_m h`.
//!
//! Training minimises `λ·MSE(p̂, p) + (1−λ)·MSE(m̂, m)` averaged over the
//! batch, with gradients from backpropagation through time.

mod gradcheck;
mod gru;
mod train;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use gradcheck::{gradient_check, GradCheckReport};
pub use gru::GruWeights;
pub use train::{train, Adam, TrainConfig, TrainLog};

use crate::linalg::{self, Matrix};
use crate::vectors::WordVectorStore;
use crate::{Error, Result};

pub const DEFAULT_HIDDEN: usize = 128;
pub const DEFAULT_MAX_LEN: usize = 200;

/// All trainable parameters. Also used as the gradient container.
#[derive(Debug, Clone, PartialEq)]
pub struct EncoderParams {
    pub forward: GruWeights,
    pub backward: GruWeights,
    /// `d × 2H`
    pub w_p: Matrix,
    /// `d × 2H`
    pub w_m: Matrix,
}

/// Names of the parameter blocks, in the order of [`EncoderParams::blocks`].
pub const BLOCK_NAMES: [&str; 20] = [
    "forward.w_z",
    "forward.w_r",
    "forward.w_n",
    "forward.u_z",
    "forward.u_r",
    "forward.u_n",
    "forward.b_z",
    "forward.b_r",
    "forward.b_n",
    "backward.w_z",
    "backward.w_r",
    "backward.w_n",
    "backward.u_z",
    "backward.u_r",
    "backward.u_n",
    "backward.b_z",
    "backward.b_r",
    "backward.b_n",
    "w_p",
    "w_m",
];

impl EncoderParams {
    pub fn zeros(input_dim: usize, hidden_dim: usize) -> Self {
        Self {
            forward: GruWeights::zeros(input_dim, hidden_dim),
            backward: GruWeights::zeros(input_dim, hidden_dim),
            w_p: Matrix::zeros(input_dim, 2 * hidden_dim),
            w_m: Matrix::zeros(input_dim, 2 * hidden_dim),
        }
    }

    pub fn blocks(&self) -> Vec<&[f64]> {
        let mut out: Vec<&[f64]> = Vec::with_capacity(20);
        out.extend(self.forward.blocks());
        out.extend(self.backward.blocks());
        out.push(self.w_p.as_slice());
        out.push(self.w_m.as_slice());
        out
    }

    pub fn blocks_mut(&mut self) -> Vec<&mut [f64]> {
        let mut out: Vec<&mut [f64]> = Vec::with_capacity(20);
        out.extend(self.forward.blocks_mut());
        out.extend(self.backward.blocks_mut());
        out.push(self.w_p.as_mut_slice());
        out.push(self.w_m.as_mut_slice());
        out
    }

    pub fn len(&self) -> usize {
        self.blocks().iter().map(|b| b.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// First block holding a NaN or infinity.
    pub fn first_non_finite(&self) -> Option<&'static str> {
        self.blocks()
            .iter()
            .zip(BLOCK_NAMES)
            .find(|(b, _)| b.iter().any(|x| !x.is_finite()))
            .map(|(_, name)| name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncoderModel {
    input_dim: usize,
    hidden_dim: usize,
    max_len: usize,
    seed: u64,
    pub params: EncoderParams,
}

impl EncoderModel {
    /// Random init, uniform in `[-1/√H, 1/√H]`.
    pub fn new(input_dim: usize, hidden_dim: usize, seed: u64) -> Self {
        let mut params = EncoderParams::zeros(input_dim, hidden_dim);
        let bound = 1.0 / libm::sqrt(hidden_dim as f64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for block in params.blocks_mut() {
            for x in block.iter_mut() {
                *x = rng.gen_range(-bound..=bound);
            }
        }
        Self { input_dim, hidden_dim, max_len: DEFAULT_MAX_LEN, seed, params }
    }

    /// Rebuilds a model around existing parameters, checking their shapes.
    pub fn from_params(params: EncoderParams, max_len: usize, seed: u64) -> Result<Self> {
        let input_dim = params.forward.input_dim();
        let hidden_dim = params.forward.hidden_dim();
        let expected = EncoderParams::zeros(input_dim, hidden_dim);
        for (a, b) in params.blocks().iter().zip(expected.blocks()) {
            if a.len() != b.len() {
                return Err(Error::DimensionMismatch { expected: b.len(), found: a.len() });
            }
        }
        if max_len == 0 {
            return Err(Error::InvalidConfig("max_len must be positive".into()));
        }
        Ok(Self { input_dim, hidden_dim, max_len, seed, params })
    }

    pub fn with_max_len(mut self, max_len: usize) -> Self {
        self.max_len = max_len.max(1);
        self
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn hidden_dim(&self) -> usize {
        self.hidden_dim
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn check_inputs<S: AsRef<[f64]>>(&self, seq: &[S]) -> Result<()> {
        if seq.is_empty() {
            return Err(Error::EmptySequence);
        }
        for x in seq {
            if x.as_ref().len() != self.input_dim {
                return Err(Error::DimensionMismatch { expected: self.input_dim, found: x.as_ref().len() });
            }
        }
        Ok(())
    }

    fn trace<S: AsRef<[f64]>>(&self, seq: &[S]) -> Result<Trace> {
        self.check_inputs(seq)?;
        let inputs: Vec<&[f64]> = seq.iter().take(self.max_len).map(AsRef::as_ref).collect();
        let fwd = self.params.forward.run(inputs.iter().copied());
        let bwd = self.params.backward.run(inputs.iter().rev().copied());
        let mut state = fwd.last().expect("non-empty").h.clone();
        state.extend_from_slice(&bwd.last().expect("non-empty").h);
        let purpose = self.params.w_p.mul_vec(&state);
        let mechanism = self.params.w_m.mul_vec(&state);
        Ok(Trace { fwd, bwd, state, purpose, mechanism })
    }

    /// Encodes one word-vector sequence (truncated to `max_len`).
    pub fn forward<S: AsRef<[f64]>>(&self, seq: &[S]) -> Result<Forward> {
        let t = self.trace(seq)?;
        Ok(Forward { state: t.state, purpose: t.purpose, mechanism: t.mechanism })
    }

    pub fn predict<S: AsRef<[f64]>>(&self, product_id: impl Into<String>, seq: &[S]) -> Result<EncodedDoc> {
        let f = self.forward(seq)?;
        Ok(EncodedDoc {
            product_id: product_id.into(),
            purpose_unit: linalg::normalized(&f.purpose)?,
            mechanism_unit: linalg::normalized(&f.mechanism)?,
            purpose: f.purpose,
            mechanism: f.mechanism,
        })
    }
}

struct Trace {
    fwd: Vec<gru::StepCache>,
    bwd: Vec<gru::StepCache>,
    state: Vec<f64>,
    purpose: Vec<f64>,
    mechanism: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Forward {
    /// Concatenated final states `[→h ; ←h]`, length `2H`.
    pub state: Vec<f64>,
    pub purpose: Vec<f64>,
    pub mechanism: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncodedDoc {
    pub product_id: String,
    pub purpose: Vec<f64>,
    pub mechanism: Vec<f64>,
    pub purpose_unit: Vec<f64>,
    pub mechanism_unit: Vec<f64>,
}

/// Word vectors of the in-vocabulary tokens, in order, truncated to `max_len`.
pub fn input_sequence<'a>(tokens: &[String], store: &'a WordVectorStore, max_len: usize) -> Vec<&'a [f64]> {
    tokens.iter().filter_map(|t| store.vector(t)).take(max_len).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingExample {
    pub product_id: String,
    pub inputs: Vec<Vec<f64>>,
    pub purpose: Vec<f64>,
    pub mechanism: Vec<f64>,
}

fn mse(pred: &[f64], target: &[f64]) -> f64 {
    let d = pred.len() as f64;
    pred.iter().zip(target).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / d
}

fn check_weight(purpose_weight: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&purpose_weight) {
        return Err(Error::InvalidConfig(alloc::format!("loss weight {purpose_weight} outside [0, 1]")));
    }
    Ok(())
}

fn check_targets(model: &EncoderModel, ex: &TrainingExample) -> Result<()> {
    for t in [&ex.purpose, &ex.mechanism] {
        if t.len() != model.input_dim {
            return Err(Error::DimensionMismatch { expected: model.input_dim, found: t.len() });
        }
    }
    Ok(())
}

/// Batch-mean of `λ·MSE(p̂, p) + (1−λ)·MSE(m̂, m)`.
pub fn loss(model: &EncoderModel, batch: &[TrainingExample], purpose_weight: f64) -> Result<f64> {
    check_weight(purpose_weight)?;
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let mut total = 0.0;
    for ex in batch {
        check_targets(model, ex)?;
        let f = model.forward(&ex.inputs)?;
        total += purpose_weight * mse(&f.purpose, &ex.purpose)
            + (1.0 - purpose_weight) * mse(&f.mechanism, &ex.mechanism);
    }
    Ok(total / batch.len() as f64)
}

/// Loss and its exact gradient with respect to every parameter.
pub fn backward(model: &EncoderModel, batch: &[TrainingExample], purpose_weight: f64) -> Result<(f64, EncoderParams)> {
    check_weight(purpose_weight)?;
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let hd = model.hidden_dim;
    let d = model.input_dim as f64;
    let scale = 1.0 / batch.len() as f64;
    let mut grad = EncoderParams::zeros(model.input_dim, hd);
    let mut total = 0.0;
    for ex in batch {
        check_targets(model, ex)?;
        let t = model.trace(&ex.inputs)?;
        total += purpose_weight * mse(&t.purpose, &ex.purpose)
            + (1.0 - purpose_weight) * mse(&t.mechanism, &ex.mechanism);

        let dp: Vec<f64> = t
            .purpose
            .iter()
            .zip(&ex.purpose)
            .map(|(a, b)| scale * purpose_weight * 2.0 * (a - b) / d)
            .collect();
        let dm: Vec<f64> = t
            .mechanism
            .iter()
            .zip(&ex.mechanism)
            .map(|(a, b)| scale * (1.0 - purpose_weight) * 2.0 * (a - b) / d)
            .collect();
        grad.w_p.add_outer(&dp, &t.state);
        grad.w_m.add_outer(&dm, &t.state);
        let mut dstate = vec![0.0; 2 * hd];
        model.params.w_p.mul_transpose_vec_acc(&dp, &mut dstate);
        model.params.w_m.mul_transpose_vec_acc(&dm, &mut dstate);

        let inputs: Vec<&[f64]> = ex.inputs.iter().take(model.max_len).map(Vec::as_slice).collect();
        model.params.forward.backward(&inputs, &t.fwd, &dstate[..hd], &mut grad.forward);
        let reversed: Vec<&[f64]> = inputs.iter().rev().copied().collect();
        model.params.backward.backward(&reversed, &t.bwd, &dstate[hd..], &mut grad.backward);
    }
    if let Some(block) = grad.first_non_finite() {
        return Err(Error::NonFiniteGradient(block));
    }
    Ok((total * scale, grad))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_inputs(seed: u64, t: usize, d: usize) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..t).map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect()
    }

    #[test]
    fn zero_parameters_give_zero_outputs() {
        let model = EncoderModel::from_params(EncoderParams::zeros(6, 4), 200, 0).unwrap();
        let f = model.forward(&random_inputs(1, 3, 6)).unwrap();
        assert!(f.state.iter().all(|&x| x == 0.0));
        assert!(f.purpose.iter().chain(&f.mechanism).all(|&x| x == 0.0));
    }

    #[test]
    fn single_step_symmetric_directions() {
        let mut model = EncoderModel::new(6, 4, 42);
        model.params.backward = model.params.forward.clone();
        let f = model.forward(&random_inputs(2, 1, 6)).unwrap();
        assert_eq!(f.state[..4], f.state[4..]);
    }

    #[test]
    fn forward_errors() {
        let model = EncoderModel::new(6, 4, 1);
        let empty: Vec<Vec<f64>> = Vec::new();
        assert_eq!(model.forward(&empty).unwrap_err(), Error::EmptySequence);
        assert_eq!(
            model.forward(&[vec![0.0; 5]]).unwrap_err(),
            Error::DimensionMismatch { expected: 6, found: 5 }
        );
        assert_eq!(model.predict("x", &empty).unwrap_err(), Error::EmptySequence);
    }

    #[test]
    fn prepending_a_token_changes_output() {
        let model = EncoderModel::new(6, 4, 3);
        let seq = random_inputs(4, 4, 6);
        let mut longer = random_inputs(5, 1, 6);
        longer.extend(seq.iter().cloned());
        assert_ne!(model.forward(&seq).unwrap(), model.forward(&longer).unwrap());
    }

    #[test]
    fn truncation_at_max_len() {
        let model = EncoderModel::new(6, 4, 3).with_max_len(2);
        let seq = random_inputs(4, 4, 6);
        assert_eq!(model.forward(&seq).unwrap(), model.forward(&seq[..2]).unwrap());
    }

    fn example_from(model: &EncoderModel, inputs: Vec<Vec<f64>>) -> TrainingExample {
        let f = model.forward(&inputs).unwrap();
        TrainingExample { product_id: "x".into(), inputs, purpose: f.purpose, mechanism: f.mechanism }
    }

    #[test]
    fn loss_zero_at_exact_predictions() {
        let model = EncoderModel::new(6, 4, 9);
        let ex = example_from(&model, random_inputs(1, 3, 6));
        assert_eq!(loss(&model, &[ex.clone()], 0.5).unwrap(), 0.0);
        let (l, g) = backward(&model, &[ex], 0.5).unwrap();
        assert_eq!(l, 0.0);
        assert!(g.w_p.as_slice().iter().chain(g.w_m.as_slice()).all(|&x| x == 0.0));
    }

    #[test]
    fn loss_hand_arithmetic() {
        // p̂ = (0,0) from zero params, p = (1,0), m̂ = m = 0
        let model = EncoderModel::from_params(EncoderParams::zeros(2, 3), 200, 0).unwrap();
        let ex = TrainingExample {
            product_id: "x".into(),
            inputs: vec![vec![0.3, -0.2]],
            purpose: vec![1.0, 0.0],
            mechanism: vec![0.0, 0.0],
        };
        assert_eq!(loss(&model, &[ex], 0.5).unwrap(), 0.25);
    }

    #[test]
    fn weight_one_ignores_mechanism() {
        let model = EncoderModel::new(6, 4, 5);
        let mut ex = example_from(&model, random_inputs(1, 3, 6));
        ex.purpose[0] += 0.3;
        let a = loss(&model, &[ex.clone()], 1.0).unwrap();
        ex.mechanism = vec![0.7; 6];
        assert_eq!(a, loss(&model, &[ex.clone()], 1.0).unwrap());

        let (_, g) = backward(&model, &[ex], 0.0).unwrap();
        assert!(g.w_p.as_slice().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn empty_batch_and_bad_weight() {
        let model = EncoderModel::new(2, 2, 0);
        assert_eq!(loss(&model, &[], 0.5), Err(Error::EmptyBatch));
        assert!(backward(&model, &[], 0.5).is_err());
        assert!(matches!(loss(&model, &[], 1.5), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn nan_gradient_names_block() {
        let mut model = EncoderModel::new(3, 2, 0);
        model.params.w_m.as_mut_slice()[0] = f64::NAN;
        let ex = TrainingExample {
            product_id: "x".into(),
            inputs: vec![vec![0.1, 0.2, 0.3]],
            purpose: vec![0.0; 3],
            mechanism: vec![0.0; 3],
        };
        assert!(matches!(backward(&model, &[ex], 0.5), Err(Error::NonFiniteGradient(_))));
    }

    #[test]
    fn normalized_predictions_are_unit() {
        let model = EncoderModel::new(6, 4, 11);
        let e = model.predict("a", &random_inputs(3, 5, 6)).unwrap();
        assert!((linalg::norm(&e.purpose_unit) - 1.0).abs() < 1e-12);
        assert!((linalg::norm(&e.mechanism_unit) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn full_batch_loss_order_invariant() {
        let model = EncoderModel::new(6, 4, 2);
        let mut batch: Vec<TrainingExample> = (0..5)
            .map(|i| TrainingExample {
                product_id: alloc::format!("{i}"),
                inputs: random_inputs(i, 3, 6),
                purpose: random_inputs(i + 100, 1, 6).remove(0),
                mechanism: random_inputs(i + 200, 1, 6).remove(0),
            })
            .collect();
        let a = loss(&model, &batch, 0.5).unwrap();
        batch.reverse();
        let b = loss(&model, &batch, 0.5).unwrap();
        assert!((a - b).abs() < 1e-14);
    }
}
