use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{backward, EncoderModel, EncoderParams, TrainingExample};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    /// Global gradient-norm clip.
    pub clip_norm: f64,
    pub seed: u64,
    /// λ: weight of the purpose term; the mechanism term gets `1 − λ`.
    pub purpose_weight: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self { learning_rate: 1e-3, epochs: 20, batch_size: 16, clip_norm: 5.0, seed: 0, purpose_weight: 0.5 }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return bad("learning rate must be finite and non-negative");
        }
        if self.batch_size == 0 {
            return bad("batch size must be positive");
        }
        if !(self.clip_norm > 0.0) {
            return bad("clip norm must be positive");
        }
        if !(0.0..=1.0).contains(&self.purpose_weight) {
            return bad("loss weight must lie in [0, 1]");
        }
        Ok(())
    }
}

/// Adam with global-norm gradient clipping.
#[derive(Debug, Clone)]
pub struct Adam {
    beta1: f64,
    beta2: f64,
    eps: f64,
    clip_norm: f64,
    step: i32,
    m: EncoderParams,
    v: EncoderParams,
}

impl Adam {
    pub fn new(model: &EncoderModel, clip_norm: f64) -> Self {
        let zeros = EncoderParams::zeros(model.input_dim(), model.hidden_dim());
        Self { beta1: 0.9, beta2: 0.999, eps: 1e-8, clip_norm, step: 0, m: zeros.clone(), v: zeros }
    }

    pub fn update(&mut self, params: &mut EncoderParams, grad: &EncoderParams, lr: f64) {
        let norm = libm::sqrt(grad.blocks().iter().flat_map(|b| b.iter()).map(|g| g * g).sum::<f64>());
        let clip = if norm > self.clip_norm { self.clip_norm / norm } else { 1.0 };
        self.step += 1;
        let bc1 = 1.0 - libm::pow(self.beta1, self.step as f64);
        let bc2 = 1.0 - libm::pow(self.beta2, self.step as f64);
        let (b1, b2, eps) = (self.beta1, self.beta2, self.eps);
        for (((p, g), m), v) in params
            .blocks_mut()
            .into_iter()
            .zip(grad.blocks())
            .zip(self.m.blocks_mut())
            .zip(self.v.blocks_mut())
        {
            for i in 0..p.len() {
                let gi = g[i] * clip;
                m[i] = b1 * m[i] + (1.0 - b1) * gi;
                v[i] = b2 * v[i] + (1.0 - b2) * gi * gi;
                let mhat = m[i] / bc1;
                let vhat = v[i] / bc2;
                p[i] -= lr * mhat / (libm::sqrt(vhat) + eps);
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainLog {
    /// Mean per-example loss of each epoch, measured before each batch's update.
    pub epoch_losses: Vec<f64>,
}

/// Trains `model` in place with shuffled mini-batches.
///
/// On divergence the model is restored to the parameters it had at the start
/// of the failing epoch and [`Error::Diverged`] is returned.
pub fn train(model: &mut EncoderModel, data: &[TrainingExample], config: &TrainConfig) -> Result<TrainLog> {
    config.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut adam = Adam::new(model, config.clip_norm);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut log = TrainLog::default();
    let mut batch = Vec::with_capacity(config.batch_size);

    for epoch in 0..config.epochs {
        let last_good = model.params.clone();
        order.shuffle(&mut rng);
        let mut total = 0.0;
        for chunk in order.chunks(config.batch_size) {
            batch.clear();
            batch.extend(chunk.iter().map(|&i| data[i].clone()));
            let step = backward(model, &batch, config.purpose_weight);
            let (l, grad) = match step {
                Ok((l, g)) if l.is_finite() => (l, g),
                Ok(_) | Err(Error::NonFiniteGradient(_)) => {
                    model.params = last_good;
                    return Err(Error::Diverged { epoch });
                }
                Err(e) => return Err(e),
            };
            total += l * chunk.len() as f64;
            adam.update(&mut model.params, &grad, config.learning_rate);
            if model.params.first_non_finite().is_some() {
                model.params = last_good;
                return Err(Error::Diverged { epoch });
            }
        }
        let mean = total / data.len() as f64;
        log::debug!("epoch {epoch}: mean loss {mean:.6}");
        log.epoch_losses.push(mean);
    }
    Ok(log)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn tiny_example() -> TrainingExample {
        TrainingExample {
            product_id: "a".to_string(),
            inputs: vec![vec![0.2, -0.1, 0.4], vec![0.0, 0.3, -0.2]],
            purpose: vec![0.6, 0.8, 0.0],
            mechanism: vec![0.0, 0.0, 1.0],
        }
    }

    #[test]
    fn zero_learning_rate_freezes_parameters() {
        let mut model = EncoderModel::new(3, 4, 1);
        let before = model.params.clone();
        let cfg = TrainConfig { learning_rate: 0.0, epochs: 5, ..Default::default() };
        train(&mut model, &[tiny_example()], &cfg).unwrap();
        assert_eq!(model.params, before);
    }

    #[test]
    fn reruns_are_bitwise_identical() {
        let data: Vec<TrainingExample> = (0..5)
            .map(|i| {
                let mut e = tiny_example();
                e.inputs[0][0] = i as f64 * 0.1;
                e
            })
            .collect();
        let cfg = TrainConfig { epochs: 3, batch_size: 2, seed: 7, ..Default::default() };
        let mut a = EncoderModel::new(3, 4, 1);
        let mut b = EncoderModel::new(3, 4, 1);
        let la = train(&mut a, &data, &cfg).unwrap();
        let lb = train(&mut b, &data, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(la, lb);
    }

    #[test]
    fn divergence_restores_last_good() {
        let mut model = EncoderModel::new(3, 2, 1);
        let mut ex = tiny_example();
        ex.purpose[0] = f64::INFINITY;
        let before = model.params.clone();
        let err = train(&mut model, &[ex], &TrainConfig::default()).unwrap_err();
        assert_eq!(err, Error::Diverged { epoch: 0 });
        assert_eq!(model.params, before);
    }

    #[test]
    fn rejects_bad_config_and_empty_data() {
        let mut model = EncoderModel::new(3, 2, 1);
        let cfg = TrainConfig { batch_size: 0, ..Default::default() };
        assert!(matches!(train(&mut model, &[tiny_example()], &cfg), Err(Error::InvalidConfig(_))));
        assert_eq!(train(&mut model, &[], &TrainConfig::default()), Err(Error::EmptyBatch));
    }
}
