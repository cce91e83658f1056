//! A single-direction GRU layer and its backward pass.
//!
//! ```text
//! z  = σ(W_z x + U_z h₋ + b_z)
//! r  = σ(W_r x + U_r h₋ + b_r)
//! n  = tanh(W_n x + U_n (r ⊙ h₋) + b_n)
//! h  = (1 − z) ⊙ n + z ⊙ h₋
//! ```
//!
//! The initial state is zero.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub struct GruWeights {
    pub w_z: Matrix,
    pub w_r: Matrix,
    pub w_n: Matrix,
    pub u_z: Matrix,
    pub u_r: Matrix,
    pub u_n: Matrix,
    pub b_z: Vec<f64>,
    pub b_r: Vec<f64>,
    pub b_n: Vec<f64>,
}

impl GruWeights {
    pub fn zeros(input_dim: usize, hidden_dim: usize) -> Self {
        let w = || Matrix::zeros(hidden_dim, input_dim);
        let u = || Matrix::zeros(hidden_dim, hidden_dim);
        Self {
            w_z: w(),
            w_r: w(),
            w_n: w(),
            u_z: u(),
            u_r: u(),
            u_n: u(),
            b_z: vec![0.0; hidden_dim],
            b_r: vec![0.0; hidden_dim],
            b_n: vec![0.0; hidden_dim],
        }
    }

    pub fn hidden_dim(&self) -> usize {
        self.b_z.len()
    }

    pub fn input_dim(&self) -> usize {
        self.w_z.cols()
    }

    /// Parameter blocks in the fixed order of [`GRU_BLOCKS`].
    pub(crate) fn blocks(&self) -> [&[f64]; 9] {
        [
            self.w_z.as_slice(),
            self.w_r.as_slice(),
            self.w_n.as_slice(),
            self.u_z.as_slice(),
            self.u_r.as_slice(),
            self.u_n.as_slice(),
            &self.b_z,
            &self.b_r,
            &self.b_n,
        ]
    }

    pub(crate) fn blocks_mut(&mut self) -> [&mut [f64]; 9] {
        [
            self.w_z.as_mut_slice(),
            self.w_r.as_mut_slice(),
            self.w_n.as_mut_slice(),
            self.u_z.as_mut_slice(),
            self.u_r.as_mut_slice(),
            self.u_n.as_mut_slice(),
            &mut self.b_z,
            &mut self.b_r,
            &mut self.b_n,
        ]
    }
}

#[inline]
fn sigmoid(a: f64) -> f64 {
    if a >= 0.0 {
        1.0 / (1.0 + libm::exp(-a))
    } else {
        let e = libm::exp(a);
        e / (1.0 + e)
    }
}

/// Activations kept from one forward step for backpropagation.
#[derive(Debug, Clone)]
pub(crate) struct StepCache {
    pub h_prev: Vec<f64>,
    pub z: Vec<f64>,
    pub r: Vec<f64>,
    pub n: Vec<f64>,
    pub h: Vec<f64>,
}

impl GruWeights {
    pub(crate) fn step(&self, x: &[f64], h_prev: &[f64]) -> StepCache {
        let hd = self.hidden_dim();
        let mut z = self.w_z.mul_vec(x);
        let mut r = self.w_r.mul_vec(x);
        let mut n = self.w_n.mul_vec(x);
        let uz = self.u_z.mul_vec(h_prev);
        let ur = self.u_r.mul_vec(h_prev);
        for i in 0..hd {
            z[i] = sigmoid(z[i] + uz[i] + self.b_z[i]);
            r[i] = sigmoid(r[i] + ur[i] + self.b_r[i]);
        }
        let rh: Vec<f64> = r.iter().zip(h_prev).map(|(a, b)| a * b).collect();
        let un = self.u_n.mul_vec(&rh);
        let mut h = vec![0.0; hd];
        for i in 0..hd {
            n[i] = libm::tanh(n[i] + un[i] + self.b_n[i]);
            h[i] = (1.0 - z[i]) * n[i] + z[i] * h_prev[i];
        }
        StepCache { h_prev: h_prev.to_vec(), z, r, n, h }
    }

    /// Runs the layer over `inputs` in the given order.
    pub(crate) fn run<'a>(&self, inputs: impl Iterator<Item = &'a [f64]>) -> Vec<StepCache> {
        let mut h = vec![0.0; self.hidden_dim()];
        let mut steps = Vec::new();
        for x in inputs {
            let s = self.step(x, &h);
            h.clone_from(&s.h);
            steps.push(s);
        }
        steps
    }

    /// Backpropagates `dh_last` (gradient w.r.t. the final state) through
    /// every step, accumulating into `grad`. `inputs[t]` must be the vector
    /// read at `steps[t]`.
    pub(crate) fn backward(&self, inputs: &[&[f64]], steps: &[StepCache], dh_last: &[f64], grad: &mut GruWeights) {
        let hd = self.hidden_dim();
        let mut dh = dh_last.to_vec();
        let mut da_z = vec![0.0; hd];
        let mut da_r = vec![0.0; hd];
        let mut da_n = vec![0.0; hd];
        let mut rh = vec![0.0; hd];
        for (s, x) in steps.iter().zip(inputs).rev() {
            let mut dh_prev = vec![0.0; hd];
            for i in 0..hd {
                let dn = dh[i] * (1.0 - s.z[i]);
                let dz = dh[i] * (s.h_prev[i] - s.n[i]);
                dh_prev[i] = dh[i] * s.z[i];
                da_n[i] = dn * (1.0 - s.n[i] * s.n[i]);
                da_z[i] = dz * s.z[i] * (1.0 - s.z[i]);
                rh[i] = s.r[i] * s.h_prev[i];
            }
            grad.w_n.add_outer(&da_n, x);
            grad.u_n.add_outer(&da_n, &rh);
            let mut drh = vec![0.0; hd];
            self.u_n.mul_transpose_vec_acc(&da_n, &mut drh);
            for i in 0..hd {
                dh_prev[i] += drh[i] * s.r[i];
                let dr = drh[i] * s.h_prev[i];
                da_r[i] = dr * s.r[i] * (1.0 - s.r[i]);
                grad.b_n[i] += da_n[i];
                grad.b_z[i] += da_z[i];
                grad.b_r[i] += da_r[i];
            }
            grad.w_z.add_outer(&da_z, x);
            grad.u_z.add_outer(&da_z, &s.h_prev);
            self.u_z.mul_transpose_vec_acc(&da_z, &mut dh_prev);
            grad.w_r.add_outer(&da_r, x);
            grad.u_r.add_outer(&da_r, &s.h_prev);
            self.u_r.mul_transpose_vec_acc(&da_r, &mut dh_prev);
            dh = dh_prev;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigmoid_is_stable_at_extremes() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!(sigmoid(-800.0) >= 0.0 && sigmoid(-800.0).is_finite());
        assert!((sigmoid(800.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_weights_keep_zero_state() {
        let g = GruWeights::zeros(3, 2);
        let steps = g.run([[1.0, -2.0, 3.0].as_slice(), [0.5, 0.5, 0.5].as_slice()].into_iter());
        assert_eq!(steps.len(), 2);
        assert_eq!(steps[1].h, vec![0.0, 0.0]);
    }
}
