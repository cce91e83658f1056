//! Versioned JSON checkpoints. Every parameter block is stored with its
//! shape as a flat row-major array. Floats are written in shortest
//! round-trip form, so save → load reproduces every bit.

use std::path::Path;

use analogy_core::encoder::{EncoderModel, EncoderParams, BLOCK_NAMES};
use serde::{Deserialize, Serialize};

use super::{malformed, open, Output};
use crate::error::{FormatError, Result};

pub const CHECKPOINT_VERSION: u32 = 1;
const FORMAT: &str = "analogy-encoder";

#[derive(Serialize, Deserialize)]
struct Block {
    name: String,
    shape: (usize, usize),
    data: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    format: String,
    version: u32,
    input_dim: usize,
    hidden_dim: usize,
    max_len: usize,
    seed: u64,
    blocks: Vec<Block>,
}

#[derive(Deserialize)]
struct Header {
    format: String,
    version: u32,
}

fn shape(name: &str, d: usize, h: usize) -> (usize, usize) {
    match name.rsplit('.').next().unwrap_or(name) {
        "w_z" | "w_r" | "w_n" => (h, d),
        "u_z" | "u_r" | "u_n" => (h, h),
        "b_z" | "b_r" | "b_n" => (h, 1),
        _ => (d, 2 * h),
    }
}

pub fn save_checkpoint(path: &Path, model: &EncoderModel) -> Result<()> {
    let (d, h) = (model.input_dim(), model.hidden_dim());
    let blocks = BLOCK_NAMES
        .iter()
        .zip(model.params.blocks())
        .map(|(name, data)| Block { name: name.to_string(), shape: shape(name, d, h), data: data.to_vec() })
        .collect();
    let ck = Checkpoint {
        format: FORMAT.into(),
        version: CHECKPOINT_VERSION,
        input_dim: d,
        hidden_dim: h,
        max_len: model.max_len(),
        seed: model.seed(),
        blocks,
    };
    let mut out = Output::create(path)?;
    out.json(&ck)?;
    out.finish()
}

pub fn load_checkpoint(path: &Path) -> Result<EncoderModel> {
    let text = std::io::read_to_string(open(path)?).map_err(|e| super::io_err(path, e))?;
    let header: Header = serde_json::from_str(&text).map_err(|e| malformed(path, e.line(), e))?;
    if header.format != FORMAT {
        return Err(malformed(path, 1, format!("not an encoder checkpoint (format {:?})", header.format)));
    }
    if header.version != CHECKPOINT_VERSION {
        return Err(FormatError::UnsupportedVersion {
            path: path.to_path_buf(),
            found: header.version,
            expected: CHECKPOINT_VERSION,
        });
    }
    let ck: Checkpoint = serde_json::from_str(&text).map_err(|e| malformed(path, e.line(), e))?;
    let (d, h) = (ck.input_dim, ck.hidden_dim);
    if ck.blocks.len() != BLOCK_NAMES.len() {
        return Err(malformed(path, 1, format!("expected {} blocks, found {}", BLOCK_NAMES.len(), ck.blocks.len())));
    }
    let mut params = EncoderParams::zeros(d, h);
    for ((dst, name), block) in params.blocks_mut().into_iter().zip(BLOCK_NAMES).zip(&ck.blocks) {
        let want = shape(name, d, h);
        if block.name != name || block.shape != want || block.data.len() != dst.len() {
            return Err(malformed(
                path,
                1,
                format!("block {:?} {:?} does not match expected {name:?} {want:?}", block.name, block.shape),
            ));
        }
        dst.copy_from_slice(&block.data);
    }
    if let Some(name) = params.first_non_finite() {
        return Err(malformed(path, 1, format!("block {name:?} holds non-finite values")));
    }
    Ok(EncoderModel::from_params(params, ck.max_len, ck.seed)?)
}
