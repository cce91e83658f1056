use alloc::vec::Vec;

use super::{backward, loss, EncoderModel, TrainingExample, BLOCK_NAMES};
use crate::Result;

/// Below this magnitude a gradient pair is compared on an absolute scale.
const REL_ERROR_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct GradCheckReport {
    pub max_relative_error: f64,
    pub worst_block: &'static str,
    pub worst_index: usize,
    pub analytic: f64,
    pub numeric: f64,
    pub checked: usize,
}

/// `|a − n| / max(|a|, |n|, floor)`
pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(REL_ERROR_FLOOR)
}

/// Compares every analytic gradient entry against a central finite
/// difference with step `eps`.
pub fn gradient_check(
    model: &EncoderModel,
    batch: &[TrainingExample],
    purpose_weight: f64,
    eps: f64,
) -> Result<GradCheckReport> {
    let (_, grad) = backward(model, batch, purpose_weight)?;
    let analytic: Vec<Vec<f64>> = grad.blocks().iter().map(|b| b.to_vec()).collect();
    let mut probe = model.clone();
    let mut report = GradCheckReport {
        max_relative_error: 0.0,
        worst_block: BLOCK_NAMES[0],
        worst_index: 0,
        analytic: 0.0,
        numeric: 0.0,
        checked: 0,
    };
    for (b, block) in analytic.iter().enumerate() {
        for (i, &a) in block.iter().enumerate() {
            let orig = probe.params.blocks()[b][i];
            probe.params.blocks_mut()[b][i] = orig + eps;
            let plus = loss(&probe, batch, purpose_weight)?;
            probe.params.blocks_mut()[b][i] = orig - eps;
            let minus = loss(&probe, batch, purpose_weight)?;
            probe.params.blocks_mut()[b][i] = orig;
            let numeric = (plus - minus) / (2.0 * eps);
            let err = relative_error(a, numeric);
            report.checked += 1;
            if err > report.max_relative_error {
                report.max_relative_error = err;
                report.worst_block = BLOCK_NAMES[b];
                report.worst_index = i;
                report.analytic = a;
                report.numeric = numeric;
            }
        }
    }
    Ok(report)
}
