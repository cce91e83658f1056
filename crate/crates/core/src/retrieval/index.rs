use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::encoder::EncodedDoc;
use crate::linalg::norm;
use crate::{Error, Result};

const INDEX_UNIT_TOL: f64 = 1e-9;

/// Normalized purpose and mechanism rows for a set of products.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingIndex {
    ids: Vec<String>,
    purpose: Vec<Vec<f64>>,
    mechanism: Vec<Vec<f64>>,
    positions: BTreeMap<String, usize>,
}

impl EmbeddingIndex {
    pub fn new(ids: Vec<String>, purpose: Vec<Vec<f64>>, mechanism: Vec<Vec<f64>>) -> Result<Self> {
        if purpose.len() != ids.len() || mechanism.len() != ids.len() {
            return Err(Error::LengthMismatch { expected: ids.len(), found: purpose.len().min(mechanism.len()) });
        }
        let dim = purpose.first().map_or(0, Vec::len);
        for row in purpose.iter().chain(&mechanism) {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            let n = norm(row);
            if (n - 1.0).abs() > INDEX_UNIT_TOL {
                return Err(Error::NotUnitNorm(n));
            }
        }
        let mut positions = BTreeMap::new();
        for (i, id) in ids.iter().enumerate() {
            if positions.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        Ok(Self { ids, purpose, mechanism, positions })
    }

    pub fn from_encoded(docs: &[EncodedDoc]) -> Result<Self> {
        Self::new(
            docs.iter().map(|d| d.product_id.clone()).collect(),
            docs.iter().map(|d| d.purpose_unit.clone()).collect(),
            docs.iter().map(|d| d.mechanism_unit.clone()).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.positions.get(id).copied()
    }

    pub fn purpose(&self, i: usize) -> &[f64] {
        &self.purpose[i]
    }

    pub fn mechanism(&self, i: usize) -> &[f64] {
        &self.mechanism[i]
    }

    pub fn purpose_rows(&self) -> &[Vec<f64>] {
        &self.purpose
    }

    pub fn mechanism_rows(&self) -> &[Vec<f64>] {
        &self.mechanism
    }

    /// Sub-index holding only the listed positions, in the given order.
    pub fn subset(&self, positions: &[usize]) -> Result<Self> {
        Self::new(
            positions.iter().map(|&i| self.ids[i].clone()).collect(),
            positions.iter().map(|&i| self.purpose[i].clone()).collect(),
            positions.iter().map(|&i| self.mechanism[i].clone()).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn validates_rows() {
        let ok = EmbeddingIndex::new(vec!["a".into()], vec![vec![1.0, 0.0]], vec![vec![0.0, 1.0]]);
        assert!(ok.is_ok());
        let bad = EmbeddingIndex::new(vec!["a".into()], vec![vec![1.0, 1.0]], vec![vec![0.0, 1.0]]);
        assert!(matches!(bad, Err(Error::NotUnitNorm(_))));
        let short = EmbeddingIndex::new(vec!["a".into(), "b".into()], vec![vec![1.0]], vec![vec![1.0]]);
        assert!(short.is_err());
        let dup = EmbeddingIndex::new(vec!["a".into(), "a".into()], vec![vec![1.0]; 2], vec![vec![1.0]; 2]);
        assert_eq!(dup, Err(Error::DuplicateId("a".into())));
    }
}
