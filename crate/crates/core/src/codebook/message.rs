use serde::{Deserialize, Serialize};

use super::allocation::PowerAllocation;
use crate::error::{domain, Result};
use crate::model::CodeParams;

/// A codeword's coefficient vector: one selected column per section with value √P_(ℓ).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientVector {
    section_size: usize,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CoefficientVector {
    /// From within-section indices (0-based) and an allocation.
    pub fn new(indices: Vec<usize>, section_size: usize, allocation: &PowerAllocation) -> Result<Self> {
        if indices.len() != allocation.sections() {
            return domain(format!("{} indices for {} sections", indices.len(), allocation.sections()));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= section_size) {
            return domain(format!("index {bad} outside a section of {section_size}"));
        }
        let values = (0..indices.len()).map(|l| allocation.power(l).sqrt()).collect();
        Ok(CoefficientVector { section_size, indices, values })
    }

    pub fn sections(&self) -> usize {
        self.indices.len()
    }

    pub fn section_size(&self) -> usize {
        self.section_size
    }

    /// Within-section index of the sent term of each section.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Global column of the sent term of section ℓ.
    pub fn column(&self, section: usize) -> usize {
        section * self.section_size + self.indices[section]
    }

    /// Global columns of all sent terms, in section order.
    pub fn columns(&self) -> Vec<usize> {
        (0..self.sections()).map(|l| self.column(l)).collect()
    }

    /// √P_(ℓ).
    pub fn value(&self, section: usize) -> f64 {
        self.values[section]
    }

    /// ‖β‖².
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }
}

/// Split a bit string into big-endian `log₂ M`-bit section indices.
pub fn bits_to_indices(bits: &[bool], section_size: usize) -> Result<Vec<usize>> {
    if !section_size.is_power_of_two() || section_size < 2 {
        return domain(format!("section size must be a power of two ≥ 2, got {section_size}"));
    }
    let b = section_size.trailing_zeros() as usize;
    if !bits.len().is_multiple_of(b) {
        return domain(format!("{} bits do not split into {b}-bit symbols", bits.len()));
    }
    Ok(bits
        .chunks_exact(b)
        .map(|c| c.iter().fold(0usize, |acc, &bit| (acc << 1) | bit as usize))
        .collect())
}

/// Inverse of [`bits_to_indices`].
pub fn indices_to_bits(indices: &[usize], section_size: usize) -> Vec<bool> {
    let b = section_size.trailing_zeros() as usize;
    indices.iter().flat_map(|&i| (0..b).rev().map(move |s| (i >> s) & 1 == 1)).collect()
}

/// Map a K = L log₂ M bit message to its coefficient vector.
pub fn encode(bits: &[bool], code: &CodeParams, allocation: &PowerAllocation) -> Result<CoefficientVector> {
    if bits.len() != code.message_bits() {
        return domain(format!("expected {} message bits, got {}", code.message_bits(), bits.len()));
    }
    let indices = bits_to_indices(bits, code.section_size)?;
    CoefficientVector::new(indices, code.section_size, allocation)
}
