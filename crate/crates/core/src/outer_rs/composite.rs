use serde::{Deserialize, Serialize};

use super::rs::{rs_decode, rs_encode, RsCode};
use crate::codebook::{bits_to_indices, indices_to_bits};
use crate::decoder::SectionDecision;
use crate::error::{domain, Error, Result};

/// Outer-code dimension and total rate for a target mistake rate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompositeRate {
    /// k_rs = L − ⌈δ_mis L⌉.
    pub k: usize,
    /// δ = (L − k)/L ≥ δ_mis.
    pub delta: f64,
    /// R_tot = (1 − δ) R.
    pub rate: f64,
}

pub fn composite_rate(inner_rate: f64, delta_mis: f64, sections: usize) -> Result<CompositeRate> {
    if !(0.0..1.0).contains(&delta_mis) {
        return domain(format!("δ_mis must lie in [0,1), got {delta_mis}"));
    }
    if sections == 0 {
        return domain("at least one section is required");
    }
    let l = sections as f64;
    let redundancy = ((delta_mis * l) - 1e-9).ceil().max(0.0) as usize;
    let k = sections - redundancy.min(sections - 1);
    let delta = (sections - k) as f64 / l;
    Ok(CompositeRate { k, delta, rate: (1.0 - delta) * inner_rate })
}

/// Inner sparse superposition code wrapped in a Reed-Solomon code with one
/// symbol per section.
#[derive(Clone, Debug)]
pub struct CompositeCode {
    pub rs: RsCode,
    pub section_size: usize,
}

impl CompositeCode {
    /// Code over L sections of size M with k message sections.
    pub fn new(sections: usize, section_size: usize, k: usize) -> Result<Self> {
        if !section_size.is_power_of_two() {
            return domain("section size must be a power of two");
        }
        let rs = RsCode::new(section_size.trailing_zeros(), sections, k)?;
        Ok(CompositeCode { rs, section_size })
    }

    /// k log₂ M.
    pub fn message_bits(&self) -> usize {
        self.rs.k() * self.section_size.trailing_zeros() as usize
    }

    /// Message bits → section indices of the full codeword.
    pub fn encode(&self, bits: &[bool]) -> Result<Vec<usize>> {
        if bits.len() != self.message_bits() {
            return domain(format!("expected {} message bits, got {}", self.message_bits(), bits.len()));
        }
        let symbols: Vec<u16> = bits_to_indices(bits, self.section_size)?.into_iter().map(|i| i as u16).collect();
        Ok(rs_encode(&symbols, &self.rs)?.into_iter().map(usize::from).collect())
    }

    /// Inner decisions → message bits; any section without a single term is
    /// an erasure.
    pub fn decode(&self, decisions: &[SectionDecision]) -> Result<Vec<bool>> {
        if decisions.len() != self.rs.n() {
            return Err(Error::Dimension(format!("expected {} decisions, got {}", self.rs.n(), decisions.len())));
        }
        let (symbols, erased): (Vec<u16>, Vec<bool>) = decisions
            .iter()
            .map(|d| match d {
                SectionDecision::Single(i) => (*i as u16, false),
                _ => (0, true),
            })
            .unzip();
        let out = rs_decode(&symbols, &erased, &self.rs)?;
        let idx: Vec<usize> = out.message.into_iter().map(usize::from).collect();
        Ok(indices_to_bits(&idx, self.section_size))
    }
}
