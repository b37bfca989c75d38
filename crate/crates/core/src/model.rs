//! Channel and code-size parameters.
//!
//! Noise variance is normalised to one, so the signal power equals the snr.
//! Rates are carried in nats; bits appear only in accessors.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Real AWGN channel with σ² = 1 and P = snr.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub snr: f64,
}

/// Build the channel for a given signal-to-noise ratio.
pub fn derive_channel(snr: f64) -> Result<ChannelParams> {
    if !(snr.is_finite() && snr > 0.0) {
        return domain(format!("snr must be positive and finite, got {snr}"));
    }
    Ok(ChannelParams { snr })
}

impl ChannelParams {
    pub fn power(&self) -> f64 {
        self.snr
    }

    pub fn noise_variance(&self) -> f64 {
        1.0
    }

    /// C = ½ ln(1 + snr), nats per channel use.
    pub fn capacity(&self) -> f64 {
        0.5 * self.snr.ln_1p()
    }

    /// C in bits per channel use.
    pub fn capacity_bits(&self) -> f64 {
        0.5 * (1.0 + self.snr).log2()
    }

    /// ν = P/(P + σ²).
    pub fn nu(&self) -> f64 {
        self.snr / (1.0 + self.snr)
    }

    /// R₀ = ½ snr/(1 + snr), the rate at which constant power just works.
    pub fn r0(&self) -> f64 {
        0.5 * self.nu()
    }

    /// The nearby-measure constant c₀; numerically equal to C.
    pub fn c0(&self) -> f64 {
        self.capacity()
    }

    /// C̃ = (L/2)(1 − e^{−2C/L}).
    pub fn c_tilde(&self, sections: usize) -> f64 {
        let l = sections.max(1) as f64;
        -0.5 * l * (-2.0 * self.capacity() / l).exp_m1()
    }
}

/// Section count, section size, block length and rate of a partitioned code.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeParams {
    /// L, number of sections.
    pub sections: usize,
    /// M, columns per section (power of two).
    pub section_size: usize,
    /// n, codeword length.
    pub block_length: usize,
}

impl CodeParams {
    /// Block length n = ⌈L ln M / R⌉ for a target rate R in nats.
    pub fn new(sections: usize, section_size: usize, rate: f64) -> Result<Self> {
        check_shape(sections, section_size)?;
        if !(rate.is_finite() && rate > 0.0) {
            return domain(format!("rate must be positive, got {rate}"));
        }
        let exact = sections as f64 * (section_size as f64).ln() / rate;
        // absorb representation error before taking the ceiling
        let rounded = exact.round();
        let n = if (exact - rounded).abs() <= 1e-9 * exact.max(1.0) {
            rounded
        } else {
            exact.ceil()
        };
        Self::with_block_length(sections, section_size, (n as usize).max(1))
    }

    pub fn with_block_length(sections: usize, section_size: usize, block_length: usize) -> Result<Self> {
        check_shape(sections, section_size)?;
        if block_length == 0 {
            return domain("block length must be positive");
        }
        Ok(CodeParams { sections, section_size, block_length })
    }

    /// N = L·M dictionary columns.
    pub fn columns(&self) -> usize {
        self.sections * self.section_size
    }

    /// log₂ M.
    pub fn bits_per_section(&self) -> usize {
        self.section_size.trailing_zeros() as usize
    }

    /// K = L log₂ M input bits.
    pub fn message_bits(&self) -> usize {
        self.sections * self.bits_per_section()
    }

    pub fn ln_m(&self) -> f64 {
        (self.section_size as f64).ln()
    }

    /// Realised rate L ln M / n in nats.
    pub fn rate(&self) -> f64 {
        self.sections as f64 * self.ln_m() / self.block_length as f64
    }

    pub fn rate_bits(&self) -> f64 {
        self.rate() / std::f64::consts::LN_2
    }

    /// Section (0-based) of column `j` (0-based).
    pub fn section_of(&self, j: usize) -> usize {
        j / self.section_size
    }
}

fn check_shape(sections: usize, section_size: usize) -> Result<()> {
    if sections == 0 {
        return domain("at least one section is required");
    }
    if section_size < 2 || !section_size.is_power_of_two() {
        return domain(format!("section size must be a power of two ≥ 2, got {section_size}"));
    }
    Ok(())
}
