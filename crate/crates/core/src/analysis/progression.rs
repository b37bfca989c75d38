use serde::{Deserialize, Serialize};

use crate::codebook::{AllocationKind, PowerAllocation};
use crate::error::{domain, Result};
use crate::model::{derive_channel, ChannelParams};
use crate::special::norm_cdf;

/// Threshold τ = √(2 ln M) + a.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdParams {
    pub a: f64,
    pub tau: f64,
    /// δ_a = a/√(2 ln M).
    pub delta_a: f64,
}

impl ThresholdParams {
    pub fn new(a: f64, section_size: usize) -> Result<Self> {
        if section_size < 2 {
            return domain(format!("section size must be ≥ 2, got {section_size}"));
        }
        let s = (2.0 * (section_size as f64).ln()).sqrt();
        let tau = s + a;
        if !(tau > 0.0) {
            return domain(format!("threshold must be positive, got τ = {tau}"));
        }
        Ok(ThresholdParams { a, tau, delta_a: a / s })
    }
}

/// A configuration for the analytical machinery.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundConfig {
    pub snr: f64,
    /// M.
    pub section_size: usize,
    /// L.
    pub sections: usize,
    /// R in nats.
    pub rate: f64,
    /// Threshold offset a.
    pub a: f64,
    pub allocation: AllocationKind,
    /// χ² slack h ∈ [0, 1).
    pub h: f64,
}

impl BoundConfig {
    pub fn channel(&self) -> Result<ChannelParams> {
        derive_channel(self.snr)
    }

    pub fn threshold(&self) -> Result<ThresholdParams> {
        ThresholdParams::new(self.a, self.section_size)
    }

    pub fn ln_m(&self) -> f64 {
        (self.section_size as f64).ln()
    }

    /// n = L ln M / R, kept real-valued.
    pub fn block_length(&self) -> f64 {
        self.sections as f64 * self.ln_m() / self.rate
    }

    fn validate(&self) -> Result<()> {
        if self.sections == 0 {
            return domain("at least one section is required");
        }
        if !(self.rate > 0.0 && self.rate.is_finite()) {
            return domain(format!("rate must be positive, got {}", self.rate));
        }
        if !(0.0..1.0).contains(&self.h) {
            return domain(format!("h must lie in [0,1), got {}", self.h));
        }
        Ok(())
    }
}

/// Shift constants of one section.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftTerm {
    /// C_{j,R} = n π_j ν.
    pub c: f64,
    /// C_{j,R,h} = (1 − h) C_{j,R}.
    pub c_h: f64,
}

/// Per-section shift constants with n = L ln M / R.
pub fn shift_terms(
    channel: &ChannelParams,
    allocation: &PowerAllocation,
    rate: f64,
    h: f64,
    section_size: usize,
) -> Result<Vec<ShiftTerm>> {
    if !(rate > 0.0) {
        return domain(format!("rate must be positive, got {rate}"));
    }
    let n = allocation.sections() as f64 * (section_size as f64).ln() / rate;
    Ok(allocation
        .weights()
        .iter()
        .map(|&p| {
            let c = n * p * channel.nu();
            ShiftTerm { c, c_h: (1.0 - h) * c }
        })
        .collect())
}

/// g_L(x) = Σ_j π_j Φ(√(C_{j,R,h}/(1 − xν)) − τ) for a configuration.
///
/// Sections with equal weight are merged, so constant and leveled allocations
/// evaluate in time proportional to the number of distinct weights.
#[derive(Clone, Debug)]
pub struct Progression {
    pub config: BoundConfig,
    pub channel: ChannelParams,
    pub threshold: ThresholdParams,
    /// 1/min π.
    pub l_pi: f64,
    /// 1/max π.
    pub tail_count: f64,
    // (total weight of the group, C_{j,R,h})
    groups: Vec<(f64, f64)>,
}

impl Progression {
    pub fn new(config: &BoundConfig) -> Result<Self> {
        config.validate()?;
        let channel = config.channel()?;
        let threshold = config.threshold()?;
        let alloc = PowerAllocation::new(config.allocation, &channel, config.sections)?;
        let shifts = shift_terms(&channel, &alloc, config.rate, config.h, config.section_size)?;
        let mut groups: Vec<(f64, f64)> = Vec::new();
        for (&w, s) in alloc.weights().iter().zip(&shifts) {
            match groups.last_mut() {
                Some(g) if g.1 == s.c_h => g.0 += w,
                _ => groups.push((w, s.c_h)),
            }
        }
        Ok(Progression {
            config: *config,
            channel,
            threshold,
            l_pi: alloc.l_pi(),
            tail_count: alloc.tail_count(),
            groups,
        })
    }

    /// Same function with consecutive sections pooled into at most `max_groups`
    /// bins (weight-averaged shift per bin). The pooled g_L differs from the
    /// exact one only at second order in the within-bin spread; used to screen
    /// grid searches.
    pub fn coarsened(&self, max_groups: usize) -> Self {
        if self.groups.len() <= max_groups.max(1) {
            return self.clone();
        }
        let per = self.groups.len().div_ceil(max_groups.max(1));
        let groups = self
            .groups
            .chunks(per)
            .map(|c| {
                let w: f64 = c.iter().map(|g| g.0).sum();
                (w, c.iter().map(|g| g.0 * g.1).sum::<f64>() / w)
            })
            .collect();
        Progression { groups, ..self.clone() }
    }

    /// Same configuration with a different χ² slack h.
    pub fn with_h(&self, h: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&h) {
            return domain(format!("h must lie in [0,1), got {h}"));
        }
        let scale = (1.0 - h) / (1.0 - self.config.h);
        let groups = self.groups.iter().map(|&(w, c)| (w, c * scale)).collect();
        Ok(Progression { config: BoundConfig { h, ..self.config }, groups, ..self.clone() })
    }

    pub fn nu(&self) -> f64 {
        self.channel.nu()
    }

    /// g_L(x); NaN when xν ≥ 1.
    pub fn g(&self, x: f64) -> f64 {
        let u = 1.0 - x * self.nu();
        if !(u > 0.0) {
            return f64::NAN;
        }
        let tau = self.threshold.tau;
        self.groups.iter().map(|&(w, c)| w * norm_cdf((c / u).sqrt() - tau)).sum()
    }

    /// g_L(x) with domain checking.
    pub fn g_l(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) || x * self.nu() >= 1.0 {
            return domain(format!("g_L is defined for x ∈ [0,1] with xν < 1, got {x}"));
        }
        Ok(self.g(x))
    }

    /// Number of distinct weight groups.
    pub fn groups(&self) -> usize {
        self.groups.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CodeParams;

    #[test]
    fn constant_at_r0_is_half() {
        let ch = derive_channel(7.0).unwrap();
        let cfg = BoundConfig {
            snr: 7.0,
            section_size: 256,
            sections: 64,
            rate: ch.r0(),
            a: 0.0,
            allocation: AllocationKind::Constant,
            h: 0.0,
        };
        let p = Progression::new(&cfg).unwrap();
        assert!((p.g(0.0) - 0.5).abs() < 1e-15);
        assert_eq!(p.groups(), 1);
        assert!(p.g(1.0) >= p.g(0.0));
        assert!(p.g_l(1.5).is_err());
    }

    #[test]
    fn shift_constants() {
        let ch = derive_channel(1.0).unwrap();
        let alloc = PowerAllocation::new(AllocationKind::Constant, &ch, 10).unwrap();
        let s = shift_terms(&ch, &alloc, ch.r0(), 0.0, 16).unwrap();
        assert!(s.iter().all(|t| (t.c - 2.0 * 16f64.ln()).abs() < 1e-12));

        let alloc = PowerAllocation::new(AllocationKind::Exponential, &ch, 2).unwrap();
        let s = shift_terms(&ch, &alloc, 0.2, 0.1, 16).unwrap();
        let expect = ch.c_tilde(2) / 0.2 * (-ch.capacity()).exp() * 2.0 * 16f64.ln();
        assert!((s[1].c - expect).abs() < 1e-12);
        assert!((s[1].c_h - 0.9 * expect).abs() < 1e-12);
        let first = ch.c_tilde(2) / 0.2 * 2.0 * 16f64.ln();
        assert!((s[0].c - first).abs() < 1e-12);
        // with the integer block length the shift moves by the rounding of n only
        let code = CodeParams::new(2, 16, 0.2).unwrap();
        let with_int_n = code.block_length as f64 * alloc.weights()[1] * ch.nu();
        let ratio = code.block_length as f64 / (2.0 * 16f64.ln() / 0.2);
        assert!((with_int_n / s[1].c - ratio).abs() < 1e-12);
    }
}
