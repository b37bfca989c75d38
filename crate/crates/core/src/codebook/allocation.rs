use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::model::ChannelParams;

/// Shape of the per-section power profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AllocationKind {
    /// P_(ℓ) = P/L.
    Constant,
    /// P_(ℓ) ∝ e^{−2C(ℓ−1)/L}.
    Exponential,
    /// P_(ℓ) ∝ max{e^{−2γ(ℓ−1)/L}, u}, 0 ≤ γ ≤ C.
    Leveled { u: f64, gamma: f64 },
}

/// Per-section powers normalised to the total power P.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerAllocation {
    kind: AllocationKind,
    power: f64,
    weights: Vec<f64>,
}

pub fn make_power_allocation(
    kind: AllocationKind,
    channel: &ChannelParams,
    sections: usize,
) -> Result<PowerAllocation> {
    PowerAllocation::new(kind, channel, sections)
}

impl PowerAllocation {
    pub fn new(kind: AllocationKind, channel: &ChannelParams, sections: usize) -> Result<Self> {
        if sections == 0 {
            return domain("at least one section is required");
        }
        let l = sections as f64;
        let cap = channel.capacity();
        let raw: Vec<f64> = match kind {
            AllocationKind::Constant => vec![1.0; sections],
            AllocationKind::Exponential => {
                (0..sections).map(|i| (-2.0 * cap * i as f64 / l).exp()).collect()
            }
            AllocationKind::Leveled { u, gamma } => {
                if !(u.is_finite() && u >= 0.0) {
                    return domain(format!("leveling floor u must be ≥ 0, got {u}"));
                }
                if !(gamma >= 0.0 && gamma <= cap * (1.0 + 1e-12)) {
                    return domain(format!("γ must lie in [0, C = {cap}], got {gamma}"));
                }
                (0..sections).map(|i| (-2.0 * gamma * i as f64 / l).exp().max(u)).collect()
            }
        };
        let total: f64 = raw.iter().sum();
        let weights = raw.into_iter().map(|w| w / total).collect();
        Ok(PowerAllocation { kind, power: channel.power(), weights })
    }

    pub fn kind(&self) -> AllocationKind {
        self.kind
    }

    pub fn sections(&self) -> usize {
        self.weights.len()
    }

    /// π_(ℓ), summing to one.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// P_(ℓ) = π_(ℓ)·P.
    pub fn powers(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w * self.power).collect()
    }

    pub fn power(&self, section: usize) -> f64 {
        self.weights[section] * self.power
    }

    pub fn total_power(&self) -> f64 {
        self.power
    }

    /// L_π = 1/min π_(ℓ): the granularity of pacing.
    pub fn l_pi(&self) -> f64 {
        1.0 / self.weights.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// 1/max π_(ℓ): the effective count in weighted Bernoulli tail exponents.
    pub fn tail_count(&self) -> f64 {
        1.0 / self.weights.iter().cloned().fold(0.0, f64::max)
    }
}
