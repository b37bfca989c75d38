use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::model::ChannelParams;
use crate::special::{d_rho, kl_bernoulli, kl_poisson, log_norm_sf};

/// Expected false-alarm weight per step, f* = (M − 1)Φ̄(τ), and its analytic bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FalseAlarmRate {
    pub exact: f64,
    /// ln f*, finite even when f* underflows.
    pub ln_exact: f64,
    /// e^{−a√(2 ln M) − a²/2} / ((√(2 ln M) + a)√(2π)).
    pub bound: f64,
}

pub fn f_star(tau: f64, section_size: usize) -> Result<FalseAlarmRate> {
    if !(tau > 0.0) {
        return domain(format!("threshold must be positive, got {tau}"));
    }
    if section_size < 2 {
        return domain("section size must be ≥ 2");
    }
    let s = (2.0 * (section_size as f64).ln()).sqrt();
    let a = tau - s;
    let ln_exact = ((section_size - 1) as f64).ln() + log_norm_sf(tau);
    let ln_bound = -a * s - 0.5 * a * a - tau.ln() - 0.5 * (2.0 * std::f64::consts::PI).ln();
    Ok(FalseAlarmRate { exact: ln_exact.exp(), ln_exact, bound: ln_bound.exp() })
}

/// The three terms of the error-probability bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Terms {
    /// m e^{−2L_π η² + m c₀}: shortfall of correct detections.
    pub detection: f64,
    /// m e^{−L_π f D(ρ)/ρ}: excess false alarms.
    pub false_alarm: f64,
    /// m e^{−(n−m+1)h²/2}: χ² shortfall.
    pub chi_square: f64,
    pub total: f64,
}

/// p_e = m e^{−2L_πη² + mc₀} + m e^{−L_π f D(ρ)/ρ} + m e^{−(n−m+1)h²/2}.
///
/// `l_pi` is the count in the tail exponents; for a weighted allocation the
/// weighted-Bernoulli tail lemma supplies 1/max π.
#[allow(clippy::too_many_arguments)]
pub fn theorem1_bound(l_pi: f64, eta: f64, rho: f64, f: f64, m: usize, n: f64, h: f64, c0: f64) -> Theorem1Terms {
    let mf = m as f64;
    let detection = mf * (-2.0 * l_pi * eta * eta + mf * c0).exp();
    let false_alarm = mf * (-l_pi * f * d_rho(rho) / rho).exp();
    let chi_square = mf * (-(n - mf + 1.0) * h * h / 2.0).exp();
    Theorem1Terms { detection, false_alarm, chi_square, total: detection + false_alarm + chi_square }
}

/// (δ_wght, δ_mis) with δ_wght = (1 − x_r) − (gap − η)/2 and δ_mis = (snr/2C)δ_wght.
pub fn delta_mis_bound(x_r: f64, gap: f64, eta: f64, channel: &ChannelParams) -> Result<(f64, f64)> {
    if gap < eta {
        return domain(format!("gap {gap} must be at least η {eta}"));
    }
    let w = (1.0 - x_r) - 0.5 * (gap - eta);
    Ok((w, channel.snr / (2.0 * channel.capacity()) * w))
}

/// Tail bounds for a weighted Bernoulli average r̂ = Σ α_j B_j, B_j ~ Ber(r_j).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    /// r* = Σ α_j r_j.
    pub mean: f64,
    /// N_α = 1/max α_j.
    pub count: f64,
    /// Bound on P(r̂ ≤ t) (1 when t ≥ r*).
    pub lower: f64,
    /// Bound on P(r̂ ≥ t) (1 when t ≤ r*).
    pub upper: f64,
}

pub fn bernoulli_tail(alpha: &[f64], r: &[f64], threshold: f64) -> Result<TailBound> {
    if alpha.len() != r.len() || alpha.is_empty() {
        return domain("weights and probabilities must be non-empty and of equal length");
    }
    if alpha.iter().any(|&a| !(a >= 0.0)) || (alpha.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return domain("weights must be non-negative and sum to one");
    }
    if r.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
        return domain("success probabilities must lie in [0,1]");
    }
    if !(threshold > 0.0 && threshold < 1.0) {
        return domain(format!("threshold must lie in (0,1), got {threshold}"));
    }
    let mean: f64 = alpha.iter().zip(r).map(|(a, p)| a * p).sum();
    let count = 1.0 / alpha.iter().cloned().fold(0.0, f64::max);
    let b = (-count * kl_bernoulli(threshold, mean)).exp();
    Ok(TailBound {
        mean,
        count,
        lower: if threshold < mean { b } else { 1.0 },
        upper: if threshold > mean { b } else { 1.0 },
    })
}

/// The succession of lower bounds on the Bernoulli relative entropy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyChain {
    pub bernoulli: f64,
    pub poisson: f64,
    /// 2(√p − √p*)².
    pub hellinger: f64,
    /// (p − p*)²/(2p).
    pub quadratic: f64,
}

pub fn entropy_chain(p: f64, p_star: f64) -> Result<EntropyChain> {
    if !(0.0 < p_star && p_star <= p && p < 1.0) {
        return domain(format!("need 0 < p* ≤ p < 1, got p = {p}, p* = {p_star}"));
    }
    Ok(EntropyChain {
        bernoulli: kl_bernoulli(p, p_star),
        poisson: kl_poisson(p, p_star),
        hellinger: 2.0 * (p.sqrt() - p_star.sqrt()).powi(2),
        quadratic: (p - p_star).powi(2) / (2.0 * p),
    })
}

/// Result of a sampled accumulativity check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccumulativeCheck {
    pub holds: bool,
    /// min (g(x) − x) over the grid.
    pub min_margin: f64,
    pub argmin: f64,
    pub grid_points: usize,
}

/// Check g(x) − x ≥ gap on a uniform grid of `points` (≥ 201) over [0, x_r].
pub fn check_accumulative(g: impl Fn(f64) -> f64, x_r: f64, gap: f64, points: usize) -> AccumulativeCheck {
    let points = points.max(201);
    if !(x_r > 0.0 && x_r.is_finite()) {
        let margin = g(0.0);
        return AccumulativeCheck { holds: false, min_margin: margin, argmin: 0.0, grid_points: 1 };
    }
    let top = x_r.min(1.0);
    let (mut worst, mut at) = (f64::INFINITY, 0.0);
    for i in 0..points {
        let x = top * i as f64 / (points - 1) as f64;
        let m = g(x) - x;
        if !(m >= worst) {
            worst = m;
            at = x;
        }
    }
    AccumulativeCheck { holds: worst >= gap, min_margin: worst, argmin: at, grid_points: points }
}
