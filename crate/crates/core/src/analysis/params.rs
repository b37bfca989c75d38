use serde::{Deserialize, Serialize};

use super::bounds::{f_star, theorem1_bound, Theorem1Terms};
use super::integral::RateSlack;
use crate::codebook::{AllocationKind, PowerAllocation};
use crate::error::{domain, Result};
use crate::model::ChannelParams;
use crate::special::sqrt_pi;

/// Threshold and rate slack from the closed-form recipe.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectedParameters {
    /// ω = (1 + 1/C)/2.
    pub omega: f64,
    pub a: f64,
    pub delta_a: f64,
    /// r* = r₁ + 1/ω.
    pub r_star: f64,
    pub slack: RateSlack,
    /// Target false-alarm weight (gap²/8) that fixes a.
    pub f_target: f64,
    /// (M − 1)Φ̄(τ) at the chosen a.
    pub f_exact: f64,
    /// C* = C/((1+δ_a)²(1 + r*/ln M)).
    pub c_star: f64,
    /// (C − C*)/C.
    pub drop_star: f64,
    /// Presentation-level approximation of drop*.
    pub drop_star_approx: f64,
    /// Presentation-level approximation of the total drop including the outer code.
    pub drop_total_approx: f64,
}

/// Choose a and r* so that the false-alarm weight matches gap²/8.
///
/// With ω = (1 + 1/C)/2 and r* − r₁ = 1/ω the gap is (ω snr ln M)⁻¹ whatever
/// a is; a then solves a√(2 ln M) = ln[1/(f* √(2π) √(2 ln M))].
pub fn select_parameters(channel: &ChannelParams, section_size: usize) -> Result<SelectedParameters> {
    if section_size < 2 {
        return domain("section size must be ≥ 2");
    }
    let c = channel.capacity();
    let ln_m = (section_size as f64).ln();
    let s = (2.0 * ln_m).sqrt();
    let omega = 0.5 * (1.0 + 1.0 / c);
    let gap = 1.0 / (omega * channel.snr * ln_m);
    let f_target = gap * gap / 8.0;
    let a = -(f_target * (2.0 * std::f64::consts::PI).sqrt() * s).ln() / s;
    let delta_a = a / s;
    let r1 = RateSlack::compute(channel, section_size, 0.0, a)?.r1;
    let r_star = r1 + 1.0 / omega;
    let slack = RateSlack::compute(channel, section_size, r_star, a)?;
    let c_star = c / ((1.0 + delta_a).powi(2) * (1.0 + r_star / ln_m));
    let omega1 = 1.0 + 1.0 / c;
    let lnln = ln_m.ln();
    let drop_star_approx = (3.0 * lnln + 4.0 * (omega1 * channel.snr).ln() + 4.0 / omega1 - 2.0) / (2.0 * ln_m)
        + 1.0 / (std::f64::consts::PI * ln_m).sqrt();
    let drop_total_approx = (3.0 * lnln + 4.0 * (omega1 * channel.snr).ln() + 1.0 / (4.0 * c) + 3.35) / (2.0 * ln_m)
        + (1.0 + 1.0 / (2.0 * c)) / (std::f64::consts::PI * ln_m).sqrt();
    Ok(SelectedParameters {
        omega,
        a,
        delta_a,
        r_star,
        slack,
        f_target,
        f_exact: f_star(s + a, section_size)?.exact,
        c_star,
        drop_star: (c - c_star) / c,
        drop_star_approx,
        drop_total_approx,
    })
}

/// Rate, mistake-rate and error-probability bounds at R = C*/(1 + κ/ln M).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateBoundReport {
    pub kappa: f64,
    pub params: SelectedParameters,
    /// Rate slack r = r* + κ.
    pub r: f64,
    pub rate: f64,
    /// Δ* = (C* − R)/C*.
    pub delta_star: f64,
    pub x_r: f64,
    pub gap: f64,
    pub eta: f64,
    pub h: f64,
    /// ρ = (1 + κω/2)² − ε_L.
    pub rho: f64,
    pub eps_l: f64,
    /// f = ρ f*, with f* the target gap²/8 at r*.
    pub f: f64,
    pub m: usize,
    pub block_length: f64,
    /// 1/min π.
    pub l_pi: f64,
    /// 1/max π, the count in the tail exponents.
    pub tail_count: f64,
    pub delta_wght: f64,
    pub delta_mis: f64,
    /// (3κ + 5)/(8C ln M) + δ_M/(2C), δ_M = 1/√(π ln M).
    pub delta_mis_explicit: f64,
    pub terms: Theorem1Terms,
    /// The false-alarm term is vacuous when ρ ≤ 1.
    pub vacuous: bool,
    pub kappa_consts: [f64; 4],
    pub p_e_explicit: f64,
    /// R_tot = (1 − δ_mis) R.
    pub composite_rate: f64,
}

pub fn proposition1_report(channel: &ChannelParams, section_size: usize, sections: usize, kappa: f64) -> Result<RateBoundReport> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return domain(format!("κ must be positive, got {kappa}"));
    }
    let p = select_parameters(channel, section_size)?;
    let (c, snr) = (channel.capacity(), channel.snr);
    let ln_m = (section_size as f64).ln();
    let r = p.r_star + kappa;
    let rate = p.c_star / (1.0 + kappa / ln_m);
    let sl = RateSlack::compute(channel, section_size, r, p.a)?;
    let eta = kappa / (2.0 * snr * ln_m);
    let h = kappa / (2.0 * ln_m).powf(1.5);
    let alloc = PowerAllocation::new(AllocationKind::Exponential, channel, sections)?;
    let (l_pi, tail_count) = (alloc.l_pi(), alloc.tail_count());
    let eps_l = (2.0 * p.omega * snr * ln_m).powi(2) / l_pi;
    let rho = (1.0 + kappa * p.omega / 2.0).powi(2) - eps_l;
    let f = rho * p.f_target;
    let m = (2.0 / (sl.gap - eta)).ceil() as usize;
    let n = sections as f64 * ln_m / rate;
    let mut terms = theorem1_bound(tail_count, eta, rho, f, m, n, h, channel.c0());
    let vacuous = rho <= 1.0;
    if vacuous {
        terms.false_alarm = m as f64;
        terms.total = terms.detection + terms.false_alarm + terms.chi_square;
    }
    let delta_wght = (1.0 - sl.x_r) - 0.5 * (sl.gap - eta);
    let delta_mis = snr / (2.0 * c) * delta_wght;
    let delta_m = 1.0 / (std::f64::consts::PI * ln_m).sqrt();
    let delta_mis_explicit = (3.0 * kappa + 5.0) / (8.0 * c * ln_m) + delta_m / (2.0 * c);
    let mf = m as f64;
    let k1 = 3.0 * mf * (mf * channel.c0().max(0.5)).exp();
    let k2 = channel.nu() / (2.0 * c);
    let k3 = (1.0 / (32.0 * snr * snr)).min(1.0 / (16.0 * p.c_star));
    let k4 = 1.0 / (8.0 * (1.0 + 1.0 / c) * snr * snr * ln_m);
    let ds = (p.c_star - rate) / p.c_star;
    let p_e_explicit = k1 * (-k2 * sections as f64 * (k3 * ds * ds).min(k4 * ds)).exp();
    Ok(RateBoundReport {
        kappa,
        params: p,
        r,
        rate,
        delta_star: ds,
        x_r: sl.x_r,
        gap: sl.gap,
        eta,
        h,
        rho,
        eps_l,
        f,
        m,
        block_length: n,
        l_pi,
        tail_count,
        delta_wght,
        delta_mis,
        delta_mis_explicit,
        terms,
        vacuous,
        kappa_consts: [k1, k2, k3, k4],
        p_e_explicit,
        composite_rate: (1.0 - delta_mis) * rate,
    })
}

#[allow(dead_code)]
fn closed_form_a(channel: &ChannelParams, section_size: usize) -> f64 {
    let c = channel.capacity();
    let ln_m = (section_size as f64).ln();
    let s = (2.0 * ln_m).sqrt();
    1.5 * ln_m.ln() / s + 2.0 * (channel.snr * (1.0 + 1.0 / c) / sqrt_pi().sqrt()).ln() / s
}
