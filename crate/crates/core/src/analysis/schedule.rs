use serde::{Deserialize, Serialize};

use super::progression::Progression;
use crate::decoder::DecoderSchedule;
use crate::error::{Error, Result};
use crate::special::kl_bernoulli;

/// How the per-step slack η_k is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Slack {
    /// The same η every step.
    Constant(f64),
    /// Smallest η_k with count·D(q* − η_k ‖ q*) ≥ log_budget + k·c₀, so that
    /// each step's shortfall probability, after the union over step
    /// histories, stays below e^{−log_budget}.
    Divergence { count: f64, log_budget: f64, c0: f64 },
}

/// Pacing rule: q_k = q_{1,k} − q_{1,k−1} − [1/L_π] − f.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PacedRule {
    /// False-alarm allowance per step.
    pub f: f64,
    /// Subtract 1/L_π for the partially filled last section each step.
    pub pacing_loss: bool,
    pub slack: Slack,
    pub max_steps: usize,
}

/// One row of a paced trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PacedStep {
    pub k: usize,
    /// q* = g(x_{k−1}).
    pub q_star: f64,
    pub eta: f64,
    pub q1: f64,
    pub q: f64,
    /// x_k after the step.
    pub x: f64,
}

fn solve_eta(q_star: f64, count: f64, target: f64) -> Option<f64> {
    if !(q_star > 0.0) || count * kl_bernoulli(0.0, q_star) < target {
        return None;
    }
    if target <= 0.0 {
        return Some(0.0);
    }
    let (mut lo, mut hi) = (0.0, q_star);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if count * kl_bernoulli(q_star - mid, q_star) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(hi)
}

/// Run the pacing recursion x_k = x_{k−1} + q_k/(1 + f/q_k) until the
/// increment vanishes, the slack cannot be met, or x reaches 1/ν.
pub fn paced_progression(prog: &Progression, rule: &PacedRule) -> Vec<PacedStep> {
    let loss = if rule.pacing_loss { 1.0 / prog.l_pi } else { 0.0 };
    let nu = prog.nu();
    let (mut x, mut q1_prev) = (0.0, 0.0);
    let mut rows = Vec::new();
    for k in 1..=rule.max_steps {
        let q_star = prog.g(x);
        let eta = match rule.slack {
            Slack::Constant(e) => e,
            Slack::Divergence { count, log_budget, c0 } => {
                match solve_eta(q_star, count, log_budget + k as f64 * c0) {
                    Some(e) => e,
                    None => break,
                }
            }
        };
        let q1 = q_star - eta;
        let q = q1 - q1_prev - loss - rule.f;
        if !(q > 1e-12) {
            break;
        }
        x += q / (1.0 + rule.f / q);
        rows.push(PacedStep { k, q_star, eta, q1, q, x });
        q1_prev = q1;
        if x * nu >= 1.0 {
            break;
        }
    }
    rows
}

/// Decoder schedule that follows a paced trajectory.
pub fn schedule_from_paced(prog: &Progression, steps: &[PacedStep], f: f64) -> Result<DecoderSchedule> {
    let q1: Vec<f64> = steps.iter().map(|s| s.q1).collect();
    let q: Vec<f64> = steps.iter().map(|s| s.q).collect();
    let eta: Vec<f64> = steps.iter().map(|s| s.eta).collect();
    DecoderSchedule::from_targets(prog.threshold.tau, prog.nu(), f, prog.config.h, &q1, &q, &eta)
}

/// Schedule with constant slack η and false-alarm allowance f = ρ f* that
/// carries the adjusted total past x_r and then takes one more step, for a
/// configuration where g − x ≥ gap on [0, x_r].
///
/// Requires gap > η ≥ 0 and f ≤ (gap − η)²/8 − 1/(2L_π); then every increment
/// stays positive and at most ⌈2/(gap − η)⌉ steps are needed.
pub fn build_schedule(prog: &Progression, x_r: f64, gap: f64, eta: f64, f: f64) -> Result<DecoderSchedule> {
    if !(gap > eta && eta >= 0.0) {
        return Err(Error::InfeasibleSchedule(format!("need gap > η ≥ 0, got gap = {gap}, η = {eta}")));
    }
    let limit = (gap - eta).powi(2) / 8.0 - 0.5 / prog.l_pi;
    if !(f >= 0.0 && f <= limit) {
        return Err(Error::InfeasibleSchedule(format!(
            "false-alarm allowance f = {f:e} exceeds (gap − η)²/8 − 1/(2L_π) = {limit:e} (margin {:e})",
            limit - f
        )));
    }
    let cap = (2.0 / (gap - eta)).ceil() as usize;
    let loss = 1.0 / prog.l_pi;
    let (mut x, mut q1_prev) = (0.0, 0.0);
    let (mut q1s, mut qs, mut etas) = (Vec::new(), Vec::new(), Vec::new());
    // m is the first k with x_{k−1} > x_r, so q_{1,m} = g(x_{m−1}) − η ≥ g(x_r) − η
    loop {
        if q1s.len() == cap {
            return Err(Error::InfeasibleSchedule(format!(
                "adjusted total {x} still below x_r = {x_r} after {cap} steps"
            )));
        }
        let g = prog.g(x);
        if !g.is_finite() {
            return Err(Error::Numerical(format!("g_L undefined at x = {x}")));
        }
        let q1 = g - eta;
        let q = q1 - q1_prev - loss - f;
        if !(q > 0.0) {
            return Err(Error::InfeasibleSchedule(format!(
                "step {} increment q = {q:e} is not positive at x = {x}",
                q1s.len() + 1
            )));
        }
        let past = x > x_r;
        x += q / (1.0 + f / q);
        q1s.push(q1);
        qs.push(q);
        etas.push(eta);
        q1_prev = q1;
        if past {
            break;
        }
    }
    DecoderSchedule::from_targets(prog.threshold.tau, prog.nu(), f, prog.config.h, &q1s, &qs, &etas)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_solution() {
        let e = solve_eta(0.6, 1000.0, 5.0).unwrap();
        assert!((1000.0 * kl_bernoulli(0.6 - e, 0.6) - 5.0).abs() < 1e-9);
        assert!(solve_eta(0.6, 1.0, 5.0).is_none());
        assert_eq!(solve_eta(0.6, 1.0, 0.0), Some(0.0));
    }
}
