use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// One step of a decoding schedule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleStep {
    /// 1-based step number.
    pub k: usize,
    /// Pacing target q_{1,k}.
    pub q1: f64,
    /// Detection target q_k.
    pub q: f64,
    /// q_k^adj = q_k/(1 + f/q_k).
    pub q_adj: f64,
    /// x_{k−1} = q^{adj,tot}_{k−1}, the total that sets s_k.
    pub x_prev: f64,
    /// s_k = 1/(1 − x_{k−1}ν).
    pub s: f64,
    /// w_k = s_k − s_{k−1}.
    pub w: f64,
    /// λ_{k,k} = √(w_k/s_k).
    pub lambda: f64,
    /// Slack η_k subtracted from the expected success rate.
    pub eta: f64,
}

/// Pacing targets and combination weights for the adaptive decoder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecoderSchedule {
    /// Threshold τ = √(2 ln M) + a.
    pub threshold: f64,
    /// False-alarm allowance f per step.
    pub f: f64,
    /// χ² slack h.
    pub h: f64,
    /// ν of the channel the weights were built for.
    pub nu: f64,
    pub steps: Vec<ScheduleStep>,
}

impl DecoderSchedule {
    /// Assemble a schedule from pacing targets `q1[k]`, detection targets `q[k]`
    /// and the false-alarm allowance `f`; the adjusted totals and the
    /// s/w/λ series follow.
    pub fn from_targets(threshold: f64, nu: f64, f: f64, h: f64, q1: &[f64], q: &[f64], eta: &[f64]) -> Result<Self> {
        if q1.is_empty() || q1.len() != q.len() || q.len() != eta.len() {
            return domain("schedule arrays must be non-empty and of equal length");
        }
        if !(0.0 < nu && nu < 1.0) {
            return domain(format!("ν must lie in (0,1), got {nu}"));
        }
        let mut steps = Vec::with_capacity(q1.len());
        let mut x = 0.0;
        let mut s_prev = 0.0;
        for k in 0..q1.len() {
            if x * nu >= 1.0 {
                return domain("adjusted total reached 1/ν");
            }
            let s = 1.0 / (1.0 - x * nu);
            let w = s - s_prev;
            let q_adj = if q[k] > 0.0 { q[k] / (1.0 + f / q[k]) } else { 0.0 };
            steps.push(ScheduleStep {
                k: k + 1,
                q1: q1[k],
                q: q[k],
                q_adj,
                x_prev: x,
                s,
                w,
                lambda: (w / s).sqrt(),
                eta: eta[k],
            });
            x += q_adj;
            s_prev = s;
        }
        Ok(DecoderSchedule { threshold, f, h, nu, steps })
    }

    /// m, the number of steps.
    pub fn m(&self) -> usize {
        self.steps.len()
    }

    /// x_m = q^{adj,tot}_m after the last step.
    pub fn final_total(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.x_prev + s.q_adj)
    }

    /// λ_{k',k} = √(w_{k'}/s_k) for k' = 1..k.
    pub fn lambda_row(&self, k: usize) -> Vec<f64> {
        let s_k = self.steps[k - 1].s;
        self.steps[..k].iter().map(|st| (st.w / s_k).sqrt()).collect()
    }
}
