use std::io::Write;

use serde::{Deserialize, Serialize};
use superpose::analysis::{
    evaluate_large_l, evaluate_refined, f_star, proposition1_report, select_parameters, BoundConfig,
    GridSpec, LargeLEvaluation, Progression, RateBoundReport, RefinedEvaluation,
};
use superpose::{AllocationKind, DecoderSchedule};

use crate::config::{ExperimentConfig, ScheduleMode};
use crate::design::{finite_on, prepare, theorem_schedule, TheoremReport};
use crate::error::{HarnessError, Result};

/// Everything the bound analysis says about one configuration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundsReport {
    pub config: ExperimentConfig,
    pub capacity_nats: f64,
    pub capacity_bits: f64,
    pub rate_nats: f64,
    pub rate_bits: f64,
    pub block_length: f64,
    pub bound: BoundConfig,
    pub tau: f64,
    /// 1/min π.
    pub l_pi: f64,
    /// 1/max π.
    pub tail_count: f64,
    pub f_star: f64,
    pub grid: Option<GridSpec>,
    pub mode: ScheduleMode,
    pub large_l: Option<LargeLEvaluation>,
    pub finite: Option<LargeLEvaluation>,
    pub refined: Option<RefinedEvaluation>,
    pub theorem: Option<TheoremReport>,
    /// Explicit rate-gap form, for the exponential allocation below C*.
    pub proposition: Option<RateBoundReport>,
    /// Evaluations that were attempted and found infeasible.
    pub diagnostics: Vec<String>,
    pub schedule: DecoderSchedule,
}

/// Evaluate the bounds; the configured schedule mode must be feasible, the
/// others are reported when they are.
pub fn evaluate_bounds(cfg: &ExperimentConfig) -> Result<BoundsReport> {
    cfg.validate()?;
    let channel = cfg.channel()?;
    let rate = cfg.rate_nats()?;
    if rate >= channel.capacity() {
        return Err(HarnessError::Infeasible(format!(
            "rate {rate:.4} nats is not below capacity {:.4}: negative gap C − R = {:.4e}",
            channel.capacity(),
            channel.capacity() - rate
        )));
    }
    let design = prepare(cfg)?;
    let bound = design.bound;
    let prog = Progression::new(&bound)?;
    let mut diagnostics = Vec::new();
    let mut large_l = design.large_l.clone();
    let mut finite = design.finite.clone();
    let mut refined = design.refined.clone();
    let mut theorem = design.theorem.clone();
    if large_l.is_none() {
        match evaluate_large_l(&bound) {
            Ok(e) => large_l = Some(e),
            Err(e) => diagnostics.push(format!("large-L: {e}")),
        }
    }
    if finite.is_none() {
        match finite_on(&prog, cfg.slack_z) {
            Ok(e) => finite = Some(e),
            Err(e) => diagnostics.push(format!("finite: {e}")),
        }
    }
    if refined.is_none() {
        match evaluate_refined(&bound, cfg.p_target) {
            Ok(e) => refined = Some(e),
            Err(e) => diagnostics.push(format!("refined: {e}")),
        }
    }
    if theorem.is_none() {
        match theorem_schedule(cfg, &bound) {
            Ok((t, _)) => theorem = Some(t),
            Err(e) => diagnostics.push(format!("theorem: {e}")),
        }
    }
    let mut proposition = None;
    if bound.allocation == AllocationKind::Exponential {
        let sel = select_parameters(&channel, cfg.section_size)?;
        if rate < sel.c_star {
            let kappa = (sel.c_star / rate - 1.0) * (cfg.section_size as f64).ln();
            match proposition1_report(&channel, cfg.section_size, cfg.sections, kappa) {
                Ok(r) => proposition = Some(r),
                Err(e) => diagnostics.push(format!("proposition: {e}")),
            }
        } else {
            diagnostics.push(format!("proposition: rate {rate:.4} is not below C* = {:.4}", sel.c_star));
        }
    }
    Ok(BoundsReport {
        config: cfg.clone(),
        capacity_nats: channel.capacity(),
        capacity_bits: channel.capacity_bits(),
        rate_nats: rate,
        rate_bits: rate / std::f64::consts::LN_2,
        block_length: bound.block_length(),
        bound,
        tau: prog.threshold.tau,
        l_pi: prog.l_pi,
        tail_count: prog.tail_count,
        f_star: f_star(prog.threshold.tau, cfg.section_size)?.exact,
        grid: design.grid,
        mode: design.mode,
        large_l,
        finite,
        refined,
        theorem,
        proposition,
        diagnostics,
        schedule: design.schedule,
    })
}

/// Schedule CSV: `k,q1k,qk,lambda_kk,wk,sk`.
pub fn write_schedule_csv<W: Write>(w: W, schedule: &DecoderSchedule) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["k", "q1k", "qk", "lambda_kk", "wk", "sk"])?;
    for s in &schedule.steps {
        out.write_record([
            s.k.to_string(),
            s.q1.to_string(),
            s.q.to_string(),
            s.lambda.to_string(),
            s.w.to_string(),
            s.s.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
