use serde::{Deserialize, Serialize};
use superpose::analysis::{
    build_schedule, check_accumulative, expected_on, grid_search, delta_mis_bound, evaluate_large_l, evaluate_refined, f_star,
    schedule_from_paced, search_large_l, search_refined, select_parameters, theorem1_bound,
    AccumulativeCheck, BoundConfig, GridSpec, IntegralModel, LargeLEvaluation, Objective, Progression,
    RefinedEvaluation, Slack, Theorem1Terms,
};
use superpose::{AllocationKind, DecoderSchedule};

use crate::config::{ExperimentConfig, ScheduleMode, ThresholdMode, ThresholdSpec};
use crate::error::{HarnessError, Result};

/// Constant-slack bound evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    /// Where x_r and gap came from: the closed-form lower bound or a grid scan.
    pub accumulation: String,
    pub x_r: f64,
    pub gap: f64,
    pub eta: f64,
    pub rho: f64,
    pub f: f64,
    pub f_star: f64,
    pub h: f64,
    pub m: usize,
    pub q1_final: f64,
    pub delta_wght: f64,
    /// δ_wght·L_π/L.
    pub delta_mis: f64,
    /// (snr/2C)δ_wght, the exponential-allocation conversion.
    pub delta_mis_asymptotic: Option<f64>,
    pub terms: Theorem1Terms,
    pub accumulative: AccumulativeCheck,
}

/// Threshold, allocation and decoder schedule for an experiment.
#[derive(Clone, Debug)]
pub struct PreparedDesign {
    pub bound: BoundConfig,
    pub mode: ScheduleMode,
    pub schedule: DecoderSchedule,
    pub grid: Option<GridSpec>,
    pub large_l: Option<LargeLEvaluation>,
    /// Expected progression with the finite-L slack.
    pub finite: Option<LargeLEvaluation>,
    pub refined: Option<RefinedEvaluation>,
    pub theorem: Option<TheoremReport>,
}

/// Resolve (a, allocation) from the threshold spec.
pub fn choose_threshold(cfg: &ExperimentConfig) -> Result<(BoundConfig, Option<GridSpec>)> {
    let channel = cfg.channel()?;
    match cfg.threshold {
        ThresholdSpec::Offset(a) => Ok((cfg.bound_config(a, cfg.allocation)?, None)),
        ThresholdSpec::Mode(ThresholdMode::Auto) => {
            let a = select_parameters(&channel, cfg.section_size)?.a;
            Ok((cfg.bound_config(a, cfg.allocation)?, None))
        }
        ThresholdSpec::Mode(ThresholdMode::Search) if cfg.schedule == ScheduleMode::Uniform => {
            let a = select_parameters(&channel, cfg.section_size)?.a;
            Ok((cfg.bound_config(a, cfg.allocation)?, None))
        }
        ThresholdSpec::Mode(ThresholdMode::Search) => {
            let base = cfg.bound_config(0.0, AllocationKind::Exponential)?;
            let grid = cfg.grid();
            let best = match cfg.schedule {
                ScheduleMode::LargeL => search_large_l(&base, &grid, Objective::DeltaMis)?.best.config,
                ScheduleMode::Finite => {
                    let z = cfg.slack_z;
                    grid_search(&base, &grid, |p| finite_on(p, z), |e: &LargeLEvaluation| e.delta_mis)?.best.config
                }
                _ => search_refined(&base, &grid, cfg.p_target, Objective::DeltaWeight)?.best.config,
            };
            Ok((best, Some(grid)))
        }
    }
}


/// Expected progression with η_k = z·√(q*(1 − q*)/T), T = 1/max π, in its
/// exact-divergence form T·D(q* − η‖q*) = z²/2.
pub fn finite_on(prog: &Progression, z: f64) -> superpose::Result<LargeLEvaluation> {
    expected_on(prog, Slack::Divergence { count: prog.tail_count, log_budget: 0.5 * z * z, c0: 0.0 })
}

/// Choose the threshold and build the decoder schedule of the configured mode.
pub fn prepare(cfg: &ExperimentConfig) -> Result<PreparedDesign> {
    cfg.validate()?;
    let (bound, grid) = choose_threshold(cfg)?;
    let mut design = PreparedDesign {
        bound,
        mode: cfg.schedule,
        schedule: DecoderSchedule { threshold: 0.0, f: 0.0, h: 0.0, nu: 0.0, steps: Vec::new() },
        grid,
        large_l: None,
        finite: None,
        refined: None,
        theorem: None,
    };
    match cfg.schedule {
        ScheduleMode::LargeL => {
            let e = evaluate_large_l(&bound)?;
            design.schedule = schedule_from_paced(&Progression::new(&bound)?, &e.steps, e.f_star)?;
            design.large_l = Some(e);
        }
        ScheduleMode::Finite => {
            let prog = Progression::new(&bound)?;
            let e = finite_on(&prog, cfg.slack_z)?;
            design.schedule = schedule_from_paced(&prog, &e.steps, e.f_star)?;
            design.finite = Some(e);
        }
        ScheduleMode::Refined => {
            let e = evaluate_refined(&bound, cfg.p_target)?;
            let prog = Progression::new(&BoundConfig { h: e.h, ..bound })?;
            design.schedule = schedule_from_paced(&prog, &e.steps, e.f)?;
            design.refined = Some(e);
        }
        ScheduleMode::Uniform => {
            let l = cfg.sections;
            let q1: Vec<f64> = (1..=l).map(|k| k as f64 / l as f64).collect();
            let q = vec![1.0 / l as f64; l];
            design.schedule = DecoderSchedule::from_targets(bound.threshold()?.tau, cfg.channel()?.nu(), 0.0, 0.0, &q1, &q, &vec![0.0; l])?;
        }
        ScheduleMode::Theorem => {
            let (t, s) = theorem_schedule(cfg, &bound)?;
            design.schedule = s;
            design.theorem = Some(t);
        }
    }
    Ok(design)
}

/// x_r and gap: from the closed-form lower bound for the exponential
/// allocation, otherwise by scanning g_L − x on a 201-point grid and taking
/// the x_r that maximises x_r + gap/2.
fn accumulation(prog: &Progression) -> Result<(String, f64, f64)> {
    let cfg = prog.config;
    if cfg.allocation == AllocationKind::Exponential {
        let sl = IntegralModel::new(&cfg)?.slack();
        if !(sl.gap > 0.0) {
            return Err(HarnessError::Infeasible(format!(
                "negative gap {:.4e}: rate slack r = {:.4} does not exceed r₁ = {:.4}",
                sl.gap, sl.r, sl.r1
            )));
        }
        return Ok(("integral lower bound".into(), sl.x_r.min(1.0), sl.gap));
    }
    let (mut running, mut best) = (f64::INFINITY, None::<(f64, f64)>);
    for i in 0..=200 {
        let x = i as f64 / 200.0;
        running = running.min(prog.g(x) - x);
        if running > 0.0 && best.is_none_or(|(bx, bg)| x + running / 2.0 > bx + bg / 2.0) {
            best = Some((x, running));
        }
    }
    let (x_r, gap) = best.ok_or_else(|| {
        HarnessError::Infeasible(format!("negative gap: g_L(0) − 0 = {:.4e} leaves no accumulation margin", prog.g(0.0)))
    })?;
    Ok(("grid scan".into(), x_r, gap))
}

fn theorem_at(
    cfg: &ExperimentConfig,
    prog: &Progression,
    x_r: f64,
    gap: f64,
    eta: f64,
    fs: f64,
) -> Result<(TheoremReport, DecoderSchedule)> {
    let bound = prog.config;
    let limit = (gap - eta).powi(2) / 8.0 - 0.5 / prog.l_pi;
    if limit <= 0.0 {
        return Err(HarnessError::Infeasible(format!(
            "gap {gap:.4e} with η = {eta:.4e} leaves no false-alarm allowance: (gap − η)²/8 − 1/(2L_π) = {limit:.4e}"
        )));
    }
    let (rho, f) = match cfg.rho {
        Some(r) => (r, r * fs),
        None if fs > 0.0 => (limit / fs, limit),
        None => (f64::INFINITY, 0.0),
    };
    let s = build_schedule(prog, x_r, gap, eta, f)?;
    let m = s.m();
    let n = bound.block_length();
    let mut terms = theorem1_bound(prog.tail_count, eta, rho, f, m, n, bound.h, prog.channel.c0());
    if !rho.is_finite() {
        terms.false_alarm = 0.0;
        terms.total = terms.detection + terms.chi_square;
    }
    let channel = prog.channel;
    let (delta_wght, asym) = delta_mis_bound(x_r, gap, eta, &channel)?;
    let report = TheoremReport {
        accumulation: String::new(),
        x_r,
        gap,
        eta,
        rho,
        f,
        f_star: fs,
        h: bound.h,
        m,
        q1_final: s.steps[m - 1].q1,
        delta_wght,
        delta_mis: delta_wght * prog.l_pi / bound.sections as f64,
        delta_mis_asymptotic: (bound.allocation == AllocationKind::Exponential).then_some(asym),
        terms,
        accumulative: check_accumulative(|x| prog.g(x), x_r, gap, 201),
    };
    Ok((report, s))
}

/// Constant-slack schedule. Unless given, h is sized so the χ² term meets
/// p_target/3 and η is scanned to minimise the total bound.
pub fn theorem_schedule(cfg: &ExperimentConfig, bound: &BoundConfig) -> Result<(TheoremReport, DecoderSchedule)> {
    let n = bound.block_length();
    let mut h = cfg.h.unwrap_or(0.0);
    let mut last = None;
    for _ in 0..3 {
        let prog = Progression::new(&BoundConfig { h, ..*bound })?;
        let (source, x_r, gap) = accumulation(&prog)?;
        let fs = f_star(prog.threshold.tau, bound.section_size)?.exact;
        let candidates: Vec<f64> = match cfg.eta {
            Some(e) => vec![e],
            None => (0..200).map(|i| gap * i as f64 / 200.0).collect(),
        };
        let mut best: Option<(TheoremReport, DecoderSchedule)> = None;
        let mut first_err = None;
        for eta in candidates {
            match theorem_at(cfg, &prog, x_r, gap, eta, fs) {
                Ok((r, s)) => {
                    if best.as_ref().is_none_or(|(b, _)| r.terms.total < b.terms.total) {
                        best = Some((r, s));
                    }
                }
                Err(e) => {
                    first_err.get_or_insert(e);
                }
            }
        }
        let Some((mut r, s)) = best else {
            return Err(first_err.unwrap_or_else(|| HarnessError::Infeasible("no admissible slack".into())));
        };
        r.accumulation = source;
        let m = r.m as f64;
        let wanted = (2.0 * (3.0 * m / cfg.p_target).ln() / (n - m + 1.0)).sqrt();
        let done = cfg.h.is_some() || (wanted - h).abs() < 1e-6 || wanted >= 1.0;
        last = Some((r, s));
        if done {
            break;
        }
        h = wanted;
    }
    Ok(last.expect("at least one pass"))
}
