use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bounds::f_star;
use super::progression::{BoundConfig, Progression};
use super::schedule::{paced_progression, PacedRule, PacedStep, Slack};
use crate::codebook::AllocationKind;
use crate::error::{domain, Error, Result};
use crate::special::{kl_bernoulli, log_norm_sf};

const MAX_STEPS: usize = 400;

/// What a grid search minimises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Weighted failure plus false alarm, δ_wght.
    DeltaWeight,
    /// Section mistake rate, δ_mis = δ_wght·L_π/L.
    DeltaMis,
}

/// Bound evaluation with a per-step divergence slack, a false-alarm allowance
/// and χ² slack sized so that each of the three error sources contributes at
/// most p/3.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefinedEvaluation {
    pub config: BoundConfig,
    pub p_target: f64,
    pub m: usize,
    pub rho: f64,
    /// f = ρ f*.
    pub f: f64,
    pub f_star: f64,
    pub h: f64,
    pub l_pi: f64,
    pub tail_count: f64,
    /// q_{1,m}.
    pub q1_final: f64,
    /// Weighted detection proportion q_{1,m} − m(f + 1/L_π).
    pub detection: f64,
    /// 1 − detection.
    pub failed: f64,
    /// m f.
    pub false_alarm: f64,
    pub delta_wght: f64,
    pub delta_mis: f64,
    pub p_e_detection: f64,
    pub p_e_false_alarm: f64,
    pub p_e_chi_square: f64,
    pub p_e: f64,
    pub steps: Vec<PacedStep>,
}

impl RefinedEvaluation {
    pub fn score(&self, objective: Objective) -> f64 {
        match objective {
            Objective::DeltaWeight => self.delta_wght,
            Objective::DeltaMis => self.delta_mis,
        }
    }
}

/// Expected-value evaluation for L → ∞: η = 0, f = f*, h = 0 and no pacing loss.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LargeLEvaluation {
    pub config: BoundConfig,
    pub m: usize,
    pub f_star: f64,
    pub q1_final: f64,
    /// 1 − q_{1,m} + 2m f*.
    pub delta_wght: f64,
    pub delta_mis: f64,
    pub steps: Vec<PacedStep>,
}

impl LargeLEvaluation {
    pub fn score(&self, objective: Objective) -> f64 {
        match objective {
            Objective::DeltaWeight => self.delta_wght,
            Objective::DeltaMis => self.delta_mis,
        }
    }
}

fn truncate_best(mut rows: Vec<PacedStep>, f: f64, loss: f64) -> Vec<PacedStep> {
    let best = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (i, 1.0 - r.q1 + 2.0 * r.k as f64 * f + r.k as f64 * loss))
        .fold(None, |acc: Option<(usize, f64)>, (i, v)| match acc {
            Some((_, b)) if b <= v => acc,
            _ => Some((i, v)),
        });
    if let Some((i, _)) = best {
        rows.truncate(i + 1);
    }
    rows
}

/// Smallest ρ > 1 with n_o·D(ρp*‖p*) ≥ target.
fn solve_rho(p_star: f64, n_o: f64, target: f64) -> Option<f64> {
    if p_star <= 0.0 {
        return Some(1.0);
    }
    let top = 1.0 / p_star;
    if n_o * kl_bernoulli(1.0 - 1e-15, p_star) < target {
        return None;
    }
    let (mut lo, mut hi) = (1.0, top * (1.0 - 1e-15));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if n_o * kl_bernoulli(mid * p_star, p_star) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * hi {
            break;
        }
    }
    Some(hi)
}

pub(crate) fn refined_on(prog0: &Progression, p_target: f64) -> Result<RefinedEvaluation> {
    if !(p_target > 0.0 && p_target < 1.0) {
        return domain(format!("target error probability must lie in (0,1), got {p_target}"));
    }
    let cfg = prog0.config;
    let ch = prog0.channel;
    let n = cfg.block_length();
    let sections = cfg.sections as f64;
    let big_m = cfg.section_size as f64;
    let tau = prog0.threshold.tau;
    let p_star = log_norm_sf(tau).exp();
    let fs = f_star(tau, cfg.section_size)?.exact;
    let n_o = (big_m - 1.0) * prog0.tail_count;
    let loss = 1.0 / prog0.l_pi;
    let mut m = 15usize;
    let mut state = None;
    for _ in 0..8 {
        let budget = (3.0 * m as f64 / p_target).ln();
        if n - m as f64 + 1.0 <= 0.0 {
            return Err(Error::InfeasibleSchedule(format!("block length {n} too short for {m} steps")));
        }
        let h = (2.0 * budget / (n - m as f64 + 1.0)).sqrt();
        if h >= 1.0 {
            return Err(Error::InfeasibleSchedule(format!("χ² slack h = {h} must stay below 1")));
        }
        let prog = prog0.with_h(h)?;
        let rho = solve_rho(p_star, n_o, budget)
            .ok_or_else(|| Error::InfeasibleSchedule("false-alarm budget unattainable".into()))?;
        let f = rho * fs;
        let rule = PacedRule {
            f,
            pacing_loss: true,
            slack: Slack::Divergence { count: prog0.tail_count, log_budget: budget, c0: ch.c0() },
            max_steps: MAX_STEPS,
        };
        let rows = truncate_best(paced_progression(&prog, &rule), f, loss);
        if rows.is_empty() {
            return Err(Error::InfeasibleSchedule("no step has a positive increment".into()));
        }
        let done = rows.len() == m;
        m = rows.len();
        state = Some((rows, rho, f, h, budget));
        if done {
            break;
        }
    }
    let (steps, rho, f, h, _) = state.expect("at least one iteration");
    let m = steps.len();
    let mf = m as f64;
    let last = steps[m - 1];
    let detection = last.q1 - mf * (f + loss);
    let false_alarm = mf * f;
    let delta_wght = 1.0 - detection + false_alarm;
    let p_e_detection: f64 = steps
        .iter()
        .map(|s| (-prog0.tail_count * kl_bernoulli(s.q1, s.q_star) + s.k as f64 * ch.c0()).exp())
        .sum();
    let p_e_false_alarm = if p_star > 0.0 { mf * (-n_o * kl_bernoulli(rho * p_star, p_star)).exp() } else { 0.0 };
    let p_e_chi_square = mf * (-(n - mf + 1.0) * h * h / 2.0).exp();
    Ok(RefinedEvaluation {
        config: cfg,
        p_target,
        m,
        rho,
        f,
        f_star: fs,
        h,
        l_pi: prog0.l_pi,
        tail_count: prog0.tail_count,
        q1_final: last.q1,
        detection,
        failed: 1.0 - detection,
        false_alarm,
        delta_wght,
        delta_mis: delta_wght * prog0.l_pi / sections,
        p_e_detection,
        p_e_false_alarm,
        p_e_chi_square,
        p_e: p_e_detection + p_e_false_alarm + p_e_chi_square,
        steps,
    })
}

/// Refined bound evaluation at target error probability `p_target`.
/// The χ² slack of `cfg` is ignored; it is sized from the target.
pub fn evaluate_refined(cfg: &BoundConfig, p_target: f64) -> Result<RefinedEvaluation> {
    refined_on(&Progression::new(&BoundConfig { h: 0.0, ..*cfg })?, p_target)
}

/// Large-L evaluation on a prepared (possibly coarsened) progression.
pub fn large_l_on(prog: &Progression) -> Result<LargeLEvaluation> {
    expected_on(prog, Slack::Constant(0.0))
}

/// Expected-value progression with f = f*, no pacing loss and the given
/// per-step slack below q*.
pub fn expected_on(prog: &Progression, slack: Slack) -> Result<LargeLEvaluation> {
    let cfg = prog.config;
    let fs = f_star(prog.threshold.tau, cfg.section_size)?.exact;
    let rule = PacedRule { f: fs, pacing_loss: false, slack, max_steps: MAX_STEPS };
    let steps = truncate_best(paced_progression(prog, &rule), fs, 0.0);
    let Some(last) = steps.last().copied() else {
        return Err(Error::InfeasibleSchedule("no step has a positive increment".into()));
    };
    let m = steps.len();
    let delta_wght = 1.0 - last.q1 + 2.0 * m as f64 * fs;
    Ok(LargeLEvaluation {
        config: cfg,
        m,
        f_star: fs,
        q1_final: last.q1,
        delta_wght,
        delta_mis: delta_wght * prog.l_pi / cfg.sections as f64,
        steps,
    })
}

/// Large-L evaluation (the χ² slack of `cfg` is ignored).
pub fn evaluate_large_l(cfg: &BoundConfig) -> Result<LargeLEvaluation> {
    large_l_on(&Progression::new(&BoundConfig { h: 0.0, ..*cfg })?)
}

/// Grid over threshold offset a, floor u and decay γ (as a fraction of C).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub a: (f64, f64, usize),
    pub u: (f64, f64, usize),
    pub gamma_frac: (f64, f64, usize),
    /// Number of sections pooled into at most this many groups while screening.
    pub screen_groups: usize,
    /// Local refinement rounds around the best screened point.
    pub refine_rounds: usize,
    /// Candidates re-evaluated exactly at the end.
    pub top: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            a: (0.0, 3.0, 20),
            u: (0.0, 1.0, 20),
            gamma_frac: (0.0, 1.0, 20),
            screen_groups: 512,
            refine_rounds: 3,
            top: 5,
        }
    }
}

impl GridSpec {
    /// Same ranges with `n` points per axis.
    pub fn with_points(n: usize) -> Self {
        let d = GridSpec::default();
        GridSpec { a: (d.a.0, d.a.1, n), u: (d.u.0, d.u.1, n), gamma_frac: (d.gamma_frac.0, d.gamma_frac.1, n), ..d }
    }

    fn axis((lo, hi, n): (f64, f64, usize)) -> Vec<f64> {
        match n {
            0 => vec![],
            1 => vec![lo],
            _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
        }
    }

    fn step((lo, hi, n): (f64, f64, usize)) -> f64 {
        if n > 1 {
            (hi - lo) / (n - 1) as f64
        } else {
            0.0
        }
    }
}

/// Outcome of a grid search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult<T> {
    pub best: T,
    pub score: f64,
    /// Points evaluated (screening and refinement).
    pub evaluated: usize,
    pub spec: GridSpec,
}

/// Allocation for grid point (u, γ/C).
fn allocation(u: f64, gamma_frac: f64, capacity: f64) -> AllocationKind {
    if u == 0.0 && gamma_frac == 1.0 {
        AllocationKind::Exponential
    } else {
        AllocationKind::Leveled { u, gamma: gamma_frac * capacity }
    }
}

type Point = (f64, f64, f64);

/// Minimise `objective` over (a, u, γ). `base` supplies snr, M, L and R.
/// `eval` receives a progression (coarsened while screening).
pub fn grid_search<T, E>(base: &BoundConfig, spec: &GridSpec, eval: E, score: impl Fn(&T) -> f64 + Sync) -> Result<SearchResult<T>>
where
    T: Send,
    E: Fn(&Progression) -> Result<T> + Sync,
{
    let capacity = base.channel()?.capacity();
    let build = |(a, u, g): Point, coarse: bool| -> Option<f64> {
        let cfg = BoundConfig { a, allocation: allocation(u, g, capacity), h: 0.0, ..*base };
        let prog = Progression::new(&cfg).ok()?;
        let prog = if coarse { prog.coarsened(spec.screen_groups) } else { prog };
        eval(&prog).ok().map(|t| score(&t)).filter(|v| v.is_finite())
    };
    let clamp = |v: f64, (lo, hi, _): (f64, f64, usize)| v.clamp(lo.min(hi), hi.max(lo));
    let mut points: Vec<Point> = Vec::new();
    for &a in &GridSpec::axis(spec.a) {
        for &u in &GridSpec::axis(spec.u) {
            for &g in &GridSpec::axis(spec.gamma_frac) {
                points.push((a, u, g));
            }
        }
    }
    let mut scored: Vec<(Point, f64)> =
        points.par_iter().filter_map(|&p| build(p, true).map(|v| (p, v))).collect();
    let mut evaluated = points.len();
    let mut steps = (GridSpec::step(spec.a), GridSpec::step(spec.u), GridSpec::step(spec.gamma_frac));
    for _ in 0..spec.refine_rounds {
        let Some(&(c, _)) = scored.iter().min_by(|x, y| x.1.total_cmp(&y.1)) else { break };
        steps = (steps.0 / 2.0, steps.1 / 2.0, steps.2 / 2.0);
        let mut local = Vec::new();
        for da in [-1.0, 0.0, 1.0] {
            for du in [-1.0, 0.0, 1.0] {
                for dg in [-1.0, 0.0, 1.0] {
                    let p = (
                        clamp(c.0 + da * steps.0, spec.a),
                        clamp(c.1 + du * steps.1, spec.u),
                        clamp(c.2 + dg * steps.2, spec.gamma_frac),
                    );
                    if !scored.iter().any(|(q, _)| *q == p) && !local.contains(&p) {
                        local.push(p);
                    }
                }
            }
        }
        evaluated += local.len();
        scored.extend(local.par_iter().filter_map(|&p| build(p, true).map(|v| (p, v))).collect::<Vec<_>>());
    }
    scored.sort_by(|x, y| x.1.total_cmp(&y.1));
    scored.truncate(spec.top.max(1));
    let finals: Vec<(T, f64)> = scored
        .par_iter()
        .filter_map(|&((a, u, g), _)| {
            let cfg = BoundConfig { a, allocation: allocation(u, g, capacity), h: 0.0, ..*base };
            let t = eval(&Progression::new(&cfg).ok()?).ok()?;
            let v = score(&t);
            v.is_finite().then_some((t, v))
        })
        .collect();
    let (best, v) = finals
        .into_iter()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .ok_or_else(|| Error::InfeasibleSchedule("no grid point admits a schedule".into()))?;
    Ok(SearchResult { best, score: v, evaluated, spec: *spec })
}

/// Grid search with the refined evaluation.
pub fn search_refined(base: &BoundConfig, spec: &GridSpec, p_target: f64, objective: Objective) -> Result<SearchResult<RefinedEvaluation>> {
    grid_search(base, spec, |p| refined_on(p, p_target), |e: &RefinedEvaluation| e.score(objective))
}

/// Grid search with the large-L evaluation.
pub fn search_large_l(base: &BoundConfig, spec: &GridSpec, objective: Objective) -> Result<SearchResult<LargeLEvaluation>> {
    grid_search(base, spec, large_l_on, |e: &LargeLEvaluation| e.score(objective))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_solution() {
        let r = solve_rho(1e-6, 1e6, 5.0).unwrap();
        assert!((1e6 * kl_bernoulli(r * 1e-6, 1e-6) - 5.0).abs() < 1e-6);
        assert_eq!(solve_rho(0.0, 1.0, 5.0), Some(1.0));
    }

    #[test]
    fn axis_points() {
        assert_eq!(GridSpec::axis((0.0, 1.0, 3)), vec![0.0, 0.5, 1.0]);
        assert_eq!(GridSpec::axis((2.0, 3.0, 1)), vec![2.0]);
    }
}
