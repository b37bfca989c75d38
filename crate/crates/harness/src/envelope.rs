use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, RateSpec, ScheduleMode, ThresholdMode, ThresholdSpec};
use crate::design::{prepare, PreparedDesign};
use crate::error::{HarnessError, Result};
use crate::montecarlo::run_trials;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeMode {
    /// Refined bound at the target error probability.
    Bounds,
    /// Expected-value progression (no finite-L slack).
    LargeL,
    /// Monte Carlo with the finite-L schedule: at most 10 exceedances in the
    /// trial budget.
    Simulation,
}

/// Largest rate whose mistake rate meets the target at one section size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePoint {
    pub section_size: usize,
    pub sections: usize,
    pub rate_nats: f64,
    pub rate_bits: f64,
    pub ratio_to_capacity: f64,
    pub mode: EnvelopeMode,
    /// Feasibility checks performed.
    pub evaluations: usize,
    /// Bracket searched, in nats.
    pub bracket: (f64, f64),
    /// False when the bracket's lower end already misses the target; the
    /// rate is then recorded as 0.
    pub lower_feasible: bool,
}

/// Exceedances allowed in simulation mode.
pub const SIMULATION_FAILURES: usize = 10;

/// Finite-L slacks (standard deviations) tried in simulation mode, in order;
/// the first that meets the target decides.
pub const SLACK_GRID: [f64; 4] = [1.0, 0.75, 0.5, 1.25];

/// Whether the configuration meets the mistake target. The threshold and
/// allocation are grid-searched unless an offset is given; simulation mode
/// also tries each slack of [`SLACK_GRID`].
pub fn feasible(cfg: &ExperimentConfig, mode: EnvelopeMode) -> Result<bool> {
    let cfg = ExperimentConfig {
        threshold: match cfg.threshold {
            ThresholdSpec::Offset(a) => ThresholdSpec::Offset(a),
            _ => ThresholdSpec::Mode(ThresholdMode::Search),
        },
        schedule: match mode {
            EnvelopeMode::Bounds => ScheduleMode::Refined,
            EnvelopeMode::LargeL => ScheduleMode::LargeL,
            EnvelopeMode::Simulation => ScheduleMode::Finite,
        },
        ..cfg.clone()
    };
    match mode {
        EnvelopeMode::Bounds | EnvelopeMode::LargeL => {
            let Some(design) = prepare_or_infeasible(&cfg)? else { return Ok(false) };
            let e = match mode {
                EnvelopeMode::Bounds => design.refined.map(|e| e.delta_mis),
                _ => design.large_l.map(|e| e.delta_mis),
            };
            Ok(e.is_some_and(|d| d <= cfg.mistake_target))
        }
        EnvelopeMode::Simulation => {
            for z in SLACK_GRID {
                let c = ExperimentConfig { slack_z: z, ..cfg.clone() };
                let Some(design) = prepare_or_infeasible(&c)? else { continue };
                if run_trials(&c, &design, Some(SIMULATION_FAILURES + 1))?.summary.exceedances <= SIMULATION_FAILURES {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

fn prepare_or_infeasible(cfg: &ExperimentConfig) -> Result<Option<PreparedDesign>> {
    match prepare(cfg) {
        Ok(d) => Ok(Some(d)),
        Err(HarnessError::Infeasible(_))
        | Err(HarnessError::Core(superpose::Error::InfeasibleRate(_) | superpose::Error::InfeasibleSchedule(_))) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Bisect for the largest feasible rate in `[lo, hi]` (nats) to `resolution`,
/// assuming feasibility is monotone in the rate. Both ends are checked first
/// (a zero lower end counts as feasible).
pub fn envelope_rate(cfg: &ExperimentConfig, mode: EnvelopeMode, bracket: (f64, f64), resolution: f64) -> Result<EnvelopePoint> {
    let capacity = cfg.channel()?.capacity();
    let (mut lo, mut hi) = bracket;
    let mut evaluations = 0;
    let mut check = |r: f64| {
        evaluations += 1;
        feasible(&ExperimentConfig { rate: RateSpec::Nats(r), ..cfg.clone() }, mode)
    };
    let lower_feasible = lo <= 0.0 || check(lo)?;
    if !lower_feasible {
        hi = lo;
    } else if hi < capacity && check(hi)? {
        lo = hi;
    }
    while lower_feasible && hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        if check(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rate = if lower_feasible { lo.max(0.0) } else { 0.0 };
    Ok(EnvelopePoint {
        section_size: cfg.section_size,
        sections: cfg.sections,
        rate_nats: rate,
        rate_bits: rate / std::f64::consts::LN_2,
        ratio_to_capacity: rate / capacity,
        mode,
        evaluations,
        bracket,
        lower_feasible,
    })
}

/// Envelope over section sizes; `sections: None` uses L = M.
pub fn envelope(
    cfg: &ExperimentConfig,
    mode: EnvelopeMode,
    section_sizes: &[usize],
    sections: Option<usize>,
    resolution: f64,
) -> Result<Vec<EnvelopePoint>> {
    let capacity = cfg.channel()?.capacity();
    section_sizes
        .iter()
        .map(|&m| {
            let c = ExperimentConfig { section_size: m, sections: sections.unwrap_or(m), ..cfg.clone() };
            envelope_rate(&c, mode, (0.0, capacity), resolution)
        })
        .collect()
}

/// Envelope CSV: `M,rate_nats,rate_bits,ratio_to_capacity,mode`.
pub fn write_envelope_csv<W: Write>(w: W, points: &[EnvelopePoint]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["M", "rate_nats", "rate_bits", "ratio_to_capacity", "mode"])?;
    for p in points {
        let mode = serde_json::to_value(p.mode)?;
        out.write_record([
            p.section_size.to_string(),
            p.rate_nats.to_string(),
            p.rate_bits.to_string(),
            p.ratio_to_capacity.to_string(),
            mode.as_str().unwrap_or_default().to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
