use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use superpose::codebook::transmit_with_noise;
use superpose::decoder::tally_mistakes;
use superpose::outer_rs::{composite_rate, CompositeCode};
use superpose::seed::{substream, trial_seed, Stream};
use superpose::{
    adaptive_decode, encode, CodeParams, CoefficientVector, Design, Dictionary, ImplicitDictionary,
    PowerAllocation, Real,
};

use crate::config::{DictionaryKind, ExperimentConfig, Precision};
use crate::design::{prepare, PreparedDesign};
use crate::error::Result;

/// Trials are dispatched in fixed chunks so that early stopping is
/// independent of the thread count.
const CHUNK: usize = 64;

/// One simulated codeword.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub delta_mis: f64,
    pub delta_err: f64,
    pub delta_erase: f64,
    pub delta_wght: f64,
    pub steps: usize,
    /// Weight of correct terms decoded per step.
    pub q_hat: Vec<f64>,
    /// Weight of false alarms decoded per step.
    pub f_hat: Vec<f64>,
    /// Whether the outer code returned the sent message (when one is used).
    pub composite_ok: Option<bool>,
}

/// Outer Reed-Solomon layer of a simulation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompositeSummary {
    /// Message sections k of the (L, k) code.
    pub k: usize,
    /// (L − k)/L.
    pub delta: f64,
    /// (k/L)·R in nats.
    pub rate: f64,
    pub failures: usize,
    /// Failures in trials with 2·errors + erasures ≤ L − k; must be zero.
    pub failures_within_capability: usize,
}

/// Every field is recomputable from the trials CSV and the configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub trials: usize,
    pub block_length: usize,
    pub rate_nats: f64,
    pub a: f64,
    pub schedule_steps: usize,
    pub mean_delta_mis: f64,
    pub mean_steps: f64,
    pub max_delta_mis: f64,
    /// Trials with δ̂_mis above the mistake target.
    pub exceedances: usize,
    pub exceedance_rate: f64,
    pub exceedance_se: f64,
    /// 95% Wilson interval for the exceedance probability.
    pub exceedance_ci: (f64, f64),
    pub stopped_early: bool,
    pub composite: Option<CompositeSummary>,
}

#[derive(Clone, Debug)]
pub struct Simulation {
    pub records: Vec<TrialRecord>,
    pub summary: SimulationSummary,
}

fn wilson(k: usize, n: usize) -> (f64, f64) {
    let (k, n, z) = (k as f64, n as f64, 1.959963984540054);
    let p = k / n;
    let centre = (p + z * z / (2.0 * n)) / (1.0 + z * z / n);
    let half = z / (1.0 + z * z / n) * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

struct Setup<'a> {
    cfg: &'a ExperimentConfig,
    design: &'a PreparedDesign,
    code: CodeParams,
    allocation: PowerAllocation,
    outer: Option<CompositeCode>,
}

fn message_bits(n: usize, seed: u64) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random()).collect()
}

impl Setup<'_> {
    fn trial<T: Real, D: Design<T>>(&self, trial: usize, seed: u64, mut dict: D) -> Result<TrialRecord> {
        let msg = substream(seed, Stream::Message);
        let (beta, bits) = match &self.outer {
            Some(outer) => {
                let bits = message_bits(outer.message_bits(), msg);
                let idx = outer.encode(&bits)?;
                (CoefficientVector::new(idx, self.code.section_size, &self.allocation)?, Some(bits))
            }
            None => (encode(&message_bits(self.code.message_bits(), msg), &self.code, &self.allocation)?, None),
        };
        let sigma = if self.cfg.noiseless { 0.0 } else { self.cfg.channel()?.noise_variance().sqrt() };
        let y: Vec<T> = transmit_with_noise(&mut dict, &beta, sigma, substream(seed, Stream::Noise));
        let outcome = adaptive_decode(&mut dict, &y, &self.design.schedule, &self.allocation)?;
        let tally = tally_mistakes(&outcome, &beta, self.allocation.weights());
        let composite_ok = match (&self.outer, bits) {
            (Some(outer), Some(bits)) => Some(outer.decode(&outcome.decisions()).is_ok_and(|b| b == bits)),
            _ => None,
        };
        Ok(TrialRecord {
            trial,
            seed,
            delta_mis: tally.delta_mis,
            delta_err: tally.delta_err,
            delta_erase: tally.delta_erase,
            delta_wght: tally.delta_wght,
            steps: outcome.steps_used(),
            q_hat: tally.q_hat,
            f_hat: tally.f_hat,
            composite_ok,
        })
    }

    fn run_one<T: Real>(&self, trial: usize) -> Result<TrialRecord> {
        let seed = trial_seed(self.cfg.seed, trial as u64);
        let ds = substream(seed, Stream::Dictionary);
        let (n, l, m) = (self.code.block_length, self.code.sections, self.code.section_size);
        match self.cfg.dictionary {
            DictionaryKind::Implicit => self.trial::<T, _>(trial, seed, ImplicitDictionary::<T>::new(n, l, m, ds)),
            DictionaryKind::Dense => {
                let d = Dictionary::<T>::generate(&self.code, ds)?;
                self.trial::<T, _>(trial, seed, &d)
            }
        }
    }
}

/// Outer code used by a simulation: one RS symbol per section, whenever the
/// field GF(M) is large enough for L symbols.
pub fn outer_code(cfg: &ExperimentConfig) -> Result<Option<CompositeCode>> {
    let b = cfg.section_size.trailing_zeros();
    if b < 2 || cfg.sections > cfg.section_size - 1 {
        return Ok(None);
    }
    let delta = cfg.outer_delta.unwrap_or(cfg.mistake_target);
    let k = composite_rate(cfg.rate_nats()?, delta, cfg.sections)?.k;
    Ok(Some(CompositeCode::new(cfg.sections, cfg.section_size, k)?))
}

/// Run `cfg.trials` trials against a prepared design, stopping once
/// `stop_after` exceedances have been seen (checked between chunks).
pub fn run_trials(cfg: &ExperimentConfig, design: &PreparedDesign, stop_after: Option<usize>) -> Result<Simulation> {
    cfg.validate()?;
    let rate = cfg.rate_nats()?;
    let setup = Setup {
        cfg,
        design,
        code: CodeParams::new(cfg.sections, cfg.section_size, rate)?,
        allocation: PowerAllocation::new(design.bound.allocation, &cfg.channel()?, cfg.sections)?,
        outer: outer_code(cfg)?,
    };
    let mut records = Vec::with_capacity(cfg.trials);
    let mut exceed = 0;
    let mut stopped_early = false;
    for start in (0..cfg.trials).step_by(CHUNK) {
        let end = (start + CHUNK).min(cfg.trials);
        let chunk: Vec<TrialRecord> = (start..end)
            .into_par_iter()
            .map(|t| match cfg.precision {
                Precision::F64 => setup.run_one::<f64>(t),
                Precision::F32 => setup.run_one::<f32>(t),
            })
            .collect::<Result<_>>()?;
        exceed += chunk.iter().filter(|r| r.delta_mis > cfg.mistake_target).count();
        records.extend(chunk);
        if stop_after.is_some_and(|s| exceed >= s) && end < cfg.trials {
            stopped_early = true;
            break;
        }
    }
    let summary = summarise(&setup, &records, stopped_early);
    Ok(Simulation { records, summary })
}

/// Prepare the design and simulate.
pub fn simulate(cfg: &ExperimentConfig) -> Result<(PreparedDesign, Simulation)> {
    let design = prepare(cfg)?;
    let sim = run_trials(cfg, &design, None)?;
    Ok((design, sim))
}

fn summarise(setup: &Setup, records: &[TrialRecord], stopped_early: bool) -> SimulationSummary {
    let cfg = setup.cfg;
    let n = records.len();
    let mean = |f: &dyn Fn(&TrialRecord) -> f64| records.iter().map(f).sum::<f64>() / n as f64;
    let exceedances = records.iter().filter(|r| r.delta_mis > cfg.mistake_target).count();
    let p = exceedances as f64 / n as f64;
    let composite = setup.outer.as_ref().map(|outer| {
        let (l, k) = (cfg.sections, outer.rs.k());
        let failed = |r: &&TrialRecord| r.composite_ok == Some(false);
        let capable = |r: &&TrialRecord| (r.delta_mis * l as f64).round() as usize <= l - k;
        CompositeSummary {
            k,
            delta: (l - k) as f64 / l as f64,
            rate: k as f64 / l as f64 * setup.code.rate(),
            failures: records.iter().filter(failed).count(),
            failures_within_capability: records.iter().filter(failed).filter(capable).count(),
        }
    });
    SimulationSummary {
        trials: n,
        block_length: setup.code.block_length,
        rate_nats: setup.code.rate(),
        a: setup.design.bound.a,
        schedule_steps: setup.design.schedule.m(),
        mean_delta_mis: mean(&|r| r.delta_mis),
        mean_steps: mean(&|r| r.steps as f64),
        max_delta_mis: records.iter().map(|r| r.delta_mis).fold(0.0, f64::max),
        exceedances,
        exceedance_rate: p,
        exceedance_se: (p * (1.0 - p) / n as f64).sqrt(),
        exceedance_ci: wilson(exceedances, n),
        stopped_early,
        composite,
    }
}

/// Trials CSV: `trial,seed,delta_mis,delta_err,delta_erase,steps,composite_ok`.
pub fn write_trials_csv<W: Write>(w: W, records: &[TrialRecord]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["trial", "seed", "delta_mis", "delta_err", "delta_erase", "steps", "composite_ok"])?;
    for r in records {
        out.write_record([
            r.trial.to_string(),
            r.seed.to_string(),
            r.delta_mis.to_string(),
            r.delta_err.to_string(),
            r.delta_erase.to_string(),
            r.steps.to_string(),
            r.composite_ok.map_or(String::new(), |b| b.to_string()),
        ])?;
    }
    out.flush()?;
    Ok(())
}
