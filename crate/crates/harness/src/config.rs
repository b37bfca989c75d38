use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use superpose::analysis::{BoundConfig, GridSpec};
use superpose::{derive_channel, AllocationKind, ChannelParams};

use crate::error::{HarnessError, Result};

/// Code rate, absolute or relative to capacity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateSpec {
    Nats(f64),
    Bits(f64),
    FractionOfCapacity(f64),
}

impl RateSpec {
    pub fn nats(&self, channel: &ChannelParams) -> f64 {
        match *self {
            RateSpec::Nats(r) => r,
            RateSpec::Bits(r) => r * std::f64::consts::LN_2,
            RateSpec::FractionOfCapacity(f) => f * channel.capacity(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMode {
    /// Closed-form recipe for a.
    Auto,
    /// Grid search over (a, u, γ); replaces the configured allocation.
    Search,
}

/// Threshold offset a, or how to choose it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThresholdSpec {
    Offset(f64),
    Mode(ThresholdMode),
}

impl std::str::FromStr for ThresholdSpec {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auto" => Ok(ThresholdSpec::Mode(ThresholdMode::Auto)),
            "search" => Ok(ThresholdSpec::Mode(ThresholdMode::Search)),
            v => v.parse().map(ThresholdSpec::Offset).map_err(|_| format!("expected a number, 'auto' or 'search', got {v}")),
        }
    }
}

/// Which analysis supplies the decoder schedule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleMode {
    /// Expected-value progression: η = 0, f = f*, no pacing loss.
    LargeL,
    /// Per-step divergence slack sized for the target error probability.
    Refined,
    /// Constant slack η and f = ρ f* under the accumulation gap.
    Theorem,
    /// Expected-value progression with a per-step slack of `slack_z`
    /// binomial standard deviations at the effective section count 1/max π,
    /// so that pacing binds at moderate L.
    Finite,
    /// One section's worth of pacing per step for L steps, no false-alarm
    /// allowance: plain successive decoding for codes too short for the
    /// analysis-driven schedules. A grid-search threshold falls back to `auto`.
    Uniform,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum DictionaryKind {
    /// Materialised n × N matrix.
    Dense,
    /// Sampled on demand; same law, O(N) work per step.
    Implicit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    F64,
    F32,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputPaths {
    pub trials_csv: Option<PathBuf>,
    pub schedule_csv: Option<PathBuf>,
    pub envelope_csv: Option<PathBuf>,
    pub trace_csv: Option<PathBuf>,
    pub summary_json: Option<PathBuf>,
}

/// Everything an experiment needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub snr: f64,
    /// M.
    #[serde(alias = "M")]
    pub section_size: usize,
    /// L.
    #[serde(alias = "L")]
    pub sections: usize,
    pub rate: RateSpec,
    pub allocation: AllocationKind,
    pub threshold: ThresholdSpec,
    /// Constant slack for the theorem schedule (default: chosen to minimise p_e).
    pub eta: Option<f64>,
    /// False-alarm factor ρ for the theorem schedule (default: largest admissible).
    pub rho: Option<f64>,
    /// χ² slack for the theorem schedule.
    pub h: Option<f64>,
    /// Slack of the finite-L schedule, in standard deviations.
    pub slack_z: f64,
    /// Target block error probability for the refined schedule.
    pub p_target: f64,
    pub schedule: ScheduleMode,
    pub trials: usize,
    pub seed: u64,
    /// Points per axis of the (a, u, γ) grid.
    pub grid_points: usize,
    /// Section mistake-rate target for envelopes and exceedance counts.
    pub mistake_target: f64,
    /// Outer-code redundancy δ (default: the mistake target).
    pub outer_delta: Option<f64>,
    pub dictionary: DictionaryKind,
    pub precision: Precision,
    /// Transmit Xβ without noise (a decoder sanity check).
    pub noiseless: bool,
    pub output: OutputPaths,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            snr: 7.0,
            section_size: 512,
            sections: 100,
            rate: RateSpec::FractionOfCapacity(0.5),
            allocation: AllocationKind::Exponential,
            threshold: ThresholdSpec::Mode(ThresholdMode::Search),
            eta: None,
            rho: None,
            h: None,
            slack_z: 1.0,
            p_target: 1e-3,
            schedule: ScheduleMode::LargeL,
            trials: 100,
            seed: 1,
            grid_points: 20,
            mistake_target: 0.1,
            outer_delta: None,
            dictionary: DictionaryKind::Implicit,
            precision: Precision::F64,
            noiseless: false,
            output: OutputPaths::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn channel(&self) -> Result<ChannelParams> {
        derive_channel(self.snr).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn rate_nats(&self) -> Result<f64> {
        Ok(self.rate.nats(&self.channel()?))
    }

    pub fn grid(&self) -> GridSpec {
        GridSpec::with_points(self.grid_points)
    }

    /// Analysis configuration with threshold offset `a`.
    pub fn bound_config(&self, a: f64, allocation: AllocationKind) -> Result<BoundConfig> {
        Ok(BoundConfig {
            snr: self.snr,
            section_size: self.section_size,
            sections: self.sections,
            rate: self.rate_nats()?,
            a,
            allocation,
            h: 0.0,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if !(self.snr > 0.0 && self.snr.is_finite()) {
            return bad(format!("snr must be positive, got {}", self.snr));
        }
        if !self.section_size.is_power_of_two() || self.section_size < 2 {
            return bad(format!("M must be a power of two ≥ 2, got {}", self.section_size));
        }
        if self.sections == 0 {
            return bad("L must be at least 1".into());
        }
        if self.trials == 0 {
            return bad("trial count must be at least 1".into());
        }
        let r = self.rate_nats()?;
        if !(r > 0.0 && r.is_finite()) {
            return bad(format!("rate must be positive, got {r} nats"));
        }
        if !(self.p_target > 0.0 && self.p_target < 1.0) {
            return bad(format!("p_target must lie in (0,1), got {}", self.p_target));
        }
        if !(self.mistake_target > 0.0 && self.mistake_target < 1.0) {
            return bad(format!("mistake target must lie in (0,1), got {}", self.mistake_target));
        }
        if let Some(d) = self.outer_delta {
            if !(0.0..1.0).contains(&d) {
                return bad(format!("outer δ must lie in [0,1), got {d}"));
            }
        }
        if !(self.slack_z >= 0.0 && self.slack_z.is_finite()) {
            return bad(format!("slack must be a finite number of standard deviations ≥ 0, got {}", self.slack_z));
        }
        if let Some(h) = self.h {
            if !(0.0..1.0).contains(&h) {
                return bad(format!("h must lie in [0,1), got {h}"));
            }
        }
        if self.eta.is_some_and(|e| !(e >= 0.0)) || self.rho.is_some_and(|r| !(r >= 1.0)) {
            return bad("η must be ≥ 0 and ρ ≥ 1".into());
        }
        if self.grid_points == 0 && self.threshold == ThresholdSpec::Mode(ThresholdMode::Search) {
            return bad("grid search needs at least one point per axis".into());
        }
        if let AllocationKind::Leveled { u, gamma } = self.allocation {
            let c = self.channel()?.capacity();
            if !(u >= 0.0 && (0.0..=c * (1.0 + 1e-12)).contains(&gamma)) {
                return bad(format!("leveled allocation needs u ≥ 0 and 0 ≤ γ ≤ C, got u = {u}, γ = {gamma}"));
            }
        }
        Ok(())
    }

    /// Overlay the keys of a JSON config file on this configuration.
    pub fn overlay_file(&self, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
        self.overlay_json(&text)
    }

    pub fn overlay_json(&self, text: &str) -> Result<Self> {
        let file: serde_json::Value = serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        let serde_json::Value::Object(file) = file else {
            return Err(HarnessError::Config("config file must hold a JSON object".into()));
        };
        let mut base = serde_json::to_value(self).map_err(|e| HarnessError::Config(e.to_string()))?;
        let obj = base.as_object_mut().expect("config serialises to an object");
        for (k, v) in file {
            let key = match k.as_str() {
                "M" => "section_size".to_string(),
                "L" => "sections".to_string(),
                _ => k,
            };
            match (obj.get_mut(&key), v) {
                (Some(serde_json::Value::Object(inner)), serde_json::Value::Object(over)) if key == "output" => {
                    inner.extend(over);
                }
                (_, v) => {
                    obj.insert(key, v);
                }
            }
        }
        serde_json::from_value(base).map_err(|e| HarnessError::Config(e.to_string()))
    }
}
