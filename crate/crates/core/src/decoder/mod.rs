//! Adaptive successive decoding with combined statistics and pacing, the
//! residual-based reference decoder, and section-mistake tallies.

mod adaptive;
mod residual;
mod schedule;
mod stats;
mod tally;
mod trace;

pub use crate::codebook::Design;
pub use adaptive::{adaptive_decode, AdaptiveDecoder};
pub use residual::residual_decode;
pub use schedule::{DecoderSchedule, ScheduleStep};
pub use stats::{combine_statistic, first_step_statistics, orthogonal_component, pace_select};
pub use tally::{section_decisions, tally_mistakes, SectionDecision, SectionStatus, Tally};
pub use trace::write_trace;

use serde::{Deserialize, Serialize};

/// Why a decode stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// At least L terms have been decoded.
    AllDecoded,
    /// No remaining column crossed the threshold.
    NoCandidates,
    /// The schedule's last step was run.
    StepLimit,
    /// The new orthogonal direction vanished (‖G_k‖ ≤ 1e−10·√n).
    Degenerate,
}

/// One decoding step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// Step number, 1-based.
    pub k: usize,
    /// Columns decoded at this step, in selection order.
    pub selected: Vec<usize>,
    /// Number of columns above threshold before pacing.
    pub candidates: usize,
    /// size_{1,k}: total weight decoded through this step.
    pub size: f64,
}

/// Decoded sets of a finished decode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecodeOutcome {
    pub sections: usize,
    pub section_size: usize,
    pub steps: Vec<StepRecord>,
    pub stop: StopReason,
}

impl DecodeOutcome {
    /// All decoded columns, step by step.
    pub fn decoded(&self) -> impl Iterator<Item = usize> + '_ {
        self.steps.iter().flat_map(|s| s.selected.iter().copied())
    }

    pub fn steps_used(&self) -> usize {
        self.steps.len()
    }

    /// Per-section decision (erasure when zero or several terms were decoded).
    pub fn decisions(&self) -> Vec<SectionDecision> {
        section_decisions(self)
    }
}
