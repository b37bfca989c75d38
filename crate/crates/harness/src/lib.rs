//! Experiments on sparse superposition codes: bound evaluation, Monte Carlo
//! simulation and rate envelopes, driven by [`ExperimentConfig`].
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod config;
pub mod demo;
pub mod design;
pub mod envelope;
pub mod error;
pub mod montecarlo;

pub use bounds::{evaluate_bounds, write_schedule_csv, BoundsReport};
pub use config::{DictionaryKind, ExperimentConfig, OutputPaths, Precision, RateSpec, ScheduleMode, ThresholdMode, ThresholdSpec};
pub use demo::{demo, Demo};
pub use design::{prepare, PreparedDesign, TheoremReport};
pub use envelope::{envelope, envelope_rate, feasible, write_envelope_csv, EnvelopeMode, EnvelopePoint};
pub use error::{HarnessError, Result};
pub use montecarlo::{run_trials, simulate, write_trials_csv, Simulation, SimulationSummary, TrialRecord};
