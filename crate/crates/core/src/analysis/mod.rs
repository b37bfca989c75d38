//! Reliability analysis: the success-rate function g_L and its integral and
//! closed-form lower approximations, schedule construction, the three-term
//! error-probability bound, parameter selection and the weighted Bernoulli
//! tail machinery it rests on.
//!
//! Everything here is plain `f64`; the quantities are scalars or short series.

mod bounds;
mod integral;
mod params;
mod progression;
pub mod quadrature;
mod schedule;
mod search;

pub use bounds::{
    bernoulli_tail, check_accumulative, delta_mis_bound, entropy_chain, f_star, theorem1_bound,
    AccumulativeCheck, EntropyChain, FalseAlarmRate, TailBound, Theorem1Terms,
};
pub use integral::{gap_and_xr, IntegralModel, RateSlack};
pub use params::{proposition1_report, select_parameters, RateBoundReport, SelectedParameters};
pub use progression::{shift_terms, BoundConfig, Progression, ShiftTerm, ThresholdParams};
pub use schedule::{
    build_schedule, paced_progression, schedule_from_paced, PacedRule, PacedStep, Slack,
};
pub use search::{
    evaluate_large_l, evaluate_refined, expected_on, grid_search, large_l_on, search_large_l, search_refined, GridSpec,
    LargeLEvaluation, Objective, RefinedEvaluation, SearchResult,
};
