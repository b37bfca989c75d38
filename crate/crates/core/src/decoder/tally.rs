use serde::{Deserialize, Serialize};

use super::DecodeOutcome;
use crate::codebook::CoefficientVector;

/// What the inner decoder says about one section.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SectionDecision {
    /// Exactly one term decoded; its within-section index.
    Single(usize),
    /// No term decoded.
    None,
    /// Two or more terms decoded.
    Multiple,
}

/// Classification of a section against the truth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectionStatus {
    Correct,
    Error,
    ErasureMultiple,
    ErasureNone,
}

/// Section-mistake and weighted-detection tallies of one decode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tally {
    pub status: Vec<SectionStatus>,
    pub errors: usize,
    pub erasures: usize,
    /// δ̂_mis,error: fraction of sections decoded to one wrong term.
    pub delta_err: f64,
    /// δ̂_mis,erase: fraction of sections with zero or several terms.
    pub delta_erase: f64,
    /// δ̂_mis = 2δ̂_err + δ̂_erase.
    pub delta_mis: f64,
    /// q̂_k: weight of correct terms decoded at step k.
    pub q_hat: Vec<f64>,
    /// f̂_k: weight of false alarms decoded at step k.
    pub f_hat: Vec<f64>,
    /// δ̂_wght = (1 − Σ q̂_k) + Σ f̂_k.
    pub delta_wght: f64,
}

pub fn section_decisions(outcome: &DecodeOutcome) -> Vec<SectionDecision> {
    let mut d = vec![SectionDecision::None; outcome.sections];
    for j in outcome.decoded() {
        let l = j / outcome.section_size;
        d[l] = match d[l] {
            SectionDecision::None => SectionDecision::Single(j % outcome.section_size),
            _ => SectionDecision::Multiple,
        };
    }
    d
}

/// Compare decoded sets with the sent coefficient vector.
///
/// `weights` are the section weights π_(ℓ).
pub fn tally_mistakes(outcome: &DecodeOutcome, sent: &CoefficientVector, weights: &[f64]) -> Tally {
    let msize = outcome.section_size;
    let mut q_hat = Vec::with_capacity(outcome.steps.len());
    let mut f_hat = Vec::with_capacity(outcome.steps.len());
    for step in &outcome.steps {
        let (mut q, mut f) = (0.0, 0.0);
        for &j in &step.selected {
            let l = j / msize;
            if sent.column(l) == j {
                q += weights[l];
            } else {
                f += weights[l];
            }
        }
        q_hat.push(q);
        f_hat.push(f);
    }
    let status: Vec<SectionStatus> = section_decisions(outcome)
        .iter()
        .enumerate()
        .map(|(l, d)| match *d {
            SectionDecision::Single(i) if i == sent.indices()[l] => SectionStatus::Correct,
            SectionDecision::Single(_) => SectionStatus::Error,
            SectionDecision::None => SectionStatus::ErasureNone,
            SectionDecision::Multiple => SectionStatus::ErasureMultiple,
        })
        .collect();
    let errors = status.iter().filter(|s| **s == SectionStatus::Error).count();
    let erasures = status
        .iter()
        .filter(|s| matches!(s, SectionStatus::ErasureNone | SectionStatus::ErasureMultiple))
        .count();
    let l = outcome.sections as f64;
    let delta_err = errors as f64 / l;
    let delta_erase = erasures as f64 / l;
    let delta_wght = (1.0 - q_hat.iter().sum::<f64>()) + f_hat.iter().sum::<f64>();
    Tally {
        status,
        errors,
        erasures,
        delta_err,
        delta_erase,
        delta_mis: 2.0 * delta_err + delta_erase,
        q_hat,
        f_hat,
        delta_wght,
    }
}
