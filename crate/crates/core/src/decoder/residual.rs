use super::{DecodeOutcome, StepRecord, StopReason};
use crate::codebook::{Dictionary, PowerAllocation};
use crate::error::{Error, Result};
use crate::scalar::{dot_native, norm, Real};

/// Residual-based reference decoder: at each step threshold XᵀR_k/‖R_k‖ at τ
/// and accept everything above it, with R_k = Y − (F₁ + … + F_{k−1}).
pub fn residual_decode<T: Real>(
    dict: &Dictionary<T>,
    y: &[T],
    threshold: f64,
    max_steps: usize,
    allocation: &PowerAllocation,
) -> Result<DecodeOutcome> {
    let n = dict.rows();
    if y.len() != n {
        return Err(Error::Dimension(format!("received length {} vs {n} rows", y.len())));
    }
    if allocation.sections() != dict.sections() {
        return Err(Error::Dimension("allocation and dictionary disagree on L".into()));
    }
    if max_steps == 0 {
        return Err(Error::Domain("at least one step is required".into()));
    }
    if !(norm(y) > 0.0) {
        return Err(Error::Degenerate("received vector is zero".into()));
    }
    let msize = dict.section_size();
    let amplitude: Vec<T> = allocation.powers().iter().map(|p| T::of(p.sqrt())).collect();
    let weights = allocation.weights();
    let tau = T::of(threshold);
    let mut residual = y.to_vec();
    let mut decided = vec![false; dict.columns()];
    let mut steps = Vec::new();
    let mut size = 0.0;
    let mut decoded = 0;
    let mut stop = StopReason::StepLimit;
    for k in 1..=max_steps {
        let len = norm(&residual);
        if len <= 1e-10 * (n as f64).sqrt() {
            stop = StopReason::Degenerate;
            break;
        }
        let inv = T::of(1.0 / len);
        let mut selected: Vec<(usize, T)> = (0..dict.columns())
            .filter(|&j| !decided[j])
            .map(|j| (j, dot_native(dict.column(j), &residual) * inv))
            .filter(|&(_, z)| z >= tau)
            .collect();
        selected.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        let selected: Vec<usize> = selected.into_iter().map(|(j, _)| j).collect();
        for &j in &selected {
            decided[j] = true;
            size += weights[j / msize];
            let a = amplitude[j / msize];
            for (r, &x) in residual.iter_mut().zip(dict.column(j)) {
                *r -= a * x;
            }
        }
        decoded += selected.len();
        let count = selected.len();
        steps.push(StepRecord { k, selected, candidates: count, size });
        if count == 0 {
            stop = StopReason::NoCandidates;
            break;
        }
        if decoded >= allocation.sections() {
            stop = StopReason::AllDecoded;
            break;
        }
    }
    Ok(DecodeOutcome { sections: allocation.sections(), section_size: msize, steps, stop })
}
