use super::schedule::DecoderSchedule;
use super::stats::{combine_statistic, orthogonal_component, pace_select};
use super::{DecodeOutcome, StepRecord, StopReason};
use crate::codebook::{Design, PowerAllocation};
use crate::error::{Error, Result};
use crate::scalar::{norm, Real};

/// Step-by-step adaptive successive decoder.
///
/// Each step projects the dictionary on a new direction orthogonal to the
/// received vector and all previous fits, folds the result into the combined
/// statistic with the schedule's λ weights, and decodes the top candidates
/// above threshold up to the pacing target q_{1,k}.
pub struct AdaptiveDecoder<'s, T: Real, D: Design<T>> {
    design: D,
    schedule: &'s DecoderSchedule,
    weights: Vec<f64>,
    amplitude: Vec<T>,
    y: Vec<T>,
    tau: T,
    basis: Vec<Vec<T>>,
    basis_norms: Vec<f64>,
    z: Vec<T>,
    zcomb: Vec<T>,
    decided: Vec<bool>,
    fit: Vec<T>,
    fresh_fit: bool,
    k: usize,
    size: f64,
    decoded: usize,
    steps: Vec<StepRecord>,
    stop: Option<StopReason>,
}

impl<'s, T: Real, D: Design<T>> AdaptiveDecoder<'s, T, D> {
    pub fn new(design: D, y: &[T], schedule: &'s DecoderSchedule, allocation: &PowerAllocation) -> Result<Self> {
        let (n, cols, msize) = (design.rows(), design.columns(), design.section_size());
        if y.len() != n {
            return Err(Error::Dimension(format!("received length {} vs {n} rows", y.len())));
        }
        if allocation.sections() * msize != cols {
            return Err(Error::Dimension(format!(
                "{} sections of {msize} vs {cols} columns",
                allocation.sections()
            )));
        }
        if schedule.m() == 0 {
            return Err(Error::Domain("schedule has no steps".into()));
        }
        if !(norm(y) > 0.0) {
            return Err(Error::Degenerate("received vector is zero".into()));
        }
        Ok(AdaptiveDecoder {
            design,
            schedule,
            weights: allocation.weights().to_vec(),
            amplitude: allocation.powers().iter().map(|p| T::of(p.sqrt())).collect(),
            y: y.to_vec(),
            tau: T::of(schedule.threshold),
            basis: Vec::new(),
            basis_norms: Vec::new(),
            z: vec![T::zero(); cols],
            zcomb: vec![T::zero(); cols],
            decided: vec![false; cols],
            fit: vec![T::zero(); n],
            fresh_fit: false,
            k: 0,
            size: 0.0,
            decoded: 0,
            steps: Vec::new(),
            stop: None,
        })
    }

    /// Steps completed so far.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn stopped(&self) -> Option<StopReason> {
        self.stop
    }

    /// Latest per-step statistic Z_k (all columns).
    pub fn statistic(&self) -> &[T] {
        &self.z
    }

    /// Current combined statistic (meaningful on undecoded columns).
    pub fn combined(&self) -> &[T] {
        &self.zcomb
    }

    /// Unit directions G_k/‖G_k‖ used so far.
    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    /// ‖G_k‖ for each direction (‖Y‖ for the first).
    pub fn basis_norms(&self) -> &[f64] {
        &self.basis_norms
    }

    pub fn is_decoded(&self, j: usize) -> bool {
        self.decided[j]
    }

    pub fn records(&self) -> &[StepRecord] {
        &self.steps
    }

    /// Run one step; returns false once the decoder has stopped.
    pub fn step(&mut self) -> bool {
        if self.stop.is_some() {
            return false;
        }
        let k = self.k + 1;
        if k == 1 {
            let ny = norm(&self.y);
            let inv = T::of(1.0 / ny);
            let e: Vec<T> = self.y.iter().map(|&v| v * inv).collect();
            self.design.project(&e, &mut self.z);
            self.zcomb.copy_from_slice(&self.z);
            self.basis.push(e);
            self.basis_norms.push(ny);
        } else if self.fresh_fit {
            let Some((g, len)) = orthogonal_component(&self.basis, &self.fit) else {
                self.stop = Some(StopReason::Degenerate);
                return false;
            };
            let inv = T::of(1.0 / len);
            let e: Vec<T> = g.iter().map(|&v| v * inv).collect();
            self.design.project(&e, &mut self.z);
            let decided = &self.decided;
            combine_statistic(&mut self.zcomb, &self.z, self.schedule.steps[k - 1].lambda, |j| !decided[j]);
            self.basis.push(e);
            self.basis_norms.push(len);
        }
        // else: the previous step decoded nothing, so there is no new direction;
        // the combined statistic carries over and only the pacing target moves.
        self.k = k;

        let tau = self.tau;
        let candidates: Vec<usize> =
            (0..self.zcomb.len()).filter(|&j| !self.decided[j] && self.zcomb[j] >= tau).collect();
        let msize = self.design.section_size();
        let weights = &self.weights;
        let (selected, size) = pace_select(
            &candidates,
            &self.zcomb,
            |j| weights[j / msize],
            self.schedule.steps[k - 1].q1,
            self.size,
        );

        self.fit.iter_mut().for_each(|v| *v = T::zero());
        for &j in &selected {
            self.decided[j] = true;
            self.design.accumulate(j, self.amplitude[j / msize], &mut self.fit);
        }
        self.fresh_fit = !selected.is_empty();
        self.size = size;
        self.decoded += selected.len();
        let n_candidates = candidates.len();
        self.steps.push(StepRecord { k, selected, candidates: n_candidates, size });

        if n_candidates == 0 {
            self.stop = Some(StopReason::NoCandidates);
        } else if self.decoded >= self.weights.len() {
            self.stop = Some(StopReason::AllDecoded);
        } else if k >= self.schedule.m() {
            self.stop = Some(StopReason::StepLimit);
        }
        true
    }

    /// Run to completion.
    pub fn finish(mut self) -> DecodeOutcome {
        while self.step() {}
        DecodeOutcome {
            sections: self.weights.len(),
            section_size: self.design.section_size(),
            steps: self.steps,
            stop: self.stop.expect("decoder stopped"),
        }
    }
}

/// Decode `y` with the adaptive successive decoder.
pub fn adaptive_decode<T: Real, D: Design<T>>(
    design: D,
    y: &[T],
    schedule: &DecoderSchedule,
    allocation: &PowerAllocation,
) -> Result<DecodeOutcome> {
    Ok(AdaptiveDecoder::new(design, y, schedule, allocation)?.finish())
}
