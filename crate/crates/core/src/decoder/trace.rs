use std::io::Write;

use super::{DecodeOutcome, Tally};

/// Per-step trace as CSV: `step,size_1k,q_hat_k,f_hat_k,candidates`.
pub fn write_trace<W: Write>(mut w: W, outcome: &DecodeOutcome, tally: &Tally) -> std::io::Result<()> {
    writeln!(w, "step,size_1k,q_hat_k,f_hat_k,candidates")?;
    for (i, s) in outcome.steps.iter().enumerate() {
        writeln!(w, "{},{},{},{},{}", s.k, s.size, tally.q_hat[i], tally.f_hat[i], s.candidates)?;
    }
    Ok(())
}
