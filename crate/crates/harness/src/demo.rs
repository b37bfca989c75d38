use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use superpose::decoder::{tally_mistakes, write_trace};
use superpose::seed::{substream, trial_seed, Stream};
use superpose::{adaptive_decode, encode, transmit, CodeParams, DecodeOutcome, ImplicitDictionary64, PowerAllocation, Tally};

use crate::config::ExperimentConfig;
use crate::design::prepare;
use crate::error::Result;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Demo {
    pub block_length: usize,
    pub a: f64,
    pub outcome: DecodeOutcome,
    pub tally: Tally,
}

/// Encode, transmit and decode a single random message (trial 0 of the seed).
pub fn demo(cfg: &ExperimentConfig) -> Result<Demo> {
    let design = prepare(cfg)?;
    let channel = cfg.channel()?;
    let code = CodeParams::new(cfg.sections, cfg.section_size, cfg.rate_nats()?)?;
    let alloc = PowerAllocation::new(design.bound.allocation, &channel, cfg.sections)?;
    let seed = trial_seed(cfg.seed, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(substream(seed, Stream::Message));
    let bits: Vec<bool> = (0..code.message_bits()).map(|_| rng.random()).collect();
    let beta = encode(&bits, &code, &alloc)?;
    let mut dict = ImplicitDictionary64::new(code.block_length, code.sections, code.section_size, substream(seed, Stream::Dictionary));
    let y = transmit(&mut dict, &beta, &channel, substream(seed, Stream::Noise));
    let outcome = adaptive_decode(&mut dict, &y, &design.schedule, &alloc)?;
    let tally = tally_mistakes(&outcome, &beta, alloc.weights());
    Ok(Demo { block_length: code.block_length, a: design.bound.a, outcome, tally })
}

/// Per-step trace CSV.
pub fn write_demo_trace<W: Write>(w: W, demo: &Demo) -> Result<()> {
    write_trace(w, &demo.outcome, &demo.tally)?;
    Ok(())
}
