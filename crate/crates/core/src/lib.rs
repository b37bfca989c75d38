//! Sparse superposition codes for the additive white Gaussian noise channel.
//!
//! The crate is split along the life of a codeword:
//!
//! * [`model`] — channel and code-size parameters,
//! * [`codebook`] — Gaussian dictionaries, power allocations, encoding, the channel,
//! * [`decoder`] — the adaptive successive decoder and the residual reference decoder,
//! * [`analysis`] — the reliability machinery (success-rate function, schedules, bounds),
//! * [`outer_rs`] — the Reed-Solomon outer code that cleans up residual section mistakes.
//!
//! Signal-processing containers are generic over the float type ([`Real`]); the
//! analysis is carried out in `f64` throughout.
// coefficients are kept as published; negated comparisons reject NaN
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod codebook;
pub mod decoder;
mod error;
pub mod model;
pub mod outer_rs;
mod scalar;
pub mod seed;
pub mod special;

pub use error::{Error, Result};
pub use scalar::Real;

pub use codebook::{
    encode, transmit, AllocationKind, CoefficientVector, Dictionary, ImplicitDictionary,
    PowerAllocation,
};
pub use decoder::{adaptive_decode, residual_decode, DecodeOutcome, DecoderSchedule, Design, Tally};
pub use model::{derive_channel, ChannelParams, CodeParams};

/// Double-precision dictionary.
pub type Dictionary64 = Dictionary<f64>;
/// Single-precision dictionary (half the memory, ~1e-7 relative statistics).
pub type Dictionary32 = Dictionary<f32>;
/// Double-precision lazily sampled dictionary.
pub type ImplicitDictionary64 = ImplicitDictionary<f64>;
/// Single-precision lazily sampled dictionary.
pub type ImplicitDictionary32 = ImplicitDictionary<f32>;
