//! Seed derivation for reproducible experiments.

/// SplitMix64 finaliser; a bijective 64-bit mixer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for trial `index` under `master`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    mix64(mix64(master) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

/// Independent sub-stream of a trial seed (dictionary, message, noise, ...).
pub fn substream(seed: u64, stream: Stream) -> u64 {
    mix64(seed ^ (stream as u64).wrapping_mul(0xA076_1D64_78BD_642F))
}

/// Named sub-streams of a trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Dictionary = 1,
    Message = 2,
    Noise = 3,
}
