use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::design::Design;
use super::message::CoefficientVector;
use crate::model::ChannelParams;
use crate::scalar::Real;

/// Noiseless codeword Xβ.
pub fn codeword<T: Real, D: Design<T>>(mut design: D, beta: &CoefficientVector) -> Vec<T> {
    let mut c = vec![T::zero(); design.rows()];
    for l in 0..beta.sections() {
        design.accumulate(beta.column(l), T::of(beta.value(l)), &mut c);
    }
    c
}

/// Y = Xβ + ε with ε i.i.d. N(0, σ²), σ² = 1 for the normalised channel.
pub fn transmit<T: Real, D: Design<T>>(
    design: D,
    beta: &CoefficientVector,
    channel: &ChannelParams,
    noise_seed: u64,
) -> Vec<T> {
    transmit_with_noise(design, beta, channel.noise_variance().sqrt(), noise_seed)
}

/// As [`transmit`] with an explicit noise standard deviation.
pub fn transmit_with_noise<T: Real, D: Design<T>>(
    design: D,
    beta: &CoefficientVector,
    noise_std: f64,
    noise_seed: u64,
) -> Vec<T> {
    let mut y = codeword(design, beta);
    let mut rng = ChaCha8Rng::seed_from_u64(noise_seed);
    for v in y.iter_mut() {
        *v += T::of(noise_std * rng.sample::<f64, _>(StandardNormal));
    }
    y
}
