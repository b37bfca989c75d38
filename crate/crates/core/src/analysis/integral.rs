use serde::{Deserialize, Serialize};

use super::progression::{BoundConfig, ThresholdParams};
use super::quadrature::integrate;
use crate::codebook::AllocationKind;
use crate::error::{domain, Error, Result};
use crate::model::ChannelParams;
use crate::special::{norm_cdf, norm_pdf, norm_sf, sqrt_pi};

/// Rate slack r and the quantities derived from it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateSlack {
    pub r: f64,
    /// r₀ = 1/(2(1+δ_a)²).
    pub r0: f64,
    /// r₁ = r₀/2 + √(ln M)/(√π (1+δ_a)).
    pub r1: f64,
    /// x_r = 1 − r/(snr ln M).
    pub x_r: f64,
    /// gap = (r − r₁)/(snr ln M).
    pub gap: f64,
}

impl RateSlack {
    /// Evaluate without feasibility checks.
    pub fn compute(channel: &ChannelParams, section_size: usize, r: f64, a: f64) -> Result<Self> {
        let t = ThresholdParams::new(a, section_size)?;
        let ln_m = (section_size as f64).ln();
        let r0 = 0.5 / (1.0 + t.delta_a).powi(2);
        let r1 = 0.5 * r0 + ln_m.sqrt() / (sqrt_pi() * (1.0 + t.delta_a));
        let scale = channel.snr * ln_m;
        Ok(RateSlack { r, r0, r1, x_r: 1.0 - r / scale, gap: (r - r1) / scale })
    }

    pub fn feasible(&self) -> bool {
        self.gap > 0.0 && self.x_r > 0.0
    }
}

/// (gap, x_r, r₀, r₁) for rate slack r; errors when r ≤ r₁.
pub fn gap_and_xr(channel: &ChannelParams, section_size: usize, r: f64, a: f64) -> Result<RateSlack> {
    let s = RateSlack::compute(channel, section_size, r, a)?;
    if s.r <= s.r1 {
        return Err(Error::InfeasibleRate(format!(
            "r = {} does not exceed r₁ = {} (gap {})",
            s.r, s.r1, s.gap
        )));
    }
    Ok(s)
}

/// The large-L limit of g_L for the exponential allocation and its closed-form
/// lower bound.
///
/// With z the standardised offset of a term, the limit is
/// g(x) = (1/ν)∫[1 − max{u_x (R/C′)(1 + (z+a)/√(2 ln M))₊², 1 − ν}]₊ φ(z) dz,
/// u_x = 1 − xν and C′ = C̃(1 − h).
#[derive(Clone, Copy, Debug)]
pub struct IntegralModel {
    pub channel: ChannelParams,
    pub threshold: ThresholdParams,
    pub section_size: usize,
    pub rate: f64,
    /// C′ = C̃(1 − h).
    pub c_prime: f64,
    ln_m: f64,
}

impl IntegralModel {
    pub fn new(config: &BoundConfig) -> Result<Self> {
        if config.allocation != AllocationKind::Exponential {
            return Err(Error::Unsupported("the integral form needs the exponential allocation".into()));
        }
        if !(config.rate > 0.0) {
            return domain("rate must be positive");
        }
        let channel = config.channel()?;
        Ok(IntegralModel {
            channel,
            threshold: config.threshold()?,
            section_size: config.section_size,
            rate: config.rate,
            c_prime: channel.c_tilde(config.sections) * (1.0 - config.h),
            ln_m: config.ln_m(),
        })
    }

    fn s(&self) -> f64 {
        (2.0 * self.ln_m).sqrt()
    }

    /// R/C′.
    pub fn ratio(&self) -> f64 {
        self.rate / self.c_prime
    }

    fn u(&self, x: f64) -> Result<f64> {
        let u = 1.0 - x * self.channel.nu();
        if !(0.0..=1.0).contains(&x) || u <= 0.0 {
            return domain(format!("x must lie in [0,1] with xν < 1, got {x}"));
        }
        Ok(u)
    }

    /// Lower end of the active range of z (equals z_x).
    pub fn z_low(&self, x: f64) -> Result<f64> {
        let u = self.u(x)?;
        let nu = self.channel.nu();
        Ok(((1.0 - nu) / (u * self.ratio())).sqrt() * self.s() - self.s() - self.threshold.a)
    }

    /// Upper end of the active range of z.
    pub fn z_max(&self, x: f64) -> Result<f64> {
        let u = self.u(x)?;
        Ok((1.0 / (u * self.ratio())).sqrt() * self.s() - self.s() - self.threshold.a)
    }

    /// g(x) by adaptive quadrature.
    pub fn g_integral(&self, x: f64) -> Result<f64> {
        let u = self.u(x)?;
        let (lo, hi) = (self.z_low(x)?, self.z_max(x)?);
        let nu = self.channel.nu();
        let (k, s, da) = (u * self.ratio(), self.s(), self.threshold.delta_a);
        let inner = integrate(|z| (1.0 - k * (1.0 + da + z / s).powi(2)) * norm_pdf(z), lo, hi, 1e-13);
        Ok(norm_cdf(lo) + inner / nu)
    }

    /// g′(x) = (R/C′)∫_{z_low}^{z_max} (1 + δ_a + z/√(2 ln M))² φ(z) dz.
    pub fn g_integral_derivative(&self, x: f64) -> Result<f64> {
        let (lo, hi) = (self.z_low(x)?, self.z_max(x)?);
        let (s, da) = (self.s(), self.threshold.delta_a);
        Ok(self.ratio() * integrate(|z| (1.0 + da + z / s).powi(2) * norm_pdf(z), lo, hi, 1e-13))
    }

    /// r such that R = C′/((1+δ_a)²(1 + r/ln M)).
    pub fn rate_slack_r(&self) -> f64 {
        let d = (1.0 + self.threshold.delta_a).powi(2);
        self.ln_m * (1.0 / (self.ratio() * d) - 1.0)
    }

    /// x_r, gap, r₀, r₁ for this rate.
    pub fn slack(&self) -> RateSlack {
        RateSlack::compute(&self.channel, self.section_size, self.rate_slack_r(), self.threshold.a)
            .expect("threshold validated at construction")
    }

    /// Closed-form lower bound g_low(x) and z_x.
    pub fn g_low(&self, x: f64) -> Result<(f64, f64)> {
        let u = self.u(x)?;
        let z = self.z_low(x)?;
        let nu = self.channel.nu();
        let sl = self.slack();
        let delta_r = (sl.r - sl.r0) / (self.ln_m + sl.r);
        let (k, da) = (self.ratio() * u / nu, self.threshold.delta_a);
        let (phi, tail) = (norm_pdf(z), norm_sf(z));
        let value = norm_cdf(z) + (x + delta_r * u / nu) * tail
            - 2.0 * (1.0 + da) * k * phi / self.s()
            - k * z * phi / (2.0 * self.ln_m);
        Ok((value, z))
    }

    /// d g_low/dx = (R/C′)∫_{z_x}^∞ (1 + δ_a + z/√(2 ln M))² φ(z) dz in closed form.
    pub fn g_low_derivative(&self, x: f64) -> Result<f64> {
        let z = self.z_low(x)?;
        let (s, da) = (self.s(), self.threshold.delta_a);
        let (phi, tail) = (norm_pdf(z), norm_sf(z));
        Ok(self.ratio()
            * ((1.0 + da).powi(2) * tail + 2.0 * (1.0 + da) * phi / s + (tail + z * phi) / (s * s)))
    }
}
