//! Normal-distribution special functions and relative entropies.
//!
//! `erfc` comes from `libm` (a port of the fdlibm routine, below one ulp on the
//! real line), so Φ and Φ̄ inherit ~1e-16 relative accuracy. Upper tails far
//! beyond `erfc`'s range are handled in log-space through the Mills ratio.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Standard normal density φ(x).
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x - LN_SQRT_2PI).exp()
}

/// Standard normal distribution function Φ(x).
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Upper tail Φ̄(x) = 1 − Φ(x), accurate to relative 1e-15 until it underflows.
pub fn norm_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// ln Φ̄(x), finite for every real x.
pub fn log_norm_sf(x: f64) -> f64 {
    if x < 30.0 {
        norm_sf(x).ln()
    } else {
        -0.5 * x * x - LN_SQRT_2PI + mills_ratio(x).ln()
    }
}

/// Mills ratio Φ̄(x)/φ(x) for x ≥ 8 by backward evaluation of the Laplace continued fraction.
fn mills_ratio(x: f64) -> f64 {
    debug_assert!(x >= 8.0);
    let mut t = 0.0;
    for k in (1..=60).rev() {
        t = k as f64 / (x + t);
    }
    1.0 / (x + t)
}

/// Inverse of Φ (Wichura's AS 241, PPND16), relative accuracy about 1e-16.
///
/// Returns ±∞ at the endpoints and NaN outside `[0, 1]`.
pub fn norm_quantile(p: f64) -> f64 {
    if !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return q * poly(&A, r) / poly(&B, r);
    }
    let r = if q < 0.0 { p } else { 1.0 - p };
    let mut r = (-r.ln()).sqrt();
    let x = if r <= 5.0 {
        r -= 1.6;
        poly(&C, r) / poly(&D, r)
    } else {
        r -= 5.0;
        poly(&E, r) / poly(&F, r)
    };
    if q < 0.0 {
        -x
    } else {
        x
    }
}

fn poly(c: &[f64; 8], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * x + k)
}

const A: [f64; 8] = [
    3.387_132_872_796_366_608,
    1.331_416_678_917_843_774_5e2,
    1.971_590_950_306_551_442_7e3,
    1.373_169_376_550_946_112_5e4,
    4.592_195_393_154_987_145_7e4,
    6.726_577_092_700_870_085_3e4,
    3.343_057_558_358_812_810_5e4,
    2.509_080_928_730_122_672_7e3,
];
const B: [f64; 8] = [
    1.0,
    4.231_333_070_160_091_125_2e1,
    6.871_870_074_920_579_083e2,
    5.394_196_021_424_751_107_7e3,
    2.121_379_430_158_659_586_7e4,
    3.930_789_580_009_271_061e4,
    2.872_908_573_572_194_267_4e4,
    5.226_495_278_852_854_561e3,
];
const C: [f64; 8] = [
    1.423_437_110_749_683_577_34,
    4.630_337_846_156_545_295_9,
    5.769_497_221_460_691_405_5,
    3.647_848_324_763_204_605_04,
    1.270_458_252_452_368_382_58,
    2.417_807_251_774_506_117_7e-1,
    2.272_384_498_926_918_458_33e-2,
    7.745_450_142_783_414_076_4e-4,
];
const D: [f64; 8] = [
    1.0,
    2.053_191_626_637_758_821_87,
    1.676_384_830_183_803_849_4,
    6.897_673_349_851_000_045_5e-1,
    1.481_039_764_274_800_745_9e-1,
    1.519_866_656_361_645_719_66e-2,
    5.475_938_084_995_344_946e-4,
    1.050_750_071_644_416_843_24e-9,
];
const E: [f64; 8] = [
    6.657_904_643_501_103_777_2,
    5.463_784_911_164_114_369_9,
    1.784_826_539_917_291_335_8,
    2.965_605_718_285_048_912_3e-1,
    2.653_218_952_657_612_309_3e-2,
    1.242_660_947_388_078_438_6e-3,
    2.711_555_568_743_487_578_15e-5,
    2.010_334_399_292_288_132_65e-7,
];
const F: [f64; 8] = [
    1.0,
    5.998_322_065_558_879_376_9e-1,
    1.369_298_809_227_358_053_1e-1,
    1.487_536_129_085_061_485_25e-2,
    7.868_691_311_456_132_591e-4,
    1.846_318_317_510_054_681_8e-5,
    1.421_511_758_316_445_888_7e-7,
    2.044_263_103_389_939_785_64e-15,
];

/// x ln(x/y) with the convention 0 ln 0 = 0.
fn xlogy_ratio(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (x / y).ln()
    }
}

/// Bernoulli relative entropy D(p‖q) in nats.
pub fn kl_bernoulli(p: f64, q: f64) -> f64 {
    xlogy_ratio(p, q) + xlogy_ratio(1.0 - p, 1.0 - q)
}

/// Poisson relative entropy D_Poi(p‖q) = p ln(p/q) + q − p in nats.
pub fn kl_poisson(p: f64, q: f64) -> f64 {
    xlogy_ratio(p, q) + q - p
}

/// D(ρ) = ρ ln ρ − (ρ − 1), the Poisson divergence of ρ from 1.
pub fn d_rho(rho: f64) -> f64 {
    xlogy_ratio(rho, 1.0) - (rho - 1.0)
}

/// E[χ_d]/√n, the mean of a chi variable with d degrees of freedom scaled by √n.
pub fn chi_mean_scaled(d: usize, n: usize) -> f64 {
    let d = d as f64;
    (std::f64::consts::SQRT_2 * (libm::lgamma(0.5 * (d + 1.0)) - libm::lgamma(0.5 * d)).exp())
        / (n as f64).sqrt()
}

/// √π, used by the rate-slack constants.
pub(crate) fn sqrt_pi() -> f64 {
    PI.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_reference_values() {
        // high-precision references
        assert!((norm_cdf(0.0) - 0.5).abs() < 1e-16);
        assert!((norm_sf(1.0) / 0.158_655_253_931_457_05 - 1.0).abs() < 1e-14);
        assert!((norm_sf(4.7) / 1.300_807_453_917_280_9e-6 - 1.0).abs() < 1e-14);
        assert!((norm_sf(10.0) / 7.619_853_024_160_526e-24 - 1.0).abs() < 1e-14);
        assert!((log_norm_sf(30.0) / -454.321_243_956_343_2 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn log_tail_is_continuous_at_switch() {
        let below = norm_sf(29.999_999).ln();
        let above = log_norm_sf(30.0);
        assert!((below - above).abs() < 1e-4);
        let direct = norm_sf(30.0).ln();
        assert!((log_norm_sf(30.0) - direct).abs() / direct.abs() < 1e-14);
        // far beyond erfc's range
        assert!(log_norm_sf(60.0).is_finite());
        assert!(norm_sf(60.0) == 0.0);
    }

    #[test]
    fn quantile_inverts_cdf() {
        for i in 1..2000 {
            let p = i as f64 / 2000.0;
            let x = norm_quantile(p);
            // round trip is limited by the conditioning x φ(x)/Φ(x) of the inverse
            assert!((norm_cdf(x) - p).abs() <= 1e-14 * p, "p={p}");
        }
        // deep lower tail against 50-digit references
        for (k, x) in [
            (40, -13.310_921_371_425_171),
            (45, -14.145_181_492_523_475),
            (58, -16.115_050_661_546_576),
            (100, -21.273_453_560_965_324),
            (200, -30.205_594_179_579_643),
            (299, -36.984_936_496_902_572),
        ] {
            let q = norm_quantile(10f64.powi(-k));
            assert!((q / x - 1.0).abs() < 1e-14, "p=1e-{k}: {q}");
        }
        for (p, x) in [(0.009, -2.365_618_126_864_292_7), (0.975, 1.959_963_984_540_054_2), (1e-10, -6.361_340_902_404_056)] {
            assert!((norm_quantile(p) / x - 1.0).abs() < 1e-15, "p={p}");
        }
        assert!(norm_quantile(-0.1).is_nan());
        assert_eq!(norm_quantile(0.0), f64::NEG_INFINITY);
    }

    #[test]
    fn divergences() {
        assert_eq!(kl_bernoulli(0.3, 0.3), 0.0);
        assert!((kl_bernoulli(0.25, 0.5) - 0.130_812_035_941_137_3).abs() < 1e-15);
        assert_eq!(d_rho(1.0), 0.0);
        assert!((d_rho(2.0) - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-15);
        assert!((kl_poisson(0.5, 0.25) - (0.5 * 2f64.ln() - 0.25)).abs() < 1e-15);
    }

    #[test]
    fn chi_mean() {
        // E[χ_1] = √(2/π)
        assert!((chi_mean_scaled(1, 1) - (2.0 / PI).sqrt()).abs() < 1e-14);
        // E[χ_2] = √(π/2)
        assert!((chi_mean_scaled(2, 1) - (PI / 2.0).sqrt()).abs() < 1e-14);
    }
}
