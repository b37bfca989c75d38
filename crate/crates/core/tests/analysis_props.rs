use proptest::prelude::*;
use superpose::analysis::*;
use superpose::special::{kl_bernoulli, norm_cdf};
use superpose::{derive_channel, AllocationKind};

fn exp_config(snr: f64, b: u32, l: usize, frac: f64, a: f64, h: f64) -> BoundConfig {
    let c = 0.5 * snr.ln_1p();
    BoundConfig {
        snr,
        section_size: 1 << b,
        sections: l,
        rate: frac * c,
        a,
        allocation: AllocationKind::Exponential,
        h,
    }
}

// g_L from the raw definition, section by section
fn g_direct(cfg: &BoundConfig, x: f64) -> f64 {
    let c = 0.5 * cfg.snr.ln_1p();
    let nu = cfg.snr / (1.0 + cfg.snr);
    let l = cfg.sections as f64;
    let raw: Vec<f64> = (0..cfg.sections).map(|i| (-2.0 * c * i as f64 / l).exp()).collect();
    let total: f64 = raw.iter().sum();
    let ln_m = (cfg.section_size as f64).ln();
    let n = l * ln_m / cfg.rate;
    let tau = (2.0 * ln_m).sqrt() + cfg.a;
    raw.iter()
        .map(|w| {
            let pi = w / total;
            pi * norm_cdf(((1.0 - cfg.h) * n * pi * nu / (1.0 - x * nu)).sqrt() - tau)
        })
        .sum()
}

#[test]
fn progression_matches_definition() {
    let cfg = exp_config(7.0, 10, 300, 0.6, 0.7, 0.05);
    let p = Progression::new(&cfg).unwrap();
    for i in 0..=20 {
        let x = i as f64 / 20.0;
        assert!((p.g(x) - g_direct(&cfg, x)).abs() < 1e-13);
    }
}

#[test]
fn sandwich_on_fixed_grid() {
    // 12 configurations × 21 points
    let cases = [
        (1.0, 16, 0.5, 0.0),
        (1.0, 12, 0.7, 0.5),
        (1.0, 10, 0.9, 1.5),
        (7.0, 16, 0.74 / 1.5, 1.25),
        (7.0, 12, 0.5, 0.0),
        (7.0, 9, 0.8, 0.7),
        (15.0, 16, 0.42, 1.0),
        (15.0, 14, 0.6, 2.0),
        (15.0, 8, 0.3, 0.3),
        (3.0, 11, 0.65, 0.9),
        (31.0, 16, 0.5, 1.2),
        (0.5, 13, 0.55, 0.4),
    ];
    let mut checked = 0;
    for &(snr, b, frac, a) in &cases {
        let cfg = exp_config(snr, b, 1 << b, frac, a, 0.0);
        let p = Progression::new(&cfg).unwrap();
        let im = IntegralModel::new(&cfg).unwrap();
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            let gi = im.g_integral(x).unwrap();
            let (gl, _) = im.g_low(x).unwrap();
            let gl_l = p.g(x);
            assert!(gl <= gi + 1e-9, "g_low > g at {snr} {b} {frac} {a} x={x}: {gl} {gi}");
            assert!(gi <= gl_l + 1e-9, "g > g_L at {snr} {b} {frac} {a} x={x}: {gi} {gl_l}");
            checked += 1;
        }
    }
    assert_eq!(checked, 252);
}

#[test]
fn r0_is_the_boundary_of_decrease() {
    // the derivative integrand at r = r₀ integrates to one at x where z_x → −∞
    let cfg = exp_config(7.0, 16, 1 << 16, 0.5, 0.0, 0.0);
    let im = IntegralModel::new(&cfg).unwrap();
    let s = im.slack();
    assert!(s.r > s.r0);
    for i in 0..20 {
        let x = i as f64 / 20.0;
        assert!(im.g_integral_derivative(x).unwrap() <= 1.0 + 1e-9);
    }
}

#[test]
fn low_bound_hits_gap_at_xr() {
    for (snr, frac, a) in [(7.0, 0.5, 0.5), (15.0, 0.4, 1.0), (1.0, 0.55, 0.3)] {
        let cfg = exp_config(snr, 16, 1 << 16, frac, a, 0.0);
        let im = IntegralModel::new(&cfg).unwrap();
        let s = im.slack();
        let (g, _) = im.g_low(s.x_r).unwrap();
        assert!((g - s.x_r - s.gap).abs() < 1e-12, "{snr}: {} vs {}", g - s.x_r, s.gap);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sandwich_random(snr in 0.5f64..31.0, b in 8u32..17, frac in 0.2f64..0.95, a in 0.0f64..2.5,
                       h in 0.0f64..0.2, x in 0.0f64..1.0) {
        let cfg = exp_config(snr, b, 1 << b, frac, a, h);
        let im = IntegralModel::new(&cfg).unwrap();
        let p = Progression::new(&cfg).unwrap();
        let gi = im.g_integral(x).unwrap();
        prop_assert!(im.g_low(x).unwrap().0 <= gi + 1e-9);
        prop_assert!(gi <= p.g(x) + 1e-9);
    }

    #[test]
    fn g_l_monotone_in_unit_interval(snr in 0.5f64..31.0, b in 4u32..14, l in 2usize..400, frac in 0.1f64..1.2,
                                     a in -0.5f64..2.5, u in 0.0f64..1.0, gfrac in 0.0f64..1.0) {
        let c = 0.5 * snr.ln_1p();
        let cfg = BoundConfig { snr, section_size: 1 << b, sections: l, rate: frac * c, a,
                                allocation: AllocationKind::Leveled { u, gamma: gfrac * c }, h: 0.0 };
        let p = Progression::new(&cfg).unwrap();
        let mut prev = 0.0;
        for i in 0..=50 {
            let g = p.g(i as f64 / 50.0);
            // far above threshold Φ rounds to 1 and the weights sum to 1 ± ulp
            prop_assert!(g > 0.0 && g <= 1.0 + 1e-12);
            prop_assert!(g >= prev);
            prev = g;
        }
    }

    #[test]
    fn derivative_matches_finite_difference(snr in 1.0f64..15.0, b in 10u32..17, frac in 0.3f64..0.9,
                                            a in 0.0f64..2.0, x in 0.05f64..0.9) {
        let cfg = exp_config(snr, b, 1 << b, frac, a, 0.0);
        let im = IntegralModel::new(&cfg).unwrap();
        let d = 1e-5;
        let fd = (im.g_integral(x + d).unwrap() - im.g_integral(x - d).unwrap()) / (2.0 * d);
        prop_assert!((fd - im.g_integral_derivative(x).unwrap()).abs() < 1e-5);
        let fd_low = (im.g_low(x + d).unwrap().0 - im.g_low(x - d).unwrap().0) / (2.0 * d);
        prop_assert!((fd_low - im.g_low_derivative(x).unwrap()).abs() < 1e-5);
    }

    #[test]
    fn margin_nonincreasing_above_r0(snr in 1.0f64..15.0, b in 10u32..17, frac in 0.3f64..0.9, a in 0.0f64..2.0) {
        let cfg = exp_config(snr, b, 1 << b, frac, a, 0.0);
        let im = IntegralModel::new(&cfg).unwrap();
        prop_assume!(im.slack().r >= im.slack().r0);
        let mut prev = f64::INFINITY;
        for i in 0..=40 {
            let x = i as f64 / 40.0;
            let m = im.g_integral(x).unwrap() - x;
            prop_assert!(m <= prev + 1e-9);
            prev = m;
        }
    }

    #[test]
    fn f_star_below_bound(b in 2u32..25, a in 0.0f64..6.0) {
        let s = (2.0 * b as f64 * std::f64::consts::LN_2).sqrt();
        let f = f_star(s + a, 1 << b).unwrap();
        prop_assert!(f.ln_exact <= f.bound.ln() + 1e-12);
    }

    #[test]
    fn entropy_chain_ordered(p_star in 1e-6f64..0.99, t in 0.0f64..1.0) {
        let p = p_star + t * (0.999_999 - p_star);
        let c = entropy_chain(p, p_star).unwrap();
        prop_assert!(c.bernoulli >= c.poisson - 1e-15);
        prop_assert!(c.poisson >= c.hellinger - 1e-15);
        prop_assert!(c.hellinger >= c.quadratic - 1e-15);
    }
}

#[test]
fn entropy_chain_thousand_pairs() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let a: f64 = rng.random_range(1e-9..1.0);
        let b: f64 = rng.random_range(1e-9..1.0);
        let (p_star, p) = if a <= b { (a, b) } else { (b, a) };
        let c = entropy_chain(p, p_star).unwrap();
        assert!(c.bernoulli >= c.poisson - 1e-15 && c.poisson >= c.hellinger - 1e-15 && c.hellinger >= c.quadratic - 1e-15);
    }
}

#[test]
fn bernoulli_tail_exhaustive() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for case in 0..100 {
        let n = 1 + case % 12;
        let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let alpha: Vec<f64> = raw.iter().map(|v| v / total).collect();
        let r: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
        let t: f64 = rng.random_range(0.01..0.99);
        let b = bernoulli_tail(&alpha, &r, t).unwrap();
        // exact tails by enumerating all 2^n outcomes
        let (mut below, mut above) = (0.0, 0.0);
        for mask in 0u32..(1 << n) {
            let (mut prob, mut avg) = (1.0, 0.0);
            for j in 0..n {
                if mask >> j & 1 == 1 {
                    prob *= r[j];
                    avg += alpha[j];
                } else {
                    prob *= 1.0 - r[j];
                }
            }
            if avg <= t {
                below += prob;
            }
            if avg >= t {
                above += prob;
            }
        }
        if t < b.mean {
            assert!(below <= b.lower * (1.0 + 1e-12), "case {case}: {below} > {}", b.lower);
        }
        if t > b.mean {
            assert!(above <= b.upper * (1.0 + 1e-12), "case {case}: {above} > {}", b.upper);
        }
    }
    let at_mean = bernoulli_tail(&[0.25; 4], &[0.4; 4], 0.4).unwrap();
    assert_eq!((at_mean.lower, at_mean.upper), (1.0, 1.0));
}

#[test]
fn schedule_invariants() {
    // accumulative configuration: g_L ≥ g ≥ g_low and g_low − x ≥ gap on [0, x_r]
    for (snr, frac, a) in [(7.0, 0.45, 0.8), (15.0, 0.4, 1.0), (1.0, 0.5, 0.5)] {
        let cfg = exp_config(snr, 16, 1 << 16, frac, a, 0.0);
        let im = IntegralModel::new(&cfg).unwrap();
        let prog = Progression::new(&cfg).unwrap();
        let sl = im.slack();
        assert!(sl.feasible(), "{snr}: {sl:?}");
        let chk = check_accumulative(|x| prog.g(x), sl.x_r, sl.gap, 201);
        assert!(chk.holds && chk.grid_points == 201);
        let eta = sl.gap / 4.0;
        let limit = (sl.gap - eta).powi(2) / 8.0 - 0.5 / prog.l_pi;
        assert!(limit > 0.0);
        let s = build_schedule(&prog, sl.x_r, sl.gap, eta, 0.9 * limit).unwrap();
        let m = s.m();
        assert!(m <= (2.0 / (sl.gap - eta)).ceil() as usize);
        assert!(s.steps[m - 1].q1 >= sl.x_r + sl.gap - eta - 1e-12);
        for k in 1..=m {
            let row = s.lambda_row(k);
            assert!((row.iter().map(|l| l * l).sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(s.steps[k - 1].w > 0.0);
        }
        let last = s.steps[m - 1];
        assert!((last.s - 1.0 / (1.0 - last.x_prev * s.nu)).abs() < 1e-12);
        assert!(s.steps[0].lambda == 1.0);
        // too generous a false-alarm allowance is refused with its margin
        match build_schedule(&prog, sl.x_r, sl.gap, eta, 2.0 * limit + 1e-3) {
            Err(superpose::Error::InfeasibleSchedule(msg)) => assert!(msg.contains("margin")),
            other => panic!("expected infeasible schedule, got {other:?}"),
        }
    }
}

#[test]
fn rate_above_capacity_has_negative_gap() {
    let cfg = exp_config(7.0, 16, 1 << 16, 1.05, 0.5, 0.0);
    let sl = IntegralModel::new(&cfg).unwrap().slack();
    assert!(sl.gap < 0.0);
    assert!(matches!(
        gap_and_xr(&derive_channel(7.0).unwrap(), 1 << 16, sl.r, 0.5),
        Err(superpose::Error::InfeasibleRate(_))
    ));
}

#[test]
fn theorem_bound_is_three_terms() {
    let t = theorem1_bound(5e4, 0.01, 1.5, 1e-4, 20, 3e4, 0.05, 1.0);
    let direct = 20.0 * (-2.0 * 5e4 * 1e-4 + 20.0f64).exp()
        + 20.0 * (-5e4 * 1e-4 * (1.5 * 1.5f64.ln() - 0.5) / 1.5).exp()
        + 20.0 * (-(3e4 - 19.0) * 0.0025 / 2.0f64).exp();
    assert!((t.total / direct - 1.0).abs() < 1e-12);
}

#[test]
fn proposition_direct_within_explicit() {
    let ln2 = std::f64::consts::LN_2;
    for snr in [1.0, 7.0, 15.0] {
        let ch = derive_channel(snr).unwrap();
        for kappa in [0.5, 1.0, 2.0, 4.0] {
            let r = proposition1_report(&ch, 1 << 16, 1 << 16, kappa).unwrap();
            assert!(r.delta_mis <= r.delta_mis_explicit + 1e-15, "{snr} {kappa}");
            assert!(r.terms.total <= r.p_e_explicit * (1.0 + 1e-12), "{snr} {kappa}: {} > {}", r.terms.total, r.p_e_explicit);
            assert!(r.rate < r.params.c_star && r.params.c_star < ch.capacity());
            // f sits exactly on the false-alarm criterion
            let limit = (r.gap - r.eta).powi(2) / 8.0 - 0.5 / r.l_pi;
            assert!((r.f - limit).abs() <= 1e-12 * limit.abs().max(1e-300));
            let _ = ln2;
        }
    }
}

#[test]
fn divergence_slack_meets_budget() {
    let cfg = exp_config(7.0, 16, 1 << 16, 0.74 / 1.5, 1.25, 0.0);
    let prog = Progression::new(&cfg).unwrap();
    let rule = PacedRule {
        f: 1e-4,
        pacing_loss: true,
        slack: Slack::Divergence { count: prog.tail_count, log_budget: 8.0, c0: 1.0 },
        max_steps: 100,
    };
    for s in paced_progression(&prog, &rule) {
        let lhs = prog.tail_count * kl_bernoulli(s.q1, s.q_star);
        assert!((lhs - (8.0 + s.k as f64)).abs() < 1e-6 * lhs);
    }
}
