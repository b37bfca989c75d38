//! Acceptance criteria, one PASS/FAIL line each.
//!
//! `ACCEPTANCE_ONLY=2,6` restricts the run to the listed criteria.

use std::process::ExitCode;
use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use superpose::analysis::*;
use superpose::codebook::transmit;
use superpose::decoder::{AdaptiveDecoder, DecoderSchedule};
use superpose::outer_rs::{rs_decode, rs_encode, RsCode};
use superpose::seed::{substream, trial_seed, Stream};
use superpose::special::chi_mean_scaled;
use superpose::{derive_channel, AllocationKind, CodeParams, CoefficientVector, ImplicitDictionary64, PowerAllocation};
use superpose_harness::*;

struct Run {
    only: Option<Vec<usize>>,
    failed: Vec<usize>,
}

impl Run {
    fn wants(&self, c: usize) -> bool {
        self.only.as_ref().is_none_or(|v| v.contains(&c))
    }

    fn criterion(&mut self, c: usize, name: &str, f: impl FnOnce() -> (bool, String)) {
        if !self.wants(c) {
            return;
        }
        let t = Instant::now();
        let (ok, detail) = f();
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("[{verdict}] {c}. {name} ({:.1}s): {detail}", t.elapsed().as_secs_f64());
        if !ok {
            self.failed.push(c);
        }
    }
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

fn bounds_config(snr: f64, bits: f64) -> ExperimentConfig {
    ExperimentConfig {
        snr,
        section_size: 1 << 16,
        sections: 1 << 16,
        rate: RateSpec::Bits(bits),
        schedule: ScheduleMode::Refined,
        threshold: ThresholdSpec::Mode(ThresholdMode::Search),
        ..Default::default()
    }
}

fn refined_bounds(cfg: &ExperimentConfig) -> Result<RefinedEvaluation> {
    evaluate_bounds(cfg)?.refined.ok_or_else(|| HarnessError::Config("no refined evaluation".into()))
}

fn capacity() -> (bool, String) {
    let t = Instant::now();
    let got: Vec<f64> = [7.0, 15.0, 1.0].iter().map(|&s| derive_channel(s).unwrap().capacity_bits()).collect();
    let elapsed = t.elapsed();
    let ok = got.iter().zip([1.5, 2.0, 0.5]).all(|(g, w)| (g - w).abs() <= 2.0 * f64::EPSILON * w)
        && elapsed.as_secs_f64() < 1e-3;
    (ok, format!("C = {got:?} bits in {:.1} µs", elapsed.as_secs_f64() * 1e6))
}

fn bounds_snr7() -> (bool, String) {
    match refined_bounds(&bounds_config(7.0, 0.74)) {
        Ok(r) => {
            let ok = within(r.detection, 0.986, 0.01)
                && within(r.failed, 0.013, 0.005)
                && within(r.false_alarm, 0.008, 0.005)
                && r.p_e <= 2e-3;
            (
                ok,
                format!(
                    "detection {:.5} (0.986±0.01), failed {:.5} (0.013±0.005), false alarm {:.5} (0.008±0.005), p_e {:.2e} (≤2e-3), m = {}",
                    r.detection, r.failed, r.false_alarm, r.p_e, r.m
                ),
            )
        }
        Err(e) => (false, e.to_string()),
    }
}

fn bounds_snr15_snr1() -> (bool, String) {
    let (hi, lo) = match (refined_bounds(&bounds_config(15.0, 0.84)), refined_bounds(&bounds_config(1.0, 0.285))) {
        (Ok(h), Ok(l)) => (h, l),
        (h, l) => return (false, format!("{:?} / {:?}", h.err(), l.err())),
    };
    let ok = within(hi.detection, 0.995, 0.01)
        && within(hi.false_alarm, 0.005, 0.005)
        && within(lo.detection, 0.944, 0.01)
        && within(lo.false_alarm, 0.016, 0.01)
        && within(lo.failed, 0.055, 0.01);
    (
        ok,
        format!(
            "snr 15: detection {:.5} (0.995±0.01), false alarm {:.5} (0.005±0.005); snr 1: detection {:.5} (0.944±0.01), false alarm {:.5} (0.016±0.01), failed {:.5} (0.055±0.01)",
            hi.detection, hi.false_alarm, lo.detection, lo.false_alarm, lo.failed
        ),
    )
}

fn large_l_envelope() -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for (snr, target) in [(1.0, 0.59), (7.0, 0.49), (15.0, 0.42)] {
        let cfg = ExperimentConfig { snr, section_size: 1 << 16, sections: 1 << 16, ..Default::default() };
        let c = cfg.channel().unwrap().capacity();
        match envelope_rate(&cfg, EnvelopeMode::LargeL, (0.0, c), 1e-3) {
            Ok(p) => {
                let hit = within(p.ratio_to_capacity, target, 0.03);
                ok &= hit;
                parts.push(format!("snr {snr}: {:.4} ({target}±0.03{})", p.ratio_to_capacity, if hit { "" } else { " ✗" }));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("snr {snr}: {e}"));
            }
        }
    }
    let mut detail = parts.join("; ");
    if !ok {
        // the 49% and 42% targets are exactly the rates of the two bound
        // evaluations above (0.74 of 1.5 bits, 0.84 of 2 bits), which are
        // error-probability-controlled operating points, not the expected-value
        // envelope at a 10% mistake target
        detail.push_str(
            " — note: 0.49 = 0.74/1.5 and 0.42 = 0.84/2.0 coincide with the bounds-mode operating points of criteria 2–3, \
             whereas the expected-value envelope at a 10% mistake target sits higher",
        );
    }
    (ok, detail)
}

const SIM_SIZES: [usize; 4] = [1 << 9, 1 << 10, 1 << 11, 1 << 12];

fn sim_config(m: usize) -> ExperimentConfig {
    ExperimentConfig {
        snr: 7.0,
        section_size: m,
        sections: 100,
        trials: 1000,
        seed: 2024,
        mistake_target: 0.1,
        ..Default::default()
    }
}

struct SimPoint {
    m: usize,
    envelope: f64,
    simulated: f64,
}

fn simulation_envelope(points: &mut Vec<SimPoint>) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for m in SIM_SIZES {
        let cfg = sim_config(m);
        let c = cfg.channel().unwrap().capacity();
        let env = match envelope_rate(&cfg, EnvelopeMode::LargeL, (0.0, c), 1e-3) {
            Ok(p) => p.rate_nats,
            Err(e) => {
                ok = false;
                parts.push(format!("B={m}: {e}"));
                continue;
            }
        };
        let t = Instant::now();
        let sim = match envelope_rate(&cfg, EnvelopeMode::Simulation, (0.9 * env, 1.1 * env), 0.01) {
            Ok(p) => p,
            Err(e) => {
                ok = false;
                parts.push(format!("B={m}: {e}"));
                continue;
            }
        };
        let rel = sim.rate_nats / env - 1.0;
        let hit = sim.lower_feasible && rel.abs() <= 0.1;
        ok &= hit;
        parts.push(format!(
            "B={m}: simulated {:.4}C vs envelope {:.4}C ({:+.1}%, {} evaluations, {:.0}s){}",
            sim.rate_nats / c,
            env / c,
            100.0 * rel,
            sim.evaluations,
            t.elapsed().as_secs_f64(),
            if hit { "" } else { " ✗" }
        ));
        points.push(SimPoint { m, envelope: env, simulated: sim.rate_nats });
    }
    (ok, parts.join("; "))
}

// smallest error-probability target for which the refined analysis admits a design
fn refined_design(cfg: &ExperimentConfig) -> Option<(PreparedDesign, RefinedEvaluation)> {
    for p in [1e-3, 1e-2, 0.1, 0.5, 0.9] {
        let c = ExperimentConfig { schedule: ScheduleMode::Refined, p_target: p, ..cfg.clone() };
        if let Ok(d) = prepare(&c) {
            let e = d.refined.clone()?;
            return Some((d, e));
        }
    }
    None
}

// P(δ̂ > δ_mis) against p_e + 3 s.e. at one configuration
fn dominance_at(cfg: &ExperimentConfig) -> (bool, String) {
    let Some((design, e)) = refined_design(cfg) else {
        return (true, "no design with p_e < 1 (vacuous)".into());
    };
    if e.delta_mis >= 2.0 {
        return (true, format!("δ_mis = {:.3} ≥ 2, p_e = {:.3} (vacuous: δ̂ ≤ 2)", e.delta_mis, e.p_e));
    }
    let sim = match run_trials(cfg, &design, None) {
        Ok(s) => s,
        Err(err) => return (false, err.to_string()),
    };
    let n = sim.records.len() as f64;
    let hits = sim.records.iter().filter(|r| r.delta_mis > e.delta_mis).count();
    let p = hits as f64 / n;
    let se = (p * (1.0 - p) / n).sqrt();
    let ok = e.p_e > 1.0 || p <= e.p_e + 3.0 * se;
    (ok, format!("P̂(δ̂ > {:.3}) = {hits}/{} vs p_e = {:.3}", e.delta_mis, sim.records.len(), e.p_e))
}

fn dominance(points: &[SimPoint]) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut configs: Vec<(String, ExperimentConfig)> = SIM_SIZES
        .iter()
        .map(|&m| {
            let p = points.iter().find(|p| p.m == m);
            // the simulated maximum when criterion 5 ran, else 0.9 of the envelope
            let rate = match p {
                Some(p) if p.simulated > 0.0 => p.simulated,
                Some(p) => 0.9 * p.envelope,
                None => 0.43 * sim_config(m).channel().unwrap().capacity(),
            };
            (format!("B={m}"), ExperimentConfig { rate: RateSpec::Nats(rate), ..sim_config(m) })
        })
        .collect();
    // a lower rate where the bound is informative
    configs.push((
        "B=512 at 0.2C".into(),
        ExperimentConfig { rate: RateSpec::FractionOfCapacity(0.2), ..sim_config(512) },
    ));
    for (label, cfg) in configs {
        let (hit, d) = dominance_at(&cfg);
        ok &= hit;
        parts.push(format!("{label}: {d}{}", if hit { "" } else { " ✗" }));
    }
    (ok, parts.join("; "))
}

#[derive(Default)]
struct Moments {
    n: f64,
    sum: f64,
    sum2: f64,
    sum4: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        self.sum += x;
        self.sum2 += x * x;
        self.sum4 += x.powi(4);
    }

    fn mean(&self) -> f64 {
        self.sum / self.n
    }

    fn var(&self) -> f64 {
        (self.sum2 - self.n * self.mean().powi(2)) / (self.n - 1.0)
    }

    // standard errors of the mean and of the variance of a standardised sample
    fn check(&self, label: &str) -> (bool, String) {
        let se_mean = (self.var() / self.n).sqrt();
        let m4 = self.sum4 / self.n;
        let se_var = ((m4 - self.var().powi(2)) / self.n).sqrt();
        let ok = self.mean().abs() <= 3.0 * se_mean && (self.var() - 1.0).abs() <= 3.0 * se_var;
        (
            ok,
            format!(
                "{label}: mean {:+.4} (±{:.4}), var {:.4} (±{:.4}), n = {}",
                self.mean(),
                3.0 * se_mean,
                self.var(),
                3.0 * se_var,
                self.n
            ),
        )
    }
}

fn distributions() -> (bool, String) {
    let (l, m, trials) = (4, 8, 20_000);
    let ch = derive_channel(7.0).unwrap();
    let code = CodeParams::new(l, m, 0.5 * ch.capacity()).unwrap();
    let alloc = PowerAllocation::new(AllocationKind::Exponential, &ch, l).unwrap();
    let (n, nu) = (code.block_length, ch.nu());
    let steps = 2;
    let q1: Vec<f64> = (1..=steps).map(|k| k as f64 / steps as f64).collect();
    let sched = DecoderSchedule::from_targets(1.5, nu, 0.0, 0.0, &q1, &vec![0.5; steps], &vec![0.0; steps]).unwrap();
    let pi = alloc.weights();
    let var_chi = |d: usize| d as f64 * (1.0 - n as f64 / d as f64 * chi_mean_scaled(d, n).powi(2));
    let (mut sent1, mut other1) = (Moments::default(), Moments::default());
    let (mut sent2, mut other2) = (Moments::default(), Moments::default());
    for t in 0..trials {
        let s = trial_seed(91, t);
        let mut rng = ChaCha8Rng::seed_from_u64(substream(s, Stream::Message));
        let idx: Vec<usize> = (0..l).map(|_| rng.random_range(0..m)).collect();
        let beta = CoefficientVector::new(idx, m, &alloc).unwrap();
        let mut dict = ImplicitDictionary64::new(n, l, m, substream(s, Stream::Dictionary));
        let y = transmit(&mut dict, &beta, &ch, substream(s, Stream::Noise));
        let sent: Vec<usize> = beta.columns();
        let mut dec = AdaptiveDecoder::new(&mut dict, &y, &sched, &alloc).unwrap();
        dec.step();
        let z1 = dec.statistic().to_vec();
        for j in 0..l * m {
            let sec = j / m;
            if sent.contains(&j) {
                let c = n as f64 * pi[sec] * nu;
                let mean = c.sqrt() * chi_mean_scaled(n, n);
                let var = 1.0 - nu * pi[sec] + pi[sec] * nu * var_chi(n);
                sent1.push((z1[j] - mean) / var.sqrt());
            } else {
                other1.push(z1[j]);
            }
        }
        // step-1 weighted detections and false alarms
        let selected = dec.records()[0].selected.clone();
        let q: f64 = selected.iter().filter(|j| sent.contains(j)).map(|&j| pi[j / m]).sum();
        let f: f64 = selected.iter().filter(|j| !sent.contains(j)).map(|&j| pi[j / m]).sum();
        if !dec.step() || dec.k() < 2 {
            continue;
        }
        let q_adj = if q > 0.0 { q / (1.0 + f / q) } else { 0.0 };
        let s2 = 1.0 / (1.0 - q_adj * nu);
        let w2 = s2 - 1.0;
        let z2 = dec.statistic();
        for j in 0..l * m {
            if selected.contains(&j) {
                continue;
            }
            let sec = j / m;
            if sent.contains(&j) {
                let c = n as f64 * pi[sec] * nu;
                let mean = (w2 * c).sqrt() * chi_mean_scaled(n - 1, n);
                let var = 1.0 - s2 * nu * pi[sec] + w2 * pi[sec] * nu * var_chi(n - 1);
                sent2.push((z2[j] - mean) / var.sqrt());
            } else {
                other2.push(z2[j]);
            }
        }
    }
    let checks = [
        sent1.check("Z₁ sent (standardised)"),
        other1.check("Z₁ other"),
        sent2.check("Z₂ sent undecoded (standardised)"),
        other2.check("Z₂ other undecoded"),
    ];
    let ok = checks.iter().all(|c| c.0) && sent2.n >= 1e4;
    (ok, format!("n = {n}, {trials} trials; {}", checks.map(|c| c.1).join("; ")))
}

fn exp_config(snr: f64, b: u32, frac: f64, a: f64) -> BoundConfig {
    BoundConfig {
        snr,
        section_size: 1 << b,
        sections: 1 << b,
        rate: frac * 0.5 * snr.ln_1p(),
        a,
        allocation: AllocationKind::Exponential,
        h: 0.0,
    }
}

fn properties() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    let (mut checked, mut bad) = ([0usize; 5], [0usize; 5]);

    // sandwich g_low ≤ g ≤ g_L
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
    for &(snr, b, frac, a) in &cases {
        let cfg = exp_config(snr, b, frac, a);
        let p = Progression::new(&cfg).unwrap();
        let im = IntegralModel::new(&cfg).unwrap();
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            let gi = im.g_integral(x).unwrap();
            checked[0] += 1;
            if !(im.g_low(x).unwrap().0 <= gi + 1e-9 && gi <= p.g(x) + 1e-9) {
                bad[0] += 1;
            }
        }
    }

    // λ normalisation on constant-slack and paced schedules
    for (snr, frac, a) in [(7.0, 0.45, 0.8), (15.0, 0.4, 1.0), (1.0, 0.5, 0.5)] {
        let cfg = exp_config(snr, 16, frac, a);
        let prog = Progression::new(&cfg).unwrap();
        let sl = IntegralModel::new(&cfg).unwrap().slack();
        let eta = sl.gap / 4.0;
        let limit = (sl.gap - eta).powi(2) / 8.0 - 0.5 / prog.l_pi;
        let mut schedules = vec![build_schedule(&prog, sl.x_r, sl.gap, eta, 0.9 * limit).unwrap()];
        let e = evaluate_large_l(&cfg).unwrap();
        schedules.push(schedule_from_paced(&prog, &e.steps, e.f_star).unwrap());
        for s in &schedules {
            for k in 1..=s.m() {
                let row = s.lambda_row(k);
                checked[1] += 1;
                if (row.iter().map(|l| l * l).sum::<f64>() - 1.0).abs() > 1e-12 {
                    bad[1] += 1;
                }
            }
        }
    }

    // derivative against central differences
    for _ in 0..300 {
        let cfg = exp_config(rng.random_range(1.0..15.0), rng.random_range(10..17), rng.random_range(0.3..0.9), rng.random_range(0.0..2.0));
        let im = IntegralModel::new(&cfg).unwrap();
        let x: f64 = rng.random_range(0.05..0.9);
        let d = 1e-5;
        let fd = (im.g_integral(x + d).unwrap() - im.g_integral(x - d).unwrap()) / (2.0 * d);
        let fd_low = (im.g_low(x + d).unwrap().0 - im.g_low(x - d).unwrap().0) / (2.0 * d);
        checked[2] += 2;
        bad[2] += ((fd - im.g_integral_derivative(x).unwrap()).abs() >= 1e-5) as usize;
        bad[2] += ((fd_low - im.g_low_derivative(x).unwrap()).abs() >= 1e-5) as usize;
    }

    // weighted Bernoulli tails against full enumeration
    for n in 1..=12usize {
        for _ in 0..25 {
            let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let alpha: Vec<f64> = raw.iter().map(|v| v / total).collect();
            let r: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
            let t: f64 = rng.random_range(0.01..0.99);
            let b = bernoulli_tail(&alpha, &r, t).unwrap();
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
            checked[3] += 1;
            if (t < b.mean && below > b.lower * (1.0 + 1e-12)) || (t > b.mean && above > b.upper * (1.0 + 1e-12)) {
                bad[3] += 1;
            }
        }
    }

    // entropy chain D ≥ D_Poi ≥ Hellinger ≥ quadratic
    for _ in 0..1000 {
        let a: f64 = rng.random_range(1e-9..1.0);
        let b: f64 = rng.random_range(1e-9..1.0);
        let (p_star, p) = if a <= b { (a, b) } else { (b, a) };
        let c = entropy_chain(p, p_star).unwrap();
        checked[4] += 1;
        if !(c.bernoulli >= c.poisson - 1e-15 && c.poisson >= c.hellinger - 1e-15 && c.hellinger >= c.quadratic - 1e-15) {
            bad[4] += 1;
        }
    }

    let names = ["sandwich", "λ normalisation", "derivative", "Bernoulli tail", "entropy chain"];
    let detail = names.iter().zip(checked.iter().zip(&bad)).map(|(n, (c, b))| format!("{n} {b}/{c}")).collect::<Vec<_>>();
    (bad.iter().all(|&b| b == 0) && checked[0] == 252, format!("violations: {}", detail.join(", ")))
}

fn outer_code() -> (bool, String) {
    // every errors-and-erasures pattern within 2e + s ≤ n − k on GF(16)
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let (mut decodes, mut wrong) = (0, 0);
    let n = 15;
    for k in 1..=n {
        let code = RsCode::new(4, n, k).unwrap();
        let r = n - k;
        for e in 0..=r / 2 {
            for s in 0..=(r - 2 * e) {
                for _ in 0..40 {
                    let msg: Vec<u16> = (0..k).map(|_| rng.random_range(0..16)).collect();
                    let cw = rs_encode(&msg, &code).unwrap();
                    let pos = sample(&mut rng, n, e + s).into_vec();
                    let mut rx = cw.clone();
                    let mut erased = vec![false; n];
                    for &p in &pos[..s] {
                        erased[p] = true;
                        rx[p] = rng.random_range(0..16);
                    }
                    for &p in &pos[s..] {
                        rx[p] ^= rng.random_range(1..16);
                    }
                    decodes += 1;
                    match rs_decode(&rx, &erased, &code) {
                        Ok(d) if d.message == msg && d.errors == e => {}
                        _ => wrong += 1,
                    }
                }
            }
        }
    }
    let cfg = ExperimentConfig {
        snr: 7.0,
        section_size: 16,
        sections: 15,
        rate: RateSpec::FractionOfCapacity(0.4),
        trials: 1000,
        seed: 8,
        outer_delta: Some(0.2),
        allocation: AllocationKind::Constant,
        threshold: ThresholdSpec::Offset(0.0),
        schedule: ScheduleMode::Uniform,
        ..Default::default()
    };
    let (sim_ok, sim_detail) = match simulate(&cfg) {
        Ok((_, sim)) => {
            let c = sim.summary.composite.expect("GF(16) holds 15 sections");
            let corrected = sim.records.iter().filter(|r| r.delta_mis > 0.0 && r.composite_ok == Some(true)).count();
            (
                c.failures_within_capability == 0 && sim.records.len() == 1000,
                format!(
                    "composite (15, {}) at δ = {:.3}: {} failures within capability, {} beyond, {corrected} trials with inner mistakes recovered",
                    c.k,
                    c.delta,
                    c.failures_within_capability,
                    c.failures - c.failures_within_capability
                ),
            )
        }
        Err(e) => (false, e.to_string()),
    };
    (wrong == 0 && sim_ok, format!("RS: {wrong}/{decodes} decoding failures; {sim_detail}"))
}

fn main() -> ExitCode {
    let only = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|v| v.trim().parse().ok()).collect::<Vec<usize>>());
    let mut run = Run { only, failed: Vec::new() };
    let mut points = Vec::new();
    run.criterion(1, "capacity", capacity);
    run.criterion(2, "bounds at snr 7, 0.74 bits", bounds_snr7);
    run.criterion(3, "bounds at snr 15 and snr 1", bounds_snr15_snr1);
    run.criterion(4, "large-L envelope at B = 2^16", large_l_envelope);
    run.criterion(5, "simulated envelope at L = 100", || simulation_envelope(&mut points));
    run.criterion(6, "statistic distributions", distributions);
    run.criterion(7, "analysis properties", properties);
    run.criterion(8, "outer code", outer_code);
    run.criterion(9, "bound dominance", || dominance(&points));
    if run.failed.is_empty() {
        println!("acceptance: all selected criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {:?}", run.failed);
        ExitCode::FAILURE
    }
}
