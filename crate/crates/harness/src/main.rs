use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use superpose::AllocationKind;
use superpose_harness::{
    demo, envelope, evaluate_bounds, simulate, write_envelope_csv, write_schedule_csv, write_trials_csv, DictionaryKind,
    EnvelopeMode, ExperimentConfig, HarnessError, Precision, RateSpec, Result, ScheduleMode, ThresholdSpec,
};

#[derive(Parser)]
#[command(name = "superpose", version, about = "Sparse superposition code experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the reliability bounds and write the decoder schedule.
    Bounds(Common),
    /// Monte Carlo simulation of the adaptive successive decoder.
    Simulate(Common),
    /// Largest rate meeting the mistake target, per section size.
    Envelope {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "large-l")]
        mode: EnvelopeMode,
        /// Section sizes as powers of two, e.g. 9..16 → 2^9..2^16.
        #[arg(long, value_delimiter = ',', default_value = "9,10,11,12,13,14,15,16")]
        log2_m: Vec<u32>,
        /// Use L = M instead of the configured L.
        #[arg(long)]
        l_equals_m: bool,
        #[arg(long, default_value_t = 1e-3)]
        resolution: f64,
    },
    /// Decode one codeword and print its per-step trace.
    Demo(Common),
}

#[derive(Args)]
struct Common {
    /// JSON config; its keys override the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    snr: Option<f64>,
    #[arg(short = 'M', long)]
    section_size: Option<usize>,
    #[arg(short = 'L', long)]
    sections: Option<usize>,
    /// Rate in nats.
    #[arg(long, conflicts_with_all = ["rate_bits", "rate_fraction"])]
    rate_nats: Option<f64>,
    #[arg(long, conflicts_with = "rate_fraction")]
    rate_bits: Option<f64>,
    /// Rate as a fraction of capacity.
    #[arg(long)]
    rate_fraction: Option<f64>,
    /// Threshold offset a, `auto` or `search`.
    #[arg(long)]
    threshold: Option<ThresholdSpec>,
    /// Leveled allocation floor u (with --gamma).
    #[arg(long, requires = "gamma")]
    u: Option<f64>,
    /// Leveled allocation decay γ in nats.
    #[arg(long, requires = "u")]
    gamma: Option<f64>,
    #[arg(long)]
    constant_power: bool,
    #[arg(long, value_enum)]
    schedule: Option<ScheduleMode>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
    /// Finite-L schedule slack in standard deviations.
    #[arg(long)]
    slack_z: Option<f64>,
    #[arg(long)]
    p_target: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    grid_points: Option<usize>,
    #[arg(long)]
    mistake_target: Option<f64>,
    #[arg(long)]
    outer_delta: Option<f64>,
    #[arg(long, value_enum)]
    dictionary: Option<DictionaryKind>,
    #[arg(long, value_enum)]
    precision: Option<Precision>,
    /// Transmit without noise.
    #[arg(long)]
    noiseless: bool,
    #[arg(long)]
    trials_csv: Option<PathBuf>,
    #[arg(long)]
    schedule_csv: Option<PathBuf>,
    #[arg(long)]
    envelope_csv: Option<PathBuf>,
    #[arg(long)]
    trace_csv: Option<PathBuf>,
    #[arg(long)]
    summary_json: Option<PathBuf>,
}

impl Common {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut c = ExperimentConfig::default();
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = self.$f.clone() { c.$f = v; } )* };
        }
        set!(snr, section_size, sections, threshold, schedule, slack_z, p_target, trials, seed, grid_points, mistake_target);
        c.eta = self.eta.or(c.eta);
        c.rho = self.rho.or(c.rho);
        c.h = self.h.or(c.h);
        c.outer_delta = self.outer_delta.or(c.outer_delta);
        set!(dictionary, precision);
        c.noiseless |= self.noiseless;
        if let Some(r) = self.rate_nats {
            c.rate = RateSpec::Nats(r);
        } else if let Some(r) = self.rate_bits {
            c.rate = RateSpec::Bits(r);
        } else if let Some(r) = self.rate_fraction {
            c.rate = RateSpec::FractionOfCapacity(r);
        }
        if let (Some(u), Some(gamma)) = (self.u, self.gamma) {
            c.allocation = AllocationKind::Leveled { u, gamma };
        } else if self.constant_power {
            c.allocation = AllocationKind::Constant;
        }
        let o = &mut c.output;
        o.trials_csv = self.trials_csv.clone();
        o.schedule_csv = self.schedule_csv.clone();
        o.envelope_csv = self.envelope_csv.clone();
        o.trace_csv = self.trace_csv.clone();
        o.summary_json = self.summary_json.clone();
        if let Some(path) = &self.config {
            c = c.overlay_file(path)?;
        }
        c.validate()?;
        Ok(c)
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))
}

fn emit<T: serde::Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) => writeln!(create(p)?, "{text}")?,
        None => println!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Bounds(common) => {
            let cfg = common.resolve()?;
            let report = evaluate_bounds(&cfg)?;
            if let Some(p) = &cfg.output.schedule_csv {
                write_schedule_csv(create(p)?, &report.schedule)?;
            }
            emit(&report, cfg.output.summary_json.as_deref())
        }
        Command::Simulate(common) => {
            let cfg = common.resolve()?;
            let (_, sim) = simulate(&cfg)?;
            if let Some(p) = &cfg.output.trials_csv {
                write_trials_csv(create(p)?, &sim.records)?;
            }
            emit(&sim.summary, cfg.output.summary_json.as_deref())
        }
        Command::Envelope { common, mode, log2_m, l_equals_m, resolution } => {
            let cfg = common.resolve()?;
            if log2_m.iter().any(|&b| !(1..=30).contains(&b)) {
                return Err(HarnessError::Config("log2 M must lie in 1..=30".into()));
            }
            let sizes: Vec<usize> = log2_m.iter().map(|&b| 1usize << b).collect();
            let points = envelope(&cfg, mode, &sizes, (!l_equals_m).then_some(cfg.sections), resolution)?;
            if let Some(p) = &cfg.output.envelope_csv {
                write_envelope_csv(create(p)?, &points)?;
            }
            emit(&points, cfg.output.summary_json.as_deref())
        }
        Command::Demo(common) => {
            let cfg = common.resolve()?;
            let d = demo(&cfg)?;
            match &cfg.output.trace_csv {
                Some(p) => superpose_harness::demo::write_demo_trace(create(p)?, &d)?,
                None => superpose_harness::demo::write_demo_trace(std::io::stdout().lock(), &d)?,
            }
            emit(&d.tally, cfg.output.summary_json.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = std::env::var("SUPERPOSE_THREADS").ok().and_then(|s| s.parse().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
