mod manifest;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use v2xsim::channel::{all_presets, preset, write_tap_table, DelayMode};
use v2xsim::cv2x::Equalizer;
use v2xsim::dot11p::ChannelTracking;
use v2xsim::harness::{
    export_csv, export_plot, read_csv, run_sweep_with_workers, McsScheme, SimConfig, SnrReference, Technology,
};

use manifest::{parse_snr_spec, Overrides, RunManifest};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, manifest or names; exit code 2.
    #[error("{0}")]
    Config(String),
    /// Failure while simulating or writing output; exit code 1.
    #[error("{0}")]
    Runtime(String),
}

impl From<v2xsim::Error> for CliError {
    fn from(e: v2xsim::Error) -> Self {
        match e {
            v2xsim::Error::Io(_) | v2xsim::Error::Csv(_) => CliError::Runtime(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "v2xsim", version, about = "Link-level BLER simulation of 802.11p and C-V2X sidelink")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the channel presets and their taps.
    ListChannels {
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Run BLER sweeps from flags or a manifest file.
    Run(RunArgs),
    /// Gain of B over A at a target BLER, per channel.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        target_bler: f64,
    },
    /// Draw curves from result CSVs into one SVG.
    Plot {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, short)]
        output: PathBuf,
        #[arg(long, default_value = "BLER vs SNR")]
        title: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum DelayArg {
    Nearest,
    Sinc,
}

#[derive(Clone, Copy, ValueEnum)]
enum EqualizerArg {
    Mmse,
    ZeroForcing,
}

#[derive(Clone, Copy, ValueEnum)]
enum TrackingArg {
    LtfOnly,
    Sta,
}

#[derive(Args)]
struct RunArgs {
    /// TOML manifest with a `[[sweep]]` table per sweep.
    #[arg(long, conflicts_with_all = ["tech", "mcs", "channel", "snr"])]
    config: Option<PathBuf>,
    /// Technologies, comma separated (dot11p, cv2x).
    #[arg(long, required_unless_present = "config")]
    tech: Option<String>,
    /// MCS schemes, comma separated (qpsk_half, qpsk_threequarter).
    #[arg(long, required_unless_present = "config")]
    mcs: Option<String>,
    /// Channel presets, comma separated.
    #[arg(long, required_unless_present = "config")]
    channel: Option<String>,
    /// SNR points in dB: start:step:stop or a comma-separated list.
    #[arg(long, required_unless_present = "config", allow_hyphen_values = true)]
    snr: Option<String>,
    /// Seed for every random draw; random (and printed) when omitted.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    payload_bytes: Option<usize>,
    #[arg(long)]
    max_trials: Option<u64>,
    #[arg(long)]
    target_errors: Option<u64>,
    #[arg(long)]
    max_doppler: Option<f64>,
    #[arg(long, value_parser = parse_reference)]
    snr_reference: Option<SnrReference>,
    #[arg(long, value_enum)]
    delay_mode: Option<DelayArg>,
    #[arg(long)]
    normalize_channel_power: bool,
    #[arg(long, value_enum)]
    equalizer: Option<EqualizerArg>,
    #[arg(long, value_enum)]
    dot11p_tracking: Option<TrackingArg>,
    /// Result CSV; relative paths resolve against $V2XSIM_OUTPUT_DIR when set.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Also write an SVG plot here.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Print the resolved manifest and exit.
    #[arg(long)]
    dry_run: bool,
}

fn parse_reference(s: &str) -> Result<SnrReference, String> {
    s.parse().map_err(|e: v2xsim::Error| e.to_string())
}

fn split_names<T: std::str::FromStr<Err = v2xsim::Error>>(list: &str) -> Result<Vec<T>, CliError> {
    list.split(',').map(|s| s.trim().parse::<T>().map_err(CliError::from)).collect()
}

/// Largest seed a TOML manifest can hold.
const MAX_SEED: u64 = i64::MAX as u64;

fn check_seed(seed: Option<u64>) -> Result<Option<u64>, CliError> {
    match seed {
        Some(s) if s > MAX_SEED => Err(CliError::Config(format!("seed {s} exceeds {MAX_SEED}"))),
        s => Ok(s),
    }
}

fn random_seed() -> u64 {
    let seed = rand::random::<u64>() & MAX_SEED;
    eprintln!("seed {seed} (randomly selected)");
    seed
}

impl RunArgs {
    fn apply_options(&self, cfg: &mut SimConfig) {
        if let Some(v) = self.payload_bytes {
            cfg.payload_bytes = v;
        }
        if let Some(v) = self.max_trials {
            cfg.max_trials = v;
        }
        if let Some(v) = self.target_errors {
            cfg.target_errors = v;
        }
        if let Some(v) = self.max_doppler {
            cfg.max_doppler_hz = v;
        }
        if let Some(v) = self.snr_reference {
            cfg.snr_reference = v;
        }
        if let Some(v) = self.delay_mode {
            cfg.delay_mode = match v {
                DelayArg::Nearest => DelayMode::Nearest,
                DelayArg::Sinc => DelayMode::Sinc,
            };
        }
        if self.normalize_channel_power {
            cfg.normalize_channel_power = true;
        }
        if let Some(v) = self.equalizer {
            cfg.equalizer = match v {
                EqualizerArg::Mmse => Equalizer::Mmse,
                EqualizerArg::ZeroForcing => Equalizer::ZeroForcing,
            };
        }
        if let Some(v) = self.dot11p_tracking {
            cfg.dot11p_tracking = match v {
                TrackingArg::LtfOnly => ChannelTracking::LtfOnly,
                TrackingArg::Sta => ChannelTracking::DEFAULT_STA,
            };
        }
    }

    fn manifest(&self) -> Result<RunManifest, CliError> {
        let seed = check_seed(self.seed)?;
        let mut m = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
                let overrides = Overrides { seed, output: self.output.clone(), plot: self.plot.clone() };
                RunManifest::from_toml(&text, &overrides, random_seed)?
            }
            None => {
                let techs: Vec<Technology> = split_names(self.tech.as_deref().unwrap_or_default())?;
                let schemes: Vec<McsScheme> = split_names(self.mcs.as_deref().unwrap_or_default())?;
                let channels: Vec<&str> =
                    self.channel.as_deref().unwrap_or_default().split(',').map(str::trim).collect();
                for c in &channels {
                    preset(c)?;
                }
                let snrs = parse_snr_spec(self.snr.as_deref().unwrap_or_default())?;
                let seed = seed.unwrap_or_else(random_seed);
                let mut sweeps = Vec::new();
                for &t in &techs {
                    for &s in &schemes {
                        for c in &channels {
                            sweeps.push(SimConfig::new(t, s, c, snrs.clone(), seed));
                        }
                    }
                }
                RunManifest::new(seed, self.output.clone(), self.plot.clone(), sweeps)
            }
        };
        check_seed(Some(m.seed))?;
        for cfg in &mut m.sweeps {
            self.apply_options(cfg);
        }
        Ok(m)
    }
}

fn run(args: &RunArgs) -> Result<(), CliError> {
    let m = args.manifest()?;
    m.validate()?;
    if args.dry_run {
        print!("{}", m.to_toml());
        return Ok(());
    }
    let mut curves = Vec::new();
    let mut comments = vec![format!("v2xsim {} seed={}", env!("CARGO_PKG_VERSION"), m.seed)];
    for cfg in &m.sweeps {
        comments.extend(cfg.metadata_lines());
        let curve = run_sweep_with_workers(cfg, args.workers)?;
        for p in &curve.points {
            println!(
                "{:<40} {:>7} dB  {:>5}/{:<5}  BLER {:.4}  [{:.4}, {:.4}]",
                curve.label(),
                p.snr_db,
                p.errors,
                p.trials,
                p.bler,
                p.ci_low,
                p.ci_high
            );
        }
        curves.push(curve);
    }
    export_csv(&curves, &comments, &m.output).map_err(|e| CliError::Runtime(format!("{}: {e}", m.output.display())))?;
    eprintln!("wrote {}", m.output.display());
    if let Some(plot) = &m.plot {
        let title = format!("BLER vs SNR (seed {})", m.seed);
        export_plot(&curves, &title, plot).map_err(|e| CliError::Runtime(format!("{}: {e}", plot.display())))?;
        eprintln!("wrote {}", plot.display());
    }
    Ok(())
}

fn load(path: &Path) -> Result<Vec<v2xsim::harness::BlerCurve>, CliError> {
    read_csv(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::ListChannels { format } => {
            let models = all_presets();
            match format {
                Format::Table => print!("{}", report::channel_table(&models)),
                Format::Csv => {
                    let stdout = std::io::stdout();
                    let mut lock = stdout.lock();
                    write_tap_table(&models, &mut lock).map_err(|e| CliError::Runtime(e.to_string()))?;
                    lock.flush().map_err(|e| CliError::Runtime(e.to_string()))?;
                }
            }
            Ok(())
        }
        Command::Run(args) => run(&args),
        Command::Compare { a, b, target_bler } => {
            if !(target_bler > 0.0 && target_bler < 1.0) {
                return Err(CliError::Config(format!("target BLER {target_bler} outside (0, 1)")));
            }
            print!("{}", report::gain_table(&load(&a)?, &load(&b)?, target_bler));
            Ok(())
        }
        Command::Plot { inputs, output, title } => {
            let mut curves = Vec::new();
            for p in &inputs {
                curves.extend(load(p)?);
            }
            export_plot(&curves, &title, &output).map_err(|e| CliError::Runtime(format!("{}: {e}", output.display())))
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ CliError::Config(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e @ CliError::Runtime(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
