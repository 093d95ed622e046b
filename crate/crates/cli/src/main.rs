use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ecg_pli::harness::{self, ExperimentManifest};
use ecg_pli::io::{load_signal_csv_auto, save_signal_csv};
use ecg_pli::{
    adaptive_notch, asci, denoise, mix_at_sir, resample, synth_ecg, synthesize_pli, DenoiseConfig,
    NotchConfig, PliConfig, Signal, SirLevelDb, ThresholdRule,
};

/// Powerline interference removal for single-lead ECG.
#[derive(Debug, Parser)]
#[command(name = "ecg-pli", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Remove interference from a signal file.
    Denoise(DenoiseArgs),
    /// Write synthetic mains interference.
    SynthPli(SynthPliArgs),
    /// Write a synthetic clean ECG.
    SynthEcg(SynthEcgArgs),
    /// Add interference to a clean signal at a target SIR.
    Mix(MixArgs),
    /// Score an estimate against a clean reference.
    Asci(AsciArgs),
    /// Run a benchmark manifest and write rows.csv and summary.csv.
    Bench(BenchArgs),
    /// Write aligned clean, noisy and denoised columns for one trial.
    Traces(TracesArgs),
    /// Change a signal's sample rate.
    Resample(ResampleArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Single-column CSV input.
    #[arg(short, long)]
    input: PathBuf,
    /// Rate to assume when the file header does not declare one.
    #[arg(long)]
    sample_rate: Option<f64>,
}

impl InputArgs {
    fn load(&self) -> Result<Signal> {
        load_signal_csv_auto(&self.input, self.sample_rate)
            .with_context(|| format!("reading {}", self.input.display()))
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Swt,
    Notch,
}

#[derive(Debug, Args)]
struct DenoiseArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, value_enum, default_value = "swt")]
    method: MethodArg,
    /// Decomposition depth.
    #[arg(long)]
    levels: Option<usize>,
    /// Daubechies order (6 is db6).
    #[arg(long)]
    wavelet_order: Option<usize>,
    #[arg(long)]
    median_window_ms: Option<f64>,
    #[arg(long)]
    qrs_window_ms: Option<f64>,
    /// `median`, `universal`, or a number multiplying the moving median.
    #[arg(long)]
    threshold_rule: Option<ThresholdRule>,
    #[arg(long)]
    fundamental: Option<f64>,
    #[arg(long)]
    harmonics: Option<usize>,
    #[arg(long)]
    adaptation_rate: Option<f64>,
    #[arg(long)]
    pole_radius: Option<f64>,
}

#[derive(Debug, Args)]
struct SynthPliArgs {
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, default_value_t = 60.0)]
    duration: f64,
    #[arg(long, default_value_t = 1000.0)]
    sample_rate: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    fundamental: Option<f64>,
    /// Peak relative frequency deviation, e.g. 0.01 for ±1%.
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    mod_depth: Option<f64>,
    #[arg(long)]
    drift_bandwidth: Option<f64>,
    /// A single stationary tone without harmonics.
    #[arg(long)]
    pure: bool,
}

#[derive(Debug, Args)]
struct SynthEcgArgs {
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, default_value_t = 60.0)]
    duration: f64,
    #[arg(long, default_value_t = 1000.0)]
    sample_rate: f64,
    #[arg(long, default_value_t = 70.0)]
    heart_rate: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct MixArgs {
    #[arg(long)]
    clean: PathBuf,
    #[arg(long)]
    pli: PathBuf,
    /// Target signal-to-interference ratio in dB.
    #[arg(long, allow_hyphen_values = true)]
    sir: f64,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    sample_rate: Option<f64>,
}

#[derive(Debug, Args)]
struct AsciArgs {
    /// Clean reference.
    #[arg(long)]
    reference: PathBuf,
    #[arg(long)]
    estimate: PathBuf,
    /// Tolerance in signal units; defaults to 5% of the reference's std.
    #[arg(long)]
    xi: Option<f64>,
    /// Seconds at the start left out of the score.
    #[arg(long, default_value_t = 0.0)]
    exclude_s: f64,
    #[arg(long)]
    sample_rate: Option<f64>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// TOML manifest; every key is optional.
    #[arg(short, long)]
    manifest: Option<PathBuf>,
    /// Overrides the manifest's output directory.
    #[arg(short, long)]
    output_dir: Option<PathBuf>,
    /// Record wall-clock runtimes (outputs are then no longer reproducible).
    #[arg(long)]
    timing: bool,
    /// Print the resolved manifest and exit.
    #[arg(long)]
    dry_run: bool,
}

#[derive(Debug, Args)]
struct TracesArgs {
    #[arg(short, long)]
    manifest: Option<PathBuf>,
    #[arg(long)]
    record: String,
    #[arg(long, allow_hyphen_values = true)]
    sir: f64,
    #[arg(long, default_value_t = 0)]
    trial: usize,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct ResampleArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    target: f64,
}

fn load_manifest(path: Option<&Path>) -> Result<ExperimentManifest> {
    match path {
        Some(p) => ExperimentManifest::load(p).with_context(|| format!("loading {}", p.display())),
        None => Ok(ExperimentManifest::default()),
    }
}

fn save(path: &Path, s: &Signal) -> Result<()> {
    save_signal_csv(path, s).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Denoise(a) => {
            let s = a.input.load()?;
            let out = match a.method {
                MethodArg::Swt => {
                    let mut cfg = DenoiseConfig::default();
                    if let Some(v) = a.levels {
                        cfg.levels = v;
                    }
                    if let Some(v) = a.wavelet_order {
                        cfg.wavelet_order = v;
                    }
                    if let Some(v) = a.median_window_ms {
                        cfg.median_window_ms = v;
                    }
                    if let Some(v) = a.qrs_window_ms {
                        cfg.qrs_window_ms = v;
                    }
                    if let Some(v) = a.threshold_rule {
                        cfg.threshold_rule = v;
                    }
                    denoise(&s, &cfg)?
                }
                MethodArg::Notch => {
                    let mut cfg = NotchConfig::default();
                    if let Some(v) = a.fundamental {
                        cfg.fundamental_hz = v;
                    }
                    if let Some(v) = a.harmonics {
                        cfg.num_harmonics = v;
                    }
                    if let Some(v) = a.adaptation_rate {
                        cfg.adaptation_rate = v;
                    }
                    if let Some(v) = a.pole_radius {
                        cfg.notch_pole_radius = v;
                    }
                    adaptive_notch(&s, &cfg)?
                }
            };
            save(&a.output, &out)
        }
        Command::SynthPli(a) => {
            let mut cfg = PliConfig::default();
            if let Some(f) = a.fundamental {
                cfg.fundamental_hz = f;
            }
            if a.pure {
                cfg = PliConfig::pure_tone(cfg.fundamental_hz);
            }
            if let Some(v) = a.tolerance {
                cfg.freq_tolerance_fraction = v;
            }
            if let Some(v) = a.mod_depth {
                cfg.amplitude_mod_depth = v;
            }
            if let Some(v) = a.drift_bandwidth {
                cfg.drift_bandwidth_hz = v;
            }
            let pli = synthesize_pli(a.duration, a.sample_rate, &cfg.with_seed(a.seed))?;
            save(&a.output, &pli)
        }
        Command::SynthEcg(a) => {
            let ecg = synth_ecg(a.duration, a.sample_rate, a.heart_rate, a.seed)?;
            save(&a.output, &ecg.signal)
        }
        Command::Mix(a) => {
            let clean = load_signal_csv_auto(&a.clean, a.sample_rate)?;
            let pli = load_signal_csv_auto(&a.pli, a.sample_rate)?;
            let mix = mix_at_sir(&clean, &pli, SirLevelDb::new(a.sir)?)?;
            eprintln!("interference scale {}", mix.scale);
            save(&a.output, &mix.noisy)
        }
        Command::Asci(a) => {
            let x = load_signal_csv_auto(&a.reference, a.sample_rate)?;
            let y = load_signal_csv_auto(&a.estimate, a.sample_rate)?;
            if !(a.exclude_s.is_finite() && a.exclude_s >= 0.0) {
                bail!("--exclude-s must be a non-negative number of seconds");
            }
            let prefix = (a.exclude_s * x.sample_rate_hz()).round() as usize;
            let report = asci(&x, &y, a.xi, prefix)?;
            println!("{}", report.value);
            Ok(())
        }
        Command::Bench(a) => {
            let mut m = load_manifest(a.manifest.as_deref())?;
            if let Some(dir) = a.output_dir {
                m.output_dir = dir;
            }
            m.timing |= a.timing;
            if a.dry_run {
                print!("{}", m.resolve()?.to_toml_string()?);
                return Ok(());
            }
            let (outcome, files) = harness::run_bench(&m)?;
            for s in &outcome.summary {
                println!(
                    "{:>6} {:>6} dB  {:.4} ± {:.4}  (n={})",
                    s.method, s.sir_db, s.mean_asci, s.std_asci, s.n
                );
            }
            if !outcome.errors.is_empty() {
                eprintln!(
                    "{} cells failed; see {}",
                    outcome.errors.len(),
                    files.errors.display()
                );
            }
            eprintln!("wrote {}", files.rows.display());
            Ok(())
        }
        Command::Traces(a) => {
            let m = load_manifest(a.manifest.as_deref())?;
            let methods = harness::methods_for(&m);
            harness::emit_traces(&m, &a.record, a.sir, a.trial, &methods, &a.output)?;
            Ok(())
        }
        Command::Resample(a) => {
            let s = a.input.load()?;
            save(&a.output, &resample(&s, a.target)?)
        }
    }
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
