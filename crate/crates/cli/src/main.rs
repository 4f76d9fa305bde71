use clap::{Args, Parser, Subcommand};
use quench_cli::config::{resolve, ConfigFile, GridSpec};
use quench_cli::critical::{critical_scan, write_critical_csv, CriticalConfig};
use quench_cli::pdf::{run_pdf, write_pdf_csv, PdfConfig, PdfMethod};
use quench_cli::sweep::{run_sweep, write_sweep_csv, SweepConfig};
use quench_cli::verify::{run_verify, VerifyConfig};
use quench_cli::{CliError, Result};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Exact thermodynamics of the suddenly quenched transverse-field XY chain
/// with Dzyaloshinsky-Moriya interaction.
#[derive(Parser)]
#[command(name = "quench", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep observables (mean work, variance, entropy production) over
    /// h0 and D grids; CSV to stdout or --out.
    Sweep(SweepArgs),
    /// Locate the critical point / critical line from local minima of the
    /// h0-derivatives of the averaged work and its variance.
    Critical(CriticalArgs),
    /// Emit the work distribution (exact atoms or FFT reconstruction).
    Pdf(PdfArgs),
    /// Run the verification suites; exit status 1 on any failure.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Anisotropy gamma in [-1, 1].
    #[arg(long)]
    gamma: Option<f64>,
    /// Inverse temperature.
    #[arg(long)]
    beta: Option<f64>,
    /// Number of spins (even).
    #[arg(long = "L")]
    l: Option<usize>,
    /// Quench amplitude: hf = h0 + dh.
    #[arg(long)]
    dh: Option<f64>,
    /// Worker threads (0 = all cores). Output bytes do not depend on this.
    #[arg(long)]
    workers: Option<usize>,
    /// Flat key=value configuration file; flags win over file values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path ("-" = stdout).
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Initial field: scalar or grid "min:max:count".
    #[arg(long)]
    h0: Option<GridSpec>,
    /// DM strength: scalar or grid "min:max:count".
    #[arg(long = "D")]
    d: Option<GridSpec>,
    /// Append a delta_F column.
    #[arg(long)]
    delta_f: bool,
}

#[derive(Args)]
struct CriticalArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// h0 scan grid "min:max:count" (needs at least 7 points).
    #[arg(long)]
    h0: Option<GridSpec>,
    /// DM strengths to scan: scalar or grid.
    #[arg(long = "D")]
    d: Option<GridSpec>,
    /// Keep every detected minimum (ranked by depth), not just the deepest.
    #[arg(long)]
    all_minima: bool,
}

#[derive(Args)]
struct PdfArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Initial field (scalar).
    #[arg(long)]
    h0: Option<f64>,
    /// DM strength (scalar).
    #[arg(long = "D")]
    d: Option<f64>,
    /// exact (L <= 16) or fft.
    #[arg(long)]
    method: Option<PdfMethod>,
    /// FFT sample count (power of two >= 1024).
    #[arg(long)]
    samples: Option<usize>,
    /// Work window half-width; computed from the spectral bound when absent.
    #[arg(long)]
    wmax: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// RNG seed for the randomized suites.
    #[arg(long)]
    seed: Option<u64>,
    /// Inject the principal-branch arctan as the production angle; the
    /// branch-guard suite must then fail (intentional-bug harness).
    #[arg(long, hide = true)]
    negative_control: bool,
}

fn load_config(common: &CommonArgs) -> Result<ConfigFile> {
    match &common.config {
        Some(path) => ConfigFile::load(path),
        None => Ok(ConfigFile::default()),
    }
}

fn open_output(common: &CommonArgs, file: &ConfigFile) -> Result<Box<dyn Write>> {
    let out = resolve(common.out.clone(), file, "out", "-".to_string())?;
    if out == "-" {
        Ok(Box::new(std::io::stdout().lock()))
    } else {
        Ok(Box::new(std::io::BufWriter::new(std::fs::File::create(out)?)))
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep(args) => {
            let file = load_config(&args.common)?;
            let cfg = SweepConfig {
                gamma: resolve(args.common.gamma, &file, "gamma", 0.5)?,
                beta: resolve(args.common.beta, &file, "beta", 100.0)?,
                l: resolve(args.common.l, &file, "L", 2000)?,
                dh: resolve(args.common.dh, &file, "dh", 0.01)?,
                h0: resolve(
                    args.h0,
                    &file,
                    "h0",
                    GridSpec::Linear { min: 0.0, max: 2.0, count: 401 },
                )?,
                d: resolve(args.d, &file, "D", GridSpec::Scalar(0.0))?,
                workers: resolve(args.common.workers, &file, "workers", 0)?,
                emit_delta_f: args.delta_f || file.get::<bool>("delta_f")?.unwrap_or(false),
            };
            let rows = run_sweep(&cfg)?;
            let mut out = open_output(&args.common, &file)?;
            write_sweep_csv(&mut out, &cfg, &rows)?;
            Ok(())
        }
        Command::Critical(args) => {
            let file = load_config(&args.common)?;
            let cfg = CriticalConfig {
                gamma: resolve(args.common.gamma, &file, "gamma", 0.5)?,
                beta: resolve(args.common.beta, &file, "beta", 100.0)?,
                l: resolve(args.common.l, &file, "L", 2000)?,
                dh: resolve(args.common.dh, &file, "dh", 0.01)?,
                h0: resolve(
                    args.h0,
                    &file,
                    "h0",
                    GridSpec::Linear { min: 0.5, max: 2.25, count: 351 },
                )?,
                d: resolve(
                    args.d,
                    &file,
                    "D",
                    GridSpec::Linear { min: 0.3, max: 1.0, count: 15 },
                )?,
                workers: resolve(args.common.workers, &file, "workers", 0)?,
                all_minima: args.all_minima || file.get::<bool>("all_minima")?.unwrap_or(false),
            };
            let estimates = critical_scan(&cfg)?;
            let mut out = open_output(&args.common, &file)?;
            write_critical_csv(&mut out, &cfg, &estimates)?;
            Ok(())
        }
        Command::Pdf(args) => {
            let file = load_config(&args.common)?;
            let cfg = PdfConfig {
                gamma: resolve(args.common.gamma, &file, "gamma", 0.5)?,
                beta: resolve(args.common.beta, &file, "beta", 100.0)?,
                l: resolve(args.common.l, &file, "L", 8)?,
                dh: resolve(args.common.dh, &file, "dh", 0.01)?,
                h0: resolve(args.h0, &file, "h0", 0.8)?,
                d: resolve(args.d, &file, "D", 0.0)?,
                method: resolve(args.method, &file, "method", PdfMethod::Exact)?,
                samples: resolve(args.samples, &file, "samples", 1 << 16)?,
                wmax: match args.wmax {
                    Some(w) => Some(w),
                    None => file.get::<f64>("wmax")?,
                },
            };
            let dist = run_pdf(&cfg)?;
            let mut out = open_output(&args.common, &file)?;
            write_pdf_csv(&mut out, &cfg, &dist)?;
            Ok(())
        }
        Command::Verify(args) => {
            let file = load_config(&args.common)?;
            let cfg = VerifyConfig {
                seed: resolve(args.seed, &file, "seed", 42)?,
                negative_control: args.negative_control,
            };
            let report = run_verify(&cfg);
            let mut out = open_output(&args.common, &file)?;
            out.write_all(report.render().as_bytes())?;
            if report.all_pass() {
                Ok(())
            } else {
                Err(CliError::VerifyFailed)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
