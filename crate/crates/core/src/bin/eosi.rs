use clap::{Args, Parser, Subcommand, ValueEnum};
use eosi::cli::{self, ReconstructOptions};
use eosi::config::{ReconstructionConfig, RunConfig};
use eosi::error::{Error, Result};
use eosi::reconstruction::IntegrationMethod;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Simulate and reconstruct single-photon spectral shearing interferometry.
#[derive(Parser)]
#[command(name = "eosi", version)]
struct Cli {
    /// Run configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Overrides the configured detection seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo repetitions (pipeline).
    #[arg(long, global = true, default_value_t = 1)]
    trials: usize,
    /// Suppress the summary printout.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a pulse and record its interferogram.
    Simulate {
        #[arg(long)]
        preset: Option<String>,
        /// Record the ideal intensities instead of photon counts.
        #[arg(long)]
        noiseless: bool,
    },
    /// Reconstruct the mode from a recorded interferogram.
    Reconstruct {
        interferogram: PathBuf,
        #[command(flatten)]
        args: ReconstructArgs,
    },
    /// Temporal profile, transform-limit ratio and comparison with a reference mode.
    Analyze {
        result: PathBuf,
        /// Mode or result JSON to compare against.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long)]
        wigner: bool,
    },
    /// Simulate, reconstruct and analyze in one go.
    Pipeline {
        #[arg(long)]
        preset: Option<String>,
        /// Preset name or config file to run alongside and compare with.
        #[arg(long)]
        compare: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Midpoint,
    Concatenation,
}

#[derive(Args)]
struct ReconstructArgs {
    #[arg(long)]
    tau_fs: Option<f64>,
    #[arg(long, conflicts_with = "shear_rad_per_fs")]
    shear_nm: Option<f64>,
    #[arg(long)]
    shear_rad_per_fs: Option<f64>,
    /// Reference wavelength for --shear-nm.
    #[arg(long)]
    center_nm: Option<f64>,
    /// Zero-shear interferogram used to calibrate the delay.
    #[arg(long)]
    calibrate_from: Option<PathBuf>,
    #[arg(long)]
    filter_width_fs: Option<f64>,
    #[arg(long)]
    amplitude_floor: Option<f64>,
    #[arg(long, value_enum)]
    integration: Option<Method>,
}

fn base_config(path: Option<&Path>, preset: Option<&str>) -> Result<RunConfig> {
    match (path, preset) {
        (Some(_), Some(_)) => Err(Error::Config("give either --config or --preset".into())),
        (Some(p), None) => RunConfig::read(p),
        (None, Some(name)) => RunConfig::preset(name),
        (None, None) => RunConfig::preset("paper-quadratic"),
    }
}

fn run(cli: Cli) -> Result<()> {
    let out = cli.out.as_path();
    match cli.command {
        Command::Simulate { preset, noiseless } => {
            let mut cfg = base_config(cli.config.as_deref(), preset.as_deref())?;
            cfg.interferometer.noiseless |= noiseless;
            cli::cmd_simulate(&cfg, cli.seed, out)?;
            if !cli.quiet {
                println!("wrote {}", out.display());
            }
        }
        Command::Reconstruct { interferogram, args } => {
            let opts = ReconstructOptions {
                config: cli.config.as_deref().map(RunConfig::read).transpose()?,
                tau_fs: args.tau_fs,
                shear_nm: args.shear_nm,
                shear_rad_per_fs: args.shear_rad_per_fs,
                center_nm: args.center_nm,
                calibrate_from: args.calibrate_from,
                overrides: ReconstructionConfig {
                    filter_width: args.filter_width_fs,
                    amplitude_floor: args.amplitude_floor,
                    integration_method: args.integration.map(|m| match m {
                        Method::Midpoint => IntegrationMethod::MidpointIntegration,
                        Method::Concatenation => IntegrationMethod::Concatenation,
                    }),
                    ..Default::default()
                },
            };
            let r = cli::cmd_reconstruct(&interferogram, &opts, out)?;
            if !cli.quiet {
                let c = r.coefficients;
                println!(
                    "phi2 = {:.4e} ± {:.1e} fs^2, phi3 = {:.4e} ± {:.1e} fs^3, tau = {} fs",
                    c.phi2_fs2, c.phi2_fs2_stderr, c.phi3_fs3, c.phi3_fs3_stderr, r.diagnostics.tau_fs_used
                );
            }
        }
        Command::Analyze { result, truth, wigner } => {
            let report = cli::cmd_analyze(&result, truth.as_deref(), wigner, out)?;
            if !cli.quiet {
                println!("{}", serde_json::to_string_pretty(&report)?);
            }
        }
        Command::Pipeline { preset, compare } => {
            let cfg = base_config(cli.config.as_deref(), preset.as_deref())?;
            let other = compare.as_deref().map(cli::load_config).transpose()?;
            let summary = cli::cmd_pipeline(&cfg, other.as_ref(), cli.trials, cli.seed, out)?;
            if !cli.quiet {
                print!("{}", summary.table());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
