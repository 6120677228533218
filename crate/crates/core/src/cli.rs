//! Command implementations behind the `eosi` binary: simulate, reconstruct,
//! analyze and the end-to-end pipeline.

use crate::analysis::{orthogonality_report, temporal_profile, transform_limited, OrthogonalityReport};
use crate::config::{ReconstructionConfig, RunConfig};
use crate::error::{Error, Result};
use crate::interferometer::{detect_counts, ideal_interferogram, Interferogram, ShearConfig};
use crate::mode::{mode_overlap, ModeRecord, SpectralMode};
use crate::reconstruction::{
    calibrate_delay, fit_vertex_slope, reconstruct, Coefficients, FtsiSettings, ReconstructionResult, ResultRecord,
};
use crate::synthesis::synthesize;
use crate::units::{omega_to_wavelength, shear_nm_to_omega};
use crate::wigner::{default_axes, wigner};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

pub const INTERFEROGRAM_FILE: &str = "interferogram.csv";
pub const TRUTH_FILE: &str = "truth_mode.json";
pub const CONFIG_ECHO_FILE: &str = "config_echo.json";
pub const RESULT_FILE: &str = "result.json";
pub const REPORT_FILE: &str = "report.json";
pub const WIGNER_FILE: &str = "wigner.csv";
pub const SUMMARY_FILE: &str = "summary.json";

/// Wigner map resolution written by `analyze` and `pipeline`.
const WIGNER_SIZE: usize = 128;

/// Stream reserved for the second (compensated) detection of a run.
const COMPENSATION_STREAM: u64 = 1;
/// Streams `TRIAL_STREAM + k` seed Monte Carlo trials k ≥ 1.
const TRIAL_STREAM: u64 = 1 << 32;

/// Deterministic child seed for a purpose-specific random stream.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.next_u64()
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = create(path)?;
    f.write_all(text.as_bytes())?;
    f.write_all(b"\n")?;
    f.flush()?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &serde_json::to_string_pretty(value)?)
}

/// Synthesized truth and its (ideal or counted) interferogram.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub config: RunConfig,
    pub truth: SpectralMode,
    pub interferogram: Interferogram,
}

/// Synthesizes the configured pulse and records it. `seed` overrides the
/// configured seed.
pub fn simulate(cfg: &RunConfig, seed: Option<u64>) -> Result<Simulation> {
    let mut config = cfg.clone();
    if seed.is_some() {
        config.interferometer.seed = seed;
    }
    config.validate()?;
    let grid = config.spectral_grid()?;
    let truth = synthesize(&config.pulse, &grid)?;
    let ideal = ideal_interferogram(&truth, config.shear_config()?)?;
    let interferogram = if config.interferometer.noiseless {
        ideal
    } else {
        let seed = config
            .interferometer
            .seed
            .ok_or_else(|| Error::Config("a seed is required unless the run is noiseless".into()))?;
        detect_counts(&ideal, config.interferometer.total_counts as i64, seed)?
    };
    Ok(Simulation {
        config,
        truth,
        interferogram,
    })
}

fn write_simulation(sim: &Simulation, dir: &Path) -> Result<()> {
    sim.interferogram.write_csv(create(&dir.join(INTERFEROGRAM_FILE))?)?;
    write_text(&dir.join(TRUTH_FILE), &sim.truth.to_json()?)?;
    write_text(&dir.join(CONFIG_ECHO_FILE), &sim.config.to_json()?)?;
    Ok(())
}

/// `simulate`: writes `interferogram.csv`, `truth_mode.json` and
/// `config_echo.json` into `dir`.
pub fn cmd_simulate(cfg: &RunConfig, seed: Option<u64>, dir: &Path) -> Result<Simulation> {
    let sim = simulate(cfg, seed)?;
    std::fs::create_dir_all(dir)?;
    write_simulation(&sim, dir)?;
    Ok(sim)
}

/// Inputs of `reconstruct` beyond the interferogram itself. Unset values
/// fall back to `config`.
#[derive(Debug, Clone, Default)]
pub struct ReconstructOptions {
    pub config: Option<RunConfig>,
    pub tau_fs: Option<f64>,
    pub shear_nm: Option<f64>,
    pub shear_rad_per_fs: Option<f64>,
    /// Reference wavelength for `shear_nm`; defaults to the configured pulse
    /// centre, then to the centroid of the recorded spectrum.
    pub center_nm: Option<f64>,
    /// Zero-shear interferogram from which τ is calibrated.
    pub calibrate_from: Option<PathBuf>,
    pub overrides: ReconstructionConfig,
}

fn read_interferogram(path: &Path, config: ShearConfig) -> Result<Interferogram> {
    Interferogram::read_csv(BufReader::new(File::open(path)?), config)
}

fn sum_centroid(interf: &Interferogram) -> f64 {
    let sum = interf.sum();
    let total: f64 = sum.iter().sum();
    sum.iter().enumerate().map(|(i, v)| v * interf.grid.omega(i)).sum::<f64>() / total
}

fn merge(base: &ReconstructionConfig, over: &ReconstructionConfig) -> ReconstructionConfig {
    ReconstructionConfig {
        filter_center: over.filter_center.or(base.filter_center),
        filter_width: over.filter_width.or(base.filter_width),
        filter_shape: over.filter_shape.or(base.filter_shape),
        amplitude_floor: over.amplitude_floor.or(base.amplitude_floor),
        integration_method: over.integration_method.or(base.integration_method),
        correct_spectral_bias: over.correct_spectral_bias.or(base.correct_spectral_bias),
        carrier_omega: over.carrier_omega.or(base.carrier_omega),
    }
}

/// Reconstructs a stored interferogram.
pub fn reconstruct_file(path: &Path, opts: &ReconstructOptions) -> Result<ReconstructionResult> {
    let placeholder = ShearConfig::new(0.0, 0.0);
    let mut interf = read_interferogram(path, placeholder)?;
    let cfg = opts.config.as_ref();

    let base = cfg.map(|c| c.reconstruction.clone()).unwrap_or_default();
    let recon = merge(&base, &opts.overrides);

    let tau = match (&opts.calibrate_from, opts.tau_fs) {
        (Some(cal), guess) => {
            let zero = read_interferogram(cal, placeholder)?;
            let guess = guess
                .or(cfg.map(|c| c.interferometer.delay_fs))
                .unwrap_or(zero.grid.time_window() / 4.0);
            calibrate_delay(&zero, &recon.settings(guess))?.tau_fs
        }
        (None, Some(t)) => t,
        (None, None) => cfg
            .map(|c| c.interferometer.delay_fs)
            .ok_or_else(|| Error::Config("the delay is unknown: give --tau-fs, --calibrate-from or --config".into()))?,
    };

    let shear = match (opts.shear_rad_per_fs, opts.shear_nm) {
        (Some(_), Some(_)) => return Err(Error::Config("give only one of the shear flags".into())),
        (Some(w), None) => w,
        (None, Some(nm)) => {
            let center = match (opts.center_nm, cfg) {
                (Some(c), _) => c,
                (None, Some(c)) => c.pulse.center_wavelength_nm,
                (None, None) => omega_to_wavelength(sum_centroid(&interf))?,
            };
            shear_nm_to_omega(nm, center)?
        }
        (None, None) => cfg
            .ok_or_else(|| Error::Config("the shear is unknown: give a shear flag or --config".into()))?
            .shear_omega()?,
    };
    let config = ShearConfig::new(shear, tau);
    config.validate(&interf.grid)?;
    interf.config = config;

    let mut settings: FtsiSettings = recon.settings(tau);
    if recon.filter_center.is_none() {
        settings.filter_center = tau;
    }
    reconstruct(&interf, config, &settings)
}

/// `reconstruct`: writes `result.json` into `dir`.
pub fn cmd_reconstruct(path: &Path, opts: &ReconstructOptions, dir: &Path) -> Result<ReconstructionResult> {
    let result = reconstruct_file(path, opts)?;
    std::fs::create_dir_all(dir)?;
    write_text(&dir.join(RESULT_FILE), &result.to_json()?)?;
    Ok(result)
}

/// Summary written by `analyze`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub fwhm_fs: f64,
    pub transform_limit_fwhm_fs: f64,
    pub transform_limit_ratio: f64,
    pub peak_count: usize,
    pub peak_times_fs: Vec<f64>,
    pub coefficients: Coefficients,
    /// Slopes of a `|ω−ω₀|` fit about the carrier (V/Λ phases).
    pub vertex_slope_fs: f64,
    pub vertex_slope_stderr_fs: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overlap_with_truth: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<OrthogonalityReport>,
}

pub fn analyze(result: &ReconstructionResult, reference: Option<&SpectralMode>) -> Result<AnalysisReport> {
    let profile = temporal_profile(&result.mode);
    let limit = temporal_profile(&transform_limited(&result.mode));
    let weights: Vec<f64> = result
        .mode
        .intensity()
        .iter()
        .zip(&result.valid_mask)
        .map(|(&s, &m)| if m { s } else { 0.0 })
        .collect();
    let (slope, slope_err) = fit_vertex_slope(
        &result.phase,
        &weights,
        result.mode.grid(),
        result.diagnostics.carrier_omega,
    )?;
    let comparison = reference.map(|r| orthogonality_report(&result.mode, r)).transpose()?;
    Ok(AnalysisReport {
        fwhm_fs: profile.fwhm_fs,
        transform_limit_fwhm_fs: limit.fwhm_fs,
        transform_limit_ratio: profile.fwhm_fs / limit.fwhm_fs,
        peak_count: profile.peak_count,
        peak_times_fs: profile.peak_times_fs,
        coefficients: result.coefficients,
        vertex_slope_fs: slope,
        vertex_slope_stderr_fs: slope_err,
        overlap_with_truth: comparison.map(|c| c.overlap),
        comparison,
    })
}

/// Loads a mode from either a mode JSON (`truth_mode.json`) or a result JSON.
pub fn read_any_mode(path: &Path) -> Result<SpectralMode> {
    let text = std::fs::read_to_string(path)?;
    if let Ok(record) = serde_json::from_str::<ModeRecord>(&text) {
        return record.into_mode();
    }
    match serde_json::from_str::<ResultRecord>(&text) {
        Ok(_) => Ok(ReconstructionResult::from_json(&text)?.mode),
        Err(e) => Err(Error::Schema(format!("{}: neither a mode nor a result file ({e})", path.display()))),
    }
}

fn write_wigner(mode: &SpectralMode, path: &Path) -> Result<()> {
    let (t_axis, omega_axis) = default_axes(mode, WIGNER_SIZE, WIGNER_SIZE, 1e-3);
    wigner(mode, &t_axis, &omega_axis)?.write_csv(create(path)?)
}

/// `analyze`: writes `report.json` (and `wigner.csv` if asked) into `dir`.
pub fn cmd_analyze(result_path: &Path, truth: Option<&Path>, with_wigner: bool, dir: &Path) -> Result<AnalysisReport> {
    let result = ReconstructionResult::read_json(result_path)?;
    let reference = truth.map(read_any_mode).transpose()?;
    let report = analyze(&result, reference.as_ref())?;
    std::fs::create_dir_all(dir)?;
    write_json(&dir.join(REPORT_FILE), &report)?;
    if with_wigner {
        write_wigner(&result.mode, &dir.join(WIGNER_FILE))?;
    }
    Ok(report)
}

/// Everything produced by one simulate-and-reconstruct run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub simulation: Simulation,
    pub result: ReconstructionResult,
    pub report: AnalysisReport,
    /// First-pass coefficients when the run was compensated.
    pub uncompensated: Option<Coefficients>,
}

fn simulate_and_reconstruct(cfg: &RunConfig, seed: Option<u64>) -> Result<(Simulation, ReconstructionResult)> {
    let sim = simulate(cfg, seed)?;
    let result = reconstruct(&sim.interferogram, sim.config.shear_config()?, &sim.config.settings())?;
    Ok((sim, result))
}

/// Simulates and reconstructs `cfg` once; with `compensate`, the fitted φ₂
/// is subtracted from the source and the measurement repeated.
pub fn run_once(cfg: &RunConfig, seed: Option<u64>) -> Result<RunOutcome> {
    let (mut sim, mut result) = simulate_and_reconstruct(cfg, seed)?;
    let mut uncompensated = None;
    if cfg.compensate {
        let first = result.coefficients;
        let mut second = sim.config.clone();
        second.pulse = second.pulse.with_added_phi2(-first.phi2_fs2)?;
        second.compensate = false;
        let stage_seed = second.interferometer.seed.map(|s| derive_seed(s, COMPENSATION_STREAM));
        let (s2, r2) = simulate_and_reconstruct(&second, stage_seed)?;
        sim = s2;
        result = r2;
        uncompensated = Some(first);
    }
    let report = analyze(&result, Some(&sim.truth))?;
    Ok(RunOutcome {
        simulation: sim,
        result,
        report,
        uncompensated,
    })
}

/// Seed of Monte Carlo trial `k`; trial 0 uses the configured seed.
pub fn trial_seed(seed: u64, k: usize) -> u64 {
    if k == 0 {
        seed
    } else {
        derive_seed(seed, TRIAL_STREAM + k as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Statistic {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl Statistic {
    pub fn of(values: &[f64]) -> Statistic {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = if values.len() > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Statistic {
            mean,
            std: var.sqrt(),
            min: values.iter().cloned().fold(f64::INFINITY, f64::min),
            max: values.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub seed: Option<u64>,
    pub phi1_fs: f64,
    pub phi2_fs2: f64,
    pub phi2_fs2_stderr: f64,
    pub phi3_fs3: f64,
    pub phi3_fs3_stderr: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uncompensated_phi2_fs2: Option<f64>,
    pub vertex_slope_fs: f64,
    pub overlap_with_truth: f64,
    pub fwhm_fs: f64,
    pub transform_limit_ratio: f64,
    pub peak_count: usize,
    pub visibility: f64,
    pub sideband_snr: f64,
}

impl TrialSummary {
    fn of(outcome: &RunOutcome) -> TrialSummary {
        let c = &outcome.result.coefficients;
        let r = &outcome.report;
        TrialSummary {
            seed: if outcome.simulation.config.interferometer.noiseless {
                None
            } else {
                outcome.simulation.config.interferometer.seed
            },
            phi1_fs: c.phi1_fs,
            phi2_fs2: c.phi2_fs2,
            phi2_fs2_stderr: c.phi2_fs2_stderr,
            phi3_fs3: c.phi3_fs3,
            phi3_fs3_stderr: c.phi3_fs3_stderr,
            uncompensated_phi2_fs2: outcome.uncompensated.map(|u| u.phi2_fs2),
            vertex_slope_fs: r.vertex_slope_fs,
            overlap_with_truth: r.overlap_with_truth.unwrap_or(f64::NAN),
            fwhm_fs: r.fwhm_fs,
            transform_limit_ratio: r.transform_limit_ratio,
            peak_count: r.peak_count,
            visibility: outcome.result.diagnostics.visibility,
            sideband_snr: outcome.result.diagnostics.sideband_snr,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub name: String,
    pub trials: Vec<TrialSummary>,
    pub phi2_fs2: Statistic,
    pub phi3_fs3: Statistic,
    pub vertex_slope_fs: Statistic,
    pub overlap_with_truth: Statistic,
}

impl RunSummary {
    fn of(name: String, outcomes: &[RunOutcome]) -> RunSummary {
        let trials: Vec<TrialSummary> = outcomes.iter().map(TrialSummary::of).collect();
        let stat = |f: fn(&TrialSummary) -> f64| Statistic::of(&trials.iter().map(f).collect::<Vec<_>>());
        RunSummary {
            name,
            phi2_fs2: stat(|t| t.phi2_fs2),
            phi3_fs3: stat(|t| t.phi3_fs3),
            vertex_slope_fs: stat(|t| t.vertex_slope_fs),
            overlap_with_truth: stat(|t| t.overlap_with_truth),
            trials,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineSummary {
    pub run: RunSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare: Option<RunSummary>,
    /// Orthogonality of the two reconstructed modes (first trial of each).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<OrthogonalityReport>,
    /// The same for the two source modes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truth_comparison: Option<OrthogonalityReport>,
}

impl PipelineSummary {
    /// Plain-text table for the terminal.
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:<20} {:>6} {:>24} {:>24} {:>18} {:>10}\n",
            "run", "trials", "phi2 (fs^2)", "phi3 (fs^3)", "vertex slope (fs)", "overlap"
        );
        for run in std::iter::once(&self.run).chain(&self.compare) {
            out += &format!(
                "{:<20} {:>6} {:>24} {:>24} {:>18} {:>10.6}\n",
                run.name,
                run.trials.len(),
                format!("{:.4e} ± {:.1e}", run.phi2_fs2.mean, run.phi2_fs2.std),
                format!("{:.4e} ± {:.1e}", run.phi3_fs3.mean, run.phi3_fs3.std),
                format!("{:.1} ± {:.1}", run.vertex_slope_fs.mean, run.vertex_slope_fs.std),
                run.overlap_with_truth.mean
            );
            if let Some(u) = run.trials.first().and_then(|t| t.uncompensated_phi2_fs2) {
                out += &format!("{:<20} first-pass phi2 {u:.4e} fs^2 subtracted\n", "");
            }
        }
        if let Some(c) = &self.comparison {
            out += &format!(
                "reconstructed overlap {:.4}  spectral L1 {:.4}  temporal L1 {:.4}\n",
                c.overlap, c.spectral_distance, c.temporal_distance
            );
        }
        if let Some(c) = &self.truth_comparison {
            out += &format!(
                "source overlap        {:.4}  spectral L1 {:.4}  temporal L1 {:.4}\n",
                c.overlap, c.spectral_distance, c.temporal_distance
            );
        }
        out
    }
}

/// Runs `trials` seeds of `cfg` in parallel; trial order is preserved.
pub fn run_trials(cfg: &RunConfig, trials: usize, seed: Option<u64>) -> Result<Vec<RunOutcome>> {
    let trials = trials.max(1);
    let base = seed.or(cfg.interferometer.seed);
    (0..trials)
        .into_par_iter()
        .map(|k| run_once(cfg, base.map(|s| trial_seed(s, k))))
        .collect()
}

fn write_columns(path: &Path, header: &[&str], columns: &[Vec<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(header).map_err(|e| Error::Io(e.into()))?;
    let rows = columns.first().map_or(0, Vec::len);
    for i in 0..rows {
        w.write_record(columns.iter().map(|c| format!("{:.17e}", c[i])))
            .map_err(|e| Error::Io(e.into()))?;
    }
    w.flush()?;
    Ok(())
}

fn write_run_artifacts(outcome: &RunOutcome, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let sim = &outcome.simulation;
    let result = &outcome.result;
    write_simulation(sim, dir)?;
    write_text(&dir.join(RESULT_FILE), &result.to_json()?)?;
    write_json(&dir.join(REPORT_FILE), &outcome.report)?;
    let outputs = &sim.config.outputs;
    let omegas = sim.truth.grid().omegas();
    if outputs.spectrum {
        write_columns(
            &dir.join("spectrum.csv"),
            &["omega_rad_per_fs", "truth_intensity", "recovered_intensity"],
            &[omegas.clone(), sim.truth.intensity(), result.mode.intensity()],
        )?;
    }
    if outputs.phase {
        let valid = result.valid_mask.iter().map(|&m| if m { 1.0 } else { 0.0 }).collect();
        write_columns(
            &dir.join("phase.csv"),
            &["omega_rad_per_fs", "truth_phase_rad", "recovered_phase_rad", "valid"],
            &[omegas, sim.truth.phase(), result.phase.clone(), valid],
        )?;
    }
    if outputs.temporal {
        let truth_t = sim.truth.to_time_domain();
        write_columns(
            &dir.join("temporal.csv"),
            &["t_fs", "truth_intensity", "recovered_intensity"],
            &[truth_t.times(), truth_t.intensity(), result.mode.to_time_domain().intensity()],
        )?;
    }
    if outputs.wigner {
        write_wigner(&result.mode, &dir.join(WIGNER_FILE))?;
    }
    Ok(())
}

/// `pipeline`: simulate, reconstruct and analyze `cfg` (and `compare`, if
/// given) over `trials` seeds. Artifacts of the first trial go to `dir`
/// (the compared run's to `dir/compare`); `summary.json` holds all trials.
pub fn cmd_pipeline(
    cfg: &RunConfig,
    compare: Option<&RunConfig>,
    trials: usize,
    seed: Option<u64>,
    dir: &Path,
) -> Result<PipelineSummary> {
    let name = |c: &RunConfig, fallback: &str| c.name.clone().unwrap_or_else(|| fallback.to_string());
    let outcomes = run_trials(cfg, trials, seed)?;
    let other = compare.map(|c| run_trials(c, trials, seed)).transpose()?;

    write_run_artifacts(&outcomes[0], dir)?;
    if let Some(o) = &other {
        write_run_artifacts(&o[0], &dir.join("compare"))?;
    }
    let comparison = other
        .as_ref()
        .map(|o| orthogonality_report(&outcomes[0].result.mode, &o[0].result.mode))
        .transpose()?;
    let truth_comparison = other
        .as_ref()
        .map(|o| orthogonality_report(&outcomes[0].simulation.truth, &o[0].simulation.truth))
        .transpose()?;
    let summary = PipelineSummary {
        run: RunSummary::of(name(cfg, "run"), &outcomes),
        compare: compare.zip(other.as_ref()).map(|(c, o)| RunSummary::of(name(c, "compare"), o)),
        comparison,
        truth_comparison,
    };
    write_json(&dir.join(SUMMARY_FILE), &summary)?;
    Ok(summary)
}

/// Overlap of a reconstruction with its source; convenience for examples.
pub fn fidelity(outcome: &RunOutcome) -> Result<f64> {
    mode_overlap(&outcome.result.mode, &outcome.simulation.truth)
}

/// Resolves `name_or_path` as a preset name or a config file.
pub fn load_config(name_or_path: &str) -> Result<RunConfig> {
    if crate::config::PRESET_NAMES.contains(&name_or_path) {
        RunConfig::preset(name_or_path)
    } else {
        RunConfig::read(name_or_path)
    }
}
