//! Synthesizes the four test states of the experiment and prints their
//! temporal structure.

use eosi::analysis::temporal_profile;
use eosi::grid::make_grid;
use eosi::synthesis::{synthesize, PulseSpec, SpectralPhase};

fn main() -> eosi::error::Result<()> {
    let states = [
        ("quadratic + cubic", SpectralPhase::Polynomial { poly_coeffs: vec![0.0, 8.7e4, 5.0e5] }),
        ("cubic only", SpectralPhase::Polynomial { poly_coeffs: vec![0.0, 0.0, 5.0e5] }),
        ("V, +1050 fs", SpectralPhase::VLambda { v_slope_fs: 1050.0 }),
        ("Λ, −1100 fs", SpectralPhase::VLambda { v_slope_fs: -1100.0 }),
    ];
    for (name, phase) in states {
        let spec = PulseSpec::gaussian(830.0, 8.0, phase);
        let grid = make_grid(spec.carrier_omega()?, 10.0 * spec.bandwidth_omega()?, 8192)?;
        let mode = synthesize(&spec, &grid)?;
        let p = temporal_profile(&mode);
        let peaks: Vec<String> = p.peak_times_fs.iter().map(|t| format!("{t:.0}")).collect();
        println!(
            "{name:<18} FWHM {:>7.1} fs, {} peak(s) at [{}] fs",
            p.fwhm_fs,
            p.peak_count,
            peaks.join(", ")
        );
    }
    Ok(())
}
