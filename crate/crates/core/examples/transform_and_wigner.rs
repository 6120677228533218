//! Spectral/temporal transforms, transform limit and the chronocyclic
//! Wigner function of a chirped Gaussian.

use eosi::analysis::{temporal_profile, transform_limit_ratio};
use eosi::grid::make_grid;
use eosi::synthesis::{synthesize, PulseSpec, SpectralPhase};
use eosi::units::{bandwidth_nm_to_omega, wavelength_to_omega};
use eosi::wigner::{default_axes, wigner};

fn main() -> eosi::error::Result<()> {
    let w0 = wavelength_to_omega(830.0)?;
    let dw = bandwidth_nm_to_omega(8.0, 830.0)?;
    println!("830 nm -> {w0:.6} rad/fs, 8 nm FWHM -> {dw:.6} rad/fs");

    let grid = make_grid(w0, 10.0 * dw, 4096)?;
    let flat = synthesize(&PulseSpec::gaussian(830.0, 8.0, SpectralPhase::flat()), &grid)?;
    let chirped = synthesize(
        &PulseSpec::gaussian(830.0, 8.0, SpectralPhase::Polynomial { poly_coeffs: vec![0.0, 8.7e4] }),
        &grid,
    )?;
    for (name, mode) in [("flat", &flat), ("chirped", &chirped)] {
        let t = mode.to_time_domain();
        let profile = temporal_profile(mode);
        println!(
            "{name:>8}: spectral norm {:.12}, temporal norm {:.12}, FWHM {:.1} fs, ratio to transform limit {:.3}",
            mode.norm(),
            t.norm(),
            profile.fwhm_fs,
            transform_limit_ratio(mode)
        );
    }

    let (t_axis, omega_axis) = default_axes(&chirped, 96, 96, 1e-3);
    let map = wigner(&chirped, &t_axis, &omega_axis)?;
    println!(
        "Wigner map {}x{}: total {:.6}, minimum {:.3e}",
        t_axis.len(),
        omega_axis.len(),
        map.total(),
        map.min()
    );
    Ok(())
}
