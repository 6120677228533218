//! Reconstructs the dispersed single-photon mode and compares the fitted
//! Taylor coefficients with the imprinted ones.

use eosi::grid::make_grid;
use eosi::interferometer::{detect_counts, ideal_interferogram, ShearConfig};
use eosi::mode::mode_overlap;
use eosi::reconstruction::{reconstruct, FtsiSettings};
use eosi::synthesis::{synthesize, PulseSpec, SpectralPhase};
use eosi::units::shear_nm_to_omega;

fn main() -> eosi::error::Result<()> {
    let spec = PulseSpec::gaussian(830.0, 8.0, SpectralPhase::Polynomial { poly_coeffs: vec![0.0, 8.7e4, 5.0e5] });
    let grid = make_grid(spec.carrier_omega()?, 10.0 * spec.bandwidth_omega()?, 4096)?;
    let truth = synthesize(&spec, &grid)?;
    let config = ShearConfig::new(shear_nm_to_omega(0.58, 830.0)?, 10_000.0);
    let settings = FtsiSettings::for_delay(config.delay);

    let ideal = ideal_interferogram(&truth, config)?;
    for (label, record) in [("noiseless", ideal.clone()), ("1e6 counts", detect_counts(&ideal, 1_000_000, 3)?)] {
        let r = reconstruct(&record, config, &settings)?;
        let c = r.coefficients;
        println!(
            "{label:>10}: φ₂ = {:.4e} ± {:.1e} fs², φ₃ = {:.4e} ± {:.1e} fs³, overlap with source {:.6}, visibility {:.3}",
            c.phi2_fs2,
            c.phi2_fs2_stderr,
            c.phi3_fs3,
            c.phi3_fs3_stderr,
            mode_overlap(&r.mode, &truth)?,
            r.diagnostics.visibility
        );
    }
    Ok(())
}
