//! Measures the interferometer delay from a zero-shear record.

use eosi::grid::make_grid;
use eosi::interferometer::{detect_counts, ideal_interferogram, ShearConfig};
use eosi::reconstruction::{calibrate_delay, FtsiSettings};
use eosi::synthesis::{synthesize, PulseSpec, SpectralPhase};

fn main() -> eosi::error::Result<()> {
    let spec = PulseSpec::gaussian(830.0, 8.0, SpectralPhase::Polynomial { poly_coeffs: vec![0.0, 8.7e4] });
    let grid = make_grid(spec.carrier_omega()?, 10.0 * spec.bandwidth_omega()?, 4096)?;
    let mode = synthesize(&spec, &grid)?;
    for tau in [5_000.0, 7_500.0, 10_000.0] {
        let record = detect_counts(&ideal_interferogram(&mode, ShearConfig::new(0.0, tau))?, 1_000_000, 11)?;
        let est = calibrate_delay(&record, &FtsiSettings::for_delay(tau))?;
        println!(
            "true {tau:>7.1} fs -> measured {:.3} ± {:.3} fs (sideband SNR {:.0})",
            est.tau_fs, est.stderr_fs, est.sideband_snr
        );
    }
    Ok(())
}
