//! Records the two interferometer outputs, ideal and with photon counting,
//! and writes the counted record as CSV.

use eosi::grid::make_grid;
use eosi::interferometer::{detect_counts, ideal_interferogram, ShearConfig};
use eosi::synthesis::{synthesize, PulseSpec, SpectralPhase};
use eosi::units::shear_nm_to_omega;

fn main() -> eosi::error::Result<()> {
    let spec = PulseSpec::gaussian(830.0, 8.0, SpectralPhase::Polynomial { poly_coeffs: vec![0.0, 8.7e4, 5.0e5] });
    let grid = make_grid(spec.carrier_omega()?, 10.0 * spec.bandwidth_omega()?, 4096)?;
    let mode = synthesize(&spec, &grid)?;
    let config = ShearConfig::new(shear_nm_to_omega(0.58, 830.0)?, 10_000.0);

    let ideal = ideal_interferogram(&mode, config)?;
    let counts = detect_counts(&ideal, 1_000_000, 7)?;
    let total: f64 = counts.sum().iter().sum();
    let peak = counts.plus.iter().cloned().fold(0.0, f64::max);
    println!("shear {:.4e} rad/fs, delay {} fs", config.shear, config.delay);
    println!("{total} photons detected, busiest bin of the + output holds {peak}");

    let path = std::env::temp_dir().join("eosi_interferogram.csv");
    counts.write_csv(std::fs::File::create(&path)?)?;
    println!("wrote {}", path.display());
    Ok(())
}
