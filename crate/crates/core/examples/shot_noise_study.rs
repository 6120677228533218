//! Spread of the fitted φ₂ against the number of detected photons.

use eosi::cli::run_trials;
use eosi::config::RunConfig;

fn main() -> eosi::error::Result<()> {
    let base = RunConfig::preset("paper-quadratic")?;
    println!("{:>10} {:>14} {:>12}", "counts", "mean φ₂ (fs²)", "std (fs²)");
    for counts in [10_000u64, 100_000, 1_000_000, 10_000_000] {
        let mut cfg = base.clone();
        cfg.interferometer.total_counts = counts;
        let phi2: Vec<f64> = run_trials(&cfg, 40, None)?
            .iter()
            .map(|o| o.result.coefficients.phi2_fs2)
            .collect();
        let n = phi2.len() as f64;
        let mean = phi2.iter().sum::<f64>() / n;
        let std = (phi2.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        println!("{counts:>10} {mean:>14.1} {std:>12.1}");
    }
    Ok(())
}
