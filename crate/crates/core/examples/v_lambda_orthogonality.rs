//! V- and Λ-phase pulses: same spectrum, nearly orthogonal modes.
//! Compares the source modes with their reconstructions.

use eosi::analysis::orthogonality_report;
use eosi::cli::run_once;
use eosi::config::RunConfig;

fn main() -> eosi::error::Result<()> {
    let v = run_once(&RunConfig::preset("paper-v")?, None)?;
    let l = run_once(&RunConfig::preset("paper-lambda")?, None)?;
    for (name, o) in [("V", &v), ("Λ", &l)] {
        println!(
            "{name}: fitted slope {:.1} ± {:.1} fs, peaks at {:?} fs",
            o.report.vertex_slope_fs, o.report.vertex_slope_stderr_fs, o.report.peak_times_fs
        );
    }
    let source = orthogonality_report(&v.simulation.truth, &l.simulation.truth)?;
    let recon = orthogonality_report(&v.result.mode, &l.result.mode)?;
    for (name, r) in [("source", source), ("reconstructed", recon)] {
        println!(
            "{name:>13}: overlap {:.4}, spectral L1 {:.4}, temporal L1 {:.4}",
            r.overlap, r.spectral_distance, r.temporal_distance
        );
    }
    Ok(())
}
