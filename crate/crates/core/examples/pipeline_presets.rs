//! Runs every bundled preset through the full pipeline and writes the
//! artifacts under the system temp directory.

use eosi::cli::cmd_pipeline;
use eosi::config::{RunConfig, PRESET_NAMES};

fn main() -> eosi::error::Result<()> {
    let root = std::env::temp_dir().join("eosi_presets");
    for name in PRESET_NAMES {
        let cfg = RunConfig::preset(name)?;
        let summary = cmd_pipeline(&cfg, None, 5, None, &root.join(name))?;
        print!("{}", summary.table());
    }
    println!("artifacts in {}", root.display());
    Ok(())
}
