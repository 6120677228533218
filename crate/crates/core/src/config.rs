//! Run configuration (JSON) and the bundled presets.

use crate::error::{Error, Result};
use crate::grid::{make_grid, SpectralGrid};
use crate::interferometer::ShearConfig;
use crate::reconstruction::{FilterShape, FtsiSettings, IntegrationMethod};
use crate::synthesis::PulseSpec;
use crate::units::{shear_nm_to_omega, wavelength_to_omega};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Names accepted by [`RunConfig::preset`].
pub const PRESET_NAMES: [&str; 4] = ["paper-quadratic", "paper-compensated", "paper-v", "paper-lambda"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// Grid centre; defaults to the pulse centre wavelength.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center_nm: Option<f64>,
    /// Grid span in units of the pulse's spectral FWHM (in ω).
    #[serde(default = "default_span_factor")]
    pub span_factor: f64,
    #[serde(default = "default_points")]
    pub n_points: usize,
}

fn default_span_factor() -> f64 {
    10.0
}

fn default_points() -> usize {
    4096
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            center_nm: None,
            span_factor: default_span_factor(),
            n_points: default_points(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterferometerConfig {
    /// Shear as a wavelength shift at the pulse centre (positive: towards
    /// shorter wavelengths).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shear_nm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shear_rad_per_fs: Option<f64>,
    #[serde(default = "default_delay")]
    pub delay_fs: f64,
    #[serde(default = "default_counts")]
    pub total_counts: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub noiseless: bool,
}

fn default_delay() -> f64 {
    10_000.0
}

fn default_counts() -> u64 {
    1_000_000
}

/// Reconstruction options; unset fields take the [`FtsiSettings::for_delay`]
/// defaults for the configured delay.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconstructionConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filter_center: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filter_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filter_shape: Option<FilterShape>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude_floor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integration_method: Option<IntegrationMethod>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correct_spectral_bias: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier_omega: Option<f64>,
}

impl ReconstructionConfig {
    pub fn settings(&self, tau: f64) -> FtsiSettings {
        let d = FtsiSettings::for_delay(tau);
        FtsiSettings {
            filter_center: self.filter_center.unwrap_or(d.filter_center),
            filter_width: self.filter_width.unwrap_or(d.filter_width),
            filter_shape: self.filter_shape.unwrap_or(d.filter_shape),
            amplitude_floor: self.amplitude_floor.unwrap_or(d.amplitude_floor),
            integration_method: self.integration_method.unwrap_or(d.integration_method),
            correct_spectral_bias: self.correct_spectral_bias.unwrap_or(d.correct_spectral_bias),
            carrier_omega: self.carrier_omega.or(d.carrier_omega),
        }
    }
}

/// Artifact toggles. `dir` is the default output directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    #[serde(default = "yes")]
    pub spectrum: bool,
    #[serde(default = "yes")]
    pub phase: bool,
    #[serde(default)]
    pub wigner: bool,
    #[serde(default = "yes")]
    pub temporal: bool,
}

fn yes() -> bool {
    true
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: None,
            spectrum: true,
            phase: true,
            wigner: false,
            temporal: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub pulse: PulseSpec,
    #[serde(default)]
    pub grid: GridConfig,
    pub interferometer: InterferometerConfig,
    #[serde(default)]
    pub reconstruction: ReconstructionConfig,
    #[serde(default)]
    pub outputs: OutputConfig,
    /// Reconstruct once, subtract the fitted φ₂ from the source and run again.
    #[serde(default)]
    pub compensate: bool,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        RunConfig::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One of [`PRESET_NAMES`].
    pub fn preset(name: &str) -> Result<Self> {
        let text = match name {
            "paper-quadratic" => include_str!("../presets/paper-quadratic.json"),
            "paper-compensated" => include_str!("../presets/paper-compensated.json"),
            "paper-v" => include_str!("../presets/paper-v.json"),
            "paper-lambda" => include_str!("../presets/paper-lambda.json"),
            other => {
                return Err(Error::Config(format!(
                    "unknown preset '{other}' (available: {})",
                    PRESET_NAMES.join(", ")
                )))
            }
        };
        RunConfig::from_json(text)
    }

    /// Checks every invariant; failures are [`Error::Config`].
    pub fn validate(&self) -> Result<()> {
        let config = |e: Error| match e {
            Error::Config(_) => e,
            other => Error::Config(other.to_string()),
        };
        let i = &self.interferometer;
        match (i.shear_nm, i.shear_rad_per_fs) {
            (Some(_), Some(_)) => return Err(Error::Config("give only one of shear_nm and shear_rad_per_fs".into())),
            (None, None) => return Err(Error::Config("one of shear_nm or shear_rad_per_fs is required".into())),
            _ => {}
        }
        if !i.noiseless && i.seed.is_none() {
            return Err(Error::Config("a seed is required unless the run is noiseless".into()));
        }
        if !(i.delay_fs > 0.0) {
            return Err(Error::Config(format!("delay_fs must be positive, got {}", i.delay_fs)));
        }
        if !i.noiseless && i.total_counts == 0 {
            return Err(Error::Config("total_counts must be positive".into()));
        }
        if !(self.grid.span_factor >= 4.0) {
            return Err(Error::Config(format!(
                "span_factor must be at least 4, got {}",
                self.grid.span_factor
            )));
        }
        self.pulse.validate().map_err(config)?;
        let grid = self.spectral_grid().map_err(config)?;
        self.shear_config().map_err(config)?.validate(&grid).map_err(config)?;
        self.settings().validate().map_err(config)?;
        Ok(())
    }

    pub fn spectral_grid(&self) -> Result<SpectralGrid> {
        let center = wavelength_to_omega(self.grid.center_nm.unwrap_or(self.pulse.center_wavelength_nm))?;
        make_grid(center, self.grid.span_factor * self.pulse.bandwidth_omega()?, self.grid.n_points)
    }

    pub fn shear_omega(&self) -> Result<f64> {
        match (self.interferometer.shear_nm, self.interferometer.shear_rad_per_fs) {
            (Some(nm), None) => shear_nm_to_omega(nm, self.pulse.center_wavelength_nm),
            (None, Some(w)) => Ok(w),
            _ => Err(Error::Config("exactly one shear unit must be given".into())),
        }
    }

    pub fn shear_config(&self) -> Result<ShearConfig> {
        Ok(ShearConfig::new(self.shear_omega()?, self.interferometer.delay_fs))
    }

    pub fn settings(&self) -> FtsiSettings {
        self.reconstruction.settings(self.interferometer.delay_fs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_load() {
        for name in PRESET_NAMES {
            let cfg = RunConfig::preset(name).unwrap();
            assert_eq!(cfg.name.as_deref(), Some(name));
        }
        assert!(matches!(RunConfig::preset("nope"), Err(Error::Config(_))));
        assert!(RunConfig::preset("paper-compensated").unwrap().compensate);
    }

    #[test]
    fn echo_round_trip() {
        let cfg = RunConfig::preset("paper-v").unwrap();
        assert_eq!(RunConfig::from_json(&cfg.to_json().unwrap()).unwrap(), cfg);
    }

    fn minimal(interferometer: &str) -> String {
        format!(
            r#"{{"pulse": {{"center_wavelength_nm": 830, "fwhm_wavelength_nm": 8, "phase_kind": "polynomial", "poly_coeffs": [0, 87000]}},
                "interferometer": {interferometer}}}"#
        )
    }

    #[test]
    fn defaults_fill_in() {
        let cfg = RunConfig::from_json(&minimal(r#"{"shear_nm": 0.58, "seed": 1}"#)).unwrap();
        assert_eq!(cfg.grid.n_points, 4096);
        assert_eq!(cfg.interferometer.delay_fs, 10_000.0);
        assert_eq!(cfg.interferometer.total_counts, 1_000_000);
        assert_eq!(cfg.settings(), FtsiSettings::for_delay(10_000.0));
        assert!((cfg.shear_omega().unwrap() - 1.585_887_5e-3).abs() < 1e-9);
    }

    #[test]
    fn invariants_are_enforced() {
        for bad in [
            r#"{"shear_nm": 0.58}"#,
            r#"{"seed": 1}"#,
            r#"{"shear_nm": 0.58, "shear_rad_per_fs": 0.001, "seed": 1}"#,
            r#"{"shear_nm": 0.58, "seed": 1, "delay_fs": -3}"#,
            r#"{"shear_nm": 0.58, "seed": 1, "colour": "red"}"#,
            r#"{"shear_nm": 500, "seed": 1}"#,
        ] {
            let err = RunConfig::from_json(&minimal(bad)).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{bad}: {err}");
        }
        assert!(RunConfig::from_json(&minimal(r#"{"shear_nm": 0.58, "noiseless": true}"#)).is_ok());
    }
}
