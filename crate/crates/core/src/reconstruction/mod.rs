//! Self-referenced recovery of ψ̃(ω) from sheared interferograms.
//!
//! The pipeline is: summed outputs → spectrum; fringe analysis of the
//! difference record → `Δφ(ω) = φ(ω) − φ(ω+Ω)`; integration over the shear
//! → φ(ω); weighted polynomial fit → Taylor coefficients.

mod fit;
mod fringe;
mod integrate;
mod unwrap;

pub use fit::{fit_phase_polynomial, fit_vertex_slope, PolynomialFit};
pub use fringe::{
    calibrate_delay, extract_phase_difference, extract_phase_difference_from, DelayEstimate, FringeDiagnostics,
    PhaseDifference, Sideband, MIN_SIDEBAND_SNR,
};
pub use integrate::{integrate_phase, IntegrationMethod};
pub use unwrap::{unwrap_masked, wrap};

use crate::error::{Error, Result};
use crate::grid::SpectralGrid;
use crate::interferometer::{Interferogram, ShearConfig};
use crate::mode::SpectralMode;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Sideband filter profile in the delay domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FilterShape {
    Rectangular,
    /// `exp(−ln2·|2Δt/width|^order)`; `width` is the FWHM.
    SuperGaussian { order: u32 },
}

/// Algorithmic choices of the Fourier-transform fringe analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FtsiSettings {
    /// Expected sideband delay (fs); the filter locks onto the strongest
    /// peak within `filter_center ± filter_width/2`.
    pub filter_center: f64,
    /// Filter FWHM (fs).
    pub filter_width: f64,
    pub filter_shape: FilterShape,
    /// Bins below this fraction of the peak spectrum are masked.
    pub amplitude_floor: f64,
    pub integration_method: IntegrationMethod,
    /// Re-centre the recovered spectrum by the Ω/2 offset that summing the
    /// two sheared outputs introduces.
    #[serde(default = "default_true")]
    pub correct_spectral_bias: bool,
    /// Carrier used as phase anchor and fit centre; estimated from the
    /// spectrum when absent.
    #[serde(default)]
    pub carrier_omega: Option<f64>,
}

fn default_true() -> bool {
    true
}

impl FtsiSettings {
    /// Defaults for delay `tau`: super-Gaussian of order 6 with FWHM τ/3,
    /// a 2 % amplitude floor and midpoint integration.
    pub fn for_delay(tau: f64) -> Self {
        FtsiSettings {
            filter_center: tau,
            filter_width: tau / 3.0,
            filter_shape: FilterShape::SuperGaussian { order: 6 },
            amplitude_floor: 0.02,
            integration_method: IntegrationMethod::MidpointIntegration,
            correct_spectral_bias: true,
            carrier_omega: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.filter_width > 0.0 && self.filter_width < self.filter_center) {
            return Err(Error::invalid(format!(
                "need 0 < filter_width < filter_center, got width {} and centre {}",
                self.filter_width, self.filter_center
            )));
        }
        if !(self.amplitude_floor > 0.0 && self.amplitude_floor < 1.0) {
            return Err(Error::invalid(format!(
                "amplitude_floor must lie in (0, 1), got {}",
                self.amplitude_floor
            )));
        }
        if let FilterShape::SuperGaussian { order } = self.filter_shape {
            if order == 0 {
                return Err(Error::invalid("super-Gaussian order must be positive"));
            }
        }
        Ok(())
    }
}

/// Fitted Taylor coefficients with standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub phi1_fs: f64,
    pub phi1_fs_stderr: f64,
    pub phi2_fs2: f64,
    pub phi2_fs2_stderr: f64,
    pub phi3_fs3: f64,
    pub phi3_fs3_stderr: f64,
}

impl From<&PolynomialFit> for Coefficients {
    fn from(f: &PolynomialFit) -> Self {
        Coefficients {
            phi1_fs: f.coefficient(1),
            phi1_fs_stderr: f.error(1),
            phi2_fs2: f.coefficient(2),
            phi2_fs2_stderr: f.error(2),
            phi3_fs3: f.coefficient(3),
            phi3_fs3_stderr: f.error(3),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub visibility: f64,
    pub sideband_snr: f64,
    pub tau_fs_used: f64,
    pub shear_rad_per_fs_used: f64,
    pub sideband_peak_fs: f64,
    pub carrier_omega: f64,
    /// Centroid offset of the summed-output spectrum relative to S(ω), −Ω/2.
    pub spectral_bias_rad_per_fs: f64,
    pub spectral_bias_corrected: bool,
}

/// Output of [`reconstruct`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult {
    /// Recovered, normalized mode with `Arg ψ̃(ω₀) = 0`.
    pub mode: SpectralMode,
    /// Unwrapped spectral phase (rad), anchored at the carrier.
    pub phase: Vec<f64>,
    /// `Δφ(ω) = φ(ω) − φ(ω+Ω)` after carrier removal.
    pub phase_difference: Vec<f64>,
    pub valid_mask: Vec<bool>,
    pub coefficients: Coefficients,
    pub diagnostics: Diagnostics,
}

/// JSON layout of a [`ReconstructionResult`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultRecord {
    pub omega_rad_per_fs: Vec<f64>,
    pub amplitude_abs: Vec<f64>,
    pub phase_rad: Vec<f64>,
    pub valid_mask: Vec<bool>,
    #[serde(default)]
    pub phase_difference_rad: Vec<f64>,
    pub coefficients: Coefficients,
    pub diagnostics: Diagnostics,
}

impl ReconstructionResult {
    pub fn to_record(&self) -> ResultRecord {
        ResultRecord {
            omega_rad_per_fs: self.mode.grid().omegas(),
            amplitude_abs: self.mode.magnitude(),
            phase_rad: self.phase.clone(),
            valid_mask: self.valid_mask.clone(),
            phase_difference_rad: self.phase_difference.clone(),
            coefficients: self.coefficients,
            diagnostics: self.diagnostics,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_record())?)
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: ResultRecord = serde_json::from_str(text)?;
        let n = r.omega_rad_per_fs.len();
        if r.amplitude_abs.len() != n || r.phase_rad.len() != n || r.valid_mask.len() != n {
            return Err(Error::Schema(
                "result arrays omega/amplitude/phase/valid_mask differ in length".into(),
            ));
        }
        if !r.phase_difference_rad.is_empty() && r.phase_difference_rad.len() != n {
            return Err(Error::Schema("phase_difference_rad has the wrong length".into()));
        }
        let grid = SpectralGrid::from_omegas(&r.omega_rad_per_fs).map_err(|e| Error::Schema(e.to_string()))?;
        let mode = SpectralMode::from_polar(grid, &r.amplitude_abs, &r.phase_rad)?;
        Ok(ReconstructionResult {
            mode,
            phase: r.phase_rad,
            phase_difference: r.phase_difference_rad,
            valid_mask: r.valid_mask,
            coefficients: r.coefficients,
            diagnostics: r.diagnostics,
        })
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        ReconstructionResult::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Summed outputs `S⁺ + S⁻`, normalized to unit integral.
///
/// This estimates `½[S(ω) + S(ω+Ω)]`, whose centroid sits Ω/2 below that
/// of S(ω).
pub fn recover_spectrum(interf: &Interferogram) -> Result<Vec<f64>> {
    let sum = interf.sum();
    let total: f64 = sum.iter().sum::<f64>() * interf.grid.omega_step();
    if !(total > 0.0) {
        return Err(Error::Degenerate("interferogram outputs are all zero".into()));
    }
    Ok(sum.iter().map(|v| (v / total).max(0.0)).collect())
}

fn centroid(grid: &SpectralGrid, values: &[f64]) -> f64 {
    let total: f64 = values.iter().sum();
    values.iter().enumerate().map(|(i, v)| v * grid.omega(i)).sum::<f64>() / total
}

/// Full reconstruction of the mode from one interferogram.
pub fn reconstruct(interf: &Interferogram, config: ShearConfig, settings: &FtsiSettings) -> Result<ReconstructionResult> {
    settings.validate()?;
    let grid = interf.grid;
    config.validate(&grid)?;
    let summed = recover_spectrum(interf)?;
    let pd = extract_phase_difference(interf, settings, config.delay)?;
    let mut delta_phi = pd.values.clone();
    let edge_span = ((2.0 * config.shear / grid.omega_step()).abs().round() as usize).max(8);
    integrate::extend_edges(&mut delta_phi, &pd.valid_mask, edge_span);

    let bias = -config.shear / 2.0;
    let carrier = settings
        .carrier_omega
        .unwrap_or_else(|| centroid(&grid, &summed) - bias);
    let phase = integrate_phase(&delta_phi, config.shear, &grid, settings.integration_method, carrier)?;

    let spectrum: Vec<f64> = if settings.correct_spectral_bias {
        let shift = bias / grid.omega_step();
        (0..grid.len())
            .map(|i| {
                let pos = i as f64 + shift;
                if pos < 0.0 || pos > (grid.len() - 1) as f64 {
                    0.0
                } else {
                    integrate::sample_at(&summed, pos).max(0.0)
                }
            })
            .collect()
    } else {
        summed
    };
    let valid_mask = fringe::amplitude_mask(&spectrum, &grid, settings.amplitude_floor, settings.filter_width);
    let weights: Vec<f64> = spectrum
        .iter()
        .zip(&valid_mask)
        .map(|(&s, &m)| if m { s } else { 0.0 })
        .collect();
    let fit = fit_phase_polynomial(&phase, &weights, &grid, carrier, 3)?;

    let magnitude: Vec<f64> = spectrum.iter().map(|s| s.sqrt()).collect();
    let mode = SpectralMode::from_polar(grid, &magnitude, &phase)?;
    Ok(ReconstructionResult {
        mode,
        phase,
        phase_difference: pd.values,
        valid_mask,
        coefficients: Coefficients::from(&fit),
        diagnostics: Diagnostics {
            visibility: pd.diagnostics.visibility,
            sideband_snr: pd.diagnostics.sideband_snr,
            tau_fs_used: config.delay,
            shear_rad_per_fs_used: config.shear,
            sideband_peak_fs: pd.diagnostics.sideband_peak_fs,
            carrier_omega: carrier,
            spectral_bias_rad_per_fs: bias,
            spectral_bias_corrected: settings.correct_spectral_bias,
        },
    })
}
