//! Complex mode functions in the spectral and temporal domains.

use crate::error::{Error, Result};
use crate::fourier;
use crate::grid::SpectralGrid;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Complex spectral amplitude ψ̃(ω) sampled on a [`SpectralGrid`].
///
/// Amplitudes carry units of 1/√(rad/fs) and are normalized so that
/// `Σ|ψ̃(ωᵢ)|²·Δω = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMode {
    grid: SpectralGrid,
    amplitude: Vec<Complex64>,
}

/// Time-domain envelope ψ(t), referenced to the carrier `carrier_omega`
/// (the centre of the spectral grid it came from).
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalMode {
    pub t_start: f64,
    pub t_step: f64,
    pub carrier_omega: f64,
    pub amplitude: Vec<Complex64>,
}

fn sum_sq(values: &[Complex64]) -> f64 {
    values.iter().map(|z| z.norm_sqr()).sum()
}

impl SpectralMode {
    /// Builds a mode from raw samples and normalizes it.
    pub fn new(grid: SpectralGrid, amplitude: Vec<Complex64>) -> Result<Self> {
        if amplitude.len() != grid.len() {
            return Err(Error::invalid(format!(
                "amplitude has {} samples, grid has {}",
                amplitude.len(),
                grid.len()
            )));
        }
        if amplitude.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("amplitude contains non-finite values"));
        }
        let norm = sum_sq(&amplitude) * grid.omega_step();
        if !(norm > 0.0) {
            return Err(Error::Degenerate("mode has zero norm".into()));
        }
        let scale = norm.sqrt().recip();
        let amplitude = amplitude.into_iter().map(|z| z * scale).collect();
        Ok(SpectralMode { grid, amplitude })
    }

    /// Builds a mode from magnitude and phase samples.
    pub fn from_polar(grid: SpectralGrid, magnitude: &[f64], phase: &[f64]) -> Result<Self> {
        if magnitude.len() != phase.len() {
            return Err(Error::invalid(format!(
                "magnitude has {} samples but phase has {}",
                magnitude.len(),
                phase.len()
            )));
        }
        if magnitude.iter().any(|&m| m < 0.0) {
            return Err(Error::invalid("magnitudes must be non-negative"));
        }
        let amp = magnitude
            .iter()
            .zip(phase)
            .map(|(&m, &p)| Complex64::from_polar(m, p))
            .collect();
        SpectralMode::new(grid, amp)
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn amplitude(&self) -> &[Complex64] {
        &self.amplitude
    }

    /// `Σ|ψ̃|²·Δω`.
    pub fn norm(&self) -> f64 {
        sum_sq(&self.amplitude) * self.grid.omega_step()
    }

    /// Spectral intensity `S(ω) = |ψ̃(ω)|²`.
    pub fn intensity(&self) -> Vec<f64> {
        self.amplitude.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn magnitude(&self) -> Vec<f64> {
        self.amplitude.iter().map(|z| z.norm()).collect()
    }

    /// Wrapped spectral phase `Arg ψ̃(ω)`.
    pub fn phase(&self) -> Vec<f64> {
        self.amplitude.iter().map(|z| z.arg()).collect()
    }

    /// Intensity-weighted mean frequency.
    pub fn centroid(&self) -> f64 {
        let s = self.intensity();
        let total: f64 = s.iter().sum();
        s.iter()
            .enumerate()
            .map(|(i, &v)| v * self.grid.omega(i))
            .sum::<f64>()
            / total
    }

    /// Multiplies every sample by `e^{iθ}`.
    pub fn with_global_phase(&self, theta: f64) -> SpectralMode {
        let rot = Complex64::from_polar(1.0, theta);
        SpectralMode {
            grid: self.grid,
            amplitude: self.amplitude.iter().map(|z| z * rot).collect(),
        }
    }

    /// Removes the global phase so that `Arg ψ̃` vanishes at the sample
    /// nearest `omega`.
    pub fn anchored_at(&self, omega: f64) -> SpectralMode {
        let z = self.amplitude[self.grid.nearest_index(omega)];
        if z.norm() == 0.0 {
            return self.clone();
        }
        self.with_global_phase(-z.arg())
    }

    /// Unitary transform to the time domain.
    pub fn to_time_domain(&self) -> TemporalMode {
        let n = self.grid.len();
        let t_step = self.grid.time_step();
        TemporalMode {
            t_start: -((n / 2) as f64) * t_step,
            t_step,
            carrier_omega: self.grid.center(),
            amplitude: fourier::to_time(&self.amplitude, self.grid.omega_step()),
        }
    }

    /// Same mode with its samples replaced by `f(ω, ψ̃)`; not renormalized.
    pub(crate) fn map_samples(&self, f: impl Fn(f64, Complex64) -> Complex64) -> SpectralMode {
        SpectralMode {
            grid: self.grid,
            amplitude: self
                .amplitude
                .iter()
                .enumerate()
                .map(|(i, &z)| f(self.grid.omega(i), z))
                .collect(),
        }
    }

    pub(crate) fn from_parts_unchecked(grid: SpectralGrid, amplitude: Vec<Complex64>) -> Self {
        debug_assert_eq!(grid.len(), amplitude.len());
        SpectralMode { grid, amplitude }
    }

    pub fn to_record(&self) -> ModeRecord {
        ModeRecord {
            grid: self.grid,
            amplitude_abs: self.magnitude(),
            phase_rad: self.phase(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_record())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: ModeRecord = serde_json::from_str(text)?;
        record.into_mode()
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        SpectralMode::from_json(&std::fs::read_to_string(path)?)
    }
}

/// On-disk form of a [`SpectralMode`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeRecord {
    pub grid: SpectralGrid,
    pub amplitude_abs: Vec<f64>,
    pub phase_rad: Vec<f64>,
}

impl ModeRecord {
    pub fn into_mode(self) -> Result<SpectralMode> {
        if self.amplitude_abs.len() != self.phase_rad.len() {
            return Err(Error::Schema(format!(
                "amplitude_abs has {} entries but phase_rad has {}",
                self.amplitude_abs.len(),
                self.phase_rad.len()
            )));
        }
        if self.amplitude_abs.len() != self.grid.len() {
            return Err(Error::Schema(format!(
                "arrays have {} entries but the grid has {} points",
                self.amplitude_abs.len(),
                self.grid.len()
            )));
        }
        SpectralMode::from_polar(self.grid, &self.amplitude_abs, &self.phase_rad)
    }
}

impl TemporalMode {
    pub fn len(&self) -> usize {
        self.amplitude.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitude.is_empty()
    }

    pub fn time(&self, j: usize) -> f64 {
        self.t_start + j as f64 * self.t_step
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.time(j)).collect()
    }

    /// `|ψ(t)|²`.
    pub fn intensity(&self) -> Vec<f64> {
        self.amplitude.iter().map(|z| z.norm_sqr()).collect()
    }

    /// `Σ|ψ|²·Δt`.
    pub fn norm(&self) -> f64 {
        sum_sq(&self.amplitude) * self.t_step
    }

    /// Intensity-weighted mean time.
    pub fn centroid(&self) -> f64 {
        let s = self.intensity();
        let total: f64 = s.iter().sum();
        s.iter().enumerate().map(|(j, &v)| v * self.time(j)).sum::<f64>() / total
    }

    /// Inverse of [`SpectralMode::to_time_domain`] onto `grid`.
    pub fn to_spectral_domain(&self, grid: &SpectralGrid) -> Result<SpectralMode> {
        if self.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "temporal mode has {} samples, grid has {}",
                self.len(),
                grid.len()
            )));
        }
        if (self.t_step - grid.time_step()).abs() > 1e-9 * grid.time_step() {
            return Err(Error::GridMismatch(format!(
                "time step {} does not match grid dual step {}",
                self.t_step,
                grid.time_step()
            )));
        }
        Ok(SpectralMode::from_parts_unchecked(
            *grid,
            fourier::to_spectrum(&self.amplitude, self.t_step),
        ))
    }
}

/// Free-function form of [`SpectralMode::to_time_domain`].
pub fn to_time_domain(mode: &SpectralMode) -> TemporalMode {
    mode.to_time_domain()
}

/// Free-function form of [`TemporalMode::to_spectral_domain`].
pub fn to_spectral_domain(mode: &TemporalMode, grid: &SpectralGrid) -> Result<SpectralMode> {
    mode.to_spectral_domain(grid)
}

/// Inner product `Σ ψ̃ₐ*·ψ̃_b·Δω`.
pub fn inner_product(a: &SpectralMode, b: &SpectralMode) -> Result<Complex64> {
    a.grid.ensure_matches(&b.grid)?;
    Ok(a.amplitude
        .iter()
        .zip(&b.amplitude)
        .map(|(x, y)| x.conj() * y)
        .sum::<Complex64>()
        * a.grid.omega_step())
}

/// Mode overlap `|⟨a|b⟩|²`, clamped to `[0, 1]`.
pub fn mode_overlap(a: &SpectralMode, b: &SpectralMode) -> Result<f64> {
    Ok(inner_product(a, b)?.norm_sqr().clamp(0.0, 1.0))
}
