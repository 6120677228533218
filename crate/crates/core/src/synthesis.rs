//! Test-state synthesis: Gaussian spectra with polynomial, V/Λ or
//! tabulated spectral phases.

use crate::error::{Error, Result};
use crate::grid::SpectralGrid;
use crate::mode::SpectralMode;
use crate::units::{bandwidth_nm_to_omega, wavelength_to_omega};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

/// Spectral phase imprinted on the synthesized pulse, about the carrier ω₀.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "phase_kind", rename_all = "snake_case")]
pub enum SpectralPhase {
    /// `φ(ω) = Σₙ φₙ (ω−ω₀)ⁿ/n!`, `poly_coeffs = [φ₁ fs, φ₂ fs², φ₃ fs³, …]`.
    Polynomial { poly_coeffs: Vec<f64> },
    /// `φ(ω) = v_slope_fs·|ω−ω₀|`; positive slope is a "V", negative a "Λ".
    VLambda { v_slope_fs: f64 },
    /// Arbitrary amplitude and phase, linearly interpolated onto the grid
    /// and zero outside the tabulated range. Replaces the Gaussian envelope.
    Tabulated {
        omega_rad_per_fs: Vec<f64>,
        amplitude_abs: Vec<f64>,
        phase_rad: Vec<f64>,
    },
}

impl SpectralPhase {
    pub fn flat() -> Self {
        SpectralPhase::Polynomial { poly_coeffs: vec![] }
    }

    /// Phase at detuning `x = ω−ω₀` (not defined for tabulated profiles).
    pub fn evaluate(&self, x: f64) -> Option<f64> {
        match self {
            SpectralPhase::Polynomial { poly_coeffs } => {
                let mut term = 1.0;
                let mut acc = 0.0;
                for (k, c) in poly_coeffs.iter().enumerate() {
                    term *= x / (k + 1) as f64;
                    acc += c * term;
                }
                Some(acc)
            }
            SpectralPhase::VLambda { v_slope_fs } => Some(v_slope_fs * x.abs()),
            SpectralPhase::Tabulated { .. } => None,
        }
    }

    /// Group delay `dφ/dω` at detuning `x` (not defined for tabulated profiles).
    pub fn group_delay(&self, x: f64) -> Option<f64> {
        match self {
            SpectralPhase::Polynomial { poly_coeffs } => {
                let mut term = 1.0;
                let mut acc = 0.0;
                for (k, c) in poly_coeffs.iter().enumerate() {
                    acc += c * term;
                    term *= x / (k + 1) as f64;
                }
                Some(acc)
            }
            SpectralPhase::VLambda { v_slope_fs } => Some(v_slope_fs * x.signum()),
            SpectralPhase::Tabulated { .. } => None,
        }
    }
}

/// Source parameters of a synthesized test pulse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    pub center_wavelength_nm: f64,
    /// Intensity FWHM in wavelength.
    pub fwhm_wavelength_nm: f64,
    #[serde(flatten)]
    pub phase: SpectralPhase,
}

impl PulseSpec {
    pub fn gaussian(center_wavelength_nm: f64, fwhm_wavelength_nm: f64, phase: SpectralPhase) -> Self {
        PulseSpec {
            center_wavelength_nm,
            fwhm_wavelength_nm,
            phase,
        }
    }

    pub fn validate(&self) -> Result<()> {
        wavelength_to_omega(self.center_wavelength_nm)?;
        bandwidth_nm_to_omega(self.fwhm_wavelength_nm, self.center_wavelength_nm)?;
        if let SpectralPhase::Tabulated {
            omega_rad_per_fs,
            amplitude_abs,
            phase_rad,
        } = &self.phase
        {
            if omega_rad_per_fs.len() < 2
                || omega_rad_per_fs.len() != amplitude_abs.len()
                || omega_rad_per_fs.len() != phase_rad.len()
            {
                return Err(Error::invalid("tabulated arrays must have equal lengths >= 2"));
            }
            if omega_rad_per_fs.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::invalid("tabulated frequencies must be increasing"));
            }
        }
        Ok(())
    }

    /// Carrier ω₀ in rad/fs.
    pub fn carrier_omega(&self) -> Result<f64> {
        wavelength_to_omega(self.center_wavelength_nm)
    }

    /// Intensity FWHM in rad/fs (first-order conversion).
    pub fn bandwidth_omega(&self) -> Result<f64> {
        bandwidth_nm_to_omega(self.fwhm_wavelength_nm, self.center_wavelength_nm)
    }

    /// Copy with `delta` added to the quadratic coefficient (polynomial kind only).
    pub fn with_added_phi2(&self, delta: f64) -> Result<PulseSpec> {
        match &self.phase {
            SpectralPhase::Polynomial { poly_coeffs } => {
                let mut c = poly_coeffs.clone();
                if c.len() < 2 {
                    c.resize(2, 0.0);
                }
                c[1] += delta;
                Ok(PulseSpec {
                    phase: SpectralPhase::Polynomial { poly_coeffs: c },
                    ..self.clone()
                })
            }
            _ => Err(Error::invalid("quadratic compensation needs a polynomial phase")),
        }
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if x < xs[0] || x > xs[xs.len() - 1] {
        return 0.0;
    }
    let k = xs.partition_point(|&v| v <= x).clamp(1, xs.len() - 1);
    let (x0, x1) = (xs[k - 1], xs[k]);
    ys[k - 1] + (ys[k] - ys[k - 1]) * (x - x0) / (x1 - x0)
}

/// Samples the pulse described by `spec` on `grid` and normalizes it.
///
/// The phase vanishes at the carrier, so `Arg ψ̃(ω₀) = 0`.
pub fn synthesize(spec: &PulseSpec, grid: &SpectralGrid) -> Result<SpectralMode> {
    spec.validate()?;
    let w0 = spec.carrier_omega()?;
    let fwhm = spec.bandwidth_omega()?;
    if grid.span() < 4.0 * fwhm {
        return Err(Error::invalid(format!(
            "grid span {:.4e} rad/fs is narrower than 4x the {:.4e} rad/fs bandwidth",
            grid.span(),
            fwhm
        )));
    }
    if !grid.contains(w0) {
        return Err(Error::invalid("carrier frequency lies outside the grid"));
    }
    let amplitude: Vec<Complex64> = match &spec.phase {
        SpectralPhase::Tabulated {
            omega_rad_per_fs,
            amplitude_abs,
            phase_rad,
        } => grid
            .omegas()
            .iter()
            .map(|&w| {
                let a = interpolate(omega_rad_per_fs, amplitude_abs, w).max(0.0);
                let p = interpolate(omega_rad_per_fs, phase_rad, w);
                Complex64::from_polar(a, p)
            })
            .collect(),
        phase => grid
            .omegas()
            .iter()
            .map(|&w| {
                let x = w - w0;
                // |ψ̃|² ∝ exp(−4 ln2 x²/FWHM²)
                let a = (-2.0 * LN_2 * x * x / (fwhm * fwhm)).exp();
                Complex64::from_polar(a, phase.evaluate(x).unwrap_or(0.0))
            })
            .collect(),
    };
    SpectralMode::new(*grid, amplitude)
}
