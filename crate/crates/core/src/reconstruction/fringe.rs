//! Fourier-transform fringe analysis of the interferometer outputs.
//!
//! The difference record `S⁺ − S⁻ = Re[ψ̃(ω)ψ̃*(ω+Ω)e^{iωτ}]` transforms
//! (along ω) into two conjugate sidebands at `t = ±τ`. Isolating the `+τ`
//! sideband and transforming back gives `½ψ̃(ω)ψ̃*(ω+Ω)e^{iωτ}`, whose
//! argument minus the carrier `ωτ` is `Δφ(ω) = φ(ω) − φ(ω+Ω)`.

use super::unwrap::{unwrap_masked, wrap};
use super::{FilterShape, FtsiSettings};
use crate::error::{Error, Result};
use crate::fourier;
use crate::grid::SpectralGrid;
use crate::interferometer::Interferogram;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

/// Minimum sideband signal-to-noise ratio accepted for phase extraction.
pub const MIN_SIDEBAND_SNR: f64 = 3.0;

/// Relative level that ends the zero-delay lobe of the summed record.
const DC_LOBE_LEVEL: f64 = 0.01;

/// Quality figures of a fringe analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FringeDiagnostics {
    /// `Σ|ψ̃(ω)ψ̃*(ω+Ω)| / Σ½[S(ω)+S(ω+Ω)]` over valid bins; 1 for Ω = 0.
    pub visibility: f64,
    pub sideband_snr: f64,
    /// Delay at which the sideband peak was found (filter centre).
    pub sideband_peak_fs: f64,
    /// Half-width of the zero-delay lobe of the summed record.
    pub dc_halfwidth_fs: f64,
    pub tau_fs_used: f64,
}

/// Sheared phase difference on the grid of the interferogram.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDifference {
    /// Unwrapped `Δφ(ω)`; bridged across masked bins.
    pub values: Vec<f64>,
    pub valid_mask: Vec<bool>,
    pub diagnostics: FringeDiagnostics,
}

/// Which of the two conjugate sidebands to demodulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sideband {
    Positive,
    Negative,
}

impl FilterShape {
    /// Transmission at offset `dt` from the filter centre for FWHM `width`.
    pub fn response(&self, dt: f64, width: f64) -> f64 {
        let u = (2.0 * dt / width).abs();
        match *self {
            FilterShape::Rectangular => {
                if u <= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            FilterShape::SuperGaussian { order } => (-LN_2 * u.powi(order as i32)).exp(),
        }
    }
}

/// Mask of bins whose raw and low-passed values both reach `floor` of their
/// respective maxima.
pub(crate) fn amplitude_mask(values: &[f64], grid: &SpectralGrid, floor: f64, smoothing_fs: f64) -> Vec<bool> {
    let peak = values.iter().cloned().fold(0.0, f64::max);
    let t_step = grid.time_step();
    let spectrum: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut temporal = fourier::to_time(&spectrum, grid.omega_step());
    let shape = FilterShape::SuperGaussian { order: 6 };
    for (z, t) in temporal.iter_mut().zip(fourier::centred_times(grid.len(), t_step)) {
        *z *= shape.response(t, smoothing_fs);
    }
    let smooth: Vec<f64> = fourier::to_spectrum(&temporal, t_step).iter().map(|z| z.re).collect();
    let smooth_peak = smooth.iter().cloned().fold(0.0, f64::max);
    values
        .iter()
        .zip(&smooth)
        .map(|(&v, &s)| peak > 0.0 && v >= floor * peak && s >= floor * smooth_peak)
        .collect()
}

struct Demodulated {
    analytic: Vec<Complex64>,
    peak_fs: f64,
    snr: f64,
    dc_halfwidth: f64,
}

fn dc_halfwidth(grid: &SpectralGrid, sum: &[f64]) -> f64 {
    let n = grid.len();
    let spectrum: Vec<Complex64> = sum.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let transformed = fourier::to_time(&spectrum, grid.omega_step());
    let origin = transformed[n / 2].norm();
    let j = (n / 2..n)
        .find(|&j| transformed[j].norm() < DC_LOBE_LEVEL * origin)
        .unwrap_or(n - 1);
    grid.time(j)
}

fn median(mut values: Vec<f64>) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(f64::total_cmp);
    values[values.len() / 2]
}

/// Locates the sideband inside `[centre ± width/2]`, filters around the peak
/// and returns the complex analytic fringe signal on the ω grid.
fn demodulate(
    interf: &Interferogram,
    shape: FilterShape,
    search_center: f64,
    search_width: f64,
    filter_width: f64,
    side: Sideband,
) -> Result<Demodulated> {
    let grid = interf.grid;
    let n = grid.len();
    let t_step = grid.time_step();
    let limit = grid.time_window() / 2.0;

    let dc = dc_halfwidth(&grid, &interf.sum());
    let diff: Vec<Complex64> = interf.difference().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let transformed = fourier::to_time(&diff, grid.omega_step());

    let sign = match side {
        Sideband::Positive => 1.0,
        Sideband::Negative => -1.0,
    };
    let lo = (search_center - search_width / 2.0).max(dc);
    let hi = (search_center + search_width / 2.0).min(limit);
    if lo > hi {
        return Err(Error::FilterCollision(format!(
            "no sideband search range remains between the zero-delay lobe ({dc:.1} fs) and {hi:.1} fs"
        )));
    }
    let (mut best, mut peak_mag) = (None, 0.0);
    for j in 0..n {
        let t = sign * grid.time(j);
        if t >= lo && t <= hi && transformed[j].norm() > peak_mag {
            peak_mag = transformed[j].norm();
            best = Some(j);
        }
    }
    let Some(peak_index) = best else {
        return Err(Error::LowVisibility {
            snr: 0.0,
            threshold: MIN_SIDEBAND_SNR,
        });
    };
    let peak_t = grid.time(peak_index);
    let peak_abs = peak_t.abs();
    if lo == dc && peak_abs <= dc + 2.0 * t_step {
        return Err(Error::FilterCollision(format!(
            "no sideband separated from the zero-delay lobe (half-width {dc:.1} fs)"
        )));
    }
    if peak_abs - filter_width / 2.0 <= dc {
        return Err(Error::FilterCollision(format!(
            "filter [{:.1}, {:.1}] fs overlaps the zero-delay lobe (half-width {dc:.1} fs)",
            peak_abs - filter_width / 2.0,
            peak_abs + filter_width / 2.0
        )));
    }
    if peak_abs + filter_width / 2.0 >= limit {
        return Err(Error::FilterCollision(format!(
            "filter upper edge {:.1} fs exceeds the {limit:.1} fs time window",
            peak_abs + filter_width / 2.0
        )));
    }

    let floor = median(
        (0..n)
            .filter(|&j| {
                let t = grid.time(j);
                t.abs() > dc && (t.abs() - peak_abs).abs() > filter_width
            })
            .map(|j| transformed[j].norm())
            .collect(),
    );
    let snr = peak_mag / floor.max(1e-12 * peak_mag).max(f64::MIN_POSITIVE);

    let filtered: Vec<Complex64> = transformed
        .iter()
        .zip(fourier::centred_times(n, t_step))
        .map(|(z, t)| z * shape.response(t - peak_t, filter_width))
        .collect();
    Ok(Demodulated {
        analytic: fourier::to_spectrum(&filtered, t_step),
        peak_fs: peak_t,
        snr,
        dc_halfwidth: dc,
    })
}

fn check_resolvable(grid: &SpectralGrid, tau: f64) -> Result<()> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::invalid(format!("delay must be positive, got {tau} fs")));
    }
    let samples_per_fringe = 2.0 * PI / (tau * grid.omega_step());
    if samples_per_fringe < 4.0 {
        return Err(Error::invalid(format!(
            "fringes at tau = {tau} fs have {samples_per_fringe:.2} samples per period (need >= 4)"
        )));
    }
    Ok(())
}

/// Extracts `Δφ(ω) = φ(ω) − φ(ω+Ω)` using the `+τ` sideband.
pub fn extract_phase_difference(interf: &Interferogram, settings: &FtsiSettings, tau: f64) -> Result<PhaseDifference> {
    extract_phase_difference_from(interf, settings, tau, Sideband::Positive)
}

/// As [`extract_phase_difference`], choosing the sideband. The negative
/// sideband carries the conjugate term and so yields `−Δφ`.
pub fn extract_phase_difference_from(
    interf: &Interferogram,
    settings: &FtsiSettings,
    tau: f64,
    side: Sideband,
) -> Result<PhaseDifference> {
    settings.validate()?;
    let grid = interf.grid;
    check_resolvable(&grid, tau)?;
    let sum = interf.sum();
    if !sum.iter().any(|&v| v > 0.0) {
        return Err(Error::Degenerate("interferogram is empty".into()));
    }
    let demod = demodulate(
        interf,
        settings.filter_shape,
        settings.filter_center,
        settings.filter_width,
        settings.filter_width,
        side,
    )?;
    if demod.snr < MIN_SIDEBAND_SNR {
        return Err(Error::LowVisibility {
            snr: demod.snr,
            threshold: MIN_SIDEBAND_SNR,
        });
    }

    let valid_mask = amplitude_mask(&sum, &grid, settings.amplitude_floor, settings.filter_width);
    let sign = match side {
        Sideband::Positive => 1.0,
        Sideband::Negative => -1.0,
    };
    let wrapped: Vec<f64> = demod
        .analytic
        .iter()
        .enumerate()
        .map(|(i, z)| wrap(z.arg() - sign * grid.omega(i) * tau))
        .collect();
    let mut values = unwrap_masked(&wrapped, &valid_mask)
        .ok_or_else(|| Error::Degenerate("no bin exceeds the amplitude floor".into()))?;

    // Principal branch at the spectral centroid.
    let total: f64 = sum.iter().sum();
    let centroid = sum.iter().enumerate().map(|(i, v)| v * grid.omega(i)).sum::<f64>() / total;
    let reference = nearest_valid(&valid_mask, grid.nearest_index(centroid));
    let offset = values[reference] - wrap(values[reference]);
    values.iter_mut().for_each(|v| *v -= offset);

    let (num, den) = valid_mask
        .iter()
        .enumerate()
        .filter(|(_, &m)| m)
        .fold((0.0, 0.0), |(a, b), (i, _)| (a + 2.0 * demod.analytic[i].norm(), b + sum[i]));
    Ok(PhaseDifference {
        values,
        valid_mask,
        diagnostics: FringeDiagnostics {
            visibility: if den > 0.0 { num / den } else { 0.0 },
            sideband_snr: demod.snr,
            sideband_peak_fs: demod.peak_fs,
            dc_halfwidth_fs: demod.dc_halfwidth,
            tau_fs_used: tau,
        },
    })
}

fn nearest_valid(mask: &[bool], index: usize) -> usize {
    (0..mask.len())
        .filter(|&i| mask[i])
        .min_by_key(|&i| i.abs_diff(index))
        .unwrap_or(index)
}

/// Delay estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayEstimate {
    pub tau_fs: f64,
    pub stderr_fs: f64,
    pub sideband_snr: f64,
}

/// Measures τ from a zero-shear interferogram: the sideband phase is then
/// `ωτ` exactly, so a weighted straight-line fit of its unwrapped phase
/// against ω has slope τ.
///
/// The sideband is searched for over all delays beyond the zero-delay lobe;
/// the filter width is `settings.filter_width`, reduced if needed to stay
/// clear of that lobe.
pub fn calibrate_delay(interf_zero_shear: &Interferogram, settings: &FtsiSettings) -> Result<DelayEstimate> {
    settings.validate()?;
    let interf = interf_zero_shear;
    let grid = interf.grid;
    let sum = interf.sum();
    if !sum.iter().any(|&v| v > 0.0) {
        return Err(Error::Degenerate("interferogram is empty".into()));
    }
    let limit = grid.time_window() / 2.0;
    let dc = dc_halfwidth(&grid, &sum);
    let failure = |why: String| Error::CalibrationFailure(why);

    // Coarse peak location, then a filter sized to fit between the lobe and the peak.
    let coarse = demodulate(interf, settings.filter_shape, limit / 2.0, limit, 1e-9, Sideband::Positive)
        .map_err(|e| failure(format!("no resolvable fringes ({e})")))?;
    let peak = coarse.peak_fs;
    let width = settings
        .filter_width
        .min(1.5 * (peak - dc))
        .min(1.5 * (limit - peak));
    if !(width > 0.0) {
        return Err(failure(format!("sideband at {peak:.1} fs is inside the zero-delay lobe")));
    }
    let demod = demodulate(interf, settings.filter_shape, peak, 2.0 * grid.time_step(), width, Sideband::Positive)
        .map_err(|e| failure(format!("{e}")))?;
    if demod.snr < MIN_SIDEBAND_SNR {
        return Err(failure(format!(
            "sideband SNR {:.2} below {MIN_SIDEBAND_SNR} (no resolvable fringes)",
            demod.snr
        )));
    }

    let mask = amplitude_mask(&sum, &grid, settings.amplitude_floor, width);
    let wrapped: Vec<f64> = demod.analytic.iter().map(|z| z.arg()).collect();
    let unwrapped = unwrap_masked(&wrapped, &mask).ok_or_else(|| failure("no valid bins".into()))?;
    let weights: Vec<f64> = sum.iter().zip(&mask).map(|(&s, &m)| if m { s } else { 0.0 }).collect();
    let center = grid.center();
    let fit = super::fit::fit_phase_polynomial(&unwrapped, &weights, &grid, center, 1)
        .map_err(|e| failure(format!("{e}")))?;
    let tau = fit.coefficient(1);
    if !(tau > dc) {
        return Err(failure(format!("fitted delay {tau:.2} fs is not resolvable")));
    }
    Ok(DelayEstimate {
        tau_fs: tau,
        stderr_fs: fit.error(1),
        sideband_snr: demod.snr,
    })
}
