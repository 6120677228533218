//! Figure-level quantities of reconstructed modes: temporal profile and
//! duration, distance from the transform limit and V/Λ-style
//! orthogonality.

use crate::error::Result;
use crate::fourier;
use crate::mode::{mode_overlap, SpectralMode, TemporalMode};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Oversampling applied in time before measuring widths and peaks.
pub const TIME_OVERSAMPLING: usize = 8;

/// Fraction of the global maximum a local maximum must reach (and the
/// depth of the dip separating two maxima) to count as a peak.
pub const PEAK_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct TemporalProfile {
    /// Time-domain amplitude on the grid's dual axis.
    pub mode: TemporalMode,
    /// Intensity FWHM (fs) between the outermost half-maximum crossings.
    pub fwhm_fs: f64,
    pub peak_count: usize,
    pub peak_times_fs: Vec<f64>,
}

/// Full width at half maximum of a sampled profile, from linearly
/// interpolated crossings of the outermost samples above half maximum.
pub fn fwhm(times: &[f64], values: &[f64]) -> f64 {
    let peak = values.iter().cloned().fold(f64::MIN, f64::max);
    if !(peak > 0.0) {
        return 0.0;
    }
    let half = peak / 2.0;
    let first = values.iter().position(|&v| v >= half).unwrap_or(0);
    let last = values.iter().rposition(|&v| v >= half).unwrap_or(values.len() - 1);
    let cross = |a: usize, b: usize| {
        let (va, vb) = (values[a], values[b]);
        times[a] + (half - va) / (vb - va) * (times[b] - times[a])
    };
    let left = if first == 0 { times[0] } else { cross(first - 1, first) };
    let right = if last + 1 == values.len() { times[last] } else { cross(last, last + 1) };
    right - left
}

/// Indices of maxima reaching `threshold·max`, ignoring ripple shallower
/// than that same level.
fn find_peaks(values: &[f64], threshold: f64) -> Vec<usize> {
    let top = values.iter().cloned().fold(0.0, f64::max);
    let level = threshold * top;
    let mut peaks = Vec::new();
    let mut rising = true;
    let (mut ext, mut at) = (f64::MIN, 0);
    for (i, &v) in values.iter().enumerate() {
        if rising {
            if v > ext {
                (ext, at) = (v, i);
            } else if v < ext - level {
                if ext >= level {
                    peaks.push(at);
                }
                rising = false;
                ext = v;
            }
        } else if v < ext {
            ext = v;
        } else if v > ext + level {
            rising = true;
            (ext, at) = (v, i);
        }
    }
    if rising && ext >= level {
        peaks.push(at);
    }
    peaks
}

/// `|ψ(t)|²` sampled `factor` times more finely than the grid's dual axis,
/// by zero-padding the spectrum.
fn fine_intensity(mode: &SpectralMode, factor: usize) -> (Vec<f64>, Vec<f64>) {
    let n = mode.grid().len();
    let m = n * factor;
    let pad = (m - n) / 2;
    let mut padded = vec![Complex64::new(0.0, 0.0); m];
    padded[pad..pad + n].copy_from_slice(mode.amplitude());
    let signal = fourier::to_time(&padded, mode.grid().omega_step());
    let t_step = mode.grid().time_step() / factor as f64;
    let times = fourier::centred_times(m, t_step).collect();
    (times, signal.iter().map(|z| z.norm_sqr()).collect())
}

pub fn temporal_profile(mode: &SpectralMode) -> TemporalProfile {
    let (times, intensity) = fine_intensity(mode, TIME_OVERSAMPLING);
    let peaks = find_peaks(&intensity, PEAK_THRESHOLD);
    TemporalProfile {
        mode: mode.to_time_domain(),
        fwhm_fs: fwhm(&times, &intensity),
        peak_count: peaks.len(),
        peak_times_fs: peaks.iter().map(|&j| times[j]).collect(),
    }
}

/// Same spectral magnitude with the phase set to zero.
pub fn transform_limited(mode: &SpectralMode) -> SpectralMode {
    mode.map_samples(|_, z| Complex64::new(z.norm(), 0.0))
}

/// Temporal FWHM of `mode` over that of its transform-limited counterpart.
pub fn transform_limit_ratio(mode: &SpectralMode) -> f64 {
    temporal_profile(mode).fwhm_fs / temporal_profile(&transform_limited(mode)).fwhm_fs
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub overlap: f64,
    /// `Σ|pₐ − p_b|` of the unit-sum spectral intensities, in `[0, 2]`.
    pub spectral_distance: f64,
    /// The same for the temporal intensities.
    pub temporal_distance: f64,
}

fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    let (sa, sb): (f64, f64) = (a.iter().sum(), b.iter().sum());
    a.iter().zip(b).map(|(x, y)| (x / sa - y / sb).abs()).sum()
}

pub fn orthogonality_report(a: &SpectralMode, b: &SpectralMode) -> Result<OrthogonalityReport> {
    let overlap = mode_overlap(a, b)?;
    Ok(OrthogonalityReport {
        overlap,
        spectral_distance: l1_distance(&a.intensity(), &b.intensity()),
        temporal_distance: l1_distance(&a.to_time_domain().intensity(), &b.to_time_domain().intensity()),
    })
}
