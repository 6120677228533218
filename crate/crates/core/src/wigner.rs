//! Chronocyclic Wigner function by direct quadrature.

use crate::error::{Error, Result};
use crate::fourier;
use crate::mode::SpectralMode;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::io::Write;

/// Real time-frequency quasiprobability map. `values[it][iw]` is
/// `W(t_axis[it], omega_axis[iw])`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerMap {
    pub t_axis: Vec<f64>,
    pub omega_axis: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

fn axis_step(axis: &[f64]) -> f64 {
    if axis.len() < 2 {
        return 0.0;
    }
    (axis[axis.len() - 1] - axis[0]) / (axis.len() - 1) as f64
}

impl WignerMap {
    pub fn get(&self, it: usize, iw: usize) -> f64 {
        self.values[it][iw]
    }

    /// `∫W dω` on each time sample (uniform ω axis assumed).
    pub fn time_marginal(&self) -> Vec<f64> {
        let dw = axis_step(&self.omega_axis);
        self.values.iter().map(|row| row.iter().sum::<f64>() * dw).collect()
    }

    /// `∫W dt` on each frequency sample (uniform t axis assumed).
    pub fn frequency_marginal(&self) -> Vec<f64> {
        let dt = axis_step(&self.t_axis);
        (0..self.omega_axis.len())
            .map(|iw| self.values.iter().map(|row| row[iw]).sum::<f64>() * dt)
            .collect()
    }

    /// `∬W dt dω`.
    pub fn total(&self) -> f64 {
        self.time_marginal().iter().sum::<f64>() * axis_step(&self.t_axis)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().flatten().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Long-format CSV: `t_fs,omega_rad_per_fs,w_value`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t_fs", "omega_rad_per_fs", "w_value"])
            .map_err(csv_err)?;
        for (it, row) in self.values.iter().enumerate() {
            for (iw, v) in row.iter().enumerate() {
                w.write_record(&[
                    format!("{:.6}", self.t_axis[it]),
                    format!("{:.9}", self.omega_axis[iw]),
                    format!("{:.9e}", v),
                ])
                .map_err(csv_err)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Schema(format!("{other:?}")),
    }
}

/// Spectral amplitude interpolated onto the half-step lattice
/// `ω_start + (p + frac)·Δω/2`, `p ∈ [0, 2N)`, by zero-padding in time.
fn half_step_lattice(padded_time: &[Complex64], t_step: f64, frac_step: f64) -> Vec<Complex64> {
    let n2 = padded_time.len();
    let shifted: Vec<Complex64> = if frac_step == 0.0 {
        padded_time.to_vec()
    } else {
        fourier::centred_times(n2, t_step)
            .zip(padded_time)
            .map(|(t, &z)| z * Complex64::from_polar(1.0, frac_step * t))
            .collect()
    };
    fourier::to_spectrum(&shifted, t_step)
}

/// Evaluates `W(t,ω) = (1/2π)∫ψ̃*(ω+x/2)ψ̃(ω−x/2)e^{ixt}dx` on the given axes.
///
/// The integral is a sum over separations `x = kΔω`, using band-limited
/// (zero-padded) interpolation for the half-step samples. Axes must lie
/// inside the grid's frequency range and time window.
pub fn wigner(mode: &SpectralMode, t_axis: &[f64], omega_axis: &[f64]) -> Result<WignerMap> {
    let grid = *mode.grid();
    let n = grid.len();
    let half_window = grid.time_window() / 2.0;
    if t_axis.is_empty() || omega_axis.is_empty() {
        return Err(Error::invalid("wigner axes must be non-empty"));
    }
    if let Some(t) = t_axis.iter().find(|t| t.abs() > half_window || !t.is_finite()) {
        return Err(Error::invalid(format!(
            "time {t} fs lies outside the ±{half_window} fs window"
        )));
    }
    let tol = 1e-9 * grid.omega_step();
    if let Some(w) = omega_axis
        .iter()
        .find(|&&w| w < grid.omega_start() - tol || w > grid.omega_last() + tol || !w.is_finite())
    {
        return Err(Error::invalid(format!("frequency {w} lies outside the grid")));
    }

    let t_step = grid.time_step();
    let temporal = fourier::to_time(mode.amplitude(), grid.omega_step());
    let mut padded = vec![Complex64::new(0.0, 0.0); 2 * n];
    padded[n / 2..n / 2 + n].copy_from_slice(&temporal);

    let half = grid.omega_step() / 2.0;
    let dw = grid.omega_step();
    let columns: Vec<Vec<f64>> = omega_axis
        .par_iter()
        .map(|&w| {
            let pos = ((w - grid.omega_start()) / half).max(0.0);
            let mut base = pos.floor();
            let mut frac = pos - base;
            if frac > 1.0 - 1e-9 {
                base += 1.0;
                frac = 0.0;
            } else if frac < 1e-9 {
                frac = 0.0;
            }
            let base = base as usize;
            let lattice = half_step_lattice(&padded, t_step, frac * half);
            let kmax = base.min(2 * n - 1 - base);
            let products: Vec<(f64, Complex64)> = (0..=kmax)
                .map(|k| (k as f64 * dw, lattice[base + k].conj() * lattice[base - k]))
                .collect();
            let peak = products.iter().map(|(_, g)| g.norm()).fold(0.0, f64::max);
            let significant: Vec<(f64, Complex64)> = products
                .into_iter()
                .filter(|(_, g)| g.norm() > 1e-16 * peak)
                .collect();
            t_axis
                .iter()
                .map(|&t| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for &(x, g) in &significant {
                        if x == 0.0 {
                            acc += g;
                        } else {
                            // k and -k terms are conjugates of each other.
                            let z = g * Complex64::from_polar(1.0, x * t);
                            acc += z + z.conj();
                        }
                    }
                    acc.re * dw / (2.0 * PI)
                })
                .collect()
        })
        .collect();

    let values = (0..t_axis.len())
        .map(|it| columns.iter().map(|col| col[it]).collect())
        .collect();
    Ok(WignerMap {
        t_axis: t_axis.to_vec(),
        omega_axis: omega_axis.to_vec(),
        values,
    })
}

/// Uniform axes covering the region where the mode's spectral and temporal
/// intensities exceed `threshold` of their peaks, padded by 20 %.
pub fn default_axes(mode: &SpectralMode, n_t: usize, n_omega: usize, threshold: f64) -> (Vec<f64>, Vec<f64>) {
    let grid = mode.grid();
    let span_of = |values: &[f64]| {
        let peak = values.iter().cloned().fold(0.0, f64::max);
        let lo = values.iter().position(|&v| v >= threshold * peak).unwrap_or(0);
        let hi = values.iter().rposition(|&v| v >= threshold * peak).unwrap_or(values.len() - 1);
        (lo, hi)
    };
    let (lo, hi) = span_of(&mode.intensity());
    let (w0, w1) = (grid.omega(lo), grid.omega(hi));
    let pad = 0.2 * (w1 - w0);
    let w0 = (w0 - pad).max(grid.omega_start());
    let w1 = (w1 + pad).min(grid.omega_last());

    let temporal = mode.to_time_domain();
    let (lo, hi) = span_of(&temporal.intensity());
    let (t0, t1) = (temporal.time(lo), temporal.time(hi));
    let pad = 0.2 * (t1 - t0).max(temporal.t_step * 4.0);
    let limit = grid.time_window() / 2.0;
    let t0 = (t0 - pad).max(-limit);
    let t1 = (t1 + pad).min(limit);

    let linspace = |a: f64, b: f64, n: usize| -> Vec<f64> {
        if n == 1 {
            return vec![(a + b) / 2.0];
        }
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    };
    (linspace(t0, t1, n_t), linspace(w0, w1, n_omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use std::f64::consts::LN_2;

    fn gaussian(phi2: f64) -> SpectralMode {
        let g = make_grid(2.0, 0.16, 256).unwrap();
        let amp = g
            .omegas()
            .iter()
            .map(|&w| {
                let x = w - 2.0;
                Complex64::from_polar((-2.0 * LN_2 * x * x / 0.02f64.powi(2)).exp(), phi2 * x * x / 2.0)
            })
            .collect();
        SpectralMode::new(g, amp).unwrap()
    }

    #[test]
    fn transform_limited_gaussian_is_positive_and_centred() {
        let mode = gaussian(0.0);
        let t: Vec<f64> = (-20..=20).map(|i| i as f64 * 20.0).collect();
        let w: Vec<f64> = (-20..=20).map(|i| 2.0 + i as f64 * 0.002).collect();
        let map = wigner(&mode, &t, &w).unwrap();
        let peak = map.values.iter().flatten().cloned().fold(0.0, f64::max);
        assert!(map.min() > -1e-9 * peak, "{} {}", map.min(), peak);
        let (mut best, mut at) = (f64::MIN, (0, 0));
        for it in 0..t.len() {
            for iw in 0..w.len() {
                if map.get(it, iw) > best {
                    best = map.get(it, iw);
                    at = (it, iw);
                }
            }
        }
        assert_eq!(at, (20, 20));
    }

    #[test]
    fn chirp_tilts_the_distribution() {
        // Conditional mean time at frequency ω equals φ₂(ω−ω₀).
        let phi2 = 2.0e4;
        let mode = gaussian(phi2);
        let t: Vec<f64> = (-400..=400).map(|i| i as f64 * 5.0).collect();
        let w = [1.99, 2.0, 2.008];
        let map = wigner(&mode, &t, &w).unwrap();
        for (iw, &omega) in w.iter().enumerate() {
            let col: Vec<f64> = (0..t.len()).map(|it| map.get(it, iw)).collect();
            let mass: f64 = col.iter().sum();
            let mean: f64 = col.iter().zip(&t).map(|(v, t)| v * t).sum::<f64>() / mass;
            assert!((mean - phi2 * (omega - 2.0)).abs() < 0.5, "{mean}");
        }
    }

    #[test]
    fn rejects_axes_outside_support() {
        let mode = gaussian(0.0);
        assert!(wigner(&mode, &[0.0], &[5.0]).is_err());
        assert!(wigner(&mode, &[1e9], &[2.0]).is_err());
        assert!(wigner(&mode, &[], &[2.0]).is_err());
    }
}
