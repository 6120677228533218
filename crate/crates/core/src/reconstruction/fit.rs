//! Weighted least-squares fits of reconstructed spectral phases.

use crate::error::{Error, Result};
use crate::grid::SpectralGrid;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Taylor coefficients `φₙ` (n = 1..=order) of a phase about a carrier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialFit {
    pub center_omega: f64,
    /// `[φ₁ fs, φ₂ fs², φ₃ fs³, …]`.
    pub coeffs: Vec<f64>,
    pub stderr: Vec<f64>,
}

impl PolynomialFit {
    pub fn coefficient(&self, order: usize) -> f64 {
        self.coeffs.get(order - 1).copied().unwrap_or(0.0)
    }

    pub fn error(&self, order: usize) -> f64 {
        self.stderr.get(order - 1).copied().unwrap_or(0.0)
    }
}

/// Generic weighted least squares with residual-scaled covariance.
/// Columns are normalized internally for conditioning.
struct LinearFit {
    beta: Vec<f64>,
    stderr: Vec<f64>,
}

fn weighted_least_squares(columns: &[Vec<f64>], y: &[f64], w: &[f64]) -> Result<LinearFit> {
    let used: Vec<usize> = (0..y.len()).filter(|&i| w[i] > 0.0 && y[i].is_finite()).collect();
    let p = columns.len();
    if used.len() < p + 1 {
        return Err(Error::invalid(format!(
            "{} weighted samples cannot constrain {p} parameters",
            used.len()
        )));
    }
    let scale: Vec<f64> = columns
        .iter()
        .map(|c| {
            let s = used.iter().map(|&i| c[i] * c[i] * w[i]).sum::<f64>().sqrt();
            if s > 0.0 {
                s
            } else {
                1.0
            }
        })
        .collect();
    let n = used.len();
    let x = DMatrix::from_fn(n, p, |r, c| columns[c][used[r]] * w[used[r]].sqrt() / scale[c]);
    let b = DVector::from_fn(n, |r, _| y[used[r]] * w[used[r]].sqrt());
    let normal = x.transpose() * &x;
    let inverse = normal
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Degenerate("least-squares system is singular".into()))?;
    let beta_scaled = &inverse * (x.transpose() * &b);
    let residual = &b - &x * &beta_scaled;
    let dof = (n - p) as f64;
    let sigma2 = residual.norm_squared() / dof;
    let beta = (0..p).map(|k| beta_scaled[k] / scale[k]).collect();
    let stderr = (0..p)
        .map(|k| (sigma2 * inverse[(k, k)]).max(0.0).sqrt() / scale[k])
        .collect();
    Ok(LinearFit { beta, stderr })
}

/// Fits `φ(ω) ≈ c + Σₙ φₙ(ω−ω₀)ⁿ/n!` for `n = 1..=max_order` with weights
/// (typically the spectral intensity; zero weight excludes a bin). The
/// constant is a global phase and is discarded.
pub fn fit_phase_polynomial(
    phase: &[f64],
    weights: &[f64],
    grid: &SpectralGrid,
    center_omega: f64,
    max_order: usize,
) -> Result<PolynomialFit> {
    if phase.len() != grid.len() || weights.len() != grid.len() {
        return Err(Error::GridMismatch("phase and weights must match the grid".into()));
    }
    if max_order == 0 {
        return Err(Error::invalid("max_order must be at least 1"));
    }
    let valid = weights.iter().filter(|&&w| w > 0.0).count();
    if valid < max_order + 2 {
        return Err(Error::invalid(format!(
            "need at least {} weighted bins for order {max_order}, have {valid}",
            max_order + 2
        )));
    }
    let x: Vec<f64> = grid.omegas().iter().map(|w| w - center_omega).collect();
    let mut columns = vec![vec![1.0; x.len()]];
    let mut factorial = 1.0;
    for n in 1..=max_order {
        factorial *= n as f64;
        columns.push(x.iter().map(|v| v.powi(n as i32) / factorial).collect());
    }
    let fit = weighted_least_squares(&columns, phase, weights)?;
    Ok(PolynomialFit {
        center_omega,
        coeffs: fit.beta[1..].to_vec(),
        stderr: fit.stderr[1..].to_vec(),
    })
}

/// Slope `s` of a V/Λ-shaped phase `φ ≈ c + aω̄ + s|ω̄|`, `ω̄ = ω−vertex`,
/// with its standard error.
pub fn fit_vertex_slope(
    phase: &[f64],
    weights: &[f64],
    grid: &SpectralGrid,
    vertex_omega: f64,
) -> Result<(f64, f64)> {
    if phase.len() != grid.len() || weights.len() != grid.len() {
        return Err(Error::GridMismatch("phase and weights must match the grid".into()));
    }
    let x: Vec<f64> = grid.omegas().iter().map(|w| w - vertex_omega).collect();
    let columns = vec![
        vec![1.0; x.len()],
        x.clone(),
        x.iter().map(|v| v.abs()).collect(),
    ];
    let fit = weighted_least_squares(&columns, phase, weights)?;
    Ok((fit.beta[2], fit.stderr[2]))
}
