use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Uniform angular-frequency axis shared by every sampled quantity.
///
/// Sample `i` sits at `omega_start + i·omega_step`. The point count is a
/// power of two no smaller than 8, and index `n_points/2` is the grid
/// centre, which also serves as the carrier reference of time-domain
/// envelopes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
pub struct SpectralGrid {
    omega_start: f64,
    omega_step: f64,
    n_points: usize,
}

#[derive(Serialize, Deserialize)]
struct GridRepr {
    omega_start: f64,
    omega_step: f64,
    n_points: usize,
}

impl TryFrom<GridRepr> for SpectralGrid {
    type Error = Error;

    fn try_from(r: GridRepr) -> Result<Self> {
        SpectralGrid::new(r.omega_start, r.omega_step, r.n_points)
    }
}

impl From<SpectralGrid> for GridRepr {
    fn from(g: SpectralGrid) -> Self {
        GridRepr {
            omega_start: g.omega_start,
            omega_step: g.omega_step,
            n_points: g.n_points,
        }
    }
}

impl SpectralGrid {
    pub fn new(omega_start: f64, omega_step: f64, n_points: usize) -> Result<Self> {
        if !(omega_step > 0.0) || !omega_step.is_finite() {
            return Err(Error::invalid(format!("omega_step must be positive, got {omega_step}")));
        }
        if !omega_start.is_finite() {
            return Err(Error::invalid("omega_start must be finite"));
        }
        if n_points < 8 || !n_points.is_power_of_two() {
            return Err(Error::invalid(format!(
                "n_points must be a power of two >= 8, got {n_points}"
            )));
        }
        Ok(SpectralGrid {
            omega_start,
            omega_step,
            n_points,
        })
    }

    /// Grid centred on `center` covering `[center - span/2, center + span/2)`.
    pub fn centered(center: f64, span: f64, n_points: usize) -> Result<Self> {
        if !(span > 0.0) || !span.is_finite() {
            return Err(Error::invalid(format!("span must be positive, got {span}")));
        }
        let step = span / n_points as f64;
        SpectralGrid::new(center - span / 2.0, step, n_points)
    }

    pub fn omega_start(&self) -> f64 {
        self.omega_start
    }

    pub fn omega_step(&self) -> f64 {
        self.omega_step
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn span(&self) -> f64 {
        self.omega_step * self.n_points as f64
    }

    pub fn center(&self) -> f64 {
        self.omega(self.n_points / 2)
    }

    pub fn omega(&self, i: usize) -> f64 {
        self.omega_start + i as f64 * self.omega_step
    }

    pub fn omega_last(&self) -> f64 {
        self.omega(self.n_points - 1)
    }

    pub fn omegas(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.omega(i)).collect()
    }

    /// Fractional index of `omega` (not clamped).
    pub fn position(&self, omega: f64) -> f64 {
        (omega - self.omega_start) / self.omega_step
    }

    /// Index of the sample nearest to `omega`, clamped to the grid.
    pub fn nearest_index(&self, omega: f64) -> usize {
        self.position(omega).round().clamp(0.0, (self.n_points - 1) as f64) as usize
    }

    pub fn contains(&self, omega: f64) -> bool {
        omega >= self.omega_start && omega <= self.omega_last()
    }

    /// Sample spacing of the dual time axis, `2π/(N·Δω)`.
    pub fn time_step(&self) -> f64 {
        2.0 * PI / self.span()
    }

    /// Length of the (periodic) dual time window, `2π/Δω`.
    pub fn time_window(&self) -> f64 {
        2.0 * PI / self.omega_step
    }

    /// Time of sample `j` on the dual axis; `j = N/2` is `t = 0`.
    pub fn time(&self, j: usize) -> f64 {
        (j as f64 - (self.n_points / 2) as f64) * self.time_step()
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.time(j)).collect()
    }

    /// Equality up to floating-point noise in the stored parameters.
    pub fn matches(&self, other: &SpectralGrid) -> bool {
        let tol = 1e-12 * self.span().max(other.span());
        self.n_points == other.n_points
            && (self.omega_start - other.omega_start).abs() <= tol
            && (self.omega_step - other.omega_step).abs() <= 1e-12 * self.omega_step
    }

    pub(crate) fn ensure_matches(&self, other: &SpectralGrid) -> Result<()> {
        if self.matches(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }

    /// Rebuilds a grid from an explicit frequency column, checking uniformity.
    pub fn from_omegas(omegas: &[f64]) -> Result<Self> {
        let n = omegas.len();
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::invalid(format!(
                "frequency axis must have a power-of-two length >= 8, got {n}"
            )));
        }
        let step = (omegas[n - 1] - omegas[0]) / (n - 1) as f64;
        let grid = SpectralGrid::new(omegas[0], step, n)?;
        for (i, &w) in omegas.iter().enumerate() {
            if (w - grid.omega(i)).abs() > 1e-6 * step {
                return Err(Error::invalid(format!(
                    "frequency axis is not uniform at sample {i}"
                )));
            }
        }
        Ok(grid)
    }
}

/// Grid centred on `center` with total width `span` (rad/fs).
pub fn make_grid(center: f64, span: f64, n_points: usize) -> Result<SpectralGrid> {
    SpectralGrid::centered(center, span, n_points)
}
