//! Sheared Mach-Zehnder interferometer with spectrally resolved,
//! photon-counting outputs.
//!
//! One arm carries `ψ̃(ω)e^{iωτ}` (delay τ), the other the sheared copy
//! `ψ̃(ω+Ω)`. A balanced splitter then produces
//!
//! ```text
//! S±(ω) = ¼{S(ω) + S(ω+Ω) ± 2Re[ψ̃(ω)ψ̃*(ω+Ω)e^{iωτ}]}
//! ```

use crate::error::{Error, Result};
use crate::fourier;
use crate::grid::SpectralGrid;
use crate::mode::SpectralMode;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

/// Shear Ω (rad/fs) and delay τ (fs) of the interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShearConfig {
    pub shear: f64,
    pub delay: f64,
}

impl ShearConfig {
    pub fn new(shear: f64, delay: f64) -> Self {
        ShearConfig { shear, delay }
    }

    /// Checks that the sheared copy stays on `grid`.
    pub fn validate(&self, grid: &SpectralGrid) -> Result<()> {
        check_shear(self.shear, grid)?;
        if !self.delay.is_finite() {
            return Err(Error::invalid("delay must be finite"));
        }
        Ok(())
    }
}

fn check_shear(shear: f64, grid: &SpectralGrid) -> Result<()> {
    if !shear.is_finite() || shear.abs() >= grid.span() / 4.0 {
        return Err(Error::invalid(format!(
            "shear {shear:.4e} rad/fs exceeds the grid headroom of {:.4e} rad/fs",
            grid.span() / 4.0
        )));
    }
    Ok(())
}

/// `ψ̃(ω) → ψ̃(ω−Ω)`, applied as the time-domain product `e^{−iΩt}ψ(t)`.
///
/// The shift is band-limited interpolation on the periodic grid, so it is
/// exact for integer-bin shears and alias-free for modes that vanish near
/// the grid edges.
pub fn apply_shear(mode: &SpectralMode, shear: f64) -> Result<SpectralMode> {
    let grid = *mode.grid();
    check_shear(shear, &grid)?;
    if shear == 0.0 {
        return Ok(mode.clone());
    }
    let t_step = grid.time_step();
    let temporal = fourier::to_time(mode.amplitude(), grid.omega_step());
    let modulated: Vec<Complex64> = fourier::centred_times(grid.len(), t_step)
        .zip(temporal)
        .map(|(t, z)| z * Complex64::from_polar(1.0, -shear * t))
        .collect();
    SpectralMode::new(grid, fourier::to_spectrum(&modulated, t_step))
}

/// `ψ̃(ω) → ψ̃(ω)e^{iωτ}` with absolute ω; delays the pulse by +τ.
pub fn apply_delay(mode: &SpectralMode, delay: f64) -> SpectralMode {
    mode.map_samples(|w, z| z * Complex64::from_polar(1.0, w * delay))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    /// Expected intensities.
    Ideal,
    /// Integer photon counts per bin.
    Counts,
}

/// The two spectrally resolved interferometer outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Interferogram {
    pub grid: SpectralGrid,
    pub plus: Vec<f64>,
    pub minus: Vec<f64>,
    pub kind: RecordKind,
    pub config: ShearConfig,
    pub total_counts: Option<u64>,
    pub seed: Option<u64>,
}

impl Interferogram {
    /// `plus + minus` per bin; cancels the fringes.
    pub fn sum(&self) -> Vec<f64> {
        self.plus.iter().zip(&self.minus).map(|(a, b)| a + b).collect()
    }

    /// `plus − minus` per bin; the pure fringe term.
    pub fn difference(&self) -> Vec<f64> {
        self.plus.iter().zip(&self.minus).map(|(a, b)| a - b).collect()
    }

    /// Writes `omega_rad_per_fs,plus,minus`, one row per grid point.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["omega_rad_per_fs", "plus", "minus"]).map_err(csv_error)?;
        for i in 0..self.grid.len() {
            let omega = format!("{:.15e}", self.grid.omega(i));
            let row = match self.kind {
                RecordKind::Ideal => [omega, format!("{:.17e}", self.plus[i]), format!("{:.17e}", self.minus[i])],
                RecordKind::Counts => [omega, format!("{}", self.plus[i] as u64), format!("{}", self.minus[i] as u64)],
            };
            w.write_record(&row).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Parses the CSV written by [`Interferogram::write_csv`]. The record is
    /// of counts kind when every plus/minus field is an integer literal.
    pub fn read_csv<R: Read>(input: R, config: ShearConfig) -> Result<Interferogram> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
        let header = reader.headers().map_err(csv_error)?.clone();
        let names: Vec<&str> = header.iter().map(str::trim).collect();
        if names != ["omega_rad_per_fs", "plus", "minus"] {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header omega_rad_per_fs,plus,minus, found {}", names.join(",")),
            });
        }
        let (mut omegas, mut plus, mut minus) = (Vec::new(), Vec::new(), Vec::new());
        let mut integral = true;
        let mut last_line = 1;
        for record in reader.records() {
            let record = record.map_err(csv_error)?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            last_line = line;
            if record.len() != 3 {
                return Err(Error::Parse {
                    line,
                    message: format!("expected 3 fields, found {}", record.len()),
                });
            }
            let field = |k: usize| -> Result<f64> {
                let text = record[k].trim();
                text.parse::<f64>().map_err(|_| Error::Parse {
                    line,
                    message: format!("cannot parse {text:?} as a number"),
                })
            };
            let (w, p, m) = (field(0)?, field(1)?, field(2)?);
            if p < 0.0 || m < 0.0 || !p.is_finite() || !m.is_finite() {
                return Err(Error::Parse {
                    line,
                    message: "output intensities must be finite and non-negative".into(),
                });
            }
            integral &= [&record[1], &record[2]]
                .iter()
                .all(|s| s.trim().bytes().all(|b| b.is_ascii_digit()));
            omegas.push(w);
            plus.push(p);
            minus.push(m);
        }
        let grid = SpectralGrid::from_omegas(&omegas).map_err(|e| Error::Parse {
            line: last_line,
            message: format!("{e} (file may be truncated)"),
        })?;
        let kind = if integral { RecordKind::Counts } else { RecordKind::Ideal };
        let total_counts = match kind {
            RecordKind::Counts => Some(plus.iter().chain(&minus).sum::<f64>() as u64),
            RecordKind::Ideal => None,
        };
        Ok(Interferogram {
            grid,
            plus,
            minus,
            kind,
            config,
            total_counts,
            seed: None,
        })
    }
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => Error::Parse {
            line,
            message: format!("expected {expected_len} fields, found {len}"),
        },
        other => Error::Parse {
            line,
            message: format!("{other:?}"),
        },
    }
}

/// Noise-free outputs of the interferometer for a pure input mode.
pub fn ideal_interferogram(mode: &SpectralMode, config: ShearConfig) -> Result<Interferogram> {
    let grid = *mode.grid();
    config.validate(&grid)?;
    // ψ̃(ω+Ω) is ψ̃ sheared by −Ω.
    let sheared = apply_shear(mode, -config.shear)?;
    let delayed = apply_delay(mode, config.delay);
    let (plus, minus) = delayed
        .amplitude()
        .iter()
        .zip(sheared.amplitude())
        .map(|(d, s)| (0.25 * (d + s).norm_sqr(), 0.25 * (d - s).norm_sqr()))
        .unzip();
    Ok(Interferogram {
        grid,
        plus,
        minus,
        kind: RecordKind::Ideal,
        config,
        total_counts: None,
        seed: None,
    })
}

/// Poisson photon counting on both outputs.
///
/// Bin `i` of each output receives Poisson counts with mean
/// `total_counts·pᵢ`, where `pᵢ` is that bin's share of the summed
/// two-output intensity. Deterministic for a fixed seed.
pub fn detect_counts(ideal: &Interferogram, total_counts: i64, seed: u64) -> Result<Interferogram> {
    if total_counts < 0 {
        return Err(Error::invalid(format!("total_counts must be >= 0, got {total_counts}")));
    }
    let total: f64 = ideal.plus.iter().chain(&ideal.minus).sum();
    if !(total > 0.0) && total_counts > 0 {
        return Err(Error::Degenerate("interferogram carries no intensity".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample = |mean: f64| -> f64 {
        if mean <= 0.0 {
            return 0.0;
        }
        // Poisson::new only fails for non-positive or non-finite means.
        Poisson::new(mean).map(|d| d.sample(&mut rng)).unwrap_or(0.0)
    };
    let scale = if total > 0.0 { total_counts as f64 / total } else { 0.0 };
    let plus = ideal.plus.iter().map(|&v| sample(v * scale)).collect();
    let minus = ideal.minus.iter().map(|&v| sample(v * scale)).collect();
    Ok(Interferogram {
        grid: ideal.grid,
        plus,
        minus,
        kind: RecordKind::Counts,
        config: ideal.config,
        total_counts: Some(total_counts as u64),
        seed: Some(seed),
    })
}
