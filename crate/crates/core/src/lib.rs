//! Simulation and reconstruction of electro-optic spectral shearing
//! interferometry of single photons.
//!
//! A mode is synthesized on a [`grid::SpectralGrid`], sent through the
//! sheared and delayed interferometer ([`interferometer`]), counted, and
//! recovered by Fourier-transform fringe analysis ([`reconstruction`]).
//! [`analysis`] and [`wigner`] characterize the result; [`cli`] strings the
//! stages together as used by the `eosi` binary.
//!
//! ```
//! use eosi::grid::make_grid;
//! use eosi::interferometer::{ideal_interferogram, ShearConfig};
//! use eosi::mode::mode_overlap;
//! use eosi::reconstruction::{reconstruct, FtsiSettings};
//! use eosi::synthesis::{synthesize, PulseSpec, SpectralPhase};
//!
//! let spec = PulseSpec::gaussian(830.0, 8.0, SpectralPhase::Polynomial { poly_coeffs: vec![0.0, 8.7e4] });
//! let grid = make_grid(spec.carrier_omega()?, 10.0 * spec.bandwidth_omega()?, 4096)?;
//! let truth = synthesize(&spec, &grid)?;
//! let config = ShearConfig::new(1.5859e-3, 10_000.0);
//! let result = reconstruct(&ideal_interferogram(&truth, config)?, config, &FtsiSettings::for_delay(config.delay))?;
//! assert!((result.coefficients.phi2_fs2 - 8.7e4).abs() < 10.0);
//! assert!(mode_overlap(&result.mode, &truth)? > 0.999);
//! # Ok::<(), eosi::error::Error>(())
//! ```

// NaN must fail these range checks, which `!(x > 0.0)` does by construction.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fourier;
pub mod grid;
pub mod mode;
pub mod units;
pub mod wigner;
pub mod synthesis;
pub mod interferometer;
pub mod reconstruction;
pub mod analysis;
pub mod config;
pub mod cli;
