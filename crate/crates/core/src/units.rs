//! Unit conversions between wavelength and angular frequency.
//!
//! Project-wide units: angular frequency in rad/fs, time in fs, wavelength
//! in nm.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Speed of light in nm/fs.
pub const SPEED_OF_LIGHT_NM_PER_FS: f64 = 299.792458;

/// `ω = 2πc/λ`.
pub fn wavelength_to_omega(lambda_nm: f64) -> Result<f64> {
    if !(lambda_nm > 0.0) || !lambda_nm.is_finite() {
        return Err(Error::invalid(format!("wavelength must be positive, got {lambda_nm} nm")));
    }
    Ok(2.0 * PI * SPEED_OF_LIGHT_NM_PER_FS / lambda_nm)
}

/// Inverse of [`wavelength_to_omega`].
pub fn omega_to_wavelength(omega: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::invalid(format!("angular frequency must be positive, got {omega}")));
    }
    Ok(2.0 * PI * SPEED_OF_LIGHT_NM_PER_FS / omega)
}

/// First-order conversion of a wavelength interval about `lambda0_nm` to an
/// angular-frequency interval, `Ω = 2πc·Δλ/λ₀²`.
///
/// Sign convention: a positive `dlambda_nm` denotes a shift towards shorter
/// wavelength and maps to a positive Ω.
pub fn shear_nm_to_omega(dlambda_nm: f64, lambda0_nm: f64) -> Result<f64> {
    if !(lambda0_nm > 0.0) || !lambda0_nm.is_finite() {
        return Err(Error::invalid(format!(
            "central wavelength must be positive, got {lambda0_nm} nm"
        )));
    }
    if !dlambda_nm.is_finite() {
        return Err(Error::invalid("wavelength shift must be finite"));
    }
    Ok(2.0 * PI * SPEED_OF_LIGHT_NM_PER_FS * dlambda_nm / (lambda0_nm * lambda0_nm))
}

/// Same first-order conversion used for bandwidths (FWHM in nm to rad/fs).
pub fn bandwidth_nm_to_omega(fwhm_nm: f64, lambda0_nm: f64) -> Result<f64> {
    if !(fwhm_nm > 0.0) {
        return Err(Error::invalid(format!("bandwidth must be positive, got {fwhm_nm} nm")));
    }
    shear_nm_to_omega(fwhm_nm, lambda0_nm)
}
