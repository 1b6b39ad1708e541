use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

/// ZPF spectral energy density `(4π/c³)·h·ν³` in J/(m³·Hz).
pub fn spectral_density(nu: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !nu.is_finite() || nu < 0.0 {
        return Err(Error::domain(format!(
            "frequency must be finite and non-negative, got {nu}"
        )));
    }
    Ok(4.0 * PI / constants.c.powi(3) * constants.h * nu.powi(3))
}

/// Frequency band and normalization volume of a discretized field.
///
/// There is no default cutoff: `nu_max` must always be chosen explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumConfig {
    pub nu_min: f64,
    pub nu_max: f64,
    pub n_modes: usize,
    pub volume: f64,
}

impl SpectrumConfig {
    pub fn new(nu_min: f64, nu_max: f64, n_modes: usize, volume: f64) -> Result<Self> {
        let config = Self {
            nu_min,
            nu_max,
            n_modes,
            volume,
        };
        config.validate()?;
        Ok(config)
    }

    /// `nu_min == nu_max` is accepted as a degenerate single-frequency band.
    pub fn validate(&self) -> Result<()> {
        if !(self.nu_min.is_finite() && self.nu_max.is_finite()) {
            return Err(Error::domain("band edges must be finite"));
        }
        if self.nu_min.is_nan() || self.nu_min < 0.0 {
            return Err(Error::domain(format!(
                "nu_min must be >= 0, got {}",
                self.nu_min
            )));
        }
        if !(self.nu_max > 0.0 && self.nu_max >= self.nu_min) {
            return Err(Error::domain(format!(
                "need 0 <= nu_min <= nu_max with nu_max > 0, got [{}, {}]",
                self.nu_min, self.nu_max
            )));
        }
        if self.n_modes == 0 {
            return Err(Error::domain("n_modes must be at least 1"));
        }
        if !(self.volume.is_finite() && self.volume > 0.0) {
            return Err(Error::domain(format!(
                "volume must be positive, got {}",
                self.volume
            )));
        }
        Ok(())
    }
}
