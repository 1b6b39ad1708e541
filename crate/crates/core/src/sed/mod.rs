//! Mechanical consequences of the zero-point field.

mod oscillator;

pub use oscillator::{
    simulate_oscillator, simulate_oscillator_with, synthesize_drive, DampedPropagator,
    OscillatorConfig, TrajectoryStats,
};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParticleSpec {
    /// kg
    pub mass: f64,
    /// Dimensionless scale `g ≥ 0` applied to the calibrated ZPF drive.
    pub coupling: f64,
}

impl ParticleSpec {
    pub fn new(mass: f64, coupling: f64) -> Result<Self> {
        let spec = Self { mass, coupling };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass.is_finite() && self.mass > 0.0) {
            return Err(Error::domain(format!(
                "mass must be positive, got {}",
                self.mass
            )));
        }
        if !(self.coupling.is_finite() && self.coupling >= 0.0) {
            return Err(Error::domain(format!(
                "coupling must be non-negative, got {}",
                self.coupling
            )));
        }
        Ok(())
    }
}

/// Position and momentum spreads.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionPair {
    pub dx: f64,
    pub dp: f64,
}

/// Spreads of a particle in equilibrium with the ZPF mode at `nu`.
///
/// Kinetic energy balances half the mode energy, `m⟨v²⟩ = hν/2`; the orbit
/// relates `⟨v²⟩ = (2πν)²Δx²`; and `Δp² = m²⟨v²⟩`. The product is ħ/2.
pub fn equilibrium_dispersions(
    mass: f64,
    nu: f64,
    constants: &PhysicalConstants,
) -> Result<DispersionPair> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::domain(format!("mass must be positive, got {mass}")));
    }
    if !(nu.is_finite() && nu > 0.0) {
        return Err(Error::domain(format!(
            "frequency must be positive, got {nu}"
        )));
    }
    let v_rms = (constants.h * nu / (2.0 * mass)).sqrt();
    Ok(DispersionPair {
        dx: v_rms / (2.0 * PI * nu),
        dp: mass * v_rms,
    })
}

/// Flight distance `(ħ/mc)·(c/v)³` below which the position uncertainty of
/// a particle of speed `v` prevents a spacelike-separated measurement.
pub fn min_spacelike_distance(mass: f64, v: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::domain(format!("mass must be positive, got {mass}")));
    }
    if !(v > 0.0 && v < constants.c) {
        return Err(Error::domain(format!(
            "speed must satisfy 0 < v < c, got {v} m/s"
        )));
    }
    let reduced_compton = constants.hbar / (mass * constants.c);
    Ok(reduced_compton * (constants.c / v).powi(3))
}
