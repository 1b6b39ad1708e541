//! Simulation and analysis toolkit for the stochastic zero-point-field (ZPF)
//! picture of quantum phenomena.
//!
//! The ZPF is treated as a real Gaussian random electromagnetic field with
//! spectral energy density `(4π/c³)·h·ν³`. On top of that field the crate
//! provides:
//!
//! - [`zpf`]: mode discretization, amplitude sampling, field evaluation and
//!   spectral autocorrelation.
//! - [`sed`]: equilibrium uncertainty products, a ZPF-driven oscillator and
//!   the spacelike-separation distance bound.
//! - [`optics`]: the beam splitter with vacuum input and the Monte Carlo
//!   anticorrelation experiment.
//! - [`bell`]: hidden-variable expectations, CHSH analytics with imperfect
//!   detectors and a Monte Carlo event generator.
//! - [`cosmo`]: the vacuum-fluctuation dark-energy estimate.
//! - [`mc`]: deterministic, schedule-independent parallel Monte Carlo.

pub mod bell;
pub mod constants;
pub mod cosmo;
pub mod error;
pub mod mc;
pub mod optics;
pub mod quad;
pub mod sed;
pub mod zpf;

pub use constants::{MassPreset, PhysicalConstants};
pub use error::{Error, Result};
pub use num_complex::Complex64;
