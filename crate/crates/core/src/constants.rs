use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Planck constant, J·s (exact since the 2019 SI redefinition).
pub const PLANCK_H: f64 = 6.626_070_15e-34;
/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Newtonian constant of gravitation, m³/(kg·s²), CODATA 2018.
pub const GRAVITATIONAL_G: f64 = 6.674_30e-11;
/// Elementary charge, C (exact).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
pub const NEUTRON_MASS: f64 = 1.674_927_498_04e-27;
/// Charged pion rest energy in MeV.
pub const PION_MASS_MEV: f64 = 139.570;

/// Converts a rest energy in MeV to a mass in kg.
pub fn mev_to_kg(mev: f64) -> f64 {
    mev * 1.0e6 * ELEMENTARY_CHARGE / (SPEED_OF_LIGHT * SPEED_OF_LIGHT)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub h: f64,
    pub hbar: f64,
    pub c: f64,
    #[serde(rename = "G")]
    pub g: f64,
}

impl PhysicalConstants {
    /// CODATA 2018 values.
    pub fn codata() -> Self {
        Self {
            h: PLANCK_H,
            hbar: PLANCK_H / (2.0 * PI),
            c: SPEED_OF_LIGHT,
            g: GRAVITATIONAL_G,
        }
    }

    /// Builds a constant set from `h`, `c` and `G`; `hbar` is derived.
    pub fn new(h: f64, c: f64, g: f64) -> Result<Self> {
        for (name, v) in [("h", h), ("c", c), ("G", g)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self {
            h,
            hbar: h / (2.0 * PI),
            c,
            g,
        })
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata()
    }
}

/// Named particle masses accepted by the command-line tools.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MassPreset {
    Electron,
    Neutron,
    Pion,
}

impl MassPreset {
    pub fn kg(self) -> f64 {
        match self {
            MassPreset::Electron => ELECTRON_MASS,
            MassPreset::Neutron => NEUTRON_MASS,
            MassPreset::Pion => mev_to_kg(PION_MASS_MEV),
        }
    }

    /// Where the value comes from, for run metadata.
    pub fn source(self) -> &'static str {
        match self {
            MassPreset::Electron => "CODATA 2018 electron mass 9.1093837015e-31 kg",
            MassPreset::Neutron => "CODATA 2018 neutron mass 1.67492749804e-27 kg",
            MassPreset::Pion => "charged pion 139.570 MeV/c^2 converted with exact e and c",
        }
    }
}

impl fmt::Display for MassPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MassPreset::Electron => "electron",
            MassPreset::Neutron => "neutron",
            MassPreset::Pion => "pion",
        })
    }
}

impl FromStr for MassPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "electron" => Ok(MassPreset::Electron),
            "neutron" => Ok(MassPreset::Neutron),
            "pion" => Ok(MassPreset::Pion),
            other => Err(Error::domain(format!("unknown mass preset `{other}`"))),
        }
    }
}
