//! Dark-energy density from the gravitational energy of vacuum fluctuations
//! with correlation length equal to the Compton wavelength `h/(mc)`.

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

/// Observed dark-energy mass density, kg/m³ (order of magnitude).
pub const OBSERVED_DARK_ENERGY_DENSITY: f64 = 1e-26;

/// Agreement demanded between the two algebraic forms of the estimate.
const FORM_AGREEMENT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DarkEnergyEstimate {
    /// |ρ_DE| in kg/m³. The sign depends on the two-point correlation of the
    /// fluctuations and is left open.
    pub rho: f64,
    pub lambda_c: f64,
    pub mass: f64,
}

impl DarkEnergyEstimate {
    pub fn ratio_to_observed(&self) -> f64 {
        self.rho / OBSERVED_DARK_ENERGY_DENSITY
    }
}

fn check_mass(mass: f64) -> Result<()> {
    if mass.is_finite() && mass > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("mass must be positive, got {mass}")))
    }
}

/// `h/(mc)`
pub fn compton_wavelength(mass: f64, constants: &PhysicalConstants) -> Result<f64> {
    check_mass(mass)?;
    Ok(constants.h / (mass * constants.c))
}

/// `|ρ_DE| ~ G·m⁶·c²/h⁴`, cross-checked against the equivalent
/// `(G·m²/λ)·(1/λ³)/c²` with `λ = h/(mc)`.
pub fn dark_energy_density(mass: f64, constants: &PhysicalConstants) -> Result<DarkEnergyEstimate> {
    let lambda_c = compton_wavelength(mass, constants)?;
    let (g, h, c) = (constants.g, constants.h, constants.c);

    let direct = g * mass.powi(6) * c * c / h.powi(4);
    let via_length = (g * mass * mass / lambda_c) / lambda_c.powi(3) / (c * c);

    if (direct - via_length).abs() > FORM_AGREEMENT * direct {
        return Err(Error::Consistency(format!(
            "dark-energy forms disagree: {direct:e} vs {via_length:e}"
        )));
    }
    Ok(DarkEnergyEstimate {
        rho: direct,
        lambda_c,
        mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{MassPreset, ELECTRON_MASS};

    #[test]
    fn pion_compton_wavelength() {
        let k = PhysicalConstants::codata();
        let l = compton_wavelength(2.488e-28, &k).unwrap();
        assert!((l - 8.88e-15).abs() / 8.88e-15 < 1e-3, "{l}");
    }

    #[test]
    fn electron_compton_wavelength() {
        let l = compton_wavelength(ELECTRON_MASS, &PhysicalConstants::codata()).unwrap();
        assert!((l - 2.426_310_238_67e-12).abs() / l < 1e-9);
    }

    #[test]
    fn inverse_proportional() {
        let k = PhysicalConstants::codata();
        let a = compton_wavelength(1e-27, &k).unwrap();
        let b = compton_wavelength(2e-27, &k).unwrap();
        assert!((a / b - 2.0).abs() < 1e-14);
    }

    #[test]
    fn pion_density_near_observed() {
        let k = PhysicalConstants::codata();
        let e = dark_energy_density(MassPreset::Pion.kg(), &k).unwrap();
        // G·m⁶·c²/h⁴ with m = 2.48806e-28 kg evaluated by hand
        assert!((e.rho - 7.4e-27).abs() / 7.4e-27 < 0.01, "{}", e.rho);
        assert!(e.ratio_to_observed() > 1.0 / 3.0 && e.ratio_to_observed() < 3.0);
    }

    #[test]
    fn electron_density_is_tiny() {
        let e = dark_energy_density(ELECTRON_MASS, &PhysicalConstants::codata()).unwrap();
        let ratio = (MassPreset::Pion.kg() / ELECTRON_MASS).powi(6);
        let pion =
            dark_energy_density(MassPreset::Pion.kg(), &PhysicalConstants::codata()).unwrap();
        assert!((e.rho * ratio / pion.rho - 1.0).abs() < 1e-12);
        assert!((e.rho - 1.78e-41).abs() / 1.78e-41 < 0.01, "{}", e.rho);
    }

    #[test]
    fn sixth_power_scaling() {
        let k = PhysicalConstants::codata();
        for m in [1e-30, 3e-28, 5e-27] {
            let r = dark_energy_density(2.0 * m, &k).unwrap().rho
                / dark_energy_density(m, &k).unwrap().rho;
            assert!((r - 64.0).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_non_positive_mass() {
        let k = PhysicalConstants::codata();
        assert!(compton_wavelength(0.0, &k).is_err());
        assert!(dark_energy_density(-1.0, &k).is_err());
    }
}
