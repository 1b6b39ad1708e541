use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorModel {
    /// Detection efficiency in [0, 1].
    pub eta: f64,
    /// Dark counts per true detection, ≥ 0.
    pub epsilon: f64,
}

impl DetectorModel {
    pub fn new(eta: f64, epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::domain(format!("eta must lie in [0, 1], got {eta}")));
        }
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(Error::domain(format!(
                "epsilon must be >= 0, got {epsilon}"
            )));
        }
        Ok(Self { eta, epsilon })
    }

    pub const IDEAL: DetectorModel = DetectorModel {
        eta: 1.0,
        epsilon: 0.0,
    };
}

/// Analyzer angles in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleSet {
    pub phi_a1: f64,
    pub phi_b1: f64,
    pub phi_a2: f64,
    pub phi_b2: f64,
}

impl AngleSet {
    /// Spin-½ optimum: 0, π/4, π/2, 3π/4.
    pub fn spin_half_optimal() -> Self {
        Self {
            phi_a1: 0.0,
            phi_b1: FRAC_PI_4,
            phi_a2: 2.0 * FRAC_PI_4,
            phi_b2: 3.0 * FRAC_PI_4,
        }
    }

    /// Photon optimum, half the spin-½ angles: 0, π/8, π/4, 3π/8.
    pub fn photon_optimal() -> Self {
        Self {
            phi_a1: 0.0,
            phi_b1: FRAC_PI_8,
            phi_a2: FRAC_PI_4,
            phi_b2: 3.0 * FRAC_PI_8,
        }
    }

    /// `(φ_A, φ_B)` for the settings in CHSH order: A1B1, A2B1, A2B2, A1B2.
    pub fn settings(&self) -> [(f64, f64); 4] {
        [
            (self.phi_a1, self.phi_b1),
            (self.phi_a2, self.phi_b1),
            (self.phi_a2, self.phi_b2),
            (self.phi_a1, self.phi_b2),
        ]
    }
}

impl Default for AngleSet {
    fn default() -> Self {
        Self::photon_optimal()
    }
}

/// `|c11 + c21 + c22 − c12|`
pub fn chsh_statistic(c11: f64, c21: f64, c22: f64, c12: f64) -> f64 {
    (c11 + c21 + c22 - c12).abs()
}

/// Singlet-state correlation as printed: `½[1 + cos(φ_A − φ_B)]`.
pub fn singlet_correlation(phi_a: f64, phi_b: f64) -> f64 {
    0.5 * (1.0 + (phi_a - phi_b).cos())
}

/// `½[1 + cos(2φ_A − 2φ_B)]`
pub fn photon_correlation_ideal(phi_a: f64, phi_b: f64) -> f64 {
    0.5 * (1.0 + (2.0 * phi_a - 2.0 * phi_b).cos())
}

/// `1 − η(1+ε) + ½η²[1 + cos(2φ_A − 2φ_B)]`
pub fn photon_correlation_real(phi_a: f64, phi_b: f64, det: &DetectorModel) -> f64 {
    1.0 - det.eta * (1.0 + det.epsilon) + det.eta * det.eta * photon_correlation_ideal(phi_a, phi_b)
}

/// CHSH combination of [`photon_correlation_real`] at the photon-optimal
/// angles: `2 − 2η(1+ε) + η²(1+√2)`. Signed; values above 2 violate.
pub fn chsh_real(det: &DetectorModel) -> f64 {
    2.0 - 2.0 * det.eta * (1.0 + det.epsilon) + det.eta * det.eta * (1.0 + SQRT_2)
}

/// Largest efficiency that cannot violate: `min(1, 2(1+ε)/(1+√2))`.
pub fn critical_efficiency(epsilon: f64) -> Result<f64> {
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::domain(format!(
            "epsilon must be >= 0, got {epsilon}"
        )));
    }
    Ok((2.0 * (1.0 + epsilon) / (1.0 + SQRT_2)).min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub eta: f64,
    pub epsilon: f64,
    pub chsh_value: f64,
    pub violates: bool,
}

/// [`chsh_real`] over the grid, η outermost.
pub fn loophole_scan(eta_grid: &[f64], epsilon_grid: &[f64]) -> Result<Vec<ScanPoint>> {
    if eta_grid.is_empty() || epsilon_grid.is_empty() {
        return Err(Error::domain("scan grids must be non-empty"));
    }
    let mut out = Vec::with_capacity(eta_grid.len() * epsilon_grid.len());
    for &eta in eta_grid {
        for &epsilon in epsilon_grid {
            let det = DetectorModel::new(eta, epsilon)?;
            let chsh_value = chsh_real(&det);
            out.push(ScanPoint {
                eta,
                epsilon,
                chsh_value,
                violates: chsh_value > 2.0,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const QUANTUM: f64 = 1.0 + SQRT_2;

    #[test]
    fn chsh_examples() {
        assert_eq!(chsh_statistic(1.0, 1.0, 1.0, 1.0), 2.0);
        assert_eq!(chsh_statistic(0.0, 0.0, 0.0, 0.0), 0.0);
        let hi = 0.5 + SQRT_2 / 4.0;
        let lo = 0.5 - SQRT_2 / 4.0;
        assert!((chsh_statistic(hi, hi, hi, lo) - QUANTUM).abs() < 1e-15);
        assert!((QUANTUM - 2.41421).abs() < 1e-5);
    }

    #[test]
    fn singlet_values() {
        assert!((singlet_correlation(0.0, 0.0) - 1.0).abs() < 1e-15);
        assert!(singlet_correlation(0.0, PI).abs() < 1e-15);
        let a = AngleSet::spin_half_optimal();
        assert!((singlet_correlation(a.phi_a1, a.phi_b1) - 0.853_553_390_593_273_7).abs() < 1e-15);
        let c = a.settings().map(|(x, y)| singlet_correlation(x, y));
        assert!((chsh_statistic(c[0], c[1], c[2], c[3]) - QUANTUM).abs() < 1e-14);
    }

    #[test]
    fn photon_values() {
        assert!((photon_correlation_ideal(0.0, 0.0) - 1.0).abs() < 1e-15);
        assert!((photon_correlation_ideal(0.0, FRAC_PI_8) - (0.5 + SQRT_2 / 4.0)).abs() < 1e-15);
        assert!((photon_correlation_ideal(0.0, FRAC_PI_4) - 0.5).abs() < 1e-15);

        let ideal = DetectorModel::IDEAL;
        assert!((photon_correlation_real(0.3, 0.3, &ideal) - 1.0).abs() < 1e-15);
        assert!(
            (photon_correlation_real(0.0, FRAC_PI_8, &ideal) - (0.5 + SQRT_2 / 4.0)).abs() < 1e-15
        );
        let blind = DetectorModel::new(0.0, 0.3).unwrap();
        for phi in [0.0, 0.4, 1.9] {
            assert_eq!(photon_correlation_real(0.0, phi, &blind), 1.0);
        }
    }

    #[test]
    fn chsh_real_examples() {
        assert!((chsh_real(&DetectorModel::IDEAL) - QUANTUM).abs() < 1e-15);
        assert_eq!(chsh_real(&DetectorModel::new(0.0, 0.5).unwrap()), 2.0);
        let edge = DetectorModel::new(2.0 / QUANTUM, 0.0).unwrap();
        assert!((chsh_real(&edge) - 2.0).abs() < 1e-12);
        let p = DetectorModel::new(0.9, 0.0).unwrap();
        assert!((chsh_real(&p) - (2.0 - 1.8 + 0.81 * QUANTUM)).abs() < 1e-14);
        assert!((chsh_real(&p) - 2.1555).abs() < 1e-4);
    }

    #[test]
    fn consistent_with_pairwise_correlations() {
        let angles = AngleSet::photon_optimal();
        for (eta, eps) in [(1.0, 0.0), (0.7, 0.2), (0.33, 1.5), (0.0, 0.0)] {
            let det = DetectorModel::new(eta, eps).unwrap();
            let c = angles
                .settings()
                .map(|(a, b)| photon_correlation_real(a, b, &det));
            let s = c[0] + c[1] + c[2] - c[3];
            assert!((s - chsh_real(&det)).abs() < 1e-12);
        }
    }

    #[test]
    fn critical_values() {
        assert!((critical_efficiency(0.0).unwrap() - 0.828_427).abs() < 1e-6);
        assert!((critical_efficiency(0.1).unwrap() - 0.911_27).abs() < 1e-5);
        let knee = QUANTUM / 2.0 - 1.0;
        assert!((knee - 0.20711).abs() < 1e-5);
        assert_eq!(critical_efficiency(knee + 1e-9).unwrap(), 1.0);
        assert_eq!(critical_efficiency(3.0).unwrap(), 1.0);
        assert!(critical_efficiency(-0.1).is_err());
    }

    #[test]
    fn boundary_is_exact() {
        for eps in [0.0, 0.05, 0.1, 0.2] {
            let crit = critical_efficiency(eps).unwrap();
            assert!(crit < 1.0);
            let below = DetectorModel::new(crit - 1e-9, eps).unwrap();
            let above = DetectorModel::new(crit + 1e-9, eps).unwrap();
            assert!(chsh_real(&below) <= 2.0);
            assert!(chsh_real(&above) > 2.0);
        }
    }

    #[test]
    fn monotone_in_eta_and_epsilon() {
        for eps in [0.0, 0.1, 0.2] {
            let crit = critical_efficiency(eps).unwrap();
            let mut prev = f64::NEG_INFINITY;
            for i in 1..=200 {
                let eta = crit + (1.0 - crit) * i as f64 / 200.0;
                let v = chsh_real(&DetectorModel::new(eta, eps).unwrap());
                assert!(v > prev);
                prev = v;
            }
        }
        for eta in [0.1, 0.5, 1.0] {
            let mut prev = f64::INFINITY;
            for i in 0..100 {
                let v = chsh_real(&DetectorModel::new(eta, i as f64 * 0.01).unwrap());
                assert!(v < prev);
                prev = v;
            }
        }
    }

    #[test]
    fn scan_examples() {
        let pts = loophole_scan(&[1.0], &[0.0]).unwrap();
        assert!(pts[0].violates);
        assert!((pts[0].chsh_value - 2.41421).abs() < 1e-5);
        let pts = loophole_scan(&[0.9], &[0.0]).unwrap();
        assert!(pts[0].violates && (pts[0].chsh_value - 2.1555).abs() < 1e-4);
        assert!(loophole_scan(&[], &[0.0]).is_err());
        assert!(loophole_scan(&[1.2], &[0.0]).is_err());

        let etas: Vec<f64> = (0..50).map(|i| i as f64 / 49.0).collect();
        let eps: Vec<f64> = (0..10).map(|i| i as f64 * 0.05).collect();
        for p in loophole_scan(&etas, &eps).unwrap() {
            if p.eta < 0.82 * (1.0 + p.epsilon) {
                assert!(!p.violates, "{p:?}");
            }
        }
    }

    #[test]
    fn detector_validation() {
        assert!(DetectorModel::new(1.1, 0.0).is_err());
        assert!(DetectorModel::new(-0.1, 0.0).is_err());
        assert!(DetectorModel::new(0.5, -0.1).is_err());
        assert!(DetectorModel::new(0.5, f64::NAN).is_err());
    }
}
