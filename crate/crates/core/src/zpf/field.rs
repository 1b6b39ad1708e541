use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::zpf::modes::ModeSet;

/// One Gaussian draw of the complex mode amplitudes `c_j`.
///
/// Amplitudes are in √(J·s·rad/s), so `|c_j|²` compares directly with ħω_j.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldRealization {
    pub amplitudes: Vec<Complex64>,
    pub mode_set_id: u64,
}

/// Complex Gaussian amplitude with density ∝ exp(−2|c|²/ħω): real and
/// imaginary parts independent with variance ħω/4 each.
pub fn sample_mode_amplitude<R: Rng + ?Sized>(omega: f64, hbar: f64, rng: &mut R) -> Complex64 {
    let sigma = (0.25 * hbar * omega).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(sigma * re, sigma * im)
}

pub fn sample_amplitudes<R: Rng + ?Sized>(
    mode_set: &ModeSet,
    constants: &PhysicalConstants,
    rng: &mut R,
) -> FieldRealization {
    let amplitudes = mode_set
        .modes
        .iter()
        .map(|m| sample_mode_amplitude(m.omega, constants.hbar, rng))
        .collect();
    FieldRealization {
        amplitudes,
        mode_set_id: mode_set.id(),
    }
}

/// Relative size of the imaginary residual tolerated in the field sum.
const REALITY_TOLERANCE: f64 = 1e-10;

/// Electric field `(1/√V)·Σ_j [c_j ε_j e^{i(k_j·r − ω_j t)} + c.c.]` at `(r, t)`.
pub fn evaluate_field(
    realization: &FieldRealization,
    mode_set: &ModeSet,
    r: [f64; 3],
    t: f64,
) -> Result<[f64; 3]> {
    if realization.amplitudes.len() != mode_set.len() {
        return Err(Error::Consistency(format!(
            "realization has {} amplitudes but the mode set has {} modes",
            realization.amplitudes.len(),
            mode_set.len()
        )));
    }
    if realization.mode_set_id != mode_set.id() {
        return Err(Error::Consistency(
            "realization was drawn for a different mode set".into(),
        ));
    }

    let mut sum = [Complex64::new(0.0, 0.0); 3];
    for (mode, &c) in mode_set.modes.iter().zip(&realization.amplitudes) {
        let phase = mode.k[0] * r[0] + mode.k[1] * r[1] + mode.k[2] * r[2] - mode.omega * t;
        let z = c * Complex64::from_polar(1.0, phase);
        for (acc, p) in sum.iter_mut().zip(mode.pol) {
            let term = z * p;
            *acc += term + term.conj();
        }
    }

    let scale = 1.0 / mode_set.config.volume.sqrt();
    let magnitude = sum.iter().map(|s| s.re * s.re).sum::<f64>().sqrt();
    let residual = sum.iter().map(|s| s.im * s.im).sum::<f64>().sqrt();
    if residual > REALITY_TOLERANCE * magnitude.max(f64::MIN_POSITIVE) {
        return Err(Error::NumericalInstability(format!(
            "field sum has imaginary residual {residual:e} against magnitude {magnitude:e}"
        )));
    }
    Ok(sum.map(|s| s.re * scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::derive_stream;
    use crate::zpf::modes::{build_mode_set, Mode};
    use crate::zpf::spectrum::SpectrumConfig;
    use std::f64::consts::PI;

    fn single_mode(omega: f64, volume: f64) -> ModeSet {
        let c = PhysicalConstants::codata().c;
        ModeSet {
            modes: vec![Mode {
                nu: omega / (2.0 * PI),
                omega,
                k: [0.0, 0.0, omega / c],
                pol: [
                    Complex64::new(1.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                ],
            }],
            config: SpectrumConfig::new(omega / (2.0 * PI), omega / (2.0 * PI), 1, volume).unwrap(),
        }
    }

    #[test]
    fn single_real_mode_at_origin() {
        let set = single_mode(2.0e15, 4.0);
        let real = FieldRealization {
            amplitudes: vec![Complex64::new(3.0, 0.0)],
            mode_set_id: set.id(),
        };
        let e = evaluate_field(&real, &set, [0.0; 3], 0.0).unwrap();
        assert!((e[0] - 2.0 * 3.0 / 2.0).abs() < 1e-15);
        assert_eq!(e[1], 0.0);
    }

    #[test]
    fn periodic_in_time() {
        let set = single_mode(2.0e15, 1.0);
        let real = FieldRealization {
            amplitudes: vec![Complex64::new(0.3, -1.1)],
            mode_set_id: set.id(),
        };
        let r = [1e-7, -2e-7, 3e-7];
        let t = 1.3e-15;
        let period = 2.0 * PI / set.modes[0].omega;
        let a = evaluate_field(&real, &set, r, t).unwrap();
        let b = evaluate_field(&real, &set, r, t + period).unwrap();
        let mag = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        for i in 0..3 {
            assert!((a[i] - b[i]).abs() <= 1e-10 * mag);
        }
    }

    #[test]
    fn linear_in_modes() {
        let k = PhysicalConstants::codata();
        let cfg = SpectrumConfig::new(1e14, 1e15, 2, 1e-15).unwrap();
        let set = build_mode_set(&cfg, &k, &mut derive_stream(1, &[])).unwrap();
        let real = sample_amplitudes(&set, &k, &mut derive_stream(1, &[1]));
        let r = [2e-7, 0.0, -1e-7];
        let both = evaluate_field(&real, &set, r, 4e-16).unwrap();

        let mut parts = [0.0; 3];
        for j in 0..2 {
            let sub = ModeSet {
                modes: vec![set.modes[j]],
                config: SpectrumConfig { n_modes: 1, ..cfg },
            };
            let sub_real = FieldRealization {
                amplitudes: vec![real.amplitudes[j]],
                mode_set_id: sub.id(),
            };
            let e = evaluate_field(&sub_real, &sub, r, 4e-16).unwrap();
            for i in 0..3 {
                parts[i] += e[i];
            }
        }
        let mag = both.iter().map(|x| x * x).sum::<f64>().sqrt();
        for i in 0..3 {
            assert!((both[i] - parts[i]).abs() <= 1e-12 * mag);
        }
    }

    #[test]
    fn mismatched_realization_rejected() {
        let set = single_mode(1e15, 1.0);
        let wrong_len = FieldRealization {
            amplitudes: vec![],
            mode_set_id: set.id(),
        };
        assert!(matches!(
            evaluate_field(&wrong_len, &set, [0.0; 3], 0.0),
            Err(Error::Consistency(_))
        ));
        let wrong_id = FieldRealization {
            amplitudes: vec![Complex64::new(1.0, 0.0)],
            mode_set_id: set.id() ^ 1,
        };
        assert!(matches!(
            evaluate_field(&wrong_id, &set, [0.0; 3], 0.0),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn amplitude_moments() {
        let hbar = PhysicalConstants::codata().hbar;
        let omega = 3.0e15;
        let mut rng = derive_stream(11, &[]);
        let n = 100_000;
        let (mut sum_re, mut sum_im, mut sq_re, mut sq_im) = (0.0, 0.0, 0.0, 0.0);
        for _ in 0..n {
            let c = sample_mode_amplitude(omega, hbar, &mut rng);
            sum_re += c.re;
            sum_im += c.im;
            sq_re += c.re * c.re;
            sq_im += c.im * c.im;
        }
        let n = n as f64;
        let quarter = hbar * omega / 4.0;
        let mean_sq = (sq_re + sq_im) / n;
        assert!((mean_sq / (hbar * omega / 2.0) - 1.0).abs() < 0.01);
        assert!((sq_re / n / quarter - 1.0).abs() < 0.02);
        assert!((sq_im / n / quarter - 1.0).abs() < 0.02);
        let se = (quarter / n).sqrt();
        assert!((sum_re / n).abs() < 3.0 * se);
        assert!((sum_im / n).abs() < 3.0 * se);
    }
}
