use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::constants::PhysicalConstants;
use crate::error::Result;
use crate::zpf::spectrum::SpectrumConfig;

/// One plane-wave mode with a linear polarization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub nu: f64,
    pub omega: f64,
    /// Wavevector, 1/m.
    pub k: [f64; 3],
    pub pol: [Complex64; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    pub modes: Vec<Mode>,
    pub config: SpectrumConfig,
}

impl ModeSet {
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Content fingerprint (FNV-1a over the bit patterns of every field),
    /// used to tie a [`FieldRealization`](super::FieldRealization) to the
    /// mode set it was drawn for.
    pub fn id(&self) -> u64 {
        let mut h = Fnv::default();
        let c = &self.config;
        for v in [c.nu_min, c.nu_max, c.volume] {
            h.write(v.to_bits());
        }
        h.write(c.n_modes as u64);
        for m in &self.modes {
            h.write(m.nu.to_bits());
            for v in m.k {
                h.write(v.to_bits());
            }
            for p in m.pol {
                h.write(p.re.to_bits());
                h.write(p.im.to_bits());
            }
        }
        h.0
    }
}

struct Fnv(u64);

impl Default for Fnv {
    fn default() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }
}

impl Fnv {
    fn write(&mut self, word: u64) {
        for byte in word.to_le_bytes() {
            self.0 ^= u64::from(byte);
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
    }
}

/// Draws `config.n_modes` modes.
///
/// Frequencies follow the isotropic mode density `∝ ν²` on the band,
/// directions are uniform on the sphere, and even/odd modes take the first
/// and second transverse polarization of their direction.
pub fn build_mode_set<R: Rng + ?Sized>(
    config: &SpectrumConfig,
    constants: &PhysicalConstants,
    rng: &mut R,
) -> Result<ModeSet> {
    config.validate()?;
    let lo3 = config.nu_min.powi(3);
    let hi3 = config.nu_max.powi(3);

    let modes = (0..config.n_modes)
        .map(|j| {
            let u: f64 = rng.random();
            let nu = if config.nu_min == config.nu_max {
                config.nu_min
            } else {
                (lo3 + u * (hi3 - lo3))
                    .cbrt()
                    .clamp(config.nu_min, config.nu_max)
            };
            let cos_theta = 2.0 * rng.random::<f64>() - 1.0;
            let phi = 2.0 * PI * rng.random::<f64>();
            let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
            let (sin_phi, cos_phi) = phi.sin_cos();

            let dir = [sin_theta * cos_phi, sin_theta * sin_phi, cos_theta];
            let e_theta = [cos_theta * cos_phi, cos_theta * sin_phi, -sin_theta];
            let e_phi = [-sin_phi, cos_phi, 0.0];
            let pol = if j % 2 == 0 { e_theta } else { e_phi };

            let omega = 2.0 * PI * nu;
            let k_mag = omega / constants.c;
            Mode {
                nu,
                omega,
                k: dir.map(|d| d * k_mag),
                pol: pol.map(|p| Complex64::new(p, 0.0)),
            }
        })
        .collect();

    Ok(ModeSet {
        modes,
        config: *config,
    })
}
