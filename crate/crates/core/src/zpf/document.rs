use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zpf::field::FieldRealization;
use crate::zpf::modes::{Mode, ModeSet};
use crate::zpf::spectrum::SpectrumConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeRecord {
    pub nu: f64,
    pub k: [f64; 3],
    pub pol_re: [f64; 3],
    pub pol_im: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeRecord {
    pub re: f64,
    pub im: f64,
}

/// JSON form of a mode set together with one realization of its amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZpfDocument {
    pub config: SpectrumConfig,
    pub modes: Vec<ModeRecord>,
    pub amplitudes: Vec<AmplitudeRecord>,
}

impl ZpfDocument {
    pub fn new(mode_set: &ModeSet, realization: &FieldRealization) -> Result<Self> {
        if realization.mode_set_id != mode_set.id()
            || realization.amplitudes.len() != mode_set.len()
        {
            return Err(Error::Consistency(
                "realization does not belong to this mode set".into(),
            ));
        }
        let modes = mode_set
            .modes
            .iter()
            .map(|m| ModeRecord {
                nu: m.nu,
                k: m.k,
                pol_re: m.pol.map(|p| p.re),
                pol_im: m.pol.map(|p| p.im),
            })
            .collect();
        let amplitudes = realization
            .amplitudes
            .iter()
            .map(|c| AmplitudeRecord { re: c.re, im: c.im })
            .collect();
        Ok(Self {
            config: mode_set.config,
            modes,
            amplitudes,
        })
    }

    /// Rebuilds the mode set and realization, re-checking their invariants.
    pub fn into_parts(self) -> Result<(ModeSet, FieldRealization)> {
        self.config.validate()?;
        if self.modes.len() != self.config.n_modes || self.amplitudes.len() != self.modes.len() {
            return Err(Error::Consistency(format!(
                "document lists {} modes and {} amplitudes for n_modes = {}",
                self.modes.len(),
                self.amplitudes.len(),
                self.config.n_modes
            )));
        }
        let modes = self
            .modes
            .into_iter()
            .map(|r| {
                if r.nu < self.config.nu_min || r.nu > self.config.nu_max {
                    return Err(Error::Consistency(format!(
                        "mode frequency {} outside the configured band",
                        r.nu
                    )));
                }
                let pol = std::array::from_fn(|i| Complex64::new(r.pol_re[i], r.pol_im[i]));
                Ok(Mode {
                    nu: r.nu,
                    omega: 2.0 * PI * r.nu,
                    k: r.k,
                    pol,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mode_set = ModeSet {
            modes,
            config: self.config,
        };
        let realization = FieldRealization {
            amplitudes: self
                .amplitudes
                .iter()
                .map(|a| Complex64::new(a.re, a.im))
                .collect(),
            mode_set_id: mode_set.id(),
        };
        Ok((mode_set, realization))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PhysicalConstants;
    use crate::mc::derive_stream;
    use crate::zpf::{build_mode_set, sample_amplitudes};

    #[test]
    fn json_shape_and_round_trip() {
        let k = PhysicalConstants::codata();
        let cfg = SpectrumConfig::new(0.0, 1e15, 3, 1e-12).unwrap();
        let set = build_mode_set(&cfg, &k, &mut derive_stream(4, &[0])).unwrap();
        let real = sample_amplitudes(&set, &k, &mut derive_stream(4, &[1]));
        let doc = ZpfDocument::new(&set, &real).unwrap();
        let text = serde_json::to_string(&doc).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(value["config"]["nu_max"].is_number());
        assert_eq!(value["modes"].as_array().unwrap().len(), 3);
        for key in ["nu", "k", "pol_re", "pol_im"] {
            assert!(value["modes"][0].get(key).is_some(), "{key}");
        }
        assert!(value["amplitudes"][2]["im"].is_number());

        let back: ZpfDocument = serde_json::from_str(&text).unwrap();
        let (set2, real2) = back.into_parts().unwrap();
        assert_eq!(set2, set);
        assert_eq!(real2, real);
    }

    #[test]
    fn inconsistent_document_rejected() {
        let k = PhysicalConstants::codata();
        let cfg = SpectrumConfig::new(0.0, 1e15, 2, 1.0).unwrap();
        let set = build_mode_set(&cfg, &k, &mut derive_stream(4, &[0])).unwrap();
        let real = sample_amplitudes(&set, &k, &mut derive_stream(4, &[1]));
        let mut doc = ZpfDocument::new(&set, &real).unwrap();
        doc.amplitudes.pop();
        assert!(matches!(doc.into_parts(), Err(Error::Consistency(_))));
    }
}
