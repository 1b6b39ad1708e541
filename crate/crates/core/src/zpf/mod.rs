//! The zero-point field as a concrete Gaussian random field.

mod autocorr;
mod document;
mod field;
mod modes;
mod spectrum;

pub use autocorr::{autocorrelation, PowerLawSpectrum, SpectralDensity, TabulatedSpectrum};
pub use document::{AmplitudeRecord, ModeRecord, ZpfDocument};
pub use field::{evaluate_field, sample_amplitudes, sample_mode_amplitude, FieldRealization};
pub use modes::{build_mode_set, Mode, ModeSet};
pub use spectrum::{spectral_density, SpectrumConfig};
