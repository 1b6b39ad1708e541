use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::piecewise_simpson;

/// Relative accuracy demanded of the correlation integral, measured against
/// the total power. Kept one decade below the advertised 1e-8.
const RELATIVE_TOLERANCE: f64 = 1e-9;

/// A non-negative spectrum `S(ω)` supported on `[0, Ω]`.
pub trait SpectralDensity {
    /// Upper band edge Ω, rad/s.
    fn band_limit(&self) -> f64;

    fn density(&self, omega: f64) -> f64;

    /// Points inside `(0, Ω)` where `S` is not smooth.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// `S` sampled on a uniform grid over `[0, Ω]`, linearly interpolated.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedSpectrum {
    omega_max: f64,
    values: Vec<f64>,
}

impl TabulatedSpectrum {
    /// `values[i]` is `S(i·Ω/(n−1))`.
    pub fn new(omega_max: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::domain("spectrum table needs at least two samples"));
        }
        if !(omega_max.is_finite() && omega_max > 0.0) {
            return Err(Error::domain(format!(
                "band limit must be positive, got {omega_max}"
            )));
        }
        if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::domain(format!(
                "spectrum values must be finite and non-negative, found {bad}"
            )));
        }
        Ok(Self { omega_max, values })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(omega_max: f64, samples: usize, f: F) -> Result<Self> {
        let n = samples.max(2);
        let step = omega_max / (n - 1) as f64;
        Self::new(omega_max, (0..n).map(|i| f(i as f64 * step)).collect())
    }

    fn step(&self) -> f64 {
        self.omega_max / (self.values.len() - 1) as f64
    }
}

impl SpectralDensity for TabulatedSpectrum {
    fn band_limit(&self) -> f64 {
        self.omega_max
    }

    fn density(&self, omega: f64) -> f64 {
        if !(0.0..=self.omega_max).contains(&omega) {
            return 0.0;
        }
        let x = omega / self.step();
        let i = (x.floor() as usize).min(self.values.len() - 2);
        let frac = x - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }

    fn breakpoints(&self) -> Vec<f64> {
        let step = self.step();
        (1..self.values.len() - 1)
            .map(|i| i as f64 * step)
            .collect()
    }
}

/// `S(ω) = s0·ωᵖ` on `[0, Ω]`. `p = 0` is the white spectrum, `p = 3` the
/// ZPF shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawSpectrum {
    pub s0: f64,
    pub exponent: f64,
    pub omega_max: f64,
}

impl SpectralDensity for PowerLawSpectrum {
    fn band_limit(&self) -> f64 {
        self.omega_max
    }

    fn density(&self, omega: f64) -> f64 {
        if self.exponent == 0.0 {
            self.s0
        } else {
            self.s0 * omega.powf(self.exponent)
        }
    }
}

/// `∫₀^Ω S(ω)·cos(ωt) dω`.
pub fn autocorrelation<S: SpectralDensity + ?Sized>(spectrum: &S, t: f64) -> Result<f64> {
    let omega_max = spectrum.band_limit();
    if !(omega_max.is_finite() && omega_max > 0.0) {
        return Err(Error::domain("spectrum must have a finite positive band"));
    }
    if !t.is_finite() {
        return Err(Error::domain("time must be finite"));
    }

    let mut breaks = spectrum.breakpoints();
    breaks.retain(|&w| w > 0.0 && w < omega_max);
    breaks.push(0.0);
    breaks.push(omega_max);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    // coarse pass sets the scale, second pass meets the relative target
    let peak = (0..=256)
        .map(|i| spectrum.density(omega_max * i as f64 / 256.0))
        .chain(breaks.iter().map(|&w| spectrum.density(w)))
        .fold(0.0, f64::max);
    if !peak.is_finite() {
        return Err(Error::domain("spectrum must be finite on its band"));
    }
    let rough = piecewise_simpson(|w| spectrum.density(w), &breaks, 1e-6 * peak * omega_max)?;
    let power = piecewise_simpson(
        |w| spectrum.density(w),
        &breaks,
        RELATIVE_TOLERANCE * rough.abs(),
    )?;
    if t == 0.0 || power == 0.0 {
        return Ok(power);
    }

    // at most half an oscillation of cos(ωt) per panel
    let half_period = PI / t.abs();
    let mut panels = Vec::with_capacity(breaks.len());
    for w in breaks.windows(2) {
        let n = ((w[1] - w[0]) / half_period).ceil().max(1.0) as usize;
        let h = (w[1] - w[0]) / n as f64;
        panels.extend((0..n).map(|i| w[0] + i as f64 * h));
    }
    panels.push(omega_max);

    piecewise_simpson(
        |w| spectrum.density(w) * (w * t).cos(),
        &panels,
        RELATIVE_TOLERANCE * power,
    )
}
