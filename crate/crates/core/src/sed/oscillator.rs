//! Damped oscillator driven by a narrow band of the zero-point field.
//!
//! The drive is synthesized on a periodic frequency lattice around ω₀ with
//! ZPF amplitudes (mean `|c|² = ħω/2`, 3-D mode density `∝ ω²`) and is
//! scaled so its one-sided spectral density at ω₀ equals
//! `2mγ·(ħω₀/2)/π`, the fluctuation–dissipation level that holds the
//! stationary variance at `ħ/(2mω₀)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::sed::ParticleSpec;
use crate::zpf::sample_mode_amplitude;

/// Upper bound on integration steps (and drive samples).
const MAX_STEPS: u64 = 1 << 26;
/// Transient discarded before collecting statistics, in units of 1/γ.
const TRANSIENT_DAMPING_TIMES: f64 = 10.0;
/// Mean energy above this multiple of the analytic target is an instability.
const INSTABILITY_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorConfig {
    pub particle: ParticleSpec,
    /// rad/s
    pub omega0: f64,
    /// Energy damping rate, 1/s.
    pub gamma: f64,
    pub dt: f64,
    pub duration: f64,
    /// Relative half-width of the driving band around ω₀.
    pub band: f64,
    pub x0: f64,
    pub v0: f64,
}

impl OscillatorConfig {
    /// Weak-coupling defaults: γ = ω₀/20, dt = 0.04/ω₀, 8000 damping
    /// times of simulated motion and a drive band of ±10γ.
    pub fn weak_coupling(particle: ParticleSpec, omega0: f64) -> Self {
        let gamma = omega0 / 20.0;
        Self::with_damping(particle, omega0, gamma)
    }

    /// Same defaults as [`weak_coupling`](Self::weak_coupling) for an
    /// explicit damping rate.
    pub fn with_damping(particle: ParticleSpec, omega0: f64, gamma: f64) -> Self {
        Self {
            particle,
            omega0,
            gamma,
            dt: 0.04 / omega0,
            duration: 8000.0 / gamma,
            band: 10.0 * gamma / omega0,
            x0: 0.0,
            v0: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.particle.validate()?;
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::domain(format!("{name} must be positive, got {v}")))
            }
        };
        positive("omega0", self.omega0)?;
        positive("gamma", self.gamma)?;
        positive("dt", self.dt)?;
        positive("duration", self.duration)?;
        positive("band", self.band)?;
        if !(self.x0.is_finite() && self.v0.is_finite()) {
            return Err(Error::domain("initial conditions must be finite"));
        }
        if self.gamma >= self.omega0 / 10.0 {
            return Err(Error::domain(format!(
                "weak damping requires gamma < omega0/10 (gamma = {}, omega0 = {})",
                self.gamma, self.omega0
            )));
        }
        if self.dt >= 0.05 / self.omega0 {
            return Err(Error::domain(format!(
                "time step must satisfy dt < 0.05/omega0 = {}",
                0.05 / self.omega0
            )));
        }
        if self.duration < 100.0 / self.gamma {
            return Err(Error::domain(format!(
                "duration must be at least 100/gamma = {}",
                100.0 / self.gamma
            )));
        }
        if self.band >= 1.0 {
            return Err(Error::domain("band half-width must be below omega0"));
        }
        if self.n_steps() > MAX_STEPS {
            return Err(Error::domain(format!(
                "run needs {} steps, limit is {MAX_STEPS}",
                self.n_steps()
            )));
        }
        Ok(())
    }

    pub fn n_steps(&self) -> u64 {
        (self.duration / self.dt).ceil() as u64
    }

    /// Stationary `var_x` the drive is calibrated for: `g²·ħ/(2mω₀)`.
    pub fn target_var_x(&self, constants: &PhysicalConstants) -> f64 {
        let g = self.particle.coupling;
        g * g * constants.hbar / (2.0 * self.particle.mass * self.omega0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryStats {
    pub var_x: f64,
    pub var_p: f64,
    /// `var_x·var_p / (ħ²/4)`
    pub product_over_hbar2_4: f64,
    pub n_samples: u64,
}

/// Exact one-step map of `ẍ + γẋ + ω₀²x = a` for constant `a` over the step.
///
/// With γ = 0 and a = 0 the map is a pure phase-space rotation, so energy is
/// conserved up to rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampedPropagator {
    omega0_sq: f64,
    a11: f64,
    a12: f64,
    a21: f64,
    a22: f64,
}

impl DampedPropagator {
    pub fn new(omega0: f64, gamma: f64, dt: f64) -> Result<Self> {
        let omega_d_sq = omega0 * omega0 - 0.25 * gamma * gamma;
        if omega_d_sq.is_nan() || omega_d_sq <= 0.0 {
            return Err(Error::domain("oscillator must be underdamped"));
        }
        let omega_d = omega_d_sq.sqrt();
        let decay = (-0.5 * gamma * dt).exp();
        let (s, c) = (omega_d * dt).sin_cos();
        let skew = 0.5 * gamma / omega_d * s;
        Ok(Self {
            omega0_sq: omega0 * omega0,
            a11: decay * (c + skew),
            a12: decay * s / omega_d,
            a21: -decay * omega0 * omega0 * s / omega_d,
            a22: decay * (c - skew),
        })
    }

    /// Advances `(x, v)` by one step under constant acceleration `accel`.
    pub fn step(&self, x: f64, v: f64, accel: f64) -> (f64, f64) {
        let offset = accel / self.omega0_sq;
        let y = x - offset;
        (
            self.a11 * y + self.a12 * v + offset,
            self.a21 * y + self.a22 * v,
        )
    }
}

/// Smallest 2ᵃ3ᵇ5ᶜ not below `n`.
fn fft_friendly_len(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut r = m;
        for p in [2, 3, 5] {
            while r.is_multiple_of(p) {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

/// Drive force samples `F(n·dt)`, in newtons, for `n = 0..=n_steps`.
pub fn synthesize_drive<R: Rng + ?Sized>(
    config: &OscillatorConfig,
    constants: &PhysicalConstants,
    rng: &mut R,
) -> Result<Vec<f64>> {
    config.validate()?;
    let n_samples = config.n_steps() as usize + 1;
    let g = config.particle.coupling;
    if g == 0.0 {
        return Ok(vec![0.0; n_samples]);
    }

    let len = fft_friendly_len(n_samples);
    let period = len as f64 * config.dt;
    let d_omega = 2.0 * PI / period;
    // one-sided density of the lattice sum is κ²·ħω·period/(2π)
    let kappa = (2.0 * config.particle.mass * config.gamma / period).sqrt();

    let lo = config.omega0 * (1.0 - config.band);
    let hi = config.omega0 * (1.0 + config.band);
    let k_lo = (lo / d_omega).ceil().max(1.0) as usize;
    let k_hi = ((hi / d_omega).floor() as usize).min(len / 2 - 1);

    let mut spectrum = vec![Complex64::new(0.0, 0.0); len];
    for (k, slot) in spectrum.iter_mut().enumerate().take(k_hi + 1).skip(k_lo) {
        let omega = k as f64 * d_omega;
        let c = sample_mode_amplitude(omega, constants.hbar, rng);
        *slot = c * (g * kappa * omega / config.omega0);
    }

    FftPlanner::new()
        .plan_fft_forward(len)
        .process(&mut spectrum);
    Ok(spectrum[..n_samples].iter().map(|z| 2.0 * z.re).collect())
}

/// Runs the oscillator and returns stationary statistics.
pub fn simulate_oscillator<R: Rng + ?Sized>(
    config: &OscillatorConfig,
    constants: &PhysicalConstants,
    rng: &mut R,
) -> Result<TrajectoryStats> {
    simulate_oscillator_with(config, constants, rng, |_, _, _| {})
}

/// As [`simulate_oscillator`], calling `observer(t, x, v)` at every step,
/// including the initial state.
pub fn simulate_oscillator_with<R, F>(
    config: &OscillatorConfig,
    constants: &PhysicalConstants,
    rng: &mut R,
    mut observer: F,
) -> Result<TrajectoryStats>
where
    R: Rng + ?Sized,
    F: FnMut(f64, f64, f64),
{
    let drive = synthesize_drive(config, constants, rng)?;
    let prop = DampedPropagator::new(config.omega0, config.gamma, config.dt)?;
    let m = config.particle.mass;
    let n_steps = config.n_steps();
    let discard = (TRANSIENT_DAMPING_TIMES / (config.gamma * config.dt)).ceil() as u64;

    let mut stats_x = Welford::default();
    let mut stats_v = Welford::default();
    let (mut x, mut v) = (config.x0, config.v0);
    observer(0.0, x, v);
    for n in 0..n_steps as usize {
        let accel = 0.5 * (drive[n] + drive[n + 1]) / m;
        (x, v) = prop.step(x, v, accel);
        if !(x.is_finite() && v.is_finite()) {
            return Err(Error::NumericalInstability(format!(
                "state became non-finite at step {}",
                n + 1
            )));
        }
        observer((n + 1) as f64 * config.dt, x, v);
        if n as u64 + 1 > discard {
            stats_x.push(x);
            stats_v.push(v);
        }
    }

    if stats_x.n < 2 {
        return Err(Error::domain(
            "run too short to leave samples after the transient",
        ));
    }
    let var_x = stats_x.variance();
    let var_p = m * m * stats_v.variance();

    let w2 = config.omega0 * config.omega0;
    let initial_energy = 0.5 * m * (config.v0 * config.v0 + w2 * config.x0 * config.x0);
    let target_energy = m * w2 * config.target_var_x(constants) + initial_energy;
    let mean_energy = 0.5 * var_p / m + 0.5 * m * w2 * var_x;
    if mean_energy > INSTABILITY_FACTOR * target_energy {
        return Err(Error::NumericalInstability(format!(
            "mean energy {mean_energy:e} J exceeds {INSTABILITY_FACTOR}x the target {target_energy:e} J"
        )));
    }

    let hbar2_4 = 0.25 * constants.hbar * constants.hbar;
    Ok(TrajectoryStats {
        var_x,
        var_p,
        product_over_hbar2_4: var_x * var_p / hbar2_4,
        n_samples: stats_x.n,
    })
}

#[derive(Debug, Default)]
struct Welford {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn variance(&self) -> f64 {
        self.m2 / (self.n - 1) as f64
    }
}
