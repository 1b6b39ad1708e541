//! Beam splitter with vacuum input and the Monte Carlo anticorrelation
//! experiment.
//!
//! Intensities are in units where the ZPF in the signal mode carries `I₀`
//! and a detector only sees what lies above that level. Both output arms
//! sit above or below it depending on the random phases of the signal
//! relative to the two ZPF inputs.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mc::{run_trials, Tally, TrialPlan};
use crate::quad::adaptive_simpson;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitterInput {
    pub e_signal: Complex64,
    /// ZPF entering with the signal.
    pub e_zpf: Complex64,
    /// ZPF entering the empty port.
    pub e_zpf_prime: Complex64,
}

impl SplitterInput {
    pub fn new(e_signal: Complex64, e_zpf: Complex64, e_zpf_prime: Complex64) -> Self {
        Self {
            e_signal,
            e_zpf,
            e_zpf_prime,
        }
    }
}

/// Output amplitudes. Transmission keeps the phase, reflection adds π/2.
pub fn splitter_outputs(input: &SplitterInput) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let s = (input.e_signal + input.e_zpf) * FRAC_1_SQRT_2;
    let z = input.e_zpf_prime * FRAC_1_SQRT_2;
    (s + i * z, i * s + z)
}

/// `I± = ½|E_s+E_z|² + ½|E′_z|² ± Im[(E_s+E_z)*·E′_z]`.
///
/// With the phase convention of [`splitter_outputs`], `I₊` is the intensity
/// of the second (reflected-signal) output and `I₋` that of the first.
pub fn output_intensities(input: &SplitterInput) -> (f64, f64) {
    let s = input.e_signal + input.e_zpf;
    let z = input.e_zpf_prime;
    let common = 0.5 * s.norm_sqr() + 0.5 * z.norm_sqr();
    let cross = (s.conj() * z).im;
    (common + cross, common - cross)
}

/// Output intensities above the ZPF level for phases `phi1` (signal vs. its
/// own ZPF) and `phi2` (signal vs. the empty-port ZPF):
/// `I± − I₀ = I_s·[3/4 + (√2/2)cos φ₁ ± (√2 sin φ₁ + sin φ₂)]`.
pub fn anticorrelation_intensities(i_signal: f64, phi1: f64, phi2: f64) -> (f64, f64) {
    let (common, split) = intensity_terms(phi1, phi2);
    (i_signal * (common + split), i_signal * (common - split))
}

fn intensity_terms(phi1: f64, phi2: f64) -> (f64, f64) {
    let (s1, c1) = phi1.sin_cos();
    (0.75 + 0.5 * SQRT_2 * c1, SQRT_2 * s1 + phi2.sin())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnticorrelationConfig {
    /// Signal intensity in units of I₀.
    pub i_signal: f64,
    /// Detection threshold in units of `i_signal`.
    pub theta: f64,
    pub n_trials: u64,
}

impl AnticorrelationConfig {
    pub const DEFAULT_THETA: f64 = 1.0;

    pub fn validate(&self) -> Result<()> {
        if !(self.i_signal.is_finite() && self.i_signal > 0.0) {
            return Err(Error::domain(format!(
                "signal intensity must be positive, got {}",
                self.i_signal
            )));
        }
        if self.theta.is_nan() {
            return Err(Error::domain("threshold must not be NaN"));
        }
        if self.n_trials == 0 {
            return Err(Error::domain("need at least one trial"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnticorrelationStats {
    pub p_plus: f64,
    pub p_minus: f64,
    pub p_coinc: f64,
    /// `p_coinc / (p_plus·p_minus)`; NaN when either single rate is zero.
    pub alpha: f64,
    pub p_plus_stderr: f64,
    pub p_minus_stderr: f64,
    pub p_coinc_stderr: f64,
    pub alpha_stderr: f64,
    pub n_trials: u64,
}

impl AnticorrelationStats {
    /// Binomial errors for the rates and a delta-method error for α that
    /// accounts for the correlation between the three indicators.
    fn from_counts(plus: u64, minus: u64, coinc: u64, n: u64) -> Self {
        let nf = n as f64;
        let (x, y, z) = (plus as f64 / nf, minus as f64 / nf, coinc as f64 / nf);
        let binomial = |p: f64| (p * (1.0 - p) / nf).sqrt();
        let (alpha, alpha_stderr) = if x > 0.0 && y > 0.0 {
            let alpha = z / (x * y);
            let grad = [-alpha / x, -alpha / y, 1.0 / (x * y)];
            let cov = [
                [x * (1.0 - x), z - x * y, z - x * z],
                [z - x * y, y * (1.0 - y), z - y * z],
                [z - x * z, z - y * z, z * (1.0 - z)],
            ];
            let mut var = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    var += grad[i] * cov[i][j] * grad[j];
                }
            }
            (alpha, (var.max(0.0) / nf).sqrt())
        } else {
            (f64::NAN, f64::NAN)
        };
        Self {
            p_plus: x,
            p_minus: y,
            p_coinc: z,
            alpha,
            p_plus_stderr: binomial(x),
            p_minus_stderr: binomial(y),
            p_coinc_stderr: binomial(z),
            alpha_stderr,
            n_trials: n,
        }
    }
}

#[derive(Debug, Default)]
struct ClickCounts {
    n: u64,
    plus: u64,
    minus: u64,
    coinc: u64,
}

impl Tally for ClickCounts {
    type Sample = (bool, bool);

    fn record(&mut self, (p, m): (bool, bool)) {
        self.n += 1;
        self.plus += u64::from(p);
        self.minus += u64::from(m);
        self.coinc += u64::from(p && m);
    }

    fn merge(&mut self, other: Self) {
        self.n += other.n;
        self.plus += other.plus;
        self.minus += other.minus;
        self.coinc += other.coinc;
    }
}

/// Monte Carlo over uniform, independent phases φ₁ and φ₂. Detector D±
/// clicks when `I± − I₀ > θ·I_s`.
pub fn run_anticorrelation(
    config: &AnticorrelationConfig,
    seed: u64,
    block_size: u64,
    workers: usize,
) -> Result<AnticorrelationStats> {
    config.validate()?;
    let plan = TrialPlan::with_block_size(seed, config.n_trials, block_size)?;
    let threshold = config.theta * config.i_signal;
    let counts: ClickCounts = run_trials(&plan, workers, |rng, _| {
        let phi1 = 2.0 * PI * rng.random::<f64>();
        let phi2 = 2.0 * PI * rng.random::<f64>();
        let (plus, minus) = anticorrelation_intensities(config.i_signal, phi1, phi2);
        Ok::<_, Error>((plus > threshold, minus > threshold))
    })?;
    Ok(AnticorrelationStats::from_counts(
        counts.plus,
        counts.minus,
        counts.coinc,
        counts.n,
    ))
}

/// Click probabilities `(p_plus, p_minus, p_coinc)` by quadrature.
///
/// For fixed φ₁ the click conditions are bounds on `sin φ₂`, whose measure
/// over a uniform φ₂ is `½ − arcsin(a)/π`; the remaining φ₁ integral is
/// done adaptively.
pub fn click_probabilities_quadrature(theta: f64) -> Result<(f64, f64, f64)> {
    if theta.is_nan() {
        return Err(Error::domain("threshold must not be NaN"));
    }
    // P(sin φ₂ > a) for uniform φ₂
    let above = |a: f64| {
        if a <= -1.0 {
            1.0
        } else if a >= 1.0 {
            0.0
        } else {
            0.5 - a.asin() / PI
        }
    };
    // D+ needs sin φ₂ > lower, D- needs sin φ₂ < upper
    let bounds = |phi1: f64| {
        let (common, split1) = intensity_terms(phi1, 0.0);
        (theta - common - split1, common - split1 - theta)
    };

    let breaks = kinks(&bounds);
    let tol = 1e-11;
    let p_plus = kink_integral(|p| above(bounds(p).0), &breaks, tol)?;
    let p_minus = kink_integral(|p| 1.0 - above(bounds(p).1), &breaks, tol)?;
    let p_coinc = kink_integral(
        |p| {
            let (lo, hi) = bounds(p);
            if hi > lo {
                above(lo) - above(hi)
            } else {
                0.0
            }
        },
        &breaks,
        tol,
    )?;
    Ok((p_plus, p_minus, p_coinc))
}

/// Points in [0, 2π] where a bound crosses ±1 or the two bounds cross.
/// There the φ₁ integrands have square-root kinks.
fn kinks(bounds: &impl Fn(f64) -> (f64, f64)) -> Vec<f64> {
    const SCAN: usize = 4096;
    let conditions: [&dyn Fn(f64) -> f64; 5] = [
        &|p| bounds(p).0 - 1.0,
        &|p| bounds(p).0 + 1.0,
        &|p| bounds(p).1 - 1.0,
        &|p| bounds(p).1 + 1.0,
        &|p| bounds(p).1 - bounds(p).0,
    ];
    let mut out = vec![0.0, 2.0 * PI];
    for g in conditions {
        let mut a = 0.0;
        let mut ga = g(a);
        for i in 1..=SCAN {
            let b = 2.0 * PI * i as f64 / SCAN as f64;
            let gb = g(b);
            if ga == 0.0 {
                out.push(a);
            } else if ga * gb < 0.0 {
                let (mut lo, mut hi, mut glo) = (a, b, ga);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    let gm = g(mid);
                    if gm * glo <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        glo = gm;
                    }
                }
                out.push(0.5 * (lo + hi));
            }
            a = b;
            ga = gb;
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|x, y| (*x - *y).abs() < 1e-13);
    out
}

/// Mean of `f` over [0, 2π] when `f` is smooth between `breaks` apart from
/// square-root behaviour at the breaks. Each panel is mapped by
/// `φ = a + (b−a)(1 − cos πu)/2`, whose vanishing Jacobian at the ends
/// removes the singular derivative.
fn kink_integral<F: Fn(f64) -> f64>(f: F, breaks: &[f64], tol: f64) -> Result<f64> {
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let half = 0.5 * (b - a);
        let g = |u: f64| {
            let (s, c) = (PI * u).sin_cos();
            f(a + half * (1.0 - c)) * half * PI * s
        };
        total += adaptive_simpson(g, 0.0, 1.0, tol * (b - a) / (2.0 * PI))?;
    }
    Ok(total / (2.0 * PI))
}
