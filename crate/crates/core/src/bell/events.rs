use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bell::analytic::{chsh_statistic, AngleSet, DetectorModel};
use crate::error::{Error, Result};
use crate::mc::{run_trials, Tally, TrialPlan};

/// Slack for rounding when checking that the joint distribution is proper.
const VALIDITY_SLACK: f64 = 1e-15;

/// Per-pair click probabilities at one analyzer setting.
///
/// Each side clicks with marginal probability `p = η(1+ε)/4` and both click
/// with `p_both = (η²/8)[1 + cos 2Δ]`. The implied correlation
/// `1 − 4p + 4p_both` is the detector-degraded photon correlation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointClickDistribution {
    pub both: f64,
    pub a_only: f64,
    pub b_only: f64,
    pub neither: f64,
}

impl JointClickDistribution {
    pub fn new(det: &DetectorModel, phi_a: f64, phi_b: f64) -> Result<Self> {
        let p = 0.25 * det.eta * (1.0 + det.epsilon);
        let delta = phi_a - phi_b;
        let both = 0.125 * det.eta * det.eta * (1.0 + (2.0 * delta).cos());
        let single = p - both;
        let neither = 1.0 - 2.0 * p + both;
        if single < -VALIDITY_SLACK || neither < -VALIDITY_SLACK {
            return Err(Error::domain(format!(
                "eta = {}, epsilon = {} admit no joint click distribution",
                det.eta, det.epsilon
            )));
        }
        Ok(Self {
            both,
            a_only: single.max(0.0),
            b_only: single.max(0.0),
            neither: neither.max(0.0),
        })
    }

    pub fn expectation(&self) -> f64 {
        self.both + self.neither - self.a_only - self.b_only
    }
}

/// Outcome counts at one setting; `p` = click (+1), `m` = no click (−1),
/// A's outcome first.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventBatch {
    pub n_pp: u64,
    pub n_pm: u64,
    pub n_mp: u64,
    pub n_mm: u64,
    pub n: u64,
}

impl Tally for EventBatch {
    /// `(a_clicked, b_clicked)`
    type Sample = (bool, bool);

    fn record(&mut self, sample: (bool, bool)) {
        self.n += 1;
        match sample {
            (true, true) => self.n_pp += 1,
            (true, false) => self.n_pm += 1,
            (false, true) => self.n_mp += 1,
            (false, false) => self.n_mm += 1,
        }
    }

    fn merge(&mut self, other: Self) {
        self.n_pp += other.n_pp;
        self.n_pm += other.n_pm;
        self.n_mp += other.n_mp;
        self.n_mm += other.n_mm;
        self.n += other.n;
    }
}

/// Draws `n_per_setting` pairs at each of the four settings, in CHSH order.
///
/// Setting `i` uses the sub-plan `plan.substream(i)`, so its counts do not
/// depend on the other settings or on the worker count.
pub fn generate_events(
    angles: &AngleSet,
    det: &DetectorModel,
    n_per_setting: u64,
    seed: u64,
    block_size: u64,
    workers: usize,
) -> Result<[EventBatch; 4]> {
    let plan = TrialPlan::with_block_size(seed, n_per_setting, block_size)?;
    let mut out = [EventBatch::default(); 4];
    for (i, (phi_a, phi_b)) in angles.settings().into_iter().enumerate() {
        let dist = JointClickDistribution::new(det, phi_a, phi_b)?;
        let cut_both = dist.both;
        let cut_a = cut_both + dist.a_only;
        let cut_b = cut_a + dist.b_only;
        out[i] = run_trials(&plan.substream(i as u64), workers, |rng, _| {
            let u: f64 = rng.random();
            Ok::<_, Error>(if u < cut_both {
                (true, true)
            } else if u < cut_a {
                (true, false)
            } else if u < cut_b {
                (false, true)
            } else {
                (false, false)
            })
        })?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub c: f64,
    pub stderr: f64,
    pub n: u64,
}

/// `((n_pp + n_mm) − (n_pm + n_mp))/n` with stderr `√((1 − c²)/n)`.
pub fn estimate_correlation(batch: &EventBatch) -> Result<Correlation> {
    if batch.n < 2 {
        return Err(Error::domain(format!(
            "need at least 2 events to estimate a correlation, got {}",
            batch.n
        )));
    }
    let n = batch.n as f64;
    let agree = (batch.n_pp + batch.n_mm) as f64;
    let disagree = (batch.n_pm + batch.n_mp) as f64;
    let c = ((agree - disagree) / n).clamp(-1.0, 1.0);
    Ok(Correlation {
        c,
        stderr: ((1.0 - c * c) / n).sqrt(),
        n: batch.n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshResult {
    pub c11: Correlation,
    pub c21: Correlation,
    pub c22: Correlation,
    pub c12: Correlation,
    pub s: f64,
    /// Settings are independent, so errors add in quadrature.
    pub s_stderr: f64,
}

impl ChshResult {
    pub fn from_batches(batches: &[EventBatch; 4]) -> Result<Self> {
        let [c11, c21, c22, c12] = [
            estimate_correlation(&batches[0])?,
            estimate_correlation(&batches[1])?,
            estimate_correlation(&batches[2])?,
            estimate_correlation(&batches[3])?,
        ];
        let s = chsh_statistic(c11.c, c21.c, c22.c, c12.c);
        let s_stderr = [c11, c21, c22, c12]
            .iter()
            .map(|c| c.stderr * c.stderr)
            .sum::<f64>()
            .sqrt();
        Ok(Self {
            c11,
            c21,
            c22,
            c12,
            s,
            s_stderr,
        })
    }

    /// Correlations in CHSH order.
    pub fn correlations(&self) -> [Correlation; 4] {
        [self.c11, self.c21, self.c22, self.c12]
    }
}

/// [`generate_events`] followed by [`ChshResult::from_batches`].
pub fn run_chsh_experiment(
    angles: &AngleSet,
    det: &DetectorModel,
    n_per_setting: u64,
    seed: u64,
    block_size: u64,
    workers: usize,
) -> Result<ChshResult> {
    let batches = generate_events(angles, det, n_per_setting, seed, block_size, workers)?;
    ChshResult::from_batches(&batches)
}
