use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};

const WEIGHT_TOLERANCE: f64 = 1e-12;

/// Non-contextual hidden-variable model over finitely many states.
///
/// Each observable has, for every state λ, the probability of outcome +1;
/// the outcome of one observable never depends on which other observable is
/// measured alongside it.
#[derive(Debug, Clone, PartialEq)]
pub struct LhvModel {
    weights: Vec<f64>,
    responses: BTreeMap<String, Vec<f64>>,
}

impl LhvModel {
    pub fn new(weights: Vec<f64>, responses: BTreeMap<String, Vec<f64>>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::domain("model needs at least one hidden state"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::domain("state weights must be non-negative"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::domain(format!(
                "state weights sum to {total}, not 1"
            )));
        }
        for (label, probs) in &responses {
            if probs.len() != weights.len() {
                return Err(Error::domain(format!(
                    "observable `{label}` has {} responses for {} states",
                    probs.len(),
                    weights.len()
                )));
            }
            if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
                return Err(Error::domain(format!(
                    "observable `{label}` has a response outside [0, 1]"
                )));
            }
        }
        Ok(Self { weights, responses })
    }

    /// Random model: Dirichlet(1,…,1) weights and uniform responses for
    /// every label.
    pub fn random<R: Rng + ?Sized>(n_states: usize, labels: &[&str], rng: &mut R) -> Result<Self> {
        if n_states == 0 {
            return Err(Error::domain("model needs at least one hidden state"));
        }
        let raw: Vec<f64> = (0..n_states)
            .map(|_| -(1.0 - rng.random::<f64>()).ln())
            .collect();
        let total: f64 = raw.iter().sum();
        let mut weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        // absorb rounding so the sum is 1 to the last bit we can manage
        let drift = 1.0 - weights.iter().sum::<f64>();
        weights[0] = (weights[0] + drift).max(0.0);

        let responses = labels
            .iter()
            .map(|l| {
                let probs = (0..n_states).map(|_| rng.random::<f64>()).collect();
                (l.to_string(), probs)
            })
            .collect();
        Self::new(weights, responses)
    }

    pub fn n_states(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Probability of +1 for `label` in every state.
    pub fn responses(&self, label: &str) -> Result<&[f64]> {
        self.responses
            .get(label)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }
}

/// `Σ_λ ρ(λ)·⟨A⟩_λ·⟨B⟩_λ` with `⟨X⟩_λ = 2P₊(λ, X) − 1`.
pub fn lhv_expectation(model: &LhvModel, a: &str, b: &str) -> Result<f64> {
    let pa = model.responses(a)?;
    let pb = model.responses(b)?;
    Ok(model
        .weights
        .iter()
        .zip(pa.iter().zip(pb))
        .map(|(w, (p, q))| w * (2.0 * p - 1.0) * (2.0 * q - 1.0))
        .sum())
}
