//! Bell/CHSH machinery: hidden-variable expectations, detector-degraded
//! quantum correlations, the detection-loophole boundary and a Monte Carlo
//! event generator.
//!
//! Outcomes are ±1 with "no click" counted as −1, so an undetected pair
//! contributes a product of +1.

mod analytic;
mod events;
mod lhv;

pub use analytic::{
    chsh_real, chsh_statistic, critical_efficiency, loophole_scan, photon_correlation_ideal,
    photon_correlation_real, singlet_correlation, AngleSet, DetectorModel, ScanPoint,
};
pub use events::{
    estimate_correlation, generate_events, run_chsh_experiment, ChshResult, Correlation,
    EventBatch, JointClickDistribution,
};
pub use lhv::{lhv_expectation, LhvModel};
