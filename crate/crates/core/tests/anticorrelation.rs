use std::f64::consts::PI;

use zpfsim::mc::DEFAULT_BLOCK_SIZE;
use zpfsim::optics::{
    anticorrelation_intensities, click_probabilities_quadrature, run_anticorrelation,
    AnticorrelationConfig,
};

/// Midpoint rule on an `n × n` grid over (φ₁, φ₂).
fn grid_oracle(theta: f64, n: usize) -> (f64, f64, f64) {
    let h = 2.0 * PI / n as f64;
    let (mut p, mut m, mut c) = (0u64, 0u64, 0u64);
    for i in 0..n {
        let phi1 = (i as f64 + 0.5) * h;
        for j in 0..n {
            let phi2 = (j as f64 + 0.5) * h;
            let (a, b) = anticorrelation_intensities(1.0, phi1, phi2);
            let (ca, cb) = (a > theta, b > theta);
            p += u64::from(ca);
            m += u64::from(cb);
            c += u64::from(ca && cb);
        }
    }
    let total = (n * n) as f64;
    (p as f64 / total, m as f64 / total, c as f64 / total)
}

#[test]
fn quadrature_agrees_with_grid() {
    for theta in [0.0, 0.5, 1.0, 1.3] {
        let (qp, qm, qc) = click_probabilities_quadrature(theta).unwrap();
        let (gp, gm, gc) = grid_oracle(theta, 3000);
        for (q, g) in [(qp, gp), (qm, gm), (qc, gc)] {
            assert!((q - g).abs() < 2e-4, "theta {theta}: {q} vs {g}");
        }
    }
}

#[test]
fn monte_carlo_matches_oracle_at_unit_threshold() {
    let cfg = AnticorrelationConfig {
        i_signal: 1.0,
        theta: 1.0,
        n_trials: 1_000_000,
    };
    let s = run_anticorrelation(&cfg, 2024, DEFAULT_BLOCK_SIZE, 0).unwrap();
    let (gp, gm, gc) = grid_oracle(1.0, 4000);
    assert!(
        (s.p_plus - gp).abs() < 3.0 * s.p_plus_stderr,
        "{} vs {gp}",
        s.p_plus
    );
    assert!(
        (s.p_minus - gm).abs() < 3.0 * s.p_minus_stderr,
        "{} vs {gm}",
        s.p_minus
    );
    assert!(
        (s.p_coinc - gc).abs() < 3.0 * s.p_coinc_stderr,
        "{} vs {gc}",
        s.p_coinc
    );
    let alpha = gc / (gp * gm);
    assert!(
        (s.alpha - alpha).abs() < 3.0 * s.alpha_stderr,
        "{} vs {alpha}",
        s.alpha
    );
    assert!((1.0 - s.alpha) / s.alpha_stderr > 5.0);
    assert!(s.p_coinc <= s.p_plus.min(s.p_minus));
}

#[test]
fn signal_intensity_scales_out() {
    let base = AnticorrelationConfig {
        i_signal: 1.0,
        theta: 1.0,
        n_trials: 50_000,
    };
    let a = run_anticorrelation(&base, 3, 1000, 2).unwrap();
    let b = run_anticorrelation(
        &AnticorrelationConfig {
            i_signal: 7.5,
            ..base
        },
        3,
        1000,
        2,
    )
    .unwrap();
    assert_eq!(a, b);
}

#[test]
fn alpha_never_increases_with_threshold() {
    let mut last = f64::INFINITY;
    for i in 0..=40 {
        let theta = 2.0 * i as f64 / 40.0;
        let (p, m, c) = click_probabilities_quadrature(theta).unwrap();
        let alpha = if p > 0.0 && m > 0.0 { c / (p * m) } else { 0.0 };
        assert!(alpha <= last + 1e-9, "theta {theta}: {alpha} > {last}");
        last = alpha;
    }
}

#[test]
fn error_shrinks_as_root_n() {
    let cfg = |n| AnticorrelationConfig {
        i_signal: 1.0,
        theta: 1.0,
        n_trials: n,
    };
    let (qp, _, qc) = click_probabilities_quadrature(1.0).unwrap();
    let small = run_anticorrelation(&cfg(25_000), 8, DEFAULT_BLOCK_SIZE, 0).unwrap();
    let large = run_anticorrelation(&cfg(400_000), 8, DEFAULT_BLOCK_SIZE, 0).unwrap();
    let r = small.p_coinc_stderr / large.p_coinc_stderr;
    assert!((r / 4.0 - 1.0).abs() < 0.1, "{r}");
    assert!((large.p_plus - qp).abs() < 3.0 * large.p_plus_stderr);
    assert!((large.p_coinc - qc).abs() < 3.0 * large.p_coinc_stderr);
}
