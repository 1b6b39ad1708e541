use clap::ValueEnum;
use serde_json::{json, Value};
use zpfsim::bell::{self, AngleSet, DetectorModel, LhvModel};
use zpfsim::mc::derive_stream;
use zpfsim::optics::{self, AnticorrelationConfig};
use zpfsim::sed::{self, OscillatorConfig, ParticleSpec};
use zpfsim::zpf::{self, PowerLawSpectrum, SpectralDensity, SpectrumConfig, TabulatedSpectrum};
use zpfsim::{cosmo, MassPreset, PhysicalConstants};

use crate::output::{emit, num, Failure, Report, Table};
use crate::{AngleArgs, Cli, Command, Format, MassArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    /// Constant S(ω).
    White,
    /// S(ω) ∝ ω³.
    Zpf,
}

/// Stream tags keep the random draws of different commands apart.
mod tag {
    pub const MODES: u64 = 1;
    pub const AMPLITUDES: u64 = 2;
    pub const OSCILLATOR: u64 = 3;
    pub const LHV: u64 = 4;
}

pub fn run(cli: &Cli) -> Result<(), Failure> {
    let constants = PhysicalConstants::codata();
    let (report, extra) = match &cli.command {
        Command::Spectrum {
            nu_min,
            nu_max,
            points,
        } => (spectrum(*nu_min, *nu_max, *points, &constants)?, None),
        Command::SampleZpf {
            nu_min,
            nu_max,
            modes,
            volume,
        } => (
            sample_zpf(cli.seed, *nu_min, *nu_max, *modes, *volume, &constants)?,
            None,
        ),
        Command::Autocorr {
            shape,
            omega_max,
            t_max,
            points,
            samples,
        } => (
            autocorr(*shape, *omega_max, *t_max, *points, *samples)?,
            None,
        ),
        Command::Oscillator {
            mass,
            omega0,
            gamma,
            coupling,
            dt,
            duration,
            band,
            x0,
            v0,
            trajectory,
            stride,
        } => {
            let (mass_kg, mass_label) = resolve_mass(mass, MassPreset::Electron)?;
            let particle = ParticleSpec::new(mass_kg, *coupling)?;
            let mut config =
                OscillatorConfig::with_damping(particle, *omega0, gamma.unwrap_or(*omega0 / 20.0));
            if let Some(dt) = dt {
                config.dt = *dt;
            }
            if let Some(d) = duration {
                config.duration = *d;
            }
            if let Some(b) = band {
                config.band = *b;
            }
            config.x0 = *x0;
            config.v0 = *v0;
            if *stride == 0 {
                return Err(Failure::Usage("--stride must be at least 1".into()));
            }
            let (report, dump) = oscillator(
                cli.seed,
                &config,
                &mass_label,
                trajectory.is_some().then_some(*stride),
                &constants,
            )?;
            (report, trajectory.clone().zip(dump))
        }
        Command::Uncertainty { mass, nu } => {
            let (m, label) = resolve_mass(mass, MassPreset::Electron)?;
            (uncertainty(m, &label, *nu, &constants)?, None)
        }
        Command::Locality {
            mass,
            speed,
            speed_fraction,
        } => {
            let (m, label) = resolve_mass(mass, MassPreset::Electron)?;
            let v = match (speed, speed_fraction) {
                (Some(v), None) => *v,
                (None, Some(f)) => f * constants.c,
                _ => {
                    return Err(Failure::Usage(
                        "give exactly one of --speed or --speed-fraction".into(),
                    ))
                }
            };
            (locality(m, &label, v, &constants)?, None)
        }
        Command::Beamsplitter {
            theta,
            i_signal,
            n_trials,
            block_size,
        } => (
            beamsplitter(cli, theta, *i_signal, *n_trials, *block_size)?,
            None,
        ),
        Command::ChshAnalytic { eta, epsilon } => (chsh_analytic(*eta, *epsilon)?, None),
        Command::ChshScan {
            eta_points,
            eta_min,
            eta_max,
            epsilon_points,
            epsilon_min,
            epsilon_max,
        } => (
            chsh_scan(
                grid(*eta_min, *eta_max, *eta_points)?,
                grid(*epsilon_min, *epsilon_max, *epsilon_points)?,
            )?,
            None,
        ),
        Command::ChshMc {
            eta,
            epsilon,
            n,
            angles,
            block_size,
        } => (
            chsh_mc(cli, *eta, *epsilon, *n, resolve_angles(angles), *block_size)?,
            None,
        ),
        Command::LhvCheck { models, states } => (lhv_check(cli.seed, *models, *states)?, None),
        Command::DarkEnergy { mass } => {
            let (m, label) = resolve_mass(mass, MassPreset::Pion)?;
            (dark_energy(m, &label, &constants)?, None)
        }
    };

    let text = report.render(cli.format)?;
    if let Some((path, dump)) = extra {
        emit(&dump, Some(&path))?;
    }
    emit(&text, cli.output.as_deref())?;
    if let Some(msg) = report.json.get("check_failure").and_then(Value::as_str) {
        return Err(Failure::Check(msg.to_string()));
    }
    Ok(())
}

fn resolve_mass(args: &MassArgs, default: MassPreset) -> Result<(f64, String), Failure> {
    match (args.mass, args.mass_kg) {
        (Some(p), None) => Ok((p.kg(), p.to_string())),
        (None, Some(kg)) => Ok((kg, "explicit".to_string())),
        (None, None) => Ok((default.kg(), default.to_string())),
        (Some(_), Some(_)) => Err(Failure::Usage(
            "--mass and --mass-kg are mutually exclusive".into(),
        )),
    }
}

fn mass_json(kg: f64, label: &str) -> Value {
    let source = label
        .parse::<MassPreset>()
        .map(MassPreset::source)
        .unwrap_or("user supplied");
    json!({ "mass_kg": kg, "preset": label, "source": source })
}

fn resolve_angles(a: &AngleArgs) -> AngleSet {
    let d = AngleSet::default();
    AngleSet {
        phi_a1: a.phi_a1.unwrap_or(d.phi_a1),
        phi_b1: a.phi_b1.unwrap_or(d.phi_b1),
        phi_a2: a.phi_a2.unwrap_or(d.phi_a2),
        phi_b2: a.phi_b2.unwrap_or(d.phi_b2),
    }
}

fn grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, Failure> {
    if points == 0 {
        return Err(Failure::Usage("grids need at least one point".into()));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect())
}

fn spectrum(
    nu_min: f64,
    nu_max: f64,
    points: usize,
    constants: &PhysicalConstants,
) -> Result<Report, Failure> {
    let nus = grid(nu_min, nu_max, points)?;
    let mut table = Table::new(&["nu", "spectral_density"]);
    let mut rows = Vec::with_capacity(nus.len());
    for nu in nus {
        let rho = zpf::spectral_density(nu, constants)?;
        table.push(vec![num(nu), num(rho)]);
        rows.push(json!({ "nu": nu, "spectral_density": rho }));
    }
    Ok(Report {
        json: json!({
            "config": { "nu_min": nu_min, "nu_max": nu_max, "points": points, "constants": constants },
            "units": "J/(m^3 Hz)",
            "rows": rows,
        }),
        table: Some(table),
        default_format: Format::Csv,
    })
}

fn sample_zpf(
    seed: u64,
    nu_min: f64,
    nu_max: f64,
    n_modes: usize,
    volume: f64,
    constants: &PhysicalConstants,
) -> Result<Report, Failure> {
    let config = SpectrumConfig::new(nu_min, nu_max, n_modes, volume)?;
    let modes = zpf::build_mode_set(&config, constants, &mut derive_stream(seed, &[tag::MODES]))?;
    let realization = zpf::sample_amplitudes(
        &modes,
        constants,
        &mut derive_stream(seed, &[tag::AMPLITUDES]),
    );
    let doc = zpf::ZpfDocument::new(&modes, &realization)?;

    let mut table = Table::new(&[
        "j", "nu", "kx", "ky", "kz", "pol_x", "pol_y", "pol_z", "re", "im",
    ]);
    for (j, (m, a)) in doc.modes.iter().zip(&doc.amplitudes).enumerate() {
        let mut row = vec![j.to_string(), num(m.nu)];
        row.extend(m.k.iter().map(|&v| num(v)));
        row.extend(m.pol_re.iter().map(|&v| num(v)));
        row.extend([num(a.re), num(a.im)]);
        table.push(row);
    }

    let mut json = serde_json::to_value(&doc).map_err(|e| Failure::Io(e.into()))?;
    json["seed"] = json!(seed);
    json["constants"] = json!(constants);
    Ok(Report {
        json,
        table: Some(table),
        default_format: Format::Json,
    })
}

fn autocorr(
    shape: Shape,
    omega_max: f64,
    t_max: f64,
    points: usize,
    samples: usize,
) -> Result<Report, Failure> {
    if !(omega_max.is_finite() && omega_max > 0.0) {
        return Err(Failure::Usage("--omega-max must be positive".into()));
    }
    let exponent = match shape {
        Shape::White => 0.0,
        Shape::Zpf => 3.0,
    };
    let law = PowerLawSpectrum {
        s0: 1.0,
        exponent,
        omega_max,
    };
    let table_spec = TabulatedSpectrum::from_fn(omega_max, samples, |w| law.density(w))?;
    let lags = grid(0.0, t_max / omega_max, points)?;

    let zero = zpf::autocorrelation(&table_spec, 0.0)?;
    let mut table = Table::new(&["t", "correlation", "normalized"]);
    let mut rows = Vec::new();
    for t in lags {
        let c = zpf::autocorrelation(&table_spec, t)?;
        table.push(vec![num(t), num(c), num(c / zero)]);
        rows.push(json!({ "t": t, "correlation": c, "normalized": c / zero }));
    }
    Ok(Report {
        json: json!({
            "config": {
                "shape": format!("{shape:?}").to_lowercase(),
                "omega_max": omega_max, "t_max_over_omega": t_max,
                "points": points, "samples": samples,
            },
            "rows": rows,
        }),
        table: Some(table),
        default_format: Format::Csv,
    })
}

fn oscillator(
    seed: u64,
    config: &OscillatorConfig,
    mass_label: &str,
    stride: Option<usize>,
    constants: &PhysicalConstants,
) -> Result<(Report, Option<String>), Failure> {
    config.validate()?;
    let mut dump = stride.map(|_| String::from("t,x,v\n"));
    let mut step = 0usize;
    let stats = sed::simulate_oscillator_with(
        config,
        constants,
        &mut derive_stream(seed, &[tag::OSCILLATOR]),
        |t, x, v| {
            if let (Some(buf), Some(every)) = (dump.as_mut(), stride) {
                if step.is_multiple_of(every) {
                    buf.push_str(&format!("{},{},{}\n", num(t), num(x), num(v)));
                }
            }
            step += 1;
        },
    )?;

    let target_x = config.target_var_x(constants);
    let mut table = Table::new(&["var_x", "var_p", "product_over_hbar2_4", "n_samples"]);
    table.push(vec![
        num(stats.var_x),
        num(stats.var_p),
        num(stats.product_over_hbar2_4),
        stats.n_samples.to_string(),
    ]);
    let report = Report {
        json: json!({
            "config": {
                "seed": seed,
                "mass": mass_json(config.particle.mass, mass_label),
                "coupling": config.particle.coupling,
                "omega0": config.omega0, "gamma": config.gamma, "dt": config.dt,
                "duration": config.duration, "band": config.band,
                "x0": config.x0, "v0": config.v0,
            },
            "var_x": stats.var_x,
            "var_p": stats.var_p,
            "product_over_hbar2_4": stats.product_over_hbar2_4,
            "n_samples": stats.n_samples,
            "target_var_x": target_x,
            "var_x_over_target": stats.var_x / target_x,
        }),
        table: Some(table),
        default_format: Format::Json,
    };
    Ok((report, dump))
}

fn uncertainty(
    mass: f64,
    label: &str,
    nu: f64,
    constants: &PhysicalConstants,
) -> Result<Report, Failure> {
    let d = sed::equilibrium_dispersions(mass, nu, constants)?;
    let product = d.dx * d.dp;
    let mut table = Table::new(&["mass_kg", "nu", "dx", "dp", "product", "hbar_over_2"]);
    table.push(vec![
        num(mass),
        num(nu),
        num(d.dx),
        num(d.dp),
        num(product),
        num(constants.hbar / 2.0),
    ]);
    Ok(Report {
        json: json!({
            "config": { "mass": mass_json(mass, label), "nu": nu },
            "dx": d.dx, "dp": d.dp, "product": product,
            "hbar_over_2": constants.hbar / 2.0,
        }),
        table: Some(table),
        default_format: Format::Json,
    })
}

fn locality(
    mass: f64,
    label: &str,
    v: f64,
    constants: &PhysicalConstants,
) -> Result<Report, Failure> {
    let l = sed::min_spacelike_distance(mass, v, constants)?;
    let mut table = Table::new(&["mass_kg", "speed", "min_distance_m"]);
    table.push(vec![num(mass), num(v), num(l)]);
    Ok(Report {
        json: json!({
            "config": { "mass": mass_json(mass, label), "speed": v },
            "reduced_compton_m": constants.hbar / (mass * constants.c),
            "min_distance_m": l,
        }),
        table: Some(table),
        default_format: Format::Json,
    })
}

fn beamsplitter(
    cli: &Cli,
    thetas: &[f64],
    i_signal: f64,
    n_trials: u64,
    block_size: u64,
) -> Result<Report, Failure> {
    if thetas.is_empty() {
        return Err(Failure::Usage("--theta needs at least one value".into()));
    }
    let configs: Vec<AnticorrelationConfig> = thetas
        .iter()
        .map(|&theta| AnticorrelationConfig {
            i_signal,
            theta,
            n_trials,
        })
        .collect();
    for c in &configs {
        c.validate()?;
    }

    let mut table = Table::new(&[
        "theta",
        "p_plus",
        "p_minus",
        "p_coinc",
        "alpha",
        "alpha_stderr",
        "n_trials",
    ]);
    let mut results = Vec::new();
    for c in &configs {
        let s = optics::run_anticorrelation(c, cli.seed, block_size, cli.worker_count())?;
        let (qp, qm, qc) = optics::click_probabilities_quadrature(c.theta)?;
        table.push(vec![
            num(c.theta),
            num(s.p_plus),
            num(s.p_minus),
            num(s.p_coinc),
            num(s.alpha),
            num(s.alpha_stderr),
            s.n_trials.to_string(),
        ]);
        results.push(json!({
            "theta": c.theta,
            "stats": s,
            "quadrature": {
                "p_plus": qp, "p_minus": qm, "p_coinc": qc,
                "alpha": if qp > 0.0 && qm > 0.0 { json!(qc / (qp * qm)) } else { Value::Null },
            },
        }));
    }
    Ok(Report {
        json: json!({
            "config": {
                "seed": cli.seed, "i_signal": i_signal, "n_trials": n_trials,
                "block_size": block_size, "theta": thetas,
            },
            "results": results,
        }),
        table: Some(table),
        default_format: Format::Csv,
    })
}

fn chsh_analytic(eta: f64, epsilon: f64) -> Result<Report, Failure> {
    let det = DetectorModel::new(eta, epsilon)?;
    let s = bell::chsh_real(&det);
    let crit = bell::critical_efficiency(epsilon)?;
    let violates = s > 2.0;
    let angles = AngleSet::default();
    let correlations: Vec<f64> = angles
        .settings()
        .iter()
        .map(|&(a, b)| bell::photon_correlation_real(a, b, &det))
        .collect();

    let mut table = Table::new(&["eta", "epsilon", "S", "critical_efficiency", "violates"]);
    table.push(vec![
        num(eta),
        num(epsilon),
        num(s),
        num(crit),
        violates.to_string(),
    ]);
    Ok(Report {
        json: json!({
            "config": { "eta": eta, "epsilon": epsilon, "angles": angles },
            "correlations": correlations,
            "S": s,
            "critical_efficiency": crit,
            "violates": violates,
        }),
        table: Some(table),
        default_format: Format::Json,
    })
}

fn chsh_scan(etas: Vec<f64>, epsilons: Vec<f64>) -> Result<Report, Failure> {
    let points = bell::loophole_scan(&etas, &epsilons)?;
    let mut table = Table::new(&["eta", "epsilon", "chsh_value", "violates"]);
    for p in &points {
        table.push(vec![
            num(p.eta),
            num(p.epsilon),
            num(p.chsh_value),
            u8::from(p.violates).to_string(),
        ]);
    }
    let boundary: Vec<Value> = epsilons
        .iter()
        .map(|&e| Ok(json!({ "epsilon": e, "critical_efficiency": bell::critical_efficiency(e)? })))
        .collect::<Result<_, zpfsim::Error>>()?;
    Ok(Report {
        json: json!({
            "config": { "eta_grid": etas, "epsilon_grid": epsilons },
            "points": points,
            "boundary": boundary,
        }),
        table: Some(table),
        default_format: Format::Csv,
    })
}

fn chsh_mc(
    cli: &Cli,
    eta: f64,
    epsilon: f64,
    n: u64,
    angles: AngleSet,
    block_size: u64,
) -> Result<Report, Failure> {
    let det = DetectorModel::new(eta, epsilon)?;
    let result =
        bell::run_chsh_experiment(&angles, &det, n, cli.seed, block_size, cli.worker_count())?;

    let analytic: Vec<f64> = angles
        .settings()
        .iter()
        .map(|&(a, b)| bell::photon_correlation_real(a, b, &det))
        .collect();
    let analytic_s = bell::chsh_statistic(analytic[0], analytic[1], analytic[2], analytic[3]);
    let names = ["A1B1", "A2B1", "A2B2", "A1B2"];

    let mut table = Table::new(&["setting", "phi_a", "phi_b", "c", "stderr", "n", "analytic"]);
    let mut settings = Vec::new();
    for (i, (c, (a, b))) in result
        .correlations()
        .iter()
        .zip(angles.settings())
        .enumerate()
    {
        table.push(vec![
            names[i].to_string(),
            num(a),
            num(b),
            num(c.c),
            num(c.stderr),
            c.n.to_string(),
            num(analytic[i]),
        ]);
        settings.push(json!({
            "setting": names[i], "phi_a": a, "phi_b": b,
            "c": c.c, "stderr": c.stderr, "n": c.n, "analytic": analytic[i],
        }));
    }
    table.push(vec![
        "S".to_string(),
        String::new(),
        String::new(),
        num(result.s),
        num(result.s_stderr),
        (4 * n).to_string(),
        num(analytic_s),
    ]);

    Ok(Report {
        json: json!({
            "config": { "seed": cli.seed, "n_per_setting": n, "block_size": block_size },
            "angles": [angles.phi_a1, angles.phi_b1, angles.phi_a2, angles.phi_b2],
            "detector": { "eta": eta, "epsilon": epsilon },
            "settings": settings,
            "S": result.s,
            "S_stderr": result.s_stderr,
            "S_analytic": analytic_s,
        }),
        table: Some(table),
        default_format: Format::Json,
    })
}

fn lhv_check(seed: u64, models: usize, states: usize) -> Result<Report, Failure> {
    const BOUND: f64 = 2.0 + 1e-9;
    let labels = ["A1", "A2", "B1", "B2"];
    let mut rng = derive_stream(seed, &[tag::LHV]);
    let mut table = Table::new(&["model", "c11", "c21", "c22", "c12", "S"]);
    let mut max_s: f64 = 0.0;
    let mut violations = 0usize;
    for i in 0..models {
        let m = LhvModel::random(states, &labels, &mut rng)?;
        let e = |a, b| bell::lhv_expectation(&m, a, b);
        let c = [
            e("A1", "B1")?,
            e("A2", "B1")?,
            e("A2", "B2")?,
            e("A1", "B2")?,
        ];
        let s = bell::chsh_statistic(c[0], c[1], c[2], c[3]);
        max_s = max_s.max(s);
        if s > BOUND {
            violations += 1;
        }
        let mut row = vec![i.to_string()];
        row.extend(c.iter().map(|&v| num(v)));
        row.push(num(s));
        table.push(row);
    }
    let mut json = json!({
        "config": { "seed": seed, "models": models, "states": states, "bound": BOUND },
        "max_S": max_s,
        "violations": violations,
    });
    if violations > 0 {
        json["check_failure"] = json!(format!("{violations} models exceeded the CHSH bound"));
    }
    Ok(Report {
        json,
        table: Some(table),
        default_format: Format::Json,
    })
}

fn dark_energy(mass: f64, label: &str, constants: &PhysicalConstants) -> Result<Report, Failure> {
    let e = cosmo::dark_energy_density(mass, constants)?;
    let ratio = e.ratio_to_observed();
    let mut table = Table::new(&[
        "mass_kg",
        "compton_m",
        "rho_kg_m3",
        "observed_rho_kg_m3",
        "ratio",
    ]);
    table.push(vec![
        num(mass),
        num(e.lambda_c),
        num(e.rho),
        num(cosmo::OBSERVED_DARK_ENERGY_DENSITY),
        num(ratio),
    ]);
    Ok(Report {
        json: json!({
            "config": { "mass": mass_json(mass, label) },
            "mass_kg": mass,
            "compton_m": e.lambda_c,
            "rho_kg_m3": e.rho,
            "observed_rho_kg_m3": cosmo::OBSERVED_DARK_ENERGY_DENSITY,
            "ratio": ratio,
            "sign": "magnitude only; the sign depends on the two-point correlation of the fluctuations",
        }),
        table: Some(table),
        default_format: Format::Json,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn grids() {
        assert_eq!(grid(0.0, 1.0, 3).unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(grid(2.0, 5.0, 1).unwrap(), vec![2.0]);
        assert!(grid(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn angle_defaults_are_photon_optimal() {
        let a = resolve_angles(&AngleArgs {
            phi_a1: None,
            phi_b1: Some(0.5),
            phi_a2: None,
            phi_b2: None,
        });
        assert_eq!(a.phi_b1, 0.5);
        assert_eq!(a.phi_b2, 3.0 * PI / 8.0);
    }
}
