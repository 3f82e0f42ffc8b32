//! Runs one validated scenario in memory. Nothing here touches the disk.

use std::f64::consts::{FRAC_PI_2, PI};

use berryshift::anomaly::{
    finite_difference_drift, helicity_drift, integrated_fractional_shift, pioneer_comparison,
    solve_ab_system, standard_theta_grid, summarize_sweep, PioneerConstants,
};
use berryshift::appendix::{
    dynamic_doppler_shift, dynamic_to_geometric_ratio, radial_metric_vector, velocity_correction,
};
use berryshift::evolution::{evolve_with, parallel_transport_residual};
use berryshift::geometric::{
    connection_integral, cycle_phase, geodesic_polygon, pancharatnam_phase, trajectory_phase,
};
use berryshift::phase::wrap;
use berryshift::{
    EvolutionTrajectory, PhaseDecomposition, PoincarePoint, PolarizationSpinor, ProbeState,
    StateSequence, Tolerances,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::config::{Output, ScenarioConfig};
use crate::error::CliError;
use crate::report::*;

/// Step counts of the convergence sweep.
pub const SWEEP_STEPS: [usize; 3] = [1_000, 10_000, 100_000];

/// Relative tolerance on `γ_numeric` against `cos θ·Δφ/2`.
pub const GAMMA_RELATIVE_TOLERANCE: f64 = 1e-6;
pub const TRANSPORT_TOLERANCE: f64 = 1e-10;
pub const NORM_TOLERANCE: f64 = 1e-12;
pub const GAUGE_TOLERANCE: f64 = 1e-12;
pub const CYCLE_TOLERANCE: f64 = 1e-8;
pub const SPREAD_TOLERANCE: f64 = 1e-15;
pub const AB_RESIDUAL_FACTOR: f64 = 1e-25;
const GAUGE_SEED: u64 = 0x6265_7272_7973;

/// Report plus the optional trajectory CSV text.
#[derive(Debug, Clone)]
pub struct ScenarioOutput {
    pub report: RunReport,
    pub csv: Option<String>,
}

pub fn config_hash(config: &ScenarioConfig) -> String {
    let canonical = serde_json::to_vec(config).expect("config echo serializes");
    format!("{:x}", Sha256::digest(&canonical))
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioOutput, CliError> {
    let name = config.name.as_str();
    let core = |e| CliError::from_core(name, e);
    let tol = Tolerances::DEFAULT;
    let s = config.scenario();
    let m = config.model();

    let epsilon = config.epsilon();
    if epsilon.abs() > tol.adiabatic_refuse {
        return Err(core(berryshift::Error::Adiabaticity { epsilon, bound: tol.adiabatic_refuse }));
    }

    let needs_trajectory = config.wants(Output::Trajectory) || config.wants(Output::Phases);
    let traj = if needs_trajectory { Some(evolve_with(&s, &m, &tol).map_err(core)?) } else { None };

    let phases = match (&traj, config.wants(Output::Phases)) {
        (Some(t), true) => Some(phases_report(config, t).map_err(core)?),
        _ => None,
    };
    let anomaly = if config.wants(Output::Anomaly) {
        Some(anomaly_report(config).map_err(core)?)
    } else {
        None
    };
    let appendix = if config.wants(Output::Appendix) {
        Some(appendix_report(config).map_err(core)?)
    } else {
        None
    };
    let sweep = if config.wants(Output::Sweep) { Some(sweep_report(config).map_err(core)?) } else { None };

    let csv = match (&traj, config.wants(Output::Trajectory)) {
        (Some(t), true) => Some(trajectory_csv(t)),
        _ => None,
    };

    let report = RunReport {
        name: config.name.clone(),
        config: config.clone(),
        adiabaticity: Adiabaticity {
            epsilon: Figure::new(epsilon, tol.adiabatic_refuse),
            warning_bound: tol.adiabatic_warn,
            warning: epsilon.abs() > tol.adiabatic_warn,
        },
        phases,
        anomaly,
        appendix,
        sweep,
        provenance: Provenance {
            software: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            config_sha256: config_hash(config),
        },
    };
    Ok(ScenarioOutput { report, csv })
}

fn gamma_tolerance(delta_phi: f64) -> f64 {
    GAMMA_RELATIVE_TOLERANCE * (delta_phi / 2.0).abs()
}

fn phases_report(
    config: &ScenarioConfig,
    traj: &EvolutionTrajectory,
) -> berryshift::Result<PhasesReport> {
    let s = config.scenario();
    let eps = config.epsilon();
    let result = trajectory_phase(traj)?;
    let delta_phi = traj.delta_phi();
    let tol = gamma_tolerance(delta_phi);
    let cos = config.theta.cos();
    let first_order = -cos * s.optical_length() * eps;
    let first_order_gap = (cos * s.optical_length() * eps * eps).abs() / (1.0 - eps.abs());

    let pancharatnam = pancharatnam_phase(&StateSequence::new(traj.states.clone(), false)?);
    let decomposition = PhaseDecomposition::from_trajectory(traj)?;

    let octant_oracle = if config.oracle_samples > 0 {
        let vertices = [
            PoincarePoint::NORTH,
            PoincarePoint::new(FRAC_PI_2, 0.0)?,
            PoincarePoint::new(FRAC_PI_2, FRAC_PI_2)?,
        ];
        let cycle = cycle_phase(&vertices, config.oracle_samples)?;
        let states: Vec<PolarizationSpinor> = geodesic_polygon(&vertices, config.oracle_samples)?
            .into_iter()
            .map(|p| PolarizationSpinor::from_point(p, 0.0))
            .collect();
        // Seeded random per-state phases, so the report stays reproducible.
        let mut rng = ChaCha8Rng::seed_from_u64(GAUGE_SEED);
        let shifted: Vec<_> =
            states.iter().map(|st| st.with_phase(rng.random_range(0.0..2.0 * PI))).collect();
        let plain = pancharatnam_phase(&StateSequence::new(states, true)?);
        let gauged = pancharatnam_phase(&StateSequence::new(shifted, true)?);
        Some(CycleReport {
            samples_per_edge: config.oracle_samples,
            gauge_shift: Figure::new(wrap(gauged - plain).abs(), GAUGE_TOLERANCE),
            solid_angle: Figure::exact(cycle.solid_angle.unwrap_or(f64::NAN)),
            gamma_numeric: Figure::new(cycle.gamma_numeric, CYCLE_TOLERANCE),
            gamma_analytic: Figure::exact(cycle.gamma_analytic),
            residual: Figure::new(cycle.residual, CYCLE_TOLERANCE),
        })
    } else {
        None
    };

    Ok(PhasesReport {
        delta_phi: Figure::exact(delta_phi),
        gamma_numeric: Figure::new(result.gamma_numeric, tol),
        gamma_analytic: Figure::exact(result.gamma_analytic),
        gamma_first_order: Figure::new(first_order, first_order_gap),
        residual: Figure::new(result.residual, tol),
        pancharatnam: Figure::new(pancharatnam, tol),
        connection_integral: Figure::new(connection_integral(&traj.states), tol),
        dynamic: Figure::new(decomposition.dynamic, tol),
        accumulated: Figure::new(decomposition.accumulated, tol),
        closure_residual: Figure::new(decomposition.closure_residual, tol),
        transport_residual: Figure::new(parallel_transport_residual(traj), TRANSPORT_TOLERANCE),
        max_norm_error: Figure::new(traj.max_norm_error(), NORM_TOLERANCE),
        octant_oracle,
    })
}

fn anomaly_report(config: &ScenarioConfig) -> berryshift::Result<AnomalyReport> {
    let s = config.scenario();
    let m = config.model();
    let rate = m.rate;
    let drift = helicity_drift(&s, &m)?;
    let ab = solve_ab_system(config.theta, rate, config.t_s)?;
    let p = ab.prediction;
    let cmp = pioneer_comparison(&m)?;
    let k = PioneerConstants::PIONEER;
    let first_order_tol = 1e-15 * rate.abs();
    Ok(AnomalyReport {
        omega_dot_over_omega: Figure::new(p.omega_dot_over_omega, p.second_order_bound),
        first_order: Figure::new(p.first_order, first_order_tol),
        closed_form: Figure::exact(ab.closed_form),
        positive_helicity: Figure::new(drift.positive.omega_dot_over_omega, first_order_tol),
        negative_helicity: Figure::new(drift.negative.omega_dot_over_omega, first_order_tol),
        ab_residual: Figure::new(ab.residual, AB_RESIDUAL_FACTOR * rate.abs()),
        degenerate: p.degenerate,
        blue_shift: p.is_blue_shift(),
        integrated_shift: Figure::exact(integrated_fractional_shift(
            p.omega_dot_over_omega,
            config.t_s,
        )),
        pioneer: PioneerReport {
            a_t: k.a_t,
            a_t_sigma: k.a_t_sigma,
            a_p_m_s2: k.a_p,
            a_p_sigma_m_s2: k.a_p_sigma,
            predicted_a_t: Figure::new(cmp.predicted_a_t, first_order_tol),
            acceleration_m_s2: Figure::new(cmp.acceleration, k.a_p_sigma),
            acceleration_cm_s2: Figure::new(cmp.acceleration_cgs, k.a_p_sigma * 100.0),
            z_a_t: Figure::new(cmp.z_a_t, 1.0),
            z_a_p: Figure::new(cmp.z_a_p, 1.0),
            within_band_a_t: cmp.within_band_a_t,
            within_band_a_p: cmp.within_band_a_p,
        },
    })
}

fn appendix_report(config: &ScenarioConfig) -> berryshift::Result<AppendixReport> {
    let m = config.model();
    let h = m.hubble_rate(0.0);
    let p = ProbeState::new(config.r_m, config.probe_velocity_m_s, h)?;
    let shift = dynamic_doppler_shift(&p, config.omega)?;
    let g = radial_metric_vector(&p);
    // Relative size of the terms dropped at first order.
    let dropped = g.abs();
    let dv = velocity_correction(&p);
    let ratio = if m.rate == 0.0 {
        None
    } else {
        let r = dynamic_to_geometric_ratio(&p, m.rate)?;
        Some(Figure::new(r, 0.01 * r))
    };
    Ok(AppendixReport {
        r_star_m: p.r_star,
        v_star_m_s: p.v_star,
        h: p.h,
        light_time_s: p.t,
        radial_metric_vector: Figure::new(g, dropped * g.abs()),
        velocity_correction_m_s: Figure::new(dv, dropped * dv.abs()),
        omega_prime: Figure::new(shift.omega_prime, dropped * shift.anomalous_fraction.abs() * config.omega),
        anomalous_fraction: Figure::new(shift.anomalous_fraction, dropped * shift.anomalous_fraction.abs()),
        red_shift: shift.anomalous_fraction < 0.0,
        ratio_to_geometric: ratio,
    })
}

fn sweep_report(config: &ScenarioConfig) -> berryshift::Result<SweepReport> {
    let m = config.model();
    let tol = Tolerances::DEFAULT;
    let steps_convergence = SWEEP_STEPS
        .par_iter()
        .map(|&steps| {
            let traj = evolve_with(&config.scenario_with_steps(steps), &m, &tol)?;
            let analytic = berryshift::geometric::berry_phase_analytic(traj.theta, traj.delta_phi());
            let gamma = connection_integral(&traj.states);
            Ok(ConvergencePoint {
                steps,
                gamma_numeric: gamma,
                error: Figure::new((gamma - analytic).abs(), gamma_tolerance(traj.delta_phi())),
            })
        })
        .collect::<berryshift::Result<Vec<_>>>()?;
    let monotone = steps_convergence.windows(2).all(|w| w[1].error.value <= w[0].error.value);

    let entries = standard_theta_grid()
        .par_iter()
        .map(|&theta| solve_ab_system(theta, m.rate, config.t_s))
        .collect::<berryshift::Result<Vec<_>>>()?;
    let summary = summarize_sweep(entries);
    let theta_grid = summary
        .entries
        .iter()
        .map(|e| ThetaPoint {
            theta: e.prediction.theta,
            omega_dot_over_omega: e.prediction.omega_dot_over_omega,
            residual: e.residual,
            degenerate: e.prediction.degenerate,
        })
        .collect();

    let finite_difference_drift = if config.theta.cos().abs() < tol.degeneracy || m.rate == 0.0 {
        None
    } else {
        let s = config.scenario_with_steps(config.steps);
        let value = finite_difference_drift(&s, &m, 1e-2 * config.t_s)?;
        let closed = m.rate / (1.0 - config.epsilon());
        let bound = (10.0 * config.epsilon().abs()).max(1e-9) * closed.abs();
        Some(Figure::new(value, bound))
    };

    Ok(SweepReport {
        steps_convergence,
        monotone,
        theta_grid,
        max_relative_spread: Figure::new(summary.max_relative_spread, SPREAD_TOLERANCE),
        max_ab_residual: Figure::new(summary.max_residual, AB_RESIDUAL_FACTOR * m.rate.abs()),
        finite_difference_drift,
    })
}

pub const CSV_HEADER: &str = "t,chi,phi,re_psi_plus,im_psi_plus,re_psi_minus,im_psi_minus,norm_err";

/// One row per sample, 17 significant digits.
pub fn trajectory_csv(traj: &EvolutionTrajectory) -> String {
    use std::fmt::Write;
    let mut out = String::with_capacity(200 * (traj.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for k in 0..traj.len() {
        let st = &traj.states[k];
        let (p, mi) = (st.psi_plus(), st.psi_minus());
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            traj.times[k],
            traj.chis[k],
            traj.phis[k],
            p.re,
            p.im,
            mi.re,
            mi.im,
            st.norm_error()
        );
    }
    out
}
