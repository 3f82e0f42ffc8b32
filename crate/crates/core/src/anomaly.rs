//! Frequency drift from the Berry connection.
//!
//! Parallel transport along the section turns the geometric phase into a
//! drift `ω̇/ω = χ̇` that does not depend on the polarization. For a general
//! state the transport condition reads
//!
//! ```text
//! cos²(θ/2)·a + sin²(θ/2)·b = 0
//! a = −x(1 − χ̇T cos θ) + χ̇ cos θ
//! b =  x(1 + χ̇T cos θ) + χ̇ cos θ
//! ```
//!
//! with `x = ω̇/ω`, whose solution `x = χ̇/(1 − χ̇T)` is the same for every `θ`.

use std::f64::consts::FRAC_PI_2;

use twofloat::TwoFloat;

use crate::constants::{CM_PER_M, SPEED_OF_LIGHT};
use crate::error::{ensure_finite, Error, Result};
use crate::evolution::{evolve_with, RoundTripScenario, ScaleFactorModel};
use crate::geometric::{helicity_phase, trajectory_phase, HelicityPhase};
use crate::evolution::Helicity;
use crate::tolerance::Tolerances;

/// Published Pioneer drift and acceleration, with one-sigma uncertainties.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PioneerConstants {
    /// Clock drift `a_t`, 1/s.
    pub a_t: f64,
    pub a_t_sigma: f64,
    /// Acceleration `a_P`, m/s².
    pub a_p: f64,
    pub a_p_sigma: f64,
}

impl PioneerConstants {
    pub const PIONEER: Self =
        Self { a_t: 2.92e-18, a_t_sigma: 0.44e-18, a_p: 8.74e-10, a_p_sigma: 1.33e-10 };
}

/// Drift prediction `ω̇/ω` together with its first-order value and the bound
/// on the difference between them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnomalyPrediction {
    /// 1/s.
    pub omega_dot_over_omega: f64,
    pub theta: f64,
    /// `χ̇`, 1/s.
    pub first_order: f64,
    /// `χ̇²T/(1 − χ̇T)`, 1/s.
    pub second_order_bound: f64,
    /// Set at `θ = π/2`, where the transport condition is `0 = 0`.
    pub degenerate: bool,
}

impl AnomalyPrediction {
    /// Holds the invariant `|ω̇/ω − χ̇| ≤ bound`, with a relative slack of a
    /// few ulps on the bound.
    pub fn within_bound(&self) -> bool {
        let gap = (self.omega_dot_over_omega - self.first_order).abs();
        gap <= self.second_order_bound * (1.0 + 1e-12) + f64::EPSILON * self.first_order.abs()
    }

    /// Blue shift means `ω̇ > 0`.
    pub fn is_blue_shift(&self) -> bool {
        self.omega_dot_over_omega > 0.0
    }
}

fn second_order_bound(chidot: f64, duration: f64) -> f64 {
    let eps = chidot * duration;
    (chidot * eps / (1.0 - eps)).abs()
}

/// Drift of both helicity states, with the Berry phase it comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelicityDrift {
    pub positive: AnomalyPrediction,
    pub negative: AnomalyPrediction,
    pub positive_phase: HelicityPhase,
    pub negative_phase: HelicityPhase,
}

/// `ω̇±/ω± = χ̇` for both helicities.
///
/// The transported helicity states carry the phase `∓(ωR/c)(χ(T) − 1)`, whose
/// rate per unit optical length is the local expansion rate. Refuses runs
/// outside the adiabatic regime.
pub fn helicity_drift(s: &RoundTripScenario, m: &ScaleFactorModel) -> Result<HelicityDrift> {
    s.validate()?;
    let positive_phase = helicity_phase(Helicity::Positive, s, m)?;
    let negative_phase = helicity_phase(Helicity::Negative, s, m)?;
    let rate = m.hubble_rate(0.0);
    let make = |theta: f64| AnomalyPrediction {
        omega_dot_over_omega: rate,
        theta,
        first_order: rate,
        second_order_bound: second_order_bound(rate, s.duration),
        degenerate: false,
    };
    Ok(HelicityDrift {
        positive: make(Helicity::Positive.theta()),
        negative: make(Helicity::Negative.theta()),
        positive_phase,
        negative_phase,
    })
}

/// `Δω/ω` accumulated over `duration` at a constant drift rate, `e^{rt} − 1`.
pub fn integrated_fractional_shift(omega_dot_over_omega: f64, duration: f64) -> f64 {
    (omega_dot_over_omega * duration).exp_m1()
}

/// Double-double quotient refined by residual correction. The library's own
/// division forms its reciprocal error in plain double precision.
fn dd_div(n: TwoFloat, d: TwoFloat) -> TwoFloat {
    let mut q = TwoFloat::from(n.hi() / d.hi());
    for _ in 0..2 {
        let r = n - d * q;
        q += r.hi() / d.hi();
    }
    q
}

/// Solution of the transport condition, carried in double-double precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbSolution {
    pub prediction: AnomalyPrediction,
    /// High and low words of `ω̇/ω`.
    pub solution_hi: f64,
    pub solution_lo: f64,
    /// `χ̇/(1 − χ̇T)` in plain double precision.
    pub closed_form: f64,
    /// `|cos²(θ/2)·a + sin²(θ/2)·b|` at the returned solution.
    pub residual: f64,
    pub a: f64,
    pub b: f64,
}

/// Solves `cos²(θ/2)·a + sin²(θ/2)·b = 0` for `ω̇/ω`.
///
/// The equation is linear in `x = ω̇/ω`; it is assembled and solved in
/// double-double arithmetic so the back-substituted residual sits far below
/// `|χ̇|`. At `θ = π/2` both coefficients vanish and the limit value is
/// returned with the degeneracy flag set.
pub fn solve_ab_system(theta: f64, chidot: f64, duration: f64) -> Result<AbSolution> {
    ensure_finite("theta", theta)?;
    ensure_finite("chidot", chidot)?;
    ensure_finite("T", duration)?;
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::invalid("theta", format!("{theta} is outside [0, π]")));
    }
    let eps_f = chidot * duration;
    if !(eps_f.abs() < 1.0) {
        return Err(Error::OutOfDomain { value: eps_f });
    }

    let mut cos = theta.cos();
    let degenerate = cos.abs() < Tolerances::DEFAULT.degeneracy;
    if degenerate {
        cos = 0.0;
    }
    let one = TwoFloat::from(1.0);
    let c = TwoFloat::from(cos);
    let k = TwoFloat::from(chidot);
    let eps = TwoFloat::new_mul(chidot, duration);
    let c2 = (one + c) / 2.0;
    let s2 = (one - c) / 2.0;

    // x·(−c2(1 − εc) + s2(1 + εc)) + χ̇c(c2 + s2) = 0
    let slope = -(c2 * (one - eps * c)) + s2 * (one + eps * c);
    let offset = k * c * (c2 + s2);
    let x = if degenerate { dd_div(k, one - eps) } else { dd_div(-offset, slope) };

    let a = -(x * (one - eps * c)) + k * c;
    let b = x * (one + eps * c) + k * c;
    let residual = f64::from((c2 * a + s2 * b).abs());

    let value = f64::from(x);
    Ok(AbSolution {
        prediction: AnomalyPrediction {
            omega_dot_over_omega: value,
            theta,
            first_order: chidot,
            second_order_bound: second_order_bound(chidot, duration),
            degenerate,
        },
        solution_hi: x.hi(),
        solution_lo: x.lo(),
        closed_form: chidot / (1.0 - eps_f),
        residual,
        a: f64::from(a),
        b: f64::from(b),
    })
}

/// Solutions over a grid of polar angles and their largest relative spread.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSweep {
    pub entries: Vec<AbSolution>,
    /// `(max − min)/|mean|` of `ω̇/ω`; zero when every entry is zero.
    pub max_relative_spread: f64,
    pub max_residual: f64,
}

pub fn theta_independence_sweep(chidot: f64, duration: f64, thetas: &[f64]) -> Result<ThetaSweep> {
    if thetas.is_empty() {
        return Err(Error::invalid("thetas", "grid is empty"));
    }
    let entries =
        thetas.iter().map(|&t| solve_ab_system(t, chidot, duration)).collect::<Result<Vec<_>>>()?;
    Ok(summarize_sweep(entries))
}

/// Builds the sweep summary from already computed entries, in grid order.
pub fn summarize_sweep(entries: Vec<AbSolution>) -> ThetaSweep {
    let values: Vec<f64> = entries.iter().map(|e| e.prediction.omega_dot_over_omega).collect();
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let max_relative_spread = if mean == 0.0 { max - min } else { (max - min) / mean.abs() };
    let max_residual = entries.iter().map(|e| e.residual).fold(0.0, f64::max);
    ThetaSweep { entries, max_relative_spread, max_residual }
}

/// Standard angle grid `{0, π/4, π/2, 3π/4, π}`.
pub fn standard_theta_grid() -> Vec<f64> {
    let q = std::f64::consts::FRAC_PI_4;
    vec![0.0, q, FRAC_PI_2, 3.0 * q, std::f64::consts::PI]
}

/// Numeric drift from evolved Berry phases at `T − dt` and `T + dt`.
///
/// The central difference of `γ(T) = −cos θ·(ωR/c)(χ(T) − 1)` divided by
/// `−cos θ·ωR/c` is `χ̇(T)`. Undefined where `cos θ` vanishes.
pub fn finite_difference_drift(s: &RoundTripScenario, m: &ScaleFactorModel, dt: f64) -> Result<f64> {
    s.validate()?;
    ensure_finite("dt", dt)?;
    if !(dt > 0.0 && dt < s.duration) {
        return Err(Error::invalid("dt", "must lie in (0, T)"));
    }
    let cos = s.theta.cos();
    if cos.abs() < Tolerances::DEFAULT.degeneracy {
        return Err(Error::invalid("theta", "drift is not observable through γ at θ = π/2"));
    }
    let tol = Tolerances::DEFAULT;
    let gamma_at = |duration: f64| -> Result<f64> {
        let scenario = RoundTripScenario { duration, ..*s };
        let traj = evolve_with(&scenario, m, &tol)?;
        Ok(trajectory_phase(&traj)?.gamma_numeric)
    };
    let derivative = (gamma_at(s.duration + dt)? - gamma_at(s.duration - dt)?) / (2.0 * dt);
    Ok(derivative / (-cos * s.optical_length()))
}

/// A candidate `χ̇` set against the published Pioneer figures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PioneerComparison {
    pub predicted_a_t: f64,
    /// `c·χ̇`, m/s².
    pub acceleration: f64,
    /// `c·χ̇`, cm/s².
    pub acceleration_cgs: f64,
    /// `(a_t − χ̇)/σ_t`.
    pub z_a_t: f64,
    /// `(a_P − cχ̇)/σ_P`.
    pub z_a_p: f64,
    pub within_band_a_t: bool,
    pub within_band_a_p: bool,
}

/// Slack on the one-sigma band test, so a candidate placed exactly on the
/// band edge is not rejected by rounding.
const BAND_SLACK: f64 = 1e-9;

pub fn pioneer_comparison(m: &ScaleFactorModel) -> Result<PioneerComparison> {
    ensure_finite("chi_rate", m.rate)?;
    let k = PioneerConstants::PIONEER;
    let predicted_a_t = m.hubble_rate(0.0);
    let acceleration = SPEED_OF_LIGHT * predicted_a_t;
    let z_a_t = (k.a_t - predicted_a_t) / k.a_t_sigma;
    let z_a_p = (k.a_p - acceleration) / k.a_p_sigma;
    Ok(PioneerComparison {
        predicted_a_t,
        acceleration,
        acceleration_cgs: acceleration * CM_PER_M,
        z_a_t,
        z_a_p,
        within_band_a_t: z_a_t.abs() <= 1.0 + BAND_SLACK,
        within_band_a_p: z_a_p.abs() <= 1.0 + BAND_SLACK,
    })
}
