//! Adiabatic evolution of the polarization spinor in expanding space.
//!
//! The scale factor `χ(t)` enters only through the section phase
//! `φ(t) = −2(ω/c)Rχ(t)`. Each increment `Δφ` acts on the spinor through the
//! generator `dS = (Δφ/2)σ₃`, i.e. the unitary `exp(−i(Δφ/2)σ₃)`. The fast
//! `ωt` rotation belongs to the eikonal and never enters the generator.
//!
//! All generators are diagonal and commute, so the product of step unitaries
//! from the start of a run up to sample `k` is `exp(−i(φₖ − φ₀)/2 σ₃)`. The
//! evolution applies that closed form at every sample; no error accumulates
//! from step to step and unitarity holds to rounding.

use std::f64::consts::TAU;

use nalgebra::Matrix2;

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{ensure_finite, Error, Result};
use crate::spinor::{sigma3, PoincarePoint, PolarizationSpinor};
use crate::tolerance::Tolerances;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleFactorKind {
    /// `χ(t) = 1 + rate·t`
    Linear,
    /// `χ(t) = exp(rate·t)`
    Exponential,
}

/// Scale factor `χ(t)` with `χ(0) = 1`; `rate` is `χ̇(0)` in 1/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleFactorModel {
    pub kind: ScaleFactorKind,
    pub rate: f64,
}

impl ScaleFactorModel {
    pub fn new(kind: ScaleFactorKind, rate: f64) -> Result<Self> {
        ensure_finite("rate", rate)?;
        Ok(Self { kind, rate })
    }

    pub fn linear(rate: f64) -> Self {
        Self { kind: ScaleFactorKind::Linear, rate }
    }

    pub fn exponential(rate: f64) -> Self {
        Self { kind: ScaleFactorKind::Exponential, rate }
    }

    pub fn chi(&self, t: f64) -> f64 {
        match self.kind {
            ScaleFactorKind::Linear => 1.0 + self.rate * t,
            ScaleFactorKind::Exponential => (self.rate * t).exp(),
        }
    }

    pub fn chi_dot(&self, t: f64) -> f64 {
        match self.kind {
            ScaleFactorKind::Linear => self.rate,
            ScaleFactorKind::Exponential => self.rate * (self.rate * t).exp(),
        }
    }

    /// Local expansion rate `h = χ̇/χ`.
    pub fn hubble_rate(&self, t: f64) -> f64 {
        self.chi_dot(t) / self.chi(t)
    }

    /// `χ(t) − 1`, without the cancellation of forming `χ` first.
    pub fn growth(&self, t: f64) -> f64 {
        self.increment(0.0, t)
    }

    /// `χ(t1) − χ(t0)`, accurate for tiny `rate·(t1 − t0)`.
    pub fn increment(&self, t0: f64, t1: f64) -> f64 {
        match self.kind {
            ScaleFactorKind::Linear => self.rate * (t1 - t0),
            ScaleFactorKind::Exponential => {
                (self.rate * t0).exp() * (self.rate * (t1 - t0)).exp_m1()
            }
        }
    }

    /// Adiabaticity parameter `ε = χ̇(0)·T`.
    pub fn adiabaticity(&self, duration: f64) -> f64 {
        self.rate * duration
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Helicity {
    Positive,
    Negative,
}

impl Helicity {
    pub fn sign(self) -> f64 {
        match self {
            Helicity::Positive => 1.0,
            Helicity::Negative => -1.0,
        }
    }

    /// Polar angle of the helicity state: `0` or `π`.
    pub fn theta(self) -> f64 {
        match self {
            Helicity::Positive => 0.0,
            Helicity::Negative => std::f64::consts::PI,
        }
    }
}

/// A round trip of duration `T` observed at a fixed comoving coordinate `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundTripScenario {
    /// Comoving coordinate of the reflector, m.
    pub r: f64,
    /// Angular frequency, rad/s.
    pub omega: f64,
    /// Round-trip time `T`, s.
    pub duration: f64,
    /// Polar angle of the polarization state, rad.
    pub theta: f64,
    /// Number of uniform time steps; the trajectory has `steps + 1` samples.
    pub steps: usize,
    /// Speed of light, m/s.
    pub c: f64,
}

impl RoundTripScenario {
    pub fn new(r: f64, omega: f64, duration: f64, theta: f64, steps: usize) -> Result<Self> {
        let s = Self { r, omega, duration, theta, steps, c: SPEED_OF_LIGHT };
        s.validate()?;
        Ok(s)
    }

    /// A scenario with `ωR/c` fixed to `optical_length`, for dimensionless work.
    pub fn with_optical_length(
        optical_length: f64,
        duration: f64,
        theta: f64,
        steps: usize,
    ) -> Result<Self> {
        let omega = 1.0;
        Self::new(optical_length * SPEED_OF_LIGHT / omega, omega, duration, theta, steps)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("R", self.r)?;
        ensure_finite("omega", self.omega)?;
        ensure_finite("T", self.duration)?;
        ensure_finite("theta", self.theta)?;
        if self.r < 0.0 {
            return Err(Error::invalid("R", "must be non-negative"));
        }
        if self.duration <= 0.0 {
            return Err(Error::invalid("T", "must be positive"));
        }
        if !(0.0..=std::f64::consts::PI).contains(&self.theta) {
            return Err(Error::invalid("theta", format!("{} is outside [0, π]", self.theta)));
        }
        if self.steps < 2 {
            return Err(Error::invalid("steps", format!("need at least 2, got {}", self.steps)));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::invalid("c", "must be positive"));
        }
        Ok(())
    }

    /// `ωR/c`.
    pub fn optical_length(&self) -> f64 {
        self.omega * self.r / self.c
    }

    /// Round-trip light time `2R/c` for a reflector at `r`.
    pub fn light_round_trip(r: f64) -> f64 {
        2.0 * r / SPEED_OF_LIGHT
    }

    pub fn time_step(&self) -> f64 {
        self.duration / self.steps as f64
    }
}

/// Eikonal `Ξ = −[ωt − h(ω/c)Rχ(t)]` of the helicity-`h` mode.
pub fn eikonal(s: &RoundTripScenario, m: &ScaleFactorModel, t: f64, helicity: Helicity) -> f64 {
    -(s.omega * t - helicity.sign() * (s.omega / s.c) * s.r * m.chi(t))
}

/// Section phase `φ(R, t) = −2(ω/c)Rχ(t)`.
pub fn section_phase(s: &RoundTripScenario, m: &ScaleFactorModel, t: f64) -> f64 {
    -2.0 * s.optical_length() * m.chi(t)
}

/// `φ(t1) − φ(t0)` computed from the scale-factor increment.
pub fn section_phase_shift(s: &RoundTripScenario, m: &ScaleFactorModel, t0: f64, t1: f64) -> f64 {
    -2.0 * s.optical_length() * m.increment(t0, t1)
}

/// Generator `dS = (Δφ/2)σ₃` for a section-phase increment.
pub fn generator_increment(dphi: f64) -> Matrix2<C64> {
    sigma3() * C64::new(dphi / 2.0, 0.0)
}

/// `exp(−i·dS) = diag(e^{−iΔφ/2}, e^{+iΔφ/2})`.
pub fn step_unitary(dphi: f64) -> Matrix2<C64> {
    let half = dphi / 2.0;
    Matrix2::new(
        C64::from_polar(1.0, -half),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::from_polar(1.0, half),
    )
}

fn apply_phase_shift(state: &PolarizationSpinor, dphi: f64) -> PolarizationSpinor {
    let half = dphi / 2.0;
    PolarizationSpinor::from_components(
        state.psi_plus() * C64::from_polar(1.0, -half),
        state.psi_minus() * C64::from_polar(1.0, half),
    )
}

/// Sampled run of the spinor through the scale-factor history.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<PolarizationSpinor>,
    /// Absolute section phase `φ(R, tₖ)`.
    pub phis: Vec<f64>,
    pub chis: Vec<f64>,
    /// `φ(tₖ) − φ(t₀)`, accurate even when `φ` itself is huge.
    pub phi_shifts: Vec<f64>,
    /// Polar angle of the initial state; diagonal evolution keeps it fixed.
    pub theta: f64,
    /// `χ̇(0)·T` of the run.
    pub epsilon: f64,
    /// Set when `ε` exceeded the warning bound.
    pub adiabatic_warning: bool,
}

impl EvolutionTrajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn initial_state(&self) -> PolarizationSpinor {
        self.states[0]
    }

    pub fn final_state(&self) -> PolarizationSpinor {
        self.states[self.states.len() - 1]
    }

    /// Total section-phase change `Δφ` over the run.
    pub fn delta_phi(&self) -> f64 {
        self.phi_shifts.last().copied().unwrap_or(0.0)
    }

    /// Largest `| ‖ψ‖² − 1 |` over all samples.
    pub fn max_norm_error(&self) -> f64 {
        self.states.iter().map(PolarizationSpinor::norm_error).fold(0.0, f64::max)
    }

    /// Largest `|φₖ₊₁ − φₖ|`.
    pub fn max_phase_step(&self) -> f64 {
        self.phi_shifts.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max)
    }
}

/// Evolves the section state at `(s.theta, φ(0))` over `[0, T]`.
pub fn evolve(s: &RoundTripScenario, m: &ScaleFactorModel) -> Result<EvolutionTrajectory> {
    evolve_with(s, m, &Tolerances::DEFAULT)
}

pub fn evolve_with(
    s: &RoundTripScenario,
    m: &ScaleFactorModel,
    tol: &Tolerances,
) -> Result<EvolutionTrajectory> {
    s.validate()?;
    let phi0 = section_phase(s, m, 0.0);
    // Only φ₀ mod 4π matters for the spinor; reducing keeps the phases small.
    let phi0_reduced = phi0.rem_euclid(2.0 * TAU);
    let initial = PolarizationSpinor::from_point(
        PoincarePoint { theta: s.theta, phi: phi0_reduced },
        -phi0_reduced / 2.0,
    );
    evolve_segment_with(s, m, 0.0, s.duration, s.steps, initial, tol)
}

/// Evolves an arbitrary `initial` state over `[t_start, t_end]` in `steps` steps.
///
/// Used for state hand-off between consecutive segments.
pub fn evolve_segment(
    s: &RoundTripScenario,
    m: &ScaleFactorModel,
    t_start: f64,
    t_end: f64,
    steps: usize,
    initial: PolarizationSpinor,
) -> Result<EvolutionTrajectory> {
    evolve_segment_with(s, m, t_start, t_end, steps, initial, &Tolerances::DEFAULT)
}

pub fn evolve_segment_with(
    s: &RoundTripScenario,
    m: &ScaleFactorModel,
    t_start: f64,
    t_end: f64,
    steps: usize,
    initial: PolarizationSpinor,
    tol: &Tolerances,
) -> Result<EvolutionTrajectory> {
    ensure_finite("t_start", t_start)?;
    ensure_finite("t_end", t_end)?;
    if t_end <= t_start {
        return Err(Error::invalid("t_end", "must be after t_start"));
    }
    if steps < 2 {
        return Err(Error::invalid("steps", format!("need at least 2, got {steps}")));
    }
    let deviation = initial.norm_error();
    if deviation > tol.norm {
        return Err(Error::NotNormalized { what: "initial state", deviation });
    }

    let epsilon = m.adiabaticity(s.duration);
    if epsilon.abs() > tol.adiabatic_refuse {
        return Err(Error::Adiabaticity { epsilon, bound: tol.adiabatic_refuse });
    }
    let adiabatic_warning = epsilon.abs() > tol.adiabatic_warn;
    if adiabatic_warning {
        log::warn!(
            "adiabaticity χ̇T = {epsilon:e} exceeds {:e}; first-order results degrade",
            tol.adiabatic_warn
        );
    }

    let dt = (t_end - t_start) / steps as f64;
    let phi_origin = section_phase(s, m, t_start);
    let n = steps + 1;
    let mut times = Vec::with_capacity(n);
    let mut states = Vec::with_capacity(n);
    let mut phis = Vec::with_capacity(n);
    let mut chis = Vec::with_capacity(n);
    let mut phi_shifts = Vec::with_capacity(n);

    for k in 0..n {
        let t = if k == steps { t_end } else { t_start + dt * k as f64 };
        let chi = m.chi(t);
        if !(chi > 0.0) {
            return Err(Error::NonPositiveScale { t, chi });
        }
        let shift = if k == 0 { 0.0 } else { section_phase_shift(s, m, t_start, t) };
        times.push(t);
        chis.push(chi);
        phis.push(phi_origin + shift);
        phi_shifts.push(shift);
        states.push(if k == 0 { initial } else { apply_phase_shift(&initial, shift) });
    }

    let (point, _) = crate::spinor::spinor_to_poincare(&initial);
    Ok(EvolutionTrajectory {
        times,
        states,
        phis,
        chis,
        phi_shifts,
        theta: point.theta,
        epsilon,
        adiabatic_warning,
    })
}

/// Running dynamic phase `Dₖ = ∫₀^{tₖ} Ĥ dt'` at every sample.
///
/// `Ĥ(t) = ∂ₜ Re⟨Ψ|∫dS|Ψ⟩` is a total derivative, and with
/// `∫dS = (φ(t) − φ(0))/2·σ₃` the integral is evaluated from the samples as
/// `Dₖ = (φₖ − φ₀)/2 · ⟨Ψₖ|σ₃|Ψₖ⟩`.
pub fn dynamic_phases(traj: &EvolutionTrajectory) -> Vec<f64> {
    traj.states
        .iter()
        .zip(&traj.phi_shifts)
        .map(|(state, shift)| 0.5 * shift * state.sigma3_expectation())
        .collect()
}

/// `∫₀ᵀ Ĥ dt'` over the whole run.
pub fn dynamic_phase(traj: &EvolutionTrajectory) -> f64 {
    dynamic_phases(traj).last().copied().unwrap_or(0.0)
}

/// `|Ψ̃ₖ⟩ = e^{iDₖ}|Ψₖ⟩`, the states with the dynamic phase removed.
pub fn parallel_transported(traj: &EvolutionTrajectory) -> Vec<PolarizationSpinor> {
    traj.states
        .iter()
        .zip(dynamic_phases(traj))
        .map(|(state, d)| if d == 0.0 { *state } else { state.with_phase(d) })
        .collect()
}

/// `maxₖ |⟨Ψ̃ₖ|Ψ̃ₖ₊₁ − Ψ̃ₖ⟩|`; zero for exact parallel transport.
pub fn parallel_transport_residual(traj: &EvolutionTrajectory) -> f64 {
    let transported = parallel_transported(traj);
    transported
        .windows(2)
        .map(|w| {
            let d = w[1].difference(&w[0]);
            (w[0].psi_plus().conj() * d[0] + w[0].psi_minus().conj() * d[1]).norm()
        })
        .fold(0.0, f64::max)
}
