//! Berry phase three ways.
//!
//! - [`berry_phase_integral`]: `γ = −∫ cos²(θ/2)Δβ + sin²(θ/2)Δψ` along a path of
//!   bundle coordinates (trapezoid rule).
//! - [`berry_phase_analytic`]: `γ = cos θ · Δφ/2` on the physical section.
//! - [`pancharatnam_phase`]: `−arg ∏⟨ψₖ|ψₖ₊₁⟩`, the discrete gauge-invariant
//!   phase of a state sequence; for a closed cycle it equals `−Ω/2`.
//!
//! Open paths in `χ` are evaluated in the section gauge, so `γ` for them is
//! relative to that section. Closed cycles are gauge invariant.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::evolution::{
    dynamic_phase, parallel_transport_residual, section_phase_shift, EvolutionTrajectory, Helicity,
    RoundTripScenario, ScaleFactorModel,
};
use crate::hopf::FiberCoordinates;
use crate::phase::{unwrap, wrap};
use crate::spinor::{PoincarePoint, PolarizationSpinor};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricPhaseResult {
    pub gamma_numeric: f64,
    pub gamma_analytic: f64,
    /// Enclosed solid angle, for closed cycles only.
    pub solid_angle: Option<f64>,
    /// `|gamma_numeric − gamma_analytic|`.
    pub residual: f64,
}

impl GeometricPhaseResult {
    fn new(gamma_numeric: f64, gamma_analytic: f64, solid_angle: Option<f64>) -> Self {
        Self {
            gamma_numeric,
            gamma_analytic,
            solid_angle,
            residual: (gamma_numeric - gamma_analytic).abs(),
        }
    }
}

/// An ordered list of states, optionally closed back onto its first element.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSequence {
    states: Vec<PolarizationSpinor>,
    closed: bool,
}

impl StateSequence {
    pub fn new(states: Vec<PolarizationSpinor>, closed: bool) -> Result<Self> {
        Self::with_tolerances(states, closed, &Tolerances::DEFAULT)
    }

    pub fn with_tolerances(
        states: Vec<PolarizationSpinor>,
        closed: bool,
        tol: &Tolerances,
    ) -> Result<Self> {
        if states.len() < 2 {
            return Err(Error::invalid("states", "need at least two states"));
        }
        let seq = Self { states, closed };
        for (index, next) in seq.link_indices() {
            let overlap = seq.states[index].inner(&seq.states[next]).norm();
            if !(overlap > tol.overlap) {
                return Err(Error::Orthogonal { index, next, overlap });
            }
        }
        Ok(seq)
    }

    pub fn states(&self) -> &[PolarizationSpinor] {
        &self.states
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Same states in reverse order.
    pub fn reversed(&self) -> Self {
        let mut states = self.states.clone();
        states.reverse();
        Self { states, closed: self.closed }
    }

    fn link_indices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.states.len();
        let links = if self.closed { n } else { n - 1 };
        (0..links).map(move |k| (k, (k + 1) % n))
    }
}

/// Trapezoid-rule value of `γ = −∫ cos²(θ/2)Δβ + sin²(θ/2)Δψ`.
///
/// Adjacent samples must differ by less than π in both `β` and `ψ`.
pub fn berry_phase_integral(path: &[FiberCoordinates]) -> Result<f64> {
    let weights: Vec<(f64, f64)> = path
        .iter()
        .map(|f| {
            let (s, c) = (f.theta / 2.0).sin_cos();
            (c * c, s * s)
        })
        .collect();
    let mut gamma = 0.0;
    for (index, w) in path.windows(2).enumerate() {
        let db = w[1].beta - w[0].beta;
        let dp = w[1].psi - w[0].psi;
        let gap = db.abs().max(dp.abs());
        if !(gap < PI) {
            return Err(Error::Branch { index, gap });
        }
        let (cb0, sp0) = weights[index];
        let (cb1, sp1) = weights[index + 1];
        gamma -= 0.5 * ((cb0 + cb1) * db + (sp0 + sp1) * dp);
    }
    Ok(gamma)
}

/// `γ = cos θ · Δφ/2`.
pub fn berry_phase_analytic(theta: f64, delta_phi: f64) -> f64 {
    theta.cos() * delta_phi / 2.0
}

/// Helicity-state phase with its first-order approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelicityPhase {
    /// `±Δφ/2` with `Δφ = −2(ω/c)R[χ(T) − 1]`.
    pub exact: f64,
    /// `∓R(ω/c)χ̇T`.
    pub first_order: f64,
    /// `|exact − first_order|`, second order in `χ̇T`.
    pub gap: f64,
}

pub fn helicity_phase(
    helicity: Helicity,
    s: &RoundTripScenario,
    m: &ScaleFactorModel,
) -> Result<HelicityPhase> {
    let tol = Tolerances::DEFAULT;
    let epsilon = m.adiabaticity(s.duration);
    if epsilon.abs() > tol.adiabatic_refuse {
        return Err(Error::Adiabaticity { epsilon, bound: tol.adiabatic_refuse });
    }
    let sign = helicity.sign();
    let delta_phi = section_phase_shift(s, m, 0.0, s.duration);
    let exact = sign * delta_phi / 2.0;
    let first_order = -sign * s.optical_length() * epsilon;
    Ok(HelicityPhase { exact, first_order, gap: (exact - first_order).abs() })
}

/// `−arg ∏⟨ψₖ|ψₖ₊₁⟩`, including the closing link for closed sequences.
///
/// Closed cycles return the principal value in `(−π, π]`. Open paths are
/// tracked on a continuous branch, so they may carry phases beyond ±π.
pub fn pancharatnam_phase(seq: &StateSequence) -> f64 {
    let (turns, rest) = accumulated_link_phase(seq.states(), seq.link_indices());
    if seq.is_closed() {
        wrap(-rest)
    } else {
        -(rest + TAU * turns as f64)
    }
}

/// `2π − TAU`, the part of a full turn that `TAU` rounds away.
const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;

/// Sum of the link arguments as whole turns plus a remainder near `(−π, π]`.
/// Keeping the remainder small holds its rounding to the size of the links.
fn accumulated_link_phase(
    states: &[PolarizationSpinor],
    links: impl Iterator<Item = (usize, usize)>,
) -> (i64, f64) {
    // Neumaier-compensated remainder.
    let mut turns = 0i64;
    let mut rest = 0.0;
    let mut carry = 0.0;
    let mut add = |rest: &mut f64, x: f64| {
        let t = *rest + x;
        carry += if rest.abs() >= x.abs() { (*rest - t) + x } else { (x - t) + *rest };
        *rest = t;
    };
    for (k, next) in links {
        add(&mut rest, states[k].inner(&states[next]).arg());
        if rest > PI {
            add(&mut rest, -TAU);
            turns += 1;
        } else if rest <= -PI {
            add(&mut rest, TAU);
            turns -= 1;
        }
    }
    (turns, rest + (carry - turns as f64 * TAU_LO))
}

/// Discretized connection integral `γ = Σₖ Re(i⟨ψₖ|ψₖ₊₁ − ψₖ⟩)`.
///
/// First order in the step, so it converges as the sampling is refined.
pub fn connection_integral(states: &[PolarizationSpinor]) -> f64 {
    states
        .windows(2)
        .map(|w| {
            let d = w[1].difference(&w[0]);
            let link = w[0].psi_plus().conj() * d[0] + w[0].psi_minus().conj() * d[1];
            -link.im
        })
        .sum()
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

fn arc(a: [f64; 3], b: [f64; 3]) -> f64 {
    norm(cross(a, b)).atan2(dot(a, b))
}

/// Signed area of the geodesic triangle `(a, b, c)` by L'Huilier's formula.
/// Positive when `a·(b×c) > 0`.
fn signed_triangle_area(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    let triple = dot(a, cross(b, c));
    if triple == 0.0 {
        return 0.0;
    }
    let (sa, sb, sc) = (arc(b, c), arc(a, c), arc(a, b));
    let s = 0.5 * (sa + sb + sc);
    let product = (0.5 * s).tan()
        * (0.5 * (s - sa)).tan()
        * (0.5 * (s - sb)).tan()
        * (0.5 * (s - sc)).tan();
    let excess = 4.0 * product.max(0.0).sqrt().atan();
    excess.copysign(triple)
}

/// Signed solid angle of the closed geodesic polygon through `vertices`.
///
/// The polygon is fanned from the direction of its vector area
/// `Σ vₖ × vₖ₊₁`, which lies inside small polygons and is the pole of a
/// great-circle boundary; when that vector vanishes the first vertex is used.
/// Counter-clockwise polygons (seen from outside) are positive. The result is
/// reduced to `(−2π, 2π]`.
pub fn solid_angle(vertices: &[PoincarePoint]) -> Result<f64> {
    if vertices.len() < 3 {
        return Err(Error::invalid("vertices", "need at least three vertices"));
    }
    let v: Vec<[f64; 3]> = vertices.iter().map(PoincarePoint::unit_vector).collect();
    let n = v.len();
    let mut area = [0.0; 3];
    for k in 0..n {
        let c = cross(v[k], v[(k + 1) % n]);
        area = [area[0] + c[0], area[1] + c[1], area[2] + c[2]];
    }
    let len = norm(area);
    let apex = if len > 1e-12 { [area[0] / len, area[1] / len, area[2] / len] } else { v[0] };
    let total: f64 = (0..n).map(|k| signed_triangle_area(apex, v[k], v[(k + 1) % n])).sum();
    let reduced = total.rem_euclid(2.0 * TAU);
    Ok(if reduced > TAU { reduced - 2.0 * TAU } else { reduced })
}

/// Points along the great-circle arc from `a` towards `b`, `samples` of them,
/// starting at `a` and stopping one step short of `b`.
pub fn geodesic_arc(a: PoincarePoint, b: PoincarePoint, samples: usize) -> Result<Vec<PoincarePoint>> {
    let (u, w) = (a.unit_vector(), b.unit_vector());
    let omega = arc(u, w);
    if !(omega > 0.0 && omega < PI) {
        return Err(Error::invalid("arc", "endpoints must be distinct and not antipodal"));
    }
    let so = omega.sin();
    (0..samples)
        .map(|k| {
            let t = k as f64 / samples as f64;
            let (ca, cb) = (((1.0 - t) * omega).sin() / so, (t * omega).sin() / so);
            PoincarePoint::from_vector([
                ca * u[0] + cb * w[0],
                ca * u[1] + cb * w[1],
                ca * u[2] + cb * w[2],
            ])
        })
        .collect()
}

/// Densely sampled closed geodesic polygon, `samples_per_edge` points per edge.
pub fn geodesic_polygon(vertices: &[PoincarePoint], samples_per_edge: usize) -> Result<Vec<PoincarePoint>> {
    let n = vertices.len();
    let mut out = Vec::with_capacity(n * samples_per_edge);
    for k in 0..n {
        out.extend(geodesic_arc(vertices[k], vertices[(k + 1) % n], samples_per_edge)?);
    }
    Ok(out)
}

/// Closed-cycle check: Pancharatnam phase of the sampled polygon against `−Ω/2`.
pub fn cycle_phase(vertices: &[PoincarePoint], samples_per_edge: usize) -> Result<GeometricPhaseResult> {
    let omega = solid_angle(vertices)?;
    let points = geodesic_polygon(vertices, samples_per_edge)?;
    let states = points.iter().map(|p| PolarizationSpinor::from_point(*p, 0.0)).collect();
    let seq = StateSequence::new(states, true)?;
    Ok(GeometricPhaseResult::new(pancharatnam_phase(&seq), -omega / 2.0, Some(omega)))
}

/// Bundle coordinates of every trajectory sample, read off the states.
///
/// `β = arg Ψ₊` and `ψ = arg Ψ₋` are unwrapped along the run; a component that
/// vanishes (helicity states) keeps the previous angle.
pub fn section_path(traj: &EvolutionTrajectory) -> Result<Vec<FiberCoordinates>> {
    let step = traj.max_phase_step() / 2.0;
    if !(step < PI) {
        let index = traj
            .phi_shifts
            .windows(2)
            .position(|w| (w[1] - w[0]).abs() / 2.0 >= PI)
            .unwrap_or(0);
        return Err(Error::Branch { index, gap: step });
    }
    let tol = Tolerances::DEFAULT.pole;
    let held = |values: Vec<(f64, f64)>| -> Vec<f64> {
        let mut last = 0.0;
        let raw: Vec<f64> = values
            .into_iter()
            .map(|(modulus, angle)| {
                if modulus > tol {
                    last = angle;
                }
                last
            })
            .collect();
        unwrap(&raw)
    };
    let betas = held(traj.states.iter().map(|s| (s.psi_plus().norm(), s.psi_plus().arg())).collect());
    let psis = held(traj.states.iter().map(|s| (s.psi_minus().norm(), s.psi_minus().arg())).collect());
    Ok(traj
        .states
        .iter()
        .zip(betas.into_iter().zip(psis))
        .map(|(s, (beta, psi))| FiberCoordinates {
            theta: 2.0 * s.psi_minus().norm().atan2(s.psi_plus().norm()),
            beta,
            psi,
        })
        .collect())
}

/// Berry phase of an evolved trajectory: the connection integral along its
/// section path against `cos θ · Δφ/2`.
pub fn trajectory_phase(traj: &EvolutionTrajectory) -> Result<GeometricPhaseResult> {
    let numeric = berry_phase_integral(&section_path(traj)?)?;
    let analytic = berry_phase_analytic(traj.theta, traj.delta_phi());
    Ok(GeometricPhaseResult::new(numeric, analytic, None))
}

/// Phase bookkeeping of one evolved trajectory.
///
/// `accumulated` is the phase the raw state picks up along the run,
/// `arg ∏⟨Ψₖ|Ψₖ₊₁⟩`. `dynamic` is `∫Ĥdt`, the phase restored to obtain the
/// parallel-transported state, and `geometric` is the Berry connection
/// integral. On the physical section the transported state returns in phase
/// with the start, so `accumulated + dynamic ≈ 0`, and the Berry phase equals
/// the restored phase, `geometric ≈ dynamic`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDecomposition {
    pub accumulated: f64,
    pub dynamic: f64,
    pub geometric: f64,
    /// `|accumulated + dynamic|`.
    pub closure_residual: f64,
    /// Parallel-transport residual of the dynamic-phase-removed states.
    pub transport_residual: f64,
}

impl PhaseDecomposition {
    pub fn from_trajectory(traj: &EvolutionTrajectory) -> Result<Self> {
        let (turns, rest) =
            accumulated_link_phase(&traj.states, (0..traj.len() - 1).map(|k| (k, k + 1)));
        let accumulated = rest + TAU * turns as f64;
        let dynamic = dynamic_phase(traj);
        let geometric = berry_phase_integral(&section_path(traj)?)?;
        Ok(Self {
            accumulated,
            dynamic,
            geometric,
            closure_residual: (accumulated + dynamic).abs(),
            transport_residual: parallel_transport_residual(traj),
        })
    }
}
