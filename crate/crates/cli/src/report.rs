//! Run report written as `report.json`. Field order is the declaration order.

use serde::Serialize;

use crate::config::ScenarioConfig;

/// A reported number with the tolerance or bound it is held to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Figure {
    pub value: f64,
    pub tolerance: f64,
}

impl Figure {
    /// Negative zero is reported as zero.
    pub fn new(value: f64, tolerance: f64) -> Self {
        Self { value: value + 0.0, tolerance: tolerance + 0.0 }
    }

    /// A closed-form value, good to a few ulps.
    pub fn exact(value: f64) -> Self {
        Self::new(value, 4.0 * f64::EPSILON * value.abs())
    }

    pub fn holds(&self) -> bool {
        self.value.abs() <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub name: String,
    pub config: ScenarioConfig,
    pub adiabaticity: Adiabaticity,
    pub phases: Option<PhasesReport>,
    pub anomaly: Option<AnomalyReport>,
    pub appendix: Option<AppendixReport>,
    pub sweep: Option<SweepReport>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Adiabaticity {
    /// `χ̇T`; the tolerance is the hard refusal bound.
    pub epsilon: Figure,
    pub warning_bound: f64,
    pub warning: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhasesReport {
    pub delta_phi: Figure,
    /// Bundle connection integral along the section path.
    pub gamma_numeric: Figure,
    /// `cos θ · Δφ/2`.
    pub gamma_analytic: Figure,
    /// `−cos θ · (ωR/c) · χ̇T`; the tolerance bounds the second-order gap.
    pub gamma_first_order: Figure,
    /// `|γ_numeric − γ_analytic|`.
    pub residual: Figure,
    /// Open-path product phase `−arg ∏⟨ψₖ|ψₖ₊₁⟩`.
    pub pancharatnam: Figure,
    /// Link-discretized connection `Σ −Im⟨ψₖ|ψₖ₊₁ − ψₖ⟩`.
    pub connection_integral: Figure,
    pub dynamic: Figure,
    pub accumulated: Figure,
    /// `|accumulated + dynamic|`.
    pub closure_residual: Figure,
    pub transport_residual: Figure,
    pub max_norm_error: Figure,
    pub octant_oracle: Option<CycleReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleReport {
    pub samples_per_edge: usize,
    /// Change of the cycle phase under per-state phase factors, mod 2π.
    pub gauge_shift: Figure,
    pub solid_angle: Figure,
    pub gamma_numeric: Figure,
    /// `−Ω/2`.
    pub gamma_analytic: Figure,
    pub residual: Figure,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnomalyReport {
    /// Solution of the a/b system; the tolerance is the bound on its distance
    /// from the first-order value.
    pub omega_dot_over_omega: Figure,
    pub first_order: Figure,
    pub closed_form: Figure,
    pub positive_helicity: Figure,
    pub negative_helicity: Figure,
    pub ab_residual: Figure,
    pub degenerate: bool,
    pub blue_shift: bool,
    /// `Δω/ω` accumulated over `T`.
    pub integrated_shift: Figure,
    pub pioneer: PioneerReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PioneerReport {
    pub a_t: f64,
    pub a_t_sigma: f64,
    pub a_p_m_s2: f64,
    pub a_p_sigma_m_s2: f64,
    pub predicted_a_t: Figure,
    /// `c·χ̇`, with the published one-sigma band as tolerance.
    pub acceleration_m_s2: Figure,
    pub acceleration_cm_s2: Figure,
    /// z-scores; the tolerance is the one-sigma band.
    pub z_a_t: Figure,
    pub z_a_p: Figure,
    pub within_band_a_t: bool,
    pub within_band_a_p: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AppendixReport {
    pub r_star_m: f64,
    pub v_star_m_s: f64,
    pub h: f64,
    pub light_time_s: f64,
    /// First-order quantities; tolerances are the size of the dropped terms.
    pub radial_metric_vector: Figure,
    pub velocity_correction_m_s: Figure,
    pub omega_prime: Figure,
    pub anomalous_fraction: Figure,
    pub red_shift: bool,
    /// `|dynamic| / |χ̇·t|`; absent when there is no expansion.
    pub ratio_to_geometric: Option<Figure>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub steps_convergence: Vec<ConvergencePoint>,
    pub monotone: bool,
    pub theta_grid: Vec<ThetaPoint>,
    pub max_relative_spread: Figure,
    pub max_ab_residual: Figure,
    /// Drift from a central difference of evolved Berry phases; absent at `θ = π/2`.
    pub finite_difference_drift: Option<Figure>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergencePoint {
    pub steps: usize,
    pub gamma_numeric: f64,
    /// `|γ − γ_analytic|`.
    pub error: Figure,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaPoint {
    pub theta: f64,
    pub omega_dot_over_omega: f64,
    pub residual: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub software: &'static str,
    pub version: &'static str,
    /// SHA-256 of the canonical config echo.
    pub config_sha256: String,
}
