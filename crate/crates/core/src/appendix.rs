//! Dynamical Doppler shift of a moving probe in scaled coordinates.
//!
//! With `R* = χR` the expansion is scaled out of the radial metric and shows
//! up as the small cross term `g* ≃ −hR*/c`, `h = χ̇/χ`. A probe moving at
//! `v*` then returns a Doppler signal with an extra red shift
//! `δω/ω ≃ −h t (v*/c)²`, `t = R*/c`. That is the wrong sign and many orders
//! too small to produce the observed blue drift.
//!
//! Everything here is first order in `h`; [`ProbeState::new`] refuses inputs
//! where the dropped terms would matter.

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{ensure_finite, Error, Result};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeState {
    /// Scaled radial coordinate `R*`, m.
    pub r_star: f64,
    /// Radial velocity `v*`, m/s.
    pub v_star: f64,
    /// Expansion rate `h = χ̇/χ`, 1/s.
    pub h: f64,
    /// Light time `R*/c`, s.
    pub t: f64,
}

impl ProbeState {
    pub fn new(r_star: f64, v_star: f64, h: f64) -> Result<Self> {
        Self::with_tolerances(r_star, v_star, h, &Tolerances::DEFAULT)
    }

    pub fn with_tolerances(r_star: f64, v_star: f64, h: f64, tol: &Tolerances) -> Result<Self> {
        ensure_finite("R*", r_star)?;
        ensure_finite("v*", v_star)?;
        ensure_finite("h", h)?;
        if r_star < 0.0 {
            return Err(Error::invalid("R*", "must be non-negative"));
        }
        let c = SPEED_OF_LIGHT;
        let checks = [
            ("|v*/c|", (v_star / c).abs(), tol.appendix_velocity),
            ("|hR*/c|", (h * r_star / c).abs(), tol.appendix_first_order),
            ("|hR*v*/c²|", (h * r_star * v_star / (c * c)).abs(), tol.appendix_first_order),
        ];
        for (quantity, value, bound) in checks {
            if value > bound {
                return Err(Error::Regime { quantity, value, bound });
            }
        }
        Ok(Self { r_star, v_star, h, t: r_star / c })
    }

    fn beta(&self) -> f64 {
        self.v_star / SPEED_OF_LIGHT
    }
}

/// `g* ≃ −hR*/c`.
pub fn radial_metric_vector(p: &ProbeState) -> f64 {
    -p.h * p.r_star / SPEED_OF_LIGHT
}

/// `Ṙ* ≃ v*(1 + hR*v*/c²)`.
pub fn corrected_radial_velocity(p: &ProbeState) -> f64 {
    p.v_star + velocity_correction(p)
}

/// `Ṙ* − v* = v*·hR*v*/c²`, formed without the cancellation.
pub fn velocity_correction(p: &ProbeState) -> f64 {
    let c = SPEED_OF_LIGHT;
    p.v_star * (p.h * p.r_star * p.v_star / (c * c))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopplerShift {
    /// `ω(1 − v*/c) − ωh(R*/c)(v*/c)²`, rad/s.
    pub omega_prime: f64,
    /// `−h(R*/c)(v*/c)²`.
    pub anomalous_fraction: f64,
}

pub fn dynamic_doppler_shift(p: &ProbeState, omega: f64) -> Result<DopplerShift> {
    ensure_finite("omega", omega)?;
    let beta = p.beta();
    let anomalous_fraction = -p.h * p.t * beta * beta;
    Ok(DopplerShift { omega_prime: omega * (1.0 - beta) + omega * anomalous_fraction, anomalous_fraction })
}

/// `δω/ω ≃ −h(R/c)(v_P/c)²`, written in the unscaled variables.
pub fn footnote_fraction(h: f64, r: f64, v_probe: f64) -> f64 {
    let beta = v_probe / SPEED_OF_LIGHT;
    -h * (r / SPEED_OF_LIGHT) * beta * beta
}

/// `|dynamic fraction| / |χ̇·t|`: how the dynamic shift compares with the
/// geometric drift accumulated over the same light time.
pub fn dynamic_to_geometric_ratio(p: &ProbeState, chidot: f64) -> Result<f64> {
    ensure_finite("chidot", chidot)?;
    let geometric = chidot * p.t;
    if geometric == 0.0 {
        return Err(Error::invalid("chidot", "geometric drift is zero, ratio undefined"));
    }
    let dynamic = -p.h * p.t * p.beta() * p.beta();
    Ok((dynamic / geometric).abs())
}
