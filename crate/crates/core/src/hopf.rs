//! The Hopf bundle `S³ → S²` over the Poincaré sphere.
//!
//! A spinor with its overall phase kept is a point of `S³`:
//!
//! ```text
//! x₁ + i x₂ = cos(θ/2) e^{iβ},   x₃ + i x₄ = sin(θ/2) e^{iψ},   ψ = β + φ.
//! ```
//!
//! Dropping the fibre phase projects back to `(θ, φ = ψ − β)`. The physical
//! section fixes `β = −φ/2`, `ψ = +φ/2`.

use std::f64::consts::PI;

use crate::error::{ensure_finite, Error, Result};
use crate::phase::{unwrap_near, wrap};
use crate::spinor::{PoincarePoint, PolarizationSpinor};
use crate::tolerance::Tolerances;
use crate::C64;

/// Bundle coordinates `(θ, β, ψ)`; `β` and `ψ` are unwrapped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberCoordinates {
    pub theta: f64,
    pub beta: f64,
    pub psi: f64,
}

impl FiberCoordinates {
    pub fn new(theta: f64, beta: f64, psi: f64) -> Result<Self> {
        ensure_finite("theta", theta)?;
        ensure_finite("beta", beta)?;
        ensure_finite("psi", psi)?;
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::invalid("theta", format!("{theta} is outside [0, π]")));
        }
        Ok(Self { theta, beta, psi })
    }

    /// The point over `(θ, φ)` on the physical section.
    pub fn on_section(theta: f64, phi: f64) -> Self {
        let (beta, psi) = section_constraint(phi);
        Self { theta, beta, psi }
    }

    /// `φ = ψ − β`, the azimuth of the base point (unreduced).
    pub fn azimuth(&self) -> f64 {
        self.psi - self.beta
    }

    pub fn is_on_section(&self) -> bool {
        self.beta == -self.psi
    }

    pub fn to_spinor(&self) -> PolarizationSpinor {
        let (s, c) = (self.theta / 2.0).sin_cos();
        PolarizationSpinor::from_components(C64::from_polar(c, self.beta), C64::from_polar(s, self.psi))
    }
}

/// A point of the unit three-sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct S3Point {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
}

impl S3Point {
    pub fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Result<Self> {
        let p = Self { x1, x2, x3, x4 };
        let deviation = (p.norm_sqr() - 1.0).abs();
        if !deviation.is_finite() || deviation > Tolerances::DEFAULT.norm {
            return Err(Error::NotNormalized { what: "S³ point", deviation });
        }
        Ok(p)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3 + self.x4 * self.x4
    }

    pub fn from_spinor(s: &PolarizationSpinor) -> Self {
        let (a, b) = (s.psi_plus(), s.psi_minus());
        Self { x1: a.re, x2: a.im, x3: b.re, x4: b.im }
    }

    pub fn to_spinor(&self) -> PolarizationSpinor {
        PolarizationSpinor::from_components(C64::new(self.x1, self.x2), C64::new(self.x3, self.x4))
    }
}

/// Connection coefficients `(A_θ, A_β, A_ψ) = (0, cos(θ/2), sin(θ/2))`.
///
/// They pair with the metric-weighted displacement
/// `Δr = (Δθ/2, cos(θ/2)Δβ, sin(θ/2)Δψ)`, so that `A·Δr` reproduces the
/// squared weights `cos²(θ/2)Δβ + sin²(θ/2)Δψ` of the Berry integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorPotential {
    pub a_theta: f64,
    pub a_beta: f64,
    pub a_psi: f64,
}

impl VectorPotential {
    pub fn dot(&self, displacement: [f64; 3]) -> f64 {
        self.a_theta * displacement[0] + self.a_beta * displacement[1] + self.a_psi * displacement[2]
    }
}

pub fn embed(f: &FiberCoordinates) -> S3Point {
    let (s, c) = (f.theta / 2.0).sin_cos();
    let (sb, cb) = f.beta.sin_cos();
    let (sp, cp) = f.psi.sin_cos();
    S3Point { x1: c * cb, x2: c * sb, x3: s * cp, x4: s * sp }
}

/// Hopf projection. `φ` is returned in `(−π, π]`; poles give `φ = 0`.
pub fn project(p: &S3Point) -> PoincarePoint {
    project_with(p, None)
}

/// Hopf projection with `φ` placed on the branch nearest `previous_phi`.
///
/// At a pole the azimuth is undefined and `previous_phi` is returned unchanged.
pub fn project_continuous(p: &S3Point, previous_phi: f64) -> PoincarePoint {
    project_with(p, Some(previous_phi))
}

fn project_with(p: &S3Point, previous_phi: Option<f64>) -> PoincarePoint {
    let tol = Tolerances::DEFAULT.pole;
    let upper = p.x1.hypot(p.x2);
    let lower = p.x3.hypot(p.x4);
    let pole_phi = previous_phi.unwrap_or(0.0);
    if lower <= tol {
        return PoincarePoint { theta: 0.0, phi: pole_phi };
    }
    if upper <= tol {
        return PoincarePoint { theta: PI, phi: pole_phi };
    }
    let theta = 2.0 * lower.atan2(upper);
    let raw = p.x4.atan2(p.x3) - p.x2.atan2(p.x1);
    let phi = match previous_phi {
        Some(prev) => unwrap_near(raw, prev),
        None => wrap(raw),
    };
    PoincarePoint { theta, phi }
}

/// `(β, ψ) = (−φ/2, +φ/2)`.
pub fn section_constraint(phi: f64) -> (f64, f64) {
    let half = phi / 2.0;
    (-half, half)
}

/// `ds² = dθ²/4 + cos²(θ/2)dβ² + sin²(θ/2)dψ²`.
pub fn line_element(f: &FiberCoordinates, dtheta: f64, dbeta: f64, dpsi: f64) -> f64 {
    let (s, c) = (f.theta / 2.0).sin_cos();
    0.25 * dtheta * dtheta + c * c * dbeta * dbeta + s * s * dpsi * dpsi
}

pub fn vector_potential(theta: f64) -> VectorPotential {
    let (s, c) = (theta / 2.0).sin_cos();
    VectorPotential { a_theta: 0.0, a_beta: c, a_psi: s }
}

/// Metric-weighted displacement `(Δθ/2, cos(θ/2)Δβ, sin(θ/2)Δψ)` evaluated at `theta`.
pub fn metric_displacement(theta: f64, dtheta: f64, dbeta: f64, dpsi: f64) -> [f64; 3] {
    let (s, c) = (theta / 2.0).sin_cos();
    [0.5 * dtheta, c * dbeta, s * dpsi]
}

/// `∫ A·Δr` along a path, trapezoid rule over the segment endpoints.
///
/// Equals `−γ` of the Berry connection integral over the same path.
pub fn potential_line_integral(path: &[FiberCoordinates]) -> f64 {
    path.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let (dt, db, dp) = (b.theta - a.theta, b.beta - a.beta, b.psi - a.psi);
            let start = vector_potential(a.theta).dot(metric_displacement(a.theta, dt, db, dp));
            let end = vector_potential(b.theta).dot(metric_displacement(b.theta, dt, db, dp));
            0.5 * (start + end)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, SQRT_2};

    use crate::spinor::spinor_to_poincare;

    #[test]
    fn embedding_cases() {
        let p = embed(&FiberCoordinates::new(FRAC_PI_2, 0.0, 0.0).unwrap());
        assert_abs_diff_eq!(p.x1, SQRT_2 / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.x2, 0.0);
        assert_abs_diff_eq!(p.x3, SQRT_2 / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.x4, 0.0);

        let p = embed(&FiberCoordinates::new(0.0, 0.7, 123.0).unwrap());
        assert_eq!((p.x1, p.x2, p.x3, p.x4), (0.7f64.cos(), 0.7f64.sin(), 0.0, 0.0));

        let p = embed(&FiberCoordinates::new(FRAC_PI_3, 0.2, -0.2).unwrap());
        assert!((p.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(S3Point::new(p.x1, p.x2, p.x3, p.x4).is_ok());
        assert!(S3Point::new(1.0, 0.1, 0.0, 0.0).is_err());
    }

    #[test]
    fn projection_cases() {
        let q = project(&embed(&FiberCoordinates::new(FRAC_PI_2, 0.0, 0.0).unwrap()));
        assert_abs_diff_eq!(q.theta, FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(q.phi, 0.0);

        let q = project(&embed(&FiberCoordinates::new(FRAC_PI_3, -0.3, 0.3).unwrap()));
        assert_abs_diff_eq!(q.theta, FRAC_PI_3, epsilon = 1e-15);
        assert_abs_diff_eq!(q.phi, 0.6, epsilon = 1e-15);

        // cross-check against the spinor route
        let f = FiberCoordinates::new(1.0, 2.0, -0.5).unwrap();
        let q = project(&embed(&f));
        assert_abs_diff_eq!(q.theta, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(q.phi, wrap(-2.5), epsilon = 1e-14);
        let (via_spinor, phase) = spinor_to_poincare(&f.to_spinor());
        assert_abs_diff_eq!(via_spinor.theta, q.theta, epsilon = 1e-14);
        assert_abs_diff_eq!(wrap(via_spinor.phi - q.phi), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(phase, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn projection_flags_poles() {
        let q = project(&embed(&FiberCoordinates::new(0.0, 0.4, 1.0).unwrap()));
        assert!(q.is_pole());
        assert_eq!(q.phi, 0.0);
        let q = project_continuous(&embed(&FiberCoordinates::new(PI, 0.4, 1.0).unwrap()), 7.0);
        assert_eq!(q.theta, PI);
        assert_eq!(q.phi, 7.0);
    }

    #[test]
    fn continuous_projection_follows_branch() {
        let mut prev = 0.0;
        for k in 0..100 {
            let phi = 0.2 * k as f64;
            let q = project_continuous(&embed(&FiberCoordinates::on_section(1.0, phi)), prev);
            assert_abs_diff_eq!(q.phi, phi, epsilon = 1e-12);
            prev = q.phi;
        }
    }

    #[test]
    fn section_cases() {
        assert_eq!(section_constraint(0.0), (-0.0, 0.0));
        assert_eq!(section_constraint(0.4), (-0.2, 0.2));
        // φ = −2(ω/c)χR with ωR/c = 1, χ = 1
        assert_eq!(section_constraint(-2.0), (1.0, -1.0));
        assert!(FiberCoordinates::on_section(1.0, 0.3).is_on_section());
    }

    #[test]
    fn line_element_cases() {
        let f = FiberCoordinates::new(1.3, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(line_element(&f, 0.2, 0.0, 0.0), 0.01, epsilon = 1e-17);
        let f = FiberCoordinates::new(0.0, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(line_element(&f, 0.0, 0.1, 5.0), 0.01, epsilon = 1e-17);
        let f = FiberCoordinates::new(FRAC_PI_2, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(line_element(&f, 0.0, 0.1, 0.1), 0.01, epsilon = 1e-17);
    }

    #[test]
    fn potential_values() {
        assert_eq!(vector_potential(0.0), VectorPotential { a_theta: 0.0, a_beta: 1.0, a_psi: 0.0 });
        let south = vector_potential(PI);
        assert_abs_diff_eq!(south.a_beta, 0.0, epsilon = 1e-16);
        assert_eq!(south.a_psi, 1.0);
        let mid = vector_potential(FRAC_PI_2);
        assert_abs_diff_eq!(mid.a_beta, SQRT_2 / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(mid.a_psi, SQRT_2 / 2.0, epsilon = 1e-15);
        for theta in [0.0, PI] {
            let a = vector_potential(theta);
            assert!(a.a_theta.is_finite() && a.a_beta.is_finite() && a.a_psi.is_finite());
        }
    }

    fn fiber() -> impl Strategy<Value = FiberCoordinates> {
        (1e-6..(PI - 1e-6), -20.0f64..20.0, -20.0f64..20.0)
            .prop_map(|(t, b, p)| FiberCoordinates::new(t, b, p).unwrap())
    }

    proptest! {
        #[test]
        fn project_inverts_embed(f in fiber()) {
            let p = embed(&f);
            prop_assert!((p.norm_sqr() - 1.0).abs() < 1e-12);
            let q = project(&p);
            prop_assert!((q.theta - f.theta).abs() < 1e-12);
            prop_assert!(wrap(q.phi - f.azimuth()).abs() < 1e-12);
        }

        #[test]
        fn line_element_is_translation_invariant(f in fiber(), shift in -10.0f64..10.0,
                                                 dt in -0.1f64..0.1, db in -0.1f64..0.1, dp in -0.1f64..0.1) {
            let moved = FiberCoordinates { beta: f.beta + shift, psi: f.psi + shift, ..f };
            let ds = line_element(&f, dt, db, dp);
            prop_assert!(ds >= 0.0);
            prop_assert_eq!(ds, line_element(&moved, dt, db, dp));
        }

        #[test]
        fn potential_components_lie_on_unit_circle(theta in 0.0..=PI) {
            let a = vector_potential(theta);
            prop_assert_eq!(a.a_theta, 0.0);
            prop_assert!((a.a_beta.powi(2) + a.a_psi.powi(2) - 1.0).abs() < 1e-15);
        }
    }
}
