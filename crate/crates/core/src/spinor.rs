//! Polarization states as complex two-spinors.
//!
//! A pure polarization state is either a Jones vector `(x, y)` or the helicity
//! spinor `(Ψ₊, Ψ₋) = ((x + iy)/√2, (x − iy)/√2)·e^{iβ}`. Up to the overall
//! phase `β` the spinor is fixed by a point `(θ, φ)` on the Poincaré sphere,
//! where it is the `+1` eigenvector of `r·σ`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::{Matrix2, Vector2};

use crate::error::{ensure_finite, Error, Result};
use crate::phase::wrap;
use crate::tolerance::Tolerances;
use crate::C64;

/// Unit-norm Jones vector `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesVector {
    x: C64,
    y: C64,
}

impl JonesVector {
    pub fn new(x: C64, y: C64) -> Result<Self> {
        let deviation = (x.norm_sqr() + y.norm_sqr() - 1.0).abs();
        if !deviation.is_finite() || deviation > Tolerances::DEFAULT.norm {
            return Err(Error::NotNormalized { what: "Jones vector", deviation });
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> C64 {
        self.x
    }

    pub fn y(&self) -> C64 {
        self.y
    }

    /// Modulus of the overlap with `other`, which ignores the global phase.
    pub fn overlap(&self, other: &JonesVector) -> f64 {
        (self.x.conj() * other.x + self.y.conj() * other.y).norm()
    }
}

/// Unit-norm helicity spinor `(Ψ₊, Ψ₋)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationSpinor {
    psi_plus: C64,
    psi_minus: C64,
}

impl PolarizationSpinor {
    /// `ε₊ = (1, 0)`, positive helicity, north pole.
    pub const POSITIVE_HELICITY: Self =
        Self { psi_plus: C64::new(1.0, 0.0), psi_minus: C64::new(0.0, 0.0) };
    /// `ε₋ = (0, 1)`, negative helicity, south pole.
    pub const NEGATIVE_HELICITY: Self =
        Self { psi_plus: C64::new(0.0, 0.0), psi_minus: C64::new(1.0, 0.0) };

    pub fn new(psi_plus: C64, psi_minus: C64) -> Result<Self> {
        let s = Self { psi_plus, psi_minus };
        let deviation = s.norm_error();
        if !deviation.is_finite() || deviation > Tolerances::DEFAULT.norm {
            return Err(Error::NotNormalized { what: "spinor", deviation });
        }
        Ok(s)
    }

    /// Skips the norm check; callers guarantee unit norm by construction.
    pub(crate) fn from_components(psi_plus: C64, psi_minus: C64) -> Self {
        Self { psi_plus, psi_minus }
    }

    /// `(cos(θ/2), sin(θ/2)e^{iφ})·e^{iβ}`.
    pub fn from_point(point: PoincarePoint, beta: f64) -> Self {
        let (s, c) = (point.theta / 2.0).sin_cos();
        Self {
            psi_plus: C64::from_polar(c, beta),
            psi_minus: C64::from_polar(s, point.phi + beta),
        }
    }

    pub fn psi_plus(&self) -> C64 {
        self.psi_plus
    }

    pub fn psi_minus(&self) -> C64 {
        self.psi_minus
    }

    pub fn norm_sqr(&self) -> f64 {
        self.psi_plus.norm_sqr() + self.psi_minus.norm_sqr()
    }

    /// `| ‖ψ‖² − 1 |`.
    pub fn norm_error(&self) -> f64 {
        (self.norm_sqr() - 1.0).abs()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PolarizationSpinor) -> C64 {
        self.psi_plus.conj() * other.psi_plus + self.psi_minus.conj() * other.psi_minus
    }

    /// Multiplies both components by `e^{i·phase}`.
    pub fn with_phase(&self, phase: f64) -> Self {
        let u = C64::from_polar(1.0, phase);
        Self { psi_plus: self.psi_plus * u, psi_minus: self.psi_minus * u }
    }

    /// Componentwise difference `self − other` (not a state).
    pub fn difference(&self, other: &PolarizationSpinor) -> [C64; 2] {
        [self.psi_plus - other.psi_plus, self.psi_minus - other.psi_minus]
    }

    /// `⟨ψ|σ₃|ψ⟩ = |Ψ₊|² − |Ψ₋|² = cos θ`.
    pub fn sigma3_expectation(&self) -> f64 {
        self.psi_plus.norm_sqr() - self.psi_minus.norm_sqr()
    }

    /// Inverse of [`jones_to_spinor`] at `β = 0`.
    pub fn to_jones(&self) -> JonesVector {
        let x = (self.psi_plus + self.psi_minus) * FRAC_1_SQRT_2;
        let y = (self.psi_plus - self.psi_minus) * C64::new(0.0, -FRAC_1_SQRT_2);
        JonesVector { x, y }
    }

    pub fn as_vector(&self) -> Vector2<C64> {
        Vector2::new(self.psi_plus, self.psi_minus)
    }

    /// Applies a 2×2 matrix. Only unitary matrices keep the result a state.
    pub fn apply(&self, m: &Matrix2<C64>) -> Self {
        let v = m * self.as_vector();
        Self { psi_plus: v[0], psi_minus: v[1] }
    }
}

/// A point `(θ, φ)` on the Poincaré sphere.
///
/// `φ` is kept unwrapped; at the poles it is conventionally zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoincarePoint {
    pub theta: f64,
    pub phi: f64,
}

impl PoincarePoint {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        ensure_finite("theta", theta)?;
        ensure_finite("phi", phi)?;
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::invalid("theta", format!("{theta} is outside [0, π]")));
        }
        Ok(Self { theta, phi })
    }

    pub const NORTH: Self = Self { theta: 0.0, phi: 0.0 };
    pub const SOUTH: Self = Self { theta: PI, phi: 0.0 };

    /// `r = (sin θ cos φ, sin θ sin φ, cos θ)`.
    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Builds the point from a (not necessarily normalized) Cartesian vector.
    pub fn from_vector(v: [f64; 3]) -> Result<Self> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::invalid("vector", "must be finite and non-zero"));
        }
        let rho = v[0].hypot(v[1]);
        let theta = rho.atan2(v[2]);
        let phi = if rho == 0.0 { 0.0 } else { v[1].atan2(v[0]) };
        Ok(Self { theta, phi })
    }

    pub fn is_pole(&self) -> bool {
        self.theta == 0.0 || self.theta == PI
    }

    /// The orthogonal polarization `(π − θ, φ + π)`.
    pub fn antipode(&self) -> Self {
        Self { theta: PI - self.theta, phi: self.phi + PI }
    }
}

/// `Ψ± = (x ± iy)/√2 · e^{iβ}`.
pub fn jones_to_spinor(j: JonesVector, beta: f64) -> PolarizationSpinor {
    let iy = C64::i() * j.y;
    let u = C64::from_polar(FRAC_1_SQRT_2, beta);
    PolarizationSpinor { psi_plus: (j.x + iy) * u, psi_minus: (j.x - iy) * u }
}

/// Splits a spinor into its sphere point and global phase `β`.
///
/// The phase is read from the larger component, so near-zero amplitudes never
/// divide anything. At a pole `φ` is reported as `0` and `θ` is snapped to
/// exactly `0` or `π`.
pub fn spinor_to_poincare(s: &PolarizationSpinor) -> (PoincarePoint, f64) {
    let tol = Tolerances::DEFAULT.pole;
    let (a, b) = (s.psi_plus, s.psi_minus);
    let (ma, mb) = (a.norm(), b.norm());
    if mb <= tol {
        return (PoincarePoint::NORTH, wrap(a.arg()));
    }
    if ma <= tol {
        return (PoincarePoint::SOUTH, wrap(b.arg()));
    }
    let theta = 2.0 * mb.atan2(ma);
    let phi = (b * a.conj()).arg();
    let phase = if ma >= mb { a.arg() } else { b.arg() - phi };
    (PoincarePoint { theta, phi }, wrap(phase))
}

/// The polarization "Hamiltonian" `r·σ`.
pub fn polarization_matrix(p: PoincarePoint) -> Matrix2<C64> {
    let (st, ct) = p.theta.sin_cos();
    Matrix2::new(
        C64::new(ct, 0.0),
        C64::from_polar(st, -p.phi),
        C64::from_polar(st, p.phi),
        C64::new(-ct, 0.0),
    )
}

/// The Pauli matrix `σ₃`.
pub fn sigma3() -> Matrix2<C64> {
    Matrix2::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(-1.0, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, SQRT_2};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn jones_cases() {
        let h = JonesVector::new(c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        let s = jones_to_spinor(h, 0.0);
        assert!(close(s.psi_plus(), c(FRAC_1_SQRT_2, 0.0), 1e-15));
        assert!(close(s.psi_minus(), c(FRAC_1_SQRT_2, 0.0), 1e-15));

        let neg = JonesVector::new(c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)).unwrap();
        let s = jones_to_spinor(neg, 0.0);
        assert!(close(s.psi_plus(), c(0.0, 0.0), 1e-15));
        assert!(close(s.psi_minus(), c(1.0, 0.0), 1e-15));
        assert_abs_diff_eq!(spinor_to_poincare(&s).0.theta, PI);

        let pos = JonesVector::new(c(FRAC_1_SQRT_2, 0.0), c(0.0, -FRAC_1_SQRT_2)).unwrap();
        let s = jones_to_spinor(pos, 0.0);
        assert!(close(s.psi_plus(), c(1.0, 0.0), 1e-15));
        assert!(close(s.psi_minus(), c(0.0, 0.0), 1e-15));
        assert_eq!(spinor_to_poincare(&s).0.theta, 0.0);
    }

    #[test]
    fn unnormalized_jones_is_rejected() {
        let err = JonesVector::new(c(1.0, 0.0), c(0.1, 0.0)).unwrap_err();
        assert!(matches!(err, Error::NotNormalized { .. }));
        assert!(PolarizationSpinor::new(c(0.5, 0.0), c(0.5, 0.0)).is_err());
    }

    #[test]
    fn real_amplitudes_at_zero_beta() {
        // x real and y imaginary: x ± iy is real for both components
        let j = JonesVector::new(c(0.6, 0.0), c(0.0, 0.8)).unwrap();
        let s = jones_to_spinor(j, 0.0);
        assert!(s.norm_error() < 1e-15);
        assert_eq!(s.psi_plus().im, 0.0);
        assert_abs_diff_eq!(s.psi_plus().re, -0.2 * FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.psi_minus().re, 1.4 * FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn north_pole_decomposition() {
        let (p, phase) = spinor_to_poincare(&PolarizationSpinor::POSITIVE_HELICITY);
        assert_eq!(p, PoincarePoint::NORTH);
        assert!(p.is_pole());
        assert_eq!(phase, 0.0);
    }

    #[test]
    fn decomposition_by_construction() {
        let s = PolarizationSpinor::new(
            c(FRAC_PI_6.cos(), 0.0),
            C64::from_polar(FRAC_PI_6.sin(), FRAC_PI_4),
        )
        .unwrap();
        let (p, phase) = spinor_to_poincare(&s);
        assert_abs_diff_eq!(p.theta, FRAC_PI_3, epsilon = 1e-15);
        assert_abs_diff_eq!(p.phi, FRAC_PI_4, epsilon = 1e-15);
        assert_abs_diff_eq!(phase, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn decomposition_with_global_phase() {
        let s = PolarizationSpinor::new(
            C64::from_polar(FRAC_1_SQRT_2, 0.3),
            C64::from_polar(FRAC_1_SQRT_2, 0.3),
        )
        .unwrap();
        let (p, phase) = spinor_to_poincare(&s);
        assert_abs_diff_eq!(p.theta, PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.phi, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(phase, 0.3, epsilon = 1e-15);
        // recomposition identity
        let back = PolarizationSpinor::from_point(p, phase);
        assert!(close(back.psi_plus(), s.psi_plus(), 1e-12));
        assert!(close(back.psi_minus(), s.psi_minus(), 1e-12));
    }

    #[test]
    fn matrix_cases() {
        let m = polarization_matrix(PoincarePoint::NORTH);
        assert_eq!(m, sigma3());

        let m = polarization_matrix(PoincarePoint::new(PI / 2.0, 0.0).unwrap());
        assert!(close(m[(0, 0)], c(0.0, 0.0), 1e-15));
        assert!(close(m[(0, 1)], c(1.0, 0.0), 1e-15));
        assert!(close(m[(1, 0)], c(1.0, 0.0), 1e-15));

        let p = PoincarePoint::new(FRAC_PI_3, FRAC_PI_4).unwrap();
        let m = polarization_matrix(p);
        let psi = PolarizationSpinor::from_point(p, 0.0).as_vector();
        assert!((m * psi - psi).norm() < 1e-12);
    }

    #[test]
    fn matrix_is_hermitian_traceless_with_unit_eigenvalues() {
        let m = polarization_matrix(PoincarePoint::new(1.1, -0.4).unwrap());
        assert!((m - m.adjoint()).norm() < 1e-15);
        assert!(m.trace().norm() < 1e-15);
        // eigenvalues ±1 ⇔ m² = I and traceless
        assert!((m * m - Matrix2::identity()).norm() < 1e-15);
    }

    #[test]
    fn helicity_point_vectors() {
        let r = PoincarePoint::new(PI / 2.0, PI / 2.0).unwrap().unit_vector();
        assert_abs_diff_eq!(r[1], 1.0, epsilon = 1e-15);
        let back = PoincarePoint::from_vector([0.0, 0.0, -2.0]).unwrap();
        assert_eq!(back, PoincarePoint::SOUTH);
        assert_abs_diff_eq!(SQRT_2 * FRAC_1_SQRT_2, 1.0, epsilon = 1e-15);
    }

    fn unit_jones() -> impl Strategy<Value = (JonesVector, f64)> {
        (0.0..PI, -PI..PI, -PI..PI, -PI..PI).prop_map(|(a, px, py, beta)| {
            let (s, c0) = (a / 2.0).sin_cos();
            (JonesVector::new(C64::from_polar(c0, px), C64::from_polar(s, py)).unwrap(), beta)
        })
    }

    proptest! {
        #[test]
        fn jones_round_trip_up_to_phase((j, beta) in unit_jones()) {
            let s = jones_to_spinor(j, beta);
            prop_assert!(s.norm_error() < 1e-12);
            let back = s.to_jones();
            prop_assert!((j.overlap(&back) - 1.0).abs() < 1e-12);
            // and the removed phase is exactly β
            let undone = jones_to_spinor(j, 0.0).with_phase(beta);
            prop_assert!((undone.psi_plus() - s.psi_plus()).norm() < 1e-12);
        }

        #[test]
        fn eq5_spinor_is_plus_one_eigenvector(theta in 0.0..=PI, phi in -10.0f64..10.0, beta in -PI..PI) {
            let p = PoincarePoint::new(theta, phi).unwrap();
            let psi = PolarizationSpinor::from_point(p, beta).as_vector();
            let m = polarization_matrix(p);
            prop_assert!((m * psi - psi).norm() < 1e-12);
        }

        #[test]
        fn decomposition_inverts_construction(theta in 1e-6..(PI - 1e-6), phi in -PI..PI, beta in -PI..PI) {
            let p = PoincarePoint::new(theta, phi).unwrap();
            let s = PolarizationSpinor::from_point(p, beta);
            let (q, phase) = spinor_to_poincare(&s);
            prop_assert!((q.theta - theta).abs() < 1e-12);
            prop_assert!(wrap(q.phi - phi).abs() < 1e-12);
            let back = PolarizationSpinor::from_point(q, phase);
            prop_assert!((back.psi_plus() - s.psi_plus()).norm() < 1e-12);
            prop_assert!((back.psi_minus() - s.psi_minus()).norm() < 1e-12);
        }

        #[test]
        fn antipodes_are_orthogonal(theta in 0.0..=PI, phi in -PI..PI) {
            let p = PoincarePoint::new(theta, phi).unwrap();
            let a = PolarizationSpinor::from_point(p, 0.0);
            let b = PolarizationSpinor::from_point(p.antipode(), 0.0);
            prop_assert!(a.inner(&b).norm() < 1e-12);
        }
    }
}
