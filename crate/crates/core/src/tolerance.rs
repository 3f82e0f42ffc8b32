//! Numerical tolerances shared by every module.

/// One record holding every tolerance and regime bound used by the library.
///
/// Functions that take no explicit `Tolerances` use [`Tolerances::DEFAULT`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Allowed `| ‖ψ‖² − 1 |` for unit-norm states and S³ points.
    pub norm: f64,
    /// Component modulus below which a spinor sits on a pole of the sphere.
    pub pole: f64,
    /// Minimum `|⟨ψₖ|ψₖ₊₁⟩|` for a Pancharatnam product to be defined.
    pub overlap: f64,
    /// `|cos θ|` below which the a/b system is degenerate.
    pub degeneracy: f64,
    /// Adiabaticity `ε = χ̇T` above which evolution logs a warning.
    pub adiabatic_warn: f64,
    /// Adiabaticity above which evolution is refused.
    pub adiabatic_refuse: f64,
    /// Upper bound on `|hR*v*/c²|` and `|hR*/c|` for the first-order Doppler formulas.
    pub appendix_first_order: f64,
    /// Upper bound on `|v*/c|` for the first-order Doppler formulas.
    pub appendix_velocity: f64,
}

impl Tolerances {
    pub const DEFAULT: Self = Self {
        norm: 1e-12,
        pole: 1e-13,
        overlap: 1e-9,
        degeneracy: 1e-12,
        adiabatic_warn: 1e-3,
        adiabatic_refuse: 0.1,
        appendix_first_order: 1e-6,
        appendix_velocity: 1e-2,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
