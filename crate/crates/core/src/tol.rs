//! Numerical tolerances shared across modules.

/// Entrywise Hermiticity tolerance.
pub const HERMITIAN: f64 = 1e-12;
/// Trace-one tolerance for density operators.
pub const TRACE: f64 = 1e-10;
/// Allowed negative eigenvalue magnitude for density operators.
pub const PSD: f64 = 1e-10;
/// Maximum super-selection defect counted as compliant.
pub const SSR: f64 = 1e-10;
/// Guard band on strict witness inequalities.
pub const GUARD: f64 = 1e-9;
/// Guard band for tests whose right-hand side is exactly zero.
pub const ZERO_GUARD: f64 = 1e-12;
/// Largest tolerated norm lost to a Fock cutoff.
pub const TRUNCATION: f64 = 1e-10;
