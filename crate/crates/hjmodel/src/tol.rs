//! Numerical tolerances used across the crate, in one place.

/// Relative tolerance for detecting a boundary atom, |p0 - cost| / p0.
pub const BOUNDARY_REL_TOL: f64 = 1e-9;

/// Floating-point simplex pivot / feasibility tolerance.
pub const LP_FLOAT_TOL: f64 = 1e-9;

/// If the floating phase-1 optimum is closer to zero than this, the verdict is
/// borderline and the solve is repeated in exact rational arithmetic.
pub const LP_EXACT_TRIGGER: f64 = 1e-6;

/// Relative 2x2 determinant threshold below which a triple counts as concurrent.
pub const CONCURRENCY_TOL: f64 = 1e-10;

/// Two critical sweep angles closer than this are treated as one event group.
pub const ANGLE_TIE_TOL: f64 = 1e-10;

/// Bisection stops when the bracket for a critical rho is narrower than this.
pub const RHO_BISECTION_TOL: f64 = 1e-10;

/// Hard cap for the critical-rho scan; beyond this the arrangement is
/// numerically Leontief and the determinant sign no longer changes.
pub const RHO_SCAN_CAP: f64 = 1e4;

/// Inner edge of both scan branches (rho = 0 is excluded from the domain).
pub const RHO_SCAN_EDGE: f64 = 1e-8;

/// Default relative tolerance for adaptive quadrature.
pub const QUAD_REL_TOL: f64 = 1e-6;

/// Exponential tail truncation threshold, exp(-TAIL_EXPONENT).
pub const TAIL_EXPONENT: f64 = 30.0;

/// |rho| above which CES evaluation switches to log-space.
pub const CES_LOG_SPACE_RHO: f64 = 8.0;
