//! Numeric thresholds shared across modules.
//!
//! Each constant is used for exactly one kind of decision so that a change in
//! one place does not silently move another test.

/// Unit-norm tolerance for points, normals and quaternions.
pub const UNIT: f64 = 1e-12;

/// Two circles (or two line directions) count as coplanar / parallel when the
/// norm of the cross product of their normals falls below this.
pub const COPLANAR: f64 = 1e-10;

/// Tie-break threshold when scanning coordinates for the first nonzero one.
pub const TIE_BREAK: f64 = 1e-9;

/// Denominator threshold for the transmission coefficient.
pub const DENOMINATOR: f64 = 1e-10;

/// Internal closure verification of a solved cell or linkage pose.
pub const CLOSURE: f64 = 1e-9;

/// Plücker condition d·m = 0.
pub const PLUCKER: f64 = 1e-10;

/// A displacement whose rotation angle is below this is a pure translation.
pub const PURE_TRANSLATION: f64 = 1e-9;

/// Half-turn detection on recovered screw parameters.
pub const HALF_TURN: f64 = 1e-9;

/// Relative tolerance on the Bennett proportion a sin(beta) = ±b sin(alpha).
pub const PROPORTION: f64 = 1e-10;

/// Range checks on arc lengths, e.g. 0 < alpha < pi.
pub const RANGE: f64 = 1e-12;
