//! Shared numeric tolerances.
//!
//! All invariant checks in this crate use the same three scales, and tests
//! import them from here so the two sides cannot drift apart.

/// Entrywise tolerance for invariants enforced at construction time
/// (state normalization, Hermiticity, idempotency).
pub const CONSTRUCTION_EPS: f64 = 1e-12;

/// Tolerance for composite checks built from several construction-exact
/// pieces (PVM orthogonality and completeness, trace integrality,
/// probability sums).
pub const COMPOSITE_EPS: f64 = 1e-10;

/// Threshold below which a conditioning denominator counts as vanished.
pub const CONDITIONING_EPS: f64 = 1e-15;

/// Guard band on the strict inequality `zeta_1 + zeta_2 > 1`: sums within
/// this band of 1 count as satisfying exclusivity, since the exclusivity
/// principle permits equality.
pub const PARADOX_GUARD: f64 = 1e-12;
