//! Numeric policy constants shared across the crate.
//!
//! Each constant documents the decision it encodes; call sites reference
//! these instead of re-stating literals so that the policy can be audited in
//! one place.

/// Relative slack used by lattice membership tests.
///
/// A point `J` counts as a member of the dilated body `nC` when its defining
/// functional is `≤ n·(1 + MEMBERSHIP_REL_TOL)`. This keeps boundary lattice
/// points (for example `(n, 0)` on the ℓ^p sphere, where `powf` round-off can
/// land on either side) inside the lattice independent of the platform's libm.
pub const MEMBERSHIP_REL_TOL: f64 = 1e-9;

/// Relative pivot floor for the ordered Gram factorization.
///
/// A pivot below `RANK_REL_TOL` times the largest diagonal entry of the Gram
/// matrix aborts the factorization; the offending basis position is reported
/// so the caller can shrink the degree or switch measures.
pub const RANK_REL_TOL: f64 = 1e-12;

/// Largest degree accepted by the dense (non-diagonal) orthonormalization.
///
/// Moment matrices of generic measures are exponentially ill-conditioned in
/// the degree; beyond this cap double precision cannot hold a meaningful
/// triangular factor, so the dense path refuses rather than returning noise.
pub const DENSE_PATH_MAX_N: usize = 40;

/// Condition-number estimate above which the dense path logs a warning.
pub const CONDITION_WARN: f64 = 1e12;

/// Finite stand-in for `log 0` in exported scalar fields.
///
/// CSV consumers receive this sentinel instead of `-inf` when a random
/// polynomial vanishes exactly at a grid point.
pub const FIELD_SENTINEL: f64 = -1.0e3;

/// Absolute slack added to the Bergman bracket width when thresholding a
/// level set to detect the polynomial hull.
pub const HULL_ABS_TOL: f64 = 1e-6;

/// Multiplicative safety factor applied to grid-estimated sup-norm bounds.
pub const GRID_SAFETY: f64 = 1.05;

/// Number of equidistributed support points used for grid-estimated bounds.
pub const BOUND_SAMPLE_POINTS: usize = 4096;

/// Relative threshold below which trailing coefficients of a univariate
/// slice are treated as zero when choosing the effective degree.
pub const COEFF_TRIM_REL_TOL: f64 = 1e-14;

/// Deflation threshold passed to the companion-matrix Schur iteration.
pub const SCHUR_EPS: f64 = 1e-13;

/// Schur iteration budget per matrix dimension.
///
/// Companion matrices of equimodular root sets (such as `z^k = c`) can
/// cycle under shifted QR; a finite cap turns the cycle into a
/// recoverable failure, after which the root finder retries on a
/// shifted variable. LAPACK's equivalent budget is 30 sweeps per
/// eigenvalue; 40 leaves headroom.
pub const SCHUR_ITERS_PER_DIM: usize = 40;

/// Residual tolerance (relative to `1 + ‖coefficients‖₂`) required of a
/// Newton fixed point before it is accepted as a common zero.
pub const NEWTON_RESIDUAL_TOL: f64 = 1e-10;

/// Two common-zero candidates closer than this (in the `ℓ¹` metric on
/// coordinate pairs) are treated as duplicates.
pub const ZERO_DEDUP_TOL: f64 = 1e-8;
