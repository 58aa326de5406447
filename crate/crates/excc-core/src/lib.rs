//! Numerical laboratory for polynomial spaces indexed by lattice bodies.
//!
//! Classical polynomial spaces of degree `n` in `d` variables collect the
//! monomials `z^J` with `J` in the dilated standard simplex `nΣ`. This crate
//! replaces `Σ` by other compact index bodies `C ⊂ (ℝ₊)^d` (ℓ^p balls with
//! `0 < p ≤ 1`, the degenerate axis cross, tangent triangles) and studies the
//! objects attached to the graded family `Poly(nC) = span{z^J : J ∈ nC}`:
//!
//! * lattice enumeration, `C`-degree, and the graded monomial ordering
//!   ([`body`]);
//! * logarithmic-potential references: Green functions of disks and segments,
//!   product formulas, closed forms on the Euclidean ball ([`potential`]);
//! * moment matrices and orthonormal bases for torus, circle, arcsine,
//!   sphere-surface, product, and discrete measures ([`measure`],
//!   [`orthopoly`]);
//! * Bergman-kernel and sup-style estimators of the extremal growth function
//!   on grids, with convergence studies against the closed forms ([`lab`]);
//! * best-approximation error curves, fitted geometric rates, area-normalized
//!   comparisons, and a small discrete minimax study ([`rates`], [`minimax`]);
//! * random polynomial ensembles with deterministic per-sample RNG streams,
//!   zero statistics along slices, and a damped Newton search for common
//!   zeros ([`ensemble`], [`roots`]).
//!
//! Floating-point policy: every estimator that can overflow in linear scale
//! (diagonal Bergman sums, high-degree Chebyshev values) is computed in log
//! space via [`par::log_sum_exp`]. Reductions over parallel maps are ordered
//! and pairwise so that results do not depend on the number of worker
//! threads.

/// Library version, recorded in experiment manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod body;
pub mod consts;
pub mod ensemble;
pub mod error;
pub mod grid;
pub mod lab;
pub mod measure;
pub mod minimax;
pub mod orthopoly;
pub mod par;
pub mod potential;
pub mod rates;
pub mod roots;

pub use body::{Body, LatticeBasis, MultiIndex, SandwichConstants};
pub use error::{Error, Result};
pub use grid::{AxisSpec, FieldResult, GridSpec, PhaseSpec};
pub use measure::{BmBound, MeasureModel};
pub use orthopoly::{OrthoBasis, PolyC};
pub use potential::{PlanarCompactum, ProductSet};
