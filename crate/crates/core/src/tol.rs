//! Central numerical tolerances.
//!
//! Every threshold used by the library is defined here rather than inlined at
//! the point of use, so the provenance of each magic number is auditable.

/// Relative Hermiticity tolerance: accept H when
/// `||H - H^dag||_F <= tol * max(1, ||H||_F)`.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Absolute residual threshold for linear independence during Lie closure.
/// Generators are normalized to unit Frobenius norm first, so this is
/// scale-free. Published ensemble dimensions (12/15/40/32) must be recovered
/// exactly; residuals from genuine new directions are O(1e-1) or larger in
/// all model systems, while rounding noise sits near 1e-14.
pub const INDEPENDENCE_TOL: f64 = 1e-9;

/// Pairwise orthonormality defect allowed in a [`crate::lie::LieBasis`].
pub const ORTHONORMALITY_TOL: f64 = 1e-9;

/// Relative singular-value threshold for the numerical rank of the
/// trace-coefficient matrix.
pub const RANK_REL_TOL: f64 = 1e-9;

/// Relative singular-value threshold used when extracting nullspaces
/// (invariant-form solver, block-support intersections). Looser than
/// [`RANK_REL_TOL`]: nullspace directions are structural zeros while the
/// smallest genuine singular values in these systems are O(1).
pub const NULLSPACE_REL_TOL: f64 = 1e-7;

/// Smallest singular value (relative to the largest) for a bilinear form to
/// count as nondegenerate.
pub const NONDEGENERACY_TOL: f64 = 1e-6;

/// Unitarity defect allowed per matrix exponential: `||U^dag U - I||_F <= tol * N`.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Eigenvalue floor for density operators (slightly negative to absorb
/// rounding in eigendecompositions of positive semidefinite matrices).
pub const DENSITY_EIG_FLOOR: f64 = -1e-10;

/// Absolute trace defect allowed when validating a density operator.
pub const DENSITY_TRACE_TOL: f64 = 1e-10;

/// Per-block trace drift that aborts a propagation run.
pub const TRACE_ABORT: f64 = 1e-6;

/// Per-block trace / purity drift allowed over a full trajectory.
pub const TRACE_CONSERVATION_TOL: f64 = 1e-8;

/// Projection threshold for detecting the identity direction inside a Lie
/// algebra span.
pub const IDENTITY_DIRECTION_TOL: f64 = 1e-9;

/// Declared interpretation of the qualitative selective-excitation claim:
/// target-dot excited population at the final time must reach this value.
pub const SELECTIVITY_TARGET_MIN: f64 = 0.98;

/// Declared interpretation of "(almost) zero": every non-target excited
/// population at the final time must stay below this value.
pub const SELECTIVITY_LEAK_MAX: f64 = 0.05;
