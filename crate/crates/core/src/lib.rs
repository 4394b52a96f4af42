//! Controllability analysis and selective-excitation pulse design for
//! ensembles of non-interacting quantum dots.
//!
//! The toolkit decides the degree of controllability of finite-dimensional
//! and block-diagonal (multi-partite) quantum systems by computing their
//! dynamical Lie algebra, and designs shaped control pulses that excite one
//! member of a simultaneously controllable dot ensemble while returning all
//! others to the ground state.
//!
//! Layering, bottom up:
//! - [`matrix`] / [`linalg`]: dense complex primitives, Hermitian
//!   eigendecomposition, unitary exponentials.
//! - [`lie`]: Lie-algebra closure by iterated commutators and the
//!   degree-of-controllability classification.
//! - [`multipartite`]: block-diagonal systems, trace splitting, and the
//!   simultaneous-controllability criteria.
//! - [`models`]: builders for two-level and Lambda-configuration dot
//!   ensembles, region controls, and mixed-polarization controls.
//! - [`pulse`] / [`propagate`]: piecewise-constant schedules (including the
//!   Gaussian pi-pulse) and density-matrix propagation.
//! - [`optimize`]: gradient-ascent pulse shaping against a selectivity
//!   observable.
//! - [`config`] / [`report`] / [`cli`]: the `dotctl` command-line front end.

pub mod error;
pub mod lie;
pub mod linalg;
pub mod matrix;
pub mod models;
pub mod multipartite;
pub mod optimize;
pub mod propagate;
pub mod pulse;
pub mod tol;

pub use error::{Error, Result};
