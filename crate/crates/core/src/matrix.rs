//! Complex matrix primitives: Hermitian and density operators, commutators,
//! Hilbert-Schmidt geometry, and unitary exponentials.
//!
//! All matrices are dense, square and dimensionless unless stated; energies
//! are in eV and times in hbar/eV (hbar = 1 throughout, so 1 time unit is
//! about 0.658 fs).

use nalgebra::DVector;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::tol;

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Pauli x.
pub fn sigma_x() -> CMatrix {
    CMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
        ],
    )
}

/// Pauli y.
pub fn sigma_y() -> CMatrix {
    CMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(0.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, 0.0),
        ],
    )
}

/// Pauli z, `diag(+1, -1)`.
pub fn sigma_z() -> CMatrix {
    CMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(-1.0, 0.0),
        ],
    )
}

fn check_same_shape(a: &CMatrix, b: &CMatrix, context: &'static str) -> Result<()> {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return Err(Error::DimensionMismatch {
            context,
            left_rows: a.nrows(),
            left_cols: a.ncols(),
            right_rows: b.nrows(),
            right_cols: b.ncols(),
        });
    }
    Ok(())
}

/// Commutator `[a, b] = ab - ba`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    check_same_shape(a, b, "commutator")?;
    Ok(a * b - b * a)
}

/// Real Hilbert-Schmidt inner product `Re Tr(a^dag b)`.
///
/// This is the inner product under which skew-Hermitian matrices form a real
/// Euclidean space; `hs_inner(a, a)` equals the squared Frobenius norm.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    check_same_shape(a, b, "hs_inner")?;
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x.re * y.re + x.im * y.im;
    }
    Ok(acc)
}

pub fn hs_norm(a: &CMatrix) -> f64 {
    a.norm()
}

pub fn trace(a: &CMatrix) -> C64 {
    let mut t = C64::new(0.0, 0.0);
    for i in 0..a.nrows().min(a.ncols()) {
        t += a[(i, i)];
    }
    t
}

/// Frobenius distance from Hermiticity, `||H - H^dag||_F`.
pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    (a - a.adjoint()).norm()
}

/// Frobenius distance from skew-Hermiticity, `||X + X^dag||_F`.
pub fn skew_defect(a: &CMatrix) -> f64 {
    (a + a.adjoint()).norm()
}

/// A Hermitian matrix with tolerance-checked ingestion.
///
/// Construction symmetrizes `(H + H^dag)/2` instead of rejecting; when the
/// correction exceeds the relative tolerance the operator carries a
/// `corrected` flag so callers can surface the warning.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    matrix: CMatrix,
    corrected: bool,
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix, hermiticity_tol: f64) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if !linalg::all_finite(&matrix) {
            return Err(Error::NonFinite {
                context: "HermitianOperator::new",
            });
        }
        let defect = hermiticity_defect(&matrix);
        let corrected = defect > hermiticity_tol * matrix.norm().max(1.0);
        let sym = (&matrix + matrix.adjoint()) * C64::new(0.5, 0.0);
        Ok(Self {
            matrix: sym,
            corrected,
        })
    }

    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        Self::new(matrix, tol::HERMITICITY_TOL)
    }

    /// Real entries (row-major) entered as a Hermitian operator; intended for
    /// literal model matrices.
    pub fn from_real(n: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), n * n);
        let m = CMatrix::from_row_slice(
            n,
            n,
            &entries.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>(),
        );
        Self::from_matrix(m).expect("real literal is Hermitian")
    }

    pub fn zero(n: usize) -> Self {
        Self {
            matrix: CMatrix::zeros(n, n),
            corrected: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// True when ingestion had to correct a Hermiticity defect beyond
    /// tolerance.
    pub fn was_corrected(&self) -> bool {
        self.corrected
    }

    pub fn trace(&self) -> f64 {
        trace(&self.matrix).re
    }

    pub fn eigh(&self) -> Result<(DVector<f64>, CMatrix)> {
        linalg::eigh(&self.matrix)
    }
}

/// A density operator: Hermitian, positive semidefinite within tolerance,
/// trace pinned to an expected convention (1 for a single unit, L for an
/// L-block ensemble state).
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: CMatrix,
    trace_convention: f64,
}

impl DensityOperator {
    pub fn new(matrix: CMatrix, trace_convention: f64) -> Result<Self> {
        let herm = HermitianOperator::from_matrix(matrix)?;
        if herm.was_corrected() {
            return Err(Error::InvalidDensity {
                reason: "not Hermitian within tolerance".into(),
            });
        }
        let tr = herm.trace();
        if (tr - trace_convention).abs() > tol::DENSITY_TRACE_TOL {
            return Err(Error::InvalidDensity {
                reason: format!("trace {tr} differs from convention {trace_convention}"),
            });
        }
        let (w, _) = herm.eigh()?;
        if let Some(min) = w.iter().cloned().reduce(f64::min) {
            if min < tol::DENSITY_EIG_FLOOR {
                return Err(Error::InvalidDensity {
                    reason: format!("negative eigenvalue {min}"),
                });
            }
        }
        Ok(Self {
            matrix: herm.into_matrix(),
            trace_convention,
        })
    }

    /// Pure state `|k><k|` in dimension `n`.
    pub fn pure_basis_state(n: usize, k: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        m[(k, k)] = C64::new(1.0, 0.0);
        Self {
            matrix: m,
            trace_convention: 1.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace_convention(&self) -> f64 {
        self.trace_convention
    }

    /// Tr(rho^2), the purity.
    pub fn purity(&self) -> f64 {
        let mut acc = 0.0;
        for z in self.matrix.iter() {
            acc += z.norm_sqr();
        }
        acc
    }
}

/// Unitary `U = exp(-i h t)` via Hermitian eigendecomposition.
///
/// Exact unitarity (to rounding) is the point of going through the
/// eigenbasis: `U = V diag(e^{-i w t}) V^dag` with orthonormal `V`.
pub fn expm_unitary(h: &HermitianOperator, t: f64) -> Result<CMatrix> {
    let (w, v) = h.eigh()?;
    let u = expm_from_eigh(&w, &v, t);
    let n = u.nrows();
    let defect = (u.adjoint() * &u - identity(n)).norm();
    if !defect.is_finite() || defect > tol::UNITARITY_TOL * n as f64 {
        return Err(Error::NonFinite {
            context: "expm_unitary",
        });
    }
    Ok(u)
}

/// Assembles `exp(-i h t)` from a precomputed eigendecomposition of `h`.
pub fn expm_from_eigh(w: &DVector<f64>, v: &CMatrix, t: f64) -> CMatrix {
    let n = v.nrows();
    let mut scaled = v.clone();
    for (j, &lambda) in w.iter().enumerate() {
        let phase = C64::from_polar(1.0, -lambda * t);
        for i in 0..n {
            scaled[(i, j)] *= phase;
        }
    }
    scaled * v.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn mat2(entries: [(f64, f64); 4]) -> CMatrix {
        CMatrix::from_row_slice(
            2,
            2,
            &entries
                .iter()
                .map(|&(r, i)| C64::new(r, i))
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn commutator_of_pauli_x_and_z() {
        // [sigma_x, sigma_z] = -2i sigma_y (the algebraically correct bracket;
        // dropping the i is a common shorthand).
        let c = commutator(&sigma_x(), &sigma_z()).unwrap();
        let expect = sigma_y() * C64::new(0.0, -2.0);
        assert!((c - expect).norm() < 1e-15);
    }

    #[test]
    fn commutator_antisymmetry_annihilates() {
        let a = mat2([(1.0, 0.0), (2.0, 3.0), (2.0, -3.0), (-0.5, 0.0)]);
        let c = commutator(&a, &a).unwrap();
        assert_eq!(c.norm(), 0.0);
    }

    #[test]
    fn commutator_of_skew_pauli_seeds_matches_brute_force() {
        // Oracle: explicit 2x2 products of (i sigma_z) and (i sigma_x).
        let a = sigma_z() * C64::new(0.0, 1.0);
        let b = sigma_x() * C64::new(0.0, 1.0);
        let mut brute = CMatrix::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                let mut ab = C64::new(0.0, 0.0);
                let mut ba = C64::new(0.0, 0.0);
                for k in 0..2 {
                    ab += a[(i, k)] * b[(k, j)];
                    ba += b[(i, k)] * a[(k, j)];
                }
                brute[(i, j)] = ab - ba;
            }
        }
        // Frozen from the brute-force arithmetic: [i sigma_z, i sigma_x]
        // = -2i sigma_y = [[0, -2], [2, 0]].
        let frozen = mat2([(0.0, 0.0), (-2.0, 0.0), (2.0, 0.0), (0.0, 0.0)]);
        assert!((&brute - &frozen).norm() < 1e-15);
        let c = commutator(&a, &b).unwrap();
        assert!((c - brute).norm() < 1e-15);
    }

    #[test]
    fn commutator_rejects_shape_mismatch() {
        let a = CMatrix::zeros(2, 2);
        let b = CMatrix::zeros(3, 3);
        let err = commutator(&a, &b).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("2x2") && msg.contains("3x3"));
    }

    #[test]
    fn hs_inner_pauli_orthogonality() {
        assert_relative_eq!(hs_inner(&sigma_x(), &sigma_y()).unwrap(), 0.0);
        assert_relative_eq!(hs_inner(&sigma_x(), &sigma_x()).unwrap(), 2.0);
        let i3 = identity(3);
        assert_relative_eq!(hs_inner(&i3, &i3).unwrap(), 3.0);
    }

    #[test]
    fn hs_inner_positive_definite() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = CMatrix::from_fn(3, 3, |_, _| {
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            if a.norm() > 0.0 {
                assert!(hs_inner(&a, &a).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn skew_commutator_stays_skew_and_traceless() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let raw = CMatrix::from_fn(4, 4, |_, _| {
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            // Skew-Hermitian traceless inputs.
            let mut x = (&raw - raw.adjoint()) * C64::new(0.5, 0.0);
            let tr = trace(&x) / C64::new(4.0, 0.0);
            for i in 0..4 {
                x[(i, i)] -= tr;
            }
            let raw2 = CMatrix::from_fn(4, 4, |_, _| {
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let mut y = (&raw2 - raw2.adjoint()) * C64::new(0.5, 0.0);
            let tr2 = trace(&y) / C64::new(4.0, 0.0);
            for i in 0..4 {
                y[(i, i)] -= tr2;
            }
            let c = commutator(&x, &y).unwrap();
            assert!(skew_defect(&c) < 1e-13);
            assert!(trace(&c).norm() < 1e-13);
        }
    }

    #[test]
    fn expm_zero_gives_identity() {
        let h = HermitianOperator::zero(3);
        let u = expm_unitary(&h, 5.0).unwrap();
        assert!((u - identity(3)).norm() < 1e-14);
    }

    #[test]
    fn expm_sigma_x_pi_is_minus_identity() {
        let h = HermitianOperator::from_matrix(sigma_x()).unwrap();
        let u = expm_unitary(&h, PI).unwrap();
        assert!((u + identity(2)).norm() < 1e-12);
    }

    #[test]
    fn expm_diagonal_case() {
        let h = HermitianOperator::from_matrix(sigma_z()).unwrap();
        let u = expm_unitary(&h, FRAC_PI_2).unwrap();
        let expect = CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::from_polar(1.0, -FRAC_PI_2),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::from_polar(1.0, FRAC_PI_2),
            ],
        );
        assert!((u - expect).norm() < 1e-13);
    }

    #[test]
    fn expm_group_property() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for n in [2usize, 4] {
            let raw = CMatrix::from_fn(n, n, |_, _| {
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let h = HermitianOperator::from_matrix((&raw + raw.adjoint()) * C64::new(0.5, 0.0))
                .unwrap();
            let (t1, t2) = (0.7, 1.9);
            let lhs = expm_unitary(&h, t1).unwrap() * expm_unitary(&h, t2).unwrap();
            let rhs = expm_unitary(&h, t1 + t2).unwrap();
            assert!((lhs - rhs).norm() < 1e-9 * n as f64);
        }
    }

    #[test]
    fn hermitian_ingestion_symmetrizes_and_flags() {
        let skewed = mat2([(1.0, 0.0), (0.5, 0.2), (0.5, 0.1), (2.0, 0.0)]);
        let h = HermitianOperator::from_matrix(skewed).unwrap();
        assert!(h.was_corrected());
        assert!(hermiticity_defect(h.matrix()) < 1e-15);

        let clean = mat2([(1.0, 0.0), (0.5, 0.2), (0.5, -0.2), (2.0, 0.0)]);
        let h = HermitianOperator::from_matrix(clean).unwrap();
        assert!(!h.was_corrected());
    }

    #[test]
    fn density_operator_validation() {
        let ground = DensityOperator::pure_basis_state(2, 0);
        assert_relative_eq!(ground.purity(), 1.0);

        // Negative eigenvalue rejected.
        let bad = mat2([(1.5, 0.0), (0.0, 0.0), (0.0, 0.0), (-0.5, 0.0)]);
        assert!(DensityOperator::new(bad, 1.0).is_err());

        // Wrong trace rejected.
        let wrong = mat2([(0.7, 0.0), (0.0, 0.0), (0.0, 0.0), (0.7, 0.0)]);
        assert!(DensityOperator::new(wrong, 1.0).is_err());
    }
}
