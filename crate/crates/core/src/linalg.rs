//! Dense linear-algebra kernels: a cyclic Jacobi eigensolver for complex
//! Hermitian matrices, and SVD-based rank / nullspace helpers for real
//! systems.
//!
//! The Jacobi solver is the single trusted primitive behind unitary
//! exponentials, density validation and nondegeneracy checks. Matrices in
//! this toolkit stay below ~100x100, where cyclic Jacobi is simple, always
//! converges, and delivers eigenvectors orthonormal to machine precision.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<C64>;
pub type RMatrix = DMatrix<f64>;

const MAX_JACOBI_SWEEPS: usize = 60;

/// Frobenius norm of the off-diagonal part.
fn off_diagonal_norm(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

pub fn all_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Eigendecomposition of a complex Hermitian matrix by cyclic Jacobi
/// rotations: returns `(eigenvalues ascending, eigenvectors as columns)`
/// with `A = V diag(w) V^dag`.
///
/// Only the Hermitian part of the input is seen: diagonals are taken real
/// and each rotation works on `a_pq` alone, so a skew defect below the
/// ingestion tolerance cannot leak into the spectrum.
pub fn eigh(a: &CMatrix) -> Result<(DVector<f64>, CMatrix)> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if !all_finite(a) {
        return Err(Error::NonFinite { context: "eigh" });
    }
    if n == 0 {
        return Ok((DVector::zeros(0), CMatrix::zeros(0, 0)));
    }

    let mut m = a.clone();
    let mut v = CMatrix::identity(n, n);
    let scale = m.norm().max(f64::MIN_POSITIVE);
    let target = scale * 1e-14;

    let mut converged = false;
    for _sweep in 0..MAX_JACOBI_SWEEPS {
        if off_diagonal_norm(&m) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let beta = apq.norm();
                if beta <= target / (n as f64) {
                    continue;
                }
                let phase = apq / beta; // e^{i phi}
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * beta);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Unitary acting on columns (p, q):
                //   U_pp = c        U_pq = s
                //   U_qp = -s e^{-i phi}   U_qq = c e^{-i phi}
                let cc = C64::new(c, 0.0);
                let ss = C64::new(s, 0.0);
                let u_qp = -ss * phase.conj();
                let u_qq = cc * phase.conj();

                // A <- U^dag A U: column update then row update.
                for i in 0..n {
                    let aip = m[(i, p)];
                    let aiq = m[(i, q)];
                    m[(i, p)] = aip * cc + aiq * u_qp;
                    m[(i, q)] = aip * ss + aiq * u_qq;
                }
                for j in 0..n {
                    let apj = m[(p, j)];
                    let aqj = m[(q, j)];
                    m[(p, j)] = cc * apj + u_qp.conj() * aqj;
                    m[(q, j)] = ss * apj + u_qq.conj() * aqj;
                }
                // Forced exact zero; rounding leaves O(eps) here otherwise.
                m[(p, q)] = C64::new(0.0, 0.0);
                m[(q, p)] = C64::new(0.0, 0.0);

                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * cc + viq * u_qp;
                    v[(i, q)] = vip * ss + viq * u_qq;
                }
            }
        }
    }
    if !converged && off_diagonal_norm(&m) > target {
        return Err(Error::EigenNonConvergence {
            sweeps: MAX_JACOBI_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).unwrap());
    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| m[(i, i)].re));
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &v.column(src));
    }
    Ok((eigenvalues, vectors))
}

/// Singular values of a real matrix, descending.
pub fn singular_values(m: &RMatrix) -> Vec<f64> {
    let svd = m.clone().svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Numerical rank with a relative singular-value cutoff.
pub fn numerical_rank(m: &RMatrix, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = singular_values(m);
    let smax = sv[0];
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Orthonormal basis of the (right) nullspace of a real matrix.
///
/// The thin SVD only exposes `min(rows, cols)` right singular vectors, so
/// wide systems are padded with zero rows (which leave the nullspace
/// unchanged) to recover the full basis.
pub fn nullspace(m: &RMatrix, rel_tol: f64) -> Vec<DVector<f64>> {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return Vec::new();
    }
    if rows < cols {
        let mut padded = RMatrix::zeros(cols, cols);
        padded.view_mut((0, 0), (rows, cols)).copy_from(m);
        return nullspace(&padded, rel_tol);
    }
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("SVD with v_t requested");
    let smax = svd
        .singular_values
        .iter()
        .fold(0.0_f64, |acc, &s| acc.max(s));
    let mut basis = Vec::new();
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if smax == 0.0 || s <= rel_tol * smax {
            basis.push(v_t.row(k).transpose());
        }
    }
    basis
}

/// Singular values of a complex matrix, descending, computed on the real
/// block embedding `[[Re, -Im], [Im, Re]]` (each value appears twice there;
/// duplicates are collapsed by taking every other entry).
pub fn complex_singular_values(m: &CMatrix) -> Vec<f64> {
    let (rows, cols) = m.shape();
    let mut real = RMatrix::zeros(2 * rows, 2 * cols);
    for i in 0..rows {
        for j in 0..cols {
            let z = m[(i, j)];
            real[(i, j)] = z.re;
            real[(i, j + cols)] = -z.im;
            real[(i + rows, j)] = z.im;
            real[(i + rows, j + cols)] = z.re;
        }
    }
    let sv = singular_values(&real);
    sv.into_iter().step_by(2).collect()
}

/// Splits a complex linear system `C z = 0` into the equivalent real system
/// on `[Re z; Im z]` and returns complex nullspace representatives.
pub fn complex_nullspace(c: &CMatrix, rel_tol: f64) -> Vec<DVector<C64>> {
    let (rows, cols) = c.shape();
    let mut real = RMatrix::zeros(2 * rows, 2 * cols);
    for i in 0..rows {
        for j in 0..cols {
            let z = c[(i, j)];
            real[(i, j)] = z.re;
            real[(i, j + cols)] = -z.im;
            real[(i + rows, j)] = z.im;
            real[(i + rows, j + cols)] = z.re;
        }
    }
    nullspace(&real, rel_tol)
        .into_iter()
        .map(|v| {
            DVector::from_iterator(cols, (0..cols).map(|j| C64::new(v[j], v[j + cols])))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn eigh_diagonal() {
        let a = CMatrix::from_diagonal(&DVector::from_vec(vec![
            C64::new(3.0, 0.0),
            C64::new(-1.0, 0.0),
            C64::new(0.5, 0.0),
        ]));
        let (w, v) = eigh(&a).unwrap();
        assert_relative_eq!(w[0], -1.0, epsilon = 1e-14);
        assert_relative_eq!(w[1], 0.5, epsilon = 1e-14);
        assert_relative_eq!(w[2], 3.0, epsilon = 1e-14);
        let recon = &v * CMatrix::from_diagonal(&w.map(|x| C64::new(x, 0.0))) * v.adjoint();
        assert!((recon - a).norm() < 1e-13);
    }

    #[test]
    fn eigh_pauli_y() {
        // sigma_y has eigenvalues -1, +1.
        let a = CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.0, 0.0),
                C64::new(0.0, -1.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, 0.0),
            ],
        );
        let (w, v) = eigh(&a).unwrap();
        assert_relative_eq!(w[0], -1.0, epsilon = 1e-14);
        assert_relative_eq!(w[1], 1.0, epsilon = 1e-14);
        let defect = (v.adjoint() * &v - CMatrix::identity(2, 2)).norm();
        assert!(defect < 1e-14);
    }

    #[test]
    fn eigh_random_hermitian_reconstructs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [2usize, 3, 5, 9, 15] {
            let raw = CMatrix::from_fn(n, n, |_, _| {
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let a = (&raw + raw.adjoint()) * C64::new(0.5, 0.0);
            let (w, v) = eigh(&a).unwrap();
            let recon = &v * CMatrix::from_diagonal(&w.map(|x| C64::new(x, 0.0))) * v.adjoint();
            assert!(
                (recon - &a).norm() < 1e-12 * a.norm().max(1.0),
                "reconstruction failed at n={n}"
            );
            let ortho = (v.adjoint() * &v - CMatrix::identity(n, n)).norm();
            assert!(ortho < 1e-12, "eigenvectors not orthonormal at n={n}");
            for k in 1..n {
                assert!(w[k] >= w[k - 1]);
            }
        }
    }

    #[test]
    fn rank_and_nullspace() {
        // Rank-1 matrix with a 2-dim nullspace.
        let m = RMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, -1.0, -2.0, -3.0]);
        assert_eq!(numerical_rank(&m, 1e-9), 1);
        let ns = nullspace(&m, 1e-9);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!((&m * v).norm() < 1e-12);
        }
    }

    #[test]
    fn complex_nullspace_finds_known_vector() {
        // (1, i) is orthogonal to the single row (i, 1) under C z = 0:
        // i*1 + 1*i = 2i != 0 -- pick row (1, i): 1*1 + i*i = 0.
        let c = CMatrix::from_row_slice(1, 2, &[C64::new(1.0, 0.0), C64::new(0.0, 1.0)]);
        // Pad with a zero row so rows >= cols.
        let mut padded = CMatrix::zeros(2, 2);
        padded.set_row(0, &c.row(0));
        let ns = complex_nullspace(&padded, 1e-9);
        assert_eq!(ns.len(), 2); // complex dim 1 -> real dim 2
        for z in &ns {
            let r = &padded * z;
            assert!(r.norm() < 1e-12);
        }
    }
}
