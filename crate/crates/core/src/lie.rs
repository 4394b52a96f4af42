//! Dynamical Lie algebra computation and classification.
//!
//! [`closure`] generates the real Lie algebra spanned by `{i H_m}` through
//! iterated commutators with rank-revealing orthonormalization. [`classify`]
//! maps the resulting basis onto the degrees of controllability: the full
//! unitary algebra u(N) (complete and mixed-state controllable), su(N)
//! (mixed-state controllable), the compact symplectic algebra sp(N/2) with or
//! without an extra phase direction (pure-state controllable only), or none
//! of these.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::matrix::{self, HermitianOperator};
use crate::tol;

/// Orthonormal real basis (Hilbert-Schmidt inner product) of skew-Hermitian
/// matrices spanning a computed dynamical Lie algebra.
#[derive(Debug, Clone)]
pub struct LieBasis {
    dim_hilbert: usize,
    elements: Vec<CMatrix>,
    independence_tol: f64,
}

impl LieBasis {
    /// Wraps a precomputed orthonormal set after validating orthonormality
    /// and skew-Hermiticity. Does not re-verify closure.
    pub fn from_orthonormal(
        dim_hilbert: usize,
        elements: Vec<CMatrix>,
        independence_tol: f64,
    ) -> Result<Self> {
        let basis = Self {
            dim_hilbert,
            elements,
            independence_tol,
        };
        basis.check_orthonormal()?;
        Ok(basis)
    }

    /// Hilbert-space dimension N the algebra acts on.
    pub fn dim_hilbert(&self) -> usize {
        self.dim_hilbert
    }

    /// Real dimension of the algebra.
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn independence_tol(&self) -> f64 {
        self.independence_tol
    }

    fn check_orthonormal(&self) -> Result<()> {
        for (i, a) in self.elements.iter().enumerate() {
            if a.nrows() != self.dim_hilbert || a.ncols() != self.dim_hilbert {
                return Err(Error::NotSquare {
                    rows: a.nrows(),
                    cols: a.ncols(),
                });
            }
            if matrix::skew_defect(a) > tol::ORTHONORMALITY_TOL {
                return Err(Error::InvalidBlockSystem {
                    reason: format!("basis element {i} is not skew-Hermitian"),
                });
            }
            for (j, b) in self.elements.iter().enumerate().skip(i) {
                let expect = if i == j { 1.0 } else { 0.0 };
                let got = matrix::hs_inner(a, b)?;
                if (got - expect).abs() > tol::ORTHONORMALITY_TOL {
                    return Err(Error::InvalidBlockSystem {
                        reason: format!("orthonormality defect {} at pair ({i},{j})", got - expect),
                    });
                }
            }
        }
        Ok(())
    }

    /// Norm of the residual of `m` after projecting out the basis span.
    /// Projection is applied twice so the result is orthogonal to the span to
    /// rounding, not merely to first order.
    pub fn project_residual(&self, m: &CMatrix) -> CMatrix {
        let mut c = m.clone();
        for _ in 0..2 {
            for e in &self.elements {
                let coeff = matrix::hs_inner(e, &c).expect("shapes checked");
                if coeff != 0.0 {
                    c -= e * C64::new(coeff, 0.0);
                }
            }
        }
        c
    }

    /// Squared norm of the projection of the (normalized) identity direction
    /// `i I/sqrt(N)` onto the span.
    pub fn identity_component(&self) -> f64 {
        let n = self.dim_hilbert;
        let u = matrix::identity(n) * C64::new(0.0, 1.0 / (n as f64).sqrt());
        let mut acc = 0.0;
        for e in &self.elements {
            let c = matrix::hs_inner(e, &u).expect("shapes checked");
            acc += c * c;
        }
        acc
    }

    /// Full invariant check: orthonormality, skew-Hermiticity, and closure
    /// under the commutator up to the independence tolerance.
    pub fn verify(&self) -> Result<()> {
        self.check_orthonormal()?;
        // A basis of full dimension N^2 spans all of u(N); closure is then
        // automatic.
        if self.dim() == self.dim_hilbert * self.dim_hilbert {
            return Ok(());
        }
        for i in 0..self.elements.len() {
            for j in (i + 1)..self.elements.len() {
                let c = matrix::commutator(&self.elements[i], &self.elements[j])?;
                let r = self.project_residual(&c).norm();
                if r > self.independence_tol {
                    return Err(Error::InvalidBlockSystem {
                        reason: format!(
                            "closure defect {r:.3e} for bracket ({i},{j}) exceeds {:.1e}",
                            self.independence_tol
                        ),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Projects `candidate` against `basis` (twice) and appends the normalized
/// residual when its norm exceeds `threshold`. Returns whether an element was
/// added.
fn absorb(basis: &mut Vec<CMatrix>, candidate: CMatrix, threshold: f64) -> bool {
    let mut c = candidate;
    if c.norm() <= threshold {
        return false;
    }
    for _ in 0..2 {
        for e in basis.iter() {
            let coeff = matrix::hs_inner(e, &c).expect("shapes checked");
            if coeff != 0.0 {
                c -= e * C64::new(coeff, 0.0);
            }
        }
    }
    let r = c.norm();
    if r > threshold {
        basis.push(c * C64::new(1.0 / r, 0.0));
        true
    } else {
        false
    }
}

/// Computes the dynamical Lie algebra generated by `{i H_m}`.
///
/// Generators are normalized to unit Frobenius norm (zero generators are
/// skipped), multiplied by i, and orthonormalized. Each round commutes every
/// basis element with the elements added in the previous round; residuals
/// that survive projection onto the current span above the independence
/// threshold extend the basis. Terminates when a round adds nothing or the
/// dimension reaches N^2, then certifies closure with a final sweep.
pub fn closure(generators: &[HermitianOperator], independence_tol: f64) -> Result<LieBasis> {
    if generators.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    if !(independence_tol > 0.0 && independence_tol < 1.0) {
        return Err(Error::InvalidTolerance {
            value: independence_tol,
        });
    }
    let n = generators[0].dim();
    for g in generators {
        if g.dim() != n {
            return Err(Error::DimensionMismatch {
                context: "closure generators",
                left_rows: n,
                left_cols: n,
                right_rows: g.dim(),
                right_cols: g.dim(),
            });
        }
    }

    // Unit-norm basis elements make the threshold scale-free: the product of
    // input norms, floored at 1, is always 1.
    let threshold = independence_tol;
    let max_dim = n * n;
    let mut basis: Vec<CMatrix> = Vec::new();
    for g in generators {
        let norm = g.matrix().norm();
        if norm == 0.0 {
            continue;
        }
        let seed = g.matrix() * C64::new(0.0, 1.0 / norm);
        absorb(&mut basis, seed, threshold);
    }

    let mut round_start = 0;
    while basis.len() < max_dim {
        let round_end = basis.len();
        let mut added = false;
        'round: for y in round_start..round_end {
            for x in 0..y {
                let bracket = matrix::commutator(&basis[x], &basis[y])?;
                if absorb(&mut basis, bracket, threshold) {
                    added = true;
                    if basis.len() == max_dim {
                        break 'round;
                    }
                }
            }
        }
        if !added {
            break;
        }
        round_start = round_end;
    }

    let result = LieBasis {
        dim_hilbert: n,
        elements: basis,
        independence_tol,
    };
    result.verify()?;
    Ok(result)
}

/// Theorem-level classification labels for a dynamical Lie algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraLabel {
    FullUnitary,
    SpecialUnitary,
    Symplectic,
    SymplecticPlusPhase,
    Other,
}

impl AlgebraLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            AlgebraLabel::FullUnitary => "full_unitary",
            AlgebraLabel::SpecialUnitary => "special_unitary",
            AlgebraLabel::Symplectic => "symplectic",
            AlgebraLabel::SymplecticPlusPhase => "symplectic_plus_phase",
            AlgebraLabel::Other => "other",
        }
    }
}

/// Classification of a dynamical Lie algebra together with the degrees of
/// controllability it certifies.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ControllabilityClass {
    pub label: AlgebraLabel,
    pub dim: usize,
    pub complete: bool,
    pub mixed_state: bool,
    pub pure_state: bool,
}

impl ControllabilityClass {
    fn from_label(label: AlgebraLabel, dim: usize) -> Self {
        let (complete, mixed_state, pure_state) = match label {
            AlgebraLabel::FullUnitary => (true, true, true),
            AlgebraLabel::SpecialUnitary => (false, true, true),
            AlgebraLabel::Symplectic | AlgebraLabel::SymplecticPlusPhase => (false, false, true),
            AlgebraLabel::Other => (false, false, false),
        };
        Self {
            label,
            dim,
            complete,
            mixed_state,
            pure_state,
        }
    }
}

fn all_traceless(elements: &[CMatrix]) -> bool {
    elements
        .iter()
        .all(|e| matrix::trace(e).norm() <= tol::IDENTITY_DIRECTION_TOL)
}

/// Classifies a Lie basis per the dimension criteria
/// dim u(N) = N^2, dim su(N) = N^2 - 1, dim sp(N/2) = N(N+1)/2.
///
/// At N = 2 the su(2) and sp(1) checks coincide; the label is deterministic
/// (`SpecialUnitary`) because the su branch is tested first. An extra phase
/// direction only upgrades sp(N/2) to sp(N/2) + u(1) when it is the identity
/// direction itself; other codimension-1 extensions classify as `Other`.
pub fn classify(basis: &LieBasis) -> ControllabilityClass {
    let n = basis.dim_hilbert();
    let k = basis.dim();

    if k == n * n && n > 0 {
        return ControllabilityClass::from_label(AlgebraLabel::FullUnitary, k);
    }

    let traceless = all_traceless(basis.elements());
    if n >= 1 && k == n * n - 1 && traceless {
        return ControllabilityClass::from_label(AlgebraLabel::SpecialUnitary, k);
    }

    if n >= 2 && n % 2 == 0 {
        let sp_dim = n * (n + 1) / 2;
        if traceless && k == sp_dim {
            if let Ok(Some(_)) = invariant_form(basis) {
                return ControllabilityClass::from_label(AlgebraLabel::Symplectic, k);
            }
        }
        if k == sp_dim + 1 && basis.identity_component() >= 1.0 - tol::IDENTITY_DIRECTION_TOL {
            if let Some(traceless_basis) = strip_identity_direction(basis) {
                if traceless_basis.dim() == sp_dim {
                    if let Ok(Some(_)) = invariant_form(&traceless_basis) {
                        return ControllabilityClass::from_label(
                            AlgebraLabel::SymplecticPlusPhase,
                            k,
                        );
                    }
                }
            }
        }
    }

    ControllabilityClass::from_label(AlgebraLabel::Other, k)
}

/// Removes the identity direction from the span, returning an orthonormal
/// basis of the traceless part. Returns `None` when re-orthonormalization
/// does not produce exactly `dim - 1` elements.
fn strip_identity_direction(basis: &LieBasis) -> Option<LieBasis> {
    let n = basis.dim_hilbert();
    let u = matrix::identity(n) * C64::new(0.0, 1.0 / (n as f64).sqrt());
    let mut reduced: Vec<CMatrix> = Vec::with_capacity(basis.dim().saturating_sub(1));
    for e in basis.elements() {
        let coeff = matrix::hs_inner(&u, e).expect("shapes checked");
        let candidate = e - &u * C64::new(coeff, 0.0);
        absorb(&mut reduced, candidate, tol::IDENTITY_DIRECTION_TOL);
    }
    if reduced.len() + 1 != basis.dim() {
        return None;
    }
    LieBasis::from_orthonormal(n, reduced, basis.independence_tol()).ok()
}

/// Standard antisymmetric form `[[0, I], [-I, 0]]` in even dimension.
pub fn standard_symplectic_form(n: usize) -> CMatrix {
    assert!(n % 2 == 0);
    let m = n / 2;
    let mut j = CMatrix::zeros(n, n);
    for i in 0..m {
        j[(i, m + i)] = C64::new(1.0, 0.0);
        j[(m + i, i)] = C64::new(-1.0, 0.0);
    }
    j
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn pseudo_uniform(state: &mut u64) -> f64 {
    (splitmix64(state) >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
}

/// Searches for a nondegenerate antisymmetric matrix J with
/// `X^T J + J X = 0` for every basis element X.
///
/// The homogeneous system is solved over the strictly upper-triangular
/// parameters of J; if the solution space is nontrivial, individual basis
/// vectors and a handful of deterministic pseudo-random combinations are
/// tested for nondegeneracy. Returns `None` when the solution space is
/// trivial or contains no invertible element.
///
/// Callers must remove the identity direction first; the basis is expected
/// to consist of traceless elements.
pub fn invariant_form(basis: &LieBasis) -> Result<Option<CMatrix>> {
    let n = basis.dim_hilbert();
    if n % 2 != 0 {
        return Err(Error::OddDimension { dim: n });
    }
    if basis.dim() == 0 {
        // No constraints; any nondegenerate antisymmetric form qualifies.
        return Ok(Some(standard_symplectic_form(n)));
    }

    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
        .collect();
    let p = pairs.len();
    let rows = basis.dim() * p;
    let mut constraints = CMatrix::zeros(rows, p);
    for (gi, x) in basis.elements().iter().enumerate() {
        let xt = x.transpose();
        for (col, &(a, b)) in pairs.iter().enumerate() {
            // J-candidate basis matrix E = E_ab - E_ba.
            let mut e = CMatrix::zeros(n, n);
            e[(a, b)] = C64::new(1.0, 0.0);
            e[(b, a)] = C64::new(-1.0, 0.0);
            let con = &xt * &e + &e * x;
            for (row, &(i, j)) in pairs.iter().enumerate() {
                constraints[(gi * p + row, col)] = con[(i, j)];
            }
        }
    }

    let null = linalg::complex_nullspace(&constraints, tol::NULLSPACE_REL_TOL);
    if null.is_empty() {
        return Ok(None);
    }

    let assemble = |coeffs: &nalgebra::DVector<C64>| -> CMatrix {
        let mut j = CMatrix::zeros(n, n);
        for (col, &(a, b)) in pairs.iter().enumerate() {
            j[(a, b)] = coeffs[col];
            j[(b, a)] = -coeffs[col];
        }
        j
    };

    let mut candidates: Vec<CMatrix> = null.iter().map(assemble).collect();
    let mut state = 0x5eed_cafe_f00du64;
    for _ in 0..16 {
        let mut combo = nalgebra::DVector::from_element(null[0].len(), C64::new(0.0, 0.0));
        for v in &null {
            let w = C64::new(pseudo_uniform(&mut state), pseudo_uniform(&mut state));
            combo += v * w;
        }
        candidates.push(assemble(&combo));
    }

    for j in candidates {
        let norm = j.norm();
        if norm == 0.0 {
            continue;
        }
        let j = j * C64::new(1.0 / norm, 0.0);
        let sv = linalg::complex_singular_values(&j);
        let (smax, smin) = (sv[0], sv[sv.len() - 1]);
        if smin < tol::NONDEGENERACY_TOL * smax {
            continue;
        }
        // Defensive residual check on the returned certificate.
        let worst = basis
            .elements()
            .iter()
            .map(|x| (x.transpose() * &j + &j * x).norm())
            .fold(0.0_f64, f64::max);
        if worst <= 1e-6 {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{sigma_x, sigma_y, sigma_z};

    fn herm(m: CMatrix) -> HermitianOperator {
        HermitianOperator::from_matrix(m).unwrap()
    }

    fn su2_basis() -> LieBasis {
        closure(
            &[herm(sigma_z()), herm(sigma_x())],
            tol::INDEPENDENCE_TOL,
        )
        .unwrap()
    }

    #[test]
    fn single_qubit_closure_has_dim_three() {
        let basis = su2_basis();
        assert_eq!(basis.dim(), 3);
        basis.verify().unwrap();
        let class = classify(&basis);
        assert_eq!(class.label, AlgebraLabel::SpecialUnitary);
        assert!(class.mixed_state && class.pure_state && !class.complete);
    }

    #[test]
    fn full_u2_classifies_as_full_unitary() {
        let i = C64::new(0.0, 1.0);
        let elements = vec![
            sigma_x() * i * C64::new(1.0 / 2f64.sqrt(), 0.0),
            sigma_y() * i * C64::new(1.0 / 2f64.sqrt(), 0.0),
            sigma_z() * i * C64::new(1.0 / 2f64.sqrt(), 0.0),
            matrix::identity(2) * i * C64::new(1.0 / 2f64.sqrt(), 0.0),
        ];
        let basis = LieBasis::from_orthonormal(2, elements, tol::INDEPENDENCE_TOL).unwrap();
        let class = classify(&basis);
        assert_eq!(class.label, AlgebraLabel::FullUnitary);
        assert!(class.complete && class.mixed_state && class.pure_state);
    }

    #[test]
    fn closure_rejects_bad_input() {
        assert!(closure(&[], 1e-9).is_err());
        let gens = [herm(sigma_z())];
        assert!(closure(&gens, 0.0).is_err());
        assert!(closure(&gens, 1.0).is_err());
        let mixed = [herm(sigma_z()), HermitianOperator::zero(3)];
        assert!(closure(&mixed, 1e-9).is_err());
    }

    #[test]
    fn zero_generator_contributes_nothing() {
        let basis = closure(
            &[herm(sigma_z()), HermitianOperator::zero(2)],
            tol::INDEPENDENCE_TOL,
        )
        .unwrap();
        assert_eq!(basis.dim(), 1);
        assert_eq!(classify(&basis).label, AlgebraLabel::Other);
    }

    #[test]
    fn su2_invariant_form_is_standard_j() {
        let basis = su2_basis();
        let j = invariant_form(&basis).unwrap().expect("sp(1) = su(2)");
        // Match against [[0,1],[-1,0]] up to a complex scale.
        let j_std = standard_symplectic_form(2);
        let overlap: C64 = (j_std.adjoint() * &j).trace();
        assert!(
            (overlap.norm() - j.norm() * j_std.norm()).abs() < 1e-9,
            "form is not proportional to the standard J"
        );
    }

    #[test]
    fn invariant_form_requires_even_dimension() {
        let gens = [herm(matrix::identity(3))];
        let basis = closure(&gens, tol::INDEPENDENCE_TOL).unwrap();
        assert!(matches!(
            invariant_form(&basis),
            Err(Error::OddDimension { dim: 3 })
        ));
    }

    #[test]
    fn so3_in_u3_is_other() {
        // Real antisymmetric 3x3 matrices are skew-Hermitian; two rotations
        // generate so(3).
        let lx = CMatrix::from_row_slice(
            3,
            3,
            &[
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(-1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
            ],
        );
        let ly = CMatrix::from_row_slice(
            3,
            3,
            &[
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(-1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
            ],
        );
        // Feed the generators as Hermitian operators i*L (so the closure seeds
        // i*(iL) reproduce +/- L up to normalization).
        let gx = herm(lx * C64::new(0.0, 1.0));
        let gy = herm(ly * C64::new(0.0, 1.0));
        let basis = closure(&[gx, gy], tol::INDEPENDENCE_TOL).unwrap();
        assert_eq!(basis.dim(), 3);
        let class = classify(&basis);
        assert_eq!(class.label, AlgebraLabel::Other);
        assert!(!class.pure_state);
    }

    #[test]
    fn random_qubit_pairs_close_to_three_or_four() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let mut checked = 0;
        while checked < 100 {
            let rand_herm = |rng: &mut rand_chacha::ChaCha8Rng| {
                let raw = CMatrix::from_fn(2, 2, |_, _| {
                    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                });
                (&raw + raw.adjoint()) * C64::new(0.5, 0.0)
            };
            let a = rand_herm(&mut rng);
            let b = rand_herm(&mut rng);
            // Skip (numerically) commuting pairs: those are simultaneously
            // diagonalizable and out of scope for this property.
            if matrix::commutator(&a, &b).unwrap().norm() < 1e-6 {
                continue;
            }
            let basis = closure(&[herm(a), herm(b)], tol::INDEPENDENCE_TOL).unwrap();
            assert!(
                basis.dim() == 3 || basis.dim() == 4,
                "unexpected dim {}",
                basis.dim()
            );
            checked += 1;
        }
    }
}
