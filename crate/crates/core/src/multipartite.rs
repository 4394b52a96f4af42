//! Block-diagonal model of decomposable (non-interacting) multi-partite
//! systems and the simultaneous-controllability criteria.
//!
//! A [`BlockSystem`] carries drift and control Hamiltonians per block,
//! `H_m = diag(H_{m,1}, ..., H_{m,L})`. The mixed-state criterion compares
//! the computed Lie dimension against `r + sum(N_l^2 - 1)`, where `r` is the
//! rank of the matrix of per-block traces. The pure-state criterion demands
//! that the traceless algebra decompose into a direct sum of per-block su or
//! sp factors.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{self, ControllabilityClass, LieBasis};
use crate::linalg::{self, CMatrix, RMatrix};
use crate::matrix::{self, HermitianOperator};
use crate::tol;

/// Largest composite dimension accepted by the analysis entry points; the
/// closure cost grows too fast beyond this.
pub const MAX_COMPOSITE_DIM: usize = 32;

/// Drift plus M control Hamiltonians for L non-interacting blocks.
#[derive(Debug, Clone)]
pub struct BlockSystem {
    block_dims: Vec<usize>,
    drift: Vec<HermitianOperator>,
    controls: Vec<Vec<HermitianOperator>>,
}

impl BlockSystem {
    pub fn new(
        drift: Vec<HermitianOperator>,
        controls: Vec<Vec<HermitianOperator>>,
    ) -> Result<Self> {
        if drift.is_empty() {
            return Err(Error::InvalidBlockSystem {
                reason: "at least one block is required".into(),
            });
        }
        if controls.is_empty() {
            return Err(Error::InvalidBlockSystem {
                reason: "at least one control Hamiltonian is required besides the drift".into(),
            });
        }
        let block_dims: Vec<usize> = drift.iter().map(|h| h.dim()).collect();
        if block_dims.iter().any(|&d| d == 0) {
            return Err(Error::InvalidBlockSystem {
                reason: "zero-dimensional block".into(),
            });
        }
        for (m, list) in controls.iter().enumerate() {
            if list.len() != block_dims.len() {
                return Err(Error::InvalidBlockSystem {
                    reason: format!(
                        "control {m} has {} blocks, expected {}",
                        list.len(),
                        block_dims.len()
                    ),
                });
            }
            for (l, h) in list.iter().enumerate() {
                if h.dim() != block_dims[l] {
                    return Err(Error::InvalidBlockSystem {
                        reason: format!(
                            "control {m} block {l} is {}x{}, expected {}x{}",
                            h.dim(),
                            h.dim(),
                            block_dims[l],
                            block_dims[l]
                        ),
                    });
                }
            }
        }
        Ok(Self {
            block_dims,
            drift,
            controls,
        })
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    pub fn num_controls(&self) -> usize {
        self.controls.len()
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn total_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }

    /// Start offset of block `l` in the composite index space.
    pub fn block_offset(&self, l: usize) -> usize {
        self.block_dims[..l].iter().sum()
    }

    pub fn drift_block(&self, l: usize) -> &HermitianOperator {
        &self.drift[l]
    }

    pub fn control_block(&self, m: usize, l: usize) -> &HermitianOperator {
        &self.controls[m][l]
    }

    /// Composite generators `H_0, H_1, ..., H_M` as full block-diagonal
    /// matrices.
    pub fn full_generators(&self) -> Vec<HermitianOperator> {
        let mut gens = Vec::with_capacity(1 + self.controls.len());
        gens.push(assemble_block_diag(&self.drift));
        for list in &self.controls {
            gens.push(assemble_block_diag(list));
        }
        gens
    }

    /// Drift and control blocks of a single subsystem.
    pub fn block_generators(&self, l: usize) -> Result<Vec<HermitianOperator>> {
        if l >= self.num_blocks() {
            return Err(Error::BlockIndexOutOfRange {
                index: l,
                count: self.num_blocks(),
            });
        }
        let mut gens = vec![self.drift[l].clone()];
        for list in &self.controls {
            gens.push(list[l].clone());
        }
        Ok(gens)
    }
}

/// Stacks per-block Hermitian operators into one block-diagonal operator.
pub fn assemble_block_diag(blocks: &[HermitianOperator]) -> HermitianOperator {
    let n: usize = blocks.iter().map(|b| b.dim()).sum();
    let mut m = CMatrix::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        let d = b.dim();
        m.view_mut((off, off), (d, d)).copy_from(b.matrix());
        off += d;
    }
    HermitianOperator::from_matrix(m).expect("block-diagonal of Hermitian blocks is Hermitian")
}

/// The trace split `H_{m,l} = H~_{m,l} + (alpha_{m,l}/N_l) I` per block, with
/// `alpha_{m,l} = Tr(H_{m,l})`.
#[derive(Debug, Clone)]
pub struct TraceSplit {
    block_dims: Vec<usize>,
    /// Row m = generator m (0 = drift), column l = block.
    traceless_parts: Vec<Vec<HermitianOperator>>,
    trace_coeffs: RMatrix,
}

impl TraceSplit {
    pub fn alpha(&self, m: usize, l: usize) -> f64 {
        self.trace_coeffs[(m, l)]
    }

    pub fn traceless_part(&self, m: usize, l: usize) -> &HermitianOperator {
        &self.traceless_parts[m][l]
    }

    /// The (M+1) x L matrix of per-block traces.
    pub fn a_matrix(&self) -> &RMatrix {
        &self.trace_coeffs
    }

    /// Diagonal generator `D~_m = diag(alpha_{m,1} I_{N_1}, ..., alpha_{m,L} I_{N_L})`.
    pub fn diagonal_generator(&self, m: usize) -> HermitianOperator {
        let blocks: Vec<HermitianOperator> = self
            .block_dims
            .iter()
            .enumerate()
            .map(|(l, &d)| {
                HermitianOperator::from_matrix(
                    matrix::identity(d) * C64::new(self.trace_coeffs[(m, l)], 0.0),
                )
                .expect("scaled identity is Hermitian")
            })
            .collect();
        assemble_block_diag(&blocks)
    }

    /// Composite traceless generators `H~_m` as block-diagonal matrices.
    pub fn traceless_generators(&self) -> Vec<HermitianOperator> {
        self.traceless_parts
            .iter()
            .map(|row| assemble_block_diag(row))
            .collect()
    }
}

/// Splits every generator of `sys` into its per-block traceless part and
/// trace coefficient.
pub fn trace_split(sys: &BlockSystem) -> TraceSplit {
    let num_gens = 1 + sys.num_controls();
    let l_count = sys.num_blocks();
    let mut traceless_parts = Vec::with_capacity(num_gens);
    let mut coeffs = RMatrix::zeros(num_gens, l_count);
    for m in 0..num_gens {
        let mut row = Vec::with_capacity(l_count);
        for l in 0..l_count {
            let h = if m == 0 {
                sys.drift_block(l)
            } else {
                sys.control_block(m - 1, l)
            };
            let alpha = h.trace();
            coeffs[(m, l)] = alpha;
            let d = h.dim();
            let shifted =
                h.matrix() - matrix::identity(d) * C64::new(alpha / d as f64, 0.0);
            row.push(
                HermitianOperator::from_matrix(shifted)
                    .expect("trace shift preserves Hermiticity"),
            );
        }
        traceless_parts.push(row);
    }
    TraceSplit {
        block_dims: sys.block_dims().to_vec(),
        traceless_parts,
        trace_coeffs: coeffs,
    }
}

/// Assembles the trace-coefficient matrix and its numerical rank
/// `r <= min(M+1, L)`.
pub fn a_matrix_rank(split: &TraceSplit) -> (RMatrix, usize) {
    let a = split.a_matrix().clone();
    let r = linalg::numerical_rank(&a, tol::RANK_REL_TOL);
    (a, r)
}

/// Outcome of the simultaneous-controllability analysis of a [`BlockSystem`].
#[derive(Debug, Clone, Serialize)]
pub struct SimultaneousVerdict {
    /// Dimension of the full dynamical Lie algebra L.
    pub computed_dim: usize,
    /// Dimension of the traceless algebra L~ (independently closed).
    pub traceless_dim: usize,
    /// The (M+1) x L matrix of per-block traces, row-major.
    pub a_matrix: Vec<Vec<f64>>,
    /// Numerical rank of the trace matrix.
    pub rank_r: usize,
    /// `r + sum(N_l^2 - 1)`.
    pub expected_dim: usize,
    pub mixed_state_simultaneous: bool,
    pub pure_state_simultaneous: bool,
    /// Theorem-1 classification of each block closed in isolation.
    pub per_block_labels: Vec<ControllabilityClass>,
    /// Classification of the intersection of L~ with each block's support.
    pub block_intersections: Vec<ControllabilityClass>,
}

/// Verdict of Theorem-2 style analysis with explicit tolerances.
pub fn analyze_system(sys: &BlockSystem, independence_tol: f64) -> Result<SimultaneousVerdict> {
    let n = sys.total_dim();
    if n > MAX_COMPOSITE_DIM {
        return Err(Error::SystemTooLarge {
            dim: n,
            limit: MAX_COMPOSITE_DIM,
        });
    }

    let full = lie::closure(&sys.full_generators(), independence_tol)?;
    let split = trace_split(sys);
    let (a, rank_r) = a_matrix_rank(&split);
    let sum_su: usize = sys.block_dims().iter().map(|&d| d * d - 1).sum();
    let expected_dim = rank_r + sum_su;
    let computed_dim = full.dim();

    let traceless = lie::closure(&split.traceless_generators(), independence_tol)?;
    let traceless_dim = traceless.dim();
    // Appendix-level consistency: L = L~ (+) L_D, so the two independent
    // closures must differ by exactly the rank of the trace matrix.
    if traceless_dim + rank_r != computed_dim {
        return Err(Error::InvalidBlockSystem {
            reason: format!(
                "direct-sum defect: dim L = {computed_dim}, dim L~ = {traceless_dim}, rank r = {rank_r}"
            ),
        });
    }

    let mixed_state_simultaneous = computed_dim == expected_dim;

    let mut per_block_labels = Vec::with_capacity(sys.num_blocks());
    for l in 0..sys.num_blocks() {
        per_block_labels.push(individual_check_with(sys, l, independence_tol)?);
    }

    let mut block_intersections = Vec::with_capacity(sys.num_blocks());
    let mut intersection_dim_sum = 0;
    let mut all_blocks_ok = true;
    for l in 0..sys.num_blocks() {
        let basis = block_support_intersection(&traceless, sys, l)?;
        let class = lie::classify(&basis);
        intersection_dim_sum += class.dim;
        if !matches!(
            class.label,
            lie::AlgebraLabel::SpecialUnitary | lie::AlgebraLabel::Symplectic
        ) {
            all_blocks_ok = false;
        }
        block_intersections.push(class);
    }
    let pure_state_simultaneous = all_blocks_ok && intersection_dim_sum == traceless_dim;

    Ok(SimultaneousVerdict {
        computed_dim,
        traceless_dim,
        a_matrix: (0..a.nrows())
            .map(|i| (0..a.ncols()).map(|j| a[(i, j)]).collect())
            .collect(),
        rank_r,
        expected_dim,
        mixed_state_simultaneous,
        pure_state_simultaneous,
        per_block_labels,
        block_intersections,
    })
}

/// Theorem 2: the blocks are simultaneously mixed-state controllable iff
/// `dim L = r + sum(N_l^2 - 1)`.
pub fn simultaneous_mixed_check(sys: &BlockSystem) -> Result<SimultaneousVerdict> {
    analyze_system(sys, tol::INDEPENDENCE_TOL)
}

/// Direct-sum criterion for simultaneous pure-state controllability: the
/// traceless algebra must split into per-block su(N_l) or (N_l even)
/// sp(N_l/2) factors.
pub fn simultaneous_pure_check(sys: &BlockSystem) -> Result<SimultaneousVerdict> {
    analyze_system(sys, tol::INDEPENDENCE_TOL)
}

/// Classification of a single block closed in isolation.
pub fn individual_check(sys: &BlockSystem, l: usize) -> Result<ControllabilityClass> {
    individual_check_with(sys, l, tol::INDEPENDENCE_TOL)
}

pub fn individual_check_with(
    sys: &BlockSystem,
    l: usize,
    independence_tol: f64,
) -> Result<ControllabilityClass> {
    let gens = sys.block_generators(l)?;
    let basis = lie::closure(&gens, independence_tol)?;
    Ok(lie::classify(&basis))
}

/// Intersection of the span of `basis` with the matrices supported only on
/// block `l`, computed as the nullspace of the coordinate-deletion map on
/// the orthonormal basis coefficients.
fn block_support_intersection(
    basis: &LieBasis,
    sys: &BlockSystem,
    l: usize,
) -> Result<LieBasis> {
    let n = sys.total_dim();
    let d = sys.block_dims()[l];
    let off = sys.block_offset(l);
    let k = basis.dim();
    if k == 0 {
        return LieBasis::from_orthonormal(d, Vec::new(), basis.independence_tol());
    }
    if d == n {
        // Single block: every element is supported on it.
        let elements = basis.elements().to_vec();
        return LieBasis::from_orthonormal(d, elements, basis.independence_tol());
    }

    let outside: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !(i >= off && i < off + d && j >= off && j < off + d))
        .collect();
    let mut map = RMatrix::zeros(2 * outside.len(), k);
    for (row, &(i, j)) in outside.iter().enumerate() {
        for (col, e) in basis.elements().iter().enumerate() {
            let z = e[(i, j)];
            map[(2 * row, col)] = z.re;
            map[(2 * row + 1, col)] = z.im;
        }
    }

    let null = linalg::nullspace(&map, tol::NULLSPACE_REL_TOL);
    let mut elements = Vec::with_capacity(null.len());
    for v in &null {
        let mut combo = CMatrix::zeros(n, n);
        for (col, e) in basis.elements().iter().enumerate() {
            if v[col] != 0.0 {
                combo += e * C64::new(v[col], 0.0);
            }
        }
        // Orthonormal coefficients over an orthonormal basis keep the
        // restricted elements orthonormal; off-block residues are below the
        // nullspace tolerance by construction.
        let sub = combo.view((off, off), (d, d)).into_owned();
        elements.push(sub);
    }
    LieBasis::from_orthonormal(d, elements, basis.independence_tol())
}

/// Dimensions and labels produced when a [`BlockSystem`] is analyzed as one
/// composite quantum system (no block structure assumed); used by tests.
pub fn composite_closure_dim(sys: &BlockSystem, independence_tol: f64) -> Result<usize> {
    Ok(lie::closure(&sys.full_generators(), independence_tol)?.dim())
}
