//! Piecewise-constant propagation of block-diagonal density operators.
//!
//! Each step applies `U = exp(-i H_eff dt)` per block, with the effective
//! Hamiltonian sampled at the step midpoint. Two models are provided:
//!
//! * `Full` keeps the explicit carrier, `H = H_0 + sum_m A_m cos(w t) H_m`;
//! * `RotatingWave` moves two-level blocks into the frame rotating at the
//!   carrier and drops counter-rotating terms,
//!   `H = H_0 - (w/2) diag(-1,+1) + sum_m (A_m/2) H_m`, which makes the
//!   resonant Rabi solution exact and serves as the test oracle.

use nalgebra::DVector;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::matrix::{self, DensityOperator, HermitianOperator};
use crate::multipartite::BlockSystem;
use crate::pulse::PulseSchedule;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagationMode {
    Full,
    RotatingWave,
}

/// Block-diagonal state: one density operator per block, so an L-dot
/// ensemble state carries total trace L.
#[derive(Debug, Clone)]
pub struct BlockDensity {
    blocks: Vec<DensityOperator>,
}

impl BlockDensity {
    pub fn new(blocks: Vec<DensityOperator>) -> Self {
        Self { blocks }
    }

    /// Every block in its pure ground state (index 0).
    pub fn all_ground(sys: &BlockSystem) -> Self {
        Self {
            blocks: sys
                .block_dims()
                .iter()
                .map(|&d| DensityOperator::pure_basis_state(d, 0))
                .collect(),
        }
    }

    pub fn blocks(&self) -> &[DensityOperator] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    fn matches(&self, sys: &BlockSystem) -> bool {
        self.blocks.len() == sys.num_blocks()
            && self
                .blocks
                .iter()
                .zip(sys.block_dims())
                .all(|(b, &d)| b.dim() == d)
    }
}

/// `Re Tr(a rho)` for a single block.
pub fn observable_expectation(rho: &DensityOperator, a: &HermitianOperator) -> Result<f64> {
    if rho.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            context: "observable_expectation",
            left_rows: a.dim(),
            left_cols: a.dim(),
            right_rows: rho.dim(),
            right_cols: rho.dim(),
        });
    }
    Ok(matrix::hs_inner(a.matrix(), rho.matrix())?)
}

/// `Re Tr(A rho)` for a block-diagonal observable over a block state.
pub fn block_observable_expectation(
    rho: &BlockDensity,
    observable: &[HermitianOperator],
) -> Result<f64> {
    if rho.num_blocks() != observable.len() {
        return Err(Error::DimensionMismatch {
            context: "block_observable_expectation",
            left_rows: observable.len(),
            left_cols: observable.len(),
            right_rows: rho.num_blocks(),
            right_cols: rho.num_blocks(),
        });
    }
    let mut acc = 0.0;
    for (b, a) in rho.blocks().iter().zip(observable) {
        acc += observable_expectation(b, a)?;
    }
    Ok(acc)
}

/// Recorded run of a propagation.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Recorded times, starting at t = 0 and always including the final time.
    pub times: Vec<f64>,
    /// `populations[block][level][sample]`.
    pub populations: Vec<Vec<Vec<f64>>>,
    /// `<A>(t)` at the recorded times; empty when no observable was given.
    pub observable_values: Vec<f64>,
    /// `Tr(rho_l^2)` per block at the recorded times.
    pub purities: Vec<Vec<f64>>,
    pub final_state: BlockDensity,
}

impl Trajectory {
    /// Population of the highest level of each block at recorded sample `s`
    /// (the excited state in both the two-level and Lambda orderings).
    pub fn excited_populations(&self, sample: usize) -> Vec<f64> {
        self.populations
            .iter()
            .map(|levels| levels[levels.len() - 1][sample])
            .collect()
    }

    pub fn final_excited_populations(&self) -> Vec<f64> {
        self.excited_populations(self.times.len() - 1)
    }

    pub fn final_observable(&self) -> Option<f64> {
        self.observable_values.last().copied()
    }
}

/// Per-step, per-block propagation operator with its eigendecomposition
/// (reused by the optimizer's exact gradient).
pub(crate) struct StepOperator {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: CMatrix,
    pub unitary: CMatrix,
}

pub(crate) fn validate_inputs(
    sys: &BlockSystem,
    pulse: &PulseSchedule,
    rho0: &BlockDensity,
    mode: PropagationMode,
) -> Result<()> {
    if pulse.num_controls() != sys.num_controls() {
        return Err(Error::ControlCountMismatch {
            expected: sys.num_controls(),
            found: pulse.num_controls(),
        });
    }
    if !rho0.matches(sys) {
        return Err(Error::InvalidBlockSystem {
            reason: "initial state blocks do not match the system's block dimensions".into(),
        });
    }
    if mode == PropagationMode::RotatingWave {
        if pulse.carrier().is_none() {
            return Err(Error::RotatingWaveUnsupported {
                reason: "no carrier frequency on the pulse".into(),
            });
        }
        if sys.block_dims().iter().any(|&d| d != 2) {
            return Err(Error::RotatingWaveUnsupported {
                reason: "non-two-level block".into(),
            });
        }
    }
    Ok(())
}

/// Effective per-block Hamiltonian for step `k` at the midpoint of the step.
pub(crate) fn effective_hamiltonian(
    sys: &BlockSystem,
    pulse: &PulseSchedule,
    mode: PropagationMode,
    step: usize,
    block: usize,
) -> CMatrix {
    match mode {
        PropagationMode::Full => {
            let carrier = pulse.carrier_factor(step);
            let mut h = sys.drift_block(block).matrix().clone();
            for m in 0..sys.num_controls() {
                let field = pulse.sample(m, step) * carrier;
                if field != 0.0 {
                    h += sys.control_block(m, block).matrix() * C64::new(field, 0.0);
                }
            }
            h
        }
        PropagationMode::RotatingWave => {
            let w = pulse.carrier().expect("validated");
            let mut h = sys.drift_block(block).matrix().clone();
            h[(0, 0)] += C64::new(w / 2.0, 0.0);
            h[(1, 1)] -= C64::new(w / 2.0, 0.0);
            for m in 0..sys.num_controls() {
                let env = pulse.sample(m, step) / 2.0;
                if env != 0.0 {
                    h += sys.control_block(m, block).matrix() * C64::new(env, 0.0);
                }
            }
            h
        }
    }
}

pub(crate) fn step_operator(
    sys: &BlockSystem,
    pulse: &PulseSchedule,
    mode: PropagationMode,
    step: usize,
    block: usize,
) -> Result<StepOperator> {
    let h = effective_hamiltonian(sys, pulse, mode, step, block);
    let (eigenvalues, eigenvectors) = linalg::eigh(&h)?;
    let unitary = matrix::expm_from_eigh(&eigenvalues, &eigenvectors, pulse.dt());
    Ok(StepOperator {
        eigenvalues,
        eigenvectors,
        unitary,
    })
}

/// Integrates the Liouville equation over the pulse, recording populations,
/// per-block purity and (optionally) an observable every `record_stride`
/// steps. The final step is always recorded.
pub fn propagate(
    sys: &BlockSystem,
    pulse: &PulseSchedule,
    rho0: &BlockDensity,
    observable: Option<&[HermitianOperator]>,
    mode: PropagationMode,
    record_stride: usize,
) -> Result<Trajectory> {
    validate_inputs(sys, pulse, rho0, mode)?;
    if record_stride == 0 {
        return Err(Error::InvalidPulse {
            reason: "record_stride must be at least 1".into(),
        });
    }
    if let Some(obs) = observable {
        if obs.len() != sys.num_blocks()
            || obs
                .iter()
                .zip(sys.block_dims())
                .any(|(a, &d)| a.dim() != d)
        {
            return Err(Error::InvalidBlockSystem {
                reason: "observable blocks do not match the system's block dimensions".into(),
            });
        }
    }

    let l_count = sys.num_blocks();
    let steps = pulse.steps();
    let mut rho: Vec<CMatrix> = rho0.blocks().iter().map(|b| b.matrix().clone()).collect();
    let base_traces: Vec<f64> = rho0.blocks().iter().map(|b| b.trace_convention()).collect();

    let mut times = Vec::new();
    let mut populations: Vec<Vec<Vec<f64>>> = sys
        .block_dims()
        .iter()
        .map(|&d| vec![Vec::new(); d])
        .collect();
    let mut purities: Vec<Vec<f64>> = vec![Vec::new(); l_count];
    let mut observable_values = Vec::new();

    let mut record = |t: f64, rho: &[CMatrix]| -> Result<()> {
        times.push(t);
        for (l, block) in rho.iter().enumerate() {
            for level in 0..block.nrows() {
                populations[l][level].push(block[(level, level)].re);
            }
            purities[l].push(block.iter().map(|z| z.norm_sqr()).sum());
        }
        if let Some(obs) = observable {
            let mut acc = 0.0;
            for (l, block) in rho.iter().enumerate() {
                acc += matrix::hs_inner(obs[l].matrix(), block)?;
            }
            observable_values.push(acc);
        }
        Ok(())
    };

    record(0.0, &rho)?;
    for k in 0..steps {
        for l in 0..l_count {
            let op = step_operator(sys, pulse, mode, k, l)?;
            rho[l] = &op.unitary * &rho[l] * op.unitary.adjoint();
            let drift = (matrix::trace(&rho[l]).re - base_traces[l]).abs();
            if !drift.is_finite() || drift > tol::TRACE_ABORT {
                return Err(Error::TraceDrift {
                    step: k,
                    block: l,
                    drift,
                });
            }
        }
        if (k + 1) % record_stride == 0 || k + 1 == steps {
            record((k + 1) as f64 * pulse.dt(), &rho)?;
        }
    }

    let final_blocks: Vec<DensityOperator> = rho
        .into_iter()
        .zip(&base_traces)
        .map(|(m, &tr)| DensityOperator::new(m, tr))
        .collect::<Result<_>>()?;

    Ok(Trajectory {
        times,
        populations,
        observable_values,
        purities,
        final_state: BlockDensity::new(final_blocks),
    })
}

/// Final observable value without trajectory recording; the optimizer's
/// inner loop.
pub(crate) fn final_expectation(
    sys: &BlockSystem,
    pulse: &PulseSchedule,
    rho0: &BlockDensity,
    observable: &[HermitianOperator],
    mode: PropagationMode,
) -> Result<f64> {
    validate_inputs(sys, pulse, rho0, mode)?;
    let steps = pulse.steps();
    let mut rho: Vec<CMatrix> = rho0.blocks().iter().map(|b| b.matrix().clone()).collect();
    for k in 0..steps {
        for (l, block) in rho.iter_mut().enumerate() {
            let op = step_operator(sys, pulse, mode, k, l)?;
            *block = &op.unitary * &*block * op.unitary.adjoint();
        }
    }
    let mut acc = 0.0;
    for (l, block) in rho.iter().enumerate() {
        acc += matrix::hs_inner(observable[l].matrix(), block)?;
    }
    Ok(acc)
}
