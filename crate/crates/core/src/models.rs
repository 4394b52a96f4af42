//! Constructors for the quantum-dot ensembles studied by the toolkit:
//! two-level dots, three-level dots in a Lambda configuration, single-pulse
//! mixed-polarization controls, and spatially addressed region controls.
//!
//! Conventions: the ground state of a two-level dot sits at index 0, so the
//! drift block is `(eps/2) diag(-1, +1)` and the level splitting equals
//! `eps`. Lambda dots order their levels as (ground+, ground-, excited) =
//! (0, 1, 2).

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::HermitianOperator;
use crate::multipartite::BlockSystem;

/// Parameters of a two-level dot: `H[f] = (eps/2) sigma_z + f d sigma_x` in
/// the ground-at-index-0 basis.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TwoLevelDotParams {
    /// Level splitting in eV.
    pub epsilon: f64,
    /// Dimensionless dipole coupling to the field.
    pub dipole: f64,
}

/// Parameters of a Lambda-configuration dot: energy gap `epsilon` between
/// the degenerate ground doublet and the excited state, and dipole moments
/// of the sigma+ / sigma- transitions.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LambdaDotParams {
    pub epsilon: f64,
    pub d_plus: f64,
    pub d_minus: f64,
}

/// A named, possibly overlapping set of dot indices addressed by one control
/// field.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionMask {
    pub name: String,
    /// 0-based dot indices.
    pub members: Vec<usize>,
}

/// Drift block of a two-level dot, `(eps/2) diag(-1, +1)`.
fn two_level_drift(epsilon: f64) -> HermitianOperator {
    HermitianOperator::from_real(2, &[-epsilon / 2.0, 0.0, 0.0, epsilon / 2.0])
}

/// Coupling block of a two-level dot, `d sigma_x`.
fn two_level_coupler(dipole: f64) -> HermitianOperator {
    HermitianOperator::from_real(2, &[0.0, dipole, dipole, 0.0])
}

/// Ensemble of two-level dots sharing a single control field (M = 1).
pub fn two_level_ensemble(params: &[TwoLevelDotParams]) -> Result<BlockSystem> {
    if params.is_empty() {
        return Err(Error::InvalidBlockSystem {
            reason: "two_level_ensemble requires at least one dot".into(),
        });
    }
    let drift = params.iter().map(|p| two_level_drift(p.epsilon)).collect();
    let control = params.iter().map(|p| two_level_coupler(p.dipole)).collect();
    BlockSystem::new(drift, vec![control])
}

/// Drift block of a Lambda dot, `(eps/3) diag(-1, -1, +2)`.
fn lambda_drift(epsilon: f64) -> HermitianOperator {
    let e = epsilon / 3.0;
    HermitianOperator::from_real(3, &[-e, 0.0, 0.0, 0.0, -e, 0.0, 0.0, 0.0, 2.0 * e])
}

/// sigma+ coupler: `d+` between levels 0 and 2.
fn lambda_plus_coupler(d_plus: f64) -> HermitianOperator {
    HermitianOperator::from_real(
        3,
        &[0.0, 0.0, d_plus, 0.0, 0.0, 0.0, d_plus, 0.0, 0.0],
    )
}

/// sigma- coupler: `d-` between levels 1 and 2.
fn lambda_minus_coupler(d_minus: f64) -> HermitianOperator {
    HermitianOperator::from_real(
        3,
        &[0.0, 0.0, 0.0, 0.0, 0.0, d_minus, 0.0, d_minus, 0.0],
    )
}

/// Ensemble of Lambda dots with two polarization controls (M = 2):
/// control 1 couples levels 0<->2 with `d+`, control 2 couples 1<->2 with
/// `d-`.
pub fn lambda_ensemble(params: &[LambdaDotParams]) -> Result<BlockSystem> {
    if params.is_empty() {
        return Err(Error::InvalidBlockSystem {
            reason: "lambda_ensemble requires at least one dot".into(),
        });
    }
    let drift = params.iter().map(|p| lambda_drift(p.epsilon)).collect();
    let plus = params
        .iter()
        .map(|p| lambda_plus_coupler(p.d_plus))
        .collect();
    let minus = params
        .iter()
        .map(|p| lambda_minus_coupler(p.d_minus))
        .collect();
    BlockSystem::new(drift, vec![plus, minus])
}

/// Replaces the two polarization controls of a Lambda ensemble by the single
/// mixed-polarization control `H_C = cos(alpha) H_1 + sin(alpha) H_2`,
/// `alpha` in `[0, pi/2]`.
pub fn mixed_polarization_control(sys: &BlockSystem, alpha: f64) -> Result<BlockSystem> {
    if sys.num_controls() != 2 {
        return Err(Error::InvalidBlockSystem {
            reason: format!(
                "mixed polarization requires exactly 2 controls, found {}",
                sys.num_controls()
            ),
        });
    }
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&alpha) {
        return Err(Error::MixingAngleOutOfRange { value: alpha });
    }
    let (c, s) = (alpha.cos(), alpha.sin());
    let drift = (0..sys.num_blocks()).map(|l| sys.drift_block(l).clone()).collect();
    let combined = (0..sys.num_blocks())
        .map(|l| {
            let m = sys.control_block(0, l).matrix() * C64::new(c, 0.0)
                + sys.control_block(1, l).matrix() * C64::new(s, 0.0);
            HermitianOperator::from_matrix(m).expect("real combination stays Hermitian")
        })
        .collect();
    BlockSystem::new(drift, vec![combined])
}

/// Replaces the single control of `sys` by one control per region: inside a
/// region the block keeps its coupler, outside it is the zero block.
///
/// Requires M = 1 so the per-dot coupler is unambiguous.
pub fn region_controls(sys: &BlockSystem, regions: &[RegionMask]) -> Result<BlockSystem> {
    if sys.num_controls() != 1 {
        return Err(Error::InvalidBlockSystem {
            reason: format!(
                "region controls require a single base control, found {}",
                sys.num_controls()
            ),
        });
    }
    if regions.is_empty() {
        return Err(Error::InvalidBlockSystem {
            reason: "at least one region is required".into(),
        });
    }
    let l_count = sys.num_blocks();
    for region in regions {
        if region.members.is_empty() {
            return Err(Error::InvalidBlockSystem {
                reason: format!("region '{}' is empty", region.name),
            });
        }
        if let Some(&bad) = region.members.iter().find(|&&m| m >= l_count) {
            return Err(Error::BlockIndexOutOfRange {
                index: bad,
                count: l_count,
            });
        }
    }
    let drift = (0..l_count).map(|l| sys.drift_block(l).clone()).collect();
    let controls = regions
        .iter()
        .map(|region| {
            (0..l_count)
                .map(|l| {
                    if region.members.contains(&l) {
                        sys.control_block(0, l).clone()
                    } else {
                        HermitianOperator::zero(sys.block_dims()[l])
                    }
                })
                .collect()
        })
        .collect();
    BlockSystem::new(drift, controls)
}

/// The five-dot two-level ensemble used for the selective-excitation study:
/// splittings 1.32, 1.35, 1.375, 1.38, 1.397 eV, all dipoles 1.
pub fn five_dot_benchmark() -> BlockSystem {
    let eps = [1.32, 1.35, 1.375, 1.38, 1.397];
    let params: Vec<TwoLevelDotParams> = eps
        .iter()
        .map(|&epsilon| TwoLevelDotParams {
            epsilon,
            dipole: 1.0,
        })
        .collect();
    two_level_ensemble(&params).expect("benchmark parameters are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::AlgebraLabel;
    use crate::multipartite::{individual_check, simultaneous_mixed_check};
    use crate::tol;
    use approx::assert_relative_eq;

    #[test]
    fn two_level_blocks_match_printed_matrices() {
        let sys = two_level_ensemble(&[TwoLevelDotParams {
            epsilon: 1.32,
            dipole: 0.7,
        }])
        .unwrap();
        let h0 = sys.drift_block(0).matrix();
        assert_relative_eq!(h0[(0, 0)].re, -0.66);
        assert_relative_eq!(h0[(1, 1)].re, 0.66);
        assert_relative_eq!(h0[(0, 1)].norm(), 0.0);
        let h1 = sys.control_block(0, 0).matrix();
        assert_relative_eq!(h1[(0, 1)].re, 0.7);
        assert_relative_eq!(h1[(1, 0)].re, 0.7);
    }

    #[test]
    fn lambda_blocks_match_printed_matrices() {
        let sys = lambda_ensemble(&[LambdaDotParams {
            epsilon: 0.9,
            d_plus: 1.0,
            d_minus: -1.0,
        }])
        .unwrap();
        let h0 = sys.drift_block(0).matrix();
        assert_relative_eq!(h0[(0, 0)].re, -0.3);
        assert_relative_eq!(h0[(1, 1)].re, -0.3);
        assert_relative_eq!(h0[(2, 2)].re, 0.6);
        let h1 = sys.control_block(0, 0).matrix();
        assert_relative_eq!(h1[(0, 2)].re, 1.0);
        assert_relative_eq!(h1[(2, 0)].re, 1.0);
        assert_relative_eq!(h1[(1, 2)].norm(), 0.0);
        let h2 = sys.control_block(1, 0).matrix();
        assert_relative_eq!(h2[(1, 2)].re, -1.0);
        assert_relative_eq!(h2[(2, 1)].re, -1.0);
        assert_relative_eq!(h2[(0, 2)].norm(), 0.0);
    }

    #[test]
    fn single_dot_is_individually_controllable() {
        let sys = two_level_ensemble(&[TwoLevelDotParams {
            epsilon: 1.0,
            dipole: 1.0,
        }])
        .unwrap();
        let class = individual_check(&sys, 0).unwrap();
        assert_eq!(class.label, AlgebraLabel::SpecialUnitary);
    }

    #[test]
    fn sign_flipped_pair_is_not_simultaneously_controllable() {
        // (eps, d) and (-eps, -d) fall under the sign-degenerate case: the
        // traceless closure collapses to dimension 3.
        let sys = two_level_ensemble(&[
            TwoLevelDotParams {
                epsilon: 1.1,
                dipole: 0.8,
            },
            TwoLevelDotParams {
                epsilon: -1.1,
                dipole: -0.8,
            },
        ])
        .unwrap();
        let verdict = simultaneous_mixed_check(&sys).unwrap();
        assert_eq!(verdict.computed_dim, 3);
        assert!(!verdict.mixed_state_simultaneous);
    }

    #[test]
    fn five_dot_benchmark_is_simultaneously_controllable() {
        let sys = five_dot_benchmark();
        let verdict = simultaneous_mixed_check(&sys).unwrap();
        assert_eq!(verdict.computed_dim, 15);
        assert!(verdict.mixed_state_simultaneous);
        assert!(verdict.pure_state_simultaneous);
    }

    #[test]
    fn mixing_angle_bounds_are_enforced() {
        let sys = lambda_ensemble(&[LambdaDotParams {
            epsilon: 1.0,
            d_plus: 1.0,
            d_minus: -1.0,
        }])
        .unwrap();
        assert!(mixed_polarization_control(&sys, -0.1).is_err());
        assert!(mixed_polarization_control(&sys, 1.7).is_err());
        let combined = mixed_polarization_control(&sys, 0.5).unwrap();
        assert_eq!(combined.num_controls(), 1);
        let hc = combined.control_block(0, 0).matrix();
        assert_relative_eq!(hc[(0, 2)].re, 0.5f64.cos(), epsilon = 1e-14);
        assert_relative_eq!(hc[(1, 2)].re, -(0.5f64.sin()), epsilon = 1e-14);
    }

    #[test]
    fn pure_polarization_blocks_are_not_individually_controllable() {
        let sys = lambda_ensemble(&[LambdaDotParams {
            epsilon: 1.0,
            d_plus: 1.0,
            d_minus: -1.0,
        }])
        .unwrap();
        for alpha in [0.0, std::f64::consts::FRAC_PI_2] {
            let combined = mixed_polarization_control(&sys, alpha).unwrap();
            let class = individual_check(&combined, 0).unwrap();
            assert_eq!(class.label, AlgebraLabel::Other, "alpha = {alpha}");
            assert!(class.dim <= 4, "algebra contained in u(2), got {}", class.dim);
        }
    }

    #[test]
    fn opposite_dipoles_give_so3_plus_u1_obstruction() {
        let sys = lambda_ensemble(&[LambdaDotParams {
            epsilon: 1.0,
            d_plus: 1.0,
            d_minus: -1.0,
        }])
        .unwrap();
        let combined = mixed_polarization_control(&sys, 0.4).unwrap();
        let class = individual_check(&combined, 0).unwrap();
        assert_eq!(class.dim, 4);
        assert_eq!(class.label, AlgebraLabel::Other);
    }

    #[test]
    fn single_mixed_pulse_always_leaves_a_dark_state() {
        // The combined coupler annihilates the ground combination
        // (-d_minus sin(a), d_plus cos(a)), which the degenerate drift also
        // fixes, so the per-dot algebra stays inside u(2) (+) u(1) for any
        // dipole values: traceless dimension 4, never su(3).
        for (d_minus, alpha) in [(0.6, 0.7), (-0.5, 0.9), (2.0, 0.3)] {
            let sys = lambda_ensemble(&[LambdaDotParams {
                epsilon: 1.0,
                d_plus: 1.0,
                d_minus,
            }])
            .unwrap();
            let combined = mixed_polarization_control(&sys, alpha).unwrap();
            let class = individual_check(&combined, 0).unwrap();
            assert_eq!(class.dim, 4, "d_minus={d_minus} alpha={alpha}");
            assert_eq!(class.label, AlgebraLabel::Other);
        }
    }

    #[test]
    fn region_control_zeroes_blocks_outside_region() {
        let sys = five_dot_benchmark();
        let masked = region_controls(
            &sys,
            &[RegionMask {
                name: "solo".into(),
                members: vec![2],
            }],
        )
        .unwrap();
        assert_eq!(masked.num_controls(), 1);
        for l in 0..5 {
            let block = masked.control_block(0, l).matrix();
            if l == 2 {
                assert!((block - sys.control_block(0, l).matrix()).norm() < 1e-15);
            } else {
                assert_eq!(block.norm(), 0.0);
            }
        }
    }

    #[test]
    fn region_control_validates_indices() {
        let sys = five_dot_benchmark();
        let bad = region_controls(
            &sys,
            &[RegionMask {
                name: "oops".into(),
                members: vec![7],
            }],
        );
        assert!(bad.is_err());
        let empty = region_controls(
            &sys,
            &[RegionMask {
                name: "empty".into(),
                members: vec![],
            }],
        );
        assert!(empty.is_err());
    }

    #[test]
    fn builders_reject_empty_parameter_lists() {
        assert!(two_level_ensemble(&[]).is_err());
        assert!(lambda_ensemble(&[]).is_err());
    }

    #[test]
    fn single_lambda_dot_with_generic_controls_reaches_su3() {
        let sys = lambda_ensemble(&[LambdaDotParams {
            epsilon: 1.0,
            d_plus: 1.0,
            d_minus: -1.0,
        }])
        .unwrap();
        let basis = crate::lie::closure(
            &sys.block_generators(0).unwrap(),
            tol::INDEPENDENCE_TOL,
        )
        .unwrap();
        assert_eq!(basis.dim(), 8);
    }
}
