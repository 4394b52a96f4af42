use dotctl::models::*;
use dotctl::multipartite::*;
use dotctl::lie;
use dotctl::tol;

fn main() {
    for (dp, dm, alpha) in [(1.0, 0.6, 0.7), (1.0, 0.6, 0.4), (1.0, -0.5, 0.9), (1.0, 2.0, 0.3), (1.0, -1.0, 0.4)] {
        let sys = lambda_ensemble(&[LambdaDotParams { epsilon: 1.0, d_plus: dp, d_minus: dm }]).unwrap();
        let combined = mixed_polarization_control(&sys, alpha).unwrap();
        let basis = lie::closure(&combined.block_generators(0).unwrap(), tol::INDEPENDENCE_TOL).unwrap();
        println!("d+={dp} d-={dm} alpha={alpha}: dim {}", basis.dim());
        for (k, e) in basis.elements().iter().enumerate() {
            let tr: num_complex::Complex64 = e.diagonal().iter().sum();
            println!("  e{k} trace {:.3e}", tr.norm());
        }
    }
}
