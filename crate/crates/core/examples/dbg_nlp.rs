use nalgebra::{DMatrix, DVector};
use stride_core::solver::*;

fn main() {
    let cost = |z: &DVector<f64>| (z[0] - 2.0).powi(2) + (z[1] + 1.0).powi(2) + z[0] * z[1];
    let cons = |z: &DVector<f64>| DVector::from_element(1, z[0] + 2.0 * z[1]);
    let f_fd = FnNlp { cost, constraints: cons, cost_gradient: None, constraint_jacobian: None };
    let p_fd = NlpProblem {
        functions: &f_fd,
        lb: DVector::from_element(2, -5.0),
        ub: DVector::from_element(2, 5.0),
        c_lb: DVector::from_element(1, 1.0),
        c_ub: DVector::from_element(1, f64::INFINITY),
        jacobian_mode: JacobianMode::FiniteDifference,
    };
    let opts = NlpOptions { debug_dump: Some("/tmp/nlp_dbg.json".into()), ..Default::default() };
    let rep = solve_nlp(&p_fd, &DVector::zeros(2), &opts).unwrap();
    println!("{:?} iters={} kkt={:.3e} x={:?}", rep.status, rep.iterations, rep.kkt_residual, rep.solution.as_slice());
}
