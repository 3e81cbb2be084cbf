//! SQP solver for smooth nonlinear programs
//! ```text
//!   min f(z)   s.t.  c_lb ≤ c(z) ≤ c_ub,   lb ≤ z ≤ ub
//! ```
//! built on the in-house active-set QP: damped BFGS Hessian approximation,
//! an ℓ1 merit line search with a second-order correction, and an elastic
//! subproblem fallback when a linearization is infeasible. Derivatives come
//! from central finite differences (step 1e-6) unless the problem supplies
//! analytic ones.

use nalgebra::{DMatrix, DVector};
use std::path::PathBuf;

use super::qp::{solve_qp, ConstraintRef, QpOptions, QpProblem};
use super::{SolveReport, SolveStatus, SolverError};

/// How constraint Jacobians and cost gradients are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JacobianMode {
    /// Use [`NlpFunctions::constraint_jacobian`]/[`NlpFunctions::cost_gradient`]
    /// when provided, falling back to finite differences otherwise.
    Analytic,
    #[default]
    FiniteDifference,
}

/// Callbacks evaluating the problem. Any in-bounds evaluation must return
/// finite values; non-finite results surface as a numerical failure.
pub trait NlpFunctions: Sync {
    fn cost(&self, z: &DVector<f64>) -> f64;
    fn constraints(&self, z: &DVector<f64>) -> DVector<f64>;
    fn cost_gradient(&self, _z: &DVector<f64>) -> Option<DVector<f64>> {
        None
    }
    fn constraint_jacobian(&self, _z: &DVector<f64>) -> Option<DMatrix<f64>> {
        None
    }
}

/// Nonlinear program over `n` variables with `m` two-sided constraints.
pub struct NlpProblem<'a> {
    pub functions: &'a dyn NlpFunctions,
    pub lb: DVector<f64>,
    pub ub: DVector<f64>,
    pub c_lb: DVector<f64>,
    pub c_ub: DVector<f64>,
    pub jacobian_mode: JacobianMode,
}

impl<'a> NlpProblem<'a> {
    pub fn n(&self) -> usize {
        self.lb.len()
    }
    pub fn m(&self) -> usize {
        self.c_lb.len()
    }
}

#[derive(Debug, Clone)]
pub struct NlpOptions {
    pub tol_constraint: f64,
    pub tol_stationarity: f64,
    pub max_iter: usize,
    pub fd_step: f64,
    /// Seed for the BFGS approximation; identity when absent.
    pub initial_hessian: Option<DMatrix<f64>>,
    pub debug_dump: Option<PathBuf>,
}

impl Default for NlpOptions {
    fn default() -> Self {
        Self {
            tol_constraint: 1e-6,
            tol_stationarity: 1e-5,
            max_iter: 200,
            fd_step: 1e-6,
            initial_hessian: None,
            debug_dump: None,
        }
    }
}

/// Adapter turning closures into [`NlpFunctions`], mostly for tests and
/// small one-off problems.
pub struct FnNlp<C, G> {
    pub cost: C,
    pub constraints: G,
    pub cost_gradient: Option<Box<dyn Fn(&DVector<f64>) -> DVector<f64> + Sync>>,
    pub constraint_jacobian: Option<Box<dyn Fn(&DVector<f64>) -> DMatrix<f64> + Sync>>,
}

impl<C, G> NlpFunctions for FnNlp<C, G>
where
    C: Fn(&DVector<f64>) -> f64 + Sync,
    G: Fn(&DVector<f64>) -> DVector<f64> + Sync,
{
    fn cost(&self, z: &DVector<f64>) -> f64 {
        (self.cost)(z)
    }
    fn constraints(&self, z: &DVector<f64>) -> DVector<f64> {
        (self.constraints)(z)
    }
    fn cost_gradient(&self, z: &DVector<f64>) -> Option<DVector<f64>> {
        self.cost_gradient.as_ref().map(|g| g(z))
    }
    fn constraint_jacobian(&self, z: &DVector<f64>) -> Option<DMatrix<f64>> {
        self.constraint_jacobian.as_ref().map(|j| j(z))
    }
}

/// View a [`QpProblem`] as an NLP (analytic derivatives included).
pub struct QpAsNlp<'a>(pub &'a QpProblem);

impl QpAsNlp<'_> {
    pub fn problem(&self) -> NlpProblem<'_> {
        let p = self.0;
        let m_eq = p.a_eq.nrows();
        let m_in = p.a_in.nrows();
        let mut c_lb = DVector::zeros(m_eq + m_in);
        let mut c_ub = DVector::zeros(m_eq + m_in);
        for j in 0..m_eq {
            c_lb[j] = p.b_eq[j];
            c_ub[j] = p.b_eq[j];
        }
        for j in 0..m_in {
            c_lb[m_eq + j] = p.in_lb[j];
            c_ub[m_eq + j] = p.in_ub[j];
        }
        NlpProblem {
            functions: self,
            lb: p.lb.clone(),
            ub: p.ub.clone(),
            c_lb,
            c_ub,
            jacobian_mode: JacobianMode::Analytic,
        }
    }
}

impl NlpFunctions for QpAsNlp<'_> {
    fn cost(&self, z: &DVector<f64>) -> f64 {
        0.5 * z.dot(&(&self.0.q * z)) + self.0.c.dot(z)
    }
    fn constraints(&self, z: &DVector<f64>) -> DVector<f64> {
        let m_eq = self.0.a_eq.nrows();
        let m_in = self.0.a_in.nrows();
        let mut c = DVector::zeros(m_eq + m_in);
        if m_eq > 0 {
            c.rows_mut(0, m_eq).copy_from(&(&self.0.a_eq * z));
        }
        if m_in > 0 {
            c.rows_mut(m_eq, m_in).copy_from(&(&self.0.a_in * z));
        }
        c
    }
    fn cost_gradient(&self, z: &DVector<f64>) -> Option<DVector<f64>> {
        Some(&self.0.q * z + &self.0.c)
    }
    fn constraint_jacobian(&self, _z: &DVector<f64>) -> Option<DMatrix<f64>> {
        let m_eq = self.0.a_eq.nrows();
        let m_in = self.0.a_in.nrows();
        let n = self.0.n();
        let mut j = DMatrix::zeros(m_eq + m_in, n);
        j.view_mut((0, 0), (m_eq, n)).copy_from(&self.0.a_eq);
        j.view_mut((m_eq, 0), (m_in, n)).copy_from(&self.0.a_in);
        Some(j)
    }
}

struct Eval {
    f: f64,
    c: DVector<f64>,
    g: DVector<f64>,
    j: DMatrix<f64>,
}

/// Solve an NLP with SQP. The initial guess is clamped into bounds.
pub fn solve_nlp(
    problem: &NlpProblem,
    initial_guess: &DVector<f64>,
    options: &NlpOptions,
) -> Result<SolveReport, SolverError> {
    let n = problem.n();
    let m = problem.m();
    if initial_guess.len() != n {
        return Err(SolverError::Dimension {
            what: "initial_guess",
            expected: n,
            got: initial_guess.len(),
        });
    }
    for k in 0..n {
        if problem.lb[k] > problem.ub[k] {
            return Err(SolverError::BoundOrder(k));
        }
    }

    let mut x = initial_guess.clone();
    for k in 0..n {
        x[k] = x[k].clamp(problem.lb[k], problem.ub[k]);
    }

    let mut ev = match evaluate(problem, &x, options) {
        Some(e) => e,
        None => return Ok(failure_report(SolveStatus::NumericalFailure, x, m, n, 0)),
    };

    let mut b = options
        .initial_hessian
        .clone()
        .unwrap_or_else(|| DMatrix::identity(n, n));
    let mut penalty: f64 = 10.0;
    let mut lambda = DVector::zeros(m);
    let mut mu_bounds = DVector::zeros(n);
    let mut warm: Option<Vec<ConstraintRef>> = None;
    let mut trace: Vec<serde_json::Value> = Vec::new();

    let qp_opts = QpOptions {
        kkt_tol: 1e-9,
        feas_tol: 1e-9,
        ..QpOptions::default()
    };

    let mut status = SolveStatus::MaxIterations;
    let mut iterations = options.max_iter;

    for iter in 0..options.max_iter {
        // QP subproblem in the step d.
        let sub = build_subproblem(problem, &x, &ev, &b);
        let mut rep = solve_qp(&sub, warm.as_deref(), &qp_opts)?;
        let mut elastic = false;
        if rep.status != SolveStatus::Optimal {
            rep = solve_elastic(problem, &x, &ev, &b, &qp_opts)?;
            elastic = true;
            if rep.status != SolveStatus::Optimal {
                status = SolveStatus::NumericalFailure;
                iterations = iter;
                break;
            }
        }
        let d = rep.solution.rows(0, n).into_owned();
        if !elastic {
            warm = Some(rep.active_set.clone());
        }
        for j in 0..m {
            lambda[j] = rep.multipliers[j];
        }
        if !elastic {
            for k in 0..n {
                mu_bounds[k] = rep.multipliers[m + k];
            }
        } else {
            mu_bounds.fill(0.0);
        }

        let viol = violation_inf(problem, &ev.c);
        let stat = stationarity(&ev, &lambda, &mu_bounds);
        if options.debug_dump.is_some() {
            trace.push(serde_json::json!({
                "iter": iter, "f": ev.f, "violation": viol,
                "stationarity": stat, "step_norm": d.amax(),
            }));
        }
        if viol <= options.tol_constraint
            && (stat <= options.tol_stationarity || d.amax() <= 1e-12 * (1.0 + x.amax()))
        {
            status = SolveStatus::Optimal;
            iterations = iter;
            break;
        }
        if d.amax() <= 1e-14 * (1.0 + x.amax()) {
            // No progress possible from here.
            status = if viol <= options.tol_constraint {
                SolveStatus::Optimal
            } else {
                SolveStatus::NumericalFailure
            };
            iterations = iter;
            break;
        }

        penalty = penalty.max(1.5 * lambda.amax() + 0.1);
        let merit0 = ev.f + penalty * violation_l1(problem, &ev.c);
        let ddir = ev.g.dot(&d) - penalty * violation_l1(problem, &ev.c);

        // Backtracking ℓ1 merit line search with one second-order correction.
        let mut alpha = 1.0_f64;
        let mut accepted: Option<(DVector<f64>, Eval)> = None;
        for ls in 0..40 {
            let x_try = clamp_to_bounds(&(&x + &d * alpha), problem);
            if let Some(ev_try) = evaluate(problem, &x_try, options) {
                let merit = ev_try.f + penalty * violation_l1(problem, &ev_try.c);
                if merit <= merit0 + 1e-4 * alpha * ddir.min(0.0) + 1e-14 * merit0.abs() {
                    accepted = Some((x_try, ev_try));
                    break;
                }
                // Second-order correction against the Maratos effect: shift
                // the full step by a least-norm restoration of c at x + d.
                if ls == 0 && alpha == 1.0 {
                    if let Some(x_soc) = second_order_correction(problem, &x, &d, &ev_try) {
                        if let Some(ev_soc) = evaluate(problem, &x_soc, options) {
                            let merit_soc =
                                ev_soc.f + penalty * violation_l1(problem, &ev_soc.c);
                            if merit_soc <= merit0 + 1e-4 * ddir.min(0.0) {
                                accepted = Some((x_soc, ev_soc));
                                break;
                            }
                        }
                    }
                }
            }
            alpha *= 0.5;
        }
        let (x_new, ev_new) = match accepted {
            Some(v) => v,
            None => {
                status = SolveStatus::NumericalFailure;
                iterations = iter;
                break;
            }
        };

        // Damped BFGS on the Lagrangian gradient difference.
        let s = &x_new - &x;
        let y_vec = (&ev_new.g - ev_new.j.transpose() * &lambda)
            - (&ev.g - ev.j.transpose() * &lambda);
        update_bfgs(&mut b, &s, &y_vec);

        x = x_new;
        ev = ev_new;
        iterations = iter + 1;
    }

    let viol = violation_inf(problem, &ev.c);
    let stat = stationarity(&ev, &lambda, &mu_bounds);
    let kkt_residual = viol.max(stat);
    if status == SolveStatus::MaxIterations
        && viol <= options.tol_constraint
        && stat <= options.tol_stationarity
    {
        status = SolveStatus::Optimal;
    }

    let mut multipliers = DVector::zeros(m + n);
    multipliers.rows_mut(0, m).copy_from(&lambda);
    multipliers.rows_mut(m, n).copy_from(&mu_bounds);
    let report = SolveReport {
        status,
        solution: x,
        multipliers,
        iterations,
        kkt_residual,
        active_set: warm.unwrap_or_default(),
    };
    if let Some(path) = &options.debug_dump {
        let dump = serde_json::json!({
            "n": n, "m": m, "iterates": trace, "report": &report,
        });
        std::fs::write(path, serde_json::to_string_pretty(&dump).unwrap())?;
    }
    Ok(report)
}

fn failure_report(
    status: SolveStatus,
    x: DVector<f64>,
    m: usize,
    n: usize,
    iterations: usize,
) -> SolveReport {
    SolveReport {
        status,
        solution: x,
        multipliers: DVector::zeros(m + n),
        iterations,
        kkt_residual: f64::INFINITY,
        active_set: Vec::new(),
    }
}

fn clamp_to_bounds(x: &DVector<f64>, p: &NlpProblem) -> DVector<f64> {
    DVector::from_fn(x.len(), |k, _| x[k].clamp(p.lb[k], p.ub[k]))
}

fn evaluate(p: &NlpProblem, x: &DVector<f64>, options: &NlpOptions) -> Option<Eval> {
    let f = p.functions.cost(x);
    let c = p.functions.constraints(x);
    if !f.is_finite() || !c.iter().all(|v| v.is_finite()) || c.len() != p.m() {
        return None;
    }
    let analytic = p.jacobian_mode == JacobianMode::Analytic;
    let g = match analytic.then(|| p.functions.cost_gradient(x)).flatten() {
        Some(g) => g,
        None => fd_gradient(p, x, options.fd_step)?,
    };
    let j = match analytic
        .then(|| p.functions.constraint_jacobian(x))
        .flatten()
    {
        Some(j) => j,
        None => fd_jacobian(p, x, options.fd_step)?,
    };
    if !g.iter().all(|v| v.is_finite()) || !j.iter().all(|v| v.is_finite()) {
        return None;
    }
    Some(Eval { f, c, g, j })
}

/// Central difference staying inside the variable bounds.
fn fd_steps(p: &NlpProblem, x: &DVector<f64>, k: usize, h: f64) -> (f64, f64) {
    let up = (p.ub[k] - x[k]).min(h).max(0.0);
    let down = (x[k] - p.lb[k]).min(h).max(0.0);
    if up + down < 1e-3 * h {
        (0.0, 0.0)
    } else {
        (up, down)
    }
}

fn fd_gradient(p: &NlpProblem, x: &DVector<f64>, h: f64) -> Option<DVector<f64>> {
    let n = x.len();
    let mut g = DVector::zeros(n);
    let mut xp = x.clone();
    for k in 0..n {
        let (up, down) = fd_steps(p, x, k, h);
        if up + down == 0.0 {
            continue;
        }
        xp[k] = x[k] + up;
        let fp = p.functions.cost(&xp);
        xp[k] = x[k] - down;
        let fm = p.functions.cost(&xp);
        xp[k] = x[k];
        if !fp.is_finite() || !fm.is_finite() {
            return None;
        }
        g[k] = (fp - fm) / (up + down);
    }
    Some(g)
}

fn fd_jacobian(p: &NlpProblem, x: &DVector<f64>, h: f64) -> Option<DMatrix<f64>> {
    let n = x.len();
    let m = p.m();
    let mut j = DMatrix::zeros(m, n);
    let mut xp = x.clone();
    for k in 0..n {
        let (up, down) = fd_steps(p, x, k, h);
        if up + down == 0.0 {
            continue;
        }
        xp[k] = x[k] + up;
        let cp = p.functions.constraints(&xp);
        xp[k] = x[k] - down;
        let cm = p.functions.constraints(&xp);
        xp[k] = x[k];
        if cp.len() != m || cm.len() != m {
            return None;
        }
        for r in 0..m {
            j[(r, k)] = (cp[r] - cm[r]) / (up + down);
        }
    }
    Some(j)
}

fn violation_l1(p: &NlpProblem, c: &DVector<f64>) -> f64 {
    let mut v = 0.0;
    for j in 0..p.m() {
        v += (p.c_lb[j] - c[j]).max(0.0) + (c[j] - p.c_ub[j]).max(0.0);
    }
    v
}

fn violation_inf(p: &NlpProblem, c: &DVector<f64>) -> f64 {
    let mut v: f64 = 0.0;
    for j in 0..p.m() {
        v = v.max((p.c_lb[j] - c[j]).max(0.0)).max((c[j] - p.c_ub[j]).max(0.0));
    }
    v
}

fn stationarity(ev: &Eval, lambda: &DVector<f64>, mu_bounds: &DVector<f64>) -> f64 {
    (&ev.g - ev.j.transpose() * lambda - mu_bounds).amax()
}

fn build_subproblem(p: &NlpProblem, x: &DVector<f64>, ev: &Eval, b: &DMatrix<f64>) -> QpProblem {
    let n = p.n();
    let m = p.m();
    let mut sub = QpProblem::new(b.clone(), ev.g.clone());
    sub.a_in = ev.j.clone();
    sub.in_lb = DVector::from_fn(m, |j, _| p.c_lb[j] - ev.c[j]);
    sub.in_ub = DVector::from_fn(m, |j, _| p.c_ub[j] - ev.c[j]);
    sub.lb = DVector::from_fn(n, |k, _| p.lb[k] - x[k]);
    sub.ub = DVector::from_fn(n, |k, _| p.ub[k] - x[k]);
    sub
}

/// Elastic subproblem: relax all general rows by a single slack t ≥ 0 with a
/// steep linear penalty, guaranteeing feasibility of the linearization.
fn solve_elastic(
    p: &NlpProblem,
    x: &DVector<f64>,
    ev: &Eval,
    b: &DMatrix<f64>,
    qp_opts: &QpOptions,
) -> Result<SolveReport, SolverError> {
    let n = p.n();
    let m = p.m();
    let weight = 1e4 * (1.0 + ev.g.amax());
    let mut q = DMatrix::zeros(n + 1, n + 1);
    q.view_mut((0, 0), (n, n)).copy_from(b);
    q[(n, n)] = 1e-6;
    let mut c = DVector::zeros(n + 1);
    c.rows_mut(0, n).copy_from(&ev.g);
    c[n] = weight;

    let mut a = DMatrix::zeros(2 * m, n + 1);
    let mut lo = DVector::from_element(2 * m, f64::NEG_INFINITY);
    let mut hi = DVector::from_element(2 * m, f64::INFINITY);
    for j in 0..m {
        for k in 0..n {
            a[(j, k)] = ev.j[(j, k)];
            a[(m + j, k)] = ev.j[(j, k)];
        }
        // J d + t ≥ c_lb - c   and   J d - t ≤ c_ub - c
        a[(j, n)] = 1.0;
        lo[j] = p.c_lb[j] - ev.c[j];
        a[(m + j, n)] = -1.0;
        hi[m + j] = p.c_ub[j] - ev.c[j];
    }
    let mut sub = QpProblem::new(q, c);
    sub.a_in = a;
    sub.in_lb = lo;
    sub.in_ub = hi;
    sub.lb = DVector::from_fn(n + 1, |k, _| if k < n { p.lb[k] - x[k] } else { 0.0 });
    sub.ub = DVector::from_fn(n + 1, |k, _| {
        if k < n {
            p.ub[k] - x[k]
        } else {
            f64::INFINITY
        }
    });
    let mut rep = solve_qp(&sub, None, qp_opts)?;
    // Re-map multipliers: row j of the original problem got split into two
    // one-sided rows; exactly one side can be active.
    if rep.status == SolveStatus::Optimal {
        let mut mult = DVector::zeros(m + n + 1);
        for j in 0..m {
            mult[j] = rep.multipliers[j] + rep.multipliers[m + j];
        }
        rep.multipliers = mult;
    }
    Ok(rep)
}

/// Least-norm restoration step for the constraint residual at `x + d`.
fn second_order_correction(
    p: &NlpProblem,
    x: &DVector<f64>,
    d: &DVector<f64>,
    ev_trial: &Eval,
) -> Option<DVector<f64>> {
    let m = p.m();
    let mut r = DVector::zeros(m);
    let mut any = false;
    for j in 0..m {
        let c = ev_trial.c[j];
        if c < p.c_lb[j] {
            r[j] = p.c_lb[j] - c;
            any = true;
        } else if c > p.c_ub[j] {
            r[j] = p.c_ub[j] - c;
            any = true;
        }
    }
    if !any {
        return None;
    }
    // d_soc = Jᵀ (J Jᵀ)⁻¹ r  using the Jacobian at x (first-order consistent).
    let jjt = &ev_trial.j * ev_trial.j.transpose();
    let y = jjt.lu().solve(&r)?;
    let d_soc = ev_trial.j.transpose() * y;
    Some(clamp_to_bounds(&(x + d + d_soc), p))
}

fn update_bfgs(b: &mut DMatrix<f64>, s: &DVector<f64>, y: &DVector<f64>) {
    let bs = &*b * s;
    let sbs = s.dot(&bs);
    if sbs <= 1e-14 {
        return;
    }
    let sy = s.dot(y);
    // Powell damping keeps the update positive definite.
    let y_eff = if sy < 0.2 * sbs {
        let theta = 0.8 * sbs / (sbs - sy);
        y * theta + &bs * (1.0 - theta)
    } else {
        y.clone()
    };
    let sy_eff = s.dot(&y_eff);
    if sy_eff <= 1e-14 {
        return;
    }
    *b -= &bs * bs.transpose() / sbs;
    *b += &y_eff * y_eff.transpose() / sy_eff;
    // Symmetrize against rounding drift.
    let bt = b.transpose();
    *b += &bt;
    *b *= 0.5;
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unconstrained<'a>(f: &'a dyn NlpFunctions, n: usize) -> NlpProblem<'a> {
        NlpProblem {
            functions: f,
            lb: DVector::from_element(n, f64::NEG_INFINITY),
            ub: DVector::from_element(n, f64::INFINITY),
            c_lb: DVector::zeros(0),
            c_ub: DVector::zeros(0),
            jacobian_mode: JacobianMode::FiniteDifference,
        }
    }

    #[test]
    fn rosenbrock_converges() {
        let f = FnNlp {
            cost: |z: &DVector<f64>| {
                (1.0 - z[0]).powi(2) + 100.0 * (z[1] - z[0] * z[0]).powi(2)
            },
            constraints: |_: &DVector<f64>| DVector::zeros(0),
            cost_gradient: None,
            constraint_jacobian: None,
        };
        let p = unconstrained(&f, 2);
        let rep = solve_nlp(
            &p,
            &DVector::from_vec(vec![-1.2, 1.0]),
            &NlpOptions::default(),
        )
        .unwrap();
        assert_eq!(rep.status, SolveStatus::Optimal, "{rep:?}");
        assert_abs_diff_eq!(rep.solution[0], 1.0, epsilon = 1e-5);
        assert_abs_diff_eq!(rep.solution[1], 1.0, epsilon = 1e-5);
    }

    #[test]
    fn circle_constrained_linear_cost() {
        // min x + y s.t. x² + y² = 1 → (-√2/2, -√2/2)
        let f = FnNlp {
            cost: |z: &DVector<f64>| z[0] + z[1],
            constraints: |z: &DVector<f64>| {
                DVector::from_element(1, z[0] * z[0] + z[1] * z[1])
            },
            cost_gradient: None,
            constraint_jacobian: None,
        };
        let p = NlpProblem {
            functions: &f,
            lb: DVector::from_element(2, f64::NEG_INFINITY),
            ub: DVector::from_element(2, f64::INFINITY),
            c_lb: DVector::from_element(1, 1.0),
            c_ub: DVector::from_element(1, 1.0),
            jacobian_mode: JacobianMode::FiniteDifference,
        };
        let rep = solve_nlp(
            &p,
            &DVector::from_vec(vec![0.5, -1.0]),
            &NlpOptions::default(),
        )
        .unwrap();
        assert_eq!(rep.status, SolveStatus::Optimal, "{rep:?}");
        let s = -std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(rep.solution[0], s, epsilon = 1e-5);
        assert_abs_diff_eq!(rep.solution[1], s, epsilon = 1e-5);
    }

    #[test]
    fn qp_wrapped_as_nlp_matches_solve_qp() {
        let mut qp = QpProblem::new(
            DMatrix::from_row_slice(2, 2, &[2.0, 0.4, 0.4, 1.5]),
            DVector::from_vec(vec![-1.0, 0.3]),
        );
        qp.a_in = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
        qp.in_lb = DVector::from_element(1, f64::NEG_INFINITY);
        qp.in_ub = DVector::from_element(1, 0.3);
        let direct = solve_qp(&qp, None, &QpOptions::default()).unwrap();

        let wrap = QpAsNlp(&qp);
        let p = wrap.problem();
        let rep = solve_nlp(&p, &DVector::zeros(2), &NlpOptions::default()).unwrap();
        assert_eq!(rep.status, SolveStatus::Optimal);
        assert_abs_diff_eq!(
            (rep.solution - direct.solution).amax(),
            0.0,
            epsilon = 1e-6
        );
    }

    #[test]
    fn analytic_and_fd_agree() {
        let cost = |z: &DVector<f64>| (z[0] - 2.0).powi(2) + (z[1] + 1.0).powi(2) + z[0] * z[1];
        let cons = |z: &DVector<f64>| DVector::from_element(1, z[0] + 2.0 * z[1]);
        let f_fd = FnNlp {
            cost,
            constraints: cons,
            cost_gradient: None,
            constraint_jacobian: None,
        };
        let f_an = FnNlp {
            cost,
            constraints: cons,
            cost_gradient: Some(Box::new(|z: &DVector<f64>| {
                DVector::from_vec(vec![2.0 * (z[0] - 2.0) + z[1], 2.0 * (z[1] + 1.0) + z[0]])
            })),
            constraint_jacobian: Some(Box::new(|_: &DVector<f64>| {
                DMatrix::from_row_slice(1, 2, &[1.0, 2.0])
            })),
        };
        let bounds = (
            DVector::from_element(2, -5.0),
            DVector::from_element(2, 5.0),
        );
        let p_fd = NlpProblem {
            functions: &f_fd,
            lb: bounds.0.clone(),
            ub: bounds.1.clone(),
            c_lb: DVector::from_element(1, 1.0),
            c_ub: DVector::from_element(1, f64::INFINITY),
            jacobian_mode: JacobianMode::FiniteDifference,
        };
        let p_an = NlpProblem {
            functions: &f_an,
            lb: bounds.0,
            ub: bounds.1,
            c_lb: DVector::from_element(1, 1.0),
            c_ub: DVector::from_element(1, f64::INFINITY),
            jacobian_mode: JacobianMode::Analytic,
        };
        let guess = DVector::zeros(2);
        let opts = NlpOptions::default();
        let a = solve_nlp(&p_fd, &guess, &opts).unwrap();
        let b = solve_nlp(&p_an, &guess, &opts).unwrap();
        assert_eq!(a.status, SolveStatus::Optimal);
        assert_eq!(b.status, SolveStatus::Optimal);
        let fa = f_fd.cost(&a.solution);
        let fb = f_an.cost(&b.solution);
        assert!((fa - fb).abs() <= 1e-4, "{fa} vs {fb}");
    }

    #[test]
    fn clamps_out_of_bounds_guess() {
        let f = FnNlp {
            cost: |z: &DVector<f64>| z[0] * z[0],
            constraints: |_: &DVector<f64>| DVector::zeros(0),
            cost_gradient: None,
            constraint_jacobian: None,
        };
        let p = NlpProblem {
            functions: &f,
            lb: DVector::from_element(1, 1.0),
            ub: DVector::from_element(1, 3.0),
            c_lb: DVector::zeros(0),
            c_ub: DVector::zeros(0),
            jacobian_mode: JacobianMode::FiniteDifference,
        };
        let rep = solve_nlp(&p, &DVector::from_element(1, -10.0), &NlpOptions::default()).unwrap();
        assert_eq!(rep.status, SolveStatus::Optimal);
        assert_abs_diff_eq!(rep.solution[0], 1.0, epsilon = 1e-7);
    }
}
