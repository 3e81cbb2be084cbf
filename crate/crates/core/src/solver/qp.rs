//! Dense active-set solver for convex quadratic programs.
//!
//! Problems are stated as
//! ```text
//!   min ½ xᵀQx + cᵀx
//!   s.t. A_eq x = b_eq
//!        lb_in ≤ A_in x ≤ ub_in
//!        lb ≤ x ≤ ub
//! ```
//! with Q symmetric positive semidefinite. Without a warm start the solver
//! runs a phase-1 feasibility QP first; with one it re-solves the warm
//! equality subproblem and drops to phase 1 only if that point is infeasible.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

use super::{SolveReport, SolveStatus, SolverError};

/// Declarative convex QP. Infinite bounds mark absent sides.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QpProblem {
    pub q: DMatrix<f64>,
    pub c: DVector<f64>,
    pub a_eq: DMatrix<f64>,
    pub b_eq: DVector<f64>,
    pub a_in: DMatrix<f64>,
    pub in_lb: DVector<f64>,
    pub in_ub: DVector<f64>,
    pub lb: DVector<f64>,
    pub ub: DVector<f64>,
}

impl QpProblem {
    /// Unconstrained problem; attach constraints by filling the fields.
    pub fn new(q: DMatrix<f64>, c: DVector<f64>) -> Self {
        let n = c.len();
        Self {
            q,
            c,
            a_eq: DMatrix::zeros(0, n),
            b_eq: DVector::zeros(0),
            a_in: DMatrix::zeros(0, n),
            in_lb: DVector::zeros(0),
            in_ub: DVector::zeros(0),
            lb: DVector::from_element(n, f64::NEG_INFINITY),
            ub: DVector::from_element(n, f64::INFINITY),
        }
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let n = self.n();
        let check_dim = |what, expected, got| {
            if expected != got {
                Err(SolverError::Dimension {
                    what,
                    expected,
                    got,
                })
            } else {
                Ok(())
            }
        };
        check_dim("q rows", n, self.q.nrows())?;
        check_dim("q cols", n, self.q.ncols())?;
        check_dim("a_eq cols", n, self.a_eq.ncols())?;
        check_dim("b_eq", self.a_eq.nrows(), self.b_eq.len())?;
        check_dim("a_in cols", n, self.a_in.ncols())?;
        check_dim("in_lb", self.a_in.nrows(), self.in_lb.len())?;
        check_dim("in_ub", self.a_in.nrows(), self.in_ub.len())?;
        check_dim("lb", n, self.lb.len())?;
        check_dim("ub", n, self.ub.len())?;

        let asym = (&self.q - self.q.transpose()).amax();
        if asym > 1e-12 {
            return Err(SolverError::Asymmetric(asym));
        }
        for i in 0..n {
            if self.lb[i] > self.ub[i] {
                return Err(SolverError::BoundOrder(i));
            }
        }
        for i in 0..self.a_in.nrows() {
            if self.in_lb[i] > self.in_ub[i] {
                return Err(SolverError::BoundOrder(i));
            }
        }
        for (name, finite) in [
            ("q", self.q.iter().all(|v| v.is_finite())),
            ("c", self.c.iter().all(|v| v.is_finite())),
            ("a_eq", self.a_eq.iter().all(|v| v.is_finite())),
            ("b_eq", self.b_eq.iter().all(|v| v.is_finite())),
            ("a_in", self.a_in.iter().all(|v| v.is_finite())),
        ] {
            if !finite {
                return Err(SolverError::NonFinite(name));
            }
        }
        Ok(())
    }
}

/// One side of an inequality row or variable bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstraintRef {
    IneqLower(usize),
    IneqUpper(usize),
    BoundLower(usize),
    BoundUpper(usize),
}

#[derive(Debug, Clone)]
pub struct QpOptions {
    pub kkt_tol: f64,
    pub feas_tol: f64,
    pub max_iter: usize,
    pub debug_dump: Option<PathBuf>,
}

impl Default for QpOptions {
    fn default() -> Self {
        Self {
            kkt_tol: 1e-8,
            feas_tol: 1e-8,
            max_iter: 0, // 0 = auto from problem size
            debug_dump: None,
        }
    }
}

/// Solve a convex QP with the primal active-set method.
pub fn solve_qp(
    problem: &QpProblem,
    warm_start: Option<&[ConstraintRef]>,
    options: &QpOptions,
) -> Result<SolveReport, SolverError> {
    problem.validate()?;
    let work = Workspace::new(problem);
    let report = work.solve(warm_start, options);
    if let Some(path) = &options.debug_dump {
        let dump = serde_json::json!({ "problem": problem, "report": report });
        std::fs::write(path, serde_json::to_string_pretty(&dump).unwrap())?;
    }
    Ok(report)
}

/// Internal facet list: every one-sided inequality plus every finite bound,
/// with two-sided rows collapsed to equalities when the gap closes.
struct Workspace<'a> {
    p: &'a QpProblem,
    n: usize,
    /// Extra equality rows from inequality rows with in_lb == in_ub.
    pinned_rows: Vec<usize>,
    facets: Vec<ConstraintRef>,
}

const PIN_GAP: f64 = 1e-11;

impl<'a> Workspace<'a> {
    fn new(p: &'a QpProblem) -> Self {
        let mut pinned_rows = Vec::new();
        let mut facets = Vec::new();
        for i in 0..p.a_in.nrows() {
            if p.in_ub[i] - p.in_lb[i] <= PIN_GAP {
                pinned_rows.push(i);
            } else {
                if p.in_lb[i].is_finite() {
                    facets.push(ConstraintRef::IneqLower(i));
                }
                if p.in_ub[i].is_finite() {
                    facets.push(ConstraintRef::IneqUpper(i));
                }
            }
        }
        for k in 0..p.n() {
            if p.ub[k] - p.lb[k] <= PIN_GAP {
                // treat as a pinned variable via both facets; keeping one
                // facet active pins it, the other can never block
                facets.push(ConstraintRef::BoundLower(k));
            } else {
                if p.lb[k].is_finite() {
                    facets.push(ConstraintRef::BoundLower(k));
                }
                if p.ub[k].is_finite() {
                    facets.push(ConstraintRef::BoundUpper(k));
                }
            }
        }
        Self {
            p,
            n: p.n(),
            pinned_rows,
            facets,
        }
    }

    fn n_eq(&self) -> usize {
        self.p.a_eq.nrows() + self.pinned_rows.len()
    }

    fn eq_row_dot(&self, j: usize, v: &DVector<f64>) -> f64 {
        let m0 = self.p.a_eq.nrows();
        if j < m0 {
            self.p.a_eq.row(j).transpose().dot(v)
        } else {
            let r = self.pinned_rows[j - m0];
            self.p.a_in.row(r).transpose().dot(v)
        }
    }

    fn eq_rhs(&self, j: usize) -> f64 {
        let m0 = self.p.a_eq.nrows();
        if j < m0 {
            self.p.b_eq[j]
        } else {
            let r = self.pinned_rows[j - m0];
            0.5 * (self.p.in_lb[r] + self.p.in_ub[r])
        }
    }

    fn copy_eq_row(&self, j: usize, out: &mut DVector<f64>) {
        out.fill(0.0);
        let m0 = self.p.a_eq.nrows();
        let row = if j < m0 {
            self.p.a_eq.row(j)
        } else {
            self.p.a_in.row(self.pinned_rows[j - m0])
        };
        for k in 0..self.n {
            out[k] = row[k];
        }
    }

    fn facet_dot(&self, f: ConstraintRef, v: &DVector<f64>) -> f64 {
        match f {
            ConstraintRef::IneqLower(i) | ConstraintRef::IneqUpper(i) => {
                self.p.a_in.row(i).transpose().dot(v)
            }
            ConstraintRef::BoundLower(k) | ConstraintRef::BoundUpper(k) => v[k],
        }
    }

    fn copy_facet_row(&self, f: ConstraintRef, out: &mut DVector<f64>) {
        out.fill(0.0);
        match f {
            ConstraintRef::IneqLower(i) | ConstraintRef::IneqUpper(i) => {
                for k in 0..self.n {
                    out[k] = self.p.a_in[(i, k)];
                }
            }
            ConstraintRef::BoundLower(k) | ConstraintRef::BoundUpper(k) => out[k] = 1.0,
        }
    }

    /// Slack of a facet: nonnegative when satisfied.
    fn facet_slack(&self, f: ConstraintRef, x: &DVector<f64>) -> f64 {
        match f {
            ConstraintRef::IneqLower(i) => self.facet_dot(f, x) - self.p.in_lb[i],
            ConstraintRef::IneqUpper(i) => self.p.in_ub[i] - self.facet_dot(f, x),
            ConstraintRef::BoundLower(k) => x[k] - self.p.lb[k],
            ConstraintRef::BoundUpper(k) => self.p.ub[k] - x[k],
        }
    }

    fn facet_is_lower(&self, f: ConstraintRef) -> bool {
        matches!(
            f,
            ConstraintRef::IneqLower(_) | ConstraintRef::BoundLower(_)
        )
    }

    /// +1 sense for lower facets, -1 for upper; slack = sense*(a·x - bound).
    fn facet_rhs(&self, f: ConstraintRef) -> f64 {
        match f {
            ConstraintRef::IneqLower(i) => self.p.in_lb[i],
            ConstraintRef::IneqUpper(i) => self.p.in_ub[i],
            ConstraintRef::BoundLower(k) => self.p.lb[k],
            ConstraintRef::BoundUpper(k) => self.p.ub[k],
        }
    }

    fn max_violation(&self, x: &DVector<f64>) -> f64 {
        let mut v: f64 = 0.0;
        for j in 0..self.n_eq() {
            v = v.max((self.eq_row_dot(j, x) - self.eq_rhs(j)).abs());
        }
        for &f in &self.facets {
            v = v.max(-self.facet_slack(f, x));
        }
        v
    }

    fn solve(&self, warm_start: Option<&[ConstraintRef]>, options: &QpOptions) -> SolveReport {
        let max_iter = if options.max_iter == 0 {
            200 + 30 * (self.n + self.facets.len())
        } else {
            options.max_iter
        };

        // Warm path: re-solve the warm equality subproblem and keep it if
        // the resulting point is feasible.
        if let Some(ws) = warm_start {
            let ws: Vec<ConstraintRef> = ws
                .iter()
                .copied()
                .filter(|f| self.facets.contains(f))
                .collect();
            if let Some((x, _)) = self.eqp_point(&ws) {
                if self.max_violation(&x) <= options.feas_tol {
                    return self.active_set_loop(x, ws, options, max_iter);
                }
            }
        }

        match self.phase1(options) {
            Ok(x) => self.active_set_loop(x, Vec::new(), options, max_iter),
            Err(report) => report,
        }
    }

    /// Solve the equality-constrained problem with working set `ws` treated
    /// as equalities, from scratch (x irrelevant for the minimizer).
    fn eqp_point(&self, ws: &[ConstraintRef]) -> Option<(DVector<f64>, DVector<f64>)> {
        let x0 = DVector::zeros(self.n);
        let (p, mu) = self.eqp_step(&x0, ws, 0.0)?;
        Some((x0 + p, mu))
    }

    /// KKT step from `x` with working set `ws`. Returns (step, multipliers)
    /// where multipliers cover [equalities; ws]. `reg` adds dual
    /// regularization for rank-deficient working sets.
    fn eqp_step(
        &self,
        x: &DVector<f64>,
        ws: &[ConstraintRef],
        reg: f64,
    ) -> Option<(DVector<f64>, DVector<f64>)> {
        let n = self.n;
        let m = self.n_eq() + ws.len();
        let dim = n + m;
        let mut kkt = DMatrix::zeros(dim, dim);
        kkt.view_mut((0, 0), (n, n)).copy_from(&self.p.q);
        let mut row = DVector::zeros(n);
        let mut rhs = DVector::zeros(dim);
        let g = &self.p.q * x + &self.p.c;
        for k in 0..n {
            rhs[k] = -g[k];
        }
        for j in 0..self.n_eq() {
            self.copy_eq_row(j, &mut row);
            for k in 0..n {
                kkt[(n + j, k)] = row[k];
                kkt[(k, n + j)] = row[k];
            }
            rhs[n + j] = self.eq_rhs(j) - self.eq_row_dot(j, x);
        }
        for (jj, &f) in ws.iter().enumerate() {
            let j = self.n_eq() + jj;
            self.copy_facet_row(f, &mut row);
            for k in 0..n {
                kkt[(n + j, k)] = row[k];
                kkt[(k, n + j)] = row[k];
            }
            rhs[n + j] = self.facet_rhs(f) - self.facet_dot(f, x);
        }
        if reg > 0.0 {
            for j in 0..m {
                kkt[(n + j, n + j)] = -reg;
            }
        }
        let lu = kkt.lu();
        let sol = lu.solve(&rhs)?;
        let p = sol.rows(0, n).into_owned();
        if !p.iter().all(|v| v.is_finite()) {
            return None;
        }
        let mu = -sol.rows(n, m).into_owned();
        Some((p, mu))
    }

    fn eqp_step_robust(
        &self,
        x: &DVector<f64>,
        ws: &[ConstraintRef],
    ) -> Option<(DVector<f64>, DVector<f64>)> {
        self.eqp_step(x, ws, 0.0)
            .or_else(|| self.eqp_step(x, ws, 1e-11))
    }

    fn active_set_loop(
        &self,
        mut x: DVector<f64>,
        mut ws: Vec<ConstraintRef>,
        _options: &QpOptions,
        max_iter: usize,
    ) -> SolveReport {
        let scale = 1.0 + self.p.c.amax().max(self.p.q.amax());
        let step_tol = 1e-12;
        let mul_tol = 1e-10 * scale;
        let mut mu = DVector::zeros(self.n_eq() + ws.len());

        for iter in 0..max_iter {
            let (p, new_mu) = match self.eqp_step_robust(&x, &ws) {
                Some(v) => v,
                None => return self.report(SolveStatus::NumericalFailure, x, &ws, &mu, iter),
            };
            mu = new_mu;

            if p.amax() <= step_tol * (1.0 + x.amax()) {
                // At the subspace minimizer: check facet multiplier signs.
                let mut worst: Option<(usize, f64)> = None;
                for (jj, &f) in ws.iter().enumerate() {
                    let m = mu[self.n_eq() + jj];
                    let viol = if self.facet_is_lower(f) { -m } else { m };
                    if viol > mul_tol && worst.map_or(true, |(_, w)| viol > w) {
                        worst = Some((jj, viol));
                    }
                }
                match worst {
                    None => return self.report(SolveStatus::Optimal, x, &ws, &mu, iter),
                    Some((jj, _)) => {
                        ws.remove(jj);
                    }
                }
            } else {
                // Ratio test over facets not in the working set.
                let mut alpha = 1.0_f64;
                let mut blocker: Option<ConstraintRef> = None;
                for &f in &self.facets {
                    if ws.contains(&f) {
                        continue;
                    }
                    let a_dot_p = self.facet_dot(f, &p);
                    let decrease = if self.facet_is_lower(f) {
                        -a_dot_p
                    } else {
                        a_dot_p
                    };
                    if decrease > 1e-13 * (1.0 + a_dot_p.abs()) {
                        let slack = self.facet_slack(f, &x).max(0.0);
                        let cut = slack / decrease;
                        if cut < alpha - 1e-15 {
                            alpha = cut;
                            blocker = Some(f);
                        }
                    }
                }
                x += &p * alpha;
                if let Some(f) = blocker {
                    ws.push(f);
                }
            }
        }
        self.report(SolveStatus::MaxIterations, x, &ws, &mu, max_iter)
    }

    /// Phase 1: find any feasible point, or report infeasibility.
    fn phase1(&self, options: &QpOptions) -> Result<DVector<f64>, SolveReport> {
        // Seed from mid-bounds, then project onto the equality rows.
        let mut x = DVector::zeros(self.n);
        for k in 0..self.n {
            let (l, u) = (self.p.lb[k], self.p.ub[k]);
            x[k] = match (l.is_finite(), u.is_finite()) {
                (true, true) => 0.5 * (l + u),
                (true, false) => l,
                (false, true) => u,
                _ => 0.0,
            };
        }
        let m_eq = self.n_eq();
        if m_eq > 0 {
            let mut a = DMatrix::zeros(m_eq, self.n);
            let mut r = DVector::zeros(m_eq);
            let mut row = DVector::zeros(self.n);
            for j in 0..m_eq {
                self.copy_eq_row(j, &mut row);
                a.row_mut(j).copy_from(&row.transpose());
                r[j] = self.eq_rhs(j) - self.eq_row_dot(j, &x);
            }
            let aat = &a * a.transpose();
            match aat.clone().lu().solve(&r) {
                Some(y) => x += a.transpose() * y,
                None => {
                    // Rank-deficient equalities: fall back to a regularized solve.
                    let regd = aat + DMatrix::identity(m_eq, m_eq) * 1e-12;
                    match regd.lu().solve(&r) {
                        Some(y) => x += a.transpose() * y,
                        None => {
                            return Err(self.report(
                                SolveStatus::NumericalFailure,
                                x,
                                &[],
                                &DVector::zeros(0),
                                0,
                            ))
                        }
                    }
                }
            }
        }

        let viol = self.max_violation(&x);
        if viol <= options.feas_tol {
            return Ok(x);
        }

        // Slack problem over (x, t): min ½t² + ½ε‖x-x₀‖² with every facet
        // violated at x relaxed by t. The start (x, viol+1) is feasible.
        let relaxed: Vec<ConstraintRef> = self
            .facets
            .iter()
            .copied()
            .filter(|&f| self.facet_slack(f, &x) < 0.0)
            .collect();
        let n1 = self.n + 1;
        let eps = 1e-12;
        let mut q1 = DMatrix::zeros(n1, n1);
        for k in 0..self.n {
            q1[(k, k)] = eps;
        }
        q1[(self.n, self.n)] = 1.0;
        let mut c1 = DVector::zeros(n1);
        for k in 0..self.n {
            c1[k] = -eps * x[k];
        }

        let mut a_eq1 = DMatrix::zeros(m_eq, n1);
        let mut b_eq1 = DVector::zeros(m_eq);
        let mut row = DVector::zeros(self.n);
        for j in 0..m_eq {
            self.copy_eq_row(j, &mut row);
            for k in 0..self.n {
                a_eq1[(j, k)] = row[k];
            }
            b_eq1[j] = self.eq_rhs(j);
        }

        let m_in = self.facets.len();
        let mut a_in1 = DMatrix::zeros(m_in, n1);
        let mut lb1 = DVector::from_element(m_in, f64::NEG_INFINITY);
        let mut ub1 = DVector::from_element(m_in, f64::INFINITY);
        for (j, &f) in self.facets.iter().enumerate() {
            self.copy_facet_row(f, &mut row);
            for k in 0..self.n {
                a_in1[(j, k)] = row[k];
            }
            let relax = relaxed.contains(&f);
            if self.facet_is_lower(f) {
                if relax {
                    a_in1[(j, self.n)] = 1.0;
                }
                lb1[j] = self.facet_rhs(f);
            } else {
                if relax {
                    a_in1[(j, self.n)] = -1.0;
                }
                ub1[j] = self.facet_rhs(f);
            }
        }

        let mut sub = QpProblem::new(q1, c1);
        sub.a_eq = a_eq1;
        sub.b_eq = b_eq1;
        sub.a_in = a_in1;
        sub.in_lb = lb1;
        sub.in_ub = ub1;
        sub.lb = DVector::from_element(n1, f64::NEG_INFINITY);
        sub.ub = DVector::from_element(n1, f64::INFINITY);
        sub.lb[self.n] = 0.0;

        let sub_ws = Workspace::new(&sub);
        let mut x1 = DVector::zeros(n1);
        x1.rows_mut(0, self.n).copy_from(&x);
        x1[self.n] = viol * (1.0 + 1e-9) + 1e-9;
        debug_assert!(sub_ws.max_violation(&x1) <= 1e-12 * (1.0 + viol));
        let sub_opts = QpOptions {
            debug_dump: None,
            ..options.clone()
        };
        let max_iter = 200 + 30 * (n1 + sub_ws.facets.len());
        let rep = sub_ws.active_set_loop(x1, Vec::new(), &sub_opts, max_iter);
        let xf = rep.solution.rows(0, self.n).into_owned();
        if rep.status == SolveStatus::Optimal {
            if self.max_violation(&xf) <= options.feas_tol {
                Ok(xf)
            } else {
                Err(self.report(
                    SolveStatus::Infeasible,
                    xf,
                    &[],
                    &DVector::zeros(0),
                    rep.iterations,
                ))
            }
        } else {
            Err(self.report(rep.status, xf, &[], &DVector::zeros(0), rep.iterations))
        }
    }

    fn report(
        &self,
        status: SolveStatus,
        x: DVector<f64>,
        ws: &[ConstraintRef],
        mu: &DVector<f64>,
        iterations: usize,
    ) -> SolveReport {
        let p = self.p;
        let m_eq0 = p.a_eq.nrows();
        let m_in = p.a_in.nrows();
        let mut multipliers = DVector::zeros(m_eq0 + m_in + self.n);
        if mu.len() == self.n_eq() + ws.len() {
            for j in 0..m_eq0 {
                multipliers[j] = mu[j];
            }
            for (jj, &r) in self.pinned_rows.iter().enumerate() {
                multipliers[m_eq0 + r] = mu[m_eq0 + jj];
            }
            for (jj, &f) in ws.iter().enumerate() {
                let m = mu[self.n_eq() + jj];
                match f {
                    ConstraintRef::IneqLower(i) | ConstraintRef::IneqUpper(i) => {
                        multipliers[m_eq0 + i] = m;
                    }
                    ConstraintRef::BoundLower(k) | ConstraintRef::BoundUpper(k) => {
                        multipliers[m_eq0 + m_in + k] = m;
                    }
                }
            }
        }

        // Stationarity residual: Qx + c - A_eqᵀν - A_inᵀλ - μ_bounds.
        let mut stat = &p.q * &x + &p.c;
        if m_eq0 > 0 {
            stat -= p.a_eq.transpose() * multipliers.rows(0, m_eq0);
        }
        if m_in > 0 {
            stat -= p.a_in.transpose() * multipliers.rows(m_eq0, m_in);
        }
        for k in 0..self.n {
            stat[k] -= multipliers[m_eq0 + m_in + k];
        }
        let kkt_residual = match status {
            SolveStatus::Optimal => stat.amax().max(self.max_violation(&x)),
            _ => self.max_violation(&x),
        };
        let status = if status == SolveStatus::Optimal && kkt_residual > 1e-6 {
            SolveStatus::NumericalFailure
        } else {
            status
        };
        SolveReport {
            status,
            solution: x,
            multipliers,
            iterations,
            kkt_residual,
            active_set: ws.to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn dm(rows: usize, cols: usize, data: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(rows, cols, data)
    }

    #[test]
    fn active_bound_with_multiplier() {
        // min x² s.t. x ≥ 1 → x = 1, bound multiplier 2
        let mut p = QpProblem::new(dm(1, 1, &[2.0]), DVector::zeros(1));
        p.lb[0] = 1.0;
        let rep = solve_qp(&p, None, &QpOptions::default()).unwrap();
        assert_eq!(rep.status, SolveStatus::Optimal);
        assert_abs_diff_eq!(rep.solution[0], 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(rep.multipliers[0], 2.0, epsilon = 1e-10);
        assert!(rep.kkt_residual <= 1e-8);
    }

    #[test]
    fn symmetric_equality() {
        // min ½(x²+y²) s.t. x + y = 2 → (1, 1)
        let mut p = QpProblem::new(DMatrix::identity(2, 2), DVector::zeros(2));
        p.a_eq = dm(1, 2, &[1.0, 1.0]);
        p.b_eq = DVector::from_element(1, 2.0);
        let rep = solve_qp(&p, None, &QpOptions::default()).unwrap();
        assert_eq!(rep.status, SolveStatus::Optimal);
        assert_abs_diff_eq!(rep.solution[0], 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(rep.solution[1], 1.0, epsilon = 1e-10);
    }

    #[test]
    fn inequality_row_activates() {
        // min ½‖x‖² - x₀ s.t. x₀ + x₁ ≤ 0.5, x₀ ≤ 0.4
        let mut p = QpProblem::new(DMatrix::identity(2, 2), DVector::from_vec(vec![-1.0, 0.0]));
        p.a_in = dm(1, 2, &[1.0, 1.0]);
        p.in_lb = DVector::from_element(1, f64::NEG_INFINITY);
        p.in_ub = DVector::from_element(1, 0.5);
        p.ub[0] = 0.4;
        let rep = solve_qp(&p, None, &QpOptions::default()).unwrap();
        assert_eq!(rep.status, SolveStatus::Optimal);
        // unconstrained optimum (1,0) violates the bound; only x₀ ≤ 0.4 is active
        assert_abs_diff_eq!(rep.solution[0], 0.4, epsilon = 1e-9);
        assert_abs_diff_eq!(rep.solution[1], 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(rep.multipliers[1], -0.6, epsilon = 1e-9);
    }

    #[test]
    fn infeasible_detected() {
        let mut p = QpProblem::new(DMatrix::identity(1, 1), DVector::zeros(1));
        p.lb[0] = 1.0;
        p.ub[0] = 2.0;
        p.a_in = dm(1, 1, &[1.0]);
        p.in_lb = DVector::from_element(1, f64::NEG_INFINITY);
        p.in_ub = DVector::from_element(1, 0.0);
        let rep = solve_qp(&p, None, &QpOptions::default()).unwrap();
        assert_eq!(rep.status, SolveStatus::Infeasible);
    }

    #[test]
    fn pinned_two_sided_row_is_equality() {
        // min ½‖x‖² s.t. x₀ + x₁ ∈ [1, 1]
        let mut p = QpProblem::new(DMatrix::identity(2, 2), DVector::zeros(2));
        p.a_in = dm(1, 2, &[1.0, 1.0]);
        p.in_lb = DVector::from_element(1, 1.0);
        p.in_ub = DVector::from_element(1, 1.0);
        let rep = solve_qp(&p, None, &QpOptions::default()).unwrap();
        assert_eq!(rep.status, SolveStatus::Optimal);
        assert_abs_diff_eq!(rep.solution[0], 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(rep.solution[1], 0.5, epsilon = 1e-10);
    }

    #[test]
    fn warm_start_reaches_same_solution() {
        let mut p = QpProblem::new(DMatrix::identity(2, 2), DVector::from_vec(vec![-3.0, 0.0]));
        p.ub[0] = 1.0;
        let cold = solve_qp(&p, None, &QpOptions::default()).unwrap();
        let warm = solve_qp(&p, Some(&cold.active_set), &QpOptions::default()).unwrap();
        assert_eq!(warm.status, SolveStatus::Optimal);
        assert_abs_diff_eq!(
            (cold.solution - warm.solution).amax(),
            0.0,
            epsilon = 1e-12
        );
        assert!(warm.iterations <= cold.iterations);
    }

    #[test]
    fn deterministic_reports() {
        let mut p = QpProblem::new(
            dm(3, 3, &[4.0, 1.0, 0.0, 1.0, 3.0, 0.2, 0.0, 0.2, 2.0]),
            DVector::from_vec(vec![-1.0, 2.0, 0.5]),
        );
        p.a_in = dm(2, 3, &[1.0, 1.0, 0.0, 0.0, 1.0, -1.0]);
        p.in_lb = DVector::from_vec(vec![-0.5, -0.2]);
        p.in_ub = DVector::from_vec(vec![0.5, 0.2]);
        let a = solve_qp(&p, None, &QpOptions::default()).unwrap();
        let b = solve_qp(&p, None, &QpOptions::default()).unwrap();
        assert_eq!(a.status, b.status);
        assert_eq!(a.iterations, b.iterations);
        assert_eq!(a.solution, b.solution);
        assert_eq!(a.multipliers, b.multipliers);
    }
}
