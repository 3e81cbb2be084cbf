//! Reference oracles for the solver test suites.
//!
//! These deliberately avoid the production solve path: the QP oracle
//! enumerates every candidate active set and solves plain KKT equality
//! systems, keeping the feasible minimizer. Exhaustive and slow, usable only
//! for small problems, which is exactly what makes it an independent check.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::qp::QpProblem;

/// All one-sided facets of a problem (inequality rows only; the oracle
/// battery generates problems without variable bounds).
fn facet_rows(p: &QpProblem) -> Vec<(usize, bool)> {
    let mut out = Vec::new();
    for i in 0..p.a_in.nrows() {
        if p.in_lb[i].is_finite() {
            out.push((i, true));
        }
        if p.in_ub[i].is_finite() {
            out.push((i, false));
        }
    }
    out
}

fn feasible(p: &QpProblem, x: &DVector<f64>, tol: f64) -> bool {
    for j in 0..p.a_eq.nrows() {
        if (p.a_eq.row(j).transpose().dot(x) - p.b_eq[j]).abs() > tol {
            return false;
        }
    }
    for i in 0..p.a_in.nrows() {
        let v = p.a_in.row(i).transpose().dot(x);
        if v < p.in_lb[i] - tol || v > p.in_ub[i] + tol {
            return false;
        }
    }
    for k in 0..p.n() {
        if x[k] < p.lb[k] - tol || x[k] > p.ub[k] + tol {
            return false;
        }
    }
    true
}

fn objective(p: &QpProblem, x: &DVector<f64>) -> f64 {
    0.5 * x.dot(&(&p.q * x)) + p.c.dot(x)
}

/// Brute-force solution of a strictly convex QP by active-set enumeration.
/// Returns `None` when no candidate subset yields a feasible KKT system,
/// i.e. the problem is infeasible (or too degenerate for enumeration).
pub fn qp_enumeration_oracle(p: &QpProblem) -> Option<DVector<f64>> {
    let n = p.n();
    let facets = facet_rows(p);
    assert!(
        facets.len() <= 20,
        "enumeration oracle limited to small problems"
    );
    let m_eq = p.a_eq.nrows();
    let mut best: Option<(f64, DVector<f64>)> = None;

    for mask in 0u32..(1 << facets.len()) {
        let active: Vec<usize> = (0..facets.len())
            .filter(|j| mask & (1 << j) != 0)
            .map(|j| facets[j].0)
            .collect();
        // Two facets of the same row cannot both be active.
        let mut dup = false;
        for a in 0..active.len() {
            for b in a + 1..active.len() {
                if active[a] == active[b] {
                    dup = true;
                }
            }
        }
        if dup {
            continue;
        }
        let m_act = m_eq + active.len();
        if m_act > n {
            continue;
        }
        let dim = n + m_act;
        let mut kkt = DMatrix::zeros(dim, dim);
        let mut rhs = DVector::zeros(dim);
        kkt.view_mut((0, 0), (n, n)).copy_from(&p.q);
        for k in 0..n {
            rhs[k] = -p.c[k];
        }
        for j in 0..m_eq {
            for k in 0..n {
                kkt[(n + j, k)] = p.a_eq[(j, k)];
                kkt[(k, n + j)] = -p.a_eq[(j, k)];
            }
            rhs[n + j] = p.b_eq[j];
        }
        for (jj, idx) in (0..facets.len())
            .filter(|j| mask & (1 << j) != 0)
            .enumerate()
        {
            let (i, lower) = facets[idx];
            let r = n + m_eq + jj;
            for k in 0..n {
                kkt[(r, k)] = p.a_in[(i, k)];
                kkt[(k, r)] = -p.a_in[(i, k)];
            }
            rhs[r] = if lower { p.in_lb[i] } else { p.in_ub[i] };
        }
        let Some(sol) = kkt.lu().solve(&rhs) else {
            continue;
        };
        let x = sol.rows(0, n).into_owned();
        if !x.iter().all(|v| v.is_finite()) || !feasible(p, &x, 1e-9) {
            continue;
        }
        let f = objective(p, &x);
        if best.as_ref().map_or(true, |(bf, _)| f < *bf) {
            best = Some((f, x));
        }
    }
    best.map(|(_, x)| x)
}

/// Random strictly convex QP with `n` variables, up to `m_in` one-sided
/// inequality rows and up to two equalities, feasible by construction.
pub fn random_strictly_convex_qp<R: Rng>(rng: &mut R, n: usize, m_in: usize) -> QpProblem {
    let r = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let q = &r * r.transpose() + DMatrix::identity(n, n) * 0.3;
    let c = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
    let mut p = QpProblem::new(q, c);

    let x_hat = DVector::from_fn(n, |_, _| rng.gen_range(-0.5..0.5));
    let m_eq = rng.gen_range(0..=2.min(n.saturating_sub(1)));
    if m_eq > 0 {
        p.a_eq = DMatrix::from_fn(m_eq, n, |_, _| rng.gen_range(-1.0..1.0));
        p.b_eq = &p.a_eq * &x_hat;
    }
    p.a_in = DMatrix::from_fn(m_in, n, |_, _| rng.gen_range(-1.0..1.0));
    p.in_lb = DVector::from_element(m_in, f64::NEG_INFINITY);
    p.in_ub = DVector::from_element(m_in, f64::INFINITY);
    for i in 0..m_in {
        let v = p.a_in.row(i).transpose().dot(&x_hat);
        let slack = rng.gen_range(0.05..0.8);
        if rng.gen_bool(0.5) {
            p.in_lb[i] = v - slack;
        } else {
            p.in_ub[i] = v + slack;
        }
    }
    p
}
