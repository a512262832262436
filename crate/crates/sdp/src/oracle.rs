//! Independent verification path for problems whose objective is a single
//! scalar variable `t`: bisection on `t`, where each feasibility query is
//! answered by a primal log-barrier method on
//!
//! ```text
//! maximize s  s.t.  F(x) − s·I ⪰ 0,  s ≤ 1,  Ex = b,  x_t = t.
//! ```
//!
//! The query is feasible when the optimal `s` is non-negative. Unlike the
//! interior-point solver this never touches dual variables and always has a
//! strictly feasible starting point.

use nalgebra::{DMatrix, DVector};

use crate::dense::{spd_inverse, symmetrize};
use crate::error::{Result, SdpError};
use crate::problem::SdpProblem;

pub const BRACKET_LOWER: f64 = 0.0;
pub const BRACKET_UPPER: f64 = 1e3;

/// Margin below which `max λ_min(F(x))` still counts as feasible.
const FEASIBILITY_SLACK: f64 = 1e-11;

/// Returns the largest `t` (to within `tol`) for which the problem with
/// `t` fixed is feasible, searching in `[0, 10³]`.
pub fn bisection_oracle(p: &SdpProblem, tol: f64) -> Result<f64> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(SdpError::InvalidTolerance(tol));
    }
    let var = scalar_objective(p)?;
    let query = FeasibilityQuery::new(p, var)?;
    let (mut lo, mut hi) = (BRACKET_LOWER, BRACKET_UPPER);
    if !query.is_feasible(lo)? {
        return Err(SdpError::Infeasible);
    }
    if query.is_feasible(hi)? {
        return Err(SdpError::BracketNotFound { lower: lo, upper: hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if query.is_feasible(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

fn scalar_objective(p: &SdpProblem) -> Result<usize> {
    let nonzero: Vec<usize> = p.objective().iter().enumerate().filter(|(_, &c)| c != 0.0).map(|(i, _)| i).collect();
    match nonzero.as_slice() {
        [k] if p.objective()[*k] > 0.0 => Ok(*k),
        _ => Err(SdpError::InvalidProblem("bisection needs a single positive objective coefficient".into())),
    }
}

struct FeasibilityQuery<'a> {
    problem: &'a SdpProblem,
    /// Equalities `[E; e_var]` acting on `x` (s is unconstrained).
    eq: DMatrix<f64>,
    eq_pinv: DMatrix<f64>,
}

impl<'a> FeasibilityQuery<'a> {
    fn new(problem: &'a SdpProblem, var: usize) -> Result<Self> {
        let m = problem.num_vars();
        let p = problem.num_equalities();
        let mut eq = DMatrix::zeros(p + 1, m);
        eq.rows_mut(0, p).copy_from(problem.eq_matrix());
        eq[(p, var)] = 1.0;
        let eq_pinv = eq.clone().pseudo_inverse(1e-12).map_err(|e| SdpError::Numerical(e.to_string()))?;
        Ok(Self { problem, eq, eq_pinv })
    }

    fn rhs(&self, t: f64) -> DVector<f64> {
        self.problem.eq_rhs().clone().push(t)
    }

    fn is_feasible(&self, t: f64) -> Result<bool> {
        Ok(self.max_min_eigenvalue(t)? >= -FEASIBILITY_SLACK)
    }

    /// Barrier method for `max s`; returns a value accurate to well below
    /// `FEASIBILITY_SLACK`, or exits early once the sign is settled.
    fn max_min_eigenvalue(&self, t: f64) -> Result<f64> {
        let p = self.problem;
        let m = p.num_vars();
        let rhs = self.rhs(t);
        let x0 = &self.eq_pinv * &rhs;
        if (&self.eq * &x0 - &rhs).amax() > 1e-9 * (1.0 + rhs.amax()) {
            // Equalities themselves are inconsistent at this t.
            return Ok(f64::NEG_INFINITY);
        }
        let lmin0 = p.evaluate(&x0).iter().map(crate::dense::min_eigenvalue).fold(f64::INFINITY, f64::min);
        if lmin0 >= 0.0 {
            return Ok(lmin0.min(1.0));
        }
        let mut x = x0;
        let mut s = lmin0 - 1.0;
        let degree = (p.total_size() + 1) as f64;
        let mut tau = 1.0;
        // KKT matrix rows for [x, s] against [eq | 0].
        let neq = self.eq.nrows();
        let dim = m + 1;

        loop {
            for _ in 0..100 {
                let Some(state) = BarrierState::at(p, &x, s, tau) else {
                    return Err(SdpError::Numerical("barrier iterate left the domain".into()));
                };
                if s >= 0.0 {
                    return Ok(s.min(1.0));
                }
                let mut kkt = DMatrix::zeros(dim + neq, dim + neq);
                kkt.view_mut((0, 0), (dim, dim)).copy_from(&state.hessian);
                kkt.view_mut((0, dim), (m, neq)).copy_from(&self.eq.transpose());
                kkt.view_mut((dim, 0), (neq, m)).copy_from(&self.eq);
                let mut r = DVector::zeros(dim + neq);
                r.rows_mut(0, dim).copy_from(&(-&state.gradient));
                let step = kkt
                    .full_piv_lu()
                    .solve(&r)
                    .ok_or_else(|| SdpError::Numerical("singular barrier Newton system".into()))?;
                let dz = step.rows(0, dim).into_owned();
                let decrement = -state.gradient.dot(&dz);
                if decrement <= 1e-14 {
                    break;
                }
                let dx = dz.rows(0, m).into_owned();
                let ds = dz[m];
                let mut h = 1.0;
                let mut accepted = false;
                while h > 1e-16 {
                    let xn = &x + &dx * h;
                    let sn = s + ds * h;
                    if let Some(v) = barrier_value(p, &xn, sn, tau) {
                        if v <= state.value - 0.25 * h * decrement {
                            x = xn;
                            s = sn;
                            accepted = true;
                            break;
                        }
                    }
                    h *= 0.5;
                }
                if !accepted {
                    break;
                }
            }
            if s >= 0.0 {
                return Ok(s.min(1.0));
            }
            // s* ≤ s + degree/τ on the central path.
            let gap = degree / tau;
            if s + gap < -FEASIBILITY_SLACK {
                return Ok(s);
            }
            if gap < 1e-3 * FEASIBILITY_SLACK {
                return Ok(s);
            }
            tau *= 8.0;
        }
    }
}

struct BarrierState {
    value: f64,
    gradient: DVector<f64>,
    hessian: DMatrix<f64>,
}

fn shifted(p: &SdpProblem, x: &DVector<f64>, s: f64) -> Vec<DMatrix<f64>> {
    let mut g = p.evaluate(x);
    for b in &mut g {
        for i in 0..b.nrows() {
            b[(i, i)] -= s;
        }
    }
    g
}

/// `−τ s − log det(F(x) − sI) − log(1 − s)`, or `None` outside the domain.
fn barrier_value(p: &SdpProblem, x: &DVector<f64>, s: f64, tau: f64) -> Option<f64> {
    if s >= 1.0 {
        return None;
    }
    let mut logdet = 0.0;
    for b in shifted(p, x, s) {
        let chol = nalgebra::Cholesky::new(b)?;
        logdet += 2.0 * chol.l_dirty().diagonal().iter().map(|d| d.ln()).sum::<f64>();
    }
    Some(-tau * s - logdet - (1.0 - s).ln())
}

impl BarrierState {
    fn at(p: &SdpProblem, x: &DVector<f64>, s: f64, tau: f64) -> Option<Self> {
        let value = barrier_value(p, x, s, tau)?;
        let m = p.num_vars();
        let ginv: Vec<DMatrix<f64>> = shifted(p, x, s).iter().map(spd_inverse).collect::<Option<_>>()?;
        let ginv2: Vec<DMatrix<f64>> = ginv
            .iter()
            .map(|g| {
                let mut sq = g * g;
                symmetrize(&mut sq);
                sq
            })
            .collect();
        let mut gradient = DVector::zeros(m + 1);
        gradient.rows_mut(0, m).copy_from(&(-p.adjoint(&ginv)));
        let tr_ginv: f64 = ginv.iter().map(|g| g.trace()).sum();
        gradient[m] = -tau + tr_ginv + 1.0 / (1.0 - s);

        let mut hessian = DMatrix::zeros(m + 1, m + 1);
        hessian.view_mut((0, 0), (m, m)).copy_from(&p.schur(&ginv));
        let cross = -p.adjoint(&ginv2);
        hessian.view_mut((0, m), (m, 1)).copy_from(&cross);
        hessian.view_mut((m, 0), (1, m)).copy_from(&cross.transpose());
        let tr_ginv2: f64 = ginv2.iter().map(|g| g.trace()).sum();
        hessian[(m, m)] = tr_ginv2 + 1.0 / ((1.0 - s) * (1.0 - s));
        Some(Self { value, gradient, hessian })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_bound(diag0: &[f64], diag1: &[f64]) -> SdpProblem {
        let mut p = SdpProblem::new(vec![diag0.len()], 1);
        p.set_objective(0, 1.0).unwrap();
        for (i, (&a, &b)) in diag0.iter().zip(diag1).enumerate() {
            p.add_constant(0, i, i, a).unwrap();
            p.add_coefficient(0, 0, i, i, -b).unwrap();
        }
        p
    }

    #[test]
    fn trivial_instances() {
        let t = bisection_oracle(&scalar_bound(&[1.0; 3], &[1.0; 3]), 1e-9).unwrap();
        assert!((t - 1.0).abs() < 1e-8);
        let t = bisection_oracle(&scalar_bound(&[2.0, 3.0], &[1.0, 1.0]), 1e-9).unwrap();
        assert!((t - 2.0).abs() < 1e-8);
    }

    #[test]
    fn negative_definite_constant_is_infeasible() {
        let mut p = SdpProblem::new(vec![2], 1);
        p.set_objective(0, 1.0).unwrap();
        p.add_constant(0, 0, 0, -1.0).unwrap();
        p.add_constant(0, 1, 1, -1.0).unwrap();
        assert_eq!(bisection_oracle(&p, 1e-6), Err(SdpError::Infeasible));
    }

    #[test]
    fn unbounded_objective_has_no_bracket() {
        let p = scalar_bound(&[1.0], &[0.0]);
        assert!(matches!(bisection_oracle(&p, 1e-6), Err(SdpError::BracketNotFound { .. })));
    }

    #[test]
    fn free_variables_are_optimized() {
        // max t s.t. [[1, x],[x, 1]] − t·I ⪰ 0 → optimum at x = 0, t = 1.
        let mut p = SdpProblem::new(vec![2], 2);
        p.set_objective(0, 1.0).unwrap();
        p.add_constant(0, 0, 0, 1.0).unwrap();
        p.add_constant(0, 1, 1, 1.0).unwrap();
        p.add_constant(0, 0, 1, 0.5).unwrap();
        p.add_coefficient(0, 0, 0, 0, -1.0).unwrap();
        p.add_coefficient(0, 0, 1, 1, -1.0).unwrap();
        p.add_coefficient(1, 0, 0, 1, 1.0).unwrap();
        let t = bisection_oracle(&p, 1e-9).unwrap();
        assert!((t - 1.0).abs() < 1e-7, "{t}");
    }

    #[test]
    fn rejects_multi_variable_objective() {
        let mut p = SdpProblem::new(vec![1], 2);
        p.set_objective(0, 1.0).unwrap();
        p.set_objective(1, 1.0).unwrap();
        assert!(matches!(bisection_oracle(&p, 1e-6), Err(SdpError::InvalidProblem(_))));
    }
}
