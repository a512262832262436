//! Infeasible primal-dual path-following interior-point method with
//! Nesterov–Todd scaling.
//!
//! The LMI problem `max cᵀx s.t. F₀ + Σ xᵢFᵢ ⪰ 0, Ex = b` is paired with
//! its dual `min ⟨F₀,Z⟩ + bᵀy s.t. Tr(FᵢZ) = (Eᵀy − c)ᵢ, Z ⪰ 0`.
//! The iterate is `(x, S, Z, y)` with slack `S ≻ 0` standing in for
//! `F(x)`; the duality gap equals `⟨S, Z⟩` on the feasible set.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::dense::{frobenius_dot, max_step, min_eigenvalue, spd_inverse, symmetrize};
use crate::error::{Result, SdpError};
use crate::problem::SdpProblem;

pub const DEFAULT_MAX_ITERATIONS: usize = 200;
pub const DEFAULT_STEP_DAMPING: f64 = 0.98;
/// Iterations of non-decreasing primal residual before declaring infeasibility.
pub const STALL_WINDOW: usize = 25;
/// Step halvings tried before a step that leaves the cone is an error.
const MAX_BACKTRACKS: usize = 30;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iterations: usize,
    pub step_damping: f64,
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-9, max_iterations: DEFAULT_MAX_ITERATIONS, step_damping: DEFAULT_STEP_DAMPING }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    Infeasible,
    MaxIterations,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SdpSolution {
    pub x: DVector<f64>,
    /// Primal objective `cᵀx`.
    pub objective: f64,
    pub dual_objective: f64,
    /// Most negative eigenvalue of `F(x)` over all blocks (≥ 0 when feasible).
    pub feasibility_residual: f64,
    /// `max |Ex − b|`.
    pub equality_residual: f64,
    pub status: SdpStatus,
    pub iterations: usize,
    /// Smallest dual objective seen at a numerically dual-feasible iterate.
    pub upper_bound: Option<f64>,
}

/// Solves `p` with default options and tolerance `tol`.
pub fn solve(p: &SdpProblem, tol: f64) -> Result<SdpSolution> {
    solve_with(p, &SolverOptions::with_tol(tol))
}

struct Iterate {
    x: DVector<f64>,
    y: DVector<f64>,
    s: Vec<DMatrix<f64>>,
    z: Vec<DMatrix<f64>>,
}

struct Direction {
    dx: DVector<f64>,
    dy: DVector<f64>,
    ds: Vec<DMatrix<f64>>,
    dz: Vec<DMatrix<f64>>,
}

fn block_dot(a: &[DMatrix<f64>], b: &[DMatrix<f64>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| frobenius_dot(x, y)).sum()
}

fn block_norm(a: &[DMatrix<f64>]) -> f64 {
    block_dot(a, a).sqrt()
}

fn sandwich(w: &[DMatrix<f64>], m: &[DMatrix<f64>]) -> Vec<DMatrix<f64>> {
    w.iter()
        .zip(m)
        .map(|(wb, mb)| {
            let mut r = wb * mb * wb;
            symmetrize(&mut r);
            r
        })
        .collect()
}

fn numerical(msg: &str) -> SdpError {
    SdpError::Numerical(msg.to_string())
}

/// NT scaling point `W` with `W S W = Z`.
///
/// Built from Cholesky factors `S = L_S L_Sᵀ`, `Z = L_Z L_Zᵀ` and the SVD
/// `L_Zᵀ L_S = U Σ Vᵀ` as `W = L_Z U Σ⁻¹ Uᵀ L_Zᵀ`. The singular values are of
/// order √μ, so this keeps relative accuracy where an eigendecomposition of
/// `S^½ Z S^½` (eigenvalues of order μ) would not.
fn nt_scaling(s: &DMatrix<f64>, z: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let ls = Cholesky::new(s.clone())?.l();
    let lz = Cholesky::new(z.clone())?.l();
    let svd = (lz.transpose() * &ls).svd(true, false);
    let u = svd.u?;
    if svd.singular_values.iter().any(|&v| !(v > 0.0)) {
        return None;
    }
    let mut g = &lz * u;
    for (j, &sv) in svd.singular_values.iter().enumerate() {
        g.column_mut(j).scale_mut(1.0 / sv.sqrt());
    }
    let mut w = &g * g.transpose();
    symmetrize(&mut w);
    Some(w)
}

/// Newton system `[M Eᵀ; E 0] (dx, dy) = (r, rp)` with the Schur matrix `M`.
/// Cholesky with the equalities eliminated through `E M⁻¹ Eᵀ`; full-pivot
/// LU on the whole system when `M` is not numerically positive definite.
enum NewtonSystem<'a> {
    Cholesky { m: Cholesky<f64, nalgebra::Dyn>, reduced: Option<Cholesky<f64, nalgebra::Dyn>>, e: &'a DMatrix<f64> },
    Lu(nalgebra::linalg::FullPivLU<f64, nalgebra::Dyn, nalgebra::Dyn>, usize),
}

impl<'a> NewtonSystem<'a> {
    fn factor(schur: &DMatrix<f64>, e: &'a DMatrix<f64>) -> Result<Self> {
        let (nvar, neq) = (schur.nrows(), e.nrows());
        if let Some(m) = Cholesky::new(schur.clone()) {
            if neq == 0 {
                return Ok(Self::Cholesky { m, reduced: None, e });
            }
            let mut reduced = e * m.solve(&e.transpose());
            symmetrize(&mut reduced);
            if let Some(r) = Cholesky::new(reduced) {
                return Ok(Self::Cholesky { m, reduced: Some(r), e });
            }
        }
        let mut kkt = DMatrix::zeros(nvar + neq, nvar + neq);
        kkt.view_mut((0, 0), (nvar, nvar)).copy_from(schur);
        kkt.view_mut((0, nvar), (nvar, neq)).copy_from(&e.transpose());
        kkt.view_mut((nvar, 0), (neq, nvar)).copy_from(e);
        let lu = kkt.full_piv_lu();
        if !lu.is_invertible() {
            return Err(numerical("singular Newton system"));
        }
        Ok(Self::Lu(lu, nvar))
    }

    fn solve(&self, r: &DVector<f64>, rp: &DVector<f64>) -> Result<(DVector<f64>, DVector<f64>)> {
        match self {
            Self::Cholesky { m, reduced: None, .. } => Ok((m.solve(r), DVector::zeros(0))),
            Self::Cholesky { m, reduced: Some(red), e } => {
                let mr = m.solve(r);
                let dy = red.solve(&(*e * &mr - rp));
                let dx = m.solve(&(r - e.transpose() * &dy));
                Ok((dx, dy))
            }
            Self::Lu(lu, nvar) => {
                let mut rhs = DVector::zeros(r.len() + rp.len());
                rhs.rows_mut(0, *nvar).copy_from(r);
                rhs.rows_mut(*nvar, rp.len()).copy_from(rp);
                let sol = lu.solve(&rhs).ok_or_else(|| numerical("Newton solve failed"))?;
                Ok((sol.rows(0, *nvar).into_owned(), sol.rows(*nvar, rp.len()).into_owned()))
            }
        }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(1e-12..=1e-4).contains(&tol) {
        return Err(SdpError::InvalidTolerance(tol));
    }
    Ok(())
}

pub fn solve_with(p: &SdpProblem, opts: &SolverOptions) -> Result<SdpSolution> {
    check_tol(opts.tol)?;
    let m = p.num_vars();
    let n_total = p.total_size();
    if n_total == 0 {
        return Err(SdpError::InvalidProblem("no LMI blocks".into()));
    }
    let c = p.objective();
    let b = p.eq_rhs();
    let e = p.eq_matrix();
    let f0_norm = block_norm(p.constant());
    let c_norm = c.norm();
    let b_norm = b.norm();

    // Start and residual scales are homogeneous in the LMI data, so scaling
    // every Fᵢ by s > 0 maps each iterate to (x, sS, Z/s, y).
    let f_scale = (0..m)
        .flat_map(|i| p.coefficients(i).iter().map(|e| e.value.abs()))
        .chain(p.constant().iter().map(|f| f.amax()))
        .fold(0.0, f64::max);
    let f_scale = if f_scale > 0.0 { f_scale } else { 1.0 };
    let z_scale = 1.0_f64.max(c.amax()) / f_scale;
    let identity = |scale: f64| -> Vec<DMatrix<f64>> {
        p.block_sizes().iter().map(|&n| DMatrix::identity(n, n) * scale).collect()
    };
    let mut it = Iterate {
        x: DVector::zeros(m),
        y: DVector::zeros(p.num_equalities()),
        s: identity(f_scale),
        z: identity(z_scale),
    };

    let mut upper_bound: Option<f64> = None;
    let mut residual_history: Vec<f64> = Vec::new();

    let finish = |it: &Iterate, status, iterations, upper_bound| {
        let fx = p.evaluate(&it.x);
        let feasibility_residual = fx.iter().map(min_eigenvalue).fold(f64::INFINITY, f64::min);
        let equality_residual = if p.num_equalities() == 0 { 0.0 } else { (e * &it.x - b).amax() };
        SdpSolution {
            objective: c.dot(&it.x),
            dual_objective: block_dot(p.constant(), &it.z) + b.dot(&it.y),
            x: it.x.clone(),
            feasibility_residual,
            equality_residual,
            status,
            iterations,
            upper_bound,
        }
    };

    for iter in 0..opts.max_iterations {
        let fx = p.evaluate(&it.x);
        let rs: Vec<DMatrix<f64>> = fx.iter().zip(&it.s).map(|(f, s)| f - s).collect();
        let rp = b - e * &it.x;
        let atz = p.adjoint(&it.z);
        let rd = c + &atz - e.transpose() * &it.y;

        let pobj = c.dot(&it.x);
        let dobj = block_dot(p.constant(), &it.z) + b.dot(&it.y);
        let gap = block_dot(&it.s, &it.z);
        let mu = gap / n_total as f64;

        let pres = (block_norm(&rs) / (f_scale + f0_norm)).max(rp.norm() / (1.0 + b_norm));
        let dres = rd.norm() / (1.0 + c_norm);
        let scale = 1.0 + pobj.abs() + dobj.abs();

        if dres <= 1e-10 {
            upper_bound = Some(upper_bound.map_or(dobj, |u: f64| u.min(dobj)));
        }

        if pres <= opts.tol.min(1e-10)
            && dres <= opts.tol
            && gap / scale <= opts.tol
            && (dobj - pobj).abs() / scale <= opts.tol
        {
            return Ok(finish(&it, SdpStatus::Optimal, iter, upper_bound));
        }

        // Farkas ray: Z ⪰ 0, A*(Z) = Eᵀy, ⟨F₀,Z⟩ + bᵀy < 0.
        let ray_value = -dobj;
        if ray_value > 0.0 && (&atz - e.transpose() * &it.y).norm() <= 1e-8 * ray_value {
            return Ok(finish(&it, SdpStatus::Infeasible, iter, upper_bound));
        }

        residual_history.push(pres);
        if pres > 1e-6 && residual_history.len() > STALL_WINDOW {
            let past = residual_history[residual_history.len() - 1 - STALL_WINDOW];
            if pres >= 0.9 * past {
                return Ok(finish(&it, SdpStatus::Infeasible, iter, upper_bound));
            }
        }

        let w: Vec<DMatrix<f64>> =
            it.s.iter()
                .zip(&it.z)
                .map(|(s, z)| nt_scaling(s, z).ok_or_else(|| numerical("scaling point lost definiteness")))
                .collect::<Result<_>>()?;
        let s_inv: Vec<DMatrix<f64>> =
            it.s.iter()
                .map(|s| spd_inverse(s).ok_or_else(|| numerical("slack lost definiteness")))
                .collect::<Result<_>>()?;

        let schur = p.schur(&w);
        let newton = NewtonSystem::factor(&schur, e)?;
        let wrw = sandwich(&w, &rs);
        let at_wrw = p.adjoint(&wrw);

        let direction = |sigma: f64| -> Result<Direction> {
            let rc: Vec<DMatrix<f64>> = s_inv.iter().zip(&it.z).map(|(si, z)| si * (sigma * mu) - z).collect();
            let rhs1 = p.adjoint(&rc) - &at_wrw + &rd;
            let (dx, dy) = newton.solve(&rhs1, &rp)?;
            let ds: Vec<DMatrix<f64>> = p.apply_linear(&dx).into_iter().zip(&rs).map(|(a, r)| a + r).collect();
            let wdsw = sandwich(&w, &ds);
            let dz: Vec<DMatrix<f64>> = rc
                .iter()
                .zip(&wdsw)
                .map(|(r, wd)| {
                    let mut d = r - wd;
                    symmetrize(&mut d);
                    d
                })
                .collect();
            Ok(Direction { dx, dy, ds, dz })
        };

        let steps = |d: &Direction| -> Result<(f64, f64)> {
            let mut a = f64::INFINITY;
            let mut bz = f64::INFINITY;
            for (s, ds) in it.s.iter().zip(&d.ds) {
                a = a.min(max_step(s, ds).ok_or_else(|| numerical("slack not positive definite"))?);
            }
            for (z, dz) in it.z.iter().zip(&d.dz) {
                bz = bz.min(max_step(z, dz).ok_or_else(|| numerical("dual not positive definite"))?);
            }
            Ok(((opts.step_damping * a).min(1.0), (opts.step_damping * bz).min(1.0)))
        };

        let predictor = direction(0.0)?;
        let (ap, bp) = steps(&predictor)?;
        let s_aff: Vec<DMatrix<f64>> = it.s.iter().zip(&predictor.ds).map(|(s, d)| s + d * ap).collect();
        let z_aff: Vec<DMatrix<f64>> = it.z.iter().zip(&predictor.dz).map(|(z, d)| z + d * bp).collect();
        let mu_aff = block_dot(&s_aff, &z_aff) / n_total as f64;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        let d = direction(sigma)?;
        let (mut alpha, mut beta) = steps(&d)?;

        // Roundoff can push a damped step onto the cone boundary; back off
        // until both updated blocks factor.
        let update = |m: &[DMatrix<f64>], dm: &[DMatrix<f64>], a: f64| -> Option<Vec<DMatrix<f64>>> {
            m.iter()
                .zip(dm)
                .map(|(m, d)| {
                    let mut n = m + d * a;
                    symmetrize(&mut n);
                    Cholesky::new(n.clone()).map(|_| n)
                })
                .collect()
        };
        let mut next = None;
        for _ in 0..MAX_BACKTRACKS {
            if let (Some(s), Some(z)) = (update(&it.s, &d.ds, alpha), update(&it.z, &d.dz, beta)) {
                next = Some((s, z));
                break;
            }
            alpha *= 0.5;
            beta *= 0.5;
        }
        let (s_next, z_next) = next.ok_or_else(|| numerical("step left the cone"))?;
        it.x += &d.dx * alpha;
        it.y += &d.dy * beta;
        it.s = s_next;
        it.z = z_next;
    }

    Ok(finish(&it, SdpStatus::MaxIterations, opts.max_iterations, upper_bound))
}
