use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::par::{self, ExecMode};

use super::nnls::nnls;
use super::{FjError, PopProblem};

/// Default tolerance for pointwise classification.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-7;
/// Default relative tolerance for numerical ranks.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Which optimality conditions hold at a feasible point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointClassification {
    pub fj_holds: bool,
    pub kkt_holds: bool,
    /// Fritz John holds but KKT does not.
    pub in_w: bool,
    /// `(λ₀, λ₁..λ_m)` with unit Euclidean norm, present when `fj_holds`.
    pub fj_multipliers: Option<Vec<f64>>,
    /// `(λ₁..λ_m)`, present when `kkt_holds`.
    pub kkt_multipliers: Option<Vec<f64>>,
    pub fj_residual: f64,
    pub kkt_residual: f64,
}

impl PointClassification {
    /// Residual of the strongest condition that holds (KKT first).
    pub fn residual(&self) -> f64 {
        if self.kkt_holds {
            self.kkt_residual
        } else {
            self.fj_residual
        }
    }
}

/// Classifies a feasible point `x` of `pop`.
///
/// Constraints with `g_j(x) > tol` are inactive and their multipliers are
/// pinned to zero. KKT: nonnegative least squares on
/// `∇f = Σ λ_j ∇g_j`. Fritz John: for every column `i` of
/// `B = [∇f, -∇g_active]`, fix `μ_i = 1`, fit the others by nonnegative least
/// squares and score `‖Bμ‖ / ‖μ‖₂`; the best column wins.
pub fn classify_point(pop: &PopProblem, x: &[f64], tol: f64) -> Result<PointClassification, FjError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(FjError::BadTolerance(tol));
    }
    let n = pop.nvars();
    if x.len() != n {
        return Err(FjError::VariableCount { expected: n, found: x.len() });
    }
    let m = pop.num_inequalities();
    let mut gvals = Vec::with_capacity(m);
    for (j, g) in pop.g.iter().enumerate() {
        let v = g.eval_f64(x)?;
        if v < -tol {
            return Err(FjError::InfeasiblePoint { constraint: j + 1, value: v });
        }
        gvals.push(v);
    }
    let active: Vec<usize> = (0..m).filter(|&j| gvals[j] <= tol).collect();

    let grad_f = DVector::from_vec(
        pop.f.gradient().iter().map(|p| p.eval_f64(x)).collect::<Result<Vec<_>, _>>()?,
    );
    let mut grad_g = DMatrix::zeros(n, active.len());
    for (k, &j) in active.iter().enumerate() {
        for (i, d) in pop.g[j].gradient().iter().enumerate() {
            grad_g[(i, k)] = d.eval_f64(x)?;
        }
    }

    // KKT
    let kkt = nnls(&grad_g, &grad_f);
    let kkt_residual = kkt.residual;
    let kkt_holds = kkt_residual <= tol;
    let kkt_multipliers = kkt_holds.then(|| {
        let mut lam = vec![0.0; m];
        for (k, &j) in active.iter().enumerate() {
            lam[j] = kkt.x[k];
        }
        lam
    });

    // Fritz John
    let cols = active.len() + 1;
    let mut b = DMatrix::zeros(n, cols);
    b.set_column(0, &grad_f);
    for k in 0..active.len() {
        b.set_column(k + 1, &(-grad_g.column(k)));
    }
    let mut best: Option<(f64, DVector<f64>)> = None;
    for i in 0..cols {
        let others: Vec<usize> = (0..cols).filter(|&c| c != i).collect();
        let rest = b.select_columns(others.iter());
        let rhs = -b.column(i);
        let sol = nnls(&rest, &rhs.into_owned());
        let mut mu = DVector::zeros(cols);
        mu[i] = 1.0;
        for (k, &c) in others.iter().enumerate() {
            mu[c] = sol.x[k];
        }
        let norm = mu.norm();
        let score = (&b * &mu).norm() / norm;
        if best.as_ref().is_none_or(|(s, _)| score < *s) {
            best = Some((score, mu / norm));
        }
    }
    let (fj_residual, mu) = best.expect("at least the objective column");
    let fj_holds = fj_residual <= tol;
    let fj_multipliers = fj_holds.then(|| {
        let mut lam = vec![0.0; m + 1];
        lam[0] = mu[0];
        for (k, &j) in active.iter().enumerate() {
            lam[j + 1] = mu[k + 1];
        }
        lam
    });

    Ok(PointClassification {
        fj_holds,
        kkt_holds,
        in_w: fj_holds && !kkt_holds,
        fj_multipliers,
        kkt_multipliers,
        fj_residual,
        kkt_residual,
    })
}

/// Classifies many points; results are in input order.
pub fn classify_points(
    pop: &PopProblem,
    points: &[Vec<f64>],
    tol: f64,
    mode: ExecMode,
) -> Vec<Result<PointClassification, FjError>> {
    par::map(mode, points, |x| classify_point(pop, x, tol))
}
