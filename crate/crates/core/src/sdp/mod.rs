//! Embedded SDP solver, SDPA export and the hierarchy driver.

mod core;
mod hierarchy;
mod sdpa;

use nalgebra::DMatrix;
use serde::Serialize;

pub use self::core::{independent_columns, solve_core, CoreSdp, CoreSolution, SymEntry};
pub use hierarchy::{prepare, run_hierarchy, HierarchyOptions, HierarchyReport, HierarchyRow};
pub use sdpa::{export_sdpa, parse_sdpa, SdpaEntry, SdpaProblem};

use crate::par::ExecMode;
use crate::poly::rational_to_f64;
use crate::relax::{SdpProblem, SosProgram};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 100;
pub const DEFAULT_BLOCK_CAP: usize = 400;
pub const PRESOLVE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SdpError {
    #[error("total block dimension {total} exceeds the cap {cap}")]
    CapExceeded { total: usize, cap: usize },
    #[error("factorization of {what} failed at iteration {iteration}")]
    Factorization { iteration: usize, what: &'static str },
    #[error("equality constraints are inconsistent")]
    InconsistentEqualities,
    #[error("malformed SDP: {0}")]
    Malformed(String),
    #[error("SDPA parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    /// Stopped before meeting the tolerances.
    MaxIter,
    /// Iterates diverged; a hint, not a certificate of infeasibility.
    InfeasibleSuspect,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::MaxIter => "max_iter",
            SolveStatus::InfeasibleSuspect => "infeasible_suspect",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub max_block_dim: usize,
    /// Iterate norm treated as divergence.
    pub divergence: f64,
    pub mode: ExecMode,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            max_block_dim: DEFAULT_BLOCK_CAP,
            divergence: 1e12,
            mode: ExecMode::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Residuals {
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
}

/// Solution of a moment or SOS program, in that program's own terms.
///
/// For a moment program `primal_objective` is `L_y(f)` at the returned
/// moments and `dual_objective` the matching SOS bound; for an SOS program
/// `primal_objective` is `ξ` and `dual_objective` the matching moment bound.
#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub status: SolveStatus,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// Moment/localizing matrices, or Gram matrices.
    pub blocks: Vec<DMatrix<f64>>,
    /// Moments `y`, or the dual multipliers of the SOS equations.
    pub dual: Vec<f64>,
    /// `(ξ, u)` for SOS programs, equality multipliers for moment programs.
    pub free: Vec<f64>,
    pub residuals: Residuals,
    pub iterations: usize,
}

impl SdpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

fn check_cap(sizes: &[usize], opts: &SolverOptions) -> Result<(), SdpError> {
    let total: usize = sizes.iter().sum();
    if total > opts.max_block_dim {
        return Err(SdpError::CapExceeded { total, cap: opts.max_block_dim });
    }
    Ok(())
}

/// Solves `sdp` after dropping dependent free-variable columns; dropped
/// variables come back as zero.
pub fn solve_presolved(sdp: &CoreSdp, opts: &SolverOptions) -> Result<CoreSolution, SdpError> {
    let kept = independent_columns(&sdp.free_matrix(), &sdp.c_z, PRESOLVE_TOL).ok_or(SdpError::InconsistentEqualities)?;
    let p = sdp.num_free();
    if kept.len() == p {
        return solve_core(sdp, opts);
    }
    log::debug!("presolve dropped {} of {} free columns", p - kept.len(), p);
    let mut remap = vec![None; p];
    for (new, &old) in kept.iter().enumerate() {
        remap[old] = Some(new);
    }
    let mut reduced = sdp.clone();
    reduced.c_z = kept.iter().map(|&j| sdp.c_z[j]).collect();
    for row in &mut reduced.e {
        *row = row.iter().filter_map(|&(k, v)| remap[k].map(|n| (n, v))).collect();
    }
    let mut sol = solve_core(&reduced, opts)?;
    let mut z = nalgebra::DVector::zeros(p);
    for (new, &old) in kept.iter().enumerate() {
        z[old] = sol.z[new];
    }
    sol.z = z;
    Ok(sol)
}

/// Core form of a moment program: the moments are the dual vector,
/// `S = Σ y_γ B_γ`, and equalities plus the normalization are `Eᵀy = c_z`.
pub fn moment_core(sdp: &SdpProblem) -> CoreSdp {
    let nm = sdp.num_moments();
    let p = sdp.equalities.len() + 1;
    let mut core = CoreSdp::new(sdp.block_sizes(), p);
    core.c_z[p - 1] = 1.0;
    let mut a: Vec<Vec<SymEntry>> = vec![Vec::new(); nm];
    for (b, block) in sdp.blocks.iter().enumerate() {
        for (i, j, form) in block.upper() {
            for (g, c) in form.terms() {
                a[*g].push(SymEntry::new(b, i, j, -rational_to_f64(c)));
            }
        }
    }
    let mut e: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nm];
    for (t, form) in sdp.equalities.iter().chain(std::iter::once(&sdp.normalization)).enumerate() {
        for (g, c) in form.terms() {
            e[*g].push((t, rational_to_f64(c)));
        }
    }
    let mut f = vec![0.0; nm];
    for (g, c) in sdp.objective.terms() {
        f[*g] = rational_to_f64(c);
    }
    for ((row, free), fg) in a.into_iter().zip(e).zip(f) {
        core.push_constraint(row, free, -fg);
    }
    core
}

/// Core form of an SOS program: Gram matrices are the primal blocks and
/// `(ξ, u)` the free variables.
pub fn sos_core(sos: &SosProgram) -> CoreSdp {
    let offsets: Vec<usize> = sos
        .ideal
        .iter()
        .scan(1, |acc, b| {
            let o = *acc;
            *acc += b.basis.len();
            Some(o)
        })
        .collect();
    let p = 1 + sos.num_ideal_coefficients();
    let mut core = CoreSdp::new(sos.block_sizes(), p);
    core.c_z[0] = -1.0;
    for eq in &sos.equations {
        let entries = eq.gram.iter().map(|(b, i, j, c)| SymEntry::new(*b, *i, *j, rational_to_f64(c))).collect();
        let mut free = Vec::new();
        if !num_traits::Zero::is_zero(&eq.xi) {
            free.push((0, rational_to_f64(&eq.xi)));
        }
        free.extend(eq.ideal.iter().map(|(b, beta, c)| (offsets[*b] + beta, rational_to_f64(c))));
        core.push_constraint(entries, free, rational_to_f64(&eq.rhs));
    }
    core
}

fn residuals(sol: &CoreSolution) -> Residuals {
    Residuals { primal: sol.primal_infeasibility, dual: sol.dual_infeasibility, gap: sol.relative_gap }
}

/// `ρ_k`: minimizes `L_y(objective)` over the moment program.
pub fn solve_moment(sdp: &SdpProblem, opts: &SolverOptions) -> Result<SdpSolution, SdpError> {
    check_cap(&sdp.block_sizes(), opts)?;
    let sol = solve_presolved(&moment_core(sdp), opts)?;
    log::debug!("moment k={} status {} after {} iterations", sdp.order, sol.status, sol.iterations);
    Ok(SdpSolution {
        status: sol.status,
        primal_objective: -sol.dual_objective,
        dual_objective: -sol.primal_objective,
        blocks: sol.s.clone(),
        dual: sol.y.iter().copied().collect(),
        free: sol.z.iter().copied().collect(),
        residuals: residuals(&sol),
        iterations: sol.iterations,
    })
}

/// `τ_k`: maximizes `ξ` over the SOS program.
pub fn solve_sos(sos: &SosProgram, opts: &SolverOptions) -> Result<SdpSolution, SdpError> {
    check_cap(&sos.block_sizes(), opts)?;
    let sol = solve_presolved(&sos_core(sos), opts)?;
    log::debug!("sos k={} status {} after {} iterations", sos.order, sol.status, sol.iterations);
    Ok(SdpSolution {
        status: sol.status,
        primal_objective: -sol.primal_objective,
        dual_objective: -sol.dual_objective,
        blocks: sol.x.clone(),
        dual: sol.y.iter().copied().collect(),
        free: sol.z.iter().copied().collect(),
        residuals: residuals(&sol),
        iterations: sol.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fjkkt::PopProblem;
    use crate::poly::{parse_polynomial, Polynomial};
    use crate::relax::{build_moment_sdp, build_sos_sdp};

    fn p(text: &str) -> Polynomial {
        parse_polynomial(text, &["x".to_string()]).unwrap()
    }

    #[test]
    fn interval_linear_objective() {
        let pop = PopProblem::inequality(p("1 + x"), vec![p("1 - x^2")]).unwrap();
        let opts = SolverOptions::default();
        let m = solve_moment(&build_moment_sdp(&pop, 1).unwrap(), &opts).unwrap();
        assert!(m.is_optimal());
        assert!(m.primal_objective.abs() < 1e-7, "{}", m.primal_objective);
        let s = solve_sos(&build_sos_sdp(&pop, 1).unwrap(), &opts).unwrap();
        assert!(s.is_optimal());
        assert!(s.primal_objective.abs() < 1e-7, "{}", s.primal_objective);
        assert!(s.residuals.primal <= opts.tol && s.residuals.dual <= opts.tol && s.residuals.gap <= opts.tol);
    }

    #[test]
    fn equality_constrained() {
        // min x s.t. x² = 1 ⇒ -1.
        let pop = PopProblem::new(vec!["x".into()], p("x"), vec![], vec![p("x^2 - 1")], None).unwrap();
        let opts = SolverOptions::default();
        let m = solve_moment(&build_moment_sdp(&pop, 2).unwrap(), &opts).unwrap();
        assert!((m.primal_objective + 1.0).abs() < 1e-6, "{:?}", m.status);
        let s = solve_sos(&build_sos_sdp(&pop, 2).unwrap(), &opts).unwrap();
        assert!((s.primal_objective + 1.0).abs() < 1e-6, "{:?}", s.status);
    }

    #[test]
    fn cap_is_enforced() {
        let pop = PopProblem::inequality(p("x"), vec![]).unwrap();
        let opts = SolverOptions { max_block_dim: 2, ..SolverOptions::default() };
        let err = solve_moment(&build_moment_sdp(&pop, 3).unwrap(), &opts).unwrap_err();
        assert_eq!(err, SdpError::CapExceeded { total: 4, cap: 2 });
    }
}
