use std::time::Instant;

use serde::Serialize;

use crate::fjkkt::{self, PopProblem, SystemVariant};
use crate::par::{self, ExecMode};
use crate::poly::Polynomial;
use crate::relax::{self, RelaxError};

use super::{solve_moment, solve_sos, SolveStatus, SolverOptions};

#[derive(Clone, Debug)]
pub struct HierarchyOptions {
    /// `None` solves the problem as given.
    pub variant: Option<SystemVariant>,
    pub use_products: bool,
    /// Defaults to the minimal admissible order.
    pub k_min: Option<u32>,
    pub k_max: u32,
    /// Use `θ^η` with `θ` from the problem, or `λ₀` for Fritz John systems.
    pub denominator: bool,
    pub stagnation_tol: f64,
    pub solver: SolverOptions,
    /// Parallelism across orders.
    pub mode: ExecMode,
}

impl Default for HierarchyOptions {
    fn default() -> Self {
        Self {
            variant: None,
            use_products: false,
            k_min: None,
            k_max: 3,
            denominator: false,
            stagnation_tol: 1e-6,
            solver: SolverOptions::default(),
            mode: ExecMode::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HierarchyRow {
    pub k: u32,
    pub rho_k: Option<f64>,
    pub tau_k: Option<f64>,
    pub moment_status: Option<SolveStatus>,
    pub sos_status: Option<SolveStatus>,
    pub wall_ms: u128,
    pub error: Option<String>,
}

impl HierarchyRow {
    pub fn all_optimal(&self) -> bool {
        self.moment_status == Some(SolveStatus::Optimal) && self.sos_status == Some(SolveStatus::Optimal)
    }

    /// Combined status label.
    pub fn status(&self) -> String {
        match (&self.error, self.moment_status, self.sos_status) {
            (Some(_), _, _) => "error".into(),
            (None, Some(m), Some(s)) if m == s => m.to_string(),
            (None, m, s) => format!(
                "{}/{}",
                m.map_or("-".into(), |v| v.to_string()),
                s.map_or("-".into(), |v| v.to_string())
            ),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HierarchyReport {
    pub rows: Vec<HierarchyRow>,
    /// First `k` with `|ρ_k − ρ_{k−1}| ≤ stagnation_tol`.
    pub stagnation_order: Option<u32>,
    /// Nondecreasing `ρ_k` over the optimal rows, up to the tolerance.
    pub monotone: bool,
}

impl HierarchyReport {
    pub fn all_optimal(&self) -> bool {
        self.rows.iter().all(HierarchyRow::all_optimal)
    }

    pub fn final_rho(&self) -> Option<f64> {
        self.rows.iter().rev().find_map(|r| r.rho_k)
    }
}

/// The problem actually relaxed, and the denominator to use.
pub fn prepare(pop: &PopProblem, opts: &HierarchyOptions) -> Result<PopProblem, RelaxError> {
    let mut out = match opts.variant {
        Some(v) => relax::augment_problem(pop, v, opts.use_products)?,
        None if opts.use_products => {
            let g = fjkkt::products(&pop.g, fjkkt::DEFAULT_ENUMERATION_CAP)?;
            PopProblem::new(pop.var_names.clone(), pop.f.clone(), g, pop.h.clone(), pop.theta.clone())?
        }
        None => pop.clone(),
    };
    if opts.denominator && out.theta.is_none() {
        let fj = matches!(opts.variant, Some(SystemVariant::Fj | SystemVariant::FjPlus));
        if !fj {
            return Err(RelaxError::MissingDenominator);
        }
        out.theta = Some(Polynomial::var(out.nvars(), pop.nvars()));
    }
    Ok(out)
}

fn solve_order(pop: &PopProblem, k: u32, opts: &HierarchyOptions) -> HierarchyRow {
    let start = Instant::now();
    let mut row = HierarchyRow {
        k,
        rho_k: None,
        tau_k: None,
        moment_status: None,
        sos_status: None,
        wall_ms: 0,
        error: None,
    };
    let built = if opts.denominator {
        relax::build_denominator_sdp(pop, k)
    } else {
        relax::build_moment_sdp(pop, k).and_then(|m| Ok((m, relax::build_sos_sdp(pop, k)?)))
    };
    match built {
        Err(e) => row.error = Some(e.to_string()),
        Ok((moment, sos)) => {
            let mut errors = Vec::new();
            match solve_moment(&moment, &opts.solver) {
                Ok(s) => {
                    row.rho_k = Some(s.primal_objective);
                    row.moment_status = Some(s.status);
                }
                Err(e) => errors.push(format!("moment: {e}")),
            }
            match solve_sos(&sos, &opts.solver) {
                Ok(s) => {
                    row.tau_k = Some(s.primal_objective);
                    row.sos_status = Some(s.status);
                }
                Err(e) => errors.push(format!("sos: {e}")),
            }
            if !errors.is_empty() {
                row.error = Some(errors.join("; "));
            }
        }
    }
    row.wall_ms = start.elapsed().as_millis();
    log::info!("k={k}: rho={:?} tau={:?} status={} ({} ms)", row.rho_k, row.tau_k, row.status(), row.wall_ms);
    row
}

/// Solves both sides for every `k` in range. Orders are independent and run
/// according to `opts.mode`; rows come back sorted by `k`. Per-order
/// failures are recorded in the row and do not stop the sequence.
pub fn run_hierarchy(pop: &PopProblem, opts: &HierarchyOptions) -> Result<HierarchyReport, RelaxError> {
    let prepared = prepare(pop, opts)?;
    let k_min = opts.k_min.unwrap_or_else(|| relax::minimal_order(&prepared).max(1));
    let min = relax::minimal_order(&prepared);
    if k_min < min {
        return Err(RelaxError::OrderTooSmall { k: k_min, min });
    }
    let orders: Vec<u32> = (k_min..=opts.k_max).collect();
    let rows = par::map(opts.mode, &orders, |&k| solve_order(&prepared, k, opts));

    let mut stagnation_order = None;
    let mut monotone = true;
    for w in rows.windows(2) {
        if let (Some(a), Some(b)) = (w[0].rho_k, w[1].rho_k) {
            if w[0].moment_status == Some(SolveStatus::Optimal) && w[1].moment_status == Some(SolveStatus::Optimal) {
                if b < a - 1e-6 {
                    monotone = false;
                }
                if stagnation_order.is_none() && (b - a).abs() <= opts.stagnation_tol {
                    stagnation_order = Some(w[1].k);
                }
            }
        }
    }
    Ok(HierarchyReport { rows, stagnation_order, monotone })
}
