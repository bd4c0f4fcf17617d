//! Lawson–Hanson active-set nonnegative least squares.

use nalgebra::{DMatrix, DVector};

/// Result of `min ‖A x - b‖₂` over `x ≥ 0`.
#[derive(Clone, Debug)]
pub struct NnlsSolution {
    pub x: DVector<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Solves `min ‖A x - b‖` subject to `x ≥ 0`.
///
/// Entering variables are chosen by largest gradient component; ties go to
/// the smallest index. An `A` with zero columns returns `x = []`.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> NnlsSolution {
    let (m, n) = a.shape();
    assert_eq!(b.len(), m, "nnls: row mismatch");
    let mut x = DVector::zeros(n);
    if n == 0 || m == 0 {
        return NnlsSolution { residual: b.norm(), x, iterations: 0 };
    }
    let scale = a.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(b.amax()).max(1.0);
    let tol = 1e-12 * scale * scale * (m.max(n) as f64);
    let mut passive = vec![false; n];
    let max_outer = 3 * n + 10;
    let mut iterations = 0;

    for _ in 0..max_outer {
        let r = b - a * &x;
        let w = a.transpose() * r;
        let mut best: Option<usize> = None;
        for j in 0..n {
            if !passive[j] && w[j] > tol && best.is_none_or(|bj| w[j] > w[bj]) {
                best = Some(j);
            }
        }
        let Some(j) = best else { break };
        passive[j] = true;

        loop {
            iterations += 1;
            let s = solve_passive(a, b, &passive);
            let feasible = (0..n).all(|i| !passive[i] || s[i] > 0.0);
            if feasible {
                x = s;
                break;
            }
            let mut alpha = f64::INFINITY;
            for i in 0..n {
                if passive[i] && s[i] <= 0.0 {
                    let denom = x[i] - s[i];
                    if denom > 0.0 {
                        alpha = alpha.min(x[i] / denom);
                    }
                }
            }
            if !alpha.is_finite() {
                alpha = 0.0;
            }
            x = &x + (&s - &x) * alpha;
            for i in 0..n {
                if passive[i] && x[i] <= 1e-15 * scale {
                    passive[i] = false;
                    x[i] = 0.0;
                }
            }
            if iterations > 10 * max_outer {
                break;
            }
        }
    }
    let residual = (b - a * &x).norm();
    NnlsSolution { x, residual, iterations }
}

/// Unconstrained least squares on the passive columns; zeros elsewhere.
fn solve_passive(a: &DMatrix<f64>, b: &DVector<f64>, passive: &[bool]) -> DVector<f64> {
    let cols: Vec<usize> = (0..passive.len()).filter(|&i| passive[i]).collect();
    let mut out = DVector::zeros(passive.len());
    if cols.is_empty() {
        return out;
    }
    let sub = a.select_columns(cols.iter());
    let svd = sub.svd(true, true);
    let eps = 1e-13 * svd.singular_values.max().max(1e-300);
    if let Ok(sol) = svd.solve(b, eps) {
        for (k, &c) in cols.iter().enumerate() {
            out[c] = sol[k];
        }
    }
    out
}
