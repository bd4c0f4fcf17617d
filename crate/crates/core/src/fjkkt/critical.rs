use nalgebra::{DMatrix, DVector};

use crate::poly::Polynomial;

use super::nnls::nnls;
use super::FjError;

/// `φ^g(x)`: the `(n+m) × m` matrix whose column `j` is `∇g_j(x)` stacked on
/// `g_j(x) e_j`.
pub fn phi_matrix(g: &[Polynomial], x: &[f64]) -> Result<DMatrix<f64>, FjError> {
    let m = g.len();
    let n = x.len();
    let mut out = DMatrix::zeros(n + m, m);
    for (j, gj) in g.iter().enumerate() {
        if gj.nvars() != n {
            return Err(FjError::VariableCount { expected: gj.nvars(), found: n });
        }
        for (i, d) in gj.gradient().iter().enumerate() {
            out[(i, j)] = d.eval_f64(x)?;
        }
        out[(n + j, j)] = gj.eval_f64(x)?;
    }
    Ok(out)
}

/// Numerical rank: singular values above `tol · σ_max`.
pub fn numerical_rank(a: &DMatrix<f64>, tol: f64) -> usize {
    if a.ncols() == 0 || a.nrows() == 0 {
        return 0;
    }
    let sv = a.clone().singular_values();
    let smax = sv.max();
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * smax).count()
}

/// `x ∈ C(g)`: `rank φ^g(x) < m`.
pub fn in_critical_set(g: &[Polynomial], x: &[f64], tol: f64) -> Result<bool, FjError> {
    check_tol(tol)?;
    let phi = phi_matrix(g, x)?;
    Ok(numerical_rank(&phi, tol) < g.len())
}

/// `x ∈ C⁺(g)`: `rank⁺ φ^g(x) < m`.
pub fn in_critical_set_plus(
    g: &[Polynomial],
    x: &[f64],
    tol: f64,
    cap: usize,
) -> Result<bool, FjError> {
    check_tol(tol)?;
    let phi = phi_matrix(g, x)?;
    Ok(rank_plus(&phi, tol, cap)? < g.len())
}

fn check_tol(tol: f64) -> Result<(), FjError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(FjError::BadTolerance(tol))
    }
}

/// `rank⁺(A)`: the largest number of columns whose convex hull avoids the
/// origin, by exhaustive enumeration over column subsets (largest first).
pub fn rank_plus(a: &DMatrix<f64>, tol: f64, cap: usize) -> Result<usize, FjError> {
    let m = a.ncols();
    if m > cap {
        return Err(FjError::TooManyConstraints { m, cap });
    }
    for size in (1..=m).rev() {
        let mut found = false;
        for_each_subset(m, size, &mut |cols| {
            if !found && !zero_in_convex_hull(a, cols, tol) {
                found = true;
            }
        });
        if found {
            return Ok(size);
        }
    }
    Ok(0)
}

fn for_each_subset(m: usize, size: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, m: usize, size: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        for i in start..m {
            if m - i < size - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, size, cur, f);
            cur.pop();
        }
    }
    rec(0, m, size, &mut Vec::with_capacity(size), f);
}

/// Whether `0 ∈ conv{a_c : c ∈ cols}` up to `tol` (relative to the largest
/// column norm).
///
/// Solved as nonnegative least squares on `[A; s·1ᵀ] μ ≈ [0; s]` with `s` the
/// largest column norm; the weights are renormalized onto the simplex before
/// `‖A μ‖` is measured, so the reported distance is attained by a hull point.
pub fn zero_in_convex_hull(a: &DMatrix<f64>, cols: &[usize], tol: f64) -> bool {
    if cols.is_empty() {
        return false;
    }
    let rows = a.nrows();
    let scale = cols
        .iter()
        .map(|&c| a.column(c).norm())
        .fold(0.0f64, f64::max);
    if scale == 0.0 {
        return true;
    }
    let weight = scale;
    let mut aug = DMatrix::zeros(rows + 1, cols.len());
    for (k, &c) in cols.iter().enumerate() {
        for i in 0..rows {
            aug[(i, k)] = a[(i, c)];
        }
        aug[(rows, k)] = weight;
    }
    let mut rhs = DVector::zeros(rows + 1);
    rhs[rows] = weight;
    let sol = nnls(&aug, &rhs);
    let total: f64 = sol.x.iter().sum();
    if total <= 0.0 {
        return false;
    }
    let mut point = DVector::zeros(rows);
    for (k, &c) in cols.iter().enumerate() {
        point += a.column(c) * (sol.x[k] / total);
    }
    point.norm() <= tol * scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn g(text: &str) -> Polynomial {
        parse_polynomial(text, &["x".to_string()]).unwrap()
    }

    #[test]
    fn phi_examples() {
        let phi = phi_matrix(&[g("x^3")], &[0.0]).unwrap();
        assert_eq!(phi.as_slice(), &[0.0, 0.0]);
        let phi = phi_matrix(&[g("1 - x^2")], &[0.0]).unwrap();
        assert_eq!(phi.as_slice(), &[0.0, 1.0]);

        let names = ["x1".to_string(), "x2".to_string()];
        let gs = [parse_polynomial("x1", &names).unwrap(), parse_polynomial("x2", &names).unwrap()];
        let phi = phi_matrix(&gs, &[1.0, 1.0]).unwrap();
        let expected = DMatrix::from_row_slice(4, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0]);
        assert_eq!(phi, expected);
        assert!(phi_matrix(&gs, &[1.0]).is_err());
    }

    #[test]
    fn critical_set_membership() {
        assert!(in_critical_set(&[g("x^3")], &[0.0], 1e-9).unwrap());
        assert!(!in_critical_set(&[g("1 - x^2")], &[0.0], 1e-9).unwrap());
        assert!(in_critical_set_plus(&[g("x^3")], &[0.0], 1e-9, 12).unwrap());
        assert!(!in_critical_set_plus(&[g("1 - x^2")], &[0.0], 1e-9, 12).unwrap());
        assert!(in_critical_set(&[g("x")], &[0.0], 0.0).is_err());
    }

    #[test]
    fn rank_plus_examples() {
        let zero = DMatrix::zeros(2, 1);
        assert_eq!(rank_plus(&zero, 1e-9, 12).unwrap(), 0);
        // Opposite columns: each alone avoids 0, together they do not.
        let opp = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, 0.0, 0.0]);
        assert_eq!(rank_plus(&opp, 1e-9, 12).unwrap(), 1);
        assert_eq!(numerical_rank(&opp, 1e-9), 1);
        // Columns spanning a cone that avoids 0.
        let cone = DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 1.0, 0.0, 1.0, 1.0]);
        assert_eq!(rank_plus(&cone, 1e-9, 12).unwrap(), 3);
        // A triangle around the origin.
        let tri = DMatrix::from_row_slice(2, 3, &[1.0, -1.0, 0.0, 0.0, 1.0, -1.0]);
        assert!(zero_in_convex_hull(&tri, &[0, 1, 2], 1e-9));
        assert_eq!(rank_plus(&tri, 1e-9, 12).unwrap(), 2);
        assert!(rank_plus(&DMatrix::zeros(2, 13), 1e-9, 12).is_err());
    }
}
