//! SDPA sparse format (`.dat-s`).
//!
//! The moment program is written as an SDPA primal
//! `min cᵀx  s.t.  Σ x_k F_k − F_0 ⪰ 0`. When the normalization is exactly
//! `y_0 = 1`, `y_0` is substituted as a constant and `x_k = y_k`; otherwise
//! every moment is a variable (`x_k = y_{k-1}`) and the normalization becomes
//! two rows of the diagonal block. Each equality form contributes the rows
//! `a(y) ≥ 0` and `−a(y) ≥ 0` to that diagonal block, which always comes last.

use std::fmt::Write as _;

use num_traits::Zero;

use crate::poly::rational_to_f64;
use crate::relax::{LinearForm, SdpProblem};

use super::{CoreSdp, SdpError, SymEntry};

/// One nonzero of `F_matrix`, 1-based, upper triangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SdpaEntry {
    pub matrix: usize,
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SdpaProblem {
    pub num_vars: usize,
    /// Negative sizes denote diagonal blocks.
    pub block_sizes: Vec<i64>,
    pub cost: Vec<f64>,
    pub entries: Vec<SdpaEntry>,
    /// Constant dropped from the objective (`f_0` when `y_0` is substituted).
    pub objective_offset: f64,
}

fn number(v: f64) -> String {
    format!("{}", v + 0.0)
}

impl SdpaProblem {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.num_vars);
        let _ = writeln!(out, "{}", self.block_sizes.len());
        let sizes: Vec<String> = self.block_sizes.iter().map(i64::to_string).collect();
        let _ = writeln!(out, "{}", sizes.join(" "));
        let cost: Vec<String> = self.cost.iter().map(|&v| number(v)).collect();
        let _ = writeln!(out, "{}", cost.join(" "));
        for e in &self.entries {
            let _ = writeln!(out, "{} {} {} {} {}", e.matrix, e.block, e.row, e.col, number(e.value));
        }
        out
    }

    /// Equivalent core problem; a diagonal block of size `s` becomes `s`
    /// blocks of size 1. The SDPA primal value is `−dual_objective`.
    pub fn to_core(&self) -> CoreSdp {
        let mut first = Vec::with_capacity(self.block_sizes.len());
        let mut sizes = Vec::new();
        for &s in &self.block_sizes {
            first.push(sizes.len());
            if s < 0 {
                sizes.extend(std::iter::repeat(1).take(s.unsigned_abs() as usize));
            } else {
                sizes.push(s as usize);
            }
        }
        let place = |e: &SdpaEntry| {
            let b = e.block - 1;
            if self.block_sizes[b] < 0 {
                SymEntry::new(first[b] + e.row - 1, 0, 0, -e.value)
            } else {
                SymEntry::new(first[b], e.row - 1, e.col - 1, -e.value)
            }
        };
        let mut core = CoreSdp::new(sizes, 0);
        let mut rows: Vec<Vec<SymEntry>> = vec![Vec::new(); self.num_vars];
        for e in &self.entries {
            if e.matrix == 0 {
                core.c.push(place(e));
            } else {
                rows[e.matrix - 1].push(place(e));
            }
        }
        for (row, c) in rows.into_iter().zip(&self.cost) {
            core.push_constraint(row, Vec::new(), -c);
        }
        core
    }
}

/// SDPA form of a moment program.
pub fn export_sdpa(sdp: &SdpProblem) -> SdpaProblem {
    let substitute = sdp.normalization == LinearForm::single(0);
    let nm = sdp.num_moments();
    let var = |g: usize| if substitute { g } else { g + 1 };
    let num_vars = if substitute { nm - 1 } else { nm };

    let mut cost = vec![0.0; num_vars];
    let mut objective_offset = 0.0;
    for (g, c) in sdp.objective.terms() {
        let v = rational_to_f64(c);
        match var(*g) {
            0 => objective_offset = v,
            k => cost[k - 1] = v,
        }
    }

    let mut entries = Vec::new();
    let mut push = |k: usize, block: usize, row: usize, col: usize, v: f64, constant: bool| {
        if v != 0.0 {
            let value = if constant { -v } else { v };
            entries.push(SdpaEntry { matrix: k, block, row, col, value });
        }
    };
    let mut block_sizes: Vec<i64> = sdp.block_sizes().iter().map(|&s| s as i64).collect();
    for (b, block) in sdp.blocks.iter().enumerate() {
        for (i, j, form) in block.upper() {
            for (g, c) in form.terms() {
                let k = var(*g);
                push(k, b + 1, i + 1, j + 1, rational_to_f64(c), k == 0);
            }
        }
    }

    let mut lp_rows: Vec<(&LinearForm, f64, f64)> = Vec::new();
    for form in &sdp.equalities {
        lp_rows.push((form, 1.0, 0.0));
        lp_rows.push((form, -1.0, 0.0));
    }
    if !substitute {
        lp_rows.push((&sdp.normalization, 1.0, -1.0));
        lp_rows.push((&sdp.normalization, -1.0, 1.0));
    }
    if !lp_rows.is_empty() {
        let lp = block_sizes.len() + 1;
        block_sizes.push(-(lp_rows.len() as i64));
        for (r, (form, sign, constant)) in lp_rows.iter().enumerate() {
            if *constant != 0.0 {
                push(0, lp, r + 1, r + 1, *constant, true);
            }
            for (g, c) in form.terms() {
                let k = var(*g);
                push(k, lp, r + 1, r + 1, sign * rational_to_f64(c), k == 0);
            }
        }
    }
    entries.sort_by_key(|e| (e.matrix, e.block, e.row, e.col));
    if sdp.objective.terms().iter().all(|(_, c)| c.is_zero()) {
        cost.iter_mut().for_each(|c| *c = 0.0);
    }
    SdpaProblem { num_vars, block_sizes, cost, entries, objective_offset }
}

/// Parses SDPA sparse text. Leading lines starting with `*` or `"` are
/// comments; `, ( ) { }` count as whitespace.
pub fn parse_sdpa(text: &str) -> Result<SdpaProblem, SdpError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .skip_while(|(_, l)| l.starts_with('*') || l.starts_with('"'))
        .filter(|(_, l)| !l.trim().is_empty());
    let err = |line: usize, message: &str| SdpError::Parse { line, message: message.to_string() };
    let tokens = |l: &str| -> Vec<String> {
        l.replace([',', '(', ')', '{', '}'], " ").split_whitespace().map(str::to_string).collect()
    };
    let mut header = |what: &str| -> Result<(usize, Vec<String>), SdpError> {
        let (n, l) = lines.next().ok_or_else(|| err(0, &format!("missing {what}")))?;
        Ok((n, tokens(l)))
    };

    let (n, t) = header("mDIM")?;
    let num_vars: usize = t.first().and_then(|s| s.parse().ok()).ok_or_else(|| err(n, "bad mDIM"))?;
    let (n, t) = header("nBLOCK")?;
    let nblock: usize = t.first().and_then(|s| s.parse().ok()).ok_or_else(|| err(n, "bad nBLOCK"))?;
    let (n, t) = header("block structure")?;
    let block_sizes: Vec<i64> =
        t.iter().take(nblock).map(|s| s.parse::<i64>()).collect::<Result<_, _>>().map_err(|_| err(n, "bad block size"))?;
    if block_sizes.len() != nblock || block_sizes.contains(&0) {
        return Err(err(n, "block structure does not match nBLOCK"));
    }
    let (n, t) = header("cost vector")?;
    let cost: Vec<f64> =
        t.iter().take(num_vars).map(|s| s.parse::<f64>()).collect::<Result<_, _>>().map_err(|_| err(n, "bad cost entry"))?;
    if cost.len() != num_vars {
        return Err(err(n, "cost vector shorter than mDIM"));
    }

    let mut entries = Vec::new();
    for (n, l) in lines {
        let t = tokens(l);
        if t.len() < 5 {
            return Err(err(n, "expected `matrix block row col value`"));
        }
        let idx: Vec<usize> =
            t[..4].iter().map(|s| s.parse::<usize>()).collect::<Result<_, _>>().map_err(|_| err(n, "bad index"))?;
        let value: f64 = t[4].parse().map_err(|_| err(n, "bad value"))?;
        let (matrix, block, row, col) = (idx[0], idx[1], idx[2], idx[3]);
        if matrix > num_vars || block == 0 || block > nblock {
            return Err(err(n, "matrix or block index out of range"));
        }
        let size = block_sizes[block - 1].unsigned_abs() as usize;
        if row == 0 || col == 0 || row > size || col > size || (block_sizes[block - 1] < 0 && row != col) {
            return Err(err(n, "entry outside its block"));
        }
        let (row, col) = if row <= col { (row, col) } else { (col, row) };
        entries.push(SdpaEntry { matrix, block, row, col, value });
    }
    Ok(SdpaProblem { num_vars, block_sizes, cost, entries, objective_offset: 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fjkkt::PopProblem;
    use crate::poly::{parse_polynomial, Polynomial};
    use crate::relax::build_moment_sdp;
    use crate::sdp::{solve_core, solve_moment, SolverOptions};

    fn p(text: &str) -> Polynomial {
        parse_polynomial(text, &["x".to_string()]).unwrap()
    }

    #[test]
    fn interval_problem_text() {
        let pop = PopProblem::inequality(p("x"), vec![p("1 - x^2")]).unwrap();
        let text = export_sdpa(&build_moment_sdp(&pop, 1).unwrap()).to_text();
        assert_eq!(text, "2\n2\n2 1\n1 0\n0 1 1 1 -1\n0 2 1 1 -1\n1 1 1 2 1\n2 1 2 2 1\n2 2 1 1 -1\n");
    }

    #[test]
    fn zero_objective_and_round_trip() {
        let pop = PopProblem::new(vec!["x".into()], p("0"), vec![p("1 - x^2")], vec![p("x")], None).unwrap();
        let sdpa = export_sdpa(&build_moment_sdp(&pop, 1).unwrap());
        let text = sdpa.to_text();
        assert_eq!(text.lines().nth(3), Some("0 0"));
        assert_eq!(text.lines().nth(2), Some("2 1 -2"));
        assert_eq!(parse_sdpa(&text).unwrap().to_text(), text);
    }

    #[test]
    fn exported_problem_solves_to_same_value() {
        let pop = PopProblem::new(vec!["x".into()], p("x + 2"), vec![p("1 - x^2")], vec![p("x^2 - x")], None).unwrap();
        let sdp = build_moment_sdp(&pop, 2).unwrap();
        let opts = SolverOptions::default();
        let direct = solve_moment(&sdp, &opts).unwrap().primal_objective;
        let sdpa = export_sdpa(&sdp);
        let via = -solve_core(&sdpa.to_core(), &opts).unwrap().dual_objective + sdpa.objective_offset;
        assert!((direct - 2.0).abs() < 1e-6, "{direct}");
        assert!((direct - via).abs() < 1e-6, "{direct} vs {via}");
    }

    #[test]
    fn parse_errors_carry_lines() {
        assert!(matches!(parse_sdpa("1\n1\n2\n1\n1 1 3 1 1\n"), Err(SdpError::Parse { line: 5, .. })));
        assert!(matches!(parse_sdpa("1\n1\n-2\n1\n1 1 1 2 1\n"), Err(SdpError::Parse { line: 5, .. })));
        assert!(matches!(parse_sdpa("x\n"), Err(SdpError::Parse { line: 1, .. })));
        let ok = parse_sdpa("* comment\n1\n1\n{2}\n1.5\n0 1 2 1 3\n").unwrap();
        assert_eq!(ok.entries[0], SdpaEntry { matrix: 0, block: 1, row: 1, col: 2, value: 3.0 });
    }
}
