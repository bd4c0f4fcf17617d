use std::fmt;

use serde::{Deserialize, Serialize};

use crate::poly::{Degree, Polynomial};

use super::{FjError, PopProblem};

/// Which first-order system augments the problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SystemVariant {
    /// `h_FJ`: Fritz John with arbitrary-sign multipliers.
    Fj,
    /// `h_FJ⁺`: Fritz John with squared multipliers.
    FjPlus,
    /// `h_KKT`.
    Kkt,
    /// `h_KKT⁺`.
    KktPlus,
}

impl SystemVariant {
    pub fn is_fritz_john(self) -> bool {
        matches!(self, SystemVariant::Fj | SystemVariant::FjPlus)
    }

    pub fn is_squared(self) -> bool {
        matches!(self, SystemVariant::FjPlus | SystemVariant::KktPlus)
    }

    /// Number of multiplier variables for `m` inequalities.
    pub fn multiplier_count(self, m: usize) -> usize {
        if self.is_fritz_john() {
            m + 1
        } else {
            m
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SystemVariant::Fj => "fj",
            SystemVariant::FjPlus => "fj+",
            SystemVariant::Kkt => "kkt",
            SystemVariant::KktPlus => "kkt+",
        }
    }
}

impl fmt::Display for SystemVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SystemVariant {
    type Err = FjError;

    fn from_str(s: &str) -> Result<Self, FjError> {
        match s.to_ascii_lowercase().as_str() {
            "fj" => Ok(SystemVariant::Fj),
            "fj+" | "fj_plus" | "fjplus" => Ok(SystemVariant::FjPlus),
            "kkt" => Ok(SystemVariant::Kkt),
            "kkt+" | "kkt_plus" | "kktplus" => Ok(SystemVariant::KktPlus),
            other => Err(FjError::UnknownVariant(other.to_string())),
        }
    }
}

/// An augmented optimality system over the variables `(x, multipliers)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentedSystem {
    pub variant: SystemVariant,
    pub polynomials: Vec<Polynomial>,
    pub multiplier_count: usize,
    /// Number of original variables `n`; multipliers follow them.
    pub base_vars: usize,
    pub var_names: Vec<String>,
}

impl AugmentedSystem {
    pub fn nvars(&self) -> usize {
        self.base_vars + self.multiplier_count
    }

    pub fn max_degree(&self) -> Degree {
        self.polynomials.iter().map(Polynomial::degree).max().unwrap_or(Degree::NegInfinity)
    }

    /// Value of every entry at `(x, multipliers)`.
    pub fn residuals(&self, point: &[f64]) -> Result<Vec<f64>, FjError> {
        self.polynomials.iter().map(|p| Ok(p.eval_f64(point)?)).collect()
    }
}

pub fn build_fj(pop: &PopProblem) -> AugmentedSystem {
    build(pop, SystemVariant::Fj)
}

pub fn build_fj_plus(pop: &PopProblem) -> AugmentedSystem {
    build(pop, SystemVariant::FjPlus)
}

pub fn build_kkt(pop: &PopProblem) -> AugmentedSystem {
    build(pop, SystemVariant::Kkt)
}

pub fn build_kkt_plus(pop: &PopProblem) -> AugmentedSystem {
    build(pop, SystemVariant::KktPlus)
}

/// Builds the system for `variant`.
///
/// Entry order: the `n` stationarity rows, then the `m` complementarity rows
/// `λ_j g_j` (or `λ_j² g_j`), then for Fritz John the normalization
/// `1 - Σ_{j=0}^m λ_j²`. Multiplier `λ_j` is variable `n + j` for Fritz John
/// (with `λ_0` first) and `n + j - 1` for KKT.
pub fn build(pop: &PopProblem, variant: SystemVariant) -> AugmentedSystem {
    let n = pop.nvars();
    let m = pop.num_inequalities();
    let k = variant.multiplier_count(m);
    let total = n + k;
    let fj = variant.is_fritz_john();

    let lift = |p: &Polynomial| p.extend_vars(k);
    let weight = |var: usize| {
        let l = Polynomial::var(total, var);
        if variant.is_squared() {
            &l * &l
        } else {
            l
        }
    };
    // Weight polynomial of multiplier j in 0..=m (j = 0 is the objective).
    let lambda = |j: usize| -> Polynomial {
        if fj {
            weight(n + j)
        } else {
            debug_assert!(j >= 1);
            weight(n + j - 1)
        }
    };

    let f = lift(&pop.f);
    let g: Vec<Polynomial> = pop.g.iter().map(lift).collect();
    let grad_f = f.gradient();
    let grad_g: Vec<Vec<Polynomial>> = g.iter().map(Polynomial::gradient).collect();

    let mut polys = Vec::with_capacity(n + m + usize::from(fj));
    for i in 0..n {
        let mut row = if fj { &lambda(0) * &grad_f[i] } else { grad_f[i].clone() };
        for (j, gg) in grad_g.iter().enumerate() {
            row = &row - &(&lambda(j + 1) * &gg[i]);
        }
        polys.push(row);
    }
    for (j, gj) in g.iter().enumerate() {
        polys.push(&lambda(j + 1) * gj);
    }
    if fj {
        let mut norm = Polynomial::one(total);
        for j in 0..=m {
            let l = Polynomial::var(total, n + j);
            norm = &norm - &(&l * &l);
        }
        polys.push(norm);
    }

    let mut var_names = pop.var_names.clone();
    if fj {
        var_names.extend((0..=m).map(|j| format!("lambda{j}")));
    } else {
        var_names.extend((1..=m).map(|j| format!("lambda{j}")));
    }

    AugmentedSystem { variant, polynomials: polys, multiplier_count: k, base_vars: n, var_names }
}

/// `Πg = (g^α)_{α ∈ {0,1}^m \ {0}}`, ordered by `α` read as a binary integer
/// with `g_1` the least significant bit.
pub fn products(g: &[Polynomial], cap: usize) -> Result<Vec<Polynomial>, FjError> {
    let m = g.len();
    if m > cap {
        return Err(FjError::TooManyConstraints { m, cap });
    }
    if m == 0 {
        return Ok(Vec::new());
    }
    let nvars = g[0].nvars();
    // Each product reuses the one without its highest set bit.
    let mut out: Vec<Polynomial> = Vec::with_capacity((1usize << m) - 1);
    for mask in 1usize..(1 << m) {
        let top = usize::BITS - 1 - mask.leading_zeros();
        let rest = mask & !(1 << top);
        let p = if rest == 0 {
            g[top as usize].clone()
        } else {
            &out[rest - 1] * &g[top as usize]
        };
        debug_assert_eq!(p.nvars(), nvars);
        out.push(p);
    }
    Ok(out)
}

/// Default cap on `m` for `Πg` and `rank⁺` enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 12;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn p(text: &str, names: &[&str]) -> Polynomial {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        parse_polynomial(text, &names).unwrap()
    }

    fn cube_problem() -> PopProblem {
        PopProblem::inequality(p("x", &["x"]), vec![p("x^3", &["x"])]).unwrap()
    }

    const FJ1: [&str; 3] = ["x", "l0", "l1"];

    #[test]
    fn fj_cube() {
        let s = build_fj(&cube_problem());
        assert_eq!(s.polynomials.len(), 3);
        assert_eq!(s.polynomials[0], p("l0 - 3*l1*x^2", &FJ1));
        assert_eq!(s.polynomials[1], p("l1*x^3", &FJ1));
        assert_eq!(s.polynomials[2], p("1 - l0^2 - l1^2", &FJ1));
        assert_eq!(s.var_names, vec!["x1", "lambda0", "lambda1"]);
    }

    #[test]
    fn fj_without_constraints() {
        let pop = PopProblem::inequality(p("x^2", &["x"]), vec![]).unwrap();
        let s = build_fj(&pop);
        assert_eq!(s.polynomials, vec![p("2*l0*x", &["x", "l0"]), p("1 - l0^2", &["x", "l0"])]);
        let s = build_fj_plus(&pop);
        assert_eq!(s.polynomials[0], p("2*l0^2*x", &["x", "l0"]));
    }

    #[test]
    fn fj_ball() {
        let xs = ["x1", "x2"];
        let pop = PopProblem::inequality(p("x1", &xs), vec![p("1 - x1^2 - x2^2", &xs)]).unwrap();
        let s = build_fj(&pop);
        let v = ["x1", "x2", "l0", "l1"];
        assert_eq!(s.polynomials[0], p("l0 + 2*l1*x1", &v));
        assert_eq!(s.polynomials[1], p("2*l1*x2", &v));
        assert_eq!(s.polynomials[2], p("l1*(1 - x1^2 - x2^2)", &v));
        assert_eq!(s.polynomials[3], p("1 - l0^2 - l1^2", &v));
    }

    #[test]
    fn fj_plus_cube() {
        let s = build_fj_plus(&cube_problem());
        assert_eq!(s.polynomials[0], p("l0^2 - 3*l1^2*x^2", &FJ1));
        assert_eq!(s.polynomials[1], p("l1^2*x^3", &FJ1));
        assert_eq!(s.polynomials[2], p("1 - l0^2 - l1^2", &FJ1));
    }

    #[test]
    fn kkt_systems() {
        let s = build_kkt(&cube_problem());
        assert_eq!(s.polynomials, vec![p("1 - 3*l1*x^2", &["x", "l1"]), p("l1*x^3", &["x", "l1"])]);
        assert_eq!(s.multiplier_count, 1);

        let pop = PopProblem::inequality(p("x^2 + x", &["x"]), vec![]).unwrap();
        assert_eq!(build_kkt(&pop).polynomials, vec![p("2*x + 1", &["x"])]);

        let pop = PopProblem::inequality(p("x", &["x"]), vec![p("1 - x^2", &["x"])]).unwrap();
        let s = build_kkt_plus(&pop);
        assert_eq!(
            s.polynomials,
            vec![p("1 + 2*l1^2*x", &["x", "l1"]), p("l1^2*(1 - x^2)", &["x", "l1"])]
        );
    }

    #[test]
    fn product_vectors() {
        let xs = ["x"];
        let g1 = p("x", &xs);
        let g2 = p("1 - x", &xs);
        let g3 = p("x + 2", &xs);
        assert_eq!(products(&[g1.clone()], 12).unwrap(), vec![g1.clone()]);
        assert_eq!(
            products(&[g1.clone(), g2.clone()], 12).unwrap(),
            vec![g1.clone(), g2.clone(), &g1 * &g2]
        );
        let all = products(&[g1.clone(), g2.clone(), g3.clone()], 12).unwrap();
        assert_eq!(all.len(), 7);
        assert_eq!(all[6], &(&g1 * &g2) * &g3);
        assert_eq!(all[4], &g1 * &g3);
        assert!(products(&[g1.clone(), g2, g3], 2).is_err());
        assert!(products(&[], 12).unwrap().is_empty());
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("fj+".parse::<SystemVariant>().unwrap(), SystemVariant::FjPlus);
        assert_eq!("KKT".parse::<SystemVariant>().unwrap(), SystemVariant::Kkt);
        assert!("none".parse::<SystemVariant>().is_err());
    }
}
