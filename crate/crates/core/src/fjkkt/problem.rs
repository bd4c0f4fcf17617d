use crate::poly::{default_names, Degree, Polynomial};

use super::FjError;

/// `min f(x)` subject to `g_j(x) ≥ 0`, `h_t(x) = 0`, optionally with a
/// denominator `θ` for the denominator relaxations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PopProblem {
    pub f: Polynomial,
    pub g: Vec<Polynomial>,
    pub h: Vec<Polynomial>,
    pub theta: Option<Polynomial>,
    pub var_names: Vec<String>,
}

impl PopProblem {
    pub fn new(
        var_names: Vec<String>,
        f: Polynomial,
        g: Vec<Polynomial>,
        h: Vec<Polynomial>,
        theta: Option<Polynomial>,
    ) -> Result<Self, FjError> {
        let n = var_names.len();
        if n == 0 {
            return Err(FjError::NoVariables);
        }
        let check = |p: &Polynomial| {
            if p.nvars() != n {
                Err(FjError::VariableCount { expected: n, found: p.nvars() })
            } else {
                Ok(())
            }
        };
        check(&f)?;
        g.iter().try_for_each(check)?;
        h.iter().try_for_each(check)?;
        if let Some(t) = &theta {
            check(t)?;
        }
        Ok(Self { f, g, h, theta, var_names })
    }

    /// Problem with only inequality constraints and default names `x1..xn`.
    pub fn inequality(f: Polynomial, g: Vec<Polynomial>) -> Result<Self, FjError> {
        let names = default_names(f.nvars());
        Self::new(names, f, g, Vec::new(), None)
    }

    pub fn with_theta(mut self, theta: Polynomial) -> Result<Self, FjError> {
        if theta.nvars() != self.nvars() {
            return Err(FjError::VariableCount { expected: self.nvars(), found: theta.nvars() });
        }
        self.theta = Some(theta);
        Ok(self)
    }

    pub fn nvars(&self) -> usize {
        self.var_names.len()
    }

    pub fn num_inequalities(&self) -> usize {
        self.g.len()
    }

    /// `d`: the largest degree among `f` and the `g_j` (zero polynomials
    /// count as degree 0).
    pub fn degree_bound(&self) -> u32 {
        std::iter::once(&self.f)
            .chain(&self.g)
            .map(|p| p.degree())
            .max()
            .unwrap_or(Degree::NegInfinity)
            .or_zero()
    }

    /// Whether `x` satisfies every constraint within `tol`.
    pub fn is_feasible(&self, x: &[f64], tol: f64) -> Result<bool, FjError> {
        for g in &self.g {
            if g.eval_f64(x)? < -tol {
                return Ok(false);
            }
        }
        for h in &self.h {
            if h.eval_f64(x)?.abs() > tol {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
