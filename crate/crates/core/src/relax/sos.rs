use std::collections::BTreeMap;

use num_traits::Zero;

use crate::fjkkt::PopProblem;
use crate::poly::{Monomial, MonomialBasis, Polynomial, Rational};

use super::{half_degree, minimal_order, RelaxError};

/// A Gram matrix variable `G` contributing `generator · vᵀ G v`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramBlock {
    pub label: String,
    pub generator: Polynomial,
    pub basis: Vec<Monomial>,
}

/// Free coefficients `u` contributing `h · Σ u_β x^β`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealBlock {
    pub label: String,
    pub h: Polynomial,
    pub basis: Vec<Monomial>,
}

/// Coefficient of one monomial in
/// `target = ξ·xi_weight + Σ gen·vᵀGv + Σ h·uᵀv`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SosEquation {
    /// `(block, i, j, c)` with `i ≤ j`: contributes `c·(G_ij + G_ji)`, or
    /// `c·G_ii` on the diagonal.
    pub gram: Vec<(usize, usize, usize, Rational)>,
    /// `(block, β, c)`: contributes `c·u_β`.
    pub ideal: Vec<(usize, usize, Rational)>,
    pub xi: Rational,
    pub rhs: Rational,
}

/// `max ξ` such that `target - ξ·xi_weight` is a weighted sum of squares
/// plus an ideal combination, as coefficient-matching equations.
#[derive(Clone, Debug)]
pub struct SosProgram {
    pub var_names: Vec<String>,
    pub order: u32,
    /// One equation per monomial of degree `≤ 2k`, in this order.
    pub monomials: MonomialBasis,
    pub gram: Vec<GramBlock>,
    pub ideal: Vec<IdealBlock>,
    pub target: Polynomial,
    pub xi_weight: Polynomial,
    pub equations: Vec<SosEquation>,
}

impl SosProgram {
    pub fn block_sizes(&self) -> Vec<usize> {
        self.gram.iter().map(|b| b.basis.len()).collect()
    }

    pub fn num_ideal_coefficients(&self) -> usize {
        self.ideal.iter().map(|b| b.basis.len()).sum()
    }
}

/// The SOS relaxation of order `k`: Gram bases `v_{k-d_j}` and ideal
/// multipliers over `v_{2(k-r_t)}`.
pub fn build_sos_sdp(pop: &PopProblem, k: u32) -> Result<SosProgram, RelaxError> {
    build_sos_weighted(pop, k, &Polynomial::one(pop.nvars()))
}

pub(super) fn build_sos_weighted(pop: &PopProblem, k: u32, weight: &Polynomial) -> Result<SosProgram, RelaxError> {
    let min = minimal_order(pop);
    if k < min {
        return Err(RelaxError::OrderTooSmall { k, min });
    }
    let n = pop.nvars();
    let monomials = MonomialBasis::new(n, 2 * k)?;
    let mut equations = vec![SosEquation::default(); monomials.len()];
    let locate = |m: &Monomial| monomials.index_of(m).expect("degree ≤ 2k");

    let mut gram = vec![GramBlock {
        label: "sigma0".into(),
        generator: Polynomial::one(n),
        basis: MonomialBasis::new(n, k)?.elements().to_vec(),
    }];
    for (j, g) in pop.g.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        gram.push(GramBlock {
            label: format!("sigma{}", j + 1),
            generator: g.clone(),
            basis: MonomialBasis::new(n, k - half_degree(g))?.elements().to_vec(),
        });
    }
    for (b, block) in gram.iter().enumerate() {
        let s = block.basis.len();
        for i in 0..s {
            for j in i..s {
                let shift = block.basis[i].mul(&block.basis[j]);
                for (m, c) in block.generator.terms() {
                    equations[locate(&m.mul(&shift))].gram.push((b, i, j, c.clone()));
                }
            }
        }
    }

    let mut ideal = Vec::new();
    for (t, h) in pop.h.iter().enumerate() {
        if h.is_zero() {
            continue;
        }
        ideal.push(IdealBlock {
            label: format!("h{}", t + 1),
            h: h.clone(),
            basis: MonomialBasis::new(n, 2 * (k - half_degree(h)))?.elements().to_vec(),
        });
    }
    for (b, block) in ideal.iter().enumerate() {
        for (beta, shift) in block.basis.iter().enumerate() {
            for (m, c) in block.h.terms() {
                equations[locate(&m.mul(shift))].ideal.push((b, beta, c.clone()));
            }
        }
    }

    let target = weight * &pop.f;
    for (m, c) in target.terms() {
        equations[locate(m)].rhs = c.clone();
    }
    for (m, c) in weight.terms() {
        equations[locate(m)].xi = c.clone();
    }
    merge_duplicates(&mut equations);

    Ok(SosProgram {
        var_names: pop.var_names.clone(),
        order: k,
        monomials,
        gram,
        ideal,
        target,
        xi_weight: weight.clone(),
        equations,
    })
}

fn merge_duplicates(equations: &mut [SosEquation]) {
    for eq in equations {
        let mut g: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
        for (b, i, j, c) in eq.gram.drain(..) {
            *g.entry((b, i, j)).or_insert_with(Rational::zero) += c;
        }
        eq.gram = g.into_iter().filter(|(_, c)| !c.is_zero()).map(|((b, i, j), c)| (b, i, j, c)).collect();
        let mut u: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (b, beta, c) in eq.ideal.drain(..) {
            *u.entry((b, beta)).or_insert_with(Rational::zero) += c;
        }
        eq.ideal = u.into_iter().filter(|(_, c)| !c.is_zero()).map(|((b, beta), c)| (b, beta, c)).collect();
    }
}

impl SosEquation {
    /// Left-hand side at a candidate point.
    pub fn lhs(&self, gram: &[Vec<Vec<Rational>>], ideal: &[Vec<Rational>], xi: &Rational) -> Rational {
        let mut acc = &self.xi * xi;
        for (b, i, j, c) in &self.gram {
            let g = &gram[*b];
            if i == j {
                acc += c * &g[*i][*j];
            } else {
                acc += c * (&g[*i][*j] + &g[*j][*i]);
            }
        }
        for (b, beta, c) in &self.ideal {
            acc += c * &ideal[*b][*beta];
        }
        acc
    }
}

/// Exact Gram matrix of `Σ_i w_i p_i²` over `basis`, for tests and examples.
pub fn gram_of_squares(squares: &[(Rational, &Polynomial)], basis: &[Monomial]) -> Vec<Vec<Rational>> {
    let s = basis.len();
    let mut g = vec![vec![Rational::zero(); s]; s];
    for (w, p) in squares {
        let v: Vec<Rational> = basis.iter().map(|m| p.coeff(m)).collect();
        for i in 0..s {
            for j in 0..s {
                g[i][j] += w * &v[i] * &v[j];
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use num_traits::One;

    use super::*;
    use crate::poly::parse_polynomial;

    fn p(text: &str) -> Polynomial {
        parse_polynomial(text, &["x".to_string()]).unwrap()
    }

    fn half() -> Rational {
        Rational::new(1.into(), 2.into())
    }

    #[test]
    fn hand_certificate_satisfies_every_equation() {
        // 1 + x = ½(1 + x)² + ½(1 - x²)
        let pop = PopProblem::inequality(p("1 + x"), vec![p("1 - x^2")]).unwrap();
        let sos = build_sos_sdp(&pop, 1).unwrap();
        assert_eq!(sos.block_sizes(), vec![2, 1]);
        let g0 = gram_of_squares(&[(half(), &p("1 + x"))], &sos.gram[0].basis);
        let g1 = vec![vec![half()]];
        let xi = Rational::zero();
        for eq in &sos.equations {
            assert_eq!(eq.lhs(&[g0.clone(), g1.clone()], &[], &xi), eq.rhs);
        }
    }

    #[test]
    fn square_objective() {
        let pop = PopProblem::inequality(p("x^2"), vec![]).unwrap();
        let sos = build_sos_sdp(&pop, 1).unwrap();
        let g0 = vec![vec![Rational::zero(), Rational::zero()], vec![Rational::zero(), Rational::one()]];
        for eq in &sos.equations {
            assert_eq!(eq.lhs(&[g0.clone()], &[], &Rational::zero()), eq.rhs);
        }
    }

    #[test]
    fn equation_count() {
        let pop = PopProblem::inequality(p("x"), vec![]).unwrap();
        assert_eq!(build_sos_sdp(&pop, 2).unwrap().equations.len(), 5);
    }

    #[test]
    fn ideal_multipliers_cover_degree_2k() {
        let pop = PopProblem::new(vec!["x".into()], p("x"), vec![], vec![p("x^2 - 1")], None).unwrap();
        let sos = build_sos_sdp(&pop, 2).unwrap();
        // r = 1, multiplier basis of degree ≤ 2(k - r) = 2
        assert_eq!(sos.ideal[0].basis.len(), 3);
        // x + 1 = ½(x + 1)² - ½(x² - 1): ξ = 0 with u = -½.
        let g0 = gram_of_squares(&[(half(), &p("1 + x"))], &sos.gram[0].basis);
        let u = vec![-half(), Rational::zero(), Rational::zero()];
        let pop2 = PopProblem::new(vec!["x".into()], p("x + 1"), vec![], vec![p("x^2 - 1")], None).unwrap();
        let sos2 = build_sos_sdp(&pop2, 2).unwrap();
        for eq in &sos2.equations {
            assert_eq!(eq.lhs(&[g0.clone()], &[u.clone()], &Rational::zero()), eq.rhs);
        }
    }
}
