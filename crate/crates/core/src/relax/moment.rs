use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_traits::Zero;

use crate::fjkkt::PopProblem;
use crate::par::{self, ExecMode};
use crate::poly::{rational_to_f64, Monomial, MonomialBasis, Polynomial, Rational};

use super::{half_degree, minimal_order, RelaxError};

/// `Σ c_i y_i` with indices ascending and no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LinearForm {
    terms: Vec<(usize, Rational)>,
}

impl LinearForm {
    pub fn single(index: usize) -> Self {
        Self { terms: vec![(index, Rational::from_integer(1.into()))] }
    }

    pub fn from_map(map: BTreeMap<usize, Rational>) -> Self {
        Self { terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    /// `L_y(p · x^shift)` over the moment basis `moments`.
    pub fn localize(p: &Polynomial, shift: &Monomial, moments: &MonomialBasis) -> Self {
        let mut map = BTreeMap::new();
        for (m, c) in p.terms() {
            let idx = moments
                .index_of(&m.mul(shift))
                .expect("shifted monomial lies in the moment basis");
            *map.entry(idx).or_insert_with(Rational::zero) += c;
        }
        Self::from_map(map)
    }

    pub fn terms(&self) -> &[(usize, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval_f64(&self, y: &[f64]) -> f64 {
        self.terms.iter().map(|(i, c)| rational_to_f64(c) * y[*i]).sum()
    }

    pub fn eval(&self, y: &[Rational]) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (i, c)| acc + c * &y[*i])
    }
}

/// A symmetric matrix of linear forms over a monomial basis.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentBlock {
    pub label: String,
    pub basis: Vec<Monomial>,
    /// Upper triangle, row-major: `(0,0), (0,1), …, (1,1), …`.
    entries: Vec<LinearForm>,
}

impl MomentBlock {
    pub fn size(&self) -> usize {
        self.basis.len()
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let s = self.size();
        i * s - i * (i + 1) / 2 + j
    }

    pub fn entry(&self, i: usize, j: usize) -> &LinearForm {
        &self.entries[self.offset(i, j)]
    }

    /// Upper-triangle entries with their positions.
    pub fn upper(&self) -> impl Iterator<Item = (usize, usize, &LinearForm)> {
        let s = self.size();
        (0..s).flat_map(move |i| (i..s).map(move |j| (i, j))).zip(&self.entries).map(|((i, j), f)| (i, j, f))
    }

    pub fn evaluate(&self, y: &[f64]) -> DMatrix<f64> {
        let s = self.size();
        let mut m = DMatrix::zeros(s, s);
        for (i, j, f) in self.upper() {
            let v = f.eval_f64(y);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
        m
    }
}

/// `M_k(p y)` over `v_k`, entries `Σ_γ p_γ y_{α+β+γ}`.
pub fn localizing_structure(
    label: impl Into<String>,
    p: &Polynomial,
    k: u32,
    moments: &MonomialBasis,
    mode: ExecMode,
) -> Result<MomentBlock, RelaxError> {
    let basis = MonomialBasis::new(p.nvars(), k)?.elements().to_vec();
    let s = basis.len();
    let pairs: Vec<(usize, usize)> = (0..s).flat_map(|i| (i..s).map(move |j| (i, j))).collect();
    let entries = par::map(mode, &pairs, |&(i, j)| {
        LinearForm::localize(p, &basis[i].mul(&basis[j]), moments)
    });
    Ok(MomentBlock { label: label.into(), basis, entries })
}

/// `M_k(y)` as an index matrix into the moments of degree `≤ 2k`.
pub fn moment_structure(n: usize, k: u32) -> Result<Vec<Vec<usize>>, RelaxError> {
    let basis = MonomialBasis::new(n, k)?;
    let moments = MonomialBasis::new(n, 2 * k)?;
    Ok(basis
        .elements()
        .iter()
        .map(|a| {
            basis
                .elements()
                .iter()
                .map(|b| moments.index_of(&a.mul(b)).expect("degree ≤ 2k"))
                .collect()
        })
        .collect())
}

/// `min L_y(objective)` s.t. `L_y(normalization) = 1`, every block PSD and
/// every equality form zero.
#[derive(Clone, Debug)]
pub struct SdpProblem {
    pub var_names: Vec<String>,
    pub order: u32,
    pub moments: MonomialBasis,
    pub blocks: Vec<MomentBlock>,
    pub equalities: Vec<LinearForm>,
    pub objective: LinearForm,
    pub normalization: LinearForm,
}

impl SdpProblem {
    pub fn nvars(&self) -> usize {
        self.moments.nvars()
    }

    pub fn num_moments(&self) -> usize {
        self.moments.len()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(MomentBlock::size).collect()
    }

    /// `y_α = u^α`.
    pub fn point_mass(&self, u: &[f64]) -> Vec<f64> {
        self.moments.eval_f64(u)
    }

    pub fn objective_value(&self, y: &[f64]) -> f64 {
        self.objective.eval_f64(y)
    }
}

/// The moment relaxation of order `k`.
pub fn build_moment_sdp(pop: &PopProblem, k: u32) -> Result<SdpProblem, RelaxError> {
    let min = minimal_order(pop);
    if k < min {
        return Err(RelaxError::OrderTooSmall { k, min });
    }
    let n = pop.nvars();
    assemble(pop, k, &pop.f, &Polynomial::one(n))
}

/// The moment side with objective `L_y(w f)` and normalization `L_y(w) = 1`.
pub fn build_denominator_moment(pop: &PopProblem, k: u32, weight: &Polynomial) -> Result<SdpProblem, RelaxError> {
    let min = minimal_order(pop);
    if k < min {
        return Err(RelaxError::OrderTooSmall { k, min });
    }
    assemble(pop, k, &(weight * &pop.f), weight)
}

fn assemble(pop: &PopProblem, k: u32, objective: &Polynomial, normalization: &Polynomial) -> Result<SdpProblem, RelaxError> {
    let n = pop.nvars();
    let mode = ExecMode::default();
    let moments = MonomialBasis::new(n, 2 * k)?;
    let one = Monomial::one(n);
    let mut blocks = vec![localizing_structure("moment", &Polynomial::one(n), k, &moments, mode)?];
    for (j, g) in pop.g.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let label = format!("g{}", j + 1);
        blocks.push(localizing_structure(label, g, k - half_degree(g), &moments, mode)?);
    }

    let mut equalities: Vec<LinearForm> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for h in &pop.h {
        let shifts = MonomialBasis::new(n, 2 * (k - half_degree(h)))?;
        for s in shifts.elements() {
            let form = LinearForm::localize(h, s, &moments);
            if !form.is_zero() && seen.insert(form.clone()) {
                equalities.push(form);
            }
        }
    }

    Ok(SdpProblem {
        var_names: pop.var_names.clone(),
        order: k,
        objective: LinearForm::localize(objective, &one, &moments),
        normalization: LinearForm::localize(normalization, &one, &moments),
        moments,
        blocks,
        equalities,
    })
}
