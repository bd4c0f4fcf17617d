//! Moment and sum-of-squares relaxations.
//!
//! Moment variables `y` are indexed by the monomials of degree `≤ 2k` in
//! graded-lex order, so `y[0]` is `y_0`. Every matrix entry is an exact
//! rational linear form in `y`.

mod moment;
mod sos;

pub use moment::{
    build_denominator_moment, build_moment_sdp, localizing_structure, moment_structure,
    LinearForm, MomentBlock, SdpProblem,
};
pub use sos::{build_sos_sdp, gram_of_squares, GramBlock, IdealBlock, SosEquation, SosProgram};

use crate::fjkkt::{self, FjError, PopProblem, SystemVariant};
use crate::poly::{Degree, PolyError, Polynomial};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RelaxError {
    #[error("relaxation order {k} is below the minimal admissible order {min}")]
    OrderTooSmall { k: u32, min: u32 },
    #[error("the denominator relaxation needs a denominator polynomial")]
    MissingDenominator,
    #[error("the denominator must be a nonconstant polynomial")]
    ConstantDenominator,
    #[error("2k = {two_k} is below deg f = {deg_f}")]
    ObjectiveDegreeTooHigh { two_k: u32, deg_f: u32 },
    #[error("equality constraints cannot be combined with an augmented optimality system")]
    EqualitiesWithAugmentation,
    #[error(transparent)]
    Fj(#[from] FjError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `⌈deg p / 2⌉`, with the zero polynomial counting as degree 0.
pub fn half_degree(p: &Polynomial) -> u32 {
    p.degree().or_zero().div_ceil(2)
}

/// Smallest admissible relaxation order: `max(⌈deg f/2⌉, d_j, r_t)`.
pub fn minimal_order(pop: &PopProblem) -> u32 {
    std::iter::once(&pop.f)
        .chain(&pop.g)
        .chain(&pop.h)
        .map(half_degree)
        .max()
        .unwrap_or(0)
}

/// Replaces `pop` by the problem over `(x, multipliers)` whose equalities are
/// the entries of the chosen optimality system and whose inequalities are `g`
/// or the product vector `Πg`.
pub fn augment_problem(
    pop: &PopProblem,
    variant: SystemVariant,
    use_products: bool,
) -> Result<PopProblem, RelaxError> {
    if !pop.h.is_empty() {
        return Err(RelaxError::EqualitiesWithAugmentation);
    }
    let system = fjkkt::build(pop, variant);
    let extra = system.multiplier_count;
    let g = if use_products {
        fjkkt::products(&pop.g, fjkkt::DEFAULT_ENUMERATION_CAP)?
    } else {
        pop.g.clone()
    };
    let lift = |p: &Polynomial| p.extend_vars(extra);
    Ok(PopProblem::new(
        system.var_names,
        lift(&pop.f),
        g.iter().map(lift).collect(),
        system.polynomials,
        pop.theta.as_ref().map(lift),
    )?)
}

/// `η(k, f, θ) = 2⌊(2k - deg f) / (2 deg θ)⌋`.
pub fn eta(k: u32, f: &Polynomial, theta: &Polynomial) -> Result<u32, RelaxError> {
    let deg_theta = match theta.degree() {
        Degree::Finite(d) if d > 0 => d,
        _ => return Err(RelaxError::ConstantDenominator),
    };
    let deg_f = f.degree().or_zero();
    if 2 * k < deg_f {
        return Err(RelaxError::ObjectiveDegreeTooHigh { two_k: 2 * k, deg_f });
    }
    Ok(2 * ((2 * k - deg_f) / (2 * deg_theta)))
}

/// Moment and SOS sides of the relaxation with denominator `θ^η`.
pub fn build_denominator_sdp(pop: &PopProblem, k: u32) -> Result<(SdpProblem, SosProgram), RelaxError> {
    let theta = pop.theta.as_ref().ok_or(RelaxError::MissingDenominator)?;
    let e = eta(k, &pop.f, theta)?;
    let weight = theta.pow(e);
    let moment = build_denominator_moment(pop, k, &weight)?;
    let sos = sos::build_sos_weighted(pop, k, &weight)?;
    Ok((moment, sos))
}
