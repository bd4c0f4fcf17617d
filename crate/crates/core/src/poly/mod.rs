//! Sparse multivariate polynomials over `ℚ`.

mod basis;
mod monomial;
mod parse;
mod polynomial;
mod scale;

use thiserror::Error;

pub use basis::{binomial, MonomialBasis};
pub use monomial::Monomial;
pub use parse::{parse_monomial, parse_polynomial};
pub use polynomial::{format_rational, rational_from_f64, rational_to_f64, Degree, Polynomial};
pub use scale::{
    homogenize_scale, max_norm_estimate, max_norm_estimate_with, HomogenizedPolynomial, QSqrt2,
};

/// Exact coefficient type.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("a monomial basis needs at least one variable")]
    NoVariables,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("grid needs at least 2 points per axis, got {0}")]
    GridTooCoarse(usize),
    #[error("grid has too many points")]
    GridTooLarge,
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
}

/// Default variable names `x1, …, xn`.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}
