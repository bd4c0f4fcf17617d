//! Optimality systems, critical sets and pointwise classification.

mod classify;
mod critical;
pub mod nnls;
mod problem;
mod systems;

pub use classify::{
    classify_point, classify_points, PointClassification, DEFAULT_CLASSIFY_TOL, DEFAULT_RANK_TOL,
};
pub use critical::{
    in_critical_set, in_critical_set_plus, numerical_rank, phi_matrix, rank_plus,
    zero_in_convex_hull,
};
pub use problem::PopProblem;
pub use systems::{
    build, build_fj, build_fj_plus, build_kkt, build_kkt_plus, products, AugmentedSystem,
    SystemVariant, DEFAULT_ENUMERATION_CAP,
};

use crate::poly::PolyError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FjError {
    #[error("problem has no variables")]
    NoVariables,
    #[error("expected {expected} variables, found {found}")]
    VariableCount { expected: usize, found: usize },
    #[error("unknown system variant `{0}`")]
    UnknownVariant(String),
    #[error("{m} constraints exceed the enumeration cap of {cap}")]
    TooManyConstraints { m: usize, cap: usize },
    #[error("point violates constraint g{constraint} (value {value})")]
    InfeasiblePoint { constraint: usize, value: f64 },
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error(transparent)]
    Poly(#[from] PolyError),
}
