//! Interpolation certificates and verification of claimed SOS identities.

mod certificate;
mod lagrange;
mod text;

pub use certificate::{
    certificate_from_solution, verify_certificate, verify_vanishing, Certificate, GramTerm, IdealTerm,
    VerificationReport,
};
pub use lagrange::{build_certificate_q, lagrange_basis};
pub use text::parse_certificate_text;

use crate::poly::{PolyError, Rational};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CertifyError {
    #[error("at least one value is required")]
    NoValues,
    #[error("value {0} appears more than once")]
    DuplicateValue(Rational),
    #[error("value {0} is negative")]
    NegativeValue(Rational),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite number in certificate")]
    NonFinite,
    #[error("invalid certificate JSON: {0}")]
    Json(String),
    #[error("certificate text line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}
