//! Exact polynomial optimization through Fritz John and KKT augmented
//! moment-SOS hierarchies.
//!
//! The crate is organised bottom-up:
//!
//! - [`poly`]: sparse polynomials with exact rational coefficients.
//! - [`fjkkt`]: problem type, the augmented optimality systems
//!   (`h_FJ`, `h_FJ⁺`, `h_KKT`, `h_KKT⁺`), product vectors and pointwise
//!   classification of Fritz John / KKT points and critical sets.
//! - [`bounds`]: the explicit degree bounds, with tower-of-exponentials
//!   arithmetic for the astronomically large ones.
//! - [`relax`]: moment and SOS relaxations (plain and with a denominator).
//! - [`sdp`]: an embedded primal-dual interior-point SDP solver, SDPA export
//!   and the hierarchy driver.
//! - [`certify`]: interpolation certificates and certificate verification.

pub mod bounds;
pub mod certify;
pub mod fjkkt;
pub mod par;
pub mod poly;
pub mod relax;
pub mod sdp;

mod error;

pub use error::Error;
pub use fjkkt::PopProblem;
pub use poly::{Monomial, MonomialBasis, Polynomial, Rational};
