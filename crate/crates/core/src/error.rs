use crate::bounds::BoundError;
use crate::certify::CertifyError;
use crate::fjkkt::FjError;
use crate::poly::PolyError;
use crate::relax::RelaxError;
use crate::sdp::SdpError;

/// Any error raised by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Fj(#[from] FjError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Relax(#[from] RelaxError),
    #[error(transparent)]
    Sdp(#[from] SdpError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
}
