//! Array-processing workbench for DOA estimation with a switches-based
//! hybrid massive-MIMO receiver.
//!
//! The crate covers the full chain: physical array model and snapshot
//! synthesis ([`array`]), time-switched nested subarray schedules and their
//! difference co-arrays ([`swsha`]), LASSO recovery of the co-array virtual
//! signal via ADMM ([`sparse`]), closed-form Cramér-Rao bounds ([`crlb`]),
//! sidelobe-constrained antenna selection ([`beampattern`]), a small dense
//! MLP engine hosting the selection network and the DOA regressor
//! ([`neural`]), classical and learned estimators ([`estimators`]), and the
//! Monte-Carlo experiment harness ([`harness`]).

pub mod array;
pub mod beampattern;
pub mod crlb;
pub mod estimators;
pub mod harness;
pub mod neural;
pub mod sparse;
pub mod swsha;

pub(crate) mod linalg;
pub(crate) mod rng;

use std::fmt;

/// Crate-wide error type.
#[derive(Debug)]
pub enum Error {
    /// Input outside the documented domain (bad angle, size mismatch,
    /// violated invariant).
    Domain(String),
    /// No antenna selection satisfies the sidelobe constraint; carries the
    /// lowest peak sidelobe level encountered during the search.
    Infeasible { min_psl: f64 },
    /// A numerical procedure failed (ill conditioning, non-finite iterate,
    /// eigendecomposition failure).
    Numerical(String),
    /// Network training diverged.
    Training(String),
    /// Peak extraction on an all-zero spectrum.
    NoPeaks,
    /// Bad preset name or experiment configuration.
    Usage(String),
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Infeasible { min_psl } => write!(
                f,
                "no feasible antenna selection; minimum PSL found = {min_psl:.6}"
            ),
            Error::Numerical(msg) => write!(f, "numerical failure: {msg}"),
            Error::Training(msg) => write!(f, "training failure: {msg}"),
            Error::NoPeaks => write!(f, "spectrum is identically zero, no peaks to pick"),
            Error::Usage(msg) => write!(f, "usage error: {msg}"),
            Error::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
