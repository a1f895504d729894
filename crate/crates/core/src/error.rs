use alloc::string::String;

/// Errors reported by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("pole at {pole_re}+{pole_im}i must lie strictly outside the closed unit disc (|ζ| = {modulus})")]
    PoleInsideDisc {
        pole_re: f64,
        pole_im: f64,
        modulus: f64,
    },
    #[error("poles closer than {min_separation:e} (distance {distance:e}); merge them into a higher multiplicity")]
    ConfluentPoles { distance: f64, min_separation: f64 },
    #[error("evaluation point within {distance:e} of a pole")]
    PoleProximity { distance: f64 },
    #[error("Blaschke zero of modulus {modulus} is not inside the unit disc")]
    ZeroOutsideDisc { modulus: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("weight evaluated to {value} at ρ = {rho}; weights must be nonnegative")]
    NegativeWeight { rho: f64, value: f64 },
    #[error("{what} did not converge: achieved error estimate {achieved:e}, requested {requested:e}")]
    NonConvergence {
        what: &'static str,
        achieved: f64,
        requested: f64,
    },
    #[error("Gram matrix is numerically singular (condition estimate {condition:e}); use a smaller n")]
    Conditioning { condition: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("norm of the input vanishes; the ratio is undefined")]
    ZeroNorm,
    #[error("non-finite intermediate value in {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::Error::InvalidArgument(alloc::format!($($arg)*))
    };
}

macro_rules! domain {
    ($($arg:tt)*) => {
        $crate::error::Error::Domain(alloc::format!($($arg)*))
    };
}

pub(crate) use domain;
pub(crate) use invalid;
