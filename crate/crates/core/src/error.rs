use alloc::string::String;
use core::fmt;

use num_complex::Complex64;

/// Failures raised by the evaluators in this crate.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A gamma factor was evaluated at (or within tolerance of) one of its poles.
    Pole { at: Complex64 },
    /// The pole families of a Mellin-Barnes integrand interleave, so no vertical
    /// line separates them.
    NoContour,
    /// The integrand did not decay along the truncated contour.
    Divergence { height: f64 },
    /// The transform was requested outside its strip of analyticity.
    Strip { s: Complex64 },
    /// A complex power would have to be taken across the principal branch cut.
    BranchCut { base: Complex64 },
    /// An argument lies outside the mathematical domain of the operation.
    Domain(String),
    /// A parameter list is malformed or violates a sign requirement.
    Parameter(String),
    /// An inverted density came out clearly negative.
    InversionQuality { x: f64, value: f64 },
    /// Adaptive quadrature exhausted its subdivision budget.
    Quadrature { abs_err: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Pole { at } => write!(f, "gamma pole at {}{:+}i", at.re, at.im),
            Error::NoContour => f.write_str("pole families interleave; no separating contour"),
            Error::Divergence { height } => {
                write!(f, "integrand does not decay along the contour (height {height:e})")
            }
            Error::Strip { s } => write!(f, "s = {}{:+}i is outside the strip", s.re, s.im),
            Error::BranchCut { base } => {
                write!(f, "complex power across the branch cut at {}{:+}i", base.re, base.im)
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Parameter(msg) => write!(f, "parameter error: {msg}"),
            Error::InversionQuality { x, value } => {
                write!(f, "inverted density {value:e} at x = {x} is negative beyond tolerance")
            }
            Error::Quadrature { abs_err } => {
                write!(f, "quadrature subdivision limit reached (error estimate {abs_err:e})")
            }
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    /// True for the contour and divergence family (mapped to exit status 3 by the CLI).
    pub fn is_numerical(&self) -> bool {
        !matches!(self, Error::Domain(_) | Error::Parameter(_))
    }
}
