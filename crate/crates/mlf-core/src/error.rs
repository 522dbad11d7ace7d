use core::fmt;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Error {
    /// α ≤ 0 or a non-finite parameter.
    InvalidParams,
    /// A tolerance, order or range argument is out of its domain.
    InvalidArgument(&'static str),
    /// Overflow that cannot be avoided on the chosen path.
    NonFinite,
    /// Asymptotic expansion requested too close to the origin.
    DomainTooSmall,
    BracketFailure,
    /// |E| fell below the floor on a counting contour.
    ContourThroughZero,
    IllConditioned,
    DivisionByZeroSeries,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams => write!(f, "invalid parameters: alpha must be positive and finite"),
            Error::InvalidArgument(what) => write!(f, "invalid argument: {what}"),
            Error::NonFinite => write!(f, "evaluation overflowed"),
            Error::DomainTooSmall => write!(f, "|z| below the asymptotic radius"),
            Error::BracketFailure => write!(f, "no sign change in the root bracket"),
            Error::ContourThroughZero => write!(f, "contour passes through (or too near) a zero"),
            Error::IllConditioned => write!(f, "fit residual too large"),
            Error::DivisionByZeroSeries => write!(f, "leading jet coefficient is zero"),
        }
    }
}

impl core::error::Error for Error {}
