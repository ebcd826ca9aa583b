//! Crate-wide error type. Every precondition violation gets its own
//! variant so callers (and the CLI) can name exactly what went wrong.

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A series was asked for coefficients beyond its stated truncation
    /// order. Truncation orders are always explicit; nothing extrapolates.
    #[error("insufficient order: need coefficients through t^{required}, series only valid to t^{available}")]
    InsufficientOrder { required: usize, available: usize },

    #[error("series is not invertible: constant term is zero")]
    NotInvertible,

    #[error("hypergeometric series does not terminate: no numerator parameter is a nonpositive integer")]
    NonTerminating,

    #[error("pole in denominator parameter: {param} produces a zero factor at term {term}")]
    PoleInDenominator { param: Scalar, term: usize },

    /// Dunkl factorial poles sit at the negative half-integers.
    #[error("dunkl parameter {mu} is a pole (mu must avoid -1/2, -3/2, ...)")]
    DunklPole { mu: Scalar },

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("duplication undefined: scaling factor a must be nonzero")]
    DuplicationUndefined,

    #[error("too few samples: confirming the identity at degree {degree} needs {required} distinct points, got {got}")]
    TooFewSamples {
        degree: usize,
        required: usize,
        got: usize,
    },

    #[error("degree {degree} exceeds the basis maximum {n_max}")]
    DegreeOverflow { degree: usize, n_max: usize },

    #[error("degenerate basis: element {index} must have degree exactly {index}")]
    DegenerateBasis { index: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Endpoint exponents must be > -1 for the integral to exist.
    #[error("non-integrable endpoint exponent {exponent} (must exceed -1)")]
    NonIntegrable { exponent: f64 },

    #[error("quadrature did not converge: requested {requested:.2e}, error estimate {achieved:.2e}")]
    QuadratureNoConvergence { requested: f64, achieved: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
