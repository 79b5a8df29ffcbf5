use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Variants fall in three groups: invalid input (the caller's fault),
/// computation limits (precision or convergence), and verification failures
/// (a structural claim about a polynomial turned out to be false).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quotient is not a polynomial (division leaves a nonzero remainder)")]
    NonPolynomialQuotient,
    #[error("coefficient {index} is negative")]
    NegativeCoefficient { index: usize },
    #[error("the zero polynomial does not define a distribution")]
    ZeroPolynomial,
    #[error("series has constant term {found}, expected {expected}")]
    BadConstantTerm { expected: String, found: String },
    #[error("index ({row}, {col}) out of range")]
    IndexOutOfRange { row: usize, col: usize },
    #[error("invalid factored spec: {0}")]
    InvalidFactoredSpec(String),
    #[error("distribution has zero variance")]
    ZeroVariance,
    #[error("polynomial is not palindromic")]
    NotPalindromic,
    #[error("polynomial has odd degree")]
    OddDegree,
    #[error("polynomial has even degree")]
    EvenDegree,
    #[error("roots off the unit circle: largest | |z| - 1 | = {max_deviation:e}")]
    RootsOffCircle { max_deviation: f64 },
    #[error("polynomial vanishes at z = 1")]
    DegenerateAtOne,
    #[error("unresolved root multiplicity: {0}")]
    UnresolvedMultiplicity(String),
    #[error("root iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("{what}: discrepancy {discrepancy:e} exceeds tolerance {tolerance:e}")]
    MismatchBeyondTolerance {
        what: String,
        discrepancy: f64,
        tolerance: f64,
    },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("not implemented: {0}")]
    NotImplemented(String),
    #[error("no known limit law for {0}")]
    NoKnownLimit(String),
    #[error("degenerate spec: all numerator and denominator exponents cancel")]
    DegenerateSpec,
    #[error("unknown reference law `{0}`")]
    UnknownLaw(String),
}

impl Error {
    /// Whether the error signals that a structural claim (root-unitarity,
    /// a dual-route identity) failed, as opposed to bad input.
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            Error::RootsOffCircle { .. }
                | Error::DegenerateAtOne
                | Error::UnresolvedMultiplicity(_)
                | Error::MismatchBeyondTolerance { .. }
        )
    }

    /// Stable machine-readable tag, used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonPolynomialQuotient => "NonPolynomialQuotient",
            Error::NegativeCoefficient { .. } => "NegativeCoefficient",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::BadConstantTerm { .. } => "BadConstantTerm",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::InvalidFactoredSpec(_) => "InvalidFactoredSpec",
            Error::ZeroVariance => "ZeroVariance",
            Error::NotPalindromic => "NotPalindromic",
            Error::OddDegree => "OddDegree",
            Error::EvenDegree => "EvenDegree",
            Error::RootsOffCircle { .. } => "RootsOffCircle",
            Error::DegenerateAtOne => "DegenerateAtOne",
            Error::UnresolvedMultiplicity(_) => "UnresolvedMultiplicity",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::MismatchBeyondTolerance { .. } => "MismatchBeyondTolerance",
            Error::InvalidParams(_) => "InvalidParams",
            Error::NotImplemented(_) => "NotImplemented",
            Error::NoKnownLimit(_) => "NoKnownLimit",
            Error::DegenerateSpec => "DegenerateSpec",
            Error::UnknownLaw(_) => "UnknownLaw",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
