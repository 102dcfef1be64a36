use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NonPrimeP(u32),
    #[error("polynomial {0:?} is reducible over the prime field")]
    ReduciblePolynomial(Vec<u32>),
    #[error("invalid defining polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("no default polynomial for p={p}, k={k}; supply one")]
    UnsupportedSize { p: u32, k: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("element code {code} out of range for a field of order {q}")]
    ElementOutOfRange { code: u32, q: u32 },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("matrices are not SL-equivalent")]
    NotEquivalent,
    #[error("the only nonzero element of F_2 is not a sum of two units")]
    TrivialCaseF2,
    #[error("the zero matrix needs three SL summands for odd n in odd characteristic")]
    ZeroNeedsThree,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("connection set is not symmetric; the digraph is directed")]
    DirectedGraph,
    #[error("parameters do not define a feasible strongly regular spectrum")]
    InfeasibleParams,
    #[error("delta must be nonzero")]
    ZeroDelta,
    #[error("alpha must be nonzero")]
    ZeroAlpha,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable identifier used in JSON error records.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonPrimeP(_) => "non_prime_p",
            Error::ReduciblePolynomial(_) => "reducible_polynomial",
            Error::InvalidPolynomial(_) => "invalid_polynomial",
            Error::UnsupportedSize { .. } => "unsupported_size",
            Error::ZeroInverse => "zero_inverse",
            Error::FieldMismatch => "field_mismatch",
            Error::ElementOutOfRange { .. } => "element_out_of_range",
            Error::SingularMatrix => "singular_matrix",
            Error::DimensionMismatch(..) => "dimension_mismatch",
            Error::TooLarge(_) => "too_large",
            Error::NotEquivalent => "not_equivalent",
            Error::TrivialCaseF2 => "trivial_case_f2",
            Error::ZeroNeedsThree => "zero_needs_three",
            Error::Unsupported(_) => "unsupported",
            Error::DirectedGraph => "directed_graph",
            Error::InfeasibleParams => "infeasible_params",
            Error::ZeroDelta => "zero_delta",
            Error::ZeroAlpha => "zero_alpha",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
