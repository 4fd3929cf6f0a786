use thiserror::Error;

use crate::obstruction::Obstruction;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation undefined for the zero operator")]
    ZeroOperator,
    #[error("operation undefined for the zero form")]
    ZeroForm,
    #[error("separability undefined for constants")]
    SeparabilityUndefined,
    #[error("division defined for univariate operators only")]
    NotUnivariate,
    #[error("divisor must be monic of first order in a single derivation: {0}")]
    InvalidDivisor(String),
    #[error("singular change of derivations")]
    SingularMatrix,
    #[error("only constant changes supported")]
    NonConstantChange,
    #[error("operator contains d_x: {0}")]
    ContainsDx(String),
    #[error("{divisor} does not divide the symbol {symbol}")]
    DivisorDoesNotDivide { divisor: String, symbol: String },
    #[error("normalize first: {0}")]
    NotNormalized(String),
    #[error("Laplace step undefined; chain already terminated (K = 0)")]
    LaplaceTerminated,
    #[error("operator is not of the form Dx*Dy + a*Dx + b*Dy + c: {0}")]
    NotHyperbolic(String),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("unnormalizable over Q: {0}")]
    Unnormalizable(String),
    #[error("identity check failed: {0}")]
    VerificationFailed(String),
    #[error("{0}")]
    Parse(#[from] crate::io::ParseError),
    #[error("obstruction: {0}")]
    Obstructed(Obstruction),
}

impl From<Obstruction> for Error {
    fn from(o: Obstruction) -> Self {
        Error::Obstructed(o)
    }
}
