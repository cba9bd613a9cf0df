use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("prime must be odd, got {0}")]
    EvenPrime(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a quadratic residue modulo p")]
    NonResidue(String),
    #[error("element is not a p-adic unit")]
    NotAUnit,
    #[error("division by an element that is zero to the available precision")]
    DivisionByZero,
    #[error("discriminant {0} is not split at p")]
    NotSplit(String),
    #[error("discriminant {0} must be positive, non-square and congruent to 0 or 1 mod 4")]
    BadDiscriminant(String),
    #[error("discriminant {0} is a perfect square")]
    SquareDiscriminant(String),
    #[error("form is not a Heegner form: {0}")]
    NotHeegner(String),
    #[error("p divides the discriminant {0}")]
    DiscDivisibleByP(String),
    #[error("endpoints of the modular symbol coincide")]
    EqualEndpoints,
    #[error("point does not lie in the p-adic upper half plane")]
    EvaluationOutsideDomain,
    #[error("point lies on the boundary P1(Qp)")]
    OnBoundary,
    #[error("evaluation point is a pole to working precision")]
    PoleHit,
    #[error("edge is not positively oriented")]
    OddOrientation,
    #[error("requested level {0} is too shallow")]
    LevelTooShallow(i64),
    #[error("integration endpoint is a root of the form")]
    EndpointIsRoot,
    #[error("invalid weight {0}")]
    InvalidWeight(i64),
    #[error("invalid configuration field `{field}`: {msg}")]
    ConfigInvalid { field: String, msg: String },
    #[error("precision {got} below requested {wanted}")]
    PrecisionLoss { got: i64, wanted: i64 },
    #[error("input does not satisfy the cocycle relations: {0}")]
    NotACocycle(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// The variant name.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EvenPrime(_) => "EvenPrime",
            Error::NotPrime(_) => "NotPrime",
            Error::NonResidue(_) => "NonResidue",
            Error::NotAUnit => "NotAUnit",
            Error::DivisionByZero => "DivisionByZero",
            Error::NotSplit(_) => "NotSplit",
            Error::BadDiscriminant(_) => "BadDiscriminant",
            Error::SquareDiscriminant(_) => "SquareDiscriminant",
            Error::NotHeegner(_) => "NotHeegner",
            Error::DiscDivisibleByP(_) => "DiscDivisibleByP",
            Error::EqualEndpoints => "EqualEndpoints",
            Error::EvaluationOutsideDomain => "EvaluationOutsideDomain",
            Error::OnBoundary => "OnBoundary",
            Error::PoleHit => "PoleHit",
            Error::OddOrientation => "OddOrientation",
            Error::LevelTooShallow(_) => "LevelTooShallow",
            Error::EndpointIsRoot => "EndpointIsRoot",
            Error::InvalidWeight(_) => "InvalidWeight",
            Error::ConfigInvalid { .. } => "ConfigInvalid",
            Error::PrecisionLoss { .. } => "PrecisionLoss",
            Error::NotACocycle(_) => "NotACocycle",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
        }
    }

    pub fn config(field: &str, msg: impl Into<String>) -> Self {
        Error::ConfigInvalid { field: field.to_string(), msg: msg.into() }
    }
}
