use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("lattice sum with k + i = {0} < 3 does not converge absolutely")]
    DivergentSpec(i64),
    #[error("evaluation point lies on the lattice")]
    PoleAtLatticePoint,
    #[error("two algebraic candidates lie within twice the tolerance: {0} and {1}")]
    AmbiguousDetection(String, String),
    #[error("ideal is not coprime to the modulus")]
    NotCoprime,
    #[error("modulus norm {0} exceeds the enumeration cap {1}")]
    ModulusTooLarge(u64, u64),
    #[error("unsupported weight (i, k) = ({0}, {1}); need 0 <= -i < k")]
    UnsupportedWeight(i64, i64),
    #[error("linear system is rank deficient ({0} samples for {1} unknowns)")]
    RankDeficient(usize, usize),
    #[error("coefficient {0} was not recognised as a rational number")]
    NonRationalCoefficient(String),
    #[error("theta paths disagree: difference {0:e} exceeds combined radius {1:e}")]
    PathDisagreement(f64, f64),
    #[error("Taylor remainder bound {0:e} exceeds tolerance {1:e}")]
    TruncationInsufficient(f64, f64),
    #[error("direct summation refused: k - w/2 = {0} <= 1; use the Eisenstein route")]
    Divergent(f64),
    #[error("no algebraic number of bounded height recognised (raw value {0})")]
    DetectionFailed(String),
    #[error("curve is singular")]
    SingularCurve,
    #[error("f(T) is not a Frobenius lift for the given uniformizer: {0}")]
    InvalidFrobeniusLift(String),
    #[error("series has no unit leading coefficient")]
    NonUnitInput,
    #[error("norm coefficients do not descend to the base ring: {0}")]
    DescentFailure(String),
    #[error("preset error: {0}")]
    PresetParse(String),
    #[error("unknown suite {0}")]
    UnknownSuite(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
