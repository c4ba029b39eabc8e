use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime modulus in [2, 2^62)")]
    NotPrime(u64),
    #[error("operands live over different prime fields ({0} vs {1})")]
    ModulusMismatch(u64, u64),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd of two zero polynomials is undefined")]
    ZeroGcd,
    #[error("degree {degree} exceeds the bound {bound}")]
    DegreeBound { degree: usize, bound: usize },
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("modulus must have positive degree")]
    ConstantModulus,
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("polynomial is reducible")]
    Reducible,
    #[error("Tr(x_0) = 0 and p divides d = {0}: no shift of the base polynomial is available")]
    ZeroBaseTrace(usize),
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(usize, usize),
    #[error("level {level} is out of range for a tower of height {height}")]
    LevelOutOfRange { level: usize, height: usize },
    #[error("zero is not invertible")]
    NotInvertible,
    #[error("missing precomputed table: {0}")]
    MissingTable(String),
    #[error("exponent {n} is not admissible (need n < d or n = p^j d)")]
    InadmissibleExponent { n: u64 },
    #[error("equation X^p - X = a has no solution: absolute trace of a is nonzero")]
    NonzeroTrace,
    #[error("right-hand side is not in the image of the approximate Artin-Schreier map")]
    NotInImage,
    #[error("element is not an Artin-Schreier generator of the level")]
    NotArtinSchreier,
    #[error("element does not generate the extension")]
    NonGenerating,
    #[error("generator at level {0} has zero absolute trace and does not define a field extension")]
    DegenerateGenerator(usize),
    #[error("isomorphism images are missing up to level {0}")]
    MissingImages(usize),
    #[error("dense oracle size {size} exceeds the guard {limit}")]
    SizeGuard { size: usize, limit: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
