use thiserror::Error;

/// Errors produced by field construction and the algebraic operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree k must be at least 1")]
    ZeroDegree,
    #[error("field size p^(2k) = {size} exceeds the bound {bound}")]
    SizeBound { size: u128, bound: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero cannot be raised to a negative power")]
    ZeroToNegativePower,
    #[error("element is not in mu_(q+1)")]
    NotInMu,
    #[error("element is zero or lies outside the subfield F_q")]
    NotInSubfield,
    #[error("operation requires characteristic 2")]
    CharacteristicNotTwo,
    #[error("reversal needs a nonzero polynomial with deg(B) <= n")]
    ReversalDegree,
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("(c, d) = (0, 0) does not define a rational function")]
    ZeroDenominatorPair,
    #[error("a*d = b*c: the map is constant, not degree one")]
    DegenerateMobius,
    #[error("invalid family parameters: {0}")]
    InvalidParams(String),
    #[error("degenerate parameters: the induced map on mu_(q+1) is constant")]
    DegenerateFamily,
    #[error("special case constraints unsatisfiable: {0}")]
    SpecialCase(String),
    #[error("parse error: {0}")]
    Parse(String),
}
