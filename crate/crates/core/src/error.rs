use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseScalarError {
    #[error("malformed rational {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Errors raised by the exact pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("det L ≡ 0: the matrix polynomial is not invertible")]
    NotInvertible,
    #[error("L is not Hermitian: coefficient matrix A_{degree} violates a_ij = conj(a_ji)")]
    NotHermitian { degree: usize },
    #[error(
        "condition deg m_ij <= deg det L fails (max minor degree {max_minor_degree} > {det_degree}): \
         the inverse diverges at infinity and its representing relation has an eigenvalue at ∞"
    )]
    DivergentAtInfinity { max_minor_degree: usize, det_degree: usize },
    #[error("non-real or non-exact spectrum: eigenvalue {0} is not an exact real number")]
    NonRealSpectrum(String),
    #[error("eigenvalue {0} is only known numerically")]
    NonExactEigenvalue(String),
    #[error("column {column} is not in Ω({alpha})")]
    NotInOmega { alpha: String, column: usize },
    #[error("chain must be nonempty with a nonzero leading vector")]
    DegenerateChain,
    #[error("L·φ vanishes to order {found} at {alpha}, expected {expected}")]
    OrderMismatch { alpha: String, expected: usize, found: String },
    #[error("chain verification failed at {alpha}: {reason}")]
    ChainInvalid { alpha: String, reason: String },
    #[error("pairing limit at {alpha} is zero: the root function is not canonical for this pairing")]
    ZeroChainLimit { alpha: String },
    #[error("pairing limit at {alpha} is not real: {value}")]
    NonRealLimit { alpha: String, value: String },
    #[error("entry ({row}, {col}) diverges at infinity")]
    DivergentEntry { row: usize, col: usize },
    #[error("residue structure at {alpha} is inconsistent: {reason}")]
    ResidueStructure { alpha: String, reason: String },
    #[error("residue factor at {alpha} needs |g|² = {value}, which has no solution in ℚ(i)")]
    NoExactFactor { alpha: String, value: String },
    #[error("representation check failed: {0}")]
    Verification(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
