//! Command-line front end for `mpk-core`: loads a matrix polynomial from
//! JSON, runs one pipeline and emits a JSON document.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | input or usage error (malformed JSON, bad rational, wrong shape, bad `MPK_NUMERIC_TOL`) |
//! | 2 | a verifier failed, `det L ≡ 0`, or numeric eigenvalues without `--allow-numeric-roots` |
//! | 3 | `L` is not Hermitian |
//! | 4 | some minor of `L` has degree above `deg det L` (eigenvalue at ∞) |
//! | 5 | non-real or non-exact spectrum |

pub mod commands;
pub mod input;

pub use commands::{run, Command, Document, Options, Report};
pub use input::{InputDocument, InputError};

use mpk_core::Error;
use thiserror::Error as ThisError;

pub const TOL_ENV: &str = "MPK_NUMERIC_TOL";

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    NumericRoots(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Pipeline(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Usage(_) => 1,
            CliError::NumericRoots(_) | CliError::Verification(_) => 2,
            CliError::Pipeline(e) => match e {
                Error::NotHermitian { .. } => 3,
                Error::DivergentAtInfinity { .. } => 4,
                Error::NonRealSpectrum(_) | Error::NonExactEigenvalue(_) => 5,
                _ => 2,
            },
        }
    }
}

/// Reads the tolerance override; unset means the library default.
pub fn tolerance_from_env(value: Option<&str>) -> Result<f64, CliError> {
    let Some(raw) = value else { return Ok(mpk_core::DEFAULT_NUMERIC_TOL) };
    match raw.trim().parse::<f64>() {
        Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
        _ => Err(CliError::Usage(format!("{TOL_ENV} must be a positive number, got {raw:?}"))),
    }
}
