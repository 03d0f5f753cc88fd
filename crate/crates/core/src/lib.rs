//! Exact symbolic toolkit for square matrix polynomials over ℚ(i).
//!
//! The crate diagonalizes `L(z)` by tracked elementary moves, reads canonical
//! Jordan chains off the column transform, solves `L(d/dt)u = 0`, and builds
//! verified Krein–Langer representations of `-L(z)⁻¹` for Hermitian `L` with
//! real spectrum.

pub mod error;
pub mod kreinlanger;
pub mod latex;
pub mod linalg;
pub mod matpoly;
pub mod odesolve;
pub mod poly;
pub mod ratfun;
pub mod roots;
pub mod scalar;
pub mod smith;
pub mod spectral;

pub use error::{Error, ParseScalarError, Result};
pub use kreinlanger::{BlockSpec, Representation};
pub use linalg::Matrix;
pub use matpoly::{DegreeReport, MatPoly, MatRatFun};
pub use odesolve::{GeneralSolution, Residual, SolutionTerm, TermVectors};
pub use poly::Poly;
pub use ratfun::{InfinityLimit, PointLimit, RatFun};
pub use roots::{RootSpec, RootValue, DEFAULT_NUMERIC_TOL};
pub use scalar::GaussianRational;
pub use smith::{DiagFailure, DiagForm, ElementaryMove, MoveKind, PivotStrategy, Side};
pub use spectral::{
    CanonicalSystem, ChainCheck, ChainData, EigenTable, PoleCancellationRecord, RootFunctionRecord,
};
