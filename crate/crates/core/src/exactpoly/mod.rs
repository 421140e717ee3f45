//! Exact scalar arithmetic and sparse multivariate polynomials.

mod d5;
pub mod elim;
mod field;
mod json;
mod parse;
mod poly;
pub mod resultant;
pub mod roots;
mod scalar;
mod upoly;

pub use d5::{common_zero_2, Witness2};
pub use elim::{eliminate_to, has_common_zero, ElimBudget, Eliminant};
pub use field::{is_prime, ExtField, Field};
pub use json::{FieldJson, PolyJson, ScalarJson};
pub use poly::{grlex_cmp, poly_arith, vars, ArithOp, Monomial, MultiPoly, Term, Vars};
pub use resultant::{resultant, resultant_at};
pub use roots::{univariate_roots, RootBackend};
pub use scalar::{ratio_to_f64, Scalar};
pub use upoly::UniPoly;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("variable set mismatch: {0}")]
    VarMismatch(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("no assignment for variable {0}")]
    MissingAssignment(String),
    #[error("expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("bad reduction: {0}")]
    BadReduction(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial is not divisible")]
    NotDivisible,
    #[error("zero polynomial input")]
    ZeroInput,
    #[error("polynomial is not univariate")]
    NotUnivariate,
    #[error("numeric root finding did not converge: {0}")]
    NonConvergence(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("parse error: {0}")]
    Parse(String),
}
