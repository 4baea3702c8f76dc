//! Exact scalar and polynomial arithmetic.

mod linsolve;
mod monomial;
mod parse;
mod poly;
pub mod rational;
pub mod registry;
pub mod resultant;
mod unipoly;

use thiserror::Error;

pub use linsolve::solve;
pub use monomial::Monomial;
pub use parse::parse_poly;
pub use poly::{LaurentPoly, MultiPoly};
pub use rational::{parse_rational, rat, ratio, rational_sqrt, Rational, RationalInput};
pub use registry::{Registry, Var};
pub use resultant::{discriminant, resultant};
pub use unipoly::UniPoly;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("polynomials live in different variable registries")]
    RegistryMismatch,
    #[error("{0}")]
    Input(String),
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("negative exponents did not clear; residue {residue}")]
    Residue { residue: LaurentPoly },
    #[error("binding for `{var}` is not invertible but occurs with a negative exponent")]
    NotInvertible { var: String },
}
