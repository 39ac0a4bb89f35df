//! Exact scalar kernel: rationals, real quadratic extensions, planar
//! vectors, integer matrices and certified Perron–Frobenius data.

mod interval;
mod matrix;
mod parse;
mod quad;
mod rational;
mod scalar;
mod vec2;

pub use interval::Enclosure;
pub use matrix::{CharPoly, IntMatrix, PfData};
pub use parse::parse_scalar;
pub use quad::QuadScalar;
pub use rational::Rational;
pub use scalar::Scalar;
pub use vec2::PlanarVec;

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum NumError {
    #[error("mixed quadratic fields: sqrt({0}) vs sqrt({1})")]
    MixedFields(u64, u64),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("sqrt of negative integer {0}")]
    NegativeSqrt(i64),
    #[error("matrix has a negative entry at ({0},{1})")]
    NegativeEntry(usize, usize),
    #[error("matrix is not primitive")]
    NotPrimitive,
    #[error("comparison of overlapping float enclosures")]
    UndecidedComparison,
    #[error("cannot parse scalar literal: {0}")]
    Parse(String),
}
