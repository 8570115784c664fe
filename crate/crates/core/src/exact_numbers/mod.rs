//! Exact arithmetic in a number field `K = ℚ[x]/(m(x))` with a chosen
//! embedding, and certified rectangle approximations of its elements.

mod complex;
mod field;
mod interval;
mod number;
mod poly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use thiserror::Error;

pub use complex::ComplexScalar;
pub use field::NumberField;
pub use interval::{Interval, Rect, RectF64};
pub use number::{rational_coordinates, AlgebraicNumber};
pub use poly::QPoly;


pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumberError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different number fields")]
    FieldMismatch,
    #[error("minimal polynomial must have degree at least one")]
    DegreeTooSmall,
    #[error("minimal polynomial must be monic")]
    NotMonic,
    #[error("minimal polynomial must be squarefree")]
    NotSquarefree,
    #[error("minimal polynomial is reducible over the rationals")]
    Reducible,
    #[error("root selector does not isolate a single root: {0}")]
    SelectorNotIsolating(String),
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn rational_from_i64(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
