//! Affine flats, families of flats, and the supported kinds of variety input.

mod family;
mod flat;
mod variety;

use thiserror::Error;

pub use family::{family_linear_span, BaseSetDescriptor, CurveBase, FlatFamily};
pub use flat::{linear_part, perp_base_point, Flat};
pub use variety::{
    leading_exponent, realify_f64, Coordinate, GraphPiece, GraphPoly, ParametricBranch, Piece, VarietyInput, C64,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlatError {
    #[error("linear part is not contained in the given span")]
    NotContained,
    #[error("denominator is identically zero")]
    ZeroDenominator,
    #[error("branch declares no rays")]
    NoRays,
    #[error("ray direction is not a unit complex number")]
    RayNotUnit,
    #[error("complex coefficients or rays in a real-mode input")]
    ComplexDataInRealMode,
    #[error("fractional exponents are only supported along the ray t -> +inf")]
    FractionalExponentOffPositiveRay,
    #[error("piece dimensions do not match the ambient space")]
    DimensionMismatch,
    #[error("declared dimension is smaller than a piece's dimension")]
    DeclaredDimTooSmall,
}
