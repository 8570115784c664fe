//! Exact linear algebra over a number field, lattices Λ, and closures of
//! subspaces in the torus `ℝΛ/Λ`.

mod closure;
mod lattice;
pub mod linalg;
pub mod normal_form;
mod reduce;
pub mod relation;
mod subspace;

use thiserror::Error;

use crate::exact_numbers::NumberError;

pub use closure::{
    complement_basis, integer_kernel, rational_annihilator, rational_closure, rational_closure_coords, torus_closure,
    ClosedSubgroupDescriptor, TorusSummary,
};
pub use lattice::Lattice;
pub use normal_form::{hermite_normal_form, smith_normal_form, IntMatrix};
pub use reduce::{reduce_mod_lattice, LatticeReducer, Reduction};
pub(crate) use reduce::orthonormal_complement;
pub use subspace::{
    add_vec, canonical_cmp_vec, is_zero_vector, multiply_by_i, realify, scale_vec, sub_vec, vec_to_f64,
    zero_vector, FieldMarker, KVector, Subspace,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("vector is not in the span of the lattice")]
    NotInSpan,
    #[error("complex entry in a real-mode vector")]
    ComplexEntryInRealMode,
    #[error("lattice basis is linearly dependent")]
    DependentBasis,
    #[error("vector length does not match the ambient dimension")]
    DimensionMismatch,
    #[error("lattice algebra needs a real embedding of the ground field")]
    ComplexEmbeddedField,
    #[error(transparent)]
    Number(#[from] NumberError),
}
