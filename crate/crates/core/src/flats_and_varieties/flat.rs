use std::cmp::Ordering;
use std::sync::Arc;

use crate::exact_numbers::{AlgebraicNumber, NumberField};
use crate::lattice_algebra::{canonical_cmp_vec, sub_vec, vec_to_f64, FieldMarker, KVector, Subspace};

use super::FlatError;

/// An affine flat `c + D`, stored with `c` the orthogonal projection of any
/// of its points onto `D^⊥`. Two flats are equal iff they are the same set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    base: KVector,
    directions: Subspace,
}

impl Flat {
    pub fn new(point: KVector, directions: Subspace) -> Self {
        let base = directions.reject(&point);
        Flat { base, directions }
    }

    pub fn point(point: KVector, field: &Arc<NumberField>, marker: FieldMarker) -> Self {
        let n = point.len();
        Flat { base: point, directions: Subspace::zero(field, n, marker) }
    }

    pub fn base_point(&self) -> &KVector {
        &self.base
    }

    pub fn directions(&self) -> &Subspace {
        &self.directions
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.directions.field()
    }

    pub fn marker(&self) -> FieldMarker {
        self.directions.marker()
    }

    pub fn ambient(&self) -> usize {
        self.directions.ambient()
    }

    /// Real dimension.
    pub fn dim(&self) -> usize {
        self.directions.dim()
    }

    pub fn contains_point(&self, p: &[AlgebraicNumber]) -> bool {
        self.directions.contains_vector(&sub_vec(p, &self.base))
    }

    /// `self ⊆ other` as point sets.
    pub fn is_subset_of(&self, other: &Flat) -> bool {
        other.directions.contains(&self.directions) && other.contains_point(&self.base)
    }

    pub fn base_f64(&self) -> Vec<f64> {
        vec_to_f64(&self.base)
    }

    pub fn canonical_cmp(&self, other: &Flat) -> Ordering {
        self.directions.canonical_cmp(&other.directions).then_with(|| canonical_cmp_vec(&self.base, &other.base))
    }
}

/// `L(A)`.
pub fn linear_part(a: &Flat) -> Subspace {
    a.directions.clone()
}

/// The single point of `(A + span) ∩ span^⊥`.
pub fn perp_base_point(a: &Flat, span: &Subspace) -> Result<KVector, FlatError> {
    if !span.contains(&a.directions) {
        return Err(FlatError::NotContained);
    }
    Ok(span.reject(&a.base))
}
