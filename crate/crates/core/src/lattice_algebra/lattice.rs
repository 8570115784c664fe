use std::sync::Arc;

use num_traits::Zero;

use super::linalg::{rank, solve_in_row_span};
use super::subspace::{add_vec, realify, scale_vec, zero_vector, FieldMarker, KVector, Subspace};
use super::LatticeError;
use crate::exact_numbers::{AlgebraicNumber, ComplexScalar, NumberField, Rational};

/// A discrete subgroup Λ given by an exact basis of ℝ-linearly independent
/// vectors. Its real span is the subspace `L = ℝΛ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    field: Arc<NumberField>,
    coord_dim: usize,
    marker: FieldMarker,
    basis: Vec<KVector>,
    span: Subspace,
}

impl Lattice {
    /// `basis` holds realified vectors of length `marker.real_dim(coord_dim)`.
    pub fn new(
        field: &Arc<NumberField>,
        coord_dim: usize,
        marker: FieldMarker,
        basis: Vec<KVector>,
    ) -> Result<Self, LatticeError> {
        if field.is_complex() {
            return Err(LatticeError::ComplexEmbeddedField);
        }
        let n = marker.real_dim(coord_dim);
        if basis.iter().any(|b| b.len() != n) {
            return Err(LatticeError::DimensionMismatch);
        }
        if !basis.is_empty() && rank(&basis) != basis.len() {
            return Err(LatticeError::DependentBasis);
        }
        let span = Subspace::real_span(field, n, marker, &basis);
        Ok(Lattice { field: field.clone(), coord_dim, marker, basis, span })
    }

    pub fn from_complex_rows(
        field: &Arc<NumberField>,
        coord_dim: usize,
        marker: FieldMarker,
        rows: &[Vec<ComplexScalar>],
    ) -> Result<Self, LatticeError> {
        let basis = rows.iter().map(|r| realify(r, marker)).collect::<Result<Vec<_>, _>>()?;
        Lattice::new(field, coord_dim, marker, basis)
    }

    /// ℤⁿ spanned by the standard real basis vectors (the real parts in complex mode).
    pub fn standard(field: &Arc<NumberField>, coord_dim: usize, marker: FieldMarker) -> Self {
        let n = marker.real_dim(coord_dim);
        let basis = (0..coord_dim)
            .map(|i| {
                let mut e = zero_vector(field, n);
                e[i * marker.real_factor()] = AlgebraicNumber::one(field);
                e
            })
            .collect();
        Lattice::new(field, coord_dim, marker, basis).expect("standard basis is independent")
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn marker(&self) -> FieldMarker {
        self.marker
    }

    /// Number of (real or complex) coordinates.
    pub fn coord_dim(&self) -> usize {
        self.coord_dim
    }

    /// Real dimension of the ambient space.
    pub fn ambient_dim(&self) -> usize {
        self.marker.real_dim(self.coord_dim)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[KVector] {
        &self.basis
    }

    /// `L = ℝΛ`.
    pub fn span(&self) -> &Subspace {
        &self.span
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    /// Coordinates of `v` relative to the basis of Λ.
    pub fn coordinates(&self, v: &[AlgebraicNumber]) -> Result<KVector, LatticeError> {
        if self.basis.is_empty() {
            return if v.iter().all(AlgebraicNumber::is_zero) { Ok(Vec::new()) } else { Err(LatticeError::NotInSpan) };
        }
        solve_in_row_span(&self.basis, v).ok_or(LatticeError::NotInSpan)
    }

    pub fn from_coordinates(&self, c: &[AlgebraicNumber]) -> KVector {
        let mut out = zero_vector(&self.field, self.ambient_dim());
        for (ci, b) in c.iter().zip(&self.basis) {
            if !ci.is_zero() {
                out = add_vec(&out, &scale_vec(ci, b));
            }
        }
        out
    }

    pub fn from_rational_coordinates(&self, q: &[Rational]) -> KVector {
        let c: KVector = q.iter().map(|x| AlgebraicNumber::from_rational(&self.field, x.clone())).collect();
        self.from_coordinates(&c)
    }

    pub fn basis_f64(&self) -> Vec<Vec<f64>> {
        self.basis.iter().map(|b| b.iter().map(AlgebraicNumber::to_f64).collect()).collect()
    }

    /// Sanity: integer coordinate vectors map into Λ.
    pub fn lattice_vector(&self, m: &[i64]) -> KVector {
        let q: Vec<Rational> = m.iter().map(|&x| Rational::from_integer(x.into())).collect();
        if q.iter().all(Zero::is_zero) {
            return zero_vector(&self.field, self.ambient_dim());
        }
        self.from_rational_coordinates(&q)
    }
}
