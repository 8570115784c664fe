use std::cmp::Ordering;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::linalg::{dot, kernel, rank, rref, solve_in_row_span};
use super::LatticeError;
use crate::exact_numbers::{AlgebraicNumber, ComplexScalar, NumberField};

/// A vector in the realified ambient space `K^N`.
pub type KVector = Vec<AlgebraicNumber>;

/// Whether the ambient space is ℝⁿ or ℂⁿ.
///
/// Complex vectors are stored realified and interleaved, `(Re z₁, Im z₁,
/// Re z₂, …)`, so every subspace is a real subspace of `ℝ^N` and complex
/// subspaces are those closed under multiplication by `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldMarker {
    Real,
    Complex,
}

impl FieldMarker {
    /// Real dimension of the ambient space for `n` coordinates.
    pub fn real_dim(self, n: usize) -> usize {
        match self {
            FieldMarker::Real => n,
            FieldMarker::Complex => 2 * n,
        }
    }

    /// Real dimensions per unit of "field" dimension.
    pub fn real_factor(self) -> usize {
        match self {
            FieldMarker::Real => 1,
            FieldMarker::Complex => 2,
        }
    }
}

pub fn zero_vector(field: &Arc<NumberField>, n: usize) -> KVector {
    vec![AlgebraicNumber::zero(field); n]
}

pub fn is_zero_vector(v: &[AlgebraicNumber]) -> bool {
    v.iter().all(AlgebraicNumber::is_zero)
}

pub fn add_vec(a: &[AlgebraicNumber], b: &[AlgebraicNumber]) -> KVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[AlgebraicNumber], b: &[AlgebraicNumber]) -> KVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(c: &AlgebraicNumber, a: &[AlgebraicNumber]) -> KVector {
    a.iter().map(|x| c * x).collect()
}

pub fn vec_to_f64(v: &[AlgebraicNumber]) -> Vec<f64> {
    v.iter().map(AlgebraicNumber::to_f64).collect()
}

pub fn canonical_cmp_vec(a: &[AlgebraicNumber], b: &[AlgebraicNumber]) -> Ordering {
    a.iter().zip(b).map(|(x, y)| x.canonical_cmp(y)).find(|o| o.is_ne()).unwrap_or(a.len().cmp(&b.len()))
}

/// Realify a vector of complex scalars. In real mode every entry must be real.
pub fn realify(v: &[ComplexScalar], marker: FieldMarker) -> Result<KVector, LatticeError> {
    match marker {
        FieldMarker::Real => v
            .iter()
            .map(|z| if z.is_real() { Ok(z.re.clone()) } else { Err(LatticeError::ComplexEntryInRealMode) })
            .collect(),
        FieldMarker::Complex => Ok(v.iter().flat_map(|z| [z.re.clone(), z.im.clone()]).collect()),
    }
}

/// Multiplication by `i` on an interleaved realified vector.
pub fn multiply_by_i(v: &[AlgebraicNumber]) -> KVector {
    v.chunks(2).flat_map(|p| [-&p[1], p[0].clone()]).collect()
}

/// A linear subspace of `K^N`, held by its reduced row echelon basis so that
/// equality of subspaces is equality of representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: Arc<NumberField>,
    ambient: usize,
    marker: FieldMarker,
    basis: Vec<KVector>,
}

impl Subspace {
    pub fn zero(field: &Arc<NumberField>, ambient: usize, marker: FieldMarker) -> Self {
        Subspace { field: field.clone(), ambient, marker, basis: Vec::new() }
    }

    pub fn full(field: &Arc<NumberField>, ambient: usize, marker: FieldMarker) -> Self {
        let vectors: Vec<KVector> = (0..ambient)
            .map(|i| {
                let mut e = zero_vector(field, ambient);
                e[i] = AlgebraicNumber::one(field);
                e
            })
            .collect();
        Subspace::span(field, ambient, marker, &vectors)
    }

    /// Real span of the given realified vectors. For a complex marker the
    /// span is additionally closed under `i`, i.e. it is the ℂ-span.
    pub fn span(field: &Arc<NumberField>, ambient: usize, marker: FieldMarker, vectors: &[KVector]) -> Self {
        let mut all: Vec<KVector> = vectors.to_vec();
        if marker == FieldMarker::Complex {
            all.extend(vectors.iter().map(|v| multiply_by_i(v)));
        }
        Self::real_span(field, ambient, marker, &all)
    }

    /// Real span, with no closure under `i` even in complex mode.
    pub fn real_span(field: &Arc<NumberField>, ambient: usize, marker: FieldMarker, vectors: &[KVector]) -> Self {
        let vectors: Vec<KVector> = vectors.iter().filter(|v| !is_zero_vector(v)).cloned().collect();
        let basis = if vectors.is_empty() { Vec::new() } else { rref(&vectors).0 };
        Subspace { field: field.clone(), ambient, marker, basis }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn marker(&self) -> FieldMarker {
        self.marker
    }

    /// Same subspace, relabelled (used when complex mode is demoted to real).
    pub fn with_marker(&self, marker: FieldMarker) -> Self {
        Subspace { marker, ..self.clone() }
    }

    pub fn basis(&self) -> &[KVector] {
        &self.basis
    }

    /// Real dimension.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains_vector(&self, v: &[AlgebraicNumber]) -> bool {
        if is_zero_vector(v) {
            return true;
        }
        solve_in_row_span(&self.basis, v).is_some()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains_vector(v))
    }

    /// Closed under multiplication by `i` (always false-free in real mode).
    pub fn is_complex_subspace(&self) -> bool {
        self.basis.iter().all(|v| self.contains_vector(&multiply_by_i(v)))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Self::real_span(&self.field, self.ambient, self.marker, &all)
    }

    /// Orthogonal complement under the standard (real part of Hermitian) inner product.
    pub fn orthogonal_complement(&self) -> Subspace {
        if self.basis.is_empty() {
            return Subspace::full(&self.field, self.ambient, self.marker);
        }
        let zero = AlgebraicNumber::zero(&self.field);
        let k = kernel(&self.basis, self.ambient, &zero);
        Self::real_span(&self.field, self.ambient, self.marker, &k)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // x ∈ self ∩ other ⇔ x ∈ self and x ⊥ other^⊥.
        let perp = other.orthogonal_complement();
        if perp.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return self.clone();
        }
        let zero = AlgebraicNumber::zero(&self.field);
        // Coefficients a with Σ a_i b_i ⊥ every row of perp.
        let constraints: Vec<KVector> =
            perp.basis.iter().map(|w| self.basis.iter().map(|b| dot(b, w)).collect()).collect();
        let coeffs = kernel(&constraints, self.basis.len(), &zero);
        let vectors: Vec<KVector> = coeffs
            .iter()
            .map(|a| {
                let mut v = zero_vector(&self.field, self.ambient);
                for (c, b) in a.iter().zip(&self.basis) {
                    if !c.is_zero() {
                        v = add_vec(&v, &scale_vec(c, b));
                    }
                }
                v
            })
            .collect();
        Self::real_span(&self.field, self.ambient, self.marker, &vectors)
    }

    /// Orthogonal projection of `x` onto this subspace, exactly.
    pub fn project(&self, x: &[AlgebraicNumber]) -> KVector {
        if self.basis.is_empty() {
            return zero_vector(&self.field, self.ambient);
        }
        let gram: Vec<KVector> = self.basis.iter().map(|a| self.basis.iter().map(|b| dot(a, b)).collect()).collect();
        let rhs: KVector = self.basis.iter().map(|b| dot(b, x)).collect();
        // Gram is symmetric positive definite, so solving G c = rhs is
        // solving c·G = rhs in row form.
        let c = solve_in_row_span(&gram, &rhs).expect("Gram matrix of a basis is invertible");
        let mut out = zero_vector(&self.field, self.ambient);
        for (ci, b) in c.iter().zip(&self.basis) {
            if !ci.is_zero() {
                out = add_vec(&out, &scale_vec(ci, b));
            }
        }
        out
    }

    /// Component of `x` orthogonal to this subspace.
    pub fn reject(&self, x: &[AlgebraicNumber]) -> KVector {
        sub_vec(x, &self.project(x))
    }

    pub fn basis_f64(&self) -> Vec<Vec<f64>> {
        self.basis.iter().map(|v| vec_to_f64(v)).collect()
    }

    pub fn canonical_cmp(&self, other: &Subspace) -> Ordering {
        self.dim().cmp(&other.dim()).then_with(|| {
            self.basis
                .iter()
                .zip(&other.basis)
                .map(|(a, b)| canonical_cmp_vec(a, b))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }

    pub fn check_independent(vectors: &[KVector]) -> bool {
        rank(vectors) == vectors.len()
    }
}
