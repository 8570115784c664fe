//! Smallest Λ-rational subspaces and the closed subgroups they cut out.
//!
//! For `V ⊆ ℝΛ`, the closure of `π(V)` in `ℝΛ/Λ` is `π(W)` where `W` is the
//! smallest subspace containing `V` that has a basis with rational
//! Λ-coordinates. `W` is the common zero set of every rational linear form
//! (in Λ-coordinates) that vanishes on `V`, and `Λ ∩ W` has full rank in `W`,
//! which is exactly compactness of `π(W)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::lattice::Lattice;
use super::linalg::{inverse, kernel, rank};
use super::normal_form::{hermite_normal_form, smith_normal_form};
use super::subspace::{KVector, Subspace};
use super::LatticeError;
use crate::exact_numbers::{rational_coordinates, Rational};

/// Basis of the ℚ-space of forms `f ∈ ℚ^m` with `Σ f_j v_j = 0` for every
/// input vector `v ∈ K^m`.
///
/// Each condition is expanded over the power basis of `K`, giving `d`
/// rational equations per input vector.
pub fn rational_annihilator(vectors: &[KVector], m: usize) -> Result<Vec<Vec<Rational>>, LatticeError> {
    let zero = Rational::zero();
    let mut equations: Vec<Vec<Rational>> = Vec::new();
    if let Some(first) = vectors.iter().flat_map(|v| v.iter()).next() {
        let field = first.field().clone();
        let d = field.degree();
        for v in vectors {
            if v.len() != m {
                return Err(LatticeError::DimensionMismatch);
            }
            let coords = rational_coordinates(v, &field)?;
            for k in 0..d {
                let eq: Vec<Rational> = coords.iter().map(|row| row[k].clone()).collect();
                if eq.iter().any(|x| !x.is_zero()) {
                    equations.push(eq);
                }
            }
        }
    }
    if equations.is_empty() {
        return Ok((0..m)
            .map(|i| (0..m).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect());
    }
    Ok(kernel(&equations, m, &zero))
}

/// Λ-coordinates (rational) of a basis of the smallest Λ-rational subspace
/// containing `v`.
pub fn rational_closure_coords(v: &Subspace, lattice: &Lattice) -> Result<Vec<Vec<Rational>>, LatticeError> {
    let r = lattice.rank();
    let coords: Vec<KVector> = v.basis().iter().map(|b| lattice.coordinates(b)).collect::<Result<_, _>>()?;
    let forms = rational_annihilator(&coords, r)?;
    if forms.is_empty() {
        return Ok((0..r)
            .map(|i| (0..r).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect());
    }
    Ok(kernel(&forms, r, &Rational::zero()))
}

/// The smallest Λ-rational subspace `W ⊇ V`. Fails with `NotInSpan` unless `V ⊆ ℝΛ`.
pub fn rational_closure(v: &Subspace, lattice: &Lattice) -> Result<Subspace, LatticeError> {
    let coords = rational_closure_coords(v, lattice)?;
    let vectors: Vec<KVector> = coords.iter().map(|q| lattice.from_rational_coordinates(q)).collect();
    Ok(Subspace::real_span(lattice.field(), lattice.ambient_dim(), v.marker(), &vectors))
}

/// `π(W)` for a Λ-rational `W`, together with a ℤ-basis of `Λ ∩ W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedSubgroupDescriptor {
    pub w: Subspace,
    /// Rational Λ-coordinates of a basis of `W`.
    pub w_coords: Vec<Vec<Rational>>,
    /// Integer Λ-coordinates of a ℤ-basis of `Λ ∩ W`.
    pub lattice_points: Vec<Vec<BigInt>>,
    /// The same basis in ambient coordinates.
    pub lattice_vectors: Vec<KVector>,
}

impl ClosedSubgroupDescriptor {
    /// `rank(Λ ∩ W) = dim W`, the compactness certificate.
    pub fn is_compact(&self) -> bool {
        self.lattice_points.len() == self.w.dim()
    }

    pub fn dim(&self) -> usize {
        self.w.dim()
    }

    pub fn summary(&self) -> TorusSummary {
        TorusSummary {
            dim: self.w.dim(),
            lattice_points: self.lattice_points.iter().map(|p| p.iter().map(ToString::to_string).collect()).collect(),
            compact: self.is_compact(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TorusSummary {
    pub dim: usize,
    pub lattice_points: Vec<Vec<String>>,
    pub compact: bool,
}

/// Integer vectors `m ∈ ℤ^r` with `A m = 0`, as a ℤ-basis (via HNF of `Aᵀ`).
pub fn integer_kernel(forms: &[Vec<Rational>], r: usize) -> Vec<Vec<BigInt>> {
    if forms.is_empty() {
        return (0..r).map(|i| (0..r).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    }
    // Clear denominators row by row.
    let int_forms: Vec<Vec<BigInt>> = forms
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    // Rows of Aᵀ are indexed by the r lattice coordinates.
    let at: Vec<Vec<BigInt>> = (0..r).map(|i| int_forms.iter().map(|f| f[i].clone()).collect()).collect();
    let (h, u) = hermite_normal_form(&at);
    let basis: Vec<Vec<BigInt>> =
        h.iter().zip(u).filter(|(row, _)| row.iter().all(Zero::is_zero)).map(|(_, urow)| urow).collect();
    if basis.is_empty() {
        return basis;
    }
    // Canonical form: HNF of the basis rows.
    let (hb, _) = hermite_normal_form(&basis);
    hb.into_iter().filter(|row| row.iter().any(|x| !x.is_zero())).collect()
}

/// Integer vectors completing a primitive basis `points` of a sublattice of
/// `ℤ^r` to a basis of `ℤ^r`, read off a Smith form `U·M·V = [I 0]`.
pub fn complement_basis(points: &[Vec<BigInt>], r: usize) -> Vec<Vec<BigInt>> {
    let w = points.len();
    if w == 0 {
        return (0..r).map(|i| (0..r).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    }
    let (_, _, v) = smith_normal_form(&points.to_vec());
    let vq: Vec<Vec<Rational>> =
        v.iter().map(|row| row.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    let inv = inverse(&vq).expect("unimodular");
    inv[w..].iter().map(|row| row.iter().map(|x| x.to_integer()).collect()).collect()
}

/// Closure of `π(V)`: `W = rational_closure(V)` and a ℤ-basis of `Λ ∩ W`.
pub fn torus_closure(v: &Subspace, lattice: &Lattice) -> Result<ClosedSubgroupDescriptor, LatticeError> {
    let w_coords = rational_closure_coords(v, lattice)?;
    let r = lattice.rank();
    let w_vectors: Vec<KVector> = w_coords.iter().map(|q| lattice.from_rational_coordinates(q)).collect();
    let w = Subspace::real_span(lattice.field(), lattice.ambient_dim(), v.marker(), &w_vectors);
    let forms = if w_coords.is_empty() {
        (0..r).map(|i| (0..r).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
    } else {
        kernel(&w_coords, r, &Rational::zero())
    };
    let lattice_points = if r == 0 { Vec::new() } else { integer_kernel(&forms, r) };
    let lattice_vectors = lattice_points
        .iter()
        .map(|m| lattice.from_rational_coordinates(&m.iter().map(|x| Rational::from_integer(x.clone())).collect::<Vec<_>>()))
        .collect::<Vec<_>>();
    let desc = ClosedSubgroupDescriptor { w, w_coords, lattice_points, lattice_vectors };
    debug_assert!(desc.is_compact());
    debug_assert!(desc.lattice_vectors.is_empty() || rank(&desc.lattice_vectors) == desc.lattice_vectors.len());
    Ok(desc)
}
