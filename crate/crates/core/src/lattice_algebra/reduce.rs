//! Floating-point reduction of points modulo Λ.

use nalgebra::{DMatrix, DVector};

use super::lattice::Lattice;

/// Result of writing `x = Σ c_k b_k + x_⊥` and replacing each `c_k` by its
/// fractional part.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction {
    /// `x - Σ floor(c_k) b_k`.
    pub reduced: Vec<f64>,
    /// Fractional Λ-coordinates, each in `[0, 1)`.
    pub frac: Vec<f64>,
    /// The integer shift `floor(c)`.
    pub shift: Vec<f64>,
    /// Coordinates of `x_⊥` in an orthonormal basis of `L^⊥`.
    pub transverse: Vec<f64>,
    /// Reconstruction error `‖reduced - (Σ frac_k b_k + x_⊥)‖`.
    pub residual: f64,
}

/// Precomputed data for repeated reductions against one lattice.
#[derive(Clone, Debug)]
pub struct LatticeReducer {
    n: usize,
    /// Basis vectors as columns (N × r).
    basis: DMatrix<f64>,
    /// `(BᵀB)⁻¹ Bᵀ`, maps x to Λ-coordinates of its L-component.
    coord_map: DMatrix<f64>,
    /// Orthonormal basis of `L^⊥` as columns (N × (N - r)).
    perp: DMatrix<f64>,
}

impl LatticeReducer {
    pub fn new(lattice: &Lattice) -> Self {
        let n = lattice.ambient_dim();
        let rows = lattice.basis_f64();
        let r = rows.len();
        let basis = DMatrix::from_fn(n, r, |i, k| rows[k][i]);
        let coord_map = if r == 0 {
            DMatrix::zeros(0, n)
        } else {
            let gram = basis.transpose() * &basis;
            let inv = gram.try_inverse().expect("lattice basis is independent");
            inv * basis.transpose()
        };
        let perp = orthonormal_complement(&basis, n);
        LatticeReducer { n, basis, coord_map, perp }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn transverse_dim(&self) -> usize {
        self.perp.ncols()
    }

    /// Lattice basis as columns (N × r).
    pub fn basis_matrix(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Orthonormal basis of `L^⊥` as columns.
    pub fn transverse_matrix(&self) -> &DMatrix<f64> {
        &self.perp
    }

    /// Real Λ-coordinates of the L-component of `x`.
    pub fn coordinates(&self, x: &[f64]) -> Vec<f64> {
        let v = DVector::from_column_slice(x);
        (&self.coord_map * v).iter().copied().collect()
    }

    /// Coordinates of the `L^⊥` component of `x` in the orthonormal basis.
    pub fn transverse(&self, x: &[f64]) -> Vec<f64> {
        let v = DVector::from_column_slice(x);
        (self.perp.transpose() * v).iter().copied().collect()
    }

    /// `Σ c_k b_k`.
    pub fn combine(&self, c: &[f64]) -> Vec<f64> {
        let cv = DVector::from_column_slice(c);
        (&self.basis * cv).iter().copied().collect()
    }

    /// Ambient point from Λ-coordinates and transverse coordinates.
    pub fn assemble(&self, c: &[f64], t: &[f64]) -> Vec<f64> {
        let a = &self.basis * DVector::from_column_slice(c) + &self.perp * DVector::from_column_slice(t);
        a.iter().copied().collect()
    }

    pub fn reduce(&self, x: &[f64]) -> Reduction {
        let c = self.coordinates(x);
        let shift: Vec<f64> = c.iter().map(|v| v.floor()).collect();
        let mut frac: Vec<f64> = c.iter().zip(&shift).map(|(v, s)| v - s).collect();
        // floor can leave exactly 1.0 after rounding of tiny negatives.
        for f in &mut frac {
            if *f >= 1.0 {
                *f = 0.0;
            }
        }
        let lattice_shift = self.combine(&shift);
        let reduced: Vec<f64> = x.iter().zip(&lattice_shift).map(|(a, b)| a - b).collect();
        let transverse = self.transverse(x);
        let rebuilt = self.assemble(&frac, &transverse);
        let residual = reduced.iter().zip(&rebuilt).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        Reduction { reduced, frac, shift, transverse, residual }
    }
}

/// One-shot convenience wrapper around [`LatticeReducer::reduce`].
pub fn reduce_mod_lattice(x: &[f64], lattice: &Lattice) -> Reduction {
    LatticeReducer::new(lattice).reduce(x)
}

/// Orthonormal basis of the complement of the column span of `b`, by
/// Gram–Schmidt on the standard basis.
pub(crate) fn orthonormal_complement(b: &DMatrix<f64>, n: usize) -> DMatrix<f64> {
    let mut q: Vec<DVector<f64>> = Vec::new();
    for k in 0..b.ncols() {
        let mut v = b.column(k).into_owned();
        for u in &q {
            v -= u * u.dot(&v);
        }
        let norm = v.norm();
        if norm > 1e-12 {
            q.push(v / norm);
        }
    }
    let span_dim = q.len();
    for i in 0..n {
        if q.len() == n {
            break;
        }
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        // Two passes for stability.
        for _ in 0..2 {
            for u in &q {
                v -= u * u.dot(&v);
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            q.push(v / norm);
        }
    }
    let perp = &q[span_dim..];
    DMatrix::from_fn(n, perp.len(), |i, k| perp[k][i])
}
