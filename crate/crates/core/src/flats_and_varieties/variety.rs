use std::sync::Arc;

use nalgebra::Complex;
use crate::exact_numbers::{rational_to_f64, ComplexScalar, NumberField, Rational};
use crate::lattice_algebra::FieldMarker;

use super::flat::Flat;
use super::FlatError;

pub type C64 = Complex<f64>;

/// One coordinate function of a parametric branch, in the parameter `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coordinate {
    /// `num(t) / den(t)`, coefficients low degree first.
    Rational { num: Vec<ComplexScalar>, den: Vec<ComplexScalar> },
    /// `Σ c·t^e` with rational exponents.
    Monomials(Vec<(ComplexScalar, Rational)>),
}

fn trim(mut p: Vec<ComplexScalar>) -> Vec<ComplexScalar> {
    while p.last().is_some_and(ComplexScalar::is_zero) {
        p.pop();
    }
    p
}

fn poly_eval_f64(p: &[ComplexScalar], t: C64) -> C64 {
    p.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| {
        let (re, im) = c.to_f64();
        acc * t + C64::new(re, im)
    })
}

impl Coordinate {
    pub fn rational(num: Vec<ComplexScalar>, den: Vec<ComplexScalar>) -> Result<Self, FlatError> {
        let den = trim(den);
        if den.is_empty() {
            return Err(FlatError::ZeroDenominator);
        }
        Ok(Coordinate::Rational { num: trim(num), den })
    }

    pub fn polynomial(coeffs: Vec<ComplexScalar>, field: &Arc<NumberField>) -> Self {
        Coordinate::Rational { num: trim(coeffs), den: vec![ComplexScalar::one(field)] }
    }

    /// Merge equal exponents and drop zero terms.
    pub fn monomials(terms: Vec<(ComplexScalar, Rational)>) -> Self {
        let mut merged: Vec<(ComplexScalar, Rational)> = Vec::new();
        for (c, e) in terms {
            match merged.iter_mut().find(|(_, f)| *f == e) {
                Some(slot) => slot.0 = slot.0.add(&c),
                None => merged.push((c, e)),
            }
        }
        merged.retain(|(c, _)| !c.is_zero());
        merged.sort_by(|a, b| b.1.cmp(&a.1));
        Coordinate::Monomials(merged)
    }

    fn coefficients(&self) -> Box<dyn Iterator<Item = &ComplexScalar> + '_> {
        match self {
            Coordinate::Rational { num, den } => Box::new(num.iter().chain(den)),
            Coordinate::Monomials(terms) => Box::new(terms.iter().map(|(c, _)| c)),
        }
    }

    pub fn is_real(&self) -> bool {
        self.coefficients().all(ComplexScalar::is_real)
    }

    pub fn has_fractional_exponents(&self) -> bool {
        match self {
            Coordinate::Rational { .. } => false,
            Coordinate::Monomials(terms) => terms.iter().any(|(_, e)| !e.is_integer()),
        }
    }

    pub fn eval_f64(&self, t: C64) -> C64 {
        match self {
            Coordinate::Rational { num, den } => poly_eval_f64(num, t) / poly_eval_f64(den, t),
            Coordinate::Monomials(terms) => terms.iter().fold(C64::new(0.0, 0.0), |acc, (c, e)| {
                let (re, im) = c.to_f64();
                let p = if e.is_integer() {
                    t.powi(e.to_integer().try_into().unwrap_or(i32::MAX))
                } else {
                    t.powf(rational_to_f64(e))
                };
                acc + C64::new(re, im) * p
            }),
        }
    }
}

/// A curve `t ↦ (x₁(t), …, x_n(t))` analysed as `t = s·ω`, `s → +∞`, for each
/// declared unit ray `ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametricBranch {
    coords: Vec<Coordinate>,
    rays: Vec<ComplexScalar>,
}

impl ParametricBranch {
    pub fn new(coords: Vec<Coordinate>, rays: Vec<ComplexScalar>, marker: FieldMarker) -> Result<Self, FlatError> {
        if rays.is_empty() {
            return Err(FlatError::NoRays);
        }
        for w in &rays {
            if !w.norm_sqr().is_one() {
                return Err(FlatError::RayNotUnit);
            }
        }
        if marker == FieldMarker::Real
            && (coords.iter().any(|c| !c.is_real()) || rays.iter().any(|w| !w.is_real()))
        {
            return Err(FlatError::ComplexDataInRealMode);
        }
        let plus_one = |w: &ComplexScalar| w.is_real() && w.re.is_one();
        if coords.iter().any(Coordinate::has_fractional_exponents) && !rays.iter().all(plus_one) {
            return Err(FlatError::FractionalExponentOffPositiveRay);
        }
        Ok(ParametricBranch { coords, rays })
    }

    pub fn coords(&self) -> &[Coordinate] {
        &self.coords
    }

    pub fn rays(&self) -> &[ComplexScalar] {
        &self.rays
    }

    pub fn coord_dim(&self) -> usize {
        self.coords.len()
    }

    pub fn eval_complex(&self, t: C64) -> Vec<C64> {
        self.coords.iter().map(|c| c.eval_f64(t)).collect()
    }

    /// Realified point at `t`.
    pub fn eval_f64(&self, t: C64, marker: FieldMarker) -> Vec<f64> {
        realify_f64(&self.eval_complex(t), marker)
    }

    /// Point at `t = s·ω_ray`.
    pub fn eval_on_ray(&self, s: f64, ray: usize, marker: FieldMarker) -> Vec<f64> {
        let (re, im) = self.rays[ray].to_f64();
        self.eval_f64(C64::new(re, im) * s, marker)
    }
}

pub fn realify_f64(z: &[C64], marker: FieldMarker) -> Vec<f64> {
    match marker {
        FieldMarker::Real => z.iter().map(|c| c.re).collect(),
        FieldMarker::Complex => z.iter().flat_map(|c| [c.re, c.im]).collect(),
    }
}

/// Polynomial in the free variables: `Σ c·x^α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphPoly {
    pub terms: Vec<(ComplexScalar, Vec<u32>)>,
}

impl GraphPoly {
    pub fn eval(&self, x: &[C64]) -> C64 {
        self.terms.iter().fold(C64::new(0.0, 0.0), |acc, (c, alpha)| {
            let (re, im) = c.to_f64();
            let m = alpha.iter().zip(x).fold(C64::new(1.0, 0.0), |m, (&a, &xi)| m * xi.powu(a));
            acc + C64::new(re, im) * m
        })
    }

    /// `∂/∂x_j`.
    pub fn partial(&self, x: &[C64], j: usize) -> C64 {
        self.terms.iter().fold(C64::new(0.0, 0.0), |acc, (c, alpha)| {
            if alpha[j] == 0 {
                return acc;
            }
            let (re, im) = c.to_f64();
            let mut m = C64::new(f64::from(alpha[j]), 0.0);
            for (i, (&a, &xi)) in alpha.iter().zip(x).enumerate() {
                let e = if i == j { a - 1 } else { a };
                m *= xi.powu(e);
            }
            acc + C64::new(re, im) * m
        })
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(c, _)| c.is_real())
    }
}

/// `X` as the image of a polynomial map in `vars` free variables. Only
/// evaluated numerically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphPiece {
    pub vars: Vec<String>,
    pub coords: Vec<GraphPoly>,
}

impl GraphPiece {
    pub fn eval(&self, x: &[C64]) -> Vec<C64> {
        self.coords.iter().map(|p| p.eval(x)).collect()
    }

    /// Complex Jacobian, `coords × vars`.
    pub fn jacobian(&self, x: &[C64]) -> Vec<Vec<C64>> {
        self.coords.iter().map(|p| (0..self.vars.len()).map(|j| p.partial(x, j)).collect()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Piece {
    Branch(ParametricBranch),
    Affine(Flat),
    Graph(GraphPiece),
}

impl Piece {
    /// Dimension over the ground field (ℝ or ℂ).
    pub fn intrinsic_dim(&self, marker: FieldMarker) -> usize {
        match self {
            Piece::Branch(_) => 1,
            Piece::Affine(f) => f.dim() / marker.real_factor(),
            Piece::Graph(g) => g.vars.len(),
        }
    }

    pub fn is_symbolic(&self) -> bool {
        !matches!(self, Piece::Graph(_))
    }
}

/// `X` as a finite union of pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietyInput {
    field: Arc<NumberField>,
    coord_dim: usize,
    marker: FieldMarker,
    declared_dim: usize,
    pieces: Vec<Piece>,
}

impl VarietyInput {
    pub fn new(
        field: &Arc<NumberField>,
        coord_dim: usize,
        marker: FieldMarker,
        declared_dim: usize,
        pieces: Vec<Piece>,
    ) -> Result<Self, FlatError> {
        let n = marker.real_dim(coord_dim);
        for p in &pieces {
            let ok = match p {
                Piece::Branch(b) => b.coord_dim() == coord_dim,
                Piece::Affine(f) => f.ambient() == n && f.marker() == marker,
                Piece::Graph(g) => {
                    g.coords.len() == coord_dim
                        && g.coords.iter().all(|c| c.terms.iter().all(|(_, a)| a.len() == g.vars.len()))
                }
            };
            if !ok {
                return Err(FlatError::DimensionMismatch);
            }
            if marker == FieldMarker::Real {
                if let Piece::Graph(g) = p {
                    if !g.coords.iter().all(GraphPoly::is_real) {
                        return Err(FlatError::ComplexDataInRealMode);
                    }
                }
            }
            if p.intrinsic_dim(marker) > declared_dim {
                return Err(FlatError::DeclaredDimTooSmall);
            }
        }
        Ok(VarietyInput { field: field.clone(), coord_dim, marker, declared_dim, pieces })
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coord_dim(&self) -> usize {
        self.coord_dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.marker.real_dim(self.coord_dim)
    }

    pub fn marker(&self) -> FieldMarker {
        self.marker
    }

    pub fn declared_dim(&self) -> usize {
        self.declared_dim
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_symbolic(&self) -> bool {
        self.pieces.iter().all(Piece::is_symbolic)
    }
}

/// Largest exponent appearing with a nonzero coefficient, or `None` for 0.
pub fn leading_exponent(c: &Coordinate) -> Option<Rational> {
    match c {
        Coordinate::Rational { num, den } if !num.is_empty() => {
            Some(Rational::from_integer((num.len() as i64 - den.len() as i64).into()))
        }
        Coordinate::Rational { .. } => None,
        Coordinate::Monomials(terms) => terms.first().map(|(_, e)| e.clone()),
    }
}
