use std::cmp::Ordering;

use crate::lattice_algebra::{canonical_cmp_vec, FieldMarker, KVector, Subspace};

use super::flat::Flat;
use super::variety::{ParametricBranch, C64};

/// A curve `m ↦ γ(m)` over real parameter intervals, thickened by a subspace.
/// Infinite interval ends are allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveBase {
    pub curve: ParametricBranch,
    pub thickening: Subspace,
    pub ranges: Vec<(f64, f64)>,
}

impl CurveBase {
    pub fn point(&self, m: f64) -> Vec<f64> {
        self.curve.eval_f64(C64::new(m, 0.0), self.thickening.marker())
    }

    /// `n` parameter nodes per range; infinite ranges are spaced through `tan`.
    pub fn nodes(&self, n: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n * self.ranges.len());
        for &(lo, hi) in &self.ranges {
            let (a, b) = (to_angle(lo), to_angle(hi));
            for k in 0..n {
                let s = a + (b - a) * (k as f64 + 0.5) / n as f64;
                out.push(from_angle(s, lo, hi));
            }
        }
        out
    }
}

fn to_angle(x: f64) -> f64 {
    x.atan()
}

fn from_angle(s: f64, lo: f64, hi: f64) -> f64 {
    s.tan().clamp(lo, hi)
}

/// The set `C` a family's base points range over.
#[derive(Clone, Debug, PartialEq)]
pub enum BaseSetDescriptor {
    Affine(Flat),
    Points(Vec<KVector>),
    Curve(CurveBase),
}

impl BaseSetDescriptor {
    pub fn real_dim(&self) -> usize {
        match self {
            BaseSetDescriptor::Affine(f) => f.dim(),
            BaseSetDescriptor::Points(_) => 0,
            BaseSetDescriptor::Curve(c) => 1 + c.thickening.dim(),
        }
    }

    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        let tag = |b: &Self| match b {
            BaseSetDescriptor::Points(_) => 0,
            BaseSetDescriptor::Affine(_) => 1,
            BaseSetDescriptor::Curve(_) => 2,
        };
        match (self, other) {
            (BaseSetDescriptor::Affine(a), BaseSetDescriptor::Affine(b)) => a.canonical_cmp(b),
            (BaseSetDescriptor::Points(a), BaseSetDescriptor::Points(b)) => a
                .len()
                .cmp(&b.len())
                .then_with(|| a.iter().zip(b).map(|(x, y)| canonical_cmp_vec(x, y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)),
            _ => tag(self).cmp(&tag(other)),
        }
    }
}

/// A family of flats: finitely many, or all translates `c + direction` for
/// `c` in a base set.
#[derive(Clone, Debug, PartialEq)]
pub enum FlatFamily {
    Finite(Vec<Flat>),
    Translate { base: BaseSetDescriptor, direction: Subspace },
}

impl FlatFamily {
    pub fn marker(&self) -> Option<FieldMarker> {
        match self {
            FlatFamily::Finite(flats) => flats.first().map(Flat::marker),
            FlatFamily::Translate { direction, .. } => Some(direction.marker()),
        }
    }

    pub fn len_hint(&self) -> usize {
        match self {
            FlatFamily::Finite(f) => f.len(),
            FlatFamily::Translate { .. } => 1,
        }
    }
}

/// `L(T)`: the smallest subspace containing every member's linear part.
/// `None` for an empty finite family.
pub fn family_linear_span(t: &FlatFamily) -> Option<Subspace> {
    match t {
        FlatFamily::Finite(flats) => {
            let first = flats.first()?;
            Some(flats.iter().skip(1).fold(first.directions().clone(), |acc, f| acc.sum(f.directions())))
        }
        FlatFamily::Translate { direction, .. } => Some(direction.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_numbers::{AlgebraicNumber, NumberField};

    #[test]
    fn spans() {
        let k = NumberField::rationals();
        let e = |i: usize| -> KVector {
            (0..2).map(|j| AlgebraicNumber::from_int(&k, i64::from(i == j))).collect()
        };
        let line = |d: usize| Flat::new(e(0), Subspace::span(&k, 2, FieldMarker::Real, &[e(d)]));
        let both = FlatFamily::Finite(vec![line(0), line(1)]);
        assert_eq!(family_linear_span(&both).unwrap(), Subspace::full(&k, 2, FieldMarker::Real));
        let one = FlatFamily::Finite(vec![line(0)]);
        assert_eq!(family_linear_span(&one).unwrap(), line(0).directions().clone());
        let x_axis = Subspace::span(&k, 2, FieldMarker::Real, &[e(0)]);
        let base = Flat::new(e(0), Subspace::span(&k, 2, FieldMarker::Real, &[e(1)]));
        let tr = FlatFamily::Translate { base: BaseSetDescriptor::Affine(base), direction: x_axis.clone() };
        assert_eq!(family_linear_span(&tr).unwrap(), x_axis);
        assert!(family_linear_span(&FlatFamily::Finite(Vec::new())).is_none());
    }
}
