use crate::exact_numbers::ComplexScalar;
use crate::flats_and_varieties::{BaseSetDescriptor, Flat, FlatFamily, ParametricBranch, Piece, VarietyInput};
use crate::lattice_algebra::{realify, zero_vector, FieldMarker, KVector, Subspace};

use super::expansion::expand_at_infinity;
use super::AsymptoticsError;

/// Scalars used for the span of a branch's divergent directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarMode {
    Real,
    Complex,
}

fn is_plus_one(w: &ComplexScalar) -> bool {
    w.is_real() && w.re.is_one()
}

/// The asymptotic flat of `branch` along ray `ray`, if its linear part lies in `l`.
///
/// With `v₀` the constant term and `D` the divergent coefficient vectors,
/// the flat is `v₀ + span(D)`. Bounded branches (empty `D`) have none.
pub fn branch_asymptotic_flat(
    branch: &ParametricBranch,
    ray: usize,
    l: &Subspace,
    mode: ScalarMode,
) -> Result<Option<Flat>, AsymptoticsError> {
    let marker = l.marker();
    let field = l.field();
    let mut expansion = expand_at_infinity(branch);
    let omega = &branch.rays()[ray];
    if mode == ScalarMode::Real && !is_plus_one(omega) {
        expansion = expansion.on_ray(omega)?;
    }
    let divergent: Vec<KVector> =
        expansion.divergent_terms().map(|t| realify(&t.coeffs, marker)).collect::<Result<_, _>>()?;
    if divergent.is_empty() {
        return Ok(None);
    }
    let span = match mode {
        ScalarMode::Complex => Subspace::span(field, l.ambient(), marker, &divergent),
        ScalarMode::Real => Subspace::real_span(field, l.ambient(), marker, &divergent),
    };
    if !l.contains(&span) {
        return Ok(None);
    }
    let v0 = match expansion.constant_term() {
        Some(t) => realify(&t.coeffs, marker)?,
        None => zero_vector(field, l.ambient()),
    };
    Ok(Some(Flat::new(v0, span)))
}

/// Flats over all declared rays, sorted and deduplicated. A ℂ-span does not
/// depend on the ray, so complex mode looks at the first ray only.
pub fn branch_asymptotic_flats(
    branch: &ParametricBranch,
    l: &Subspace,
    mode: ScalarMode,
) -> Result<Vec<Flat>, AsymptoticsError> {
    let rays = match (mode, l.marker()) {
        (ScalarMode::Complex, FieldMarker::Complex) => 1,
        _ => branch.rays().len(),
    };
    let mut out = Vec::new();
    for r in 0..rays {
        if let Some(f) = branch_asymptotic_flat(branch, r, l, mode)? {
            out.push(f);
        }
    }
    sort_dedup(&mut out);
    Ok(out)
}

fn sort_dedup(flats: &mut Vec<Flat>) {
    flats.sort_by(|a, b| a.canonical_cmp(b));
    flats.dedup();
}

/// For an affine piece `c + P`: all translates of `Q = P ∩ l` through the
/// projection of the piece onto `Q^⊥`, or `None` when `Q = 0`.
pub fn affine_asymptotic_family(piece: &Flat, l: &Subspace) -> Option<FlatFamily> {
    let q = piece.directions().intersection(l);
    if q.is_zero() {
        return None;
    }
    let rest = piece.directions().intersection(&q.orthogonal_complement());
    let base = Flat::new(q.reject(piece.base_point()), rest);
    Some(FlatFamily::Translate { base: BaseSetDescriptor::Affine(base), direction: q })
}

/// Positive-dimensional asymptotic flats of `x` with linear part in `l`.
/// Branch flats are returned as one finite family.
pub fn variety_asymptotic_flats(
    x: &VarietyInput,
    l: &Subspace,
    mode: ScalarMode,
) -> Result<Vec<FlatFamily>, AsymptoticsError> {
    let mut flats = Vec::new();
    let mut families: Vec<FlatFamily> = Vec::new();
    for piece in x.pieces() {
        match piece {
            Piece::Branch(b) => flats.extend(branch_asymptotic_flats(b, l, mode)?),
            Piece::Affine(a) => {
                if let Some(f) = affine_asymptotic_family(a, l) {
                    if !families.contains(&f) {
                        families.push(f);
                    }
                }
            }
            Piece::Graph(_) => {
                return Err(AsymptoticsError::SymbolicUnsupported(
                    "graph pieces are evaluated numerically only; supply a predicted flow and use verify".into(),
                ))
            }
        }
    }
    sort_dedup(&mut flats);
    families.sort_by(|a, b| match (a, b) {
        (FlatFamily::Translate { base: ba, direction: da }, FlatFamily::Translate { base: bb, direction: db }) => {
            da.canonical_cmp(db).then_with(|| ba.canonical_cmp(bb))
        }
        _ => std::cmp::Ordering::Equal,
    });
    let mut out = Vec::new();
    if !flats.is_empty() {
        out.push(FlatFamily::Finite(flats));
    }
    out.extend(families);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::exact_numbers::{AlgebraicNumber, NumberField};
    use crate::flats_and_varieties::Coordinate;

    fn c(k: &Arc<NumberField>, n: i64) -> ComplexScalar {
        ComplexScalar::real(AlgebraicNumber::from_int(k, n))
    }

    fn v(k: &Arc<NumberField>, xs: &[i64]) -> KVector {
        xs.iter().map(|&x| AlgebraicNumber::from_int(k, x)).collect()
    }

    fn branch(k: &Arc<NumberField>, coords: Vec<Coordinate>) -> ParametricBranch {
        ParametricBranch::new(coords, vec![c(k, 1), c(k, -1)], FieldMarker::Real).unwrap()
    }

    #[test]
    fn parabola_has_no_flat_in_horizontal_l() {
        let k = NumberField::rationals();
        let t = Coordinate::polynomial(vec![c(&k, 0), c(&k, 1)], &k);
        let t2 = Coordinate::polynomial(vec![c(&k, 0), c(&k, 0), c(&k, 1)], &k);
        let l = Subspace::span(&k, 2, FieldMarker::Real, &[v(&k, &[1, 0])]);
        assert!(branch_asymptotic_flats(&branch(&k, vec![t, t2]), &l, ScalarMode::Real).unwrap().is_empty());
    }

    #[test]
    fn shifted_hyperbola_branch() {
        let k = NumberField::rationals();
        let t = Coordinate::polynomial(vec![c(&k, 0), c(&k, 1)], &k);
        let y = Coordinate::rational(vec![c(&k, 1), c(&k, 5)], vec![c(&k, 0), c(&k, 1)]).unwrap();
        let full = Subspace::full(&k, 2, FieldMarker::Real);
        let flats = branch_asymptotic_flats(&branch(&k, vec![t, y]), &full, ScalarMode::Real).unwrap();
        let expected = Flat::new(v(&k, &[0, 5]), Subspace::span(&k, 2, FieldMarker::Real, &[v(&k, &[1, 0])]));
        assert_eq!(flats, vec![expected]);
    }

    #[test]
    fn affine_families() {
        let k = NumberField::rationals();
        let x_axis = Subspace::span(&k, 2, FieldMarker::Real, &[v(&k, &[1, 0])]);
        let plane = Flat::new(v(&k, &[0, 0]), Subspace::full(&k, 2, FieldMarker::Real));
        match affine_asymptotic_family(&plane, &x_axis).unwrap() {
            FlatFamily::Translate { base: BaseSetDescriptor::Affine(b), direction } => {
                assert_eq!(direction, x_axis);
                assert_eq!(b.directions(), &Subspace::span(&k, 2, FieldMarker::Real, &[v(&k, &[0, 1])]));
            }
            other => panic!("unexpected {other:?}"),
        }
        let diagonal = Flat::new(v(&k, &[0, 0]), Subspace::span(&k, 2, FieldMarker::Real, &[v(&k, &[1, 1])]));
        assert!(affine_asymptotic_family(&diagonal, &x_axis).is_none());
    }
}
