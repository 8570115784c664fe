use std::sync::Arc;

use proptest::prelude::*;

use flowset::asymptotics::{
    affine_asymptotic_family, branch_asymptotic_flats, expand_at_infinity, variety_asymptotic_flats, ScalarMode,
};
use flowset::exact_numbers::{AlgebraicNumber, ComplexScalar, NumberField};
use flowset::flats_and_varieties::{
    family_linear_span, linear_part, perp_base_point, BaseSetDescriptor, Coordinate, Flat, FlatFamily,
    ParametricBranch, Piece, VarietyInput, C64,
};
use flowset::lattice_algebra::{vec_to_f64, FieldMarker, KVector, Subspace};

const R: FieldMarker = FieldMarker::Real;

fn k() -> Arc<NumberField> {
    NumberField::rationals()
}

fn c(k: &Arc<NumberField>, n: i64) -> ComplexScalar {
    ComplexScalar::real(AlgebraicNumber::from_int(k, n))
}

fn cs(k: &Arc<NumberField>, xs: &[i64]) -> Vec<ComplexScalar> {
    xs.iter().map(|&x| c(k, x)).collect()
}

fn v(k: &Arc<NumberField>, xs: &[i64]) -> KVector {
    xs.iter().map(|&x| AlgebraicNumber::from_int(k, x)).collect()
}

fn ratio(k: &Arc<NumberField>, num: &[i64], den: &[i64]) -> Coordinate {
    Coordinate::rational(cs(k, num), cs(k, den)).unwrap()
}

fn branch(k: &Arc<NumberField>, coords: Vec<Coordinate>) -> ParametricBranch {
    ParametricBranch::new(coords, cs(k, &[1, -1]), R).unwrap()
}

fn span(k: &Arc<NumberField>, n: usize, vs: &[&[i64]]) -> Subspace {
    let vs: Vec<KVector> = vs.iter().map(|x| v(k, x)).collect();
    Subspace::real_span(k, n, R, &vs)
}

/// Euclidean distance from `p` to the flat, by Gram–Schmidt in f64.
fn distance_to_flat(p: &[f64], f: &Flat) -> f64 {
    let mut r: Vec<f64> = p.iter().zip(f.base_f64()).map(|(a, b)| a - b).collect();
    let mut q: Vec<Vec<f64>> = Vec::new();
    for d in f.directions().basis_f64() {
        let mut u = d.clone();
        for e in &q {
            let dot: f64 = u.iter().zip(e).map(|(a, b)| a * b).sum();
            u.iter_mut().zip(e).for_each(|(a, b)| *a -= dot * b);
        }
        let n = u.iter().map(|a| a * a).sum::<f64>().sqrt();
        q.push(u.iter().map(|a| a / n).collect());
    }
    for e in &q {
        let dot: f64 = r.iter().zip(e).map(|(a, b)| a * b).sum();
        r.iter_mut().zip(e).for_each(|(a, b)| *a -= dot * b);
    }
    r.iter().map(|a| a * a).sum::<f64>().sqrt()
}

#[test]
fn expansions_by_long_division() {
    let k = k();
    // (t, (t²+1)/t): divergent (1,1) at e = 1, constant 0.
    let b = branch(&k, vec![ratio(&k, &[0, 1], &[1]), ratio(&k, &[1, 0, 1], &[0, 1])]);
    let e = expand_at_infinity(&b);
    let div: Vec<_> = e.divergent_terms().collect();
    assert_eq!(div.len(), 1);
    assert_eq!(div[0].coeffs, cs(&k, &[1, 1]));
    assert!(e.constant_term().is_none_or(|t| t.coeffs.iter().all(ComplexScalar::is_zero)));

    // (t³+2t)/(t²+1) = t + t/(t²+1).
    let b = branch(&k, vec![ratio(&k, &[0, 2, 0, 1], &[1, 0, 1])]);
    let e = expand_at_infinity(&b);
    assert_eq!(e.divergent_terms().map(|t| t.coeffs.clone()).collect::<Vec<_>>(), vec![cs(&k, &[1])]);

    // (t, 5 + 1/t).
    let b = branch(&k, vec![ratio(&k, &[0, 1], &[1]), ratio(&k, &[1, 5], &[0, 1])]);
    let e = expand_at_infinity(&b);
    assert_eq!(e.constant_term().unwrap().coeffs, cs(&k, &[0, 5]));
}

#[test]
fn flats_of_worked_branches() {
    let k = k();
    let full = Subspace::full(&k, 2, R);
    let horizontal = span(&k, 2, &[&[1, 0]]);
    let parabola = branch(&k, vec![ratio(&k, &[0, 1], &[1]), ratio(&k, &[0, 0, 1], &[1])]);
    assert!(branch_asymptotic_flats(&parabola, &horizontal, ScalarMode::Real).unwrap().is_empty());
    let hyper = branch(&k, vec![ratio(&k, &[0, 1], &[1]), ratio(&k, &[1], &[0, 1])]);
    let flats = branch_asymptotic_flats(&hyper, &full, ScalarMode::Real).unwrap();
    assert_eq!(flats, vec![Flat::new(v(&k, &[0, 0]), horizontal.clone())]);
    // Numeric oracle: branch points approach the x-axis.
    for t in [1e2, 1e4] {
        let p = hyper.eval_f64(C64::new(t, 0.0), R);
        assert!(distance_to_flat(&p, &flats[0]) <= 1.0 / t + 1e-12);
    }
}

#[test]
fn affine_families_and_varieties() {
    let k = k();
    let horizontal = span(&k, 2, &[&[1, 0]]);
    let diagonal = Flat::new(v(&k, &[0, 0]), span(&k, 2, &[&[1, 1]]));
    assert!(affine_asymptotic_family(&diagonal, &horizontal).is_none());
    let x_axis = Flat::new(v(&k, &[0, 0]), horizontal.clone());
    match affine_asymptotic_family(&x_axis, &Subspace::full(&k, 2, R)).unwrap() {
        FlatFamily::Translate { base: BaseSetDescriptor::Affine(b), direction } => {
            assert_eq!(direction, horizontal);
            assert_eq!(b.dim(), 0);
        }
        other => panic!("{other:?}"),
    }

    // ℂ² with L = ℂ × {0}: the family {ℂ × {c}}.
    let plane = Flat::new(v(&k, &[0, 0, 0, 0]), Subspace::full(&k, 4, FieldMarker::Complex));
    let l = Subspace::span(&k, 4, FieldMarker::Complex, &[v(&k, &[1, 0, 0, 0])]);
    match affine_asymptotic_family(&plane, &l).unwrap() {
        FlatFamily::Translate { base: BaseSetDescriptor::Affine(b), direction } => {
            assert_eq!(direction, l);
            assert_eq!(b.dim(), 2);
        }
        other => panic!("{other:?}"),
    }

    // ℝ² plus a bounded branch (1/t, 1/t): only the affine family survives.
    let bounded = branch(&k, vec![ratio(&k, &[1], &[0, 1]), ratio(&k, &[1], &[0, 1])]);
    let x = VarietyInput::new(
        &k,
        2,
        R,
        2,
        vec![Piece::Affine(Flat::new(v(&k, &[0, 0]), Subspace::full(&k, 2, R))), Piece::Branch(bounded)],
    )
    .unwrap();
    let fams = variety_asymptotic_flats(&x, &horizontal, ScalarMode::Real).unwrap();
    assert_eq!(fams.len(), 1);
    assert!(matches!(fams[0], FlatFamily::Translate { .. }));

    // Hyperbola as two branches: the two axes.
    let b1 = branch(&k, vec![ratio(&k, &[0, 1], &[1]), ratio(&k, &[1], &[0, 1])]);
    let b2 = branch(&k, vec![ratio(&k, &[1], &[0, 1]), ratio(&k, &[0, 1], &[1])]);
    let x = VarietyInput::new(&k, 2, R, 1, vec![Piece::Branch(b1), Piece::Branch(b2)]).unwrap();
    let fams = variety_asymptotic_flats(&x, &Subspace::full(&k, 2, R), ScalarMode::Real).unwrap();
    match &fams[..] {
        [FlatFamily::Finite(fl)] => {
            assert_eq!(fl.len(), 2);
            assert_eq!(family_linear_span(&fams[0]).unwrap(), Subspace::full(&k, 2, R));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn flat_helpers() {
    let k = k();
    let horizontal = span(&k, 2, &[&[1, 0]]);
    let a = Flat::new(v(&k, &[3, 5]), horizontal.clone());
    assert_eq!(linear_part(&a), horizontal);
    assert_eq!(perp_base_point(&a, &horizontal).unwrap(), v(&k, &[0, 5]));
    let x_axis = Flat::new(v(&k, &[0, 0]), horizontal.clone());
    assert_eq!(perp_base_point(&x_axis, &horizontal).unwrap(), v(&k, &[0, 0]));
    let d = Flat::new(v(&k, &[3, 4]), span(&k, 2, &[&[1, 1]]));
    assert_eq!(perp_base_point(&d, &Subspace::full(&k, 2, R)).unwrap(), v(&k, &[0, 0]));
    assert!(perp_base_point(&d, &horizontal).is_err());
    assert_eq!(linear_part(&Flat::point(v(&k, &[1, 2]), &k, R)).dim(), 0);
}

fn small_poly(max_deg: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 1..=max_deg + 1)
}

fn monic_den() -> impl Strategy<Value = Vec<i64>> {
    // Monic, degree 0..=2, nonvanishing for |t| ≥ 10.
    prop::collection::vec(-3i64..=3, 0..=2).prop_map(|mut d| {
        d.push(1);
        d
    })
}

fn random_branch() -> impl Strategy<Value = Vec<(Vec<i64>, Vec<i64>)>> {
    prop::collection::vec((small_poly(3), monic_den()), 2..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn branch_flats_are_sound(coords in random_branch(), basis_pick in 0usize..3) {
        let k = k();
        let n = coords.len();
        let cs_: Vec<Coordinate> = coords.iter().map(|(a, b)| ratio(&k, a, b)).collect();
        let b = branch(&k, cs_);
        let full = Subspace::full(&k, n, R);
        let flats = branch_asymptotic_flats(&b, &full, ScalarMode::Real).unwrap();
        let e = expand_at_infinity(&b);
        for f in &flats {
            prop_assert!(f.dim() > 0);
        }
        // Soundness along the +1 ray.
        if let Some(f) = flats.iter().find(|f| {
            let p = b.eval_f64(C64::new(1e5, 0.0), R);
            distance_to_flat(&p, f) < 1.0
        }) {
            let mut last = f64::INFINITY;
            for t in [1e3, 1e4, 1e5] {
                let p = b.eval_f64(C64::new(t, 0.0), R);
                let d = distance_to_flat(&p, f);
                let bound = e.remainder.at(t);
                prop_assert!(t >= e.remainder.t0);
                prop_assert!(d <= bound * (1.0 + 1e-9) + 1e-9 * p.iter().map(|x| x.abs()).fold(1.0, f64::max), "d={d} bound={bound}");
                prop_assert!(bound <= last);
                last = bound;
            }
        }
        // Monotonicity in L: a flat found for a smaller L is still found for ℝⁿ.
        let mut axis = vec![0i64; n];
        axis[basis_pick % n] = 1;
        let small = span(&k, n, &[&axis]);
        for f in branch_asymptotic_flats(&b, &small, ScalarMode::Real).unwrap() {
            prop_assert!(flats.contains(&f));
            prop_assert!(small.contains(f.directions()));
        }
    }

    #[test]
    fn flats_are_canonical(p in prop::collection::vec(-9i64..=9, 3), s in -5i64..=5, d in prop::collection::vec(-3i64..=3, 3)) {
        prop_assume!(d.iter().any(|x| *x != 0));
        let k = k();
        let dirs = span(&k, 3, &[&d]);
        let shifted: Vec<i64> = p.iter().zip(&d).map(|(a, b)| a + s * b).collect();
        let f1 = Flat::new(v(&k, &p), dirs.clone());
        let f2 = Flat::new(v(&k, &shifted), dirs.clone());
        prop_assert_eq!(&f1, &f2);
        let base = vec_to_f64(f1.base_point());
        let dot: f64 = base.iter().zip(&d).map(|(a, b)| a * *b as f64).sum();
        prop_assert!(dot.abs() < 1e-9);
        let full = Subspace::full(&k, 3, R);
        let q = perp_base_point(&f1, &dirs).unwrap();
        prop_assert!(f1.contains_point(&q));
        prop_assert!(perp_base_point(&f1, &full).unwrap().iter().all(AlgebraicNumber::is_zero));
    }
}
