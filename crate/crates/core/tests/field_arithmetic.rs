use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use flowset::exact_numbers::{AlgebraicNumber, Interval, NumberField, QPoly, Rational, Rect};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn cubic() -> Arc<NumberField> {
    let sel = Rect { re: Interval::new(q(1, 1), q(2, 1)), im: Interval::zero() };
    NumberField::new(QPoly::from_i64(&[-2, 0, 0, 1]), sel, false).unwrap()
}

fn element(k: Arc<NumberField>) -> impl Strategy<Value = AlgebraicNumber> {
    let d = k.degree();
    prop::collection::vec((-30i64..=30, 1i64..=7), d).prop_map(move |cs| {
        AlgebraicNumber::from_coords(&k, cs.into_iter().map(|(n, m)| q(n, m)).collect()).unwrap()
    })
}

/// Bisection oracle for the real root of `p` in `[lo, hi]`.
fn root_enclosure(p: &QPoly, mut lo: Rational, mut hi: Rational, width: &Rational) -> (Rational, Rational) {
    let eval = |x: &Rational| p.coeffs().iter().rev().fold(Rational::zero(), |acc, c| acc * x + c);
    let lo_sign = eval(&lo).is_positive();
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / q(2, 1);
        if eval(&mid).is_positive() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Interval Horner evaluation of `a` at `[lo, hi]`.
fn interval_eval(a: &AlgebraicNumber, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    let mut acc = (Rational::zero(), Rational::zero());
    for c in a.coords().iter().rev() {
        let ps = [&acc.0 * lo, &acc.0 * hi, &acc.1 * lo, &acc.1 * hi];
        let mn = ps.iter().min().unwrap().clone();
        let mx = ps.iter().max().unwrap().clone();
        acc = (mn + c, mx + c);
    }
    acc
}

fn axioms(k: Arc<NumberField>) -> impl Strategy<Value = (AlgebraicNumber, AlgebraicNumber, AlgebraicNumber)> {
    (element(k.clone()), element(k.clone()), element(k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn quadratic_field_axioms((a, b, c) in axioms(NumberField::real_quadratic(2).unwrap())) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inverse().unwrap()).is_one());
        }
    }

    #[test]
    fn cubic_field_axioms((a, b, c) in axioms(cubic())) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.inverse().unwrap()).is_one());
            prop_assert_eq!(b.checked_div(&a).unwrap(), &b * &a.inverse().unwrap());
        }
    }

    #[test]
    fn approximation_contains_reference_value(a in element(cubic()), k in 4u32..40) {
        let eps = q(1, 1) / Rational::from_integer(BigInt::from(2).pow(k));
        let r = a.approximate(&eps);
        prop_assert!(r.re.width() <= eps);
        let field = a.field().clone();
        let (lo, hi) = root_enclosure(field.min_poly(), q(1, 1), q(2, 1), &q(1, 10i64.pow(15)));
        let (vlo, vhi) = interval_eval(&a, &lo, &hi);
        // The reference enclosure must meet the approximation.
        prop_assert!(vlo <= r.re.hi && r.re.lo <= vhi, "{:?} vs [{vlo}, {vhi}]", r.re);
    }

    #[test]
    fn finer_approximations_are_nested(a in element(NumberField::real_quadratic(2).unwrap())) {
        let coarse = a.approximate(&q(1, 1000));
        let fine = a.approximate(&q(1, 1_000_000));
        prop_assert!(fine.re.lo >= &coarse.re.lo - q(1, 1000) && fine.re.hi <= &coarse.re.hi + q(1, 1000));
        prop_assert!(fine.re.width() <= q(1, 1_000_000));
    }
}

#[test]
fn sqrt2_to_a_millionth() {
    let k = NumberField::real_quadratic(2).unwrap();
    let r = AlgebraicNumber::theta(&k).approximate(&q(1, 1_000_000));
    assert!(r.re.width() <= q(1, 1_000_000));
    // √2 lies in [reference, reference + 10⁻⁴⁹].
    let reference = Rational::new(
        "14142135623730950488016887242096980785696718753769".parse().unwrap(),
        BigInt::from(10).pow(49),
    );
    let upper = &reference + Rational::new(BigInt::one(), BigInt::from(10).pow(49));
    assert!(r.re.lo <= upper && r.re.hi >= reference, "{:?}", r.re.to_f64_pair());
}

#[test]
fn eighth_root_of_unity() {
    let sel = Rect { re: Interval::new(q(1, 2), q(1, 1)), im: Interval::new(q(1, 2), q(1, 1)) };
    let k = NumberField::new(QPoly::from_i64(&[1, 0, 0, 0, 1]), sel, true).unwrap();
    let r = AlgebraicNumber::theta(&k).approximate(&q(1, 1000));
    let half_sqrt2 = Rational::new(
        "70710678118654752440084436210484903928483593768847".parse().unwrap(),
        BigInt::from(10).pow(50),
    );
    let upper = &half_sqrt2 + Rational::new(BigInt::one(), BigInt::from(10).pow(50));
    assert!(r.re.lo <= upper && r.re.hi >= half_sqrt2);
    assert!(r.im.lo <= upper && r.im.hi >= half_sqrt2);
    assert!(r.width() <= q(1, 1000));
    // θ² = i, θ⁴ = -1.
    let t = AlgebraicNumber::theta(&k);
    assert_eq!(t.pow(4), -&AlgebraicNumber::one(&k));
}

#[test]
fn rejects_bad_minimal_polynomials() {
    let sel = Rect { re: Interval::new(q(0, 1), q(3, 1)), im: Interval::zero() };
    assert!(NumberField::new(QPoly::from_i64(&[-4, 0, 1]), sel.clone(), false).is_err());
    assert!(NumberField::new(QPoly::from_i64(&[-2, 0, 2]), sel.clone(), false).is_err());
    assert!(NumberField::new(QPoly::from_i64(&[1, 0, 1]), sel, false).is_err());
    assert!(AlgebraicNumber::zero(&NumberField::rationals()).inverse().is_err());
}
