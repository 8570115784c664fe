use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::field::NumberField;
use super::interval::{Interval, Rect};
use super::poly::QPoly;
use super::{rational_to_f64, NumberError, Rational};

/// An element of a [`NumberField`], stored as rational coordinates over the
/// power basis `1, θ, …, θ^{d-1}`.
///
/// The operator impls (`+`, `-`, `*`) panic when the operands live in
/// different fields; use the `checked_*` methods at trust boundaries.
#[derive(Clone)]
pub struct AlgebraicNumber {
    field: Arc<NumberField>,
    coords: Vec<Rational>,
}

impl AlgebraicNumber {
    pub fn from_coords(field: &Arc<NumberField>, coords: Vec<Rational>) -> Result<Self, NumberError> {
        if coords.len() > field.degree() {
            // Allow over-long inputs by reducing them.
            return Ok(Self::from_poly(field, &QPoly::new(coords)));
        }
        let mut coords = coords;
        coords.resize(field.degree(), Rational::zero());
        Ok(AlgebraicNumber { field: field.clone(), coords })
    }

    /// Reduce an arbitrary polynomial in θ modulo the minimal polynomial.
    pub fn from_poly(field: &Arc<NumberField>, p: &QPoly) -> Self {
        let r = p.rem(field.min_poly());
        let mut coords = r.coeffs().to_vec();
        coords.resize(field.degree(), Rational::zero());
        AlgebraicNumber { field: field.clone(), coords }
    }

    pub fn from_rational(field: &Arc<NumberField>, q: Rational) -> Self {
        let mut coords = vec![Rational::zero(); field.degree()];
        coords[0] = q;
        AlgebraicNumber { field: field.clone(), coords }
    }

    pub fn from_int(field: &Arc<NumberField>, n: i64) -> Self {
        Self::from_rational(field, Rational::from_integer(BigInt::from(n)))
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, 1)
    }

    /// The generator θ.
    pub fn theta(field: &Arc<NumberField>) -> Self {
        Self::from_poly(field, &QPoly::monomial(1))
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn as_poly(&self) -> QPoly {
        QPoly::new(self.coords.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational, when it has no θ-component.
    pub fn as_rational(&self) -> Option<Rational> {
        self.coords[1..].iter().all(Zero::is_zero).then(|| self.coords[0].clone())
    }

    pub fn same_field(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field
    }

    fn check(&self, other: &Self) -> Result<(), NumberError> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(NumberError::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, NumberError> {
        self.check(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(AlgebraicNumber { field: self.field.clone(), coords })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, NumberError> {
        self.check(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        Ok(AlgebraicNumber { field: self.field.clone(), coords })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, NumberError> {
        self.check(other)?;
        if self.field.degree() == 1 {
            return Ok(Self::from_rational(&self.field, &self.coords[0] * &other.coords[0]));
        }
        Ok(Self::from_poly(&self.field, &self.as_poly().mul(&other.as_poly())))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, NumberError> {
        self.check(other)?;
        self.checked_mul(&other.inverse()?)
    }

    pub fn inverse(&self) -> Result<Self, NumberError> {
        if self.is_zero() {
            return Err(NumberError::DivisionByZero);
        }
        if self.field.degree() == 1 {
            return Ok(Self::from_rational(&self.field, self.coords[0].recip()));
        }
        let (g, s, _) = self.as_poly().ext_gcd(self.field.min_poly());
        if g.degree() != Some(0) {
            return Err(NumberError::Reducible);
        }
        Ok(Self::from_poly(&self.field, &s))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        AlgebraicNumber { field: self.field.clone(), coords: self.coords.iter().map(|c| c * q).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// A rectangle of width at most `eps` containing the embedded value.
    /// Rational values come back as a degenerate point.
    pub fn approximate(&self, eps: &Rational) -> Rect {
        assert!(eps.is_positive(), "approximation width must be positive");
        if let Some(q) = self.as_rational() {
            return Rect::point(q, Rational::zero());
        }
        // Width of the Horner evaluation is roughly |p'(θ)|·(enclosure width),
        // so tighten the enclosure until the target is met.
        let mut radius = eps / Rational::from_integer(BigInt::from(4));
        loop {
            let theta = self.field.theta_enclosure(&radius);
            let value = self.eval_on(&theta);
            if &value.width() <= eps {
                return value;
            }
            radius /= Rational::from_integer(BigInt::from(1u64 << 20));
        }
    }

    fn eval_on(&self, theta: &Rect) -> Rect {
        let is_real = !self.field.is_complex();
        let mut acc = Rect::point(Rational::zero(), Rational::zero());
        for c in self.coords.iter().rev() {
            acc = acc.mul(theta).add_scalar(c);
        }
        if is_real {
            acc.im = Interval::zero();
        }
        acc
    }

    /// Sign of a real-embedded number, decided exactly.
    pub fn signum(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let mut eps = Rational::new(BigInt::one(), BigInt::from(1u64 << 20));
        loop {
            let r = self.approximate(&eps).re;
            if r.lo.is_positive() {
                return Ordering::Greater;
            }
            if r.hi.is_negative() {
                return Ordering::Less;
            }
            eps /= Rational::from_integer(BigInt::from(1u64 << 32));
        }
    }

    /// Fast non-certified evaluation of the embedded value.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        let (tr, ti) = self.field.theta_f64();
        let (mut ar, mut ai) = (0.0, 0.0);
        for c in self.coords.iter().rev() {
            let c = rational_to_f64(c);
            let nr = ar * tr - ai * ti + c;
            let ni = ar * ti + ai * tr;
            ar = nr;
            ai = ni;
        }
        (ar, ai)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_complex_f64().0
    }

    /// Deterministic total order on representations (not the numeric order).
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.coords.iter().cmp(other.coords.iter())
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other) && self.coords == other.coords
    }
}

impl Eq for AlgebraicNumber {}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if wrote {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            } else if neg {
                write!(f, "-")?;
            }
            wrote = true;
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "theta")?,
                (1, false) => write!(f, "{a}*theta")?,
                (_, true) => write!(f, "theta^{k}")?,
                (_, false) => write!(f, "{a}*theta^{k}")?,
            }
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a AlgebraicNumber> for &'a AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn add(self, rhs: &'a AlgebraicNumber) -> AlgebraicNumber {
        self.checked_add(rhs).expect("field mismatch")
    }
}

impl<'a> Sub<&'a AlgebraicNumber> for &'a AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn sub(self, rhs: &'a AlgebraicNumber) -> AlgebraicNumber {
        self.checked_sub(rhs).expect("field mismatch")
    }
}

impl<'a> Mul<&'a AlgebraicNumber> for &'a AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn mul(self, rhs: &'a AlgebraicNumber) -> AlgebraicNumber {
        self.checked_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn neg(self) -> AlgebraicNumber {
        AlgebraicNumber { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }
}

/// Power-basis coordinates of each entry: row `i` holds the coordinates of `v[i]`.
pub fn rational_coordinates(v: &[AlgebraicNumber], field: &Arc<NumberField>) -> Result<Vec<Vec<Rational>>, NumberError> {
    v.iter()
        .map(|a| {
            if Arc::ptr_eq(a.field(), field) || **a.field() == **field {
                Ok(a.coords().to_vec())
            } else {
                Err(NumberError::FieldMismatch)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_numbers::interval::Interval;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn zeta8() -> Arc<NumberField> {
        let sel = Rect { re: Interval::new(q(1, 2), q(1, 1)), im: Interval::new(q(1, 2), q(1, 1)) };
        NumberField::new(QPoly::from_i64(&[1, 0, 0, 0, 1]), sel, true).unwrap()
    }

    #[test]
    fn defining_relation() {
        let k = NumberField::real_quadratic(2).unwrap();
        let t = AlgebraicNumber::theta(&k);
        assert_eq!(&t * &t, AlgebraicNumber::from_int(&k, 2));
    }

    #[test]
    fn zeta8_squared_is_i() {
        let k = zeta8();
        let t = AlgebraicNumber::theta(&k);
        let sq = &t * &t;
        assert_eq!(sq.coords(), &[q(0, 1), q(0, 1), q(1, 1), q(0, 1)]);
        let r = sq.approximate(&q(1, 1_000_000));
        assert!(r.re.contains(&q(0, 1)) && r.im.contains(&q(1, 1)));
        // The high-precision floating oracle: e^{iπ/2}.
        let (re, im) = sq.to_complex_f64();
        assert!(re.abs() < 1e-12 && (im - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sqrt2_approximation() {
        let k = NumberField::real_quadratic(2).unwrap();
        let t = AlgebraicNumber::theta(&k);
        let eps = q(1, 1_000_000);
        let r = t.approximate(&eps);
        assert!(r.re.width() <= eps);
        // 1.41421356237309504880168872420969807856967187537694 (50 digits)
        let sqrt2 = Rational::new(
            "141421356237309504880168872420969807856967187537694".parse().unwrap(),
            BigInt::from(10).pow(50),
        );
        // The truncation sits below √2 by less than 1e-50.
        let ulp = Rational::new(BigInt::one(), BigInt::from(10).pow(50));
        assert!(r.re.lo <= &sqrt2 + &ulp && sqrt2 <= r.re.hi);
    }

    #[test]
    fn rational_is_a_degenerate_interval() {
        let k = NumberField::real_quadratic(2).unwrap();
        let r = AlgebraicNumber::from_rational(&k, q(3, 4)).approximate(&q(1, 10));
        assert_eq!(r.re, Interval::point(q(3, 4)));
        assert_eq!(r.im, Interval::zero());
    }

    #[test]
    fn zeta8_rectangle() {
        let k = zeta8();
        let r = AlgebraicNumber::theta(&k).approximate(&q(1, 1000));
        assert!(r.width() <= q(1, 1000));
        // √2/2 = 0.70710678118654752440...
        let h = Rational::new(BigInt::from(7071067811865475_i64), BigInt::from(10_000_000_000_000_000_i64));
        assert!(r.re.lo <= h && h <= r.re.hi + q(1, 1_000_000_000_000) && r.im.lo <= h);
    }

    #[test]
    fn division_and_errors() {
        let k = NumberField::real_quadratic(2).unwrap();
        let a = AlgebraicNumber::from_coords(&k, vec![q(1, 1), q(2, 1)]).unwrap();
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_one());
        assert_eq!(a.checked_div(&AlgebraicNumber::zero(&k)).unwrap_err(), NumberError::DivisionByZero);
        let k3 = NumberField::real_quadratic(3).unwrap();
        assert_eq!(a.checked_add(&AlgebraicNumber::one(&k3)).unwrap_err(), NumberError::FieldMismatch);
    }

    #[test]
    fn coordinates() {
        let k = NumberField::real_quadratic(2).unwrap();
        let v = vec![AlgebraicNumber::one(&k), AlgebraicNumber::theta(&k)];
        assert_eq!(rational_coordinates(&v, &k).unwrap(), vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]]);
        let w = AlgebraicNumber::from_coords(&k, vec![q(1, 1), q(2, 1)]).unwrap();
        assert_eq!(rational_coordinates(&[w], &k).unwrap(), vec![vec![q(1, 1), q(2, 1)]]);
        let z = zeta8();
        let t3 = AlgebraicNumber::theta(&z).pow(3);
        assert_eq!(rational_coordinates(&[t3], &z).unwrap(), vec![vec![q(0, 1), q(0, 1), q(0, 1), q(1, 1)]]);
        let k3 = NumberField::real_quadratic(3).unwrap();
        assert!(rational_coordinates(&[AlgebraicNumber::one(&k3)], &k).is_err());
    }

    #[test]
    fn signum_of_small_difference() {
        let k = NumberField::real_quadratic(2).unwrap();
        // 140/99 < √2 < 99/70
        let t = AlgebraicNumber::theta(&k);
        let a = &t - &AlgebraicNumber::from_rational(&k, q(99, 70));
        let b = &t - &AlgebraicNumber::from_rational(&k, q(140, 99));
        assert_eq!(a.signum(), Ordering::Less);
        assert_eq!(b.signum(), Ordering::Greater);
    }
}
