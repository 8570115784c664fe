use std::fmt;
use std::sync::Arc;

use super::{AlgebraicNumber, NumberError, NumberField};

/// `a + b·i` with `a, b` in a real-embedded number field `K`.
///
/// This is arithmetic in `K(i)` without building the compositum: the real
/// and imaginary parts stay in `K`, which keeps restriction of scalars to
/// `K²` trivial.
#[derive(Clone, PartialEq, Eq)]
pub struct ComplexScalar {
    pub re: AlgebraicNumber,
    pub im: AlgebraicNumber,
}

impl ComplexScalar {
    pub fn new(re: AlgebraicNumber, im: AlgebraicNumber) -> Self {
        ComplexScalar { re, im }
    }

    pub fn real(re: AlgebraicNumber) -> Self {
        let im = AlgebraicNumber::zero(re.field());
        ComplexScalar { re, im }
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        ComplexScalar::real(AlgebraicNumber::zero(field))
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        ComplexScalar::real(AlgebraicNumber::one(field))
    }

    pub fn i(field: &Arc<NumberField>) -> Self {
        ComplexScalar { re: AlgebraicNumber::zero(field), im: AlgebraicNumber::one(field) }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.re.field()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        ComplexScalar { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ComplexScalar { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn neg(&self) -> Self {
        ComplexScalar { re: -&self.re, im: -&self.im }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let re = &(&self.re * &o.re) - &(&self.im * &o.im);
        let im = &(&self.re * &o.im) + &(&self.im * &o.re);
        ComplexScalar { re, im }
    }

    pub fn conj(&self) -> Self {
        ComplexScalar { re: self.re.clone(), im: -&self.im }
    }

    /// `|z|²`, an element of `K`.
    pub fn norm_sqr(&self) -> AlgebraicNumber {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn inverse(&self) -> Result<Self, NumberError> {
        let n = self.norm_sqr().inverse()?;
        let c = self.conj();
        Ok(ComplexScalar { re: &c.re * &n, im: &c.im * &n })
    }

    pub fn div(&self, o: &Self) -> Result<Self, NumberError> {
        Ok(self.mul(&o.inverse()?))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = ComplexScalar::one(self.field());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for ComplexScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ComplexScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "i*({})", self.im)
        } else {
            write!(f, "{} + i*({})", self.re, self.im)
        }
    }
}
