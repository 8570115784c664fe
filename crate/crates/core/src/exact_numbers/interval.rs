//! Closed rational intervals and axis-aligned complex rectangles.
//!
//! Endpoints are exact rationals, so no outward rounding is needed: every
//! operation returns an enclosure of the exact set-level result.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{rational_to_f64, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Interval::point(Rational::zero())
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let p = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = p.iter().min().unwrap().clone();
        let hi = p.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        let (a, b) = (&self.lo * c, &self.hi * c);
        if a <= b {
            Interval::new(a, b)
        } else {
            Interval::new(b, a)
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (rational_to_f64(&self.lo), rational_to_f64(&self.hi))
    }
}

/// A rectangle `re × im` in ℂ. Real quantities have a degenerate `im = [0, 0]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rect {
    pub re: Interval,
    pub im: Interval,
}

impl Rect {
    pub fn real(re: Interval) -> Self {
        Rect { re, im: Interval::zero() }
    }

    pub fn point(re: Rational, im: Rational) -> Self {
        Rect { re: Interval::point(re), im: Interval::point(im) }
    }

    /// Larger of the two side lengths.
    pub fn width(&self) -> Rational {
        let (a, b) = (self.re.width(), self.im.width());
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains_point(&self, re: &Rational, im: &Rational) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.re.contains_interval(&other.re) && self.im.contains_interval(&other.im)
    }

    pub fn add(&self, o: &Rect) -> Rect {
        Rect { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn mul(&self, o: &Rect) -> Rect {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        Rect { re, im }
    }

    pub fn add_scalar(&self, c: &Rational) -> Rect {
        Rect { re: Interval::new(&self.re.lo + c, &self.re.hi + c), im: self.im.clone() }
    }

    pub fn to_f64(&self) -> RectF64 {
        let (rl, rh) = self.re.to_f64_pair();
        let (il, ih) = self.im.to_f64_pair();
        RectF64 { re: [rl, rh], im: [il, ih] }
    }
}

/// Lossy view of a rectangle for reports.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RectF64 {
    pub re: [f64; 2],
    pub im: [f64; 2],
}
