use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::interval::{Interval, Rect};
use super::poly::QPoly;
use super::{rational_to_f64, NumberError, Rational};

/// `ℚ[x]/(m(x))` together with a chosen root of `m` in ℝ or ℂ.
///
/// The root is pinned by an isolating rectangle with rational corners. On
/// construction we certify that exactly one root of `m` lies in that
/// rectangle using Newton inclusion disks: for squarefree `m` of degree `d`,
/// the disk around `z` of radius `d·|m(z)/m'(z)|` always contains a root.
#[derive(Debug)]
pub struct NumberField {
    min_poly: QPoly,
    derivative: QPoly,
    selector: Rect,
    is_complex: bool,
    /// Certified centre for the selected root; Newton refinement starts here.
    anchor: (Rational, Rational),
    theta_f64: (f64, f64),
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.min_poly == other.min_poly
            && self.selector == other.selector
            && self.is_complex == other.is_complex
    }
}

impl Eq for NumberField {}

impl NumberField {
    pub fn new(min_poly: QPoly, selector: Rect, is_complex: bool) -> Result<Arc<Self>, NumberError> {
        let degree = min_poly.degree().filter(|&d| d >= 1).ok_or(NumberError::DegreeTooSmall)?;
        if !min_poly.leading().unwrap().is_one() {
            return Err(NumberError::NotMonic);
        }
        let derivative = min_poly.derivative();
        if min_poly.gcd(&derivative).degree() != Some(0) {
            return Err(NumberError::NotSquarefree);
        }
        if degree <= 3 && has_rational_root(&min_poly) && degree > 1 {
            return Err(NumberError::Reducible);
        }
        if !is_complex && !selector.im.contains_zero() {
            return Err(NumberError::SelectorNotIsolating(
                "a real embedding needs a selector that meets the real axis".into(),
            ));
        }
        let anchor = certify_selector(&min_poly, &derivative, &selector, is_complex)?;
        let theta_f64 = (rational_to_f64(&anchor.0), rational_to_f64(&anchor.1));
        Ok(Arc::new(NumberField { min_poly, derivative, selector, is_complex, anchor, theta_f64 }))
    }

    /// ℚ itself, presented as `ℚ[x]/(x)`.
    pub fn rationals() -> Arc<Self> {
        let one = Rational::one();
        let sel = Rect { re: Interval::new(-&one, one.clone()), im: Interval::zero() };
        NumberField::new(QPoly::from_i64(&[0, 1]), sel, false).expect("x is a valid minimal polynomial")
    }

    /// Real quadratic field ℚ(√n) embedded at the positive root.
    pub fn real_quadratic(n: i64) -> Result<Arc<Self>, NumberError> {
        let hi = Rational::from_integer(BigInt::from(n.max(1)) + 1);
        let sel = Rect { re: Interval::new(Rational::zero(), hi), im: Interval::zero() };
        NumberField::new(QPoly::from_i64(&[-n, 0, 1]), sel, false)
    }

    pub fn min_poly(&self) -> &QPoly {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        self.min_poly.degree().unwrap()
    }

    pub fn selector(&self) -> &Rect {
        &self.selector
    }

    pub fn is_complex(&self) -> bool {
        self.is_complex
    }

    /// Floating approximation of the generator (real, imaginary).
    pub fn theta_f64(&self) -> (f64, f64) {
        self.theta_f64
    }

    /// A rectangle containing the generator, with half-width at most `radius`.
    pub fn theta_enclosure(&self, radius: &Rational) -> Rect {
        let d = Rational::from_integer(BigInt::from(self.degree()));
        let (mut re, mut im) = self.anchor.clone();
        let mut bits: u64 = 64;
        for _ in 0..200 {
            if let Some(rho) = inclusion_radius(&self.min_poly, &self.derivative, &d, &re, &im) {
                if &rho <= radius {
                    let rect = disk_rect(&re, &im, &rho, self.is_complex);
                    if self.selector.contains_rect(&rect) {
                        return rect;
                    }
                }
            } else {
                // Landed exactly on the root.
                return Rect::point(re, im);
            }
            let (nr, ni) = newton_step(&self.min_poly, &self.derivative, &re, &im);
            re = truncate_dyadic(&nr, bits);
            im = if self.is_complex { truncate_dyadic(&ni, bits) } else { Rational::zero() };
            bits = (bits * 2).min(1 << 16);
        }
        unreachable!("Newton refinement from a certified anchor failed to converge")
    }
}

/// Upper bound on `d·|p(z)/p'(z)|`, or `None` when `p(z) = 0` exactly.
fn inclusion_radius(p: &QPoly, dp: &QPoly, d: &Rational, re: &Rational, im: &Rational) -> Option<Rational> {
    let (pr, pi) = p.eval_complex(re, im);
    if pr.is_zero() && pi.is_zero() {
        return None;
    }
    let (dr, di) = dp.eval_complex(re, im);
    let den = &dr * &dr + &di * &di;
    if den.is_zero() {
        // A critical point: fall back to the Cauchy bound, a valid though loose radius.
        return Some(p.cauchy_bound() * Rational::from_integer(2.into()));
    }
    let r2 = d * d * (&pr * &pr + &pi * &pi) / den;
    Some(sqrt_upper(&r2))
}

fn newton_step(p: &QPoly, dp: &QPoly, re: &Rational, im: &Rational) -> (Rational, Rational) {
    let (pr, pi) = p.eval_complex(re, im);
    let (dr, di) = dp.eval_complex(re, im);
    let den = &dr * &dr + &di * &di;
    if den.is_zero() {
        return (re.clone(), im.clone());
    }
    // p/p' = p * conj(p') / |p'|^2
    let qr = (&pr * &dr + &pi * &di) / &den;
    let qi = (&pi * &dr - &pr * &di) / &den;
    (re - qr, im - qi)
}

fn disk_rect(re: &Rational, im: &Rational, rho: &Rational, is_complex: bool) -> Rect {
    let re_iv = Interval::new(re - rho, re + rho);
    let im_iv = if is_complex { Interval::new(im - rho, im + rho) } else { Interval::zero() };
    Rect { re: re_iv, im: im_iv }
}

pub(crate) fn truncate_dyadic(x: &Rational, bits: u64) -> Rational {
    let scale = BigInt::one() << bits;
    let n = (x * Rational::from_integer(scale.clone())).floor().to_integer();
    Rational::new(n, scale)
}

/// A rational `r >= sqrt(x)`, within a relative error of about 1e-12.
pub(crate) fn sqrt_upper(x: &Rational) -> Rational {
    if !x.is_positive() {
        return Rational::zero();
    }
    // Scale by an even power of two into f64 range.
    let shift = (x.numer().bits() as i64 - x.denom().bits() as i64) / 2;
    let scaled = if shift >= 0 {
        x / Rational::from_integer(BigInt::one() << (2 * shift as u64))
    } else {
        x * Rational::from_integer(BigInt::one() << (2 * (-shift) as u64))
    };
    let f = scaled.to_f64().unwrap_or(f64::MAX).sqrt() * (1.0 + 1e-12) + 1e-300;
    let mut r = Rational::from_float(f).expect("finite");
    while &r * &r < scaled {
        r *= Rational::new(BigInt::from(1_000_001), BigInt::from(1_000_000));
    }
    if shift >= 0 {
        r * Rational::from_integer(BigInt::one() << shift as u64)
    } else {
        r / Rational::from_integer(BigInt::one() << (-shift) as u64)
    }
}

/// Squared distance from a point to a rectangle (zero inside).
fn dist2_to_rect(re: &Rational, im: &Rational, rect: &Rect) -> Rational {
    fn gap(x: &Rational, iv: &Interval) -> Rational {
        if x < &iv.lo {
            &iv.lo - x
        } else if x > &iv.hi {
            x - &iv.hi
        } else {
            Rational::zero()
        }
    }
    let (a, b) = (gap(re, &rect.re), gap(im, &rect.im));
    &a * &a + &b * &b
}

/// All roots of `p` in f64 via Aberth–Ehrlich iteration.
fn approximate_roots(p: &QPoly) -> Vec<(f64, f64)> {
    use nalgebra::Complex;
    let d = p.degree().unwrap();
    let coeffs: Vec<Complex<f64>> = p.coeffs().iter().map(|c| Complex::new(rational_to_f64(c), 0.0)).collect();
    let eval = |z: Complex<f64>| {
        let mut v = Complex::new(0.0, 0.0);
        let mut dv = Complex::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            dv = dv * z + v;
            v = v * z + c;
        }
        (v, dv)
    };
    let radius = rational_to_f64(&p.cauchy_bound()).min(1e6);
    let mut z: Vec<Complex<f64>> = (0..d)
        .map(|k| Complex::from_polar(radius * 0.5 + 0.1, 0.4 + std::f64::consts::TAU * k as f64 / d as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let (v, dv) = eval(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let mut s = Complex::new(0.0, 0.0);
            for j in 0..d {
                if j != i {
                    s += Complex::new(1.0, 0.0) / (z[i] - z[j]);
                }
            }
            let step = ratio / (Complex::new(1.0, 0.0) - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm());
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z.into_iter().map(|c| (c.re, c.im)).collect()
}

fn certify_selector(
    p: &QPoly,
    dp: &QPoly,
    selector: &Rect,
    is_complex: bool,
) -> Result<(Rational, Rational), NumberError> {
    let d = p.degree().unwrap();
    let dq = Rational::from_integer(BigInt::from(d));
    let mut centres: Vec<(Rational, Rational)> = approximate_roots(p)
        .into_iter()
        .map(|(r, i)| {
            (
                Rational::from_float(r).unwrap_or_else(Rational::zero),
                Rational::from_float(i).unwrap_or_else(Rational::zero),
            )
        })
        .collect();
    let mut bits = 64;
    for _round in 0..6 {
        let radii: Vec<Rational> = centres
            .iter()
            .map(|(r, i)| inclusion_radius(p, dp, &dq, r, i).unwrap_or_else(Rational::zero))
            .collect();
        let disjoint = (0..d).all(|a| {
            (a + 1..d).all(|b| {
                let (dr, di) = (&centres[a].0 - &centres[b].0, &centres[a].1 - &centres[b].1);
                let sum = &radii[a] + &radii[b];
                &dr * &dr + &di * &di > &sum * &sum
            })
        });
        if disjoint {
            let verdict = if is_complex {
                select_complex(&centres, &radii, selector)
            } else {
                select_real(p, dp, &dq, &centres, &radii, selector)
            };
            match verdict {
                Selection::Unique(z) => return Ok(z),
                Selection::Count(n) => {
                    return Err(NumberError::SelectorNotIsolating(format!("selector contains {n} roots of {p}")))
                }
                Selection::Inconclusive => {}
            }
        }
        // Polish and retry.
        bits *= 2;
        centres = centres
            .iter()
            .map(|(r, i)| {
                let (mut r, mut i) = (r.clone(), i.clone());
                for _ in 0..4 {
                    let (nr, ni) = newton_step(p, dp, &r, &i);
                    r = truncate_dyadic(&nr, bits);
                    i = truncate_dyadic(&ni, bits);
                }
                (r, i)
            })
            .collect();
    }
    Err(NumberError::SelectorNotIsolating(format!("could not certify a unique root of {p} in the selector")))
}

enum Selection {
    Unique((Rational, Rational)),
    Count(usize),
    Inconclusive,
}

fn select_complex(centres: &[(Rational, Rational)], radii: &[Rational], selector: &Rect) -> Selection {
    let mut inside = Vec::new();
    for (k, (c, rho)) in centres.iter().zip(radii).enumerate() {
        if selector.contains_rect(&disk_rect(&c.0, &c.1, rho, true)) {
            inside.push(k);
        } else if dist2_to_rect(&c.0, &c.1, selector) <= rho * rho {
            return Selection::Inconclusive;
        }
    }
    match inside.as_slice() {
        [k] => Selection::Unique(centres[*k].clone()),
        _ => Selection::Count(inside.len()),
    }
}

/// With pairwise disjoint inclusion disks each disk holds exactly one root.
/// A disk re-centred on the real axis and still nested in the original is
/// symmetric under conjugation, so its root is real.
fn select_real(
    p: &QPoly,
    dp: &QPoly,
    dq: &Rational,
    centres: &[(Rational, Rational)],
    radii: &[Rational],
    selector: &Rect,
) -> Selection {
    let zero = Rational::zero();
    let mut inside = Vec::new();
    for (c, rho) in centres.iter().zip(radii) {
        if c.1.abs() > *rho {
            continue; // disk misses the real axis: non-real root
        }
        let rho_real = inclusion_radius(p, dp, dq, &c.0, &zero).unwrap_or_else(Rational::zero);
        if rho_real.clone() + c.1.abs() > *rho {
            return Selection::Inconclusive;
        }
        let iv = Interval::new(&c.0 - &rho_real, &c.0 + &rho_real);
        if selector.re.contains_interval(&iv) {
            inside.push((c.0.clone(), zero.clone()));
        } else if !(iv.hi < selector.re.lo || iv.lo > selector.re.hi) {
            return Selection::Inconclusive;
        }
    }
    match inside.len() {
        1 => Selection::Unique(inside.pop().unwrap()),
        n => Selection::Count(n),
    }
}

/// Rational root test for a monic polynomial with rational coefficients.
fn has_rational_root(p: &QPoly) -> bool {
    // Clear denominators to get an integer polynomial.
    let lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    if ints[0].is_zero() {
        return true;
    }
    let (a0, an) = (ints[0].abs(), ints.last().unwrap().abs());
    if a0.bits() > 40 || an.bits() > 40 {
        return false;
    }
    let divisors = |n: &BigInt| -> Vec<BigInt> {
        let n = n.to_u64().unwrap();
        (1..=n).take_while(|k| k * k <= n).filter(|k| n.is_multiple_of(*k)).flat_map(|k| [k, n / k]).map(BigInt::from).collect()
    };
    for num in divisors(&a0) {
        for den in divisors(&an) {
            for sign in [1, -1] {
                let r = Rational::new(&num * sign, den.clone());
                if p.eval(&r).is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn sqrt2_selects_positive_root() {
        let k = NumberField::real_quadratic(2).unwrap();
        let (re, im) = k.theta_f64();
        assert!((re - 2f64.sqrt()).abs() < 1e-12 && im == 0.0);
        let enc = k.theta_enclosure(&q(1, 1_000_000_000));
        assert!(enc.re.lo > q(14142135623, 10_000_000_000) && enc.re.hi < q(14142135624, 10_000_000_000));
        assert!(enc.re.width() <= q(2, 1_000_000_000));
    }

    #[test]
    fn eighth_root_of_unity() {
        let sel = Rect { re: Interval::new(q(1, 2), q(1, 1)), im: Interval::new(q(1, 2), q(1, 1)) };
        let k = NumberField::new(QPoly::from_i64(&[1, 0, 0, 0, 1]), sel, true).unwrap();
        let (re, im) = k.theta_f64();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((re - h).abs() < 1e-12 && (im - h).abs() < 1e-12);
    }

    #[test]
    fn rejects_selector_with_two_roots() {
        let sel = Rect { re: Interval::new(q(-2, 1), q(2, 1)), im: Interval::zero() };
        let err = NumberField::new(QPoly::from_i64(&[-2, 0, 1]), sel, false).unwrap_err();
        assert!(matches!(err, NumberError::SelectorNotIsolating(_)));
    }

    #[test]
    fn rejects_bad_polynomials() {
        let sel = Rect { re: Interval::new(q(0, 1), q(3, 1)), im: Interval::zero() };
        assert_eq!(NumberField::new(QPoly::from_i64(&[-2, 0, 2]), sel.clone(), false).unwrap_err(), NumberError::NotMonic);
        assert_eq!(
            NumberField::new(QPoly::from_i64(&[1, -2, 1]), sel.clone(), false).unwrap_err(),
            NumberError::NotSquarefree
        );
        assert_eq!(NumberField::new(QPoly::from_i64(&[-2, 1, 1]), sel, false).unwrap_err(), NumberError::Reducible);
    }

    #[test]
    fn real_embedding_rejects_nonreal_root() {
        // x^2 + 1 has no real root, so a selector straddling the axis cannot isolate one.
        let sel = Rect { re: Interval::new(q(-1, 1), q(1, 1)), im: Interval::new(q(-2, 1), q(2, 1)) };
        assert!(NumberField::new(QPoly::from_i64(&[1, 0, 1]), sel, false).is_err());
    }

    #[test]
    fn sqrt_upper_bounds() {
        for x in [q(2, 1), q(1, 3), q(1, 1 << 40), q(10_i64.pow(15), 7)] {
            let r = sqrt_upper(&x);
            assert!(&r * &r >= x);
            let f = rational_to_f64(&x).sqrt();
            assert!((rational_to_f64(&r) - f).abs() <= 1e-9 * f);
        }
    }
}
