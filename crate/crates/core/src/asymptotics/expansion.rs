use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::exact_numbers::{rational_from_i64, rational_to_f64, ComplexScalar, Rational};
use crate::flats_and_varieties::{Coordinate, ParametricBranch, C64};

use super::AsymptoticsError;

/// Coefficient vector (one entry per coordinate) of `t^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionTerm {
    pub exponent: Rational,
    pub coeffs: Vec<ComplexScalar>,
}

/// `‖tail(t)‖ ≤ c·|t|^(-q)` for `|t| ≥ t0`.
#[derive(Clone, Debug, PartialEq)]
pub struct RemainderBound {
    pub c: f64,
    pub q: Rational,
    pub t0: f64,
}

impl RemainderBound {
    pub fn at(&self, t_abs: f64) -> f64 {
        self.c * t_abs.powf(-rational_to_f64(&self.q))
    }
}

/// Terms with nonnegative exponent, strictly decreasing, plus a bound on
/// everything else.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionAtInfinity {
    pub terms: Vec<ExpansionTerm>,
    pub remainder: RemainderBound,
}

impl ExpansionAtInfinity {
    /// Coefficient of `t⁰`, or zeros.
    pub fn constant_term(&self) -> Option<&ExpansionTerm> {
        self.terms.iter().find(|t| t.exponent.is_zero())
    }

    pub fn divergent_terms(&self) -> impl Iterator<Item = &ExpansionTerm> {
        self.terms.iter().filter(|t| t.exponent.is_positive())
    }

    /// Substitute `t = s·ω`. Only integer exponents may be rotated.
    pub fn on_ray(&self, omega: &ComplexScalar) -> Result<ExpansionAtInfinity, AsymptoticsError> {
        let terms = self
            .terms
            .iter()
            .map(|term| {
                if !term.exponent.is_integer() {
                    return Err(AsymptoticsError::SymbolicUnsupported(
                        "fractional exponent along a rotated ray".into(),
                    ));
                }
                let k: u32 = term.exponent.to_integer().try_into().expect("nonnegative exponent");
                let w = omega.pow(k);
                Ok(ExpansionTerm { exponent: term.exponent.clone(), coeffs: term.coeffs.iter().map(|c| c.mul(&w)).collect() })
            })
            .collect::<Result<_, _>>()?;
        Ok(ExpansionAtInfinity { terms, remainder: self.remainder.clone() })
    }

    /// Sum of the kept terms at a complex parameter.
    pub fn eval_terms(&self, t: C64) -> Vec<C64> {
        let n = self.terms.first().map_or(0, |t| t.coeffs.len());
        let mut out = vec![C64::new(0.0, 0.0); n];
        for term in &self.terms {
            let p = t.powf(rational_to_f64(&term.exponent));
            for (o, c) in out.iter_mut().zip(&term.coeffs) {
                let (re, im) = c.to_f64();
                *o += C64::new(re, im) * p;
            }
        }
        out
    }
}

fn upper_abs(z: &ComplexScalar) -> f64 {
    let eps = rational_from_i64(1, 1 << 40);
    let side = |a: &crate::exact_numbers::AlgebraicNumber| {
        let r = a.approximate(&eps).to_f64();
        r.re[0].abs().max(r.re[1].abs())
    };
    let v = side(&z.re).hypot(side(&z.im));
    v * (1.0 + 1e-12) + 1e-300
}

fn lower_abs(z: &ComplexScalar) -> f64 {
    let eps = rational_from_i64(1, 1 << 40);
    let side = |a: &crate::exact_numbers::AlgebraicNumber| {
        let r = a.approximate(&eps).to_f64();
        if r.re[0] <= 0.0 && r.re[1] >= 0.0 {
            0.0
        } else {
            r.re[0].abs().min(r.re[1].abs())
        }
    };
    side(&z.re).hypot(side(&z.im)) * (1.0 - 1e-12)
}

/// Quotient and remainder of `num / den` over `K(i)`.
fn div_rem(num: &[ComplexScalar], den: &[ComplexScalar]) -> (Vec<ComplexScalar>, Vec<ComplexScalar>) {
    let field = den[0].field().clone();
    let m = den.len() - 1;
    let lead_inv = den[m].inverse().expect("leading coefficient is nonzero");
    let mut r: Vec<ComplexScalar> = num.to_vec();
    if r.len() <= m {
        return (Vec::new(), r);
    }
    let mut q = vec![ComplexScalar::zero(&field); r.len() - m];
    for k in (0..q.len()).rev() {
        let c = r[k + m].mul(&lead_inv);
        if !c.is_zero() {
            for (j, d) in den.iter().enumerate() {
                r[k + j] = r[k + j].sub(&c.mul(d));
            }
        }
        q[k] = c;
    }
    r.truncate(m);
    (q, r)
}

struct CoordExpansion {
    terms: Vec<(Rational, ComplexScalar)>,
    c: f64,
    q: Rational,
    t0: f64,
}

fn expand_coordinate(c: &Coordinate) -> CoordExpansion {
    match c {
        Coordinate::Rational { num, den } => {
            let (quot, rem) = div_rem(num, den);
            let terms = quot
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (Rational::from_integer((k as i64).into()), c))
                .collect();
            if rem.iter().all(ComplexScalar::is_zero) {
                return CoordExpansion { terms, c: 0.0, q: Rational::one(), t0: 1.0 };
            }
            // |den(t)| ≥ |d_m||t|^m / 2 once |t| ≥ 2·(Cauchy bound), and
            // |rem(t)| ≤ Σ|r_k|·|t|^(m-1) for |t| ≥ 1.
            let m = den.len() - 1;
            let lead = lower_abs(&den[m]);
            let cauchy = 1.0 + den[..m].iter().map(|d| upper_abs(d) / lead).fold(0.0, f64::max);
            let rsum: f64 = rem.iter().map(upper_abs).sum();
            CoordExpansion { terms, c: 2.0 * rsum / lead, q: Rational::one(), t0: (2.0 * cauchy).max(1.0) }
        }
        Coordinate::Monomials(ts) => {
            let (keep, tail): (Vec<_>, Vec<_>) = ts.iter().cloned().partition(|(_, e)| !e.is_negative());
            let terms = keep.into_iter().map(|(c, e)| (e, c)).collect();
            if tail.is_empty() {
                return CoordExpansion { terms, c: 0.0, q: Rational::one(), t0: 1.0 };
            }
            let q = tail.iter().map(|(_, e)| -e).min().expect("nonempty tail");
            let c = tail.iter().map(|(c, _)| upper_abs(c)).sum();
            CoordExpansion { terms, c, q, t0: 1.0 }
        }
    }
}

/// Exact expansion of every coordinate to order `t⁰`, with a remainder bound.
pub fn expand_at_infinity(branch: &ParametricBranch) -> ExpansionAtInfinity {
    let n = branch.coord_dim();
    let field = branch.rays()[0].field().clone();
    let mut by_exponent: BTreeMap<Rational, Vec<ComplexScalar>> = BTreeMap::new();
    let mut cs = Vec::with_capacity(n);
    let mut q: Option<Rational> = None;
    let mut t0 = 1.0f64;
    for (i, coord) in branch.coords().iter().enumerate() {
        let e = expand_coordinate(coord);
        for (exp, c) in e.terms {
            let slot = by_exponent.entry(exp).or_insert_with(|| vec![ComplexScalar::zero(&field); n]);
            slot[i] = slot[i].add(&c);
        }
        if e.c > 0.0 {
            q = Some(match q {
                Some(q0) if q0 < e.q => q0,
                _ => e.q.clone(),
            });
            t0 = t0.max(e.t0);
        }
        cs.push(e.c);
    }
    let c = cs.iter().map(|x| x * x).sum::<f64>().sqrt() * (1.0 + 1e-12);
    let terms = by_exponent
        .into_iter()
        .rev()
        .filter(|(_, v)| v.iter().any(|c| !c.is_zero()))
        .map(|(exponent, coeffs)| ExpansionTerm { exponent, coeffs })
        .collect();
    ExpansionAtInfinity { terms, remainder: RemainderBound { c, q: q.unwrap_or_else(Rational::one), t0 } }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_numbers::{AlgebraicNumber, NumberField};
    use crate::lattice_algebra::FieldMarker;
    use std::sync::Arc;

    fn c(k: &Arc<NumberField>, n: i64) -> ComplexScalar {
        ComplexScalar::real(AlgebraicNumber::from_int(k, n))
    }

    fn poly(k: &Arc<NumberField>, xs: &[i64]) -> Vec<ComplexScalar> {
        xs.iter().map(|&x| c(k, x)).collect()
    }

    #[test]
    fn long_division() {
        let k = NumberField::rationals();
        // (t³ + 2t) / (t² + 1) = t + t/(t² + 1)
        let x = Coordinate::rational(poly(&k, &[0, 2, 0, 1]), poly(&k, &[1, 0, 1])).unwrap();
        let b = ParametricBranch::new(vec![x], vec![c(&k, 1)], FieldMarker::Real).unwrap();
        let e = expand_at_infinity(&b);
        assert_eq!(e.terms.len(), 1);
        assert_eq!(e.terms[0].exponent, Rational::one());
        assert_eq!(e.terms[0].coeffs, vec![c(&k, 1)]);
        assert!(e.constant_term().is_none());
        for t in [10.0, 1e3, 1e5] {
            let exact = (t * t * t + 2.0 * t) / (t * t + 1.0);
            assert!((exact - t).abs() <= e.remainder.at(t));
        }
    }

    #[test]
    fn constant_and_divergent_parts() {
        let k = NumberField::rationals();
        let t = Coordinate::polynomial(poly(&k, &[0, 1]), &k);
        let y = Coordinate::rational(poly(&k, &[1, 5]), poly(&k, &[0, 1])).unwrap();
        let b = ParametricBranch::new(vec![t, y], vec![c(&k, 1)], FieldMarker::Real).unwrap();
        let e = expand_at_infinity(&b);
        assert_eq!(e.divergent_terms().count(), 1);
        assert_eq!(e.terms[0].coeffs, vec![c(&k, 1), c(&k, 0)]);
        assert_eq!(e.constant_term().unwrap().coeffs, vec![c(&k, 0), c(&k, 5)]);
        let kept = e.eval_terms(C64::new(100.0, 0.0));
        assert!((kept[1].re - 5.0).abs() < 1e-12);
    }
}
