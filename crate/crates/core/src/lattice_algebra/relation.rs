//! Heuristic integer relations from floating-point data, for inputs that are
//! only known numerically. Nothing here is certified.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::linalg::kernel;
use crate::exact_numbers::Rational;

/// LLL reduction (δ = 3/4) of integer row vectors, in exact arithmetic.
pub fn lll_reduce(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut b: Vec<Vec<BigInt>> = rows.to_vec();
    let n = b.len();
    if n <= 1 {
        return b;
    }
    let delta = Rational::new(BigInt::from(3), BigInt::from(4));
    let to_q = |v: &[BigInt]| -> Vec<Rational> { v.iter().map(|x| Rational::from_integer(x.clone())).collect() };
    let dotq = |a: &[Rational], c: &[Rational]| -> Rational {
        a.iter().zip(c).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
    };

    let gram_schmidt = |b: &[Vec<BigInt>]| -> (Vec<Vec<Rational>>, Vec<Vec<Rational>>, Vec<Rational>) {
        let n = b.len();
        let mut bs: Vec<Vec<Rational>> = Vec::with_capacity(n);
        let mut mu = vec![vec![Rational::zero(); n]; n];
        let mut norms = Vec::with_capacity(n);
        for i in 0..n {
            let bi = to_q(&b[i]);
            let mut v = bi.clone();
            for j in 0..i {
                mu[i][j] = if norms[j] == Rational::zero() { Rational::zero() } else { dotq(&bi, &bs[j]) / &norms[j] };
                for (x, y) in v.iter_mut().zip(&bs[j]) {
                    *x -= &mu[i][j] * y;
                }
            }
            norms.push(dotq(&v, &v));
            bs.push(v);
        }
        (bs, mu, norms)
    };

    let (mut _bs, mut mu, mut norms) = gram_schmidt(&b);
    let mut k = 1;
    let mut guard = 0usize;
    while k < n && guard < 100_000 {
        guard += 1;
        for j in (0..k).rev() {
            let q = mu[k][j].round().to_integer();
            if !q.is_zero() {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
                (_bs, mu, norms) = gram_schmidt(&b);
            }
        }
        let lhs = &norms[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            (_bs, mu, norms) = gram_schmidt(&b);
            k = (k - 1).max(1);
        }
    }
    b
}

/// Integer relations `m ∈ ℤ^r` with `Σ m_i c_j[i] ≈ 0` for every column
/// vector `c_j`, found by LLL on `[I | round(10^p c)]`.
pub fn integer_relations(columns: &[Vec<f64>], r: usize, precision: i32) -> Vec<Vec<BigInt>> {
    if r == 0 {
        return Vec::new();
    }
    let scale = 10f64.powi(precision);
    let rows: Vec<Vec<BigInt>> = (0..r)
        .map(|i| {
            let mut row: Vec<BigInt> = (0..r).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect();
            for c in columns {
                row.push(BigInt::from((c[i] * scale).round() as i64));
            }
            row
        })
        .collect();
    let reduced = lll_reduce(&rows);
    // Rounding costs at most |m_i|/2 per entry, so a genuine relation has a
    // tail bounded by its head; spurious short vectors do not.
    let head_bound = 10f64.powf(f64::from(precision) / 3.0);
    reduced
        .into_iter()
        .filter(|row| {
            let head: Vec<f64> = row[..r].iter().map(|x| x.abs().to_f64().unwrap_or(f64::INFINITY)).collect();
            let head_l1: f64 = head.iter().sum();
            let head_max = head.iter().copied().fold(0.0f64, f64::max);
            let tail = row[r..].iter().map(|x| x.abs().to_f64().unwrap_or(f64::INFINITY)).fold(0.0f64, f64::max);
            head_max > 0.0 && head_max <= head_bound && tail <= head_l1 + 1.0
        })
        .map(|row| row[..r].to_vec())
        .collect()
}

/// Heuristic counterpart of the exact rational closure: Λ-coordinates of a
/// basis of `W`, given real Λ-coordinates of a basis of `V`.
pub fn heuristic_closure_coords(v_coords: &[Vec<f64>], r: usize, precision: i32) -> Vec<Vec<Rational>> {
    let rels = integer_relations(v_coords, r, precision);
    let forms: Vec<Vec<Rational>> =
        rels.iter().map(|m| m.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    if forms.is_empty() {
        return (0..r)
            .map(|i| (0..r).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
    }
    kernel(&forms, r, &Rational::zero())
}
