//! Hermite and Smith normal forms of integer matrices, with the unimodular
//! transforms that produce them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn int_matrix(rows: &[&[i64]]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols).map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j])).collect()
        })
        .collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Replace rows `i, j` by `(a·r_i + b·r_j, c·r_i + d·r_j)`.
fn combine_rows(m: &mut IntMatrix, i: usize, j: usize, a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) {
    for k in 0..m[i].len() {
        let (x, y) = (m[i][k].clone(), m[j][k].clone());
        m[i][k] = a * &x + b * &y;
        m[j][k] = c * &x + d * &y;
    }
}

fn combine_cols(m: &mut IntMatrix, i: usize, j: usize, a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) {
    for row in m.iter_mut() {
        let (x, y) = (row[i].clone(), row[j].clone());
        row[i] = a * &x + b * &y;
        row[j] = c * &x + d * &y;
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `U·M = H`, `U`
/// unimodular, `H` in echelon form with positive pivots and the entries
/// above each pivot reduced into `[0, pivot)`. Zero rows come last.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut h = m.clone();
    let mut u = identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Fold the gcd of column c (rows r..) into row r.
        for i in r + 1..rows {
            if h[i][c].is_zero() {
                continue;
            }
            let (a, b) = (h[r][c].clone(), h[i][c].clone());
            let e = a.extended_gcd(&b);
            let (ga, gb) = (&a / &e.gcd, &b / &e.gcd);
            // [x y; -b/g a/g] has determinant 1.
            let neg_gb = -gb;
            combine_rows(&mut h, r, i, &e.x, &e.y, &neg_gb, &ga);
            combine_rows(&mut u, r, i, &e.x, &e.y, &neg_gb, &ga);
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            for x in h[r].iter_mut().chain(u[r].iter_mut()) {
                *x = -&*x;
            }
        }
        let pivot = h[r][c].clone();
        for i in 0..r {
            let f = h[i][c].div_floor(&pivot);
            if !f.is_zero() {
                let (hr, ur) = (h[r].clone(), u[r].clone());
                for (x, y) in h[i].iter_mut().zip(&hr) {
                    *x -= &f * y;
                }
                for (x, y) in u[i].iter_mut().zip(&ur) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    (h, u)
}

/// Unimodular `[[x, y], [z, w]]` sending `(a, b)` to `(g, 0)`. When `a | b`
/// the pivot line is left untouched; otherwise the two passes can cycle.
fn pivot_step(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt, BigInt) {
    if (b % a).is_zero() {
        return (BigInt::one(), BigInt::zero(), -(b / a), BigInt::one());
    }
    let e = a.extended_gcd(b);
    (e.x, e.y, -(b / &e.gcd), a / &e.gcd)
}

/// Smith normal form: returns `(D, U, V)` with `U·M·V = D` diagonal,
/// nonnegative, each diagonal entry dividing the next.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut d = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d[i][j].is_zero() && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        for row in d.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if d[i][t].is_zero() {
                    continue;
                }
                let (x, y, z, w) = pivot_step(&d[t][t], &d[i][t]);
                combine_rows(&mut d, t, i, &x, &y, &z, &w);
                combine_rows(&mut u, t, i, &x, &y, &z, &w);
            }
            for j in t + 1..cols {
                if d[t][j].is_zero() {
                    continue;
                }
                let (x, y, z, w) = pivot_step(&d[t][t], &d[t][j]);
                combine_cols(&mut d, t, j, &x, &y, &z, &w);
                combine_cols(&mut v, t, j, &x, &y, &z, &w);
                dirty = true;
            }
            // Column operations can refill column t.
            if dirty && (t + 1..rows).any(|i| !d[i][t].is_zero()) {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row.
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&d[i][j] % &d[t][t]).is_zero());
            match offender {
                Some((i, _)) => {
                    let (di, ui) = (d[i].clone(), u[i].clone());
                    for (x, y) in d[t].iter_mut().zip(&di) {
                        *x += y;
                    }
                    for (x, y) in u[t].iter_mut().zip(&ui) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut().chain(u[t].iter_mut()) {
                *x = -&*x;
            }
        }
        t += 1;
    }
    (d, u, v)
}
