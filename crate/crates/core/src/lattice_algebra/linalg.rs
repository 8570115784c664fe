//! Gauss–Jordan elimination over an exact field: ℚ or a number field `K`.

use num_traits::{One, Zero};

use crate::exact_numbers::{AlgebraicNumber, Rational};

/// The handful of operations elimination needs. `zero_like`/`one_like`
/// exist because number-field elements carry their field with them.
pub trait FieldElem: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_elem(&self, o: &Self) -> Self;
    fn sub_elem(&self, o: &Self) -> Self;
    fn mul_elem(&self, o: &Self) -> Self;
    /// Panics on a zero divisor; callers only divide by pivots.
    fn div_elem(&self, o: &Self) -> Self;
}

impl FieldElem for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_elem(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_elem(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_elem(&self, o: &Self) -> Self {
        self * o
    }
    fn div_elem(&self, o: &Self) -> Self {
        self / o
    }
}

impl FieldElem for AlgebraicNumber {
    fn zero_like(&self) -> Self {
        AlgebraicNumber::zero(self.field())
    }
    fn one_like(&self) -> Self {
        AlgebraicNumber::one(self.field())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_elem(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_elem(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_elem(&self, o: &Self) -> Self {
        self * o
    }
    fn div_elem(&self, o: &Self) -> Self {
        self.checked_div(o).expect("pivot is nonzero")
    }
}

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref<T: FieldElem>(rows: &[Vec<T>]) -> (Vec<Vec<T>>, Vec<usize>) {
    let mut m: Vec<Vec<T>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero_elem()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].one_like().div_elem(&m[r][c]);
        if !inv.is_zero_elem() && !(m[r][c] == m[r][c].one_like()) {
            m[r] = m[r].iter().map(|x| x.mul_elem(&inv)).collect();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero_elem() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    if !y.is_zero_elem() {
                        *x = x.sub_elem(&f.mul_elem(y));
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank<T: FieldElem>(rows: &[Vec<T>]) -> usize {
    rref(rows).1.len()
}

/// Basis of `{x : A x = 0}` where `A` has the given rows and `ncols` columns.
/// `template` supplies zero/one in the right field.
pub fn kernel<T: FieldElem>(rows: &[Vec<T>], ncols: usize, template: &T) -> Vec<Vec<T>> {
    let (r, pivots) = rref(rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![template.zero_like(); ncols];
            v[f] = template.one_like();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = row[f].zero_like().sub_elem(&row[f]);
            }
            v
        })
        .collect()
}

/// Solve `x · B = v` for the row-combination coefficients `x`, where `B` has
/// linearly independent rows. Returns `None` if `v` is not in the row span.
pub fn solve_in_row_span<T: FieldElem>(basis: &[Vec<T>], v: &[T]) -> Option<Vec<T>> {
    let k = basis.len();
    if k == 0 {
        return v.iter().all(FieldElem::is_zero_elem).then(Vec::new);
    }
    let n = v.len();
    let template = &v[0];
    // Augmented system: columns of B^T with v appended.
    let rows: Vec<Vec<T>> = (0..n)
        .map(|j| {
            let mut row: Vec<T> = basis.iter().map(|b| b[j].clone()).collect();
            row.push(v[j].clone());
            row
        })
        .collect();
    let (r, pivots) = rref(&rows);
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![template.zero_like(); k];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[k].clone();
    }
    Some(x)
}

pub fn dot<T: FieldElem>(a: &[T], b: &[T]) -> T {
    let mut acc = a[0].zero_like();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero_elem() && !y.is_zero_elem() {
            acc = acc.add_elem(&x.mul_elem(y));
        }
    }
    acc
}

/// Matrix inverse by Gauss–Jordan; `None` if singular.
pub fn inverse<T: FieldElem>(m: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let t = &m[0][0];
    let aug: Vec<Vec<T>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { t.one_like() } else { t.zero_like() }));
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}
