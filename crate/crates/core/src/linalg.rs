//! Dense exact linear algebra over a [`Field`], plus fraction-free integer
//! elimination used for ranks and determinants over 𝐐.

use std::mem;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalars::Field;

pub type Matrix<E> = Vec<Vec<E>>;

/// Reduced row-echelon form. Returns the nonzero rows (leading entries 1)
/// and their pivot columns.
pub fn rref<F: Field>(f: &F, mut rows: Matrix<F::Elem>, ncols: usize) -> (Matrix<F::Elem>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(&rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut().skip(c) {
            *x = f.mul(x, &inv);
        }
        let pivot_row = mem::take(&mut rows[r]);
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || f.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
        }
        rows[r] = pivot_row;
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank_by_elimination<F: Field>(f: &F, rows: &[Vec<F::Elem>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut m: Matrix<F::Elem> = rows.to_vec();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..m.len()).find(|&i| !f.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, pr);
        let inv = f.inv(&m[r][c]).expect("pivot is nonzero");
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            if f.is_zero(&row[c]) {
                continue;
            }
            let factor = f.mul(&row[c], &inv);
            for (x, y) in row.iter_mut().zip(pivot_row).skip(c) {
                *x = f.sub(x, &f.mul(&factor, y));
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Basis of `{x : rows · x = 0}` in reduced row-echelon form.
pub fn nullspace<F: Field>(f: &F, rows: Matrix<F::Elem>, ncols: usize) -> Matrix<F::Elem> {
    let (red, pivots) = rref(f, rows, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![f.zero(); ncols];
        v[free] = f.one();
        for (row, &pc) in red.iter().zip(&pivots) {
            v[pc] = f.neg(&row[free]);
        }
        basis.push(v);
    }
    rref(f, basis, ncols).0
}

pub fn det<F: Field>(f: &F, rows: &[Vec<F::Elem>]) -> F::Elem {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut acc = f.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !f.is_zero(&m[i][c])) else {
            return f.zero();
        };
        if pr != c {
            m.swap(pr, c);
            acc = f.neg(&acc);
        }
        acc = f.mul(&acc, &m[c][c]);
        let inv = f.inv(&m[c][c]).expect("pivot is nonzero");
        let (top, rest) = m.split_at_mut(c + 1);
        for row in rest.iter_mut() {
            if f.is_zero(&row[c]) {
                continue;
            }
            let factor = f.mul(&row[c], &inv);
            for (x, y) in row.iter_mut().zip(&top[c]).skip(c) {
                *x = f.sub(x, &f.mul(&factor, y));
            }
        }
    }
    acc
}

pub fn mat_vec<F: Field>(f: &F, m: &[Vec<F::Elem>], v: &[F::Elem]) -> Vec<F::Elem> {
    m.iter().map(|row| dot(f, row, v)).collect()
}

pub fn dot<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    a.iter()
        .zip(b)
        .fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
}

pub fn mat_mul<F: Field>(f: &F, a: &[Vec<F::Elem>], b: &[Vec<F::Elem>]) -> Matrix<F::Elem> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(f.zero(), |acc, k| f.add(&acc, &f.mul(&row[k], &b[k][j]))))
                .collect()
        })
        .collect()
}

pub fn transpose<E: Clone>(m: &[Vec<E>], ncols: usize) -> Matrix<E> {
    (0..ncols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse<F: Field>(f: &F, m: &[Vec<F::Elem>]) -> Option<Matrix<F::Elem>> {
    let n = m.len();
    let aug: Matrix<F::Elem> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
            r
        })
        .collect();
    let (red, pivots) = rref(f, aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Scales each row by the lcm of its denominators.
pub fn clear_denominators(rows: &[Vec<BigRational>]) -> Matrix<BigInt> {
    rows.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

/// Fraction-free (Bareiss) forward elimination; returns the rank.
pub fn bareiss_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m = rows.to_vec();
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pr) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..ncols {
                let v = pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot.clone();
        r += 1;
    }
    r
}

/// Fraction-free determinant of a square integer matrix.
pub fn bareiss_det(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut prev = BigInt::one();
    let mut sign = false;
    for k in 0..n {
        let Some(pr) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if pr != k {
            m.swap(pr, k);
            sign = !sign;
        }
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            for j in k + 1..n {
                let v = &pivot_row[k] * &row[j] - &row[k] * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = pivot_row[k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}
