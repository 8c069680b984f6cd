//! Small exact-integer helpers shared by the polyhedral code.
//!
//! Vectors are `Vec<i128>`. Every combination step is checked; an overflow
//! surfaces as [`Error::Overflow`] instead of silently wrapping.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type IntVec = Vec<i128>;

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Divides `v` by the gcd of its entries. The zero vector is left untouched.
pub fn make_primitive(v: &mut [i128]) {
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

pub fn primitive(mut v: IntVec) -> IntVec {
    make_primitive(&mut v);
    v
}

pub fn is_zero(v: &[i128]) -> bool {
    v.iter().all(|&x| x == 0)
}

pub fn dot(a: &[i128], b: &[i128]) -> Result<i128> {
    debug_assert_eq!(a.len(), b.len());
    let mut acc: i128 = 0;
    for (&x, &y) in a.iter().zip(b) {
        let p = x.checked_mul(y).ok_or(Error::Overflow)?;
        acc = acc.checked_add(p).ok_or(Error::Overflow)?;
    }
    Ok(acc)
}

/// `s * x - t * y`, made primitive.
pub fn combine(s: i128, x: &[i128], t: i128, y: &[i128]) -> Result<IntVec> {
    let mut out = Vec::with_capacity(x.len());
    for (&a, &b) in x.iter().zip(y) {
        let l = s.checked_mul(a).ok_or(Error::Overflow)?;
        let r = t.checked_mul(b).ok_or(Error::Overflow)?;
        out.push(l.checked_sub(r).ok_or(Error::Overflow)?);
    }
    make_primitive(&mut out);
    Ok(out)
}

/// Exact rank of the matrix whose rows are `rows`.
pub fn rank(rows: &[IntVec]) -> usize {
    match rank_i128(rows) {
        Some(r) => r,
        None => rank_big(rows),
    }
}

fn rank_i128(rows: &[IntVec]) -> Option<usize> {
    let mut m: Vec<IntVec> = rows.iter().filter(|r| !is_zero(r)).cloned().collect();
    if m.is_empty() {
        return Some(0);
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        let pivot_row = m[r].clone();
        let pv = pivot_row[c];
        for row in m.iter_mut().skip(r + 1) {
            let f = row[c];
            if f == 0 {
                continue;
            }
            let g = gcd(pv, f);
            let (s, t) = (pv / g, f / g);
            for k in c..cols {
                let a = row[k].checked_mul(s)?;
                let b = pivot_row[k].checked_mul(t)?;
                row[k] = a.checked_sub(b)?;
            }
            make_primitive(row);
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    Some(r)
}

fn rank_big(rows: &[IntVec]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot_row = m[r].clone();
        for row in m.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let g = pivot_row[c].gcd(&row[c]);
            let s = &pivot_row[c] / &g;
            let t = &row[c] / &g;
            for k in c..cols {
                row[k] = &row[k] * &s - &pivot_row[k] * &t;
            }
            let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && g.abs() != BigInt::from(1) {
                for x in row.iter_mut() {
                    *x = &*x / &g;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Determinant of a square integer matrix (fraction-free Bareiss elimination).
pub fn determinant(rows: &[IntVec]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}
