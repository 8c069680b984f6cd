//! Dense two-phase simplex with Bland's rule, generic over the number type.
//!
//! The exact instantiation runs over `BigRational`. The `f64` instantiation
//! is only used to guess solutions that are then certified exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub trait LpNum: Clone + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn is_zero(&self) -> bool {
        !self.is_pos() && !self.is_neg()
    }
    fn lt(&self, o: &Self) -> bool {
        o.sub(self).is_pos()
    }
}

const EPS: f64 = 1e-9;

impl LpNum for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_pos(&self) -> bool {
        *self > EPS
    }
    fn is_neg(&self) -> bool {
        *self < -EPS
    }
}

impl LpNum for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<F> {
    Optimal { x: Vec<F>, value: F },
    Infeasible,
    Unbounded,
}

struct Tableau<F> {
    rows: Vec<Vec<F>>,
    rhs: Vec<F>,
    basis: Vec<usize>,
}

impl<F: LpNum> Tableau<F> {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.div(&p);
        }
        self.rhs[r] = self.rhs[r].div(&p);
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c].clone();
            if f.is_zero() {
                continue;
            }
            for (v, pv) in self.rows[i].iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v = v.sub(&f.mul(pv));
                }
            }
            self.rhs[i] = self.rhs[i].sub(&f.mul(&prhs));
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost · x` over columns `< active` from the current feasible basis.
    fn optimize(&mut self, cost: &[F], active: usize) -> bool {
        loop {
            // Bland: smallest entering index with positive reduced cost
            let mut entering = None;
            for j in 0..active {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut r = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    let a = &self.rows[i][j];
                    if !a.is_zero() && !cost[b].is_zero() {
                        r = r.sub(&cost[b].mul(a));
                    }
                }
                if r.is_pos() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else {
                return true;
            };
            let mut leave: Option<(usize, F)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_pos() {
                    continue;
                }
                let ratio = self.rhs[i].div(a);
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio.lt(&lr) || (!lr.lt(&ratio) && self.basis[i] < self.basis[li]) {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
            let Some((r, _)) = leave else {
                return false;
            };
            self.pivot(r, c);
        }
    }
}

/// Maximizes `c · x` subject to `A x = b`, `x >= 0`.
pub fn maximize<F: LpNum>(a: &[Vec<F>], b: &[F], c: &[F]) -> LpOutcome<F> {
    let m = a.len();
    let n = c.len();
    let mut rows: Vec<Vec<F>> = Vec::with_capacity(m);
    let mut rhs: Vec<F> = Vec::with_capacity(m);
    for i in 0..m {
        if b[i].is_neg() {
            rows.push(a[i].iter().map(|v| F::zero().sub(v)).collect());
            rhs.push(F::zero().sub(&b[i]));
        } else {
            rows.push(a[i].clone());
            rhs.push(b[i].clone());
        }
    }
    // reuse unit columns as the starting basis where possible
    let mut basis = vec![usize::MAX; m];
    for j in 0..n {
        let mut hit = None;
        let mut ok = true;
        for (i, row) in rows.iter().enumerate() {
            if row[j].is_zero() {
                continue;
            }
            if hit.is_some() || row[j].sub(&F::one()).is_pos() || row[j].sub(&F::one()).is_neg() {
                ok = false;
                break;
            }
            hit = Some(i);
        }
        if let (true, Some(i)) = (ok, hit) {
            if basis[i] == usize::MAX {
                basis[i] = j;
            }
        }
    }
    let mut n_art = 0;
    for i in 0..m {
        if basis[i] == usize::MAX {
            basis[i] = n + n_art;
            n_art += 1;
        }
    }
    for (i, row) in rows.iter_mut().enumerate() {
        for k in 0..n_art {
            row.push(if basis[i] == n + k { F::one() } else { F::zero() });
        }
    }
    let mut t = Tableau { rows, rhs, basis };
    let total = n + n_art;
    if n_art > 0 {
        let mut phase1 = vec![F::zero(); total];
        for v in phase1.iter_mut().skip(n) {
            *v = F::zero().sub(&F::one());
        }
        t.optimize(&phase1, total);
        for i in 0..m {
            if t.basis[i] >= n && t.rhs[i].is_pos() {
                return LpOutcome::Infeasible;
            }
        }
        // drive zero-level artificials out of the basis
        for i in 0..m {
            if t.basis[i] >= n {
                if let Some(j) = (0..n).find(|&j| !t.rows[i][j].is_zero() && !t.basis.contains(&j)) {
                    t.pivot(i, j);
                }
            }
        }
        // remaining artificial rows are redundant; zero them out
        for i in 0..m {
            if t.basis[i] >= n {
                for v in t.rows[i].iter_mut() {
                    *v = F::zero();
                }
                t.rhs[i] = F::zero();
            }
        }
    }
    let mut cost: Vec<F> = c.to_vec();
    cost.resize(total, F::zero());
    if !t.optimize(&cost, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![F::zero(); n];
    for (i, &bi) in t.basis.iter().enumerate() {
        if bi < n {
            x[bi] = t.rhs[i].clone();
        }
    }
    let value = x
        .iter()
        .zip(c)
        .fold(F::zero(), |acc, (xi, ci)| acc.add(&xi.mul(ci)));
    LpOutcome::Optimal { x, value }
}

pub fn to_rational(v: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Exact feasibility of `v = sum_i mu_i g_i + sum_j nu_j l_j` with `mu >= 0`.
pub fn in_conic_hull(gens: &[Vec<i128>], lineality: &[Vec<i128>], v: &[i128]) -> bool {
    let d = v.len();
    let mut cols: Vec<Vec<i128>> = gens.to_vec();
    for l in lineality {
        cols.push(l.clone());
        cols.push(l.iter().map(|x| -x).collect());
    }
    let a: Vec<Vec<BigRational>> = (0..d)
        .map(|i| cols.iter().map(|c| to_rational(c[i])).collect())
        .collect();
    let b: Vec<BigRational> = v.iter().map(|&x| to_rational(x)).collect();
    let c = vec![<BigRational as Zero>::zero(); cols.len()];
    !matches!(maximize(&a, &b, &c), LpOutcome::Infeasible)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> BigRational {
        BigRational::from_i64(v)
    }

    #[test]
    fn small_lp() {
        // max x + y, x + 2y + s1 = 4, 3x + y + s2 = 6
        let a = vec![vec![r(1), r(2), r(1), r(0)], vec![r(3), r(1), r(0), r(1)]];
        let b = vec![r(4), r(6)];
        let c = vec![r(1), r(1), r(0), r(0)];
        let LpOutcome::Optimal { value, .. } = maximize(&a, &b, &c) else {
            panic!()
        };
        assert_eq!(value, BigRational::new(BigInt::from(14), BigInt::from(5)));
        let af: Vec<Vec<f64>> = vec![vec![1., 2., 1., 0.], vec![3., 1., 0., 1.]];
        let LpOutcome::Optimal { value, .. } = maximize(&af, &[4., 6.], &[1., 1., 0., 0.]) else {
            panic!()
        };
        assert!((value - 2.8).abs() < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        // x - y = -1 with x, y >= 0 and max x: unbounded
        let a = vec![vec![r(1), r(-1)]];
        assert_eq!(maximize(&a, &[r(-1)], &[r(1), r(0)]), LpOutcome::Unbounded);
        // x + y = -1 infeasible
        let a = vec![vec![r(1), r(1)]];
        assert_eq!(maximize(&a, &[r(-1)], &[r(0), r(0)]), LpOutcome::Infeasible);
    }

    #[test]
    fn conic_hull() {
        let g = vec![vec![1, 0], vec![1, 1]];
        assert!(in_conic_hull(&g, &[], &[3, 1]));
        assert!(!in_conic_hull(&g, &[], &[0, 1]));
        assert!(in_conic_hull(&g, &[vec![0, 1]], &[0, -5]));
    }
}
