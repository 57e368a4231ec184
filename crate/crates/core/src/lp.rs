//! Dense tableau simplex for `max cᵀx s.t. Ax ≤ b, x ≥ 0` with `b ≥ 0`,
//! generic over `f64` and exact rationals.
//!
//! The slack basis is feasible, so no phase one is needed. Pivoting uses
//! Dantzig's rule and switches to Bland's rule after a run of degenerate
//! pivots; the exact variant uses Bland's rule throughout.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Scalar: Clone + PartialOrd {
    const EXACT: bool;
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn to_f64(&self) -> f64;

    /// `row −= f · prow`.
    fn eliminate(row: &mut [Self], f: &Self, prow: &[Self]) {
        for (r, p) in row.iter_mut().zip(prow) {
            if p.is_pos() || p.is_neg() {
                *r = r.sub(&f.mul(p));
            }
        }
    }
}

const EPS: f64 = 1e-11;

impl Scalar for f64 {
    const EXACT: bool = false;
    fn zero() -> Self {
        0.0
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
    fn to_f64(&self) -> f64 {
        *self
    }
    // dense loop so that it vectorises
    fn eliminate(row: &mut [Self], f: &Self, prow: &[Self]) {
        for (r, p) in row.iter_mut().zip(prow) {
            *r -= f * p;
        }
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    fn zero() -> Self {
        Zero::zero()
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
        Signed::is_positive(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Optimal primal/dual pair.
#[derive(Clone, Debug)]
pub struct LpSolution<T> {
    pub x: Vec<T>,
    /// Row duals (`y ≥ 0`, `Aᵀy ≥ c`, `bᵀy = cᵀx`).
    pub y: Vec<T>,
    pub objective: T,
    pub pivots: usize,
}

/// Pivot budget before the solver gives up.
pub const MAX_PIVOTS: usize = 200_000;

/// Floating-point tableaus are rebuilt from the data after this many pivots
/// (or after as many pivots as there are rows, if that is larger).
const REFACTOR_EVERY: usize = 64;

/// Solves `max cᵀx, Ax ≤ b, x ≥ 0` (`a` is row-major `m × n`).
pub fn solve_max<T: Scalar>(a: &[Vec<T>], b: &[T], c: &[T]) -> Result<LpSolution<T>> {
    let m = a.len();
    let n = c.len();
    if b.iter().any(Scalar::is_neg) {
        return Err(Error::InvalidArgument("simplex needs b >= 0".into()));
    }
    let mut t = slack_tableau(a, b, c);
    let mut basis: Vec<usize> = (n..n + m).collect();

    let mut pivots = 0;
    let mut since_refactor = 0;
    let mut degenerate_run = 0;
    let mut bland = T::EXACT;
    let refactor_every = REFACTOR_EVERY.max(m);
    loop {
        if !T::EXACT && since_refactor >= refactor_every {
            refactor(a, b, c, &mut t, &mut basis);
            since_refactor = 0;
        }
        let enter = if bland {
            (0..n + m).find(|&j| t[m][j].is_neg())
        } else {
            let mut best: Option<usize> = None;
            for j in 0..n + m {
                if t[m][j].is_neg() && best.is_none_or(|k| t[m][j] < t[m][k]) {
                    best = Some(j);
                }
            }
            best
        };
        let Some(e) = enter else {
            if !T::EXACT && since_refactor > 0 {
                // confirm optimality on a freshly computed tableau
                refactor(a, b, c, &mut t, &mut basis);
                since_refactor = 0;
                continue;
            }
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best_ratio = T::zero();
        for i in 0..m {
            if !t[i][e].is_pos() {
                continue;
            }
            let r = t[i][n + m].div(&t[i][e]);
            let better = match leave {
                None => true,
                Some(l) => r < best_ratio || (!(best_ratio < r) && basis[i] < basis[l]),
            };
            if better {
                leave = Some(i);
                best_ratio = r;
            }
        }
        let Some(l) = leave else {
            if !T::EXACT && since_refactor > 0 {
                refactor(a, b, c, &mut t, &mut basis);
                since_refactor = 0;
                continue;
            }
            return Err(Error::SolverDiverged("linear program is unbounded".into()));
        };
        if best_ratio.is_pos() {
            // the objective strictly increased, so no basis can repeat
            degenerate_run = 0;
            bland = T::EXACT;
        } else {
            degenerate_run += 1;
            if degenerate_run > 50 {
                bland = true;
            }
        }
        pivot(&mut t, l, e);
        basis[l] = e;
        pivots += 1;
        since_refactor += 1;
        if pivots > MAX_PIVOTS {
            return Err(Error::SolverDiverged("simplex pivot budget exhausted".into()));
        }
    }
    let mut x: Vec<T> = (0..n).map(|_| T::zero()).collect();
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][n + m].clone();
        }
    }
    let y = (0..m).map(|i| t[m][n + i].clone()).collect();
    Ok(LpSolution {
        x,
        y,
        objective: t[m][n + m].clone(),
        pivots,
    })
}

/// Tableau `[A I b; −c 0 0]` of the slack basis.
fn slack_tableau<T: Scalar>(a: &[Vec<T>], b: &[T], c: &[T]) -> Vec<Vec<T>> {
    let m = a.len();
    let width = c.len() + m + 1;
    let mut t: Vec<Vec<T>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut row = Vec::with_capacity(width);
        row.extend(a[i].iter().cloned());
        for k in 0..m {
            row.push(T::from_i64((k == i) as i64));
        }
        row.push(b[i].clone());
        t.push(row);
    }
    let mut obj: Vec<T> = c.iter().map(|v| T::zero().sub(v)).collect();
    obj.extend((0..=m).map(|_| T::zero()));
    t.push(obj);
    t
}

/// Recomputes the tableau of `basis` from the original data by
/// Gauss–Jordan elimination with partial pivoting, discarding accumulated
/// rounding error. Keeps the old tableau if the basis is numerically
/// singular.
fn refactor<T: Scalar>(a: &[Vec<T>], b: &[T], c: &[T], t: &mut Vec<Vec<T>>, basis: &mut [usize]) {
    let m = a.len();
    let mut fresh = slack_tableau(a, b, c);
    let mut assigned = alloc::vec![false; m];
    let mut rows = alloc::vec![0usize; m];
    for (k, &col) in basis.iter().enumerate() {
        let best = (0..m)
            .filter(|&i| !assigned[i])
            .max_by(|&i, &j| fresh[i][col].to_f64().abs().total_cmp(&fresh[j][col].to_f64().abs()));
        let Some(r) = best else { return };
        if !fresh[r][col].is_pos() && !fresh[r][col].is_neg() {
            return;
        }
        pivot(&mut fresh, r, col);
        assigned[r] = true;
        rows[k] = r;
    }
    let mut new_basis = alloc::vec![0usize; m];
    for (k, &r) in rows.iter().enumerate() {
        new_basis[r] = basis[k];
    }
    // rounding may leave tiny negative right-hand sides
    let rhs = fresh[0].len() - 1;
    for row in fresh.iter_mut().take(m) {
        if row[rhs].is_neg() {
            return;
        }
        if !row[rhs].is_pos() {
            row[rhs] = T::zero();
        }
    }
    *t = fresh;
    basis.copy_from_slice(&new_basis);
}

fn pivot<T: Scalar>(t: &mut [Vec<T>], l: usize, e: usize) {
    let p = t[l][e].clone();
    let width = t[l].len();
    for j in 0..width {
        t[l][j] = t[l][j].div(&p);
    }
    let prow = t[l].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == l {
            continue;
        }
        let f = row[e].clone();
        if !f.is_pos() && !f.is_neg() {
            if T::EXACT {
                continue;
            }
            row[e] = T::zero();
            continue;
        }
        T::eliminate(row, &f, &prow);
    }
}

/// Rational from a small integer matrix entry.
pub fn rational(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn rational_one() -> BigRational {
    One::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn small_lp() {
        // max 3x + 2y, x + y <= 4, x + 3y <= 6, x <= 3
        let a = vec![vec![1.0, 1.0], vec![1.0, 3.0], vec![1.0, 0.0]];
        let s = solve_max(&a, &[4.0, 6.0, 3.0], &[3.0, 2.0]).unwrap();
        assert!((s.objective - 11.0).abs() < 1e-12);
        assert!((s.x[0] - 3.0).abs() < 1e-12 && (s.x[1] - 1.0).abs() < 1e-12);
        let dual: f64 = s.y.iter().zip([4.0, 6.0, 3.0]).map(|(y, b)| y * b).sum();
        assert!((dual - 11.0).abs() < 1e-12);
    }

    #[test]
    fn exact_lp_matches() {
        // fractional clique cover packing LP of C5: value 5/2
        let cl = [[0, 1], [1, 2], [2, 3], [3, 4], [0, 4]];
        let a: Vec<Vec<BigRational>> = cl
            .iter()
            .map(|c| (0..5).map(|v| rational(c.contains(&v) as i64)).collect())
            .collect();
        let s = solve_max(&a, &vec![rational(1); 5], &vec![rational(1); 5]).unwrap();
        assert_eq!(s.objective, BigRational::new(5.into(), 2.into()));
    }
}
