//! Dense two-phase tableau simplex, generic over exact rationals and `f64`.
//!
//! Problems are `minimize c·x` subject to sparse rows `a·x (≤|=|≥) b` and
//! `x ≥ 0`. Bland's rule is used throughout, so the method terminates even
//! on the heavily degenerate covering LPs this crate produces. Optimal
//! solutions come with dual values: for a row of kind `≤` the dual is `≤ 0`,
//! for `≥` it is `≥ 0`, for `=` it is free, and `b·y = c·x` at optimality.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Field operations plus a sign test. `f64` compares against a fixed tolerance.
pub trait LpScalar:
    Clone
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Exact arithmetic: ties in the ratio test are genuine and Bland's rule
    /// alone is safe. Inexact scalars prefer the largest pivot among near ties.
    const EXACT: bool;
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero_ish(&self) -> bool;
    fn is_positive_ish(&self) -> bool;
    fn is_negative_ish(&self) -> bool;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    /// Only called for inexact scalars.
    fn from_f64(x: f64) -> Self;
}

impl LpScalar for Rational {
    const EXACT: bool = true;
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        num::One::one()
    }
    fn is_zero_ish(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive_ish(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_negative_ish(&self) -> bool {
        Signed::is_negative(self)
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        rational::to_f64(self)
    }
    fn from_f64(x: f64) -> Self {
        rational::from_f64(x).unwrap_or_else(|_| Zero::zero())
    }
}

pub const FLOAT_TOLERANCE: f64 = 1e-9;
const PIVOT_TOLERANCE: f64 = 1e-7;
const REINVERT_EVERY: usize = 50;

impl LpScalar for f64 {
    const EXACT: bool = false;
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero_ish(&self) -> bool {
        self.abs() <= FLOAT_TOLERANCE
    }
    fn is_positive_ish(&self) -> bool {
        *self > FLOAT_TOLERANCE
    }
    fn is_negative_ish(&self) -> bool {
        *self < -FLOAT_TOLERANCE
    }
    fn from_rational(r: &Rational) -> Self {
        rational::to_f64(r)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_f64(x: f64) -> Self {
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Row<T> {
    pub coeffs: Vec<(usize, T)>,
    pub relation: Relation,
    pub rhs: T,
}

#[derive(Debug, Clone)]
pub struct LinearProgram<T> {
    num_vars: usize,
    objective: Vec<T>,
    rows: Vec<Row<T>>,
}

#[derive(Debug, Clone)]
pub struct LpSolution<T> {
    pub x: Vec<T>,
    pub duals: Vec<T>,
    pub objective: T,
}

impl<T: LpScalar> LinearProgram<T> {
    /// Minimize `objective · x`.
    pub fn minimize(objective: Vec<T>) -> Self {
        LinearProgram {
            num_vars: objective.len(),
            objective,
            rows: Vec::new(),
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, T)>, relation: Relation, rhs: T) -> usize {
        debug_assert!(coeffs.iter().all(|(j, _)| *j < self.num_vars));
        self.rows.push(Row {
            coeffs,
            relation,
            rhs,
        });
        self.rows.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn rows(&self) -> &[Row<T>] {
        &self.rows
    }

    pub fn objective(&self) -> &[T] {
        &self.objective
    }

    pub fn solve(&self) -> Result<LpSolution<T>> {
        Tableau::new(self).run(self)
    }

    /// Primal and dual feasibility plus zero duality gap, under the scalar's
    /// own tolerance. Exact for rationals.
    pub fn certifies(&self, sol: &LpSolution<T>) -> bool {
        if sol.x.iter().any(|v| v.is_negative_ish()) {
            return false;
        }
        for (row, y) in self.rows.iter().zip(&sol.duals) {
            let lhs = row
                .coeffs
                .iter()
                .fold(T::zero(), |acc, (j, a)| acc + a.clone() * sol.x[*j].clone());
            let slack = lhs - row.rhs.clone();
            let ok = match row.relation {
                Relation::Le => !slack.is_positive_ish() && !y.is_positive_ish(),
                Relation::Ge => !slack.is_negative_ish() && !y.is_negative_ish(),
                Relation::Eq => slack.is_zero_ish(),
            };
            if !ok {
                return false;
            }
        }
        let mut reduced = self.objective.clone();
        for (row, y) in self.rows.iter().zip(&sol.duals) {
            for (j, a) in &row.coeffs {
                reduced[*j] = reduced[*j].clone() - a.clone() * y.clone();
            }
        }
        if reduced.iter().any(|r| r.is_negative_ish()) {
            return false;
        }
        let primal = self
            .objective
            .iter()
            .zip(&sol.x)
            .fold(T::zero(), |acc, (c, x)| acc + c.clone() * x.clone());
        let dual = self
            .rows
            .iter()
            .zip(&sol.duals)
            .fold(T::zero(), |acc, (r, y)| acc + r.rhs.clone() * y.clone());
        (primal.clone() - sol.objective.clone()).is_zero_ish() && (primal - dual).is_zero_ish()
    }
}

struct Tableau<T> {
    // m rows of width `cols + 1`; the last entry is the right-hand side
    t: Vec<Vec<T>>,
    basis: Vec<usize>,
    cols: usize,
    first_artificial: usize,
    // column that formed the identity in row i at the start
    initial: Vec<usize>,
    // +1 or -1: whether row i was negated to make its rhs nonnegative
    sign: Vec<bool>,
    // starting tableau, kept for inexact scalars to recompute the final basis solution
    start: Option<Vec<Vec<f64>>>,
}

impl<T: LpScalar> Tableau<T> {
    fn new(lp: &LinearProgram<T>) -> Self {
        let m = lp.rows.len();
        let n = lp.num_vars;
        let mut negated = Vec::with_capacity(m);
        let mut kinds = Vec::with_capacity(m);
        for row in &lp.rows {
            let neg = row.rhs.is_negative_ish();
            let rel = match (row.relation, neg) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => r,
            };
            negated.push(neg);
            kinds.push(rel);
        }
        let slacks = kinds.iter().filter(|k| **k != Relation::Eq).count();
        let artificials = kinds.iter().filter(|k| **k != Relation::Le).count();
        let cols = n + slacks + artificials;
        let first_artificial = n + slacks;
        let mut t = vec![vec![T::zero(); cols + 1]; m];
        let mut basis = vec![0; m];
        let mut initial = vec![0; m];
        let (mut s, mut a) = (n, first_artificial);
        for (i, row) in lp.rows.iter().enumerate() {
            let flip = |v: T| if negated[i] { -v } else { v };
            for (j, c) in &row.coeffs {
                t[i][*j] = t[i][*j].clone() + flip(c.clone());
            }
            t[i][cols] = flip(row.rhs.clone());
            match kinds[i] {
                Relation::Le => {
                    t[i][s] = T::one();
                    basis[i] = s;
                    s += 1;
                }
                Relation::Ge => {
                    t[i][s] = -T::one();
                    s += 1;
                    t[i][a] = T::one();
                    basis[i] = a;
                    a += 1;
                }
                Relation::Eq => {
                    t[i][a] = T::one();
                    basis[i] = a;
                    a += 1;
                }
            }
            initial[i] = basis[i];
        }
        let start = (!T::EXACT).then(|| t.iter().map(|row| row.iter().map(LpScalar::to_f64).collect()).collect());
        Tableau {
            start,
            t,
            basis,
            cols,
            first_artificial,
            initial,
            sign: negated,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c].clone();
        for v in self.t[r].iter_mut() {
            if !v.is_zero_ish() {
                *v = v.clone() / p.clone();
            }
        }
        self.t[r][c] = T::one();
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c].clone();
            if f.is_zero_ish() {
                row[c] = T::zero();
                continue;
            }
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero_ish() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
            row[c] = T::zero();
        }
        self.basis[r] = c;
    }

    /// Reduced costs `c_j - c_B B^{-1} A_j` for every column.
    fn reduced_costs(&self, cost: &[T]) -> Vec<T> {
        let mut d: Vec<T> = (0..self.cols)
            .map(|j| cost.get(j).cloned().unwrap_or_else(T::zero))
            .collect();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost.get(b).cloned().unwrap_or_else(T::zero);
            if cb.is_zero_ish() {
                continue;
            }
            for (dj, a) in d.iter_mut().zip(&self.t[i]) {
                if !a.is_zero_ish() {
                    *dj = dj.clone() - cb.clone() * a.clone();
                }
            }
        }
        d
    }

    fn bland_ratio_test(&self, enter: usize) -> Option<usize> {
        let mut leave: Option<(usize, T)> = None;
        for i in 0..self.t.len() {
            let a = &self.t[i][enter];
            if !a.is_positive_ish() {
                continue;
            }
            let ratio = self.t[i][self.cols].clone() / a.clone();
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (!(ratio > *lr) && self.basis[i] < self.basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        leave.map(|(i, _)| i)
    }

    /// Bland's rule with a tolerance band: among rows whose ratio is within
    /// tolerance of the smallest, the lowest basic index leaves. Pivots below
    /// `PIVOT_TOLERANCE` are never taken; they are what blow up `f64`
    /// tableaus on degenerate covering LPs.
    fn stable_ratio_test(&self, enter: usize) -> Option<usize> {
        let rows: Vec<(usize, f64)> = (0..self.t.len())
            .filter_map(|i| {
                let a = self.t[i][enter].to_f64();
                (a > PIVOT_TOLERANCE).then(|| (i, self.t[i][self.cols].to_f64().max(0.0) / a))
            })
            .collect();
        let min_ratio = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
        rows.into_iter()
            .filter(|r| r.1 <= min_ratio + FLOAT_TOLERANCE)
            .min_by_key(|r| self.basis[r.0])
            .map(|r| r.0)
    }

    /// Bland's rule iterations until optimal. `allowed` bounds the entering columns.
    fn optimize(&mut self, cost: &[T], allowed: usize) -> Result<()> {
        let mut d = self.reduced_costs(cost);
        let limit = 50 * (self.t.len() + self.cols) + 1000;
        let mut steps = 0;
        loop {
            steps += 1;
            if !T::EXACT && steps > limit {
                return Err(Error::Budget(format!("simplex exceeded {limit} pivots")));
            }
            if !T::EXACT && steps % REINVERT_EVERY == 0 {
                self.reinvert();
                d = self.reduced_costs(cost);
            }
            let mut entering = (0..allowed).find(|&j| d[j].is_negative_ish());
            if entering.is_none() && !T::EXACT {
                // pivots drift in floating point; confirm optimality from a fresh factorization
                self.reinvert();
                d = self.reduced_costs(cost);
                entering = (0..allowed).find(|&j| d[j].is_negative_ish());
            }
            let Some(enter) = entering else {
                return Ok(());
            };
            let leave = if T::EXACT { self.bland_ratio_test(enter) } else { self.stable_ratio_test(enter) };
            let Some(r) = leave else {
                return Err(Error::Unbounded);
            };
            let f = d[enter].clone();
            self.pivot(r, enter);
            for (dj, a) in d.iter_mut().zip(&self.t[r]) {
                if !a.is_zero_ish() {
                    *dj = dj.clone() - f.clone() * a.clone();
                }
            }
            d[enter] = T::zero();
        }
    }

    /// Rebuilds the tableau as `B⁻¹ [A | b]` from the starting one for the
    /// current basis. Inexact scalars only; a singular basis is left alone.
    fn reinvert(&mut self) {
        let Some(start) = self.start.as_ref() else {
            return;
        };
        let m = self.t.len();
        let width = self.cols + 1;
        let b = DMatrix::from_fn(m, m, |i, k| start[i][self.basis[k]]);
        let a = DMatrix::from_fn(m, width, |i, j| start[i][j]);
        let Some(fresh) = b.lu().solve(&a) else {
            return;
        };
        for (i, row) in self.t.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let x = fresh[(i, j)];
                *v = T::from_f64(if x.abs() <= FLOAT_TOLERANCE { 0.0 } else { x });
            }
        }
        for (i, &c) in self.basis.iter().enumerate() {
            for r in 0..m {
                self.t[r][c] = if r == i { T::one() } else { T::zero() };
            }
        }
    }

    /// Basic values `B⁻¹b` and duals `c_B B⁻¹` recomputed from the starting
    /// tableau by one LU solve, discarding the rounding accumulated over the
    /// pivots. Inexact scalars only.
    fn refined(&self, cb: &[T]) -> Option<(Vec<T>, Vec<T>)> {
        let start = self.start.as_ref()?;
        let m = self.t.len();
        let b = DMatrix::from_fn(m, m, |i, k| start[i][self.basis[k]]);
        let rhs = DVector::from_fn(m, |i, _| start[i][self.cols]);
        let lu = b.clone().lu();
        let basic = lu.solve(&rhs)?;
        let c = DVector::from_fn(m, |k, _| cb[k].to_f64());
        let y = b.transpose().lu().solve(&c)?;
        let clean = |v: f64| if v.abs() <= FLOAT_TOLERANCE { 0.0 } else { v };
        Some((
            basic.iter().map(|&v| T::from_f64(clean(v).max(0.0))).collect(),
            y.iter().map(|&v| T::from_f64(clean(v))).collect(),
        ))
    }

    fn run(mut self, lp: &LinearProgram<T>) -> Result<LpSolution<T>> {
        let m = self.t.len();
        if self.first_artificial < self.cols {
            let mut phase1 = vec![T::zero(); self.cols];
            for c in phase1.iter_mut().skip(self.first_artificial) {
                *c = T::one();
            }
            self.optimize(&phase1, self.cols)?;
            let infeasibility = (0..m)
                .filter(|&i| self.basis[i] >= self.first_artificial)
                .fold(T::zero(), |acc, i| acc + self.t[i][self.cols].clone());
            if infeasibility.is_positive_ish() {
                return Err(Error::Infeasible);
            }
            for i in 0..m {
                if self.basis[i] < self.first_artificial {
                    continue;
                }
                if let Some(j) = (0..self.first_artificial).find(|&j| !self.t[i][j].is_zero_ish()) {
                    self.pivot(i, j);
                }
            }
        }
        self.optimize(&lp.objective, self.first_artificial)?;

        let cb: Vec<T> = self
            .basis
            .iter()
            .map(|&b| lp.objective.get(b).cloned().unwrap_or_else(T::zero))
            .collect();
        let (basic, y): (Vec<T>, Vec<T>) = match self.refined(&cb) {
            Some(r) => r,
            None => {
                let basic = (0..m).map(|i| self.t[i][self.cols].clone()).collect();
                let y = (0..m)
                    .map(|i| {
                        let col = self.initial[i];
                        (0..m).fold(T::zero(), |acc, k| acc + cb[k].clone() * self.t[k][col].clone())
                    })
                    .collect();
                (basic, y)
            }
        };
        let mut x = vec![T::zero(); lp.num_vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < lp.num_vars {
                x[b] = basic[i].clone();
            }
        }
        let duals = y
            .into_iter()
            .zip(&self.sign)
            .map(|(y, &flip)| if flip { -y } else { y })
            .collect();
        let objective = lp
            .objective
            .iter()
            .zip(&x)
            .fold(T::zero(), |acc, (c, v)| acc + c.clone() * v.clone());
        Ok(LpSolution {
            x,
            duals,
            objective,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn small_exact_lp_with_duals() {
        // min -x - y  s.t. x + 2y <= 4, 3x + y <= 6
        let mut lp = LinearProgram::minimize(vec![int(-1), int(-1)]);
        lp.add_row(vec![(0, int(1)), (1, int(2))], Relation::Le, int(4));
        lp.add_row(vec![(0, int(3)), (1, int(1))], Relation::Le, int(6));
        let s = lp.solve().unwrap();
        assert_eq!(s.x, vec![ratio(8, 5), ratio(6, 5)]);
        assert_eq!(s.objective, ratio(-14, 5));
        assert!(lp.certifies(&s));
    }

    #[test]
    fn equality_and_ge_rows() {
        // min x + 2y  s.t. x + y = 3, x - y >= -1, y >= 1/2
        let mut lp = LinearProgram::minimize(vec![int(1), int(2)]);
        lp.add_row(vec![(0, int(1)), (1, int(1))], Relation::Eq, int(3));
        lp.add_row(vec![(0, int(1)), (1, int(-1))], Relation::Ge, int(-1));
        lp.add_row(vec![(1, int(1))], Relation::Ge, ratio(1, 2));
        let s = lp.solve().unwrap();
        assert_eq!(s.objective, ratio(7, 2));
        assert!(lp.certifies(&s));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::minimize(vec![int(1)]);
        lp.add_row(vec![(0, int(1))], Relation::Le, int(1));
        lp.add_row(vec![(0, int(1))], Relation::Ge, int(2));
        assert_eq!(lp.solve().unwrap_err(), Error::Infeasible);

        let mut lp = LinearProgram::minimize(vec![int(-1)]);
        lp.add_row(vec![(0, int(1))], Relation::Ge, int(0));
        assert_eq!(lp.solve().unwrap_err(), Error::Unbounded);
    }

    #[test]
    fn matching_pennies_float() {
        // min t s.t. t >= row payoffs of a mixed column strategy
        let mut lp = LinearProgram::minimize(vec![0.0, 0.0, 1.0]);
        lp.add_row(vec![(0, 1.0), (1, -1.0), (2, -1.0)], Relation::Le, 0.0);
        lp.add_row(vec![(0, -1.0), (1, 1.0), (2, -1.0)], Relation::Le, 0.0);
        lp.add_row(vec![(0, 1.0), (1, 1.0)], Relation::Eq, 1.0);
        let s = lp.solve().unwrap();
        assert!(s.objective.abs() < 1e-12);
        assert!((s.x[0] - 0.5).abs() < 1e-12);
        assert!(lp.certifies(&s));
    }

    fn covering_master<T: LpScalar>(rows: usize, cols: &[Vec<usize>]) -> LinearProgram<T> {
        let s = cols.len();
        let mut objective = vec![T::zero(); s + 1];
        objective[s] = T::one();
        let mut lp = LinearProgram::minimize(objective);
        for x in 0..rows {
            let mut row: Vec<(usize, T)> = (0..s).filter(|&j| cols[j].contains(&x)).map(|j| (j, T::one())).collect();
            row.push((s, -T::one()));
            lp.add_row(row, Relation::Le, T::zero());
        }
        lp.add_row((0..s).map(|j| (j, T::one())).collect(), Relation::Eq, T::one());
        lp
    }

    #[test]
    fn degenerate_covering_float_matches_exact() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let rows = 48;
            let cols: Vec<Vec<usize>> = (0..150)
                .map(|_| (0..rows).filter(|_| rng.gen_bool(0.25)).collect())
                .collect();
            let exact = covering_master::<Rational>(rows, &cols).solve().unwrap();
            let lp = covering_master::<f64>(rows, &cols);
            let float = lp.solve().unwrap();
            assert!((float.objective - exact.objective.to_f64()).abs() < 1e-9);
            assert!(lp.certifies(&float));
        }
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::minimize(vec![int(1), int(1)]);
        lp.add_row(vec![(0, int(1)), (1, int(1))], Relation::Eq, int(2));
        lp.add_row(vec![(0, int(2)), (1, int(2))], Relation::Eq, int(4));
        let s = lp.solve().unwrap();
        assert_eq!(s.objective, int(2));
        assert!(lp.certifies(&s));
    }
}
