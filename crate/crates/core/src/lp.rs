//! A small dense two-phase simplex over exact rationals (Bland's rule).
//!
//! Problems are in standard form: minimize `c·x` subject to `A x = b`,
//! `x ≥ 0`. Sizes in this crate are tiny (tens of variables), so a dense
//! tableau is fine.

use num_traits::{One, Signed, Zero};

use crate::Rational;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    obj: Vec<Rational>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (x, p) in self.obj.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs simplex iterations over columns `< allowed`; `false` if unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let rhs = self.cols;
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[enter].is_positive() {
                    let ratio = &row[rhs] / &row[enter];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((leave, _)) = best else {
                return false;
            };
            self.pivot(leave, enter);
        }
    }

    fn set_objective(&mut self, c: &[Rational]) {
        let mut obj: Vec<Rational> = c.to_vec();
        obj.resize(self.cols + 1, Rational::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            if !obj[b].is_zero() {
                let f = obj[b].clone();
                for (x, p) in obj.iter_mut().zip(&self.rows[i]) {
                    *x -= &f * p;
                }
            }
        }
        self.obj = obj;
    }
}

/// Minimizes `c·x` subject to `a x = b`, `x ≥ 0`.
pub fn minimize(c: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> LpOutcome {
    let m = a.len();
    let nvars = c.len();
    let cols = nvars + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut r: Vec<Rational> = row.iter().map(|x| if flip { -x } else { x.clone() }).collect();
        r.resize(cols + 1, Rational::zero());
        r[nvars + i] = Rational::one();
        r[cols] = if flip { -bi } else { bi.clone() };
        rows.push(r);
    }
    let mut t = Tableau { rows, obj: Vec::new(), basis: (nvars..nvars + m).collect(), cols };

    // phase 1: minimize the sum of artificials
    let mut phase1 = vec![Rational::zero(); cols];
    for x in phase1.iter_mut().skip(nvars) {
        *x = Rational::one();
    }
    t.set_objective(&phase1);
    t.optimize(cols);
    if !t.obj[cols].is_zero() {
        return LpOutcome::Infeasible;
    }
    // drive artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= nvars {
            match (0..nvars).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => {
                    t.pivot(i, j);
                    i += 1;
                }
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }

    // phase 2 over original variables only
    t.set_objective(c);
    if !t.optimize(nvars) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); nvars];
    for (i, &bcol) in t.basis.iter().enumerate() {
        x[bcol] = t.rows[i][cols].clone();
    }
    let value = c.iter().zip(&x).fold(Rational::zero(), |acc, (ci, xi)| acc + ci * xi);
    LpOutcome::Optimal { x, value }
}

/// A feasible point of `a x = b, x ≥ 0`, if any.
pub fn feasible_point(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let nvars = a.first().map_or(0, Vec::len);
    match minimize(&vec![Rational::zero(); nvars], a, b) {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(x: i64) -> Rational {
        Rational::from_integer(BigInt::from(x))
    }

    #[test]
    fn small_lp() {
        // min -x - y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let c = vec![q(-1), q(-1), q(0), q(0)];
        let a = vec![vec![q(1), q(2), q(1), q(0)], vec![q(3), q(1), q(0), q(1)]];
        let b = vec![q(4), q(6)];
        match minimize(&c, &a, &b) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, Rational::new(BigInt::from(-14), BigInt::from(5)));
                assert_eq!(x[0], Rational::new(BigInt::from(8), BigInt::from(5)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = vec![vec![q(1), q(1)]];
        assert_eq!(minimize(&[q(0), q(0)], &a, &[q(-1)]), LpOutcome::Infeasible);
        let a = vec![vec![q(1), q(-1)]];
        assert_eq!(minimize(&[q(-1), q(0)], &a, &[q(1)]), LpOutcome::Unbounded);
        // redundant equality rows
        let a = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert!(feasible_point(&a, &[q(1), q(2)]).is_some());
    }
}
