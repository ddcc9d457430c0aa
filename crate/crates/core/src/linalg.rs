//! Exact linear algebra over the integers and the rationals.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::Rational;

/// Fraction-free (Bareiss) elimination in `i128`; `None` on overflow.
fn bareiss_rank_i128(mut m: Vec<Vec<i128>>) -> Option<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev: i128 = 1;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(p, r);
        let pivot = m[r][c];
        for i in r + 1..rows {
            let factor = m[i][c];
            for j in c + 1..cols {
                let a = pivot.checked_mul(m[i][j])?;
                let b = factor.checked_mul(m[r][j])?;
                m[i][j] = a.checked_sub(b)? / prev;
            }
            m[i][c] = 0;
        }
        prev = pivot;
        r += 1;
    }
    Some(r)
}

fn bareiss_rank_big(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let pivot = m[r][c].clone();
        for i in r + 1..rows {
            let factor = m[i][c].clone();
            if factor.is_zero() {
                for j in c + 1..cols {
                    m[i][j] = &pivot * &m[i][j] / &prev;
                }
            } else {
                for j in c + 1..cols {
                    m[i][j] = (&pivot * &m[i][j] - &factor * &m[r][j]) / &prev;
                }
            }
            m[i][c] = BigInt::zero();
        }
        prev = pivot;
        r += 1;
    }
    r
}

/// Rank of an integer matrix.
pub fn rank_int(rows: &[Vec<i64>]) -> usize {
    let small: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    match bareiss_rank_i128(small) {
        Some(r) => r,
        None => bareiss_rank_big(
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        ),
    }
}

/// Rank of a rational matrix (rows are scaled to integers first).
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let ints: Vec<Vec<BigInt>> = rows.iter().map(|r| clear_denominators(r)).collect();
    bareiss_rank_big(ints)
}

/// Multiplies a rational row by the lcm of its denominators.
pub fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
    row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

/// Reduced row echelon form; returns the reduced rows (zero rows dropped)
/// and the pivot columns.
pub fn rref(rows: &[Vec<Rational>], cols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// A basis of `{x : rows · x = 0}`, one vector per free column, in column
/// order.
pub fn nullspace(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let (red, pivots) = rref(rows, cols);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (row, &p) in red.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves `rows · x = rhs` exactly; `None` if inconsistent. Free variables
/// are set to zero.
pub fn solve(rows: &[Vec<Rational>], rhs: &[Rational], cols: usize) -> Option<Vec<Rational>> {
    let aug: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v = r.clone();
            v.push(b.clone());
            v
        })
        .collect();
    let (red, pivots) = rref(&aug, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &p) in red.iter().zip(&pivots) {
        x[p] = row[cols].clone();
    }
    Some(x)
}

/// Dot product of an integer vector with a rational vector.
pub fn dot_int(a: &[i64], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, _)| **x != 0)
        .fold(Rational::zero(), |acc, (x, y)| acc + y * Rational::from_integer(BigInt::from(*x)))
}

pub fn is_nonneg(x: &Rational) -> bool {
    !x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> Rational {
        Rational::from_integer(BigInt::from(x))
    }

    #[test]
    fn ranks() {
        assert_eq!(rank_int(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rank_int(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]), 3);
        assert_eq!(rank_int(&[vec![0, 0], vec![0, 0]]), 0);
        assert_eq!(rank_int(&[vec![0, 1, 2], vec![0, 2, 4], vec![1, 0, 0]]), 2);
        // forces the BigInt fallback
        let big = i64::MAX / 2;
        assert_eq!(rank_int(&[vec![big, 1, 0], vec![1, big, 1], vec![0, 1, big]]), 3);
    }

    #[test]
    fn nullspace_and_solve() {
        let rows = vec![vec![q(1), q(1), q(1)], vec![q(0), q(1), q(2)]];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns, vec![vec![q(1), q(-2), q(1)]]);
        let x = solve(&rows, &[q(3), q(3)], 3).unwrap();
        assert_eq!(x, vec![q(0), q(3), q(0)]);
        assert!(solve(&[vec![q(1)], vec![q(1)]], &[q(1), q(2)], 1).is_none());
        assert_eq!(rank(&rows), 2);
    }
}
