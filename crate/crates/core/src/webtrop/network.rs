//! The web matrix as a planar network and the symbolic expansion of its
//! maximal minors.
//!
//! The network is a grid with `k` rows and `n - k` columns. Source `r`
//! enters row `r` at its east end; paths move west along rows and south
//! along columns, and sink `s > k` is the bottom of column `n - s + 1`. The
//! vertical edge between rows `i` and `i + 1` in the column that is `j`-th
//! from the east carries the variable `x_{i,j}`; all other edges have
//! weight one. Then
//!
//! ```text
//! W[r, s] = δ_{r,s}                              (s <= k)
//! W[r, s] = (-1)^(k - r) · Σ_{paths r → s} weight (s > k)
//! ```
//!
//! and every maximal minor of `W` is a polynomial with positive
//! coefficients (Lindström–Gessel–Viennot).

use std::collections::{BTreeMap, HashMap};

use super::WebError;
use crate::subsets;

/// Sparse multivariate polynomial: exponent vector → integer coefficient.
pub type Poly = BTreeMap<Vec<u8>, i128>;

fn one(vars: usize) -> Poly {
    let mut p = Poly::new();
    p.insert(vec![0; vars], 1);
    p
}

fn add_into(acc: &mut Poly, other: &Poly, sign: i128) -> Result<(), WebError> {
    for (e, c) in other {
        let slot = acc.entry(e.clone()).or_insert(0);
        *slot = c
            .checked_mul(sign)
            .and_then(|t| slot.checked_add(t))
            .ok_or(WebError::CoefficientOverflow)?;
        if *slot == 0 {
            acc.remove(e);
        }
    }
    Ok(())
}

fn mul(a: &Poly, b: &Poly) -> Result<Poly, WebError> {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u8> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let c = ca.checked_mul(*cb).ok_or(WebError::CoefficientOverflow)?;
            let slot = out.entry(e).or_insert(0);
            *slot = slot.checked_add(c).ok_or(WebError::CoefficientOverflow)?;
        }
    }
    out.retain(|_, c| *c != 0);
    Ok(out)
}

fn times_var(p: &Poly, var: usize) -> Poly {
    p.iter()
        .map(|(e, c)| {
            let mut e = e.clone();
            e[var] += 1;
            (e, *c)
        })
        .collect()
}

/// Coordinate of `x_{i,j}` in `ℤ^{(k-1)(n-k)}` (row-major, 1-based inputs).
pub fn variable_index(i: usize, j: usize, n: usize, k: usize) -> usize {
    (i - 1) * (n - k) + (j - 1)
}

/// Path-sum matrix entries `W[r][s]` (0-based `r`, `s`), signs included.
pub fn web_matrix(k: usize, n: usize) -> Vec<Vec<Poly>> {
    let m = n - k;
    let vars = (k - 1) * m;
    let mut w = vec![vec![Poly::new(); n]; k];
    for r in 0..k {
        w[r][r] = one(vars);
    }
    for source in 1..=k {
        // f[row][col], rows source..=k, cols 1..=m (index 0 unused)
        let mut f = vec![vec![Poly::new(); m + 2]; k + 1];
        for row in source..=k {
            for col in (1..=m).rev() {
                let mut acc = Poly::new();
                if row == source && col == m {
                    acc = one(vars);
                }
                if col < m {
                    let west = f[row][col + 1].clone();
                    add_into(&mut acc, &west, 1).expect("path counts are small");
                }
                if row > source {
                    let var = variable_index(row - 1, m + 1 - col, n, k);
                    let south = times_var(&f[row - 1][col], var);
                    add_into(&mut acc, &south, 1).expect("path counts are small");
                }
                f[row][col] = acc;
            }
        }
        let sign: i128 = if (k - source).is_multiple_of(2) { 1 } else { -1 };
        for s in k + 1..=n {
            let col = n - s + 1;
            let mut entry = Poly::new();
            add_into(&mut entry, &f[k][col], sign).expect("path counts are small");
            w[source - 1][s - 1] = entry;
        }
    }
    w
}

/// Expands every maximal minor of the web matrix by memoized Laplace
/// expansion along the top row. Returns minors in lexicographic order of
/// the column set.
pub fn expand_minors(k: usize, n: usize, max_monomials: u64) -> Result<Vec<Poly>, WebError> {
    let vars = (k - 1) * (n - k);
    let w = web_matrix(k, n);
    let mut memo: HashMap<u32, Poly> = HashMap::new();
    let mut stored: u64 = 0;

    fn det(
        cols: u32,
        k: usize,
        vars: usize,
        w: &[Vec<Poly>],
        memo: &mut HashMap<u32, Poly>,
        stored: &mut u64,
        cap: u64,
    ) -> Result<Poly, WebError> {
        if cols == 0 {
            return Ok(one(vars));
        }
        if let Some(p) = memo.get(&cols) {
            return Ok(p.clone());
        }
        let size = cols.count_ones() as usize;
        let row = k - size;
        let mut acc = Poly::new();
        for (pos, s) in subsets::from_mask(cols).into_iter().enumerate() {
            let entry = &w[row][s - 1];
            if entry.is_empty() {
                continue;
            }
            let rest = det(cols & !(1 << (s - 1)), k, vars, w, memo, stored, cap)?;
            if rest.is_empty() {
                continue;
            }
            let term = mul(entry, &rest)?;
            add_into(&mut acc, &term, if pos % 2 == 0 { 1 } else { -1 })?;
        }
        *stored += acc.len() as u64;
        if *stored > cap {
            return Err(WebError::Budget { k: w.len(), n: w[0].len(), monomials: *stored, cap });
        }
        memo.insert(cols, acc.clone());
        Ok(acc)
    }

    subsets::k_subsets(n, k)
        .iter()
        .map(|j| det(subsets::mask(j), k, vars, &w, &mut memo, &mut stored, max_monomials))
        .collect()
}

/// Independent expansion by enumerating vertex-disjoint path families
/// (Lindström–Gessel–Viennot). Exponential; meant for cross-checks.
pub fn path_family_minor(k: usize, n: usize, subset: &[usize]) -> Poly {
    let m = n - k;
    let vars = (k - 1) * m;
    let sources: Vec<usize> = (1..=k).filter(|r| !subset.contains(r)).collect();
    let mut sink_cols: Vec<usize> = subset.iter().filter(|&&s| s > k).map(|&s| n - s + 1).collect();
    // the topmost source must reach the westmost sink
    sink_cols.sort_unstable();

    fn paths(k: usize, n: usize, r: usize, sink_col: usize) -> Vec<(Vec<(usize, usize)>, Vec<usize>)> {
        let m = n - k;
        let mut out = Vec::new();
        let mut stack = vec![(r, m, vec![(r, m)], Vec::new())];
        while let Some((row, col, visited, vars)) = stack.pop() {
            if row == k && col == sink_col {
                out.push((visited.clone(), vars.clone()));
            }
            if col > sink_col {
                let mut v = visited.clone();
                v.push((row, col - 1));
                stack.push((row, col - 1, v, vars.clone()));
            }
            if row < k && col >= sink_col {
                let mut v = visited.clone();
                v.push((row + 1, col));
                let mut x = vars.clone();
                x.push(variable_index(row, m + 1 - col, n, k));
                stack.push((row + 1, col, v, x));
            }
        }
        out
    }

    let all: Vec<_> = sources
        .iter()
        .zip(&sink_cols)
        .map(|(&r, &c)| paths(k, n, r, c))
        .collect();
    let mut result = Poly::new();
    fn rec(
        idx: usize,
        all: &[Vec<(Vec<(usize, usize)>, Vec<usize>)>],
        used: &mut Vec<(usize, usize)>,
        exps: &mut Vec<u8>,
        result: &mut Poly,
    ) {
        if idx == all.len() {
            *result.entry(exps.clone()).or_insert(0) += 1;
            return;
        }
        for (visited, vars) in &all[idx] {
            if visited.iter().any(|v| used.contains(v)) {
                continue;
            }
            let before = used.len();
            used.extend(visited.iter().copied());
            for &v in vars {
                exps[v] += 1;
            }
            rec(idx + 1, all, used, exps, result);
            for &v in vars {
                exps[v] -= 1;
            }
            used.truncate(before);
        }
    }
    rec(0, &all, &mut Vec::new(), &mut vec![0; vars], &mut result);
    result
}
