//! Classification of a subdivision and the dimension of the space of
//! weights that are affine on every maximal cell.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::Zero;

use super::matroid::{is_matroid_masks, is_positroid_masks};
use super::{Classification, Subdivision};
use crate::linalg;
use crate::Rational;

fn int(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

/// `x ↦ ⟨a, x⟩ + beta` modulo the lineality `Σx - k`, as a vector in `ℚ^n`.
fn reduce_mod_lineality(a: &[i64], beta: i64, k: usize) -> Vec<i64> {
    let n = a.len();
    let an = a[n - 1];
    let mut v: Vec<i64> = a[..n - 1].iter().map(|x| x - an).collect();
    v.push(beta + k as i64 * an);
    v
}

/// Dimension of `{u ∈ ℝ^{C(n,k)} : u is affine on every maximal cell}`.
///
/// Each interior wall contributes one scalar (the jump of the affine
/// function across it); walls off a spanning tree of the dual graph impose
/// cycle-consistency equations. The result is `n` plus the nullity.
pub fn affine_dim(sub: &Subdivision) -> usize {
    let (k, n) = (sub.k(), sub.n());
    let cells = sub.cells();
    let walls = sub.walls();
    if walls.is_empty() {
        return n;
    }
    // jump vector of each wall, oriented from cell a to cell b
    let jumps: Vec<Vec<i64>> = walls
        .iter()
        .map(|wl| {
            let f = &cells[wl.a].facets[wl.facet];
            reduce_mod_lineality(&f.normal, -f.rhs, k)
        })
        .collect();
    // spanning tree by BFS; path[c] = signed wall multiset from the root
    let mut adj: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); cells.len()];
    for (wi, wl) in walls.iter().enumerate() {
        adj[wl.a].push((wl.b, wi, 1));
        adj[wl.b].push((wl.a, wi, -1));
    }
    let mut path: Vec<Option<Vec<i64>>> = vec![None; cells.len()];
    let mut tree = vec![false; walls.len()];
    path[0] = Some(vec![0; walls.len()]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for &(d, wi, sign) in &adj[c] {
            if path[d].is_none() {
                let mut p = path[c].clone().expect("visited");
                p[wi] += sign;
                path[d] = Some(p);
                tree[wi] = true;
                queue.push_back(d);
            }
        }
    }
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (wi, wl) in walls.iter().enumerate() {
        if tree[wi] {
            continue;
        }
        // f_a + s_w g_w - f_b = 0, expanded through tree paths
        let pa = path[wl.a].as_ref().expect("connected");
        let pb = path[wl.b].as_ref().expect("connected");
        let mut coeff: Vec<i64> = pa.iter().zip(pb).map(|(x, y)| x - y).collect();
        coeff[wi] += 1;
        for coord in 0..n {
            rows.push(coeff.iter().zip(&jumps).map(|(c, g)| c * g[coord]).collect());
        }
    }
    let rank = if rows.is_empty() { 0 } else { linalg::rank_int(&rows) };
    n + walls.len() - rank
}

/// The same dimension from the full linear system in `u` and per-cell
/// affine parameters. Slow; meant for cross-checks on small instances.
pub fn affine_dim_by_cells(sub: &Subdivision) -> usize {
    let h = sub.hypersimplex();
    let n = h.n();
    let nv = h.len();
    let cells = sub.cells();
    let cols = nv + cells.len() * (n + 1);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for (ci, cell) in cells.iter().enumerate() {
        for &v in &cell.bases {
            let mut row = vec![Rational::zero(); cols];
            row[v] = int(1);
            let off = nv + ci * (n + 1);
            for (i, e) in h.indicator(v).into_iter().enumerate() {
                row[off + i] = int(-e);
            }
            row[off + n] = int(-1);
            rows.push(row);
        }
    }
    let nullity = cols - linalg::rank(&rows);
    // each cell's parameters carry one lineality direction
    nullity - cells.len()
}

pub fn classify(sub: &Subdivision) -> Classification {
    let h = sub.hypersimplex();
    let cell_masks: Vec<Vec<u32>> =
        sub.cells().iter().map(|c| c.bases.iter().map(|&v| h.mask(v)).collect()).collect();
    let is_matroidal = cell_masks.iter().all(|m| is_matroid_masks(m));
    let is_positroidal = is_matroidal && cell_masks.iter().all(|m| is_positroid_masks(m, h.k(), h.n()));
    let cell_count = sub.cells().len();
    let affine_dim = affine_dim(sub);
    Classification {
        cell_count,
        is_matroidal,
        is_positroidal,
        is_split: cell_count == 2,
        is_coarsest: cell_count >= 2 && affine_dim == h.n() + 1,
        affine_dim,
    }
}
