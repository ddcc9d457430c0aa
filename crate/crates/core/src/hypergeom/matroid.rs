//! Matroid and positroid recognition, and facets of matroid cells.

use std::collections::{BTreeSet, HashSet};

use super::{Facet, GeomError, Hypersimplex};
use crate::linalg;
use crate::subsets;

/// Basis exchange on bitmasks: for all `I, J` and `a ∈ I \ J` there is
/// `b ∈ J \ I` with `I - a + b` a basis.
pub fn is_matroid_masks(bases: &[u32]) -> bool {
    let Some(&first) = bases.first() else {
        return false;
    };
    let k = first.count_ones();
    if bases.iter().any(|b| b.count_ones() != k) {
        return false;
    }
    let set: HashSet<u32> = bases.iter().copied().collect();
    for &i in &set {
        for &j in &set {
            let mut only_i = i & !j;
            let only_j = j & !i;
            while only_i != 0 {
                let a = only_i & only_i.wrapping_neg();
                only_i &= !a;
                let base = i & !a;
                let mut cand = only_j;
                let mut found = false;
                while cand != 0 {
                    let b = cand & cand.wrapping_neg();
                    cand &= !b;
                    if set.contains(&(base | b)) {
                        found = true;
                        break;
                    }
                }
                if !found {
                    return false;
                }
            }
        }
    }
    true
}

/// Basis exchange axiom on a set of k-subsets.
pub fn is_matroid(cell: &[Vec<usize>]) -> bool {
    let masks: Vec<u32> = cell.iter().map(|b| subsets::mask(b)).collect();
    is_matroid_masks(&masks)
}

fn interval_masks(n: usize) -> Vec<u32> {
    subsets::cyclic_intervals(n).iter().map(|s| subsets::mask(s)).collect()
}

fn rank_of(bases: &[u32], s: u32) -> u32 {
    bases.iter().map(|b| (b & s).count_ones()).max().unwrap_or(0)
}

/// `{A : |A ∩ S| ≤ r(S)` for every cyclic interval `S}` as bitmasks, in
/// lexicographic order.
pub fn rank_envelope(bases: &[u32], k: usize, n: usize) -> Vec<u32> {
    let constraints: Vec<(u32, u32)> = interval_masks(n).into_iter().map(|s| (s, rank_of(bases, s))).collect();
    subsets::k_subsets(n, k)
        .iter()
        .map(|a| subsets::mask(a))
        .filter(|a| constraints.iter().all(|&(s, r)| (a & s).count_ones() <= r))
        .collect()
}

/// Positroid test for a set already known to be a matroid.
pub fn is_positroid_masks(bases: &[u32], k: usize, n: usize) -> bool {
    let cell: BTreeSet<u32> = bases.iter().copied().collect();
    let env: BTreeSet<u32> = rank_envelope(bases, k, n).into_iter().collect();
    cell == env
}

/// A matroid on `[n]` is a positroid iff it equals its cyclic-interval rank
/// envelope.
pub fn is_positroid(cell: &[Vec<usize>], n: usize) -> Result<bool, GeomError> {
    if !is_matroid(cell) {
        return Err(GeomError::NotMatroid);
    }
    let masks: Vec<u32> = cell.iter().map(|b| subsets::mask(b)).collect();
    Ok(is_positroid_masks(&masks, cell[0].len(), n))
}

fn rank_of_rows(h: &Hypersimplex, idxs: &[usize]) -> usize {
    let rows: Vec<Vec<i64>> = idxs.iter().map(|&i| h.indicator(i)).collect();
    linalg::rank_int(&rows)
}

/// Facet inequalities `⟨a, x⟩ ≤ b` of the cell polytope (vertex indices into
/// `h`), each tight on an (n-2)-dimensional face. Positroid cells use
/// cyclic-interval rank inequalities and the cube bounds; other matroid
/// cells use rank inequalities for all subsets.
pub fn cell_facets(cell: &[usize], h: &Hypersimplex) -> Result<Vec<Facet>, GeomError> {
    let (k, n) = (h.k(), h.n());
    let rank = rank_of_rows(h, cell);
    if rank != n {
        return Err(GeomError::NotFullDimensional { cell: h.render_cell(cell), rank, needed: n });
    }
    let masks: Vec<u32> = cell.iter().map(|&i| h.mask(i)).collect();
    if !is_matroid_masks(&masks) {
        return Err(GeomError::NonMatroidCell { cell: h.render_cell(cell) });
    }
    let positroid = is_positroid_masks(&masks, k, n);

    let mut candidates: Vec<(Vec<i64>, i64)> = Vec::new();
    for i in 0..n {
        let mut a = vec![0; n];
        a[i] = -1;
        candidates.push((a, 0));
        let mut a = vec![0; n];
        a[i] = 1;
        candidates.push((a, 1));
    }
    let family: Vec<u32> = if positroid {
        interval_masks(n)
    } else {
        if n > 16 {
            return Err(GeomError::TooLarge(n));
        }
        (1u32..(1u32 << n) - 1).collect()
    };
    for s in family {
        let a: Vec<i64> = (0..n).map(|i| ((s >> i) & 1) as i64).collect();
        candidates.push((a, rank_of(&masks, s) as i64));
    }

    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut facets = Vec::new();
    for (normal, rhs) in candidates {
        let tight: Vec<usize> = cell.iter().copied().filter(|&v| h.pair(&normal, v) == rhs).collect();
        if tight.len() < n - 1 || tight.len() == cell.len() || seen.contains(&tight) {
            continue;
        }
        if rank_of_rows(h, &tight) == n - 1 {
            seen.insert(tight.clone());
            facets.push(Facet { normal, rhs, tight, neighbor: None });
        }
    }

    // the facets must cut out exactly the cell among the vertices of Δ(k,n)
    let inside: Vec<usize> = (0..h.len())
        .filter(|&v| facets.iter().all(|f| h.pair(&f.normal, v) <= f.rhs))
        .collect();
    if inside != cell {
        return Err(GeomError::FacetFamily { cell: h.render_cell(cell) });
    }
    Ok(facets)
}
