//! Independent checks on a computed subdivision, the brute-force edge
//! oracle, and split hyperplanes with their compatibility test.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{Hypersimplex, Subdivision};
use crate::linalg;
use crate::lp::{self, LpOutcome};
use crate::Rational;

fn int(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificationError {
    #[error("certificate of cell {cell} fails at vertex {vertex}")]
    Certificate { cell: String, vertex: String },
    #[error("cell {cell} is not full-dimensional")]
    FullDimension { cell: String },
    #[error("vertices not covered by any cell: {missing}")]
    Covering { missing: String },
    #[error("facet {ridge} of cell {cell} is invalid")]
    Facet { cell: String, ridge: String },
    #[error("ridge {ridge} lies in {count} cells")]
    Ridge { ridge: String, count: usize },
    #[error("cells {a} and {b} meet in more than their common facet")]
    Intersection { a: String, b: String },
}

/// Re-checks certificates, covering, full-dimensionality, facet validity
/// and ridge matching from the stored cells.
pub fn certify(sub: &Subdivision) -> Result<(), CertificationError> {
    let h = sub.hypersimplex();
    let n = h.n();
    let w = sub.weight().values();
    let mut covered = vec![false; h.len()];
    let mut ridges: HashMap<&[usize], (usize, bool)> = HashMap::new();
    for cell in sub.cells() {
        let name = h.render_cell(&cell.bases);
        for v in 0..h.len() {
            let m = h.mask(v);
            let mut lin = cell.c.clone();
            for (i, l) in cell.lambda.iter().enumerate() {
                if (m >> i) & 1 == 1 {
                    lin += l;
                }
            }
            let slack = &w[v] - lin;
            let inside = cell.bases.binary_search(&v).is_ok();
            if slack.is_negative() || slack.is_zero() != inside {
                return Err(CertificationError::Certificate {
                    cell: name,
                    vertex: crate::subsets::render(h.vertex(v)),
                });
            }
        }
        for &v in &cell.bases {
            covered[v] = true;
        }
        let rows: Vec<Vec<i64>> = cell.bases.iter().map(|&v| h.indicator(v)).collect();
        if linalg::rank_int(&rows) != n {
            return Err(CertificationError::FullDimension { cell: name });
        }
        for f in &cell.facets {
            let bad = || CertificationError::Facet { cell: name.clone(), ridge: h.render_cell(&f.tight) };
            let tight: Vec<usize> = cell.bases.iter().copied().filter(|&v| h.pair(&f.normal, v) == f.rhs).collect();
            let valid = cell.bases.iter().all(|&v| h.pair(&f.normal, v) <= f.rhs)
                && tight == f.tight
                && linalg::rank_int(&tight.iter().map(|&v| h.indicator(v)).collect::<Vec<_>>()) == n - 1;
            if !valid {
                return Err(bad());
            }
            let on_boundary = (0..h.len()).all(|v| h.pair(&f.normal, v) <= f.rhs);
            if on_boundary != f.neighbor.is_none() {
                return Err(bad());
            }
            let entry = ridges.entry(&f.tight).or_insert((0, on_boundary));
            entry.0 += 1;
        }
    }
    if let Some(v) = covered.iter().position(|c| !c) {
        return Err(CertificationError::Covering { missing: crate::subsets::render(h.vertex(v)) });
    }
    for (ridge, (count, boundary)) in ridges {
        let expected = if boundary { 1 } else { 2 };
        if count != expected {
            return Err(CertificationError::Ridge { ridge: h.render_cell(ridge), count });
        }
    }
    let cells = sub.cells();
    for wall in sub.walls() {
        let (a, b) = (&cells[wall.a], &cells[wall.b]);
        let common: Vec<usize> = a.bases.iter().copied().filter(|v| b.bases.binary_search(v).is_ok()).collect();
        if common != a.facets[wall.facet].tight {
            return Err(CertificationError::Intersection {
                a: h.render_cell(&a.bases),
                b: h.render_cell(&b.bases),
            });
        }
    }
    Ok(())
}

/// Edges of `conv{e_B : B ∈ cell}` by exact linear programming: `[u, v]` is
/// not an edge iff its midpoint is a convex combination that puts positive
/// weight on some other vertex.
pub fn polytope_edges(h: &Hypersimplex, cell: &[usize]) -> Vec<(usize, usize)> {
    let n = h.n();
    let pts: Vec<Vec<i64>> = cell.iter().map(|&v| h.indicator(v)).collect();
    let m = pts.len();
    let mut edges = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            // variables μ_0..μ_{m-1}, t
            let mut rows: Vec<Vec<Rational>> = Vec::new();
            let mut rhs = Vec::new();
            for i in 0..n {
                let mut r: Vec<Rational> = pts.iter().map(|p| int(2 * p[i])).collect();
                r.push(int(-(pts[a][i] + pts[b][i])));
                rows.push(r);
                rhs.push(int(0));
            }
            let mut r: Vec<Rational> = vec![int(1); m];
            r.push(int(-1));
            rows.push(r);
            rhs.push(int(0));
            let mut r: Vec<Rational> = (0..m).map(|p| int(i64::from(p != a && p != b))).collect();
            r.push(int(0));
            rows.push(r);
            rhs.push(int(1));
            if lp::feasible_point(&rows, &rhs).is_none() {
                edges.push((cell[a], cell[b]));
            }
        }
    }
    edges
}

/// Every edge of the cell polytope is a translate of some `e_i - e_j`.
pub fn edge_directions_ok(h: &Hypersimplex, cell: &[usize]) -> bool {
    polytope_edges(h, cell).iter().all(|&(u, v)| (h.mask(u) ^ h.mask(v)).count_ones() == 2)
}

/// The hyperplane `⟨normal, x⟩ = rhs` separating the two cells of a split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitHyperplane {
    pub normal: Vec<i64>,
    pub rhs: i64,
}

impl SplitHyperplane {
    /// Vertices of Δ(k,n) lying on the hyperplane.
    pub fn vertices_on(&self, h: &Hypersimplex) -> Vec<usize> {
        (0..h.len()).filter(|&v| h.pair(&self.normal, v) == self.rhs).collect()
    }
}

/// The wall of a two-cell subdivision.
pub fn split_hyperplane(sub: &Subdivision) -> Option<SplitHyperplane> {
    if sub.cells().len() != 2 {
        return None;
    }
    let wall = sub.walls().first()?;
    let f = &sub.cells()[wall.a].facets[wall.facet];
    Some(SplitHyperplane { normal: f.normal.clone(), rhs: f.rhs })
}

/// Two split hyperplanes of Δ(k,n) are compatible when they do not meet in
/// the interior `0 < x_i < 1`. Decided by maximizing `ε` subject to
/// `ε ≤ x_i ≤ 1 - ε`, `Σ x = k` and both hyperplane equations.
pub fn splits_compatible(k: usize, n: usize, a: &SplitHyperplane, b: &SplitHyperplane) -> bool {
    // variables: x (n), ε, s (n), t (n); x_i - ε - s_i = 0, x_i + ε + t_i = 1
    let nv = 3 * n + 1;
    let eps = n;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..n {
        let mut r = vec![Rational::zero(); nv];
        r[i] = int(1);
        r[eps] = int(-1);
        r[n + 1 + i] = int(-1);
        rows.push(r);
        rhs.push(int(0));
        let mut r = vec![Rational::zero(); nv];
        r[i] = int(1);
        r[eps] = int(1);
        r[2 * n + 1 + i] = int(1);
        rows.push(r);
        rhs.push(int(1));
    }
    let mut r = vec![Rational::zero(); nv];
    for x in r.iter_mut().take(n) {
        *x = int(1);
    }
    rows.push(r);
    rhs.push(int(k as i64));
    for hp in [a, b] {
        let mut r = vec![Rational::zero(); nv];
        for i in 0..n {
            r[i] = int(hp.normal[i]);
        }
        rows.push(r);
        rhs.push(int(hp.rhs));
    }
    let mut c = vec![Rational::zero(); nv];
    c[eps] = int(-1);
    match lp::minimize(&c, &rows, &rhs) {
        LpOutcome::Optimal { value, .. } => !value.is_negative(),
        LpOutcome::Infeasible => true,
        LpOutcome::Unbounded => unreachable!("ε is bounded by 1/2"),
    }
}
