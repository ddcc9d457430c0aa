//! Enumeration of the maximal cells of a regular subdivision by walking
//! across walls in the space of affine functions.
//!
//! A cell is represented by an affine function `ℓ = ⟨λ, ·⟩ + c` with
//! `w - ℓ ≥ 0` on every vertex; the cell is the zero set of `w - ℓ`.
//! Crossing the facet `⟨a, x⟩ ≤ b` means moving `ℓ` along `⟨a, x⟩ - b` until
//! a new vertex beyond the facet becomes tight.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::matroid::cell_facets;
use super::{Cell, Facet, GeomError, Hypersimplex, Wall};
use crate::linalg;
use crate::Rational;

fn int(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

struct Affine {
    lambda: Vec<Rational>,
    c: Rational,
}

impl Affine {
    fn at(&self, h: &Hypersimplex, v: usize) -> Rational {
        let m = h.mask(v);
        let mut acc = self.c.clone();
        for (i, l) in self.lambda.iter().enumerate() {
            if (m >> i) & 1 == 1 {
                acc += l;
            }
        }
        acc
    }

    fn slacks(&self, h: &Hypersimplex, w: &[Rational]) -> Vec<Rational> {
        (0..h.len()).map(|v| &w[v] - self.at(h, v)).collect()
    }
}

fn tight_set(slacks: &[Rational]) -> Vec<usize> {
    slacks.iter().enumerate().filter(|(_, s)| s.is_zero()).map(|(i, _)| i).collect()
}

/// Lowers a constant function onto `w` and rotates it about its tight set
/// until the tight set is full-dimensional.
fn initial_cell(h: &Hypersimplex, w: &[Rational]) -> Result<(Vec<usize>, Affine), GeomError> {
    let (k, n) = (h.k(), h.n());
    let mut f = Affine { lambda: vec![Rational::zero(); n], c: w.iter().min().expect("nonempty").clone() };
    loop {
        let slacks = f.slacks(h, w);
        let tight = tight_set(&slacks);
        let rows: Vec<Vec<Rational>> = tight
            .iter()
            .map(|&v| {
                let mut r: Vec<Rational> = h.indicator(v).into_iter().map(int).collect();
                r.push(int(1));
                r
            })
            .collect();
        let null = linalg::nullspace(&rows, n + 1);
        // directions other than the lineality (1, ..., 1, -k)
        let dir = null.into_iter().find(|v| {
            let v0 = &v[0];
            !(v[..n].iter().all(|x| x == v0) && v[n] == -(v0 * int(k as i64)))
        });
        let Some(mut dir) = dir else {
            return Ok((tight, f));
        };
        let shift = |d: &[Rational], v: usize| {
            let m = h.mask(v);
            let mut acc = d[n].clone();
            for (i, x) in d[..n].iter().enumerate() {
                if (m >> i) & 1 == 1 {
                    acc += x;
                }
            }
            acc
        };
        if !(0..h.len()).any(|v| shift(&dir, v).is_positive()) {
            for x in dir.iter_mut() {
                *x = -x.clone();
            }
        }
        let step = (0..h.len())
            .filter_map(|v| {
                let g = shift(&dir, v);
                g.is_positive().then(|| &slacks[v] / g)
            })
            .min()
            .ok_or_else(|| GeomError::Engine {
                cell: h.render_cell(&tight),
                reason: "no rotation direction".into(),
            })?;
        for (l, d) in f.lambda.iter_mut().zip(&dir[..n]) {
            *l += &step * d;
        }
        f.c += &step * &dir[n];
    }
}

struct Found {
    bases: Vec<usize>,
    affine: Affine,
    facets: Vec<Facet>,
}

pub(super) fn enumerate(h: &Hypersimplex, w: &[Rational]) -> Result<(Vec<Cell>, Vec<Wall>), GeomError> {
    let (k, n) = (h.k(), h.n());
    let (bases, affine) = initial_cell(h, w)?;
    let mut found: Vec<Found> = Vec::new();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    index.insert(bases.clone(), 0);
    found.push(Found { bases, affine, facets: Vec::new() });
    queue.push_back(0);

    while let Some(ci) = queue.pop_front() {
        let mut facets = cell_facets(&found[ci].bases, h)?;
        let slacks = found[ci].affine.slacks(h, w);
        for facet in facets.iter_mut() {
            let beyond = (0..h.len()).filter_map(|v| {
                let excess = h.pair(&facet.normal, v) - facet.rhs;
                (excess > 0).then(|| &slacks[v] / int(excess))
            });
            let Some(step) = beyond.min() else {
                continue;
            };
            let cur = &found[ci].affine;
            let lambda: Vec<Rational> =
                cur.lambda.iter().zip(&facet.normal).map(|(l, &a)| l + &step * int(a)).collect();
            let c = &cur.c - &step * int(facet.rhs);
            let next = Affine { lambda, c };
            let next_bases = tight_set(&next.slacks(h, w));
            if !facet.tight.iter().all(|v| next_bases.binary_search(v).is_ok()) {
                return Err(GeomError::Engine {
                    cell: h.render_cell(&found[ci].bases),
                    reason: "neighbor does not contain the crossed facet".into(),
                });
            }
            let ni = match index.get(&next_bases) {
                Some(&ni) => ni,
                None => {
                    let ni = found.len();
                    index.insert(next_bases.clone(), ni);
                    found.push(Found { bases: next_bases, affine: next, facets: Vec::new() });
                    queue.push_back(ni);
                    ni
                }
            };
            facet.neighbor = Some(ni);
        }
        found[ci].facets = facets;
    }

    // every interior facet must be a facet of its neighbor, pointing back
    for (ci, cell) in found.iter().enumerate() {
        for f in &cell.facets {
            if let Some(ni) = f.neighbor {
                let back = found[ni].facets.iter().any(|g| g.tight == f.tight && g.neighbor == Some(ci));
                if ni == ci || !back {
                    return Err(GeomError::UnmatchedRidge {
                        cell: h.render_cell(&cell.bases),
                        ridge: h.render_cell(&f.tight),
                    });
                }
            }
        }
    }

    // canonical order
    let mut order: Vec<usize> = (0..found.len()).collect();
    order.sort_by(|&a, &b| found[a].bases.cmp(&found[b].bases));
    let mut new_index = vec![0; found.len()];
    for (pos, &old) in order.iter().enumerate() {
        new_index[old] = pos;
    }
    let mut slots: Vec<Option<Found>> = found.into_iter().map(Some).collect();
    let mut cells = Vec::with_capacity(slots.len());
    for &old in &order {
        let f = slots[old].take().expect("each cell taken once");
        let shift = f.affine.lambda[n - 1].clone();
        let lambda = f.affine.lambda.iter().map(|l| l - &shift).collect();
        let c = &f.affine.c + &shift * int(k as i64);
        let facets = f
            .facets
            .into_iter()
            .map(|mut fa| {
                fa.neighbor = fa.neighbor.map(|x| new_index[x]);
                fa
            })
            .collect();
        cells.push(Cell { bases: f.bases, lambda, c, facets });
    }
    let mut walls = Vec::new();
    for (a, cell) in cells.iter().enumerate() {
        for (fi, f) in cell.facets.iter().enumerate() {
            if let Some(b) = f.neighbor {
                if b > a {
                    walls.push(Wall { a, b, facet: fi });
                }
            }
        }
    }
    Ok((cells, walls))
}
