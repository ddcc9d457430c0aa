//! The hypersimplex Δ(k,n), regular subdivisions induced by weight vectors,
//! matroid and positroid recognition, and classification.
//!
//! Subdivisions are lower-face subdivisions: a maximal cell is the set of
//! vertices `B` on which `w_B - ⟨λ, e_B⟩ - c` attains its minimum value 0
//! for some affine function, provided that set is full-dimensional.

mod certify;
mod classify;
mod engine;
mod matroid;

use std::fmt;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

pub use certify::{
    certify, edge_directions_ok, polytope_edges, split_hyperplane, splits_compatible, CertificationError,
    SplitHyperplane,
};
pub use classify::{affine_dim, affine_dim_by_cells, classify};
pub use matroid::{cell_facets, is_matroid, is_matroid_masks, is_positroid, is_positroid_masks, rank_envelope};

use crate::subsets;
use crate::webtrop::{rational_to_json, WeightVector};
use crate::Rational;

#[derive(Debug, thiserror::Error)]
pub enum GeomError {
    #[error("invalid hypersimplex k={k}, n={n}: need 1 <= k < n <= 32")]
    Shape { k: usize, n: usize },
    #[error("weight is for Δ({0},{1}) but the hypersimplex is Δ({2},{3})")]
    WeightShape(usize, usize, usize, usize),
    #[error("{0:?} is not a {1}-subset of [{2}]")]
    BadSubset(Vec<usize>, usize, usize),
    #[error("positroid test called on a set that is not a matroid")]
    NotMatroid,
    #[error("cell {cell} is not full-dimensional (rank {rank}, need {needed})")]
    NotFullDimensional { cell: String, rank: usize, needed: usize },
    #[error("cell {cell} is not a matroid polytope; facet enumeration is only supported for matroid cells")]
    NonMatroidCell { cell: String },
    #[error("candidate facets do not cut out cell {cell}")]
    FacetFamily { cell: String },
    #[error("unmatched interior ridge {ridge} of cell {cell}")]
    UnmatchedRidge { cell: String, ridge: String },
    #[error("engine inconsistency at cell {cell}: {reason}")]
    Engine { cell: String, reason: String },
    #[error("brute-force facet search needs n <= 16 (got {0})")]
    TooLarge(usize),
}

/// Vertices of Δ(k,n), indexed by the lexicographic rank of their k-subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypersimplex {
    k: usize,
    n: usize,
    vertices: Vec<Vec<usize>>,
    masks: Vec<u32>,
}

impl Hypersimplex {
    pub fn new(k: usize, n: usize) -> Result<Self, GeomError> {
        if k == 0 || k >= n || n > 32 {
            return Err(GeomError::Shape { k, n });
        }
        let vertices = subsets::k_subsets(n, k);
        let masks = vertices.iter().map(|v| subsets::mask(v)).collect();
        Ok(Hypersimplex { k, n, vertices, masks })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// The k-subset of vertex `idx`.
    pub fn vertex(&self, idx: usize) -> &[usize] {
        &self.vertices[idx]
    }

    pub fn vertices(&self) -> &[Vec<usize>] {
        &self.vertices
    }

    pub fn mask(&self, idx: usize) -> u32 {
        self.masks[idx]
    }

    pub fn masks(&self) -> &[u32] {
        &self.masks
    }

    /// The 0/1 indicator vector `e_B`.
    pub fn indicator(&self, idx: usize) -> Vec<i64> {
        let m = self.masks[idx];
        (0..self.n).map(|i| ((m >> i) & 1) as i64).collect()
    }

    pub fn index_of(&self, subset: &[usize]) -> Result<usize, GeomError> {
        let ok = subset.len() == self.k
            && subset.windows(2).all(|w| w[0] < w[1])
            && subset.iter().all(|&x| (1..=self.n).contains(&x));
        if !ok {
            return Err(GeomError::BadSubset(subset.to_vec(), self.k, self.n));
        }
        Ok(subsets::lex_rank(self.n, subset))
    }

    /// `⟨a, e_B⟩` for an integer normal.
    pub fn pair(&self, a: &[i64], idx: usize) -> i64 {
        let m = self.masks[idx];
        (0..self.n).filter(|i| (m >> i) & 1 == 1).map(|i| a[i]).sum()
    }

    /// Renders a set of vertex indices as `{12,13,...}` for messages.
    pub fn render_cell(&self, cell: &[usize]) -> String {
        let parts: Vec<String> = cell.iter().map(|&i| subsets::render(&self.vertices[i])).collect();
        format!("{{{}}}", parts.join(" "))
    }
}

/// A facet inequality `⟨normal, x⟩ ≤ rhs` of a cell, with its tight vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub rhs: i64,
    pub tight: Vec<usize>,
    /// Index of the adjacent maximal cell, `None` on the boundary of Δ(k,n).
    pub neighbor: Option<usize>,
}

impl Serialize for Facet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Facet", 3)?;
        let normal: Vec<String> = self.normal.iter().map(|a| a.to_string()).collect();
        s.serialize_field("normal", &normal)?;
        s.serialize_field("rhs", &self.rhs.to_string())?;
        s.serialize_field("neighbor", &self.neighbor)?;
        s.end()
    }
}

/// A maximal cell with its affine certificate `w_B = ⟨λ, e_B⟩ + c` on the
/// cell and `w_B ≥ ⟨λ, e_B⟩ + c` elsewhere. `λ` is normalized so `λ_n = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub bases: Vec<usize>,
    pub lambda: Vec<Rational>,
    pub c: Rational,
    pub facets: Vec<Facet>,
}

/// An interior wall between cells `a < b`, stored as a facet of `a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Wall {
    pub a: usize,
    pub b: usize,
    pub facet: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Classification {
    pub cell_count: usize,
    pub is_matroidal: bool,
    pub is_positroidal: bool,
    pub is_split: bool,
    pub is_coarsest: bool,
    pub affine_dim: usize,
}

#[derive(Debug, Clone)]
pub struct Subdivision {
    pub(crate) hypersimplex: Hypersimplex,
    pub(crate) weight: WeightVector,
    pub(crate) cells: Vec<Cell>,
    pub(crate) walls: Vec<Wall>,
    pub(crate) classification: Classification,
}

impl Subdivision {
    pub fn k(&self) -> usize {
        self.hypersimplex.k
    }

    pub fn n(&self) -> usize {
        self.hypersimplex.n
    }

    pub fn hypersimplex(&self) -> &Hypersimplex {
        &self.hypersimplex
    }

    pub fn weight(&self) -> &WeightVector {
        &self.weight
    }

    /// Maximal cells, sorted by their vertex-index lists.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn classification(&self) -> &Classification {
        &self.classification
    }

    /// Cells as sorted lists of k-subsets.
    pub fn cell_subsets(&self) -> Vec<Vec<Vec<usize>>> {
        self.cells
            .iter()
            .map(|c| c.bases.iter().map(|&i| self.hypersimplex.vertices[i].clone()).collect())
            .collect()
    }

    fn rendered_cells(&self) -> Vec<Vec<String>> {
        self.cells
            .iter()
            .map(|c| c.bases.iter().map(|&i| subsets::render(&self.hypersimplex.vertices[i])).collect())
            .collect()
    }

    /// Stable key: the sorted cells rendered as JSON.
    pub fn canonical_key(&self) -> String {
        serde_json::to_string(&self.rendered_cells()).expect("string lists serialize")
    }

    /// JSON including facets and certificates.
    pub fn to_json_detailed(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("serializable");
        let details: Vec<serde_json::Value> = self
            .cells
            .iter()
            .map(|c| {
                serde_json::json!({
                    "lambda": c.lambda.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "c": c.c.to_string(),
                    "facets": c.facets,
                })
            })
            .collect();
        v["certificates"] = serde_json::Value::from(details);
        v
    }
}

impl Serialize for Subdivision {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Subdivision", 5)?;
        s.serialize_field("k", &self.k())?;
        s.serialize_field("n", &self.n())?;
        let weight: Vec<serde_json::Value> = self.weight.values().iter().map(rational_to_json).collect();
        s.serialize_field("weight", &weight)?;
        s.serialize_field("cells", &self.rendered_cells())?;
        s.serialize_field("classification", &self.classification)?;
        s.end()
    }
}

impl fmt::Display for Subdivision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}

/// Canonical key of a bare list of cells (each a list of k-subsets).
pub fn canonical_key_of(cells: &[Vec<Vec<usize>>]) -> String {
    let mut sorted: Vec<Vec<Vec<usize>>> = cells
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort();
            c
        })
        .collect();
    sorted.sort();
    let rendered: Vec<Vec<String>> =
        sorted.iter().map(|c| c.iter().map(|s| subsets::render(s)).collect()).collect();
    serde_json::to_string(&rendered).expect("string lists serialize")
}

/// The lower-face regular subdivision of Δ(k,n) induced by `w`.
pub fn regular_subdivision(h: &Hypersimplex, w: &WeightVector) -> Result<Subdivision, GeomError> {
    if (w.k(), w.n()) != (h.k, h.n) {
        return Err(GeomError::WeightShape(w.k(), w.n(), h.k, h.n));
    }
    let (cells, walls) = engine::enumerate(h, w.values())?;
    let mut sub = Subdivision {
        hypersimplex: h.clone(),
        weight: w.clone(),
        cells,
        walls,
        classification: Classification {
            cell_count: 0,
            is_matroidal: false,
            is_positroidal: false,
            is_split: false,
            is_coarsest: false,
            affine_dim: 0,
        },
    };
    sub.classification = classify(&sub);
    Ok(sub)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cells_of(sub: &Subdivision) -> Vec<Vec<String>> {
        sub.rendered_cells()
            .into_iter()
            .map(|c| c.into_iter().map(|s| s.replace(',', "")).collect())
            .collect()
    }

    fn strs(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn trivial_weight() {
        let h = Hypersimplex::new(2, 4).unwrap();
        let sub = regular_subdivision(&h, &WeightVector::zero(2, 4).unwrap()).unwrap();
        assert_eq!(sub.cells().len(), 1);
        assert_eq!(sub.cells()[0].facets.len(), 8);
        assert_eq!(sub.canonical_key(), r#"[["1,2","1,3","1,4","2,3","2,4","3,4"]]"#);
        let c = sub.classification();
        assert_eq!((c.affine_dim, c.is_coarsest, c.is_split), (4, false, false));
    }

    #[test]
    fn split_of_delta_24() {
        let h = Hypersimplex::new(2, 4).unwrap();
        let w = WeightVector::from_integers(2, 4, &[0, 0, 0, 1, 0, 0]).unwrap();
        let sub = regular_subdivision(&h, &w).unwrap();
        assert_eq!(
            cells_of(&sub),
            vec![strs(&["12", "13", "14", "24", "34"]), strs(&["12", "13", "23", "24", "34"])]
        );
        assert!(sub.classification().is_split);
    }

    #[test]
    fn split_of_delta_25() {
        let h = Hypersimplex::new(2, 5).unwrap();
        let w = WeightVector::from_integers(2, 5, &[0, 0, 0, 0, 1, 0, 0, 0, 0, 0]).unwrap();
        let sub = regular_subdivision(&h, &w).unwrap();
        assert_eq!(
            cells_of(&sub),
            vec![
                strs(&["12", "13", "14", "15", "24", "25", "34", "35", "45"]),
                strs(&["12", "13", "23", "24", "25", "34", "35"]),
            ]
        );
        let c = sub.classification();
        assert_eq!((c.cell_count, c.affine_dim, c.is_coarsest, c.is_positroidal), (2, 6, true, true));
        certify(&sub).unwrap();
    }

    #[test]
    fn simplex_cases() {
        for (k, n) in [(1, 2), (1, 4), (3, 4)] {
            let h = Hypersimplex::new(k, n).unwrap();
            let vals: Vec<i64> = (0..h.len() as i64).map(|i| i * i).collect();
            let sub = regular_subdivision(&h, &WeightVector::from_integers(k, n, &vals).unwrap()).unwrap();
            assert_eq!(sub.cells().len(), 1);
            certify(&sub).unwrap();
        }
    }
}
