//! From rectangular semistandard Young tableaux to positroidal subdivisions
//! of the hypersimplex Δ(k,n).
//!
//! The pipeline is
//!
//! 1. [`tableaux`]: tableau algebra and the factorization of a tableau into
//!    fundamental tableaux, which yields the integer vector `v_T`;
//! 2. [`webtrop`]: the web matrix, its Plücker minors as exponent sets, and
//!    min-plus evaluation `P_J(v_T)` giving the weight vector `wt_T`;
//! 3. [`hypergeom`]: the exact regular-subdivision engine for weights on
//!    Δ(k,n), with matroid/positroid recognition and classification;
//! 4. [`census`]: drivers that enumerate tableaux and check the theorems,
//!    examples and conjectures at desk scale;
//! 5. [`cli`]: the command-line front end.
//!
//! All arithmetic is exact (integers and arbitrary-precision rationals).

pub mod census;
pub mod cli;
pub mod hypergeom;
pub mod linalg;
pub mod lp;
pub mod subsets;
pub mod tableaux;
pub mod webtrop;

pub use census::{split_census, tree_split, verify_suite, CensusReport, Models, Suite, SuiteReport, TreeSplit};
pub use hypergeom::{
    is_matroid, is_positroid, regular_subdivision, Classification, Hypersimplex, Subdivision,
};
pub use tableaux::{ColumnClass, FundamentalDecomposition, Tableau};
pub use webtrop::{WebModel, WeightVector};

/// Exact rational number used throughout the geometry engine.
pub type Rational = num_rational::BigRational;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Tableau(#[from] tableaux::TableauError),
    #[error(transparent)]
    Web(#[from] webtrop::WebError),
    #[error(transparent)]
    Geometry(#[from] hypergeom::GeomError),
    #[error(transparent)]
    Census(#[from] census::CensusError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
