//! Supertree construction and analysis on top of the ultrametric model.

pub mod build;
pub mod enumerate;
pub mod explain;
pub mod forest;
pub mod generate;
pub mod greedy;
pub mod model;
pub mod necessity;
pub mod nested;
pub mod sides;

use thiserror::Error;

use crate::phylo::{AtomParseError, MatrixError, NewickError, TreeError};
use crate::store::StoreError;

pub use build::{cp_build, BuildResult};
pub use enumerate::enumerate_supertrees;
pub use explain::{explain_conflict, ConflictCore};
pub use forest::Forest;
pub use greedy::{greedy_build, greedy_forest, GreedyReport};
pub use model::{SupertreeModel, PostedAtom};
pub use necessity::necessity;
pub use nested::{apply_nested_taxa, attach_labels, build_nested, nested_preprocess, NestedEncoding};
pub use sides::{parse_sidecar, SideConstraint};

#[derive(Debug, Error)]
pub enum SupertreeError {
    #[error("empty forest")]
    EmptyForest,
    #[error("unknown species `{0}`")]
    UnknownSpecies(String),
    #[error("the input forest is incompatible")]
    NotCompatible,
    #[error("the input forest is compatible; there is no conflict to explain")]
    NoConflict,
    #[error("side constraints are inconsistent on their own")]
    InconsistentSides,
    #[error("nested taxa: {0}")]
    Nested(String),
    #[error("constraints line {line}: {msg}")]
    Sidecar { line: usize, msg: String },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Newick(#[from] NewickError),
    #[error(transparent)]
    Atom(#[from] AtomParseError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Store(#[from] StoreError),
}
