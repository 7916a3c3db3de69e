//! Leaf-labelled rooted trees and the operations on them.

pub mod atoms;
pub mod breakup;
pub mod compare;
pub mod enumerate;
pub mod matrix;
pub mod newick;
pub mod tree;

pub use atoms::{Atom, AtomParseError, Fan, Triple};
pub use breakup::{breakup, hard_breakup, soft_breakup, BreakupMode};
pub use compare::{
    canonical_form, displays, displays_atom, isomorphic, perfectly_displays, restrict_and_suppress, same_topology,
};
pub use enumerate::all_rooted_trees;
pub use matrix::{matrix_to_tree, tree_to_matrix, MatrixError, UltrametricIntMatrix};
pub use newick::{parse_forest, parse_newick, to_newick, NewickError};
pub use tree::{Node, NodeId, PhyloTree, TreeBuilder, TreeError};
