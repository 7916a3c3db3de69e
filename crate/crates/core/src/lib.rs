//! Bounds-consistent propagation over ultrametric depth matrices, and the
//! supertree toolkit built on it.
//!
//! The layers, bottom up:
//!
//! * [`store`]: interval domains with events and a trail,
//! * [`engine`]: the propagation queue,
//! * [`relations`] and [`ultrametric`]: the propagators,
//! * [`phylo`]: trees, Newick, breakup and the tree/matrix correspondence,
//! * [`supertree`]: building, greedy repair, necessity, conflict cores,
//!   side constraints, nested taxa and enumeration.

pub mod engine;
pub mod phylo;
pub mod relations;
pub mod store;
pub mod supertree;
pub mod ultrametric;
