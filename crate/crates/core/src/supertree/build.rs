use crate::engine::Outcome;
use crate::phylo::PhyloTree;

use super::model::SupertreeModel;
use super::SupertreeError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildResult {
    Supertree(PhyloTree),
    Incompatible,
}

impl BuildResult {
    pub fn tree(&self) -> Option<&PhyloTree> {
        match self {
            BuildResult::Supertree(t) => Some(t),
            BuildResult::Incompatible => None,
        }
    }

    pub fn is_compatible(&self) -> bool {
        matches!(self, BuildResult::Supertree(_))
    }
}

/// Propagates once and reads the tree off the lower bounds. No search.
pub fn cp_build(model: &mut SupertreeModel) -> Result<BuildResult, SupertreeError> {
    match model.propagate() {
        Outcome::Failure => Ok(BuildResult::Incompatible),
        Outcome::Fixpoint => Ok(BuildResult::Supertree(model.lower_bound_tree()?)),
    }
}
