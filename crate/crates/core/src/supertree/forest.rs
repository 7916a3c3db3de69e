use std::collections::{BTreeSet, HashMap};

use crate::phylo::PhyloTree;

/// Input trees together with the sorted union of their leaf labels.
#[derive(Debug, Clone)]
pub struct Forest {
    trees: Vec<PhyloTree>,
    species: Vec<String>,
    index: HashMap<String, usize>,
}

impl Forest {
    pub fn new(trees: Vec<PhyloTree>) -> Self {
        let all: BTreeSet<String> = trees.iter().flat_map(|t| t.leaf_set()).collect();
        let species: Vec<String> = all.into_iter().collect();
        let index = species.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Forest { trees, species, index }
    }

    pub fn trees(&self) -> &[PhyloTree] {
        &self.trees
    }

    pub fn species(&self) -> &[String] {
        &self.species
    }

    pub fn n(&self) -> usize {
        self.species.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }
}
