//! The constraint model behind every supertree operation: a matrix of mrca
//! depths under one ultrametric propagator, plus triples, fans and side
//! constraints posted as primitive relations.

use std::collections::{BTreeMap, HashMap};

use crate::engine::{Engine, Outcome, RunStats};
use crate::phylo::{breakup, matrix_to_tree, Atom, BreakupMode, PhyloTree, UltrametricIntMatrix};
use crate::relations::{post_eq2, post_eq3, post_le, post_lt};
use crate::store::VarId;
use crate::ultrametric::{post_um_matrix, MrcaMatrix};

use super::forest::Forest;
use super::sides::SideConstraint;
use super::SupertreeError;

/// An atom and the input trees it came from (empty for atoms given
/// directly).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostedAtom {
    pub atom: Atom,
    pub sources: Vec<usize>,
}

pub struct SupertreeModel {
    engine: Engine,
    matrix: MrcaMatrix,
    species: Vec<String>,
    index: HashMap<String, usize>,
    atoms: Vec<PostedAtom>,
    atom_slot: HashMap<Atom, usize>,
    side_posts: usize,
    taxa: BTreeMap<String, VarId>,
}

impl SupertreeModel {
    /// Matrix over `species` with the ultrametric propagator and nothing else.
    pub fn new(species: Vec<String>) -> Result<Self, SupertreeError> {
        let mut engine = Engine::new();
        let matrix = MrcaMatrix::new(&mut engine, species.len())?;
        post_um_matrix(&mut engine, &matrix);
        let index = species.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(SupertreeModel {
            engine,
            matrix,
            species,
            index,
            atoms: Vec::new(),
            atom_slot: HashMap::new(),
            side_posts: 0,
            taxa: BTreeMap::new(),
        })
    }

    /// Breaks every tree up and posts the atoms, then the side constraints.
    /// Ranked trees also get their ranks assigned.
    pub fn from_forest(forest: &Forest, mode: BreakupMode, sides: &[SideConstraint]) -> Result<Self, SupertreeError> {
        let mut m = Self::unconstrained(forest)?;
        for (t, tree) in forest.trees().iter().enumerate() {
            for atom in breakup(tree, mode) {
                m.add_atom(atom, Some(t))?;
            }
        }
        m.apply_forest_ranks(forest)?;
        for s in sides {
            m.apply_side(s)?;
        }
        Ok(m)
    }

    /// Matrix over the forest's species with ranks and side constraints but
    /// no atoms.
    pub fn base(forest: &Forest, sides: &[SideConstraint]) -> Result<Self, SupertreeError> {
        let mut m = Self::unconstrained(forest)?;
        m.apply_forest_ranks(forest)?;
        for s in sides {
            m.apply_side(s)?;
        }
        Ok(m)
    }

    pub(crate) fn unconstrained(forest: &Forest) -> Result<Self, SupertreeError> {
        if forest.is_empty() {
            return Err(SupertreeError::EmptyForest);
        }
        Self::new(forest.species().to_vec())
    }

    pub(crate) fn apply_forest_ranks(&mut self, forest: &Forest) -> Result<(), SupertreeError> {
        for tree in forest.trees().iter().filter(|t| t.has_ranks()) {
            self.apply_ranks(tree)?;
        }
        Ok(())
    }

    /// The distinct atoms of every tree's breakup, in input order.
    pub fn forest_atoms(forest: &Forest, mode: BreakupMode) -> Vec<Atom> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for tree in forest.trees() {
            for a in breakup(tree, mode) {
                if seen.insert(a.clone()) {
                    out.push(a);
                }
            }
        }
        out
    }

    /// Model over the given species with `atoms` posted in order.
    pub fn from_atoms(species: Vec<String>, atoms: &[Atom]) -> Result<Self, SupertreeError> {
        let mut m = Self::new(species)?;
        for a in atoms {
            m.add_atom(a.clone(), None)?;
        }
        Ok(m)
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn engine_mut(&mut self) -> &mut Engine {
        &mut self.engine
    }

    pub fn stats(&self) -> RunStats {
        self.engine.stats()
    }

    pub fn matrix(&self) -> &MrcaMatrix {
        &self.matrix
    }

    pub fn species(&self) -> &[String] {
        &self.species
    }

    pub fn n(&self) -> usize {
        self.species.len()
    }

    /// Distinct atoms in first-posted order.
    pub fn atoms(&self) -> &[PostedAtom] {
        &self.atoms
    }

    /// Propagators posted for side constraints and nested taxa.
    pub fn side_posts(&self) -> usize {
        self.side_posts
    }

    pub fn taxa(&self) -> &BTreeMap<String, VarId> {
        &self.taxa
    }

    pub fn index_of(&self, s: &str) -> Result<usize, SupertreeError> {
        self.index
            .get(s)
            .copied()
            .ok_or_else(|| SupertreeError::UnknownSpecies(s.to_owned()))
    }

    /// The variable holding the mrca depth of two distinct species.
    pub fn cell(&self, a: &str, b: &str) -> Result<VarId, SupertreeError> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        self.matrix
            .cell(i, j)
            .ok_or_else(|| SupertreeError::UnknownSpecies(format!("{a}/{b} (same species twice)")))
    }

    /// Records `atom` (once) and posts it.
    pub fn add_atom(&mut self, atom: Atom, source: Option<usize>) -> Result<(), SupertreeError> {
        if let Some(&slot) = self.atom_slot.get(&atom) {
            if let Some(s) = source {
                let srcs = &mut self.atoms[slot].sources;
                if !srcs.contains(&s) {
                    srcs.push(s);
                }
            }
            return Ok(());
        }
        self.post_atom(&atom)?;
        self.atom_slot.insert(atom.clone(), self.atoms.len());
        self.atoms.push(PostedAtom {
            atom,
            sources: source.into_iter().collect(),
        });
        Ok(())
    }

    /// Posts `atom` without recording it: `(ij)k` becomes
    /// `M_ik < M_ij` and `M_ik = M_jk`; a fan makes its three cells equal.
    pub fn post_atom(&mut self, atom: &Atom) -> Result<(), SupertreeError> {
        match atom {
            Atom::Triple(t) => {
                let (i, j) = t.pair();
                let k = t.outsider();
                let (ij, ik, jk) = (self.cell(i, j)?, self.cell(i, k)?, self.cell(j, k)?);
                post_lt(&mut self.engine, ik, ij);
                post_eq2(&mut self.engine, ik, jk);
            }
            Atom::Fan(f) => {
                let [i, j, k] = f.members();
                let (ij, ik, jk) = (self.cell(i, j)?, self.cell(i, k)?, self.cell(j, k)?);
                post_eq3(&mut self.engine, ij, ik, jk);
            }
        }
        Ok(())
    }

    pub fn apply_side(&mut self, side: &SideConstraint) -> Result<(), SupertreeError> {
        match side {
            SideConstraint::Predates { earlier, later } => self.apply_predates(&earlier.0, &earlier.1, &later.0, &later.1),
            SideConstraint::DateBounds { a, b, lo, hi } => self.apply_date_bounds(a, b, *lo, *hi),
            SideConstraint::RankAssign(t) => self.apply_ranks(t),
        }
    }

    /// `div(c,d)` predates `div(a,b)`: `M_cd < M_ab`.
    pub fn apply_predates(&mut self, c: &str, d: &str, a: &str, b: &str) -> Result<(), SupertreeError> {
        let (cd, ab) = (self.cell(c, d)?, self.cell(a, b)?);
        if cd == ab {
            // a cell cannot be below itself
            self.engine.tighten_lb(cd, i32::MAX);
            return Ok(());
        }
        post_lt(&mut self.engine, cd, ab);
        self.side_posts += 1;
        Ok(())
    }

    pub fn apply_date_bounds(&mut self, a: &str, b: &str, lo: i32, hi: i32) -> Result<(), SupertreeError> {
        let ab = self.cell(a, b)?;
        self.engine.tighten_lb(ab, lo);
        self.engine.tighten_ub(ab, hi);
        Ok(())
    }

    /// Assigns `M_ij` the rank of `mrca(i, j)` for every leaf pair whose
    /// mrca is ranked.
    pub fn apply_ranks(&mut self, tree: &PhyloTree) -> Result<(), SupertreeError> {
        let leaves = tree.leaves();
        for (x, &li) in leaves.iter().enumerate() {
            for &lj in &leaves[x + 1..] {
                let Some(r) = tree.rank(tree.mrca(li, lj)) else { continue };
                let cell = self.cell(tree.label(li).unwrap_or(""), tree.label(lj).unwrap_or(""))?;
                self.engine.assign(cell, r.min(i32::MAX as u32) as i32);
            }
        }
        Ok(())
    }

    /// New variable in `[1, max(n-1, 1)]` for an enclosing taxon.
    pub(crate) fn taxon_var(&mut self, name: &str) -> Result<VarId, SupertreeError> {
        if let Some(&v) = self.taxa.get(name) {
            return Ok(v);
        }
        let v = self.engine.new_var(1, (self.n() as i32 - 1).max(1))?;
        self.taxa.insert(name.to_owned(), v);
        Ok(v)
    }

    pub(crate) fn post_side_le(&mut self, a: VarId, b: VarId) {
        post_le(&mut self.engine, a, b);
        self.side_posts += 1;
    }

    pub(crate) fn post_side_lt(&mut self, a: VarId, b: VarId) {
        post_lt(&mut self.engine, a, b);
        self.side_posts += 1;
    }

    pub fn propagate(&mut self) -> Outcome {
        self.engine.propagate()
    }

    /// The matrix of current lower bounds, with species labels.
    pub fn lower_bound_matrix(&self) -> Result<UltrametricIntMatrix, SupertreeError> {
        let rows = self.matrix.lower_bounds(self.engine.store());
        Ok(UltrametricIntMatrix::new(self.species.clone(), rows)?)
    }

    /// Tree of the lower-bound matrix. Only meaningful at a fixpoint.
    pub fn lower_bound_tree(&self) -> Result<PhyloTree, SupertreeError> {
        Ok(matrix_to_tree(&self.lower_bound_matrix()?))
    }
}
