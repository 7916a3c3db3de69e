//! Minimal conflicting subsets of atoms by QuickXplain.

use serde::Serialize;

use crate::engine::Outcome;
use crate::phylo::{Atom, BreakupMode};

use super::forest::Forest;
use super::model::SupertreeModel;
use super::sides::SideConstraint;
use super::SupertreeError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConflictCore {
    pub atoms: Vec<Atom>,
    /// Consistency checks performed.
    pub probes: u64,
}

struct Xplain<'a> {
    model: &'a mut SupertreeModel,
    atoms: &'a [Atom],
    probes: u64,
}

impl Xplain<'_> {
    fn consistent(&mut self) -> bool {
        self.probes += 1;
        self.model.propagate() == Outcome::Fixpoint
    }

    fn post_all(&mut self, idx: &[usize]) -> Result<(), SupertreeError> {
        for &i in idx {
            self.model.post_atom(&self.atoms[i])?;
        }
        Ok(())
    }

    /// The current engine state is the background. Returns a minimal subset
    /// of `c` that conflicts with it.
    fn qxp(&mut self, delta_posted: bool, c: &[usize]) -> Result<Vec<usize>, SupertreeError> {
        if delta_posted && !self.consistent() {
            return Ok(Vec::new());
        }
        if c.len() == 1 {
            return Ok(c.to_vec());
        }
        let (c1, c2) = c.split_at(c.len() / 2);

        let cp = self.model.engine_mut().checkpoint();
        self.post_all(c1)?;
        let d2 = self.qxp(!c1.is_empty(), c2)?;
        self.model.engine_mut().restore(cp)?;

        let cp = self.model.engine_mut().checkpoint();
        self.post_all(&d2)?;
        let d1 = self.qxp(!d2.is_empty(), c1)?;
        self.model.engine_mut().restore(cp)?;

        let mut out = d1;
        out.extend(d2);
        Ok(out)
    }
}

/// A minimal subset of `atoms` that cannot be posted together on top of
/// `model`. `model` should hold only the background (matrix, ranks, sides).
pub fn explain_atoms(model: &mut SupertreeModel, atoms: &[Atom]) -> Result<ConflictCore, SupertreeError> {
    let mut x = Xplain {
        model,
        atoms,
        probes: 0,
    };
    let all: Vec<usize> = (0..atoms.len()).collect();
    let cp = x.model.engine_mut().checkpoint();
    x.post_all(&all)?;
    let whole_consistent = x.consistent();
    x.model.engine_mut().restore(cp)?;
    if whole_consistent {
        return Err(SupertreeError::NoConflict);
    }
    let cp = x.model.engine_mut().checkpoint();
    let background_ok = x.consistent();
    x.model.engine_mut().restore(cp)?;
    if !background_ok {
        return Err(SupertreeError::InconsistentSides);
    }
    let mut core = x.qxp(false, &all)?;
    core.sort_unstable();
    Ok(ConflictCore {
        atoms: core.into_iter().map(|i| atoms[i].clone()).collect(),
        probes: x.probes,
    })
}

pub fn explain_conflict(
    forest: &Forest,
    mode: BreakupMode,
    sides: &[SideConstraint],
) -> Result<ConflictCore, SupertreeError> {
    let mut model = SupertreeModel::base(forest, sides)?;
    explain_atoms(&mut model, &SupertreeModel::forest_atoms(forest, mode))
}
