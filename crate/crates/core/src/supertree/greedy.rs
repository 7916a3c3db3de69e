use serde::Serialize;

use crate::engine::Outcome;
use crate::phylo::{Atom, BreakupMode, PhyloTree};

use super::forest::Forest;
use super::model::SupertreeModel;
use super::sides::SideConstraint;
use super::SupertreeError;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GreedyReport {
    pub accepted: Vec<Atom>,
    pub rejected: Vec<Atom>,
    /// Rejected atoms that the output tree really contradicts.
    pub violated_in_output: Vec<Atom>,
}

/// Posts the atoms one at a time in order, keeping each one that leaves the
/// model consistent and undoing each one that does not. `model` should
/// carry the side constraints only; its recorded atoms are ignored.
pub fn greedy_build(model: &mut SupertreeModel, atoms: &[Atom]) -> Result<(PhyloTree, GreedyReport), SupertreeError> {
    if model.propagate() == Outcome::Failure {
        return Err(SupertreeError::InconsistentSides);
    }
    let mut report = GreedyReport::default();
    let mut seen = std::collections::HashSet::new();
    for atom in atoms {
        if !seen.insert(atom) {
            continue;
        }
        let cp = model.engine_mut().checkpoint();
        model.post_atom(atom)?;
        if model.propagate() == Outcome::Failure {
            model.engine_mut().restore(cp)?;
            report.rejected.push(atom.clone());
        } else {
            model.engine_mut().commit(cp)?;
            report.accepted.push(atom.clone());
        }
    }
    let lb = model.lower_bound_matrix()?;
    report.violated_in_output = report
        .rejected
        .iter()
        .filter(|a| lb.satisfies(a) == Some(false))
        .cloned()
        .collect();
    Ok((crate::phylo::matrix_to_tree(&lb), report))
}

/// Greedy build over the breakup of a forest, in input order.
pub fn greedy_forest(
    forest: &Forest,
    mode: BreakupMode,
    sides: &[SideConstraint],
) -> Result<(PhyloTree, GreedyReport), SupertreeError> {
    let mut model = SupertreeModel::base(forest, sides)?;
    greedy_build(&mut model, &SupertreeModel::forest_atoms(forest, mode))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phylo::{isomorphic, parse_newick};

    fn abc() -> Vec<String> {
        ["a", "b", "c"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn first_come_first_kept() {
        let atoms = [Atom::triple("a", "b", "c"), Atom::triple("a", "c", "b")];
        let mut m = SupertreeModel::new(abc()).unwrap();
        let (t, r) = greedy_build(&mut m, &atoms).unwrap();
        assert_eq!(r.accepted, vec![atoms[0].clone()]);
        assert_eq!(r.rejected, vec![atoms[1].clone()]);
        assert_eq!(r.violated_in_output, vec![atoms[1].clone()]);
        assert!(isomorphic(&t, &parse_newick("((a,b),c);").unwrap()));

        let rev = [atoms[1].clone(), atoms[0].clone()];
        let mut m = SupertreeModel::new(abc()).unwrap();
        let (t, r) = greedy_build(&mut m, &rev).unwrap();
        assert_eq!(r.accepted, vec![rev[0].clone()]);
        assert_eq!(r.rejected, vec![rev[1].clone()]);
        assert!(isomorphic(&t, &parse_newick("((a,c),b);").unwrap()));
    }

    #[test]
    fn duplicates_are_processed_once() {
        let a = Atom::triple("a", "b", "c");
        let mut m = SupertreeModel::new(abc()).unwrap();
        let (_, r) = greedy_build(&mut m, &[a.clone(), a.clone()]).unwrap();
        assert_eq!(r.accepted, vec![a]);
        assert!(r.rejected.is_empty());
    }
}
