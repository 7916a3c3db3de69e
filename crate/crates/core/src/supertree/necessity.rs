use std::thread;

use crate::engine::Outcome;
use crate::phylo::{Atom, BreakupMode};

use super::forest::Forest;
use super::model::SupertreeModel;
use super::sides::SideConstraint;
use super::SupertreeError;

/// Whether `atom` holds in every supertree of the forest.
///
/// The three species of `atom` are in exactly one of four relations in any
/// tree. The atom is necessary iff each of the other three fails to
/// propagate when added to the model. Each branch builds its own model on
/// its own thread.
pub fn necessity(
    forest: &Forest,
    mode: BreakupMode,
    sides: &[SideConstraint],
    atom: &Atom,
) -> Result<bool, SupertreeError> {
    for s in atom.species() {
        if forest.index_of(s).is_none() {
            return Err(SupertreeError::UnknownSpecies(s.to_owned()));
        }
    }
    let mut base = SupertreeModel::from_forest(forest, mode, sides)?;
    if base.propagate() == Outcome::Failure {
        return Err(SupertreeError::NotCompatible);
    }
    let branches = atom.alternatives();
    let results: Vec<Result<bool, SupertreeError>> = thread::scope(|scope| {
        let handles: Vec<_> = branches
            .iter()
            .map(|alt| {
                scope.spawn(move || {
                    let mut m = SupertreeModel::from_forest(forest, mode, sides)?;
                    m.post_atom(alt)?;
                    Ok(m.propagate() == Outcome::Failure)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("necessity branch panicked"))
            .collect()
    });
    let mut all_fail = true;
    for r in results {
        all_fail &= r?;
    }
    Ok(all_fail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phylo::parse_forest;

    fn forest(s: &str) -> Forest {
        Forest::new(parse_forest(s).unwrap())
    }

    #[test]
    fn examples() {
        let f = forest("((a,b),c);");
        let soft = BreakupMode::Soft;
        assert!(necessity(&f, soft, &[], &Atom::triple("a", "b", "c")).unwrap());
        assert!(!necessity(&f, soft, &[], &Atom::triple("a", "c", "b")).unwrap());
        assert!(!necessity(&f, soft, &[], &Atom::fan("a", "b", "c")).unwrap());

        // c and d are only related to each other
        let f = forest("(a,b); (c,d);");
        for t in [Atom::triple("a", "b", "c"), Atom::triple("a", "c", "d"), Atom::fan("a", "c", "d")] {
            assert!(!necessity(&f, BreakupMode::Hard, &[], &t).unwrap(), "{t}");
        }
    }

    #[test]
    fn implied_triple_is_necessary() {
        // (ab)c and (bc)d force ((a,b),c),d) shaped relations such as (ab)d
        let f = forest("((a,b),c); ((b,c),d);");
        assert!(necessity(&f, BreakupMode::Hard, &[], &Atom::triple("a", "b", "d")).unwrap());
    }

    #[test]
    fn errors() {
        let f = forest("((a,b),c);");
        assert!(matches!(
            necessity(&f, BreakupMode::Hard, &[], &Atom::triple("a", "b", "z")),
            Err(SupertreeError::UnknownSpecies(_))
        ));
        let bad = forest("((a,b),c); ((a,c),b);");
        assert!(matches!(
            necessity(&bad, BreakupMode::Hard, &[], &Atom::triple("a", "b", "c")),
            Err(SupertreeError::NotCompatible)
        ));
    }
}
