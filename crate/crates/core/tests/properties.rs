use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use umtree::engine::Outcome;
use umtree::phylo::{breakup, displays_atom, parse_newick, tree_to_matrix, Atom, BreakupMode, UltrametricIntMatrix};
use umtree::supertree::generate::{compatible_forest, species_names};
use umtree::supertree::{cp_build, Forest, SupertreeModel};
use umtree::ultrametric::is_ultrametric;

fn atom_strategy(n: usize) -> impl Strategy<Value = Atom> {
    (proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 3), 0usize..3, any::<bool>()).prop_map(
        |(idx, rot, fan)| {
            let sp = species_names(8);
            let mut p: Vec<&str> = idx.iter().map(|&i| sp[i].as_str()).collect();
            p.rotate_left(rot);
            if fan {
                Atom::fan(p[0], p[1], p[2])
            } else {
                Atom::triple(p[0], p[1], p[2])
            }
        },
    )
}

fn instance() -> impl Strategy<Value = (usize, Vec<Atom>)> {
    (3usize..=7).prop_flat_map(|n| (Just(n), proptest::collection::vec(atom_strategy(n), 0..=n + 2)))
}

fn snapshot(m: &SupertreeModel) -> Vec<(i32, i32)> {
    let st = m.engine().store();
    m.matrix().cells().map(|v| (st.lb(v), st.ub(v))).collect()
}

fn fixpoint(n: usize, atoms: &[Atom]) -> Option<Vec<(i32, i32)>> {
    let mut m = SupertreeModel::from_atoms(species_names(n), atoms).unwrap();
    (m.propagate() == Outcome::Fixpoint).then(|| snapshot(&m))
}

fn assert_ultrametric(m: &UltrametricIntMatrix) {
    let n = m.n();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                assert!(is_ultrametric(m.get(i, j), m.get(i, k), m.get(j, k)));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn queue_order_does_not_change_the_fixpoint((n, atoms) in instance(), seed in any::<u64>()) {
        let want = fixpoint(n, &atoms);
        let mut m = SupertreeModel::from_atoms(species_names(n), &atoms).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        m.engine_mut().shuffle_queue_with(|q| q.shuffle(&mut rng));
        let got = (m.propagate() == Outcome::Fixpoint).then(|| snapshot(&m));
        prop_assert_eq!(got, want);
    }

    #[test]
    fn incremental_posts_match_a_fresh_model((n, atoms) in instance(), cut in any::<prop::sample::Index>()) {
        // post a prefix, then probe every later atom alone under a checkpoint,
        // then post the rest: every state must equal the one built from scratch
        let k = cut.index(atoms.len() + 1);
        let mut m = SupertreeModel::from_atoms(species_names(n), &atoms[..k]).unwrap();
        let base_ok = m.propagate() == Outcome::Fixpoint;
        prop_assert_eq!(base_ok.then(|| snapshot(&m)), fixpoint(n, &atoms[..k]));
        if !base_ok {
            return Ok(());
        }
        for a in &atoms[k..] {
            let cp = m.engine_mut().checkpoint();
            m.post_atom(a).unwrap();
            let ok = m.propagate() == Outcome::Fixpoint;
            let mut probe = atoms[..k].to_vec();
            probe.push(a.clone());
            prop_assert_eq!(ok.then(|| snapshot(&m)), fixpoint(n, &probe));
            m.engine_mut().restore(cp).unwrap();
        }
        for a in &atoms[k..] {
            m.post_atom(a).unwrap();
        }
        let ok = m.propagate() == Outcome::Fixpoint;
        prop_assert_eq!(ok.then(|| snapshot(&m)), fixpoint(n, &atoms));
    }

    #[test]
    fn built_tree_satisfies_every_atom((n, atoms) in instance()) {
        let mut m = SupertreeModel::from_atoms(species_names(n), &atoms).unwrap();
        if let Some(t) = cp_build(&mut m).unwrap().tree() {
            for a in &atoms {
                prop_assert!(displays_atom(t, a).unwrap(), "{} not in {}", a, t);
            }
            assert_ultrametric(&tree_to_matrix(t));
            prop_assert_eq!(m.stats().search_nodes, 0);
        }
    }

    #[test]
    fn lower_bounds_are_ultrametric(seed in 0u64..1000, n in 3usize..30) {
        let (_, trees) = compatible_forest(n, 4, 0.3, seed);
        let mut m = SupertreeModel::from_forest(&Forest::new(trees), BreakupMode::Hard, &[]).unwrap();
        prop_assert_eq!(m.propagate(), Outcome::Fixpoint);
        assert_ultrametric(&m.lower_bound_matrix().unwrap());
    }
}

#[test]
fn soft_triples_underdetermine_polytomous_inputs() {
    // every refinement of this tree has (s1,s2)s3, but soft breakup emits
    // only one triple per cherry, so a tree breaking that cluster also fits
    let t = parse_newick("((s1,s2),s0,(s3,s4));").unwrap();
    let atoms = breakup(&t, BreakupMode::Soft);
    assert_eq!(atoms, vec![Atom::triple("s1", "s2", "s0"), Atom::triple("s3", "s4", "s0")]);
    let other = parse_newick("((s1,(s2,(s3,s4))),s0);").unwrap();
    for a in &atoms {
        assert!(displays_atom(&other, a).unwrap());
    }
    assert!(!displays_atom(&other, &Atom::triple("s1", "s2", "s3")).unwrap());
}
