//! Acceptance suite. Runs every criterion, prints one line each and exits
//! non-zero if any failed or overran its time budget.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use umtree::engine::{Engine, Outcome};
use umtree::phylo::{
    all_rooted_trees, breakup, displays, displays_atom, isomorphic, matrix_to_tree, parse_forest, parse_newick,
    perfectly_displays, tree_to_matrix, Atom, BreakupMode, PhyloTree,
};
use umtree::relations::{post_eq2, post_eq3, post_lt};
use umtree::store::IntervalDomain;
use umtree::supertree::generate::{compatible_forest, incompatible_forest, random_binary_tree, random_tree};
use umtree::supertree::{
    apply_nested_taxa, attach_labels, cp_build, enumerate_supertrees, explain_conflict, greedy_build, greedy_forest,
    necessity, nested_preprocess, parse_sidecar, BuildResult, Forest, SupertreeModel,
};
use umtree::ultrametric::{post_delayed_disjunction_um3, post_um3, post_um_decomposed, post_um_matrix, MrcaMatrix};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn dom(e: &Engine, v: umtree::store::VarId) -> (i32, i32) {
    (e.store().lb(v), e.store().ub(v))
}

// ---------------------------------------------------------------- oracles

fn tie_for_min(v: [i32; 3]) -> bool {
    let mut s = v;
    s.sort_unstable();
    s[0] == s[1]
}

/// Hull of all ultrametric points inside the boxes, or `None` if there are
/// none. For a single constraint this is exactly its BC(Z) closure.
fn bcz_hull(boxes: [(i32, i32); 3]) -> Option<[(i32, i32); 3]> {
    let mut hull: Option<[(i32, i32); 3]> = None;
    for x in boxes[0].0..=boxes[0].1 {
        for y in boxes[1].0..=boxes[1].1 {
            for z in boxes[2].0..=boxes[2].1 {
                if !tie_for_min([x, y, z]) {
                    continue;
                }
                let p = [x, y, z];
                let h = hull.get_or_insert([(x, x), (y, y), (z, z)]);
                for k in 0..3 {
                    h[k].0 = h[k].0.min(p[k]);
                    h[k].1 = h[k].1.max(p[k]);
                }
            }
        }
    }
    hull
}

/// Depth of the mrca of every leaf pair, root at 1.
fn mrca_depths(t: &PhyloTree) -> HashMap<(String, String), i64> {
    let depth = t.depths();
    let leaves = t.leaves();
    let mut out = HashMap::new();
    for &a in &leaves {
        for &b in &leaves {
            if a != b {
                let d = depth[t.mrca(a, b).index()] as i64;
                out.insert((t.label(a).unwrap().to_owned(), t.label(b).unwrap().to_owned()), d);
            }
        }
    }
    out
}

fn atom_holds(d: &HashMap<(String, String), i64>, atom: &Atom) -> bool {
    let g = |x: &str, y: &str| d[&(x.to_owned(), y.to_owned())];
    match atom {
        Atom::Triple(t) => {
            let (i, j) = t.pair();
            let k = t.outsider();
            g(i, j) > g(i, k) && g(i, k) == g(j, k)
        }
        Atom::Fan(f) => {
            let [i, j, k] = f.members();
            g(i, j) == g(i, k) && g(i, k) == g(j, k)
        }
    }
}

fn random_atom<R: Rng>(species: &[String], rng: &mut R) -> Atom {
    let p: Vec<&String> = species.choose_multiple(rng, 3).collect();
    if rng.gen_bool(0.25) {
        Atom::fan(p[0], p[1], p[2])
    } else {
        Atom::triple(p[0], p[1], p[2])
    }
}

/// Forest used by the rebuild and greedy criteria.
fn rebuild_instance(seed: u64) -> Vec<PhyloTree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=40);
    let k = rng.gen_range(2..=6);
    let prune = rng.gen_range(0.1..0.5);
    compatible_forest(n, k, prune, seed).1
}

// ---------------------------------------------------------------- criteria

fn c01_pruning_example() -> Check {
    let mut e = Engine::new();
    let (x, y, z) = (e.new_var(1, 3).unwrap(), e.new_var(2, 3).unwrap(), e.new_var(3, 3).unwrap());
    post_um3(&mut e, x, y, z);
    ensure(e.propagate() == Outcome::Fixpoint, || "um3 failed".into())?;
    let got = [dom(&e, x), dom(&e, y), dom(&e, z)];
    ensure(got == [(2, 3), (2, 3), (3, 3)], || format!("um3 gave {got:?}"))?;

    let mut e = Engine::new();
    let (x, y, z) = (e.new_var(1, 3).unwrap(), e.new_var(2, 3).unwrap(), e.new_var(3, 3).unwrap());
    post_delayed_disjunction_um3(&mut e, x, y, z);
    ensure(e.propagate() == Outcome::Fixpoint, || "delayed disjunction failed".into())?;
    let got = [dom(&e, x), dom(&e, y), dom(&e, z)];
    ensure(got == [(1, 3), (2, 3), (3, 3)], || format!("delayed disjunction gave {got:?}"))?;
    Ok("x -> [2,3] vs x stays [1,3]".into())
}

fn all_boxes() -> Vec<(i32, i32)> {
    (0..=5).flat_map(|lo| (lo..=5).map(move |hi| (lo, hi))).collect()
}

fn um3_fixpoint(b: [(i32, i32); 3]) -> Option<[(i32, i32); 3]> {
    let mut e = Engine::new();
    let v: Vec<_> = b.iter().map(|&(lo, hi)| e.new_var(lo, hi).unwrap()).collect();
    post_um3(&mut e, v[0], v[1], v[2]);
    match e.propagate() {
        Outcome::Failure => None,
        Outcome::Fixpoint => Some([dom(&e, v[0]), dom(&e, v[1]), dom(&e, v[2])]),
    }
}

fn c02_bcz_exhaustive() -> Check {
    let boxes = all_boxes();
    let mut count = 0;
    for &a in &boxes {
        for &b in &boxes {
            for &c in &boxes {
                let start = [a, b, c];
                let want = bcz_hull(start);
                let got = um3_fixpoint(start);
                ensure(want == got, || format!("{start:?}: oracle {want:?}, propagator {got:?}"))?;
                count += 1;
            }
        }
    }
    ensure(count == 9261, || format!("{count} instances"))?;
    Ok(format!("{count} interval triples"))
}

fn c03_lower_bounds_tie() -> Check {
    let boxes = all_boxes();
    let mut checked = 0;
    for &a in &boxes {
        for &b in &boxes {
            for &c in &boxes {
                if let Some(d) = um3_fixpoint([a, b, c]) {
                    let lbs = [d[0].0, d[1].0, d[2].0];
                    ensure(tie_for_min(lbs), || format!("{:?}: lbs {lbs:?}", [a, b, c]))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} fixpoints"))
}

fn post_random_atoms(e: &mut Engine, m: &MrcaMatrix, atoms: &[(usize, usize, usize, bool)]) {
    for &(i, j, k, fan) in atoms {
        let (ij, ik, jk) = (m.at(i, j), m.at(i, k), m.at(j, k));
        if fan {
            post_eq3(e, ij, ik, jk);
        } else {
            post_lt(e, ik, ij);
            post_eq2(e, ik, jk);
        }
    }
}

fn c04_matrix_vs_decomposed() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = 0;
    for inst in 0..500 {
        let n = rng.gen_range(3..=8);
        let count = rng.gen_range(0..=n);
        let atoms: Vec<(usize, usize, usize, bool)> = (0..count)
            .map(|_| {
                let p: Vec<usize> = (0..n).collect::<Vec<_>>().choose_multiple(&mut rng, 3).copied().collect();
                (p[0], p[1], p[2], rng.gen_bool(0.2))
            })
            .collect();
        let mut a = Engine::new();
        let ma = MrcaMatrix::new(&mut a, n).unwrap();
        post_um_matrix(&mut a, &ma);
        post_random_atoms(&mut a, &ma, &atoms);
        let mut b = Engine::new();
        let mb = MrcaMatrix::new(&mut b, n).unwrap();
        post_um_decomposed(&mut b, &mb);
        post_random_atoms(&mut b, &mb, &atoms);
        let (ra, rb) = (a.propagate(), b.propagate());
        ensure(ra == rb, || format!("instance {inst}: matrix {ra:?}, decomposed {rb:?}"))?;
        if ra == Outcome::Fixpoint {
            let (da, db): (Vec<Vec<IntervalDomain>>, _) = (ma.domains(a.store()), mb.domains(b.store()));
            ensure(da == db, || format!("instance {inst}: domains differ"))?;
        } else {
            failures += 1;
        }
    }
    Ok(format!("500 instances, {failures} failing in both"))
}

fn c05_matrix_round_trip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for seed in 0..1000 {
        let n = rng.gen_range(1..=64);
        let t = random_tree(n, seed);
        let back = matrix_to_tree(&tree_to_matrix(&t));
        ensure(isomorphic(&back, &t), || format!("n={n} seed={seed}"))?;
    }
    Ok("1000 trees".into())
}

fn c06_rebuild() -> Check {
    for seed in 0..500 {
        let trees = rebuild_instance(seed);
        let forest = Forest::new(trees.clone());
        let mut m = SupertreeModel::from_forest(&forest, BreakupMode::Hard, &[]).map_err(|e| e.to_string())?;
        let r = cp_build(&mut m).map_err(|e| e.to_string())?;
        let t = r.tree().ok_or_else(|| format!("seed {seed}: incompatible"))?;
        for (k, input) in trees.iter().enumerate() {
            ensure(displays(t, input).unwrap(), || format!("seed {seed}: input {k} not displayed"))?;
        }
        ensure(m.stats().search_nodes == 0, || format!("seed {seed}: search"))?;
    }
    Ok("500 forests, 0 search nodes".into())
}

fn c07_binary_recovery() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for seed in 0..200 {
        let n = rng.gen_range(3..=20);
        let t = random_binary_tree(n, seed);
        let forest = Forest::new(vec![t.clone()]);
        let mut m = SupertreeModel::from_forest(&forest, BreakupMode::Soft, &[]).map_err(|e| e.to_string())?;
        let r = cp_build(&mut m).map_err(|e| e.to_string())?;
        let out = r.tree().ok_or_else(|| format!("seed {seed}: incompatible"))?;
        ensure(isomorphic(out, &t), || format!("seed {seed}: {out} vs {t}"))?;
    }
    Ok("200 trees".into())
}

struct TreeOracle {
    trees: Vec<(PhyloTree, HashMap<(String, String), i64>)>,
}

impl TreeOracle {
    fn new(species: &[String]) -> Self {
        let refs: Vec<&str> = species.iter().map(String::as_str).collect();
        let trees = all_rooted_trees(&refs)
            .unwrap()
            .into_iter()
            .map(|t| {
                let d = mrca_depths(&t);
                (t, d)
            })
            .collect();
        TreeOracle { trees }
    }

    fn compatible(&self, atoms: &[Atom]) -> bool {
        self.trees.iter().any(|(_, d)| atoms.iter().all(|a| atom_holds(d, a)))
    }
}

fn c08_compatibility_oracle() -> Check {
    let abc = names(&["a", "b", "c"]);
    let four = [
        Atom::triple("a", "b", "c"),
        Atom::triple("a", "c", "b"),
        Atom::triple("b", "c", "a"),
        Atom::fan("a", "b", "c"),
    ];
    let oracle3 = TreeOracle::new(&abc);
    for mask in 0u32..16 {
        let atoms: Vec<Atom> = (0..4).filter(|b| mask & (1 << b) != 0).map(|b| four[b].clone()).collect();
        let mut m = SupertreeModel::from_atoms(abc.clone(), &atoms).map_err(|e| e.to_string())?;
        let got = cp_build(&mut m).unwrap().is_compatible();
        let want = oracle3.compatible(&atoms);
        ensure(got == want, || format!("{atoms:?}: build {got}, oracle {want}"))?;
    }
    let oracles: BTreeMap<usize, (Vec<String>, TreeOracle)> = (3..=6)
        .map(|n| {
            let sp = umtree::supertree::generate::species_names(n);
            let o = TreeOracle::new(&sp);
            (n, (sp, o))
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut yes, mut no) = (0, 0);
    for inst in 0..300 {
        let n = rng.gen_range(3..=6);
        let (sp, oracle) = &oracles[&n];
        let count = rng.gen_range(1..=2 * n);
        let atoms: Vec<Atom> = (0..count).map(|_| random_atom(sp, &mut rng)).collect();
        let mut m = SupertreeModel::from_atoms(sp.clone(), &atoms).map_err(|e| e.to_string())?;
        let got = cp_build(&mut m).unwrap().is_compatible();
        let want = oracle.compatible(&atoms);
        ensure(got == want, || format!("instance {inst} {atoms:?}: build {got}, oracle {want}"))?;
        if want {
            yes += 1;
        } else {
            no += 1;
        }
    }
    Ok(format!("16 subsets on 3 species; 300 random sets ({yes} compatible, {no} not)"))
}

fn c09_necessity_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut cache: HashMap<Vec<String>, TreeOracle> = HashMap::new();
    let (mut nec, mut not) = (0, 0);
    for inst in 0..200u64 {
        let n = rng.gen_range(3..=6);
        let k = rng.gen_range(1..=3);
        let (_, trees) = compatible_forest(n, k, 0.3, 900 + inst);
        let mode = if inst % 2 == 0 { BreakupMode::Hard } else { BreakupMode::Soft };
        let forest = Forest::new(trees.clone());
        let species = forest.species().to_vec();
        let oracle = cache.entry(species.clone()).or_insert_with(|| TreeOracle::new(&species));
        let tau = random_atom(&species, &mut rng);
        // Hard mode: trees displaying every input. Soft mode: trees
        // displaying every soft triple, which for polytomous inputs is a
        // superset of the refinements (see `soft_triples_underdetermine`).
        let soft: Vec<Atom> = trees.iter().flat_map(|t| breakup(t, BreakupMode::Soft)).collect();
        let supertrees = oracle.trees.iter().filter(|(t, d)| match mode {
            BreakupMode::Hard => trees.iter().all(|input| displays(t, input).unwrap()),
            BreakupMode::Soft => soft.iter().all(|a| atom_holds(d, a)),
        });
        let mut any = false;
        let mut want = true;
        for (t, _) in supertrees {
            any = true;
            want &= displays_atom(t, &tau).unwrap();
        }
        ensure(any, || format!("instance {inst}: oracle finds no supertree"))?;
        let got = necessity(&forest, mode, &[], &tau).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("instance {inst} {mode:?} tau={tau}: necessity {got}, oracle {want}"))?;
        if want {
            nec += 1;
        } else {
            not += 1;
        }
    }
    Ok(format!("200 forests ({nec} necessary, {not} not)"))
}

fn c10_greedy() -> Check {
    let abc = names(&["a", "b", "c"]);
    let first = Atom::triple("a", "b", "c");
    let second = Atom::triple("a", "c", "b");
    let mut m = SupertreeModel::new(abc).map_err(|e| e.to_string())?;
    let (_, report) = greedy_build(&mut m, &[first.clone(), second.clone()]).map_err(|e| e.to_string())?;
    ensure(report.accepted == vec![first] && report.rejected == vec![second], || format!("{report:?}"))?;
    for seed in 0..500 {
        let forest = Forest::new(rebuild_instance(seed));
        let (g, report) = greedy_forest(&forest, BreakupMode::Hard, &[]).map_err(|e| e.to_string())?;
        ensure(report.rejected.is_empty(), || format!("seed {seed}: rejected {:?}", report.rejected))?;
        let mut m = SupertreeModel::from_forest(&forest, BreakupMode::Hard, &[]).map_err(|e| e.to_string())?;
        let built = cp_build(&mut m).unwrap();
        ensure(isomorphic(&g, built.tree().unwrap()), || format!("seed {seed}: greedy differs"))?;
    }
    Ok("conflict pair plus 500 compatible forests".into())
}

fn c11_quickxplain_minimal() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut sizes = Vec::new();
    for seed in 0..100 {
        let n = rng.gen_range(3..=8);
        let k = rng.gen_range(1..=4);
        let forest = Forest::new(incompatible_forest(n, k, 0.3, seed));
        let core = explain_conflict(&forest, BreakupMode::Hard, &[]).map_err(|e| format!("seed {seed}: {e}"))?;
        let sp = forest.species().to_vec();
        let mut alone = SupertreeModel::from_atoms(sp.clone(), &core.atoms).unwrap();
        ensure(alone.propagate() == Outcome::Failure, || format!("seed {seed}: core is consistent"))?;
        for i in 0..core.atoms.len() {
            let mut rest = core.atoms.clone();
            rest.remove(i);
            let mut m = SupertreeModel::from_atoms(sp.clone(), &rest).unwrap();
            ensure(m.propagate() == Outcome::Fixpoint, || format!("seed {seed}: dropping {} still fails", core.atoms[i]))?;
        }
        sizes.push(core.atoms.len());
    }
    let max = sizes.iter().max().copied().unwrap_or(0);
    Ok(format!("100 forests, core sizes up to {max}"))
}

fn c12_space() -> Check {
    let mut rows = Vec::new();
    for n in [20usize, 40, 80] {
        let (_, trees) = compatible_forest(n, 5, 0.3, n as u64);
        let forest = Forest::new(trees);
        let mut m = SupertreeModel::from_forest(&forest, BreakupMode::Hard, &[]).map_err(|e| e.to_string())?;
        cp_build(&mut m).unwrap();
        let s = m.stats();
        let species = m.n() as u64;
        let cells = species * (species - 1) / 2;
        let relation_props: u64 = m
            .atoms()
            .iter()
            .map(|p| match p.atom {
                Atom::Triple(_) => 2,
                Atom::Fan(_) => 1,
            })
            .sum();
        let atoms = m.atoms().len() as u64;
        ensure(s.peak_vars == cells, || format!("n={species}: {} vars, want {cells}", s.peak_vars))?;
        ensure(s.peak_propagators == 1 + relation_props, || {
            format!("n={species}: {} propagators, want 1 + {relation_props}", s.peak_propagators)
        })?;
        ensure(s.peak_propagators <= 2 * (species * species + atoms), || format!("n={species}: too many"))?;
        rows.push(format!("n={species} vars={} props={}", s.peak_vars, s.peak_propagators));
    }
    Ok(rows.join(", "))
}

fn c13_performance() -> Check {
    let (_, trees) = compatible_forest(100, 5, 0.3, 13);
    let t0 = Instant::now();
    let forest = Forest::new(trees);
    let mut m = SupertreeModel::from_forest(&forest, BreakupMode::Hard, &[]).map_err(|e| e.to_string())?;
    let r = cp_build(&mut m).map_err(|e| e.to_string())?;
    let took = t0.elapsed();
    ensure(r.is_compatible(), || "incompatible".into())?;
    ensure(m.stats().search_nodes == 0, || "search happened".into())?;
    ensure(took <= Duration::from_secs(10), || format!("{took:?}"))?;
    Ok(format!("n={} in {:.1} ms", m.n(), took.as_secs_f64() * 1e3))
}

fn c14_predates() -> Check {
    let trees = parse_forest("((a,c),x); (b,x);").unwrap();
    let forest = Forest::new(trees.clone());
    let mut plain = SupertreeModel::from_forest(&forest, BreakupMode::Hard, &[]).unwrap();
    ensure(cp_build(&mut plain).unwrap().is_compatible(), || "plain forest fails".into())?;
    let sides = parse_sidecar("predates a c a b\n").map_err(|e| e.to_string())?;
    let mut m = SupertreeModel::from_forest(&forest, BreakupMode::Hard, &sides).unwrap();
    let r = cp_build(&mut m).unwrap();
    let t = r.tree().ok_or("incompatible with the sidecar")?;
    let lb = m.lower_bound_matrix().unwrap();
    let at = |x: &str, y: &str| lb.get(lb.index_of(x).unwrap(), lb.index_of(y).unwrap());
    ensure(at("a", "c") < at("a", "b"), || format!("M_ac={} M_ab={}", at("a", "c"), at("a", "b")))?;
    for input in &trees {
        ensure(displays(t, input).unwrap(), || format!("{input} not displayed by {t}"))?;
    }
    Ok(format!("{t} with M_ac={} < M_ab={}", at("a", "c"), at("a", "b")))
}

fn c15_nested() -> Check {
    let instances = [
        "(((a,b)P,c),d); (P,(e,f));",
        "(((a,b)P,c),(d,e)); ((g,a)P,(d,f)Q);",
        "((((a,b)Q,c)P,d),e); ((P,g),h); ((Q,i),c);",
    ];
    for text in instances {
        let raw = parse_forest(text).unwrap();
        let pre = nested_preprocess(&raw).map_err(|e| e.to_string())?;
        let forest = Forest::new(pre.clone());
        let mut m = SupertreeModel::from_forest(&forest, BreakupMode::Hard, &[]).unwrap();
        let enc = apply_nested_taxa(&mut m, &forest).map_err(|e| e.to_string())?;
        // expected shapes, recomputed from the trees
        let mut desc: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        let mut lt: BTreeMap<String, BTreeSet<(String, String)>> = BTreeMap::new();
        for t in &pre {
            for id in t.node_ids() {
                let Some(l) = t.label(id).filter(|_| !t.is_leaf(id)) else { continue };
                let below: BTreeSet<String> = t.leaf_labels_under(id).into_iter().map(str::to_owned).collect();
                for i in &below {
                    for j in t.leaf_labels() {
                        if !below.contains(j) {
                            lt.entry(l.to_owned()).or_default().insert((i.clone(), j.to_owned()));
                        }
                    }
                }
                desc.entry(l.to_owned()).or_default().extend(below);
            }
        }
        ensure(enc.desc == desc, || format!("{text}: desc {:?}", enc.desc))?;
        for (l, d) in &desc {
            let d: Vec<&String> = d.iter().collect();
            let all: BTreeSet<(String, String)> = (0..d.len())
                .flat_map(|x| ((x + 1)..d.len()).map(move |y| (x, y)))
                .map(|(x, y)| (d[x].clone(), d[y].clone()))
                .collect();
            ensure(enc.le_pairs[l] == all, || format!("{text}: le pairs of {l}"))?;
            ensure(enc.lt_pairs[l] == lt[l], || format!("{text}: lt pairs of {l}"))?;
        }
        let built = cp_build(&mut m).unwrap();
        let t = built.tree().ok_or_else(|| format!("{text}: incompatible"))?;
        let labelled = attach_labels(t, &enc, &pre).map_err(|e| format!("{text}: {e}"))?;
        for input in &pre {
            ensure(perfectly_displays(&labelled, input), || format!("{text}: {input} not perfectly displayed"))?;
        }
    }
    Ok(format!("{} instances", instances.len()))
}

fn c16_enumeration() -> Check {
    let abc = names(&["a", "b", "c"]);
    let mut m = SupertreeModel::new(abc.clone()).unwrap();
    let all = enumerate_supertrees(&mut m, 100).unwrap();
    ensure(all.len() == 4, || format!("{} trees unconstrained", all.len()))?;
    let mut m = SupertreeModel::from_atoms(abc, &[Atom::triple("a", "b", "c")]).unwrap();
    let one = enumerate_supertrees(&mut m, 100).unwrap();
    ensure(one.len() == 1, || format!("{} trees with (a,b)c", one.len()))?;
    ensure(isomorphic(&one[0], &parse_newick("((a,b),c);").unwrap()), || format!("{}", one[0]))?;
    ensure(!matches!(cp_build(&mut m).unwrap(), BuildResult::Incompatible), || "lost state".into())?;
    Ok("4 and 1".into())
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn main() -> ExitCode {
    let ms = Duration::from_millis;
    let s = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "pruning example", budget: ms(1), run: c01_pruning_example },
        Criterion { id: 2, name: "BC(Z) oracle, exhaustive", budget: s(5), run: c02_bcz_exhaustive },
        Criterion { id: 3, name: "lower bounds tie for minimum", budget: s(5), run: c03_lower_bounds_tie },
        Criterion { id: 4, name: "matrix vs decomposed", budget: s(30), run: c04_matrix_vs_decomposed },
        Criterion { id: 5, name: "tree/matrix round trip", budget: s(30), run: c05_matrix_round_trip },
        Criterion { id: 6, name: "rebuild compatible forests", budget: s(60), run: c06_rebuild },
        Criterion { id: 7, name: "binary tree recovery", budget: s(30), run: c07_binary_recovery },
        Criterion { id: 8, name: "compatibility vs oracle", budget: s(60), run: c08_compatibility_oracle },
        Criterion { id: 9, name: "necessity vs oracle", budget: s(120), run: c09_necessity_oracle },
        Criterion { id: 10, name: "greedy", budget: s(60), run: c10_greedy },
        Criterion { id: 11, name: "conflict core minimality", budget: s(60), run: c11_quickxplain_minimal },
        Criterion { id: 12, name: "space counts", budget: s(60), run: c12_space },
        Criterion { id: 13, name: "n=100 build", budget: s(10), run: c13_performance },
        Criterion { id: 14, name: "predates sidecar", budget: s(1), run: c14_predates },
        Criterion { id: 15, name: "nested taxa", budget: s(5), run: c15_nested },
        Criterion { id: 16, name: "enumeration", budget: s(1), run: c16_enumeration },
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        let t0 = Instant::now();
        let r = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let took = t0.elapsed();
        let r = match r {
            Ok(detail) if took > c.budget => Err(format!("{detail}; took {took:?}, budget {:?}", c.budget)),
            other => other,
        };
        let secs = took.as_secs_f64();
        match r {
            Ok(detail) => println!("PASS criterion {:>2} {} [{secs:.3}s] {detail}", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {} [{secs:.3}s] {why}", c.id, c.name)
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
