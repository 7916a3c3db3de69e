//! Restriction, isomorphism and the display relations between trees.

use std::collections::{BTreeSet, HashSet};

use super::atoms::Atom;
use super::tree::{NodeId, PhyloTree, TreeBuilder, TreeError};

/// The minimal subtree of `tree` spanning the given leaves, with unary
/// chains contracted. Labels and ranks survive on nodes that keep two or more
/// children.
pub fn restrict_and_suppress<I, S>(tree: &PhyloTree, leaves: I) -> Result<PhyloTree, TreeError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let present: HashSet<&str> = tree.leaf_labels().into_iter().collect();
    let mut keep = HashSet::new();
    for l in leaves {
        let l = l.as_ref();
        match present.get(l) {
            Some(&p) => {
                keep.insert(p);
            }
            None => return Err(TreeError::UnknownLeaf(l.to_owned())),
        }
    }
    if keep.is_empty() {
        return Err(TreeError::EmptyLeafSet);
    }

    fn go(t: &PhyloTree, id: NodeId, keep: &HashSet<&str>, b: &mut TreeBuilder) -> Option<NodeId> {
        if t.is_leaf(id) {
            let l = t.label(id)?;
            return keep.contains(l).then(|| b.leaf(l));
        }
        let kids: Vec<NodeId> = t.children(id).iter().filter_map(|&c| go(t, c, keep, b)).collect();
        match kids.len() {
            0 => None,
            1 => Some(kids[0]),
            _ => Some(b.internal_with(kids, t.label(id).map(str::to_owned), t.rank(id))),
        }
    }

    let mut b = TreeBuilder::new();
    let root = go(tree, tree.root(), &keep, &mut b).expect("non-empty leaf set");
    b.finish(root)
}

/// Canonical string: children sorted recursively. With `labels` false,
/// internal labels and ranks are ignored.
pub fn canonical_form(tree: &PhyloTree, labels: bool) -> String {
    fn go(t: &PhyloTree, id: NodeId, labels: bool) -> String {
        if t.is_leaf(id) {
            return t.label(id).unwrap_or("").to_owned();
        }
        let mut kids: Vec<String> = t.children(id).iter().map(|&c| go(t, c, labels)).collect();
        kids.sort();
        let mut s = format!("({})", kids.join(","));
        if labels {
            if let Some(l) = t.label(id) {
                s.push_str(l);
            }
            if let Some(r) = t.rank(id) {
                s.push_str(&format!("#{r}"));
            }
        }
        s
    }
    go(tree, tree.root(), labels)
}

/// Unordered isomorphism respecting leaf labels, internal labels and ranks.
pub fn isomorphic(t1: &PhyloTree, t2: &PhyloTree) -> bool {
    canonical_form(t1, true) == canonical_form(t2, true)
}

/// Unordered isomorphism on leaf labels only.
pub fn same_topology(t1: &PhyloTree, t2: &PhyloTree) -> bool {
    canonical_form(t1, false) == canonical_form(t2, false)
}

/// Whether `t1` restricted to the leaves of `t2` has the topology of `t2`.
/// Internal labels are not compared.
pub fn displays(t1: &PhyloTree, t2: &PhyloTree) -> Result<bool, TreeError> {
    let r = restrict_and_suppress(t1, t2.leaf_labels())?;
    Ok(same_topology(&r, t2))
}

/// Whether the triple or fan holds between three leaves of `tree`.
pub fn displays_atom(tree: &PhyloTree, atom: &Atom) -> Result<bool, TreeError> {
    let idx = tree.label_index();
    let depth = tree.depths();
    let mut ids = [NodeId(0); 3];
    for (k, s) in atom.species().into_iter().enumerate() {
        match idx.get(s) {
            Some(&id) if tree.is_leaf(id) => ids[k] = id,
            _ => return Err(TreeError::UnknownLeaf(s.to_owned())),
        }
    }
    let leaf = |s: &str| ids[atom.species().iter().position(|&x| x == s).expect("atom species")];
    Ok(atom.holds_with(|x, y| depth[tree.mrca(leaf(x), leaf(y)).index()] as i64))
}

fn proper_ancestor_pairs(t: &PhyloTree) -> BTreeSet<(String, String)> {
    let mut out = BTreeSet::new();
    for id in t.node_ids() {
        let Some(a) = t.label(id) else { continue };
        let mut up = t.parent(id);
        while let Some(p) = up {
            if let Some(b) = t.label(p) {
                out.insert((a.to_owned(), b.to_owned()));
            }
            up = t.parent(p);
        }
    }
    out
}

/// Whether `t` perfectly displays `t_prime`: every label of `t_prime` occurs
/// in `t`, `t` displays `t_prime` ignoring internal labels, and descent
/// between any two labels of `t_prime` is the same in both trees.
pub fn perfectly_displays(t: &PhyloTree, t_prime: &PhyloTree) -> bool {
    let labels_t: HashSet<&str> = t.node_ids().filter_map(|id| t.label(id)).collect();
    let labels_p: Vec<&str> = t_prime.node_ids().filter_map(|id| t_prime.label(id)).collect();
    if !labels_p.iter().all(|l| labels_t.contains(l)) {
        return false;
    }
    // leaves of t_prime must be leaves of t for the display check
    if !matches!(displays(t, t_prime), Ok(true)) {
        return false;
    }
    let in_p = proper_ancestor_pairs(t_prime);
    let in_t = proper_ancestor_pairs(t);
    for &a in &labels_p {
        for &b in &labels_p {
            let key = (a.to_owned(), b.to_owned());
            if in_p.contains(&key) != in_t.contains(&key) {
                return false;
            }
        }
    }
    true
}
