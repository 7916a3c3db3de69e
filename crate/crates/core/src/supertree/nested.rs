//! Taxon labels on internal nodes ("enclosing" taxa).
//!
//! A taxon `l` gets a depth variable `v_l`. It must sit no deeper than the
//! mrca of any two of its descendants across the whole forest, and strictly
//! deeper than the mrca of a descendant and a non-descendant from the same
//! input tree.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::phylo::{perfectly_displays, BreakupMode, NodeId, PhyloTree, TreeBuilder, TreeError};
use crate::store::VarId;

use super::build::{cp_build, BuildResult};
use super::forest::Forest;
use super::model::SupertreeModel;
use super::sides::SideConstraint;
use super::SupertreeError;

fn internal_occurrences(trees: &[PhyloTree]) -> HashMap<String, Vec<(usize, NodeId)>> {
    let mut out: HashMap<String, Vec<(usize, NodeId)>> = HashMap::new();
    for (t, tree) in trees.iter().enumerate() {
        for id in tree.preorder() {
            if !tree.is_leaf(id) {
                if let Some(l) = tree.label(id) {
                    out.entry(l.to_owned()).or_default().push((t, id));
                }
            }
        }
    }
    out
}

/// Replaces every leaf that names an enclosing taxon with a copy of a
/// subtree rooted at that taxon in another tree, until enclosing taxa only
/// label internal nodes.
pub fn nested_preprocess(trees: &[PhyloTree]) -> Result<Vec<PhyloTree>, SupertreeError> {
    let mut trees = trees.to_vec();
    let rounds = internal_occurrences(&trees).len() + 1;
    for _ in 0..=rounds {
        let occ = internal_occurrences(&trees);
        let mut changed = false;
        for t in 0..trees.len() {
            let tree = &trees[t];
            let hits = tree
                .leaves()
                .into_iter()
                .any(|id| tree.label(id).is_some_and(|l| occ.contains_key(l)));
            if !hits {
                continue;
            }
            let mut b = TreeBuilder::new();
            let root = substitute(&trees, t, tree.root(), &occ, &mut b)?;
            let next = b.finish(root).map_err(|e| match e {
                TreeError::DuplicateLabel(l) => {
                    SupertreeError::Nested(format!("substitution duplicates `{l}` in tree {}", t + 1))
                }
                other => other.into(),
            })?;
            trees[t] = next;
            changed = true;
        }
        if !changed {
            return Ok(trees);
        }
    }
    Err(SupertreeError::Nested("cyclic enclosing taxa".into()))
}

fn substitute(
    trees: &[PhyloTree],
    t: usize,
    id: NodeId,
    occ: &HashMap<String, Vec<(usize, NodeId)>>,
    b: &mut TreeBuilder,
) -> Result<NodeId, SupertreeError> {
    let tree = &trees[t];
    if tree.is_leaf(id) {
        let label = tree.label(id).unwrap_or("");
        return match occ.get(label) {
            None => Ok(b.leaf(label)),
            Some(places) => match places.iter().find(|(u, _)| *u != t) {
                Some(&(u, at)) => Ok(b.graft(&trees[u], at)),
                None => Err(SupertreeError::Nested(format!(
                    "`{label}` encloses other taxa only within tree {}",
                    t + 1
                ))),
            },
        };
    }
    let kids = tree
        .children(id)
        .iter()
        .map(|&c| substitute(trees, t, c, occ, b))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(b.internal_with(kids, tree.label(id).map(str::to_owned), tree.rank(id)))
}

/// The variables and the relations posted for enclosing taxa.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NestedEncoding {
    pub taxa: BTreeMap<String, VarId>,
    /// Descendant species over the whole forest.
    pub desc: BTreeMap<String, BTreeSet<String>>,
    /// `(i, j)` with `v_l <= M_ij`; pairs are sorted.
    pub le_pairs: BTreeMap<String, BTreeSet<(String, String)>>,
    /// `(i, j)` with `M_ij < v_l`; `i` below `l` and `j` not, in one tree.
    pub lt_pairs: BTreeMap<String, BTreeSet<(String, String)>>,
}

/// Adds a variable per enclosing taxon of the (preprocessed) forest and
/// posts its bounds relations.
pub fn apply_nested_taxa(model: &mut SupertreeModel, forest: &Forest) -> Result<NestedEncoding, SupertreeError> {
    let trees = forest.trees();
    let mut enc = NestedEncoding::default();
    // per taxon: (tree, below, outside)
    let mut per_tree: BTreeMap<String, Vec<(Vec<String>, Vec<String>)>> = BTreeMap::new();
    for tree in trees {
        for id in tree.preorder() {
            if tree.is_leaf(id) {
                continue;
            }
            let Some(l) = tree.label(id) else { continue };
            let below: Vec<String> = tree.leaf_labels_under(id).into_iter().map(str::to_owned).collect();
            let below_set: BTreeSet<&str> = below.iter().map(String::as_str).collect();
            let outside: Vec<String> = tree
                .leaf_labels()
                .into_iter()
                .filter(|x| !below_set.contains(x))
                .map(str::to_owned)
                .collect();
            enc.desc.entry(l.to_owned()).or_default().extend(below.iter().cloned());
            per_tree.entry(l.to_owned()).or_default().push((below, outside));
        }
    }
    for (l, desc) in &enc.desc {
        let v = model.taxon_var(l)?;
        enc.taxa.insert(l.clone(), v);
        let d: Vec<&String> = desc.iter().collect();
        let le = enc.le_pairs.entry(l.clone()).or_default();
        for (x, i) in d.iter().enumerate() {
            for j in &d[x + 1..] {
                let cell = model.cell(i, j)?;
                model.post_side_le(v, cell);
                le.insert(((*i).clone(), (*j).clone()));
            }
        }
        let lt = enc.lt_pairs.entry(l.clone()).or_default();
        for (below, outside) in &per_tree[l] {
            for i in below {
                for j in outside {
                    if lt.insert((i.clone(), j.clone())) {
                        let cell = model.cell(i, j)?;
                        model.post_side_lt(cell, v);
                    }
                }
            }
        }
    }
    Ok(enc)
}

/// Puts each taxon on the mrca of its descendants in `tree` and checks that
/// the result perfectly displays every input.
pub fn attach_labels(tree: &PhyloTree, enc: &NestedEncoding, inputs: &[PhyloTree]) -> Result<PhyloTree, SupertreeError> {
    let mut out = tree.clone();
    let leaves = tree.label_index();
    let mut used: HashMap<NodeId, &str> = HashMap::new();
    for (l, desc) in &enc.desc {
        let ids: Vec<NodeId> = desc
            .iter()
            .map(|s| {
                leaves
                    .get(s.as_str())
                    .copied()
                    .ok_or_else(|| SupertreeError::UnknownSpecies(s.clone()))
            })
            .collect::<Result<_, _>>()?;
        let at = tree.mrca_of(&ids).expect("taxon has descendants");
        if tree.is_leaf(at) {
            return Err(SupertreeError::Nested(format!("`{l}` would label a leaf")));
        }
        if let Some(other) = used.insert(at, l) {
            return Err(SupertreeError::Nested(format!("`{l}` and `{other}` land on the same node")));
        }
        out.set_internal_label(at, l.clone());
    }
    for (k, input) in inputs.iter().enumerate() {
        if !perfectly_displays(&out, input) {
            return Err(SupertreeError::Nested(format!("output does not perfectly display tree {}", k + 1)));
        }
    }
    Ok(out)
}

/// Preprocess, encode, build and label. `Incompatible` comes back when the
/// constraints fail; a labelling that cannot be verified is an error.
pub fn build_nested(
    trees: &[PhyloTree],
    mode: BreakupMode,
    sides: &[SideConstraint],
) -> Result<BuildResult, SupertreeError> {
    let pre = nested_preprocess(trees)?;
    let forest = Forest::new(pre);
    let mut model = SupertreeModel::from_forest(&forest, mode, sides)?;
    let enc = apply_nested_taxa(&mut model, &forest)?;
    match cp_build(&mut model)? {
        BuildResult::Incompatible => Ok(BuildResult::Incompatible),
        BuildResult::Supertree(t) => Ok(BuildResult::Supertree(attach_labels(&t, &enc, forest.trees())?)),
    }
}
