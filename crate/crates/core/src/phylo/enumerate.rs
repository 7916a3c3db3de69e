//! Exhaustive enumeration of small rooted trees.

use super::tree::{NodeId, PhyloTree, TreeBuilder, TreeError};

pub const MAX_ENUMERATION_LEAVES: usize = 8;

#[derive(Clone)]
enum Shape {
    Leaf(usize),
    Node(Vec<Shape>),
}

/// All ways to add leaf `k` to `s`: above any node, or as a new child of
/// any interior node.
fn insertions(s: &Shape, k: usize) -> Vec<Shape> {
    let mut out = vec![Shape::Node(vec![s.clone(), Shape::Leaf(k)])];
    if let Shape::Node(kids) = s {
        let mut wider = kids.clone();
        wider.push(Shape::Leaf(k));
        out.push(Shape::Node(wider));
        for (i, c) in kids.iter().enumerate() {
            for v in insertions(c, k) {
                let mut next = kids.clone();
                next[i] = v;
                out.push(Shape::Node(next));
            }
        }
    }
    out
}

fn to_tree(s: &Shape, labels: &[&str]) -> PhyloTree {
    fn go(s: &Shape, labels: &[&str], b: &mut TreeBuilder) -> NodeId {
        match s {
            Shape::Leaf(k) => b.leaf(labels[*k]),
            Shape::Node(kids) => {
                let ids = kids.iter().map(|c| go(c, labels, b)).collect();
                b.internal(ids)
            }
        }
    }
    let mut b = TreeBuilder::new();
    let root = go(s, labels, &mut b);
    b.finish(root).expect("enumerated shapes are valid")
}

/// Every rooted tree with interior degree at least two on the given leaves,
/// each once up to isomorphism.
pub fn all_rooted_trees(leaves: &[&str]) -> Result<Vec<PhyloTree>, TreeError> {
    if leaves.is_empty() {
        return Err(TreeError::EmptyLeafSet);
    }
    if leaves.len() > MAX_ENUMERATION_LEAVES {
        return Err(TreeError::TooManyLeaves {
            max: MAX_ENUMERATION_LEAVES,
            got: leaves.len(),
        });
    }
    let mut seen = std::collections::HashSet::new();
    if let Some(d) = leaves.iter().find(|l| !seen.insert(**l)) {
        return Err(TreeError::DuplicateLabel((*d).to_owned()));
    }
    let mut shapes = vec![Shape::Leaf(0)];
    for k in 1..leaves.len() {
        shapes = shapes.iter().flat_map(|s| insertions(s, k)).collect();
    }
    Ok(shapes.iter().map(|s| to_tree(s, leaves)).collect())
}
