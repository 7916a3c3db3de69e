//! Decomposing a tree into triples and fans.
//!
//! Both procedures walk the interior nodes from the deepest up. A node with
//! two children emits one triple against a leaf reached through its parent
//! and then collapses into a leaf; wider nodes emit and shed their first
//! child until two children remain.

use super::atoms::Atom;
use super::tree::{NodeId, PhyloTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BreakupMode {
    /// Polytomies are hard: each emits fans.
    #[default]
    Hard,
    /// Polytomies mean missing evidence: triples only, root skipped.
    Soft,
}

struct Work<'a> {
    tree: &'a PhyloTree,
    children: Vec<Vec<NodeId>>,
    leaf_label: Vec<Option<String>>,
}

impl<'a> Work<'a> {
    fn new(tree: &'a PhyloTree) -> Self {
        let children = tree.node_ids().map(|id| tree.children(id).to_vec()).collect();
        let leaf_label = tree
            .node_ids()
            .map(|id| tree.is_leaf(id).then(|| tree.label(id).unwrap_or("").to_owned()))
            .collect();
        Work {
            tree,
            children,
            leaf_label,
        }
    }

    /// Label of `x` once it has become a leaf.
    fn label(&self, x: NodeId) -> &str {
        self.leaf_label[x.index()].as_deref().expect("collapsed node")
    }

    fn smallest_leaf_under(&self, x: NodeId) -> String {
        if let Some(l) = &self.leaf_label[x.index()] {
            return l.clone();
        }
        self.children[x.index()]
            .iter()
            .map(|&c| self.smallest_leaf_under(c))
            .min()
            .expect("interior node has children")
    }

    /// The smallest current leaf under any sibling of `c`'s parent.
    fn uncle_or_cousin(&self, c: NodeId) -> String {
        let v = self.tree.parent(c).expect("child has a parent");
        let p = self.tree.parent(v).expect("non-root interior node");
        self.children[p.index()]
            .iter()
            .filter(|&&s| s != v)
            .map(|&s| self.smallest_leaf_under(s))
            .min()
            .expect("parent has another child")
    }

    fn becomes_leaf(&mut self, v: NodeId, c0: NodeId) {
        self.leaf_label[v.index()] = Some(self.label(c0).to_owned());
        self.children[v.index()].clear();
    }
}

fn sorted_interior_nodes(tree: &PhyloTree) -> Vec<NodeId> {
    let depth = tree.depths();
    let mut v: Vec<NodeId> = tree.preorder().into_iter().filter(|&id| !tree.is_leaf(id)).collect();
    v.sort_by_key(|id| std::cmp::Reverse(depth[id.index()]));
    v
}

pub fn hard_breakup(tree: &PhyloTree) -> Vec<Atom> {
    let mut w = Work::new(tree);
    let mut out = Vec::new();
    let v = sorted_interior_nodes(tree);
    let mut i = 0;
    while i < v.len() {
        let node = v[i];
        let kids = w.children[node.index()].clone();
        let deg = kids.len();
        if node == tree.root() && deg <= 2 {
            break;
        }
        let c0 = kids[0];
        if deg == 2 {
            let z = w.uncle_or_cousin(c0);
            out.push(Atom::triple(w.label(c0), w.label(kids[1]), &z));
            w.becomes_leaf(node, c0);
            i += 1;
        } else {
            for j in 1..deg - 1 {
                for k in j + 1..deg {
                    out.push(Atom::fan(w.label(c0), w.label(kids[j]), w.label(kids[k])));
                }
            }
            w.children[node.index()].remove(0);
        }
    }
    out
}

pub fn soft_breakup(tree: &PhyloTree) -> Vec<Atom> {
    let mut w = Work::new(tree);
    let mut out = Vec::new();
    let v = sorted_interior_nodes(tree);
    let mut i = 0;
    while i < v.len() && v[i] != tree.root() {
        let node = v[i];
        let kids = w.children[node.index()].clone();
        let c0 = kids[0];
        let z = w.uncle_or_cousin(c0);
        out.push(Atom::triple(w.label(c0), w.label(kids[1]), &z));
        if kids.len() == 2 {
            w.becomes_leaf(node, c0);
            i += 1;
        } else {
            w.children[node.index()].remove(0);
        }
    }
    out
}

pub fn breakup(tree: &PhyloTree, mode: BreakupMode) -> Vec<Atom> {
    match mode {
        BreakupMode::Hard => hard_breakup(tree),
        BreakupMode::Soft => soft_breakup(tree),
    }
}
