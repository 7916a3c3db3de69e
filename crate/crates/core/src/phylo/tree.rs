use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("leaf without a label")]
    UnlabelledLeaf,
    #[error("internal node with {0} child(ren); at least 2 required")]
    TooFewChildren(usize),
    #[error("rank {child} below rank {parent} does not increase")]
    RankOrder { parent: u32, child: u32 },
    #[error("leaf `{0}` not present in the tree")]
    UnknownLeaf(String),
    #[error("empty leaf set")]
    EmptyLeafSet,
    #[error("enumeration limited to {max} leaves, got {got}")]
    TooManyLeaves { max: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub(crate) u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub(crate) parent: Option<NodeId>,
    pub(crate) children: Vec<NodeId>,
    pub(crate) label: Option<String>,
    pub(crate) rank: Option<u32>,
}

/// A rooted tree with uniquely labelled leaves. Internal nodes may carry a
/// taxon label and/or an integer rank. Child order carries no meaning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhyloTree {
    nodes: Vec<Node>,
    root: NodeId,
}

/// Incremental construction of a [`PhyloTree`], children before parents.
#[derive(Debug, Default)]
pub struct TreeBuilder {
    nodes: Vec<Node>,
}

impl TreeBuilder {
    pub fn new() -> Self {
        TreeBuilder::default()
    }

    pub fn leaf(&mut self, label: impl Into<String>) -> NodeId {
        self.push(Node {
            parent: None,
            children: Vec::new(),
            label: Some(label.into()),
            rank: None,
        })
    }

    pub fn internal(&mut self, children: Vec<NodeId>) -> NodeId {
        self.internal_with(children, None, None)
    }

    pub fn internal_with(&mut self, children: Vec<NodeId>, label: Option<String>, rank: Option<u32>) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        for &c in &children {
            self.nodes[c.index()].parent = Some(id);
        }
        self.push(Node {
            parent: None,
            children,
            label,
            rank,
        })
    }

    fn push(&mut self, node: Node) -> NodeId {
        self.nodes.push(node);
        NodeId(self.nodes.len() as u32 - 1)
    }

    /// Copies the subtree of `tree` rooted at `at` into this builder.
    pub fn graft(&mut self, tree: &PhyloTree, at: NodeId) -> NodeId {
        let n = tree.node(at);
        if n.children.is_empty() {
            let id = self.leaf(n.label.clone().unwrap_or_default());
            self.nodes[id.index()].rank = n.rank;
            id
        } else {
            let kids = n.children.iter().map(|&c| self.graft(tree, c)).collect();
            self.internal_with(kids, n.label.clone(), n.rank)
        }
    }

    /// Finishes with `root`, dropping nodes not reachable from it.
    pub fn finish(self, root: NodeId) -> Result<PhyloTree, TreeError> {
        let tree = PhyloTree::compact(&self.nodes, root);
        tree.validate()?;
        Ok(tree)
    }
}

impl PhyloTree {
    pub fn leaf(label: impl Into<String>) -> PhyloTree {
        let mut b = TreeBuilder::new();
        let r = b.leaf(label);
        b.finish(r).expect("single leaf is valid")
    }

    /// Renumbers the nodes reachable from `root` in preorder.
    fn compact(nodes: &[Node], root: NodeId) -> PhyloTree {
        let mut out: Vec<Node> = Vec::new();
        let mut stack = vec![(root, None::<NodeId>)];
        while let Some((id, parent)) = stack.pop() {
            let new_id = NodeId(out.len() as u32);
            let src = &nodes[id.index()];
            out.push(Node {
                parent,
                children: Vec::with_capacity(src.children.len()),
                label: src.label.clone(),
                rank: src.rank,
            });
            if let Some(p) = parent {
                out[p.index()].children.push(new_id);
            }
            for &c in src.children.iter().rev() {
                stack.push((c, Some(new_id)));
            }
        }
        PhyloTree {
            nodes: out,
            root: NodeId(0),
        }
    }

    fn validate(&self) -> Result<(), TreeError> {
        let mut seen = BTreeSet::new();
        for node in &self.nodes {
            if node.children.is_empty() && node.label.is_none() {
                return Err(TreeError::UnlabelledLeaf);
            }
            if node.children.len() == 1 {
                return Err(TreeError::TooFewChildren(1));
            }
            if let Some(l) = &node.label {
                if !seen.insert(l.as_str()) {
                    return Err(TreeError::DuplicateLabel(l.clone()));
                }
            }
        }
        // ranks strictly increase towards the leaves
        for id in self.preorder() {
            let Some(r) = self.rank(id) else { continue };
            let mut up = self.parent(id);
            while let Some(p) = up {
                if let Some(pr) = self.rank(p) {
                    if pr >= r {
                        return Err(TreeError::RankOrder { parent: pr, child: r });
                    }
                    break;
                }
                up = self.parent(p);
            }
        }
        Ok(())
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id.index()].children
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id.index()].parent
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.nodes[id.index()].children.is_empty()
    }

    pub fn label(&self, id: NodeId) -> Option<&str> {
        self.nodes[id.index()].label.as_deref()
    }

    pub fn rank(&self, id: NodeId) -> Option<u32> {
        self.nodes[id.index()].rank
    }

    pub fn has_ranks(&self) -> bool {
        self.nodes.iter().any(|n| n.rank.is_some())
    }

    /// Labels on internal nodes.
    pub fn internal_labels(&self) -> Vec<&str> {
        self.node_ids()
            .filter(|&id| !self.is_leaf(id))
            .filter_map(|id| self.label(id))
            .collect()
    }

    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            out.push(id);
            stack.extend(self.children(id).iter().rev());
        }
        out
    }

    pub fn postorder(&self) -> Vec<NodeId> {
        let mut out = self.preorder();
        out.reverse();
        out
    }

    pub fn leaves(&self) -> Vec<NodeId> {
        self.preorder().into_iter().filter(|&id| self.is_leaf(id)).collect()
    }

    pub fn num_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| n.children.is_empty()).count()
    }

    pub fn leaf_labels(&self) -> Vec<&str> {
        self.leaves().into_iter().filter_map(|id| self.label(id)).collect()
    }

    pub fn leaf_set(&self) -> BTreeSet<String> {
        self.leaf_labels().into_iter().map(str::to_owned).collect()
    }

    /// Leaf labels below `id` (including `id` itself if it is a leaf).
    pub fn leaf_labels_under(&self, id: NodeId) -> Vec<&str> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            if self.is_leaf(x) {
                out.extend(self.label(x));
            } else {
                stack.extend(self.children(x).iter().rev());
            }
        }
        out
    }

    pub fn find(&self, label: &str) -> Option<NodeId> {
        self.node_ids().find(|&id| self.label(id) == Some(label))
    }

    pub fn label_index(&self) -> HashMap<&str, NodeId> {
        self.node_ids().filter_map(|id| self.label(id).map(|l| (l, id))).collect()
    }

    /// Depth of every node, the root being 1.
    pub fn depths(&self) -> Vec<u32> {
        let mut depth = vec![0; self.nodes.len()];
        for id in self.preorder() {
            depth[id.index()] = match self.parent(id) {
                Some(p) => depth[p.index()] + 1,
                None => 1,
            };
        }
        depth
    }

    /// Whether `a` is a proper descendant of `b`.
    pub fn is_descendant(&self, a: NodeId, b: NodeId) -> bool {
        let mut up = self.parent(a);
        while let Some(p) = up {
            if p == b {
                return true;
            }
            up = self.parent(p);
        }
        false
    }

    pub fn mrca(&self, a: NodeId, b: NodeId) -> NodeId {
        let depth = |mut x: NodeId| {
            let mut d = 0;
            while let Some(p) = self.parent(x) {
                x = p;
                d += 1;
            }
            d
        };
        let (mut a, mut b) = (a, b);
        let (mut da, mut db) = (depth(a), depth(b));
        while da > db {
            a = self.parent(a).expect("deeper node has a parent");
            da -= 1;
        }
        while db > da {
            b = self.parent(b).expect("deeper node has a parent");
            db -= 1;
        }
        while a != b {
            a = self.parent(a).expect("distinct nodes below root");
            b = self.parent(b).expect("distinct nodes below root");
        }
        a
    }

    /// Lowest node whose subtree holds every node in `ids`.
    pub fn mrca_of(&self, ids: &[NodeId]) -> Option<NodeId> {
        let (&first, rest) = ids.split_first()?;
        Some(rest.iter().fold(first, |acc, &x| self.mrca(acc, x)))
    }

    /// Copy with every label and rank of internal nodes removed.
    pub fn without_internal_labels(&self) -> PhyloTree {
        let mut t = self.clone();
        for n in &mut t.nodes {
            if !n.children.is_empty() {
                n.label = None;
                n.rank = None;
            }
        }
        t
    }

    pub(crate) fn set_internal_label(&mut self, id: NodeId, label: String) {
        self.nodes[id.index()].label = Some(label);
    }
}

impl fmt::Display for PhyloTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::phylo::newick::to_newick(self))
    }
}
