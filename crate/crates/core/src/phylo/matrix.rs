//! Ultrametric integer matrices and their correspondence with trees.

use std::collections::BTreeMap;

use thiserror::Error;

use super::atoms::Atom;
use super::tree::{NodeId, PhyloTree, TreeBuilder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix has {rows} rows for {labels} labels")]
    Shape { rows: usize, labels: usize },
    #[error("entry ({0},{1}) differs from ({1},{0})")]
    Asymmetric(String, String),
    #[error("diagonal entry for `{0}` is not 0")]
    Diagonal(String),
    #[error("off-diagonal entry ({0},{1}) is not positive")]
    NonPositive(String, String),
    #[error("triple ({0},{1},{2}) has a unique minimum")]
    NotUltrametric(String, String, String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
}

/// A symmetric integer matrix over labelled species where every triple of
/// species has a tie for its minimum entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UltrametricIntMatrix {
    labels: Vec<String>,
    values: Vec<i32>,
}

impl UltrametricIntMatrix {
    pub fn new(labels: Vec<String>, rows: Vec<Vec<i32>>) -> Result<Self, MatrixError> {
        let n = labels.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(MatrixError::Shape {
                rows: rows.len(),
                labels: n,
            });
        }
        let mut sorted = labels.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(MatrixError::DuplicateLabel(w[0].clone()));
        }
        let m = UltrametricIntMatrix {
            values: rows.into_iter().flatten().collect(),
            labels,
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), MatrixError> {
        let n = self.n();
        let l = |i: usize| self.labels[i].clone();
        for i in 0..n {
            if self.get(i, i) != 0 {
                return Err(MatrixError::Diagonal(l(i)));
            }
            for j in i + 1..n {
                if self.get(i, j) != self.get(j, i) {
                    return Err(MatrixError::Asymmetric(l(i), l(j)));
                }
                if self.get(i, j) <= 0 {
                    return Err(MatrixError::NonPositive(l(i), l(j)));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut v = [self.get(i, j), self.get(i, k), self.get(j, k)];
                    v.sort_unstable();
                    if v[0] != v[1] {
                        return Err(MatrixError::NotUltrametric(l(i), l(j), l(k)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> i32 {
        self.values[i * self.n() + j]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn rows(&self) -> Vec<Vec<i32>> {
        self.values.chunks(self.n().max(1)).map(<[i32]>::to_vec).collect()
    }

    /// Whether an atom over species of this matrix holds in it.
    pub fn satisfies(&self, atom: &Atom) -> Option<bool> {
        let idx: Vec<usize> = atom.species().iter().map(|s| self.index_of(s)).collect::<Option<_>>()?;
        let species = atom.species();
        let pos = |s: &str| idx[species.iter().position(|&x| x == s).expect("atom species")];
        Some(atom.holds_with(|x, y| self.get(pos(x), pos(y)) as i64))
    }
}

/// Leaf labels sorted; entry (i,j) is the depth of the mrca, root depth 1.
pub fn tree_to_matrix(tree: &PhyloTree) -> UltrametricIntMatrix {
    let mut leaves: Vec<(String, NodeId)> = tree
        .leaves()
        .into_iter()
        .map(|id| (tree.label(id).unwrap_or("").to_owned(), id))
        .collect();
    leaves.sort();
    let n = leaves.len();
    let depth = tree.depths();
    let mut values = vec![0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = depth[tree.mrca(leaves[i].1, leaves[j].1).index()] as i32;
            values[i * n + j] = d;
            values[j * n + i] = d;
        }
    }
    UltrametricIntMatrix {
        labels: leaves.into_iter().map(|(l, _)| l).collect(),
        values,
    }
}

/// Rebuilds the tree an ultrametric matrix describes. Only the order of the
/// entries matters, not their values.
pub fn matrix_to_tree(m: &UltrametricIntMatrix) -> PhyloTree {
    let mut b = TreeBuilder::new();
    let members: Vec<usize> = (0..m.n()).collect();
    let root = if members.is_empty() {
        b.leaf("")
    } else {
        build(m, &members, &mut b)
    };
    b.finish(root).expect("ultrametric matrix yields a valid tree")
}

fn build(m: &UltrametricIntMatrix, members: &[usize], b: &mut TreeBuilder) -> NodeId {
    let s = members[0];
    if members.len() == 1 {
        return b.leaf(m.labels[s].clone());
    }
    let mut by_value: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for &x in &members[1..] {
        by_value.entry(m.get(s, x)).or_default().push(x);
    }
    // walk from the deepest group on s's root path up to the top
    let mut below = b.leaf(m.labels[s].clone());
    for (&d, group) in by_value.iter().rev() {
        let mut kids = vec![below];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &x in group {
            match classes.iter_mut().find(|c| m.get(c[0], x) > d) {
                Some(c) => c.push(x),
                None => classes.push(vec![x]),
            }
        }
        for c in &classes {
            kids.push(build(m, c, b));
        }
        below = b.internal(kids);
    }
    below
}
