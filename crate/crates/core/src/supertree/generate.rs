//! Random trees and compatible forests for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::phylo::{restrict_and_suppress, NodeId, PhyloTree, TreeBuilder};

pub fn species_names(n: usize) -> Vec<String> {
    (0..n).map(|k| format!("s{k}")).collect()
}

/// Random tree on `s0..s{n-1}` with mixed arities.
pub fn random_tree(n: usize, seed: u64) -> PhyloTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_tree_with(&species_names(n.max(1)), &mut rng, false)
}

/// Random fully resolved tree on `s0..s{n-1}`.
pub fn random_binary_tree(n: usize, seed: u64) -> PhyloTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_tree_with(&species_names(n.max(1)), &mut rng, true)
}

/// Repeatedly merges random groups of current subtrees until one remains.
pub fn random_tree_with<R: Rng>(labels: &[String], rng: &mut R, binary: bool) -> PhyloTree {
    let mut b = TreeBuilder::new();
    let mut pool: Vec<NodeId> = labels.iter().map(|l| b.leaf(l.clone())).collect();
    pool.shuffle(rng);
    while pool.len() > 1 {
        let k = if binary || pool.len() == 2 || rng.gen_bool(0.7) {
            2
        } else {
            rng.gen_range(3..=pool.len().min(5))
        };
        let at = rng.gen_range(0..=pool.len() - k);
        let group: Vec<NodeId> = pool.drain(at..at + k).collect();
        let node = b.internal(group);
        let to = rng.gen_range(0..=pool.len());
        pool.insert(to, node);
    }
    b.finish(pool[0]).expect("generated tree is valid")
}

/// A compatible forest: one hidden random tree on `n` species, then `k`
/// restrictions of it. Each leaf is dropped with probability `prune`, but
/// every restriction keeps at least three leaves (or all, when `n < 3`).
pub fn compatible_forest(n: usize, k: usize, prune: f64, seed: u64) -> (PhyloTree, Vec<PhyloTree>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = species_names(n.max(1));
    let hidden = random_tree_with(&labels, &mut rng, false);
    let keep_min = labels.len().min(3);
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let mut kept: Vec<&String> = Vec::new();
        let mut dropped: Vec<&String> = Vec::new();
        for l in &labels {
            if rng.gen_bool(prune.clamp(0.0, 1.0)) {
                dropped.push(l);
            } else {
                kept.push(l);
            }
        }
        dropped.shuffle(&mut rng);
        while kept.len() < keep_min {
            kept.push(dropped.pop().expect("enough species"));
        }
        out.push(restrict_and_suppress(&hidden, kept).expect("kept leaves exist"));
    }
    (hidden, out)
}

/// A compatible forest plus two three-leaf trees that resolve the same
/// three species in different ways, so the forest is incompatible in
/// either breakup mode. The species are picked where the hidden tree is
/// resolved; only when no such triple is found (star-like trees) is a fan
/// used, which conflicts in hard mode only.
pub fn incompatible_forest(n: usize, k: usize, prune: f64, seed: u64) -> Vec<PhyloTree> {
    let n = n.max(3);
    let (hidden, mut trees) = compatible_forest(n, k, prune, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let labels = species_names(n);
    let mut pick = || {
        let p: Vec<&String> = labels.choose_multiple(&mut rng, 3).collect();
        let sub = restrict_and_suppress(&hidden, p.iter().copied()).expect("species exist");
        (p, sub)
    };
    let (mut picked, mut sub) = pick();
    for _ in 0..100 {
        if sub.children(sub.root()).len() == 2 {
            break;
        }
        (picked, sub) = pick();
    }
    let root_kids = sub.children(sub.root()).to_vec();
    let (x, y, z) = if root_kids.len() == 3 {
        (picked[0].as_str(), picked[1].as_str(), picked[2].as_str())
    } else {
        let (pair, out) = if sub.is_leaf(root_kids[0]) {
            (root_kids[1], root_kids[0])
        } else {
            (root_kids[0], root_kids[1])
        };
        let p = sub.leaf_labels_under(pair);
        // hidden has ((p0,p1),out); contradict with ((p0,out),p1)
        (p[0], sub.label(out).expect("leaf"), p[1])
    };
    let mut b = TreeBuilder::new();
    let (lx, ly, lz) = (b.leaf(x), b.leaf(y), b.leaf(z));
    let xy = b.internal(vec![lx, ly]);
    let root = b.internal(vec![xy, lz]);
    let wrong = b.finish(root).expect("three-leaf tree");
    trees.push(sub);
    trees.push(wrong);
    trees
}
