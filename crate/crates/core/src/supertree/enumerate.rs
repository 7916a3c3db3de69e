//! Depth-first enumeration of distinct supertree topologies.

use std::collections::HashSet;

use crate::engine::Outcome;
use crate::phylo::{canonical_form, PhyloTree};
use crate::store::VarId;

use super::model::SupertreeModel;
use super::SupertreeError;

/// Up to `limit` topologically distinct trees satisfying the model.
///
/// Branches on the unfixed matrix cell with the smallest domain and tries
/// its values in increasing order, so the first tree found is the one
/// `cp_build` returns. Every branch point counts as one search node.
pub fn enumerate_supertrees(model: &mut SupertreeModel, limit: usize) -> Result<Vec<PhyloTree>, SupertreeError> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    if limit == 0 {
        return Ok(out);
    }
    let cp = model.engine_mut().checkpoint();
    let r = dfs(model, limit, &mut out, &mut seen);
    model.engine_mut().restore(cp)?;
    r?;
    Ok(out)
}

fn dfs(
    model: &mut SupertreeModel,
    limit: usize,
    out: &mut Vec<PhyloTree>,
    seen: &mut HashSet<String>,
) -> Result<(), SupertreeError> {
    if model.propagate() == Outcome::Failure {
        return Ok(());
    }
    let store = model.engine().store();
    let branch: Option<VarId> = model
        .matrix()
        .cells()
        .filter(|&v| !store.is_fixed(v))
        .min_by_key(|&v| store.ub(v) - store.lb(v));
    let Some(var) = branch else {
        let tree = model.lower_bound_tree()?;
        if seen.insert(canonical_form(&tree, false)) {
            out.push(tree);
        }
        return Ok(());
    };
    let (lo, hi) = (store.lb(var), store.ub(var));
    model.engine_mut().stats_mut().search_nodes += 1;
    for value in lo..=hi {
        if out.len() >= limit {
            break;
        }
        let cp = model.engine_mut().checkpoint();
        model.engine_mut().assign(var, value);
        let r = dfs(model, limit, out, seen);
        model.engine_mut().restore(cp)?;
        r?;
    }
    Ok(())
}
