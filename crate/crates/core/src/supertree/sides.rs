//! Side constraints and their line-oriented file format.
//!
//! ```text
//! # divergence of a and c happens before that of a and b
//! predates a c a b
//! bounds a b 2 3
//! ```

use crate::phylo::PhyloTree;

use super::SupertreeError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SideConstraint {
    /// The divergence of `earlier` happens before (is shallower than) that
    /// of `later`.
    Predates {
        earlier: (String, String),
        later: (String, String),
    },
    /// `lo <= M_ab <= hi`.
    DateBounds { a: String, b: String, lo: i32, hi: i32 },
    /// Fix every leaf pair of the tree to the rank of its mrca.
    RankAssign(PhyloTree),
}

impl SideConstraint {
    pub fn predates(c: &str, d: &str, a: &str, b: &str) -> Self {
        SideConstraint::Predates {
            earlier: (c.to_owned(), d.to_owned()),
            later: (a.to_owned(), b.to_owned()),
        }
    }

    pub fn bounds(a: &str, b: &str, lo: i32, hi: i32) -> Self {
        SideConstraint::DateBounds {
            a: a.to_owned(),
            b: b.to_owned(),
            lo,
            hi,
        }
    }
}

pub fn parse_sidecar(text: &str) -> Result<Vec<SideConstraint>, SupertreeError> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = content.split_whitespace().collect();
        let err = |msg: String| SupertreeError::Sidecar { line, msg };
        match words.as_slice() {
            [] => {}
            ["predates", a, b, c, d] => out.push(SideConstraint::predates(a, b, c, d)),
            ["predates", ..] => return Err(err("predates takes four species".into())),
            ["bounds", a, b, lo, hi] => {
                let lo: i32 = lo.parse().map_err(|_| err(format!("bad bound `{lo}`")))?;
                let hi: i32 = hi.parse().map_err(|_| err(format!("bad bound `{hi}`")))?;
                out.push(SideConstraint::bounds(a, b, lo, hi));
            }
            ["bounds", ..] => return Err(err("bounds takes two species and two integers".into())),
            [kw, ..] => return Err(err(format!("unknown keyword `{kw}`"))),
        }
    }
    Ok(out)
}
