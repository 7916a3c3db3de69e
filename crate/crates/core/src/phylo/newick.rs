//! Newick reading and writing.
//!
//! Internal nodes may carry `Label`, `#rank` or `Label#rank`. Branch lengths
//! (`:1.5`) are accepted after any node and dropped.

use thiserror::Error;

use super::tree::{NodeId, PhyloTree, TreeBuilder, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewickError {
    #[error("at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

fn is_label_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'-')
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    builder: TreeBuilder,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
            builder: TreeBuilder::new(),
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, NewickError> {
        Err(NewickError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<(), NewickError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{}`", b as char))
        }
    }

    fn label(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && is_label_byte(self.src[self.pos]) {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn rank(&mut self) -> Result<Option<u32>, NewickError> {
        if self.peek() != Some(b'#') {
            return Ok(None);
        }
        self.pos += 1;
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        match digits.parse::<u32>() {
            Ok(r) if r > 0 => Ok(Some(r)),
            _ => {
                self.pos = start;
                self.err("expected a positive integer rank after `#`")
            }
        }
    }

    fn branch_length(&mut self) -> Result<(), NewickError> {
        if self.peek() != Some(b':') {
            return Ok(());
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && matches!(self.src[self.pos], b'0'..=b'9' | b'.' | b'e' | b'E' | b'+' | b'-')
        {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        if text.parse::<f64>().is_err() {
            self.pos = start;
            return self.err("expected a branch length after `:`");
        }
        Ok(())
    }

    fn node(&mut self) -> Result<NodeId, NewickError> {
        let id = if self.peek() == Some(b'(') {
            self.pos += 1;
            let mut children = vec![self.node()?];
            loop {
                match self.peek() {
                    Some(b',') => {
                        self.pos += 1;
                        children.push(self.node()?);
                    }
                    Some(b')') if children.len() < 2 => {
                        return self.err("internal node needs at least two children");
                    }
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return self.err("expected `,` or `)`"),
                }
            }
            let label = self.label();
            let rank = self.rank()?;
            self.builder.internal_with(children, label, rank)
        } else {
            match self.label() {
                Some(l) => self.builder.leaf(l),
                None => return self.err("expected a leaf label or `(`"),
            }
        };
        self.branch_length()?;
        Ok(id)
    }

    fn tree(&mut self) -> Result<PhyloTree, NewickError> {
        let root = self.node()?;
        self.expect(b';')?;
        let builder = std::mem::take(&mut self.builder);
        Ok(builder.finish(root)?)
    }
}

/// Parses exactly one `;`-terminated tree.
pub fn parse_newick(text: &str) -> Result<PhyloTree, NewickError> {
    let mut p = Parser::new(text);
    let t = p.tree()?;
    if p.peek().is_some() {
        return p.err("trailing input after `;`");
    }
    Ok(t)
}

/// Parses any number of `;`-terminated trees.
pub fn parse_forest(text: &str) -> Result<Vec<PhyloTree>, NewickError> {
    let mut p = Parser::new(text);
    let mut out = Vec::new();
    while p.peek().is_some() {
        out.push(p.tree()?);
    }
    Ok(out)
}

pub fn to_newick(tree: &PhyloTree) -> String {
    fn write(t: &PhyloTree, id: NodeId, out: &mut String) {
        if t.is_leaf(id) {
            out.push_str(t.label(id).unwrap_or(""));
            return;
        }
        out.push('(');
        for (k, &c) in t.children(id).iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            write(t, c, out);
        }
        out.push(')');
        if let Some(l) = t.label(id) {
            out.push_str(l);
        }
        if let Some(r) = t.rank(id) {
            out.push('#');
            out.push_str(&r.to_string());
        }
    }
    let mut s = String::new();
    write(tree, tree.root(), &mut s);
    s.push(';');
    s
}
