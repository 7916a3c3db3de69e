//! Rooted triples `(xy)z` and fans `(xyz)`, with the `(a,b)c` / `(a,b,c)`
//! text syntax.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// `(xy)z`: `x` and `y` are closer to each other than either is to `z`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pair: [String; 2],
    outsider: String,
}

impl Triple {
    pub fn new(x: impl Into<String>, y: impl Into<String>, z: impl Into<String>) -> Self {
        let (x, y) = (x.into(), y.into());
        let pair = if x <= y { [x, y] } else { [y, x] };
        Triple {
            pair,
            outsider: z.into(),
        }
    }

    pub fn pair(&self) -> (&str, &str) {
        (&self.pair[0], &self.pair[1])
    }

    pub fn outsider(&self) -> &str {
        &self.outsider
    }
}

/// `(xyz)`: no pair of the three is closer than another.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fan([String; 3]);

impl Fan {
    pub fn new(x: impl Into<String>, y: impl Into<String>, z: impl Into<String>) -> Self {
        let mut v = [x.into(), y.into(), z.into()];
        v.sort();
        Fan(v)
    }

    pub fn members(&self) -> [&str; 3] {
        [&self.0[0], &self.0[1], &self.0[2]]
    }
}

/// A relational atom over three species.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Triple(Triple),
    Fan(Fan),
}

impl Atom {
    pub fn triple(x: &str, y: &str, z: &str) -> Atom {
        Atom::Triple(Triple::new(x, y, z))
    }

    pub fn fan(x: &str, y: &str, z: &str) -> Atom {
        Atom::Fan(Fan::new(x, y, z))
    }

    pub fn species(&self) -> [&str; 3] {
        match self {
            Atom::Triple(t) => [&t.pair[0], &t.pair[1], &t.outsider],
            Atom::Fan(f) => f.members(),
        }
    }

    fn distinct(&self) -> bool {
        let [a, b, c] = self.species();
        a != b && b != c && a != c
    }

    /// Whether the atom holds for pairwise depths given by `depth(x, y)`.
    pub fn holds_with(&self, depth: impl Fn(&str, &str) -> i64) -> bool {
        match self {
            Atom::Triple(t) => {
                let (x, y) = t.pair();
                let z = t.outsider();
                let xy = depth(x, y);
                let xz = depth(x, z);
                xy > xz && xz == depth(y, z)
            }
            Atom::Fan(f) => {
                let [x, y, z] = f.members();
                let xy = depth(x, y);
                xy == depth(x, z) && xy == depth(y, z)
            }
        }
    }

    /// The three other relations the same species can be in.
    pub fn alternatives(&self) -> Vec<Atom> {
        let mut s = self.species();
        s.sort();
        let [a, b, c] = s;
        let all = [
            Atom::triple(a, b, c),
            Atom::triple(a, c, b),
            Atom::triple(b, c, a),
            Atom::fan(a, b, c),
        ];
        all.into_iter().filter(|x| x != self).collect()
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Triple(t) => write!(f, "({},{}){}", t.pair[0], t.pair[1], t.outsider),
            Atom::Fan(x) => write!(f, "({},{},{})", x.0[0], x.0[1], x.0[2]),
        }
    }
}

impl Serialize for Atom {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid atom `{text}`: {reason}")]
pub struct AtomParseError {
    pub text: String,
    pub reason: &'static str,
}

fn is_label(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
}

impl FromStr for Atom {
    type Err = AtomParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |reason| AtomParseError {
            text: text.to_owned(),
            reason,
        };
        let rest = text.strip_prefix('(').ok_or_else(|| err("expected `(`"))?;
        let close = rest.find(')').ok_or_else(|| err("expected `)`"))?;
        let inner: Vec<&str> = rest[..close].split(',').collect();
        let tail = &rest[close + 1..];
        let atom = match (inner.as_slice(), tail) {
            ([x, y], z) if !z.is_empty() => {
                if ![*x, *y, z].iter().all(|s| is_label(s)) {
                    return Err(err("bad species name"));
                }
                Atom::triple(x, y, z)
            }
            ([x, y, z], "") => {
                if ![*x, *y, *z].iter().all(|s| is_label(s)) {
                    return Err(err("bad species name"));
                }
                Atom::fan(x, y, z)
            }
            _ => return Err(err("expected `(a,b)c` or `(a,b,c)`")),
        };
        if !atom.distinct() {
            return Err(err("species must be distinct"));
        }
        Ok(atom)
    }
}
