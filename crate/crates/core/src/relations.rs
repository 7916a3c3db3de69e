//! Bounds propagators for `<`, `<=` and equality.

use crate::engine::{Engine, PropId, PropStatus, Propagator};
use crate::store::{EventSet, Store, VarId};

/// Kind and scope of a primitive relation post.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelationPost {
    Lt(VarId, VarId),
    Le(VarId, VarId),
    Eq2(VarId, VarId),
    Eq3(VarId, VarId, VarId),
}

impl RelationPost {
    pub fn vars(&self) -> Vec<VarId> {
        match *self {
            RelationPost::Lt(a, b) | RelationPost::Le(a, b) | RelationPost::Eq2(a, b) => vec![a, b],
            RelationPost::Eq3(a, b, c) => vec![a, b, c],
        }
    }

    /// Whether the given values (in `vars()` order) satisfy the relation.
    pub fn holds(&self, values: &[i32]) -> bool {
        match self {
            RelationPost::Lt(..) => values[0] < values[1],
            RelationPost::Le(..) => values[0] <= values[1],
            RelationPost::Eq2(..) => values[0] == values[1],
            RelationPost::Eq3(..) => values[0] == values[1] && values[1] == values[2],
        }
    }

    pub fn post(self, engine: &mut Engine) -> Option<PropId> {
        match self {
            RelationPost::Lt(a, b) => post_lt(engine, a, b),
            RelationPost::Le(a, b) => post_le(engine, a, b),
            RelationPost::Eq2(a, b) => post_eq2(engine, a, b),
            RelationPost::Eq3(a, b, c) => post_eq3(engine, a, b, c),
        }
    }
}

/// `a + offset <= b`; offset 1 gives `<`, offset 0 gives `<=`.
#[derive(Debug, Clone)]
struct Precedes {
    a: VarId,
    b: VarId,
    offset: i32,
}

impl Precedes {
    fn run(&self, store: &mut Store) -> PropStatus {
        let lb_a = store.lb(self.a);
        store.tighten_lb(self.b, lb_a + self.offset);
        let ub_b = store.ub(self.b);
        store.tighten_ub(self.a, ub_b - self.offset);
        if store.ub(self.a) + self.offset <= store.lb(self.b) {
            PropStatus::Entailed
        } else {
            PropStatus::Progress
        }
    }
}

/// Strict less-than.
#[derive(Debug, Clone)]
pub struct Lt(Precedes);

impl Lt {
    pub fn new(a: VarId, b: VarId) -> Self {
        Lt(Precedes { a, b, offset: 1 })
    }
}

impl Propagator for Lt {
    fn name(&self) -> &'static str {
        "lt"
    }

    fn wake(&self, store: &mut Store, _: Option<VarId>, _: EventSet) -> PropStatus {
        self.0.run(store)
    }
}

#[derive(Debug, Clone)]
pub struct Le(Precedes);

impl Le {
    pub fn new(a: VarId, b: VarId) -> Self {
        Le(Precedes { a, b, offset: 0 })
    }
}

impl Propagator for Le {
    fn name(&self) -> &'static str {
        "le"
    }

    fn wake(&self, store: &mut Store, _: Option<VarId>, _: EventSet) -> PropStatus {
        self.0.run(store)
    }
}

/// Equality over two or three variables: all domains become the intersection.
#[derive(Debug, Clone)]
pub struct Eq {
    vars: Vec<VarId>,
}

impl Eq {
    pub fn new(vars: &[VarId]) -> Self {
        Eq {
            vars: vars.to_vec(),
        }
    }
}

impl Propagator for Eq {
    fn name(&self) -> &'static str {
        "eq"
    }

    fn wake(&self, store: &mut Store, _: Option<VarId>, _: EventSet) -> PropStatus {
        let lo = self.vars.iter().map(|&v| store.lb(v)).max().unwrap_or(0);
        let hi = self.vars.iter().map(|&v| store.ub(v)).min().unwrap_or(0);
        if lo > hi {
            store.fail();
            return PropStatus::Progress;
        }
        for &v in &self.vars {
            store.tighten_lb(v, lo);
            store.tighten_ub(v, hi);
        }
        if lo == hi {
            PropStatus::Entailed
        } else {
            PropStatus::Progress
        }
    }
}

pub fn post_lt(engine: &mut Engine, a: VarId, b: VarId) -> Option<PropId> {
    engine.register(Box::new(Lt::new(a, b)), &[a, b])
}

pub fn post_le(engine: &mut Engine, a: VarId, b: VarId) -> Option<PropId> {
    engine.register(Box::new(Le::new(a, b)), &[a, b])
}

pub fn post_eq2(engine: &mut Engine, a: VarId, b: VarId) -> Option<PropId> {
    engine.register(Box::new(Eq::new(&[a, b])), &[a, b])
}

pub fn post_eq3(engine: &mut Engine, a: VarId, b: VarId, c: VarId) -> Option<PropId> {
    engine.register(Box::new(Eq::new(&[a, b, c])), &[a, b, c])
}
