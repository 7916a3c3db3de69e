//! Bounds(Z)-consistent propagation of the ultrametric property.
//!
//! Three values are ultrametric when the minimum is attained at least twice:
//! `x > y = z`, `y > x = z`, `z > x = y` or `x = y = z`. [`Um3`] enforces
//! bounds consistency for one such triple in constant time per event.
//! [`UmMatrix`] enforces it for every index triple of a symmetric matrix
//! while storing nothing per triple: an event on cell `(i, j)` walks the
//! `n - 2` triples `(M_ij, M_ik, M_jk)` that contain it.

use crate::engine::{Engine, PropId, PropStatus, Propagator};
use crate::store::{DomainEvent, EventSet, IntervalDomain, Store, StoreError, VarId};

/// Sort three variables by `key`, ties broken by variable index.
fn sort_by_key(store: &Store, vars: [VarId; 3], key: impl Fn(&Store, VarId) -> i32) -> [VarId; 3] {
    let mut keyed = [
        (key(store, vars[0]), vars[0]),
        (key(store, vars[1]), vars[1]),
        (key(store, vars[2]), vars[2]),
    ];
    if keyed[0] > keyed[1] {
        keyed.swap(0, 1);
    }
    if keyed[1] > keyed[2] {
        keyed.swap(1, 2);
    }
    if keyed[0] > keyed[1] {
        keyed.swap(0, 1);
    }
    [keyed[0].1, keyed[1].1, keyed[2].1]
}

/// Raises a strictly smallest lower bound to the middle one. Afterwards the
/// lower bounds tie for the minimum, or the store failed.
pub fn lb_fix(store: &mut Store, vars: [VarId; 3]) {
    let [s, m, _] = sort_by_key(store, vars, Store::lb);
    let m_lb = store.lb(m);
    if store.lb(s) < m_lb {
        store.tighten_lb(s, m_lb);
    }
}

/// Removes unsupported upper-bound regions.
///
/// With `S`, `M`, `L` sorted by upper bound: if `ub(S) < ub(M)`, then `M`'s
/// top needs `S` and `L` to share a value, and `L`'s top needs `S` and `M`
/// to share one. Whichever is missing first caps the corresponding bound.
pub fn ub_fix(store: &mut Store, vars: [VarId; 3]) {
    let [s, m, l] = sort_by_key(store, vars, Store::ub);
    let s_ub = store.ub(s);
    if s_ub < store.ub(m) {
        let s_lb = store.lb(s);
        // S ∩b L and S ∩b M: since ub(S) is the smallest, the intersection
        // is empty iff the other lower bound exceeds ub(S).
        if store.lb(l).max(s_lb) > s_ub {
            store.tighten_ub(m, s_ub);
        } else if store.lb(m).max(s_lb) > s_ub {
            store.tighten_ub(l, s_ub);
        }
    }
}

fn on_min(store: &mut Store, vars: [VarId; 3]) {
    lb_fix(store, vars);
    if !store.is_failed() {
        ub_fix(store, vars);
    }
}

fn on_max(store: &mut Store, vars: [VarId; 3]) {
    ub_fix(store, vars);
}

/// The event routine for one ultrametric triple. Min and fix events run the
/// lower-bound fix followed by the upper-bound fix; max events only the
/// latter. Reports entailment once two of the three domains are singletons.
pub fn um3_wake(store: &mut Store, vars: [VarId; 3], events: EventSet) -> PropStatus {
    if events.contains(DomainEvent::Min) || events.contains(DomainEvent::Fix) {
        on_min(store, vars);
    } else if events.contains(DomainEvent::Max) {
        on_max(store, vars);
    }
    if store.is_failed() {
        return PropStatus::Progress;
    }
    let fixed = vars.iter().filter(|&&v| store.is_fixed(v)).count();
    if fixed >= 2 {
        // The two singletons leave one bound pass to settle the third domain.
        on_min(store, vars);
        PropStatus::Entailed
    } else {
        PropStatus::Progress
    }
}

/// Ultrametric constraint over three distinct variables.
#[derive(Debug, Clone)]
pub struct Um3 {
    vars: [VarId; 3],
}

impl Um3 {
    pub fn new(x: VarId, y: VarId, z: VarId) -> Self {
        assert!(x != y && y != z && x != z, "ultrametric triple needs distinct variables");
        Um3 { vars: [x, y, z] }
    }
}

impl Propagator for Um3 {
    fn name(&self) -> &'static str {
        "um3"
    }

    fn wake(&self, store: &mut Store, _: Option<VarId>, events: EventSet) -> PropStatus {
        um3_wake(store, self.vars, events)
    }
}

pub fn post_um3(engine: &mut Engine, x: VarId, y: VarId, z: VarId) -> Option<PropId> {
    engine.register(Box::new(Um3::new(x, y, z)), &[x, y, z])
}

/// Whether three values tie for their minimum.
pub fn is_ultrametric(x: i32, y: i32, z: i32) -> bool {
    let min = x.min(y).min(z);
    [x, y, z].iter().filter(|&&v| v == min).count() >= 2
}

/// Symmetric `n x n` matrix of depth variables. Off-diagonal cells are
/// created contiguously with domain `[1, n-1]`; the diagonal is the
/// constant 0 and has no variable.
#[derive(Debug, Clone)]
pub struct MrcaMatrix {
    n: usize,
    base: u32,
}

impl MrcaMatrix {
    pub fn new(engine: &mut Engine, n: usize) -> Result<Self, StoreError> {
        let ub = n as i32 - 1;
        Self::with_domain(engine, n, 1, ub.max(1))
    }

    /// Matrix with every off-diagonal cell in `[lb, ub]`.
    pub fn with_domain(engine: &mut Engine, n: usize, lb: i32, ub: i32) -> Result<Self, StoreError> {
        let base = engine.store().num_vars() as u32;
        for _ in 0..n * n.saturating_sub(1) / 2 {
            engine.new_var(lb, ub)?;
        }
        Ok(MrcaMatrix { n, base })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_cells(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    /// The variable for `{i, j}`; `None` on the diagonal.
    pub fn cell(&self, i: usize, j: usize) -> Option<VarId> {
        (i != j && i < self.n && j < self.n).then(|| VarId(self.base + self.offset(i, j) as u32))
    }

    /// Like [`cell`](Self::cell) for indices known to be distinct.
    pub fn at(&self, i: usize, j: usize) -> VarId {
        self.cell(i, j).expect("off-diagonal cell")
    }

    pub fn cells(&self) -> impl Iterator<Item = VarId> + '_ {
        (0..self.num_cells() as u32).map(move |k| VarId(self.base + k))
    }

    pub fn contains(&self, v: VarId) -> bool {
        v.0 >= self.base && ((v.0 - self.base) as usize) < self.num_cells()
    }

    pub fn pairs(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.num_cells());
        for i in 0..self.n {
            for j in i + 1..self.n {
                out.push((i as u32, j as u32));
            }
        }
        out
    }

    /// Current domains as a dense matrix; the diagonal reads `[0, 0]`.
    pub fn domains(&self, store: &Store) -> Vec<Vec<IntervalDomain>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| match self.cell(i, j) {
                        Some(v) => store.domain(v),
                        None => IntervalDomain::new(0, 0),
                    })
                    .collect()
            })
            .collect()
    }

    pub fn lower_bounds(&self, store: &Store) -> Vec<Vec<i32>> {
        self.domains(store)
            .into_iter()
            .map(|row| row.into_iter().map(|d| d.lb).collect())
            .collect()
    }
}

/// One propagator for every ultrametric triple of a matrix.
#[derive(Debug, Clone)]
pub struct UmMatrix {
    matrix: MrcaMatrix,
    pairs: Vec<(u32, u32)>,
}

impl UmMatrix {
    pub fn new(matrix: &MrcaMatrix) -> Self {
        UmMatrix {
            matrix: matrix.clone(),
            pairs: matrix.pairs(),
        }
    }

    fn cell_event(&self, store: &mut Store, i: usize, j: usize, events: EventSet) {
        let m = &self.matrix;
        let ij = m.at(i, j);
        let full = events.contains(DomainEvent::Min) || events.contains(DomainEvent::Fix);
        for k in 0..m.n {
            if k == i || k == j {
                continue;
            }
            let vars = [ij, m.at(i, k), m.at(j, k)];
            if full {
                on_min(store, vars);
                on_max(store, vars);
            } else {
                on_max(store, vars);
            }
            if store.is_failed() {
                return;
            }
        }
    }
}

impl Propagator for UmMatrix {
    fn name(&self) -> &'static str {
        "um-matrix"
    }

    fn wake(&self, store: &mut Store, var: Option<VarId>, events: EventSet) -> PropStatus {
        let m = &self.matrix;
        match var {
            Some(v) => {
                let (i, j) = self.pairs[(v.0 - m.base) as usize];
                self.cell_event(store, i as usize, j as usize, events);
            }
            None => {
                for i in 0..m.n {
                    for j in i + 1..m.n {
                        for k in j + 1..m.n {
                            let vars = [m.at(i, j), m.at(i, k), m.at(j, k)];
                            on_min(store, vars);
                            on_max(store, vars);
                            if store.is_failed() {
                                return PropStatus::Progress;
                            }
                        }
                    }
                }
            }
        }
        PropStatus::Progress
    }
}

/// Posts the single matrix propagator over every cell.
pub fn post_um_matrix(engine: &mut Engine, matrix: &MrcaMatrix) -> Option<PropId> {
    let cells: Vec<VarId> = matrix.cells().collect();
    engine.register(Box::new(UmMatrix::new(matrix)), &cells)
}

/// Posts one [`Um3`] per index triple: the cubic-size decomposition that
/// [`post_um_matrix`] replaces. Kept for equivalence checks.
pub fn post_um_decomposed(engine: &mut Engine, matrix: &MrcaMatrix) -> Vec<PropId> {
    let n = matrix.n();
    let mut ids = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if let Some(id) = post_um3(engine, matrix.at(i, j), matrix.at(i, k), matrix.at(j, k)) {
                    ids.push(id);
                }
            }
        }
    }
    ids
}

/// The ultrametric disjunction as a toolkit would propagate it: nothing
/// happens until at most one disjunct remains bound-feasible, which is then
/// enforced on bounds. Exists to show how little this prunes.
#[derive(Debug, Clone)]
pub struct DelayedDisjunction {
    vars: [VarId; 3],
}

impl DelayedDisjunction {
    pub fn new(x: VarId, y: VarId, z: VarId) -> Self {
        DelayedDisjunction { vars: [x, y, z] }
    }

    /// `top > a = b` is bound-feasible.
    fn greater_feasible(store: &Store, top: VarId, a: VarId, b: VarId) -> bool {
        match store.domain(a).intersect(&store.domain(b)) {
            Some(ab) => store.ub(top) > ab.lb,
            None => false,
        }
    }

    fn all_equal_feasible(store: &Store, [x, y, z]: [VarId; 3]) -> bool {
        store
            .domain(x)
            .intersect(&store.domain(y))
            .and_then(|d| d.intersect(&store.domain(z)))
            .is_some()
    }

    fn enforce_greater(store: &mut Store, top: VarId, a: VarId, b: VarId) {
        loop {
            let before = [store.domain(top), store.domain(a), store.domain(b)];
            let lo = store.lb(a).max(store.lb(b));
            let hi = store.ub(a).min(store.ub(b));
            for v in [a, b] {
                store.tighten_lb(v, lo);
                store.tighten_ub(v, hi);
            }
            store.tighten_lb(top, lo + 1);
            let cap = store.ub(top) - 1;
            store.tighten_ub(a, cap);
            store.tighten_ub(b, cap);
            if store.is_failed() || before == [store.domain(top), store.domain(a), store.domain(b)] {
                return;
            }
        }
    }
}

impl Propagator for DelayedDisjunction {
    fn name(&self) -> &'static str {
        "delayed-disjunction"
    }

    fn wake(&self, store: &mut Store, _: Option<VarId>, _: EventSet) -> PropStatus {
        let [x, y, z] = self.vars;
        let orders = [(x, y, z), (y, x, z), (z, x, y)];
        let mut feasible: Vec<usize> = orders
            .iter()
            .enumerate()
            .filter(|(_, &(t, a, b))| Self::greater_feasible(store, t, a, b))
            .map(|(i, _)| i)
            .collect();
        if Self::all_equal_feasible(store, self.vars) {
            feasible.push(3);
        }
        match feasible.as_slice() {
            [] => store.fail(),
            [3] => {
                let lo = self.vars.iter().map(|&v| store.lb(v)).max().unwrap_or(0);
                let hi = self.vars.iter().map(|&v| store.ub(v)).min().unwrap_or(0);
                for v in self.vars {
                    store.tighten_lb(v, lo);
                    store.tighten_ub(v, hi);
                }
            }
            [k] => {
                let (t, a, b) = orders[*k];
                Self::enforce_greater(store, t, a, b);
            }
            _ => {}
        }
        PropStatus::Progress
    }
}

pub fn post_delayed_disjunction_um3(engine: &mut Engine, x: VarId, y: VarId, z: VarId) -> Option<PropId> {
    engine.register(Box::new(DelayedDisjunction::new(x, y, z)), &[x, y, z])
}
