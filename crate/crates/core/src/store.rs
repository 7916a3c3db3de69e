//! Integer variables with interval domains, bound events and a trail for
//! checkpoint/restore.

use std::cell::Cell;
use std::fmt;
use std::ops::{BitOr, BitOrAssign};

use thiserror::Error;

/// Handle to a variable of a [`Store`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub(crate) u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Inclusive integer interval `[lb, ub]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntervalDomain {
    pub lb: i32,
    pub ub: i32,
}

impl IntervalDomain {
    pub fn new(lb: i32, ub: i32) -> Self {
        IntervalDomain { lb, ub }
    }

    pub fn is_fixed(&self) -> bool {
        self.lb == self.ub
    }

    pub fn contains(&self, value: i32) -> bool {
        self.lb <= value && value <= self.ub
    }

    /// Bounded intersection; `None` when empty.
    pub fn intersect(&self, other: &IntervalDomain) -> Option<IntervalDomain> {
        let lb = self.lb.max(other.lb);
        let ub = self.ub.min(other.ub);
        (lb <= ub).then_some(IntervalDomain { lb, ub })
    }
}

impl fmt::Display for IntervalDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lb, self.ub)
    }
}

/// The kind of bound change a mutation produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainEvent {
    /// The lower bound increased.
    Min,
    /// The upper bound decreased.
    Max,
    /// The domain became a singleton.
    Fix,
}

impl DomainEvent {
    fn bit(self) -> u8 {
        match self {
            DomainEvent::Min => 1,
            DomainEvent::Max => 2,
            DomainEvent::Fix => 4,
        }
    }
}

/// A small set of [`DomainEvent`]s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct EventSet(u8);

impl EventSet {
    pub const EMPTY: EventSet = EventSet(0);
    pub const ALL: EventSet = EventSet(7);

    pub fn of(events: &[DomainEvent]) -> EventSet {
        events.iter().fold(EventSet::EMPTY, |acc, e| acc | *e)
    }

    pub fn contains(self, event: DomainEvent) -> bool {
        self.0 & event.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn insert(&mut self, event: DomainEvent) {
        self.0 |= event.bit();
    }
}

impl BitOr for EventSet {
    type Output = EventSet;
    fn bitor(self, rhs: EventSet) -> EventSet {
        EventSet(self.0 | rhs.0)
    }
}

impl BitOr<DomainEvent> for EventSet {
    type Output = EventSet;
    fn bitor(self, rhs: DomainEvent) -> EventSet {
        EventSet(self.0 | rhs.bit())
    }
}

impl BitOrAssign for EventSet {
    fn bitor_assign(&mut self, rhs: EventSet) {
        self.0 |= rhs.0;
    }
}

impl fmt::Display for EventSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = [
            (DomainEvent::Min, "min"),
            (DomainEvent::Max, "max"),
            (DomainEvent::Fix, "fix"),
        ]
        .iter()
        .filter(|(e, _)| self.contains(*e))
        .map(|(_, n)| *n)
        .collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StoreError {
    #[error("empty initial domain [{lb},{ub}]")]
    EmptyDomain { lb: i32, ub: i32 },
    #[error("checkpoint {0} is not the most recent live checkpoint")]
    StaleCheckpoint(usize),
}

/// Marker returned by [`Store::checkpoint`]. Must be restored or committed
/// in LIFO order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Checkpoint {
    depth: usize,
    serial: u64,
}

#[derive(Debug, Clone)]
struct Mark {
    trail_len: usize,
    failed: bool,
    serial: u64,
}

/// The domain store.
///
/// Failure is a flag: the tighten that would empty a domain leaves the domain
/// untouched and sets `failed`. A failed store ignores further mutations.
#[derive(Debug, Clone, Default)]
pub struct Store {
    domains: Vec<IntervalDomain>,
    failed: bool,
    trail: Vec<(VarId, IntervalDomain)>,
    marks: Vec<Mark>,
    next_serial: u64,
    // pending events, coalesced per variable, drained by the engine
    pending: Vec<EventSet>,
    dirty: Vec<VarId>,
    accesses: Cell<u64>,
}

impl Store {
    pub fn new() -> Self {
        Store::default()
    }

    pub fn new_var(&mut self, lb: i32, ub: i32) -> Result<VarId, StoreError> {
        if lb > ub {
            return Err(StoreError::EmptyDomain { lb, ub });
        }
        let id = VarId(self.domains.len() as u32);
        self.domains.push(IntervalDomain { lb, ub });
        self.pending.push(EventSet::EMPTY);
        Ok(id)
    }

    pub fn num_vars(&self) -> usize {
        self.domains.len()
    }

    pub fn is_failed(&self) -> bool {
        self.failed
    }

    #[inline]
    pub fn lb(&self, v: VarId) -> i32 {
        self.accesses.set(self.accesses.get() + 1);
        self.domains[v.index()].lb
    }

    #[inline]
    pub fn ub(&self, v: VarId) -> i32 {
        self.accesses.set(self.accesses.get() + 1);
        self.domains[v.index()].ub
    }

    pub fn domain(&self, v: VarId) -> IntervalDomain {
        self.domains[v.index()]
    }

    pub fn is_fixed(&self, v: VarId) -> bool {
        self.domains[v.index()].is_fixed()
    }

    /// Number of bound reads and tighten calls so far. Used to check the
    /// constant per-event cost of the ultrametric propagator.
    pub fn access_count(&self) -> u64 {
        self.accesses.get()
    }

    /// Marks the store failed.
    pub fn fail(&mut self) {
        self.failed = true;
    }

    pub fn tighten_lb(&mut self, v: VarId, val: i32) -> EventSet {
        self.accesses.set(self.accesses.get() + 1);
        if self.failed {
            return EventSet::EMPTY;
        }
        let d = self.domains[v.index()];
        if val <= d.lb {
            return EventSet::EMPTY;
        }
        if val > d.ub {
            self.failed = true;
            return EventSet::EMPTY;
        }
        self.save(v, d);
        self.domains[v.index()].lb = val;
        let mut ev = EventSet::EMPTY | DomainEvent::Min;
        if val == d.ub {
            ev.insert(DomainEvent::Fix);
        }
        self.notify(v, ev);
        ev
    }

    pub fn tighten_ub(&mut self, v: VarId, val: i32) -> EventSet {
        self.accesses.set(self.accesses.get() + 1);
        if self.failed {
            return EventSet::EMPTY;
        }
        let d = self.domains[v.index()];
        if val >= d.ub {
            return EventSet::EMPTY;
        }
        if val < d.lb {
            self.failed = true;
            return EventSet::EMPTY;
        }
        self.save(v, d);
        self.domains[v.index()].ub = val;
        let mut ev = EventSet::EMPTY | DomainEvent::Max;
        if val == d.lb {
            ev.insert(DomainEvent::Fix);
        }
        self.notify(v, ev);
        ev
    }

    pub fn assign(&mut self, v: VarId, val: i32) -> EventSet {
        let a = self.tighten_lb(v, val);
        if self.failed {
            return EventSet::EMPTY;
        }
        a | self.tighten_ub(v, val)
    }

    pub fn checkpoint(&mut self) -> Checkpoint {
        let serial = self.next_serial;
        self.next_serial += 1;
        self.marks.push(Mark {
            trail_len: self.trail.len(),
            failed: self.failed,
            serial,
        });
        Checkpoint {
            depth: self.marks.len(),
            serial,
        }
    }

    fn check_top(&self, cp: Checkpoint) -> Result<(), StoreError> {
        match self.marks.last() {
            Some(m) if self.marks.len() == cp.depth && m.serial == cp.serial => Ok(()),
            _ => Err(StoreError::StaleCheckpoint(cp.depth)),
        }
    }

    /// Undoes every mutation since `cp` and pops it.
    pub fn restore(&mut self, cp: Checkpoint) -> Result<(), StoreError> {
        self.check_top(cp)?;
        let mark = self.marks.pop().expect("checked above");
        while self.trail.len() > mark.trail_len {
            let (v, d) = self.trail.pop().expect("non-empty trail");
            self.domains[v.index()] = d;
        }
        self.failed = mark.failed;
        self.clear_events();
        Ok(())
    }

    /// Pops `cp` keeping all mutations; they become part of the enclosing level.
    pub fn commit(&mut self, cp: Checkpoint) -> Result<(), StoreError> {
        self.check_top(cp)?;
        self.marks.pop();
        if self.marks.is_empty() {
            self.trail.clear();
        }
        Ok(())
    }

    pub fn checkpoint_depth(&self) -> usize {
        self.marks.len()
    }

    /// Drains pending (variable, events) pairs in first-change order.
    pub fn drain_events(&mut self, out: &mut Vec<(VarId, EventSet)>) {
        for v in self.dirty.drain(..) {
            let ev = std::mem::take(&mut self.pending[v.index()]);
            if !ev.is_empty() {
                out.push((v, ev));
            }
        }
    }

    pub fn has_events(&self) -> bool {
        !self.dirty.is_empty()
    }

    pub(crate) fn clear_events(&mut self) {
        for v in self.dirty.drain(..) {
            self.pending[v.index()] = EventSet::EMPTY;
        }
    }

    fn save(&mut self, v: VarId, d: IntervalDomain) {
        if !self.marks.is_empty() {
            self.trail.push((v, d));
        }
    }

    fn notify(&mut self, v: VarId, ev: EventSet) {
        let slot = &mut self.pending[v.index()];
        if slot.is_empty() {
            self.dirty.push(v);
        }
        *slot |= ev;
    }
}
