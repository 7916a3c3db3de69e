//! Event-driven propagation to fixpoint.
//!
//! Propagators subscribe to variables. Domain events produced while a
//! propagator runs are buffered in the store and dispatched once the wake
//! returns: every subscriber of a changed variable (the running propagator
//! included) gets the variable and its coalesced event set appended to its
//! pending list and is queued FIFO if not queued already.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::store::{Checkpoint, EventSet, Store, StoreError, VarId};

/// Index of a registered propagator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PropId(pub(crate) u32);

/// What a wake reports back to the engine. Failure is observed on the store.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropStatus {
    Progress,
    /// The propagator can never prune again; it is not woken any more.
    Entailed,
}

/// A propagation procedure.
///
/// `var` is `None` on the initial wake right after registration, in which
/// case `events` is [`EventSet::ALL`].
pub trait Propagator: Send {
    fn name(&self) -> &'static str;

    fn wake(&self, store: &mut Store, var: Option<VarId>, events: EventSet) -> PropStatus;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Fixpoint,
    Failure,
}

/// Always-on counters. `peak_*` track the maxima seen over the engine's life.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct RunStats {
    pub wakes: u64,
    pub search_nodes: u64,
    pub failures: u64,
    pub peak_vars: u64,
    pub peak_propagators: u64,
}

enum Undo {
    AddProp { watched: Vec<VarId> },
    Entailed(PropId),
}

#[derive(Default)]
struct PendingWork {
    items: Vec<(VarId, EventSet)>,
    slot: HashMap<VarId, usize>,
    initial: bool,
}

impl PendingWork {
    fn push(&mut self, var: VarId, ev: EventSet) {
        match self.slot.get(&var) {
            Some(&i) => self.items[i].1 |= ev,
            None => {
                self.slot.insert(var, self.items.len());
                self.items.push((var, ev));
            }
        }
    }

    #[cfg(test)]
    fn is_empty(&self) -> bool {
        self.items.is_empty() && !self.initial
    }

    fn take(&mut self) -> (bool, Vec<(VarId, EventSet)>) {
        self.slot.clear();
        let initial = std::mem::take(&mut self.initial);
        (initial, std::mem::take(&mut self.items))
    }
}

struct QueueSnapshot {
    queue: Vec<PropId>,
    work: Vec<(PropId, bool, Vec<(VarId, EventSet)>)>,
}

/// Engine-level checkpoint: the store checkpoint plus the engine's own trail.
pub struct EngineCheckpoint {
    store: Checkpoint,
    trail_len: usize,
    snapshot: Option<QueueSnapshot>,
}

/// A store together with its propagators and scheduler.
pub struct Engine {
    store: Store,
    props: Vec<Box<dyn Propagator>>,
    entailed: Vec<bool>,
    watchers: Vec<Vec<PropId>>,
    queue: VecDeque<PropId>,
    queued: Vec<bool>,
    work: Vec<PendingWork>,
    trail: Vec<Undo>,
    stats: RunStats,
    events: Vec<(VarId, EventSet)>,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new()
    }
}

impl Engine {
    pub fn new() -> Self {
        Engine {
            store: Store::new(),
            props: Vec::new(),
            entailed: Vec::new(),
            watchers: Vec::new(),
            queue: VecDeque::new(),
            queued: Vec::new(),
            work: Vec::new(),
            trail: Vec::new(),
            stats: RunStats::default(),
            events: Vec::new(),
        }
    }

    pub fn store(&self) -> &Store {
        &self.store
    }

    pub fn stats(&self) -> RunStats {
        self.stats
    }

    pub fn stats_mut(&mut self) -> &mut RunStats {
        &mut self.stats
    }

    pub fn is_failed(&self) -> bool {
        self.store.is_failed()
    }

    pub fn num_propagators(&self) -> usize {
        self.props.len()
    }

    pub fn new_var(&mut self, lb: i32, ub: i32) -> Result<VarId, StoreError> {
        let v = self.store.new_var(lb, ub)?;
        self.watchers.push(Vec::new());
        self.stats.peak_vars = self.stats.peak_vars.max(self.store.num_vars() as u64);
        Ok(v)
    }

    /// Subscribes `p` to `watched` and schedules its initial wake. On a failed
    /// store this is a no-op.
    pub fn register(&mut self, p: Box<dyn Propagator>, watched: &[VarId]) -> Option<PropId> {
        if self.store.is_failed() {
            return None;
        }
        let id = PropId(self.props.len() as u32);
        self.props.push(p);
        self.entailed.push(false);
        self.queued.push(false);
        self.work.push(PendingWork::default());
        for &v in watched {
            self.watchers[v.index()].push(id);
        }
        if self.store.checkpoint_depth() > 0 {
            self.trail.push(Undo::AddProp {
                watched: watched.to_vec(),
            });
        }
        self.stats.peak_propagators = self.stats.peak_propagators.max(self.props.len() as u64);
        self.work[id.0 as usize].initial = true;
        self.enqueue(id);
        Some(id)
    }

    pub fn tighten_lb(&mut self, v: VarId, val: i32) -> EventSet {
        let ev = self.store.tighten_lb(v, val);
        self.dispatch();
        ev
    }

    pub fn tighten_ub(&mut self, v: VarId, val: i32) -> EventSet {
        let ev = self.store.tighten_ub(v, val);
        self.dispatch();
        ev
    }

    pub fn assign(&mut self, v: VarId, val: i32) -> EventSet {
        let ev = self.store.assign(v, val);
        self.dispatch();
        ev
    }

    /// Runs queued propagators until the queue is empty or the store fails.
    pub fn propagate(&mut self) -> Outcome {
        while !self.store.is_failed() {
            let Some(p) = self.queue.pop_front() else { break };
            let pi = p.0 as usize;
            self.queued[pi] = false;
            let (initial, items) = self.work[pi].take();
            if self.entailed[pi] {
                continue;
            }
            let mut wakes: Vec<(Option<VarId>, EventSet)> = Vec::with_capacity(items.len() + 1);
            if initial {
                wakes.push((None, EventSet::ALL));
            }
            wakes.extend(items.into_iter().map(|(v, e)| (Some(v), e)));
            for (var, ev) in wakes {
                self.stats.wakes += 1;
                let status = self.props[pi].wake(&mut self.store, var, ev);
                if self.store.is_failed() {
                    break;
                }
                if status == PropStatus::Entailed {
                    self.set_entailed(p);
                    self.dispatch();
                    break;
                }
                self.dispatch();
            }
        }
        if self.store.is_failed() {
            self.clear_queue();
            self.stats.failures += 1;
            Outcome::Failure
        } else {
            Outcome::Fixpoint
        }
    }

    pub fn checkpoint(&mut self) -> EngineCheckpoint {
        let snapshot = if self.queue.is_empty() {
            None
        } else {
            Some(QueueSnapshot {
                queue: self.queue.iter().copied().collect(),
                work: self
                    .queue
                    .iter()
                    .map(|p| {
                        let w = &self.work[p.0 as usize];
                        (*p, w.initial, w.items.clone())
                    })
                    .collect(),
            })
        };
        EngineCheckpoint {
            store: self.store.checkpoint(),
            trail_len: self.trail.len(),
            snapshot,
        }
    }

    /// Reverts domains, failure flag, registrations and entailment marks to
    /// the state at `cp`.
    pub fn restore(&mut self, cp: EngineCheckpoint) -> Result<(), StoreError> {
        self.store.restore(cp.store)?;
        while self.trail.len() > cp.trail_len {
            match self.trail.pop().expect("non-empty") {
                Undo::AddProp { watched } => {
                    let id = PropId(self.props.len() as u32 - 1);
                    for v in watched.iter().rev() {
                        let popped = self.watchers[v.index()].pop();
                        debug_assert_eq!(popped, Some(id));
                    }
                    self.props.pop();
                    self.entailed.pop();
                    self.queued.pop();
                    self.work.pop();
                }
                Undo::Entailed(p) => self.entailed[p.0 as usize] = false,
            }
        }
        self.clear_queue();
        if let Some(snap) = cp.snapshot {
            for (p, initial, items) in snap.work {
                let w = &mut self.work[p.0 as usize];
                w.initial = initial;
                for (v, e) in items {
                    w.push(v, e);
                }
            }
            for p in snap.queue {
                self.queued[p.0 as usize] = true;
                self.queue.push_back(p);
            }
        }
        Ok(())
    }

    /// Keeps everything done since `cp`.
    pub fn commit(&mut self, cp: EngineCheckpoint) -> Result<(), StoreError> {
        self.store.commit(cp.store)?;
        if self.store.checkpoint_depth() == 0 {
            self.trail.clear();
        }
        Ok(())
    }

    pub fn is_entailed(&self, p: PropId) -> bool {
        self.entailed[p.0 as usize]
    }

    fn set_entailed(&mut self, p: PropId) {
        self.entailed[p.0 as usize] = true;
        if self.store.checkpoint_depth() > 0 {
            self.trail.push(Undo::Entailed(p));
        }
    }

    fn enqueue(&mut self, p: PropId) {
        let pi = p.0 as usize;
        if !self.queued[pi] {
            self.queued[pi] = true;
            self.queue.push_back(p);
        }
    }

    fn dispatch(&mut self) {
        if !self.store.has_events() {
            return;
        }
        let mut events = std::mem::take(&mut self.events);
        self.store.drain_events(&mut events);
        if !self.store.is_failed() {
            for &(v, ev) in &events {
                for i in 0..self.watchers[v.index()].len() {
                    let w = self.watchers[v.index()][i];
                    if !self.entailed[w.0 as usize] {
                        self.work[w.0 as usize].push(v, ev);
                        self.enqueue(w);
                    }
                }
            }
        }
        events.clear();
        self.events = events;
    }

    fn clear_queue(&mut self) {
        while let Some(p) = self.queue.pop_front() {
            let pi = p.0 as usize;
            self.queued[pi] = false;
            self.work[pi].take();
        }
        self.store.clear_events();
    }

    #[cfg(test)]
    pub(crate) fn queue_is_empty(&self) -> bool {
        self.queue.is_empty() && self.work.iter().all(|w| w.is_empty()) && !self.queued.iter().any(|&q| q)
    }

    /// Test hook: permutes the pending queue (used to check confluence).
    #[doc(hidden)]
    pub fn shuffle_queue_with(&mut self, mut f: impl FnMut(&mut Vec<PropId>)) {
        let mut q: Vec<PropId> = self.queue.drain(..).collect();
        f(&mut q);
        self.queue.extend(q);
    }
}
