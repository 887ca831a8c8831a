//! A small trailed constraint-propagation engine.
//!
//! Integer variables live in `0..=63` and set variables range over a universe of
//! at most 64 elements; both are plain bitmasks. Constraints are posted as
//! [`Constraint`] values and filtered by a FIFO propagation queue. Search is
//! chronological depth-first with exact restoration through the trail.

mod constraint;
mod propagators;
mod search;
mod store;

use std::collections::VecDeque;

pub use constraint::{Assignment, Constraint};
pub use search::{search, Limits, SolveReport, SolveStatus, Strategy, ValueOrder, VarOrder};
pub use store::{
    bits, Inconsistent, IntVar, PropResult, SetVar, Store, Var, MAX_UNIVERSE, MAX_VALUE,
};

use propagators::mask_below;

/// Variables, posted constraints and the propagation queue for one problem.
#[derive(Debug, Clone, Default)]
pub struct Model {
    store: Store,
    constraints: Vec<Constraint>,
    int_watchers: Vec<Vec<u32>>,
    set_watchers: Vec<Vec<u32>>,
    queue: VecDeque<u32>,
    queued: Vec<bool>,
    decision_vars: Vec<IntVar>,
    propagations: u64,
}

impl Model {
    pub fn new() -> Self {
        Self::default()
    }

    /// New integer variable with the given values (each `<= MAX_VALUE`).
    pub fn new_int<I: IntoIterator<Item = u32>>(&mut self, values: I) -> IntVar {
        let mut domain = 0u64;
        for v in values {
            assert!(v <= MAX_VALUE, "value {v} exceeds the supported range");
            domain |= 1 << v;
        }
        self.int_watchers.push(Vec::new());
        self.store.add_int(domain)
    }

    pub fn new_bool(&mut self) -> IntVar {
        self.new_int([0, 1])
    }

    /// New set variable over the universe `0..size`.
    pub fn new_set(&mut self, size: usize) -> SetVar {
        assert!(
            size <= MAX_UNIVERSE,
            "set universe larger than {MAX_UNIVERSE}"
        );
        self.set_watchers.push(Vec::new());
        self.store.add_set(mask_below(size))
    }

    /// Posts a constraint; it is filtered at the next fixpoint.
    pub fn post(&mut self, c: Constraint) {
        let id = self.constraints.len() as u32;
        let mut scope = c.scope();
        scope.sort_by_key(|v| match v {
            Var::Int(x) => (0, x.index()),
            Var::Set(s) => (1, s.index()),
        });
        scope.dedup();
        for var in scope {
            match var {
                Var::Int(x) => self.int_watchers[x.index()].push(id),
                Var::Set(s) => self.set_watchers[s.index()].push(id),
            }
        }
        self.constraints.push(c);
        self.queued.push(true);
        self.queue.push_back(id);
    }

    /// Integer variables the search branches on first, in priority order.
    pub fn set_decision_vars(&mut self, vars: Vec<IntVar>) {
        self.decision_vars = vars;
    }

    pub fn decision_vars(&self) -> &[IntVar] {
        &self.decision_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn store(&self) -> &Store {
        &self.store
    }

    /// Direct access to the bounds, for decisions and tests. Changes made here
    /// are picked up by the next [`Model::propagate_fixpoint`].
    pub fn store_mut(&mut self) -> &mut Store {
        &mut self.store
    }

    /// Number of filter invocations so far.
    pub fn propagations(&self) -> u64 {
        self.propagations
    }

    /// Runs queued propagators until nothing changes or a bound empties.
    pub fn propagate_fixpoint(&mut self) -> PropResult {
        loop {
            for var in self.store.changed.drain(..) {
                let watchers = match var {
                    Var::Int(x) => &self.int_watchers[x.index()],
                    Var::Set(s) => &self.set_watchers[s.index()],
                };
                for &c in watchers {
                    if !self.queued[c as usize] {
                        self.queued[c as usize] = true;
                        self.queue.push_back(c);
                    }
                }
            }
            let Some(c) = self.queue.pop_front() else {
                return Ok(());
            };
            self.queued[c as usize] = false;
            self.propagations += 1;
            if let Err(e) = self.constraints[c as usize].propagate(&mut self.store) {
                for c in self.queue.drain(..) {
                    self.queued[c as usize] = false;
                }
                self.store.changed.clear();
                return Err(e);
            }
        }
    }

    /// Schedules every constraint for the next fixpoint.
    pub fn requeue_all(&mut self) {
        for c in 0..self.constraints.len() {
            if !self.queued[c] {
                self.queued[c] = true;
                self.queue.push_back(c as u32);
            }
        }
    }

    /// Whether every variable is fixed.
    pub fn all_fixed(&self) -> bool {
        (0..self.store.int_count()).all(|i| self.store.is_fixed(IntVar(i as u32)))
            && (0..self.store.set_count()).all(|i| self.store.set_fixed(SetVar(i as u32)))
    }

    /// Reads the current values; `None` while anything is unfixed.
    pub fn assignment(&self) -> Option<Assignment> {
        if !self.all_fixed() {
            return None;
        }
        let s = &self.store;
        let ints = (0..s.int_count())
            .map(|i| s.min(IntVar(i as u32)))
            .collect();
        let sets = (0..s.set_count())
            .map(|i| s.required(SetVar(i as u32)))
            .collect();
        Some(Assignment::new(ints, sets))
    }

    /// Evaluates every posted constraint on `a` without using any filtering code.
    pub fn check(&self, a: &Assignment) -> bool {
        self.constraints.iter().all(|c| c.holds(a))
    }
}

#[cfg(test)]
mod tests;
