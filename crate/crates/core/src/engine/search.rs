use std::time::{Duration, Instant};

use super::constraint::Assignment;
use super::store::{bit, IntVar, SetVar};
use super::Model;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VarOrder {
    /// Smallest current domain first, ties broken by position.
    #[default]
    SmallestDomain,
    /// First unfixed decision variable in the given order.
    Input,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValueOrder {
    #[default]
    Ascending,
    Descending,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Strategy {
    pub var_order: VarOrder,
    pub value_order: ValueOrder,
}

/// Optional caps on one search; hitting either yields `Indeterminate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Limits {
    pub decisions: Option<u64>,
    pub timeout: Option<Duration>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Sat,
    Unsat,
    /// A limit was reached before the search finished.
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub witness: Option<Assignment>,
    /// Value assignments made by the branching strategy.
    pub decisions: u64,
    /// Filter invocations, including the initial propagation.
    pub propagations: u64,
    /// Backtracks caused by an inconsistent assignment.
    pub fails: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy)]
enum Choice {
    Int(IntVar),
    /// Membership of an element in a set: bit 1 = include, bit 0 = exclude.
    Member(SetVar, u32),
}

#[derive(Debug)]
struct Frame {
    choice: Choice,
    remaining: u64,
    mark: usize,
}

fn select(model: &Model, strategy: &Strategy) -> Option<Choice> {
    let store = model.store();
    let unfixed = model
        .decision_vars()
        .iter()
        .copied()
        .filter(|&x| !store.is_fixed(x));
    let pick = match strategy.var_order {
        VarOrder::Input => unfixed.take(1).next(),
        // min_by_key keeps the first of equal keys.
        VarOrder::SmallestDomain => unfixed.min_by_key(|&x| store.size(x)),
    };
    if let Some(x) = pick {
        return Some(Choice::Int(x));
    }
    for i in 0..store.set_count() {
        let s = SetVar(i as u32);
        let open = store.possible(s) & !store.required(s);
        if open != 0 {
            return Some(Choice::Member(s, open.trailing_zeros()));
        }
    }
    (0..store.int_count())
        .map(|i| IntVar(i as u32))
        .find(|&x| !store.is_fixed(x))
        .map(Choice::Int)
}

fn next_value(remaining: &mut u64, order: ValueOrder) -> Option<u32> {
    if *remaining == 0 {
        return None;
    }
    let v = match order {
        ValueOrder::Ascending => remaining.trailing_zeros(),
        ValueOrder::Descending => 63 - remaining.leading_zeros(),
    };
    *remaining &= !bit(v);
    Some(v)
}

/// Depth-first search for the first full assignment.
///
/// Branches on the model's decision variables per `strategy`, then on set
/// membership (include before exclude, lowest unfixed set and element first),
/// then on any leftover integer variable. Every assignment is followed by a
/// propagation fixpoint; failures undo to the choice point via the trail.
/// On return the store is back at the root fixpoint.
pub fn search(model: &mut Model, strategy: &Strategy, limits: &Limits) -> SolveReport {
    let start = Instant::now();
    let base_props = model.propagations();
    let mut decisions = 0u64;
    let mut fails = 0u64;
    let finish = |model: &Model, status, witness, decisions, fails| SolveReport {
        status,
        witness,
        decisions,
        propagations: model.propagations() - base_props,
        fails,
        elapsed: start.elapsed(),
    };

    if model.propagate_fixpoint().is_err() {
        return finish(model, SolveStatus::Unsat, None, 0, 0);
    }

    let root = model.store().mark();
    let mut stack: Vec<Frame> = Vec::new();
    loop {
        let Some(choice) = select(model, strategy) else {
            let witness = model.assignment().expect("all variables fixed");
            model.store_mut().undo_to(root);
            return finish(model, SolveStatus::Sat, Some(witness), decisions, fails);
        };
        let remaining = match choice {
            Choice::Int(x) => model.store().domain(x),
            Choice::Member(..) => 0b11,
        };
        stack.push(Frame {
            choice,
            remaining,
            mark: model.store().mark(),
        });

        // Try values until one survives propagation, backtracking as needed.
        loop {
            let Some(frame) = stack.last_mut() else {
                return finish(model, SolveStatus::Unsat, None, decisions, fails);
            };
            model.store_mut().undo_to(frame.mark);
            let order = match frame.choice {
                Choice::Int(_) => strategy.value_order,
                Choice::Member(..) => ValueOrder::Descending,
            };
            let Some(value) = next_value(&mut frame.remaining, order) else {
                stack.pop();
                continue;
            };
            let over_decisions = limits.decisions.is_some_and(|cap| decisions >= cap);
            let over_time = limits.timeout.is_some_and(|t| start.elapsed() >= t);
            if over_decisions || over_time {
                model.store_mut().undo_to(root);
                return finish(model, SolveStatus::Indeterminate, None, decisions, fails);
            }
            decisions += 1;
            let choice = frame.choice;
            let store = model.store_mut();
            let applied = match choice {
                Choice::Int(x) => store.fix(x, value),
                Choice::Member(s, e) if value == 1 => store.include(s, e),
                Choice::Member(s, e) => store.exclude(s, e),
            };
            if applied.is_ok() && model.propagate_fixpoint().is_ok() {
                break;
            }
            fails += 1;
        }
    }
}
