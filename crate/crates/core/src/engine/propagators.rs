//! Filtering for each [`Constraint`] variant.
//!
//! Set reasoning is subset-bound consistency on the required/possible pair.
//! Every filter is sound: it never removes a value or element that occurs in
//! some solution of its own constraint under the current bounds.

use super::constraint::Constraint;
use super::store::{bit, bits, Inconsistent, IntVar, PropResult, SetVar, Store};

impl Constraint {
    pub(crate) fn propagate(&self, s: &mut Store) -> PropResult {
        use Constraint::*;
        match self {
            IntEq { x, value } => s.fix(*x, *value).map(drop),
            IntNe { x, value } => s.remove(*x, *value).map(drop),
            CardLe { set, bound } => card_le(s, *set, *bound),
            UnionEq { sets, universe } => union_eq(s, sets, *universe),
            Intersection { x, y, z } => intersection(s, *x, *y, *z),
            PairInSet { flag, u, v, set } => pair_in_set(s, *flag, *u, *v, *set),
            AtLeastOne { flags } => at_least_one(s, flags),
            ParentDepth {
                node,
                parent,
                depth,
                depths,
            } => parent_depth(s, *node, *parent, *depth, depths),
            GuardedSubset {
                depth_i,
                depth_k,
                shared,
                parent_k,
                sets,
            } => guarded_subset(s, *depth_i, *depth_k, *shared, *parent_k, sets),
            LexLe { a, b } => lex_le(s, a, b),
            BitChannel { set, bits } => bit_channel(s, *set, bits),
        }
    }
}

fn card_le(s: &mut Store, set: SetVar, bound: u32) -> PropResult {
    let req = s.required(set);
    match req.count_ones().cmp(&bound) {
        std::cmp::Ordering::Greater => Err(Inconsistent),
        std::cmp::Ordering::Equal => s.restrict_possible(set, req).map(drop),
        std::cmp::Ordering::Less => Ok(()),
    }
}

fn union_eq(s: &mut Store, sets: &[SetVar], universe: u64) -> PropResult {
    let mut once = 0u64;
    let mut twice = 0u64;
    for &x in sets {
        s.restrict_possible(x, universe)?;
        let p = s.possible(x);
        twice |= once & p;
        once |= p;
    }
    if universe & !once != 0 {
        return Err(Inconsistent);
    }
    let single = universe & !twice;
    if single != 0 {
        for &x in sets {
            let only_here = s.possible(x) & single;
            if only_here != 0 {
                s.require(x, only_here)?;
            }
        }
    }
    Ok(())
}

fn intersection(s: &mut Store, x: SetVar, y: SetVar, z: SetVar) -> PropResult {
    loop {
        let mut changed = false;
        changed |= s.require(z, s.required(x) & s.required(y))?;
        changed |= s.restrict_possible(z, s.possible(x) & s.possible(y))?;
        changed |= s.require(x, s.required(z))?;
        changed |= s.require(y, s.required(z))?;
        // An element certainly in one side but excluded from z cannot be in the other.
        changed |= s.restrict_possible(y, !(s.required(x) & !s.possible(z)))?;
        changed |= s.restrict_possible(x, !(s.required(y) & !s.possible(z)))?;
        if !changed {
            return Ok(());
        }
    }
}

fn pair_in_set(s: &mut Store, flag: IntVar, u: u32, v: u32, set: SetVar) -> PropResult {
    let pair = bit(u) | bit(v);
    match s.value(flag) {
        Some(1) => {
            s.require(set, pair)?;
        }
        Some(0) => {
            let req = s.required(set);
            if req & bit(u) != 0 {
                s.exclude(set, v)?;
            }
            if req & bit(v) != 0 {
                s.exclude(set, u)?;
            }
        }
        _ => {
            if s.required(set) & pair == pair {
                s.fix(flag, 1)?;
            } else if s.possible(set) & pair != pair {
                s.fix(flag, 0)?;
            }
        }
    }
    Ok(())
}

fn at_least_one(s: &mut Store, flags: &[IntVar]) -> PropResult {
    let mut candidate = None;
    let mut open = 0;
    for &f in flags {
        if s.value(f) == Some(1) {
            return Ok(());
        }
        if s.contains(f, 1) {
            open += 1;
            candidate = Some(f);
        }
    }
    match (open, candidate) {
        (0, _) => Err(Inconsistent),
        (1, Some(f)) => s.fix(f, 1).map(drop),
        _ => Ok(()),
    }
}

fn parent_depth(
    s: &mut Store,
    node: u32,
    parent: IntVar,
    depth: IntVar,
    depths: &[IntVar],
) -> PropResult {
    let self_parent = s.contains(parent, node);
    // Depth values reachable through some remaining parent candidate.
    let mut reachable = 0u64;
    for j in bits(s.domain(parent)) {
        if j == node {
            continue;
        }
        let Some(&dj) = depths.get(j as usize) else {
            s.remove(parent, j)?;
            continue;
        };
        let shifted = s.domain(dj) << 1;
        if shifted & s.domain(depth) == 0 {
            s.remove(parent, j)?;
        } else {
            reachable |= shifted;
        }
    }
    if !self_parent {
        s.restrict(depth, reachable)?;
    }
    if let Some(j) = s.value(parent) {
        if j != node {
            let dj = depths[j as usize];
            s.restrict(depth, s.domain(dj) << 1)?;
            s.restrict(dj, s.domain(depth) >> 1)?;
        }
    }
    Ok(())
}

fn guarded_subset(
    s: &mut Store,
    depth_i: IntVar,
    depth_k: IntVar,
    shared: SetVar,
    parent_k: IntVar,
    sets: &[SetVar],
) -> PropResult {
    if s.min(depth_i) > s.max(depth_k) {
        return Ok(());
    }
    let req = s.required(shared);
    let supported = |s: &Store, j: u32| {
        sets.get(j as usize)
            .is_some_and(|&nj| req & !s.possible(nj) == 0)
    };
    if bits(s.domain(parent_k)).all(|j| !supported(s, j)) {
        // The subset cannot hold, so the guard must be false: depth_i > depth_k.
        s.remove_below(depth_i, s.min(depth_k) + 1)?;
        if s.max(depth_i) == 0 {
            return Err(Inconsistent);
        }
        s.remove_above(depth_k, s.max(depth_i) - 1)?;
        return Ok(());
    }
    if s.max(depth_i) > s.min(depth_k) {
        return Ok(());
    }
    // Guard entailed: behave as shared ⊆ sets[parent_k].
    let mut union = 0u64;
    for j in bits(s.domain(parent_k)) {
        if supported(s, j) {
            union |= s.possible(sets[j as usize]);
        } else {
            s.remove(parent_k, j)?;
        }
    }
    s.restrict_possible(shared, union)?;
    if let Some(j) = s.value(parent_k) {
        let target = sets[j as usize];
        s.require(target, s.required(shared))?;
        s.restrict_possible(shared, s.possible(target))?;
    }
    Ok(())
}

/// Generalised arc consistency for `a <=lex b` over 0/1 variables.
fn lex_le(s: &mut Store, a: &[IntVar], b: &[IntVar]) -> PropResult {
    let len = a.len().min(b.len());
    let mut alpha = 0;
    loop {
        // Skip the prefix where both sides are fixed and equal.
        while alpha < len {
            match (s.value(a[alpha]), s.value(b[alpha])) {
                (Some(x), Some(y)) if x == y => alpha += 1,
                _ => break,
            }
        }
        if alpha == len {
            return if a.len() <= b.len() {
                Ok(())
            } else {
                Err(Inconsistent)
            };
        }
        let (x, y) = (a[alpha], b[alpha]);
        if s.min(x) > s.max(y) {
            return Err(Inconsistent);
        }
        if s.max(x) < s.min(y) {
            return Ok(());
        }
        if suffix_strictly_greater(s, &a[alpha + 1..], &b[alpha + 1..]) {
            // Equality at alpha leaves an unsatisfiable suffix: need a[alpha] < b[alpha].
            s.remove_above(x, s.max(y).saturating_sub(1))?;
            s.remove_below(y, s.min(x) + 1)?;
            return Ok(());
        }
        let mut changed = s.remove_above(x, s.max(y))?;
        changed |= s.remove_below(y, s.min(x))?;
        if !changed {
            return Ok(());
        }
    }
}

/// Whether every completion of the suffixes has `a > b`: compares the
/// smallest possible `a` against the largest possible `b`.
fn suffix_strictly_greater(s: &Store, a: &[IntVar], b: &[IntVar]) -> bool {
    for (&x, &y) in a.iter().zip(b) {
        let (lo, hi) = (s.min(x), s.max(y));
        if lo != hi {
            return lo > hi;
        }
    }
    a.len() > b.len()
}

fn bit_channel(s: &mut Store, set: SetVar, row: &[IntVar]) -> PropResult {
    s.restrict_possible(set, mask_below(row.len()))?;
    for (v, &b) in row.iter().enumerate() {
        let v = v as u32;
        match s.value(b) {
            Some(1) => {
                s.include(set, v)?;
            }
            Some(0) => {
                s.exclude(set, v)?;
            }
            _ => {
                if s.required(set) & bit(v) != 0 {
                    s.fix(b, 1)?;
                } else if s.possible(set) & bit(v) == 0 {
                    s.fix(b, 0)?;
                }
            }
        }
    }
    Ok(())
}

pub(crate) fn mask_below(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        bit(n as u32) - 1
    }
}
