use super::*;

fn set_with(m: &mut Model, size: usize, required: &[u32], possible: &[u32]) -> SetVar {
    let s = m.new_set(size);
    let pos = possible.iter().fold(0u64, |acc, &e| acc | 1 << e);
    let req = required.iter().fold(0u64, |acc, &e| acc | 1 << e);
    m.store_mut().restrict_possible(s, pos).unwrap();
    m.store_mut().require(s, req).unwrap();
    s
}

fn members(mask: u64) -> Vec<u32> {
    bits(mask).collect()
}

#[test]
fn fixpoint_examples() {
    let mut m = Model::new();
    let x = m.new_int([1, 2]);
    m.post(Constraint::IntNe { x, value: 1 });
    assert!(m.propagate_fixpoint().is_ok());
    assert_eq!(m.store().value(x), Some(2));

    let mut m = Model::new();
    let s = set_with(&mut m, 4, &[0], &[0]);
    m.post(Constraint::CardLe { set: s, bound: 0 });
    assert_eq!(m.propagate_fixpoint(), Err(Inconsistent));

    let mut m = Model::new();
    m.new_int([0, 1]);
    assert!(m.propagate_fixpoint().is_ok());
    assert_eq!(m.propagations(), 0);
}

#[test]
fn search_examples() {
    let mut m = Model::new();
    let x = m.new_bool();
    m.set_decision_vars(vec![x]);
    let r = search(&mut m, &Strategy::default(), &Limits::default());
    assert_eq!(r.status, SolveStatus::Sat);
    assert!(r.decisions <= 1);

    let mut m = Model::new();
    let x = m.new_bool();
    m.post(Constraint::IntNe { x, value: 0 });
    m.post(Constraint::IntNe { x, value: 1 });
    let r = search(&mut m, &Strategy::default(), &Limits::default());
    assert_eq!(r.status, SolveStatus::Unsat);
}

#[test]
fn search_falls_back_to_set_membership() {
    let mut m = Model::new();
    let s = m.new_set(3);
    m.post(Constraint::CardLe { set: s, bound: 1 });
    let r = search(&mut m, &Strategy::default(), &Limits::default());
    assert_eq!(r.status, SolveStatus::Sat);
    let w = r.witness.unwrap();
    assert!(w.set(s).count_ones() <= 1);
    assert!(m.check(&w));
}

#[test]
fn search_respects_decision_limit() {
    // Every flag excluded from 1, yet one must be set.
    let mut m = Model::new();
    let xs: Vec<_> = (0..6).map(|_| m.new_bool()).collect();
    m.post(Constraint::AtLeastOne { flags: xs.clone() });
    for &x in &xs {
        m.post(Constraint::IntNe { x, value: 1 });
    }
    let r = search(&mut m, &Strategy::default(), &Limits::default());
    assert_eq!(r.status, SolveStatus::Unsat);

    let mut m = Model::new();
    let xs: Vec<_> = (0..20).map(|_| m.new_bool()).collect();
    m.set_decision_vars(xs);
    let limits = Limits {
        decisions: Some(3),
        timeout: None,
    };
    let r = search(&mut m, &Strategy::default(), &limits);
    assert_eq!(r.status, SolveStatus::Indeterminate);
    assert_eq!(r.decisions, 3);
}

#[test]
fn card_le_examples() {
    let mut m = Model::new();
    let s = set_with(&mut m, 4, &[1, 2], &[1, 2, 3]);
    m.post(Constraint::CardLe { set: s, bound: 2 });
    m.propagate_fixpoint().unwrap();
    assert_eq!(members(m.store().possible(s)), vec![1, 2]);

    let mut m = Model::new();
    let s = set_with(&mut m, 4, &[1, 2, 3], &[1, 2, 3]);
    m.post(Constraint::CardLe { set: s, bound: 2 });
    assert!(m.propagate_fixpoint().is_err());

    let mut m = Model::new();
    let s = set_with(&mut m, 4, &[], &[1, 2, 3]);
    m.post(Constraint::CardLe { set: s, bound: 3 });
    m.propagate_fixpoint().unwrap();
    assert_eq!(members(m.store().possible(s)), vec![1, 2, 3]);
}

#[test]
fn union_examples() {
    let mut m = Model::new();
    let a = set_with(&mut m, 2, &[], &[0]);
    let b = set_with(&mut m, 2, &[], &[0, 1]);
    m.post(Constraint::UnionEq {
        sets: vec![a, b],
        universe: 0b11,
    });
    m.propagate_fixpoint().unwrap();
    assert_eq!(members(m.store().required(b)), vec![1]);
    assert_eq!(m.store().required(a), 0);

    let mut m = Model::new();
    let a = set_with(&mut m, 1, &[], &[]);
    m.post(Constraint::UnionEq {
        sets: vec![a],
        universe: 0b1,
    });
    assert!(m.propagate_fixpoint().is_err());

    let mut m = Model::new();
    let a = m.new_set(2);
    let b = m.new_set(2);
    m.post(Constraint::UnionEq {
        sets: vec![a, b],
        universe: 0b11,
    });
    m.propagate_fixpoint().unwrap();
    assert_eq!((m.store().required(a), m.store().required(b)), (0, 0));
}

#[test]
fn intersection_examples() {
    let mut m = Model::new();
    let x = set_with(&mut m, 5, &[1], &[0, 1, 2]);
    let y = set_with(&mut m, 5, &[1], &[1, 3]);
    let z = m.new_set(5);
    m.post(Constraint::Intersection { x, y, z });
    m.propagate_fixpoint().unwrap();
    assert_eq!(members(m.store().required(z)), vec![1]);

    let mut m = Model::new();
    let x = set_with(&mut m, 5, &[], &[1, 2]);
    let y = set_with(&mut m, 5, &[], &[2, 3]);
    let z = m.new_set(5);
    m.post(Constraint::Intersection { x, y, z });
    m.propagate_fixpoint().unwrap();
    assert_eq!(members(m.store().possible(z)), vec![2]);

    let mut m = Model::new();
    let x = set_with(&mut m, 5, &[], &[1, 2]);
    let y = m.new_set(5);
    let z = set_with(&mut m, 5, &[4], &[4]);
    m.post(Constraint::Intersection { x, y, z });
    assert!(m.propagate_fixpoint().is_err());

    // Required in x, excluded from z: cannot be in y.
    let mut m = Model::new();
    let x = set_with(&mut m, 3, &[0], &[0, 1, 2]);
    let y = m.new_set(3);
    let z = set_with(&mut m, 3, &[], &[1, 2]);
    m.post(Constraint::Intersection { x, y, z });
    m.propagate_fixpoint().unwrap();
    assert_eq!(members(m.store().possible(y)), vec![1, 2]);
}

#[test]
fn pair_in_set_examples() {
    let (u, v) = (0, 1);
    let mut m = Model::new();
    let flag = m.new_int([1]);
    let set = set_with(&mut m, 4, &[], &[u, v, 3]);
    m.post(Constraint::PairInSet { flag, u, v, set });
    m.propagate_fixpoint().unwrap();
    assert_eq!(members(m.store().required(set)), vec![u, v]);

    let mut m = Model::new();
    let flag = m.new_bool();
    let set = set_with(&mut m, 4, &[], &[v, 3]);
    m.post(Constraint::PairInSet { flag, u, v, set });
    m.propagate_fixpoint().unwrap();
    assert_eq!(m.store().value(flag), Some(0));

    let mut m = Model::new();
    let flag = m.new_int([0]);
    let set = set_with(&mut m, 4, &[u], &[u, v, 3]);
    m.post(Constraint::PairInSet { flag, u, v, set });
    m.propagate_fixpoint().unwrap();
    assert_eq!(members(m.store().possible(set)), vec![u, 3]);

    let mut m = Model::new();
    let flag = m.new_bool();
    let set = set_with(&mut m, 4, &[u, v], &[u, v]);
    m.post(Constraint::PairInSet { flag, u, v, set });
    m.propagate_fixpoint().unwrap();
    assert_eq!(m.store().value(flag), Some(1));
}

#[test]
fn at_least_one_examples() {
    let mut m = Model::new();
    let xs = vec![m.new_int([0]), m.new_int([0]), m.new_bool()];
    m.post(Constraint::AtLeastOne { flags: xs.clone() });
    m.propagate_fixpoint().unwrap();
    assert_eq!(m.store().value(xs[2]), Some(1));

    let mut m = Model::new();
    let xs = vec![m.new_int([0]), m.new_int([0]), m.new_int([0])];
    m.post(Constraint::AtLeastOne { flags: xs });
    assert!(m.propagate_fixpoint().is_err());

    let mut m = Model::new();
    let xs = vec![m.new_int([1]), m.new_bool()];
    m.post(Constraint::AtLeastOne { flags: xs.clone() });
    m.propagate_fixpoint().unwrap();
    assert_eq!(m.store().domain(xs[1]), 0b11);
}

#[test]
fn parent_depth_examples() {
    // Node 1 with parent fixed to 0 at depth 0.
    let mut m = Model::new();
    let d0 = m.new_int([0]);
    let d1 = m.new_int(0..3);
    let p1 = m.new_int([0]);
    m.post(Constraint::ParentDepth {
        node: 1,
        parent: p1,
        depth: d1,
        depths: vec![d0, d1],
    });
    m.propagate_fixpoint().unwrap();
    assert_eq!(m.store().value(d1), Some(1));

    // depth_i = {1}, depth_j = {3,4}: j cannot be the parent.
    let mut m = Model::new();
    let d0 = m.new_int([0]);
    let d1 = m.new_int([1]);
    let d2 = m.new_int([3, 4]);
    let p1 = m.new_int([0, 2]);
    m.post(Constraint::ParentDepth {
        node: 1,
        parent: p1,
        depth: d1,
        depths: vec![d0, d1, d2],
    });
    m.propagate_fixpoint().unwrap();
    assert_eq!(m.store().value(p1), Some(0));

    // Compatible depths, nothing fixed: no change.
    let mut m = Model::new();
    let d0 = m.new_int(0..4);
    let d1 = m.new_int(0..4);
    let d2 = m.new_int(0..4);
    let p1 = m.new_int([0, 2]);
    m.post(Constraint::ParentDepth {
        node: 1,
        parent: p1,
        depth: d1,
        depths: vec![d0, d1, d2],
    });
    m.propagate_fixpoint().unwrap();
    assert_eq!(m.store().domain(p1), 0b101);
    assert_eq!(m.store().domain(d0), 0b1111);
    assert_eq!(m.store().domain(d2), 0b1111);
}

struct Guarded {
    m: Model,
    di: IntVar,
    dk: IntVar,
    shared: SetVar,
    parent_k: IntVar,
    sets: Vec<SetVar>,
}

fn guarded(di: &[u32], dk: &[u32], parents: &[u32], shared_req: &[u32]) -> Guarded {
    let mut m = Model::new();
    let di = m.new_int(di.iter().copied());
    let dk = m.new_int(dk.iter().copied());
    let parent_k = m.new_int(parents.iter().copied());
    let shared = set_with(&mut m, 6, shared_req, &[0, 1, 2, 3, 4, 5]);
    let sets = (0..3).map(|_| m.new_set(6)).collect();
    Guarded {
        m,
        di,
        dk,
        shared,
        parent_k,
        sets,
    }
}

impl Guarded {
    fn post(&mut self) {
        self.m.post(Constraint::GuardedSubset {
            depth_i: self.di,
            depth_k: self.dk,
            shared: self.shared,
            parent_k: self.parent_k,
            sets: self.sets.clone(),
        });
    }
}

#[test]
fn guarded_subset_examples() {
    // Entailed guard prunes an unsupporting parent candidate.
    let mut g = guarded(&[1], &[1, 2], &[0, 1], &[5]);
    g.m.store_mut().exclude(g.sets[1], 5).unwrap();
    g.post();
    g.m.propagate_fixpoint().unwrap();
    assert_eq!(g.m.store().value(g.parent_k), Some(0));

    // Entailed guard with fixed parent pushes required elements up.
    let mut g = guarded(&[1], &[2], &[1], &[5]);
    g.post();
    g.m.propagate_fixpoint().unwrap();
    assert_eq!(members(g.m.store().required(g.sets[1])), vec![5]);

    // Disentailed guard: nothing happens even with no supporting parent.
    let mut g = guarded(&[3], &[1, 2], &[1], &[5]);
    g.m.store_mut().exclude(g.sets[1], 5).unwrap();
    g.post();
    let before = g.m.store().snapshot();
    g.m.propagate_fixpoint().unwrap();
    assert_eq!(g.m.store().snapshot(), before);

    // No supporting parent: the guard is negated, depth_i > depth_k.
    let mut g = guarded(&[1, 2, 3], &[1, 2, 3], &[1], &[5]);
    g.m.store_mut().exclude(g.sets[1], 5).unwrap();
    g.post();
    g.m.propagate_fixpoint().unwrap();
    assert_eq!(members(g.m.store().domain(g.di)), vec![2, 3]);
    assert_eq!(members(g.m.store().domain(g.dk)), vec![1, 2]);
}

fn bools(m: &mut Model, values: &[Option<u32>]) -> Vec<IntVar> {
    values
        .iter()
        .map(|v| match v {
            Some(v) => m.new_int([*v]),
            None => m.new_bool(),
        })
        .collect()
}

#[test]
fn lex_examples() {
    let mut m = Model::new();
    let a = bools(&mut m, &[Some(1), None]);
    let b = bools(&mut m, &[Some(0), None]);
    m.post(Constraint::LexLe { a, b });
    assert!(m.propagate_fixpoint().is_err());

    let mut m = Model::new();
    let a = bools(&mut m, &[Some(0), Some(1)]);
    let b = bools(&mut m, &[Some(0), Some(1)]);
    m.post(Constraint::LexLe { a, b });
    assert!(m.propagate_fixpoint().is_ok());

    let mut m = Model::new();
    let a = bools(&mut m, &[Some(0), None]);
    let b = bools(&mut m, &[Some(1), None]);
    m.post(Constraint::LexLe {
        a: a.clone(),
        b: b.clone(),
    });
    m.propagate_fixpoint().unwrap();
    assert_eq!(m.store().domain(a[1]), 0b11);
    assert_eq!(m.store().domain(b[1]), 0b11);
}

#[test]
fn lex_forces_strict_prefix_when_suffix_fails() {
    // a = [?, 1], b = [?, 0]: equality at 0 would need 1 <= 0, so a0 = 0, b0 = 1.
    let mut m = Model::new();
    let a = bools(&mut m, &[None, Some(1)]);
    let b = bools(&mut m, &[None, Some(0)]);
    m.post(Constraint::LexLe {
        a: a.clone(),
        b: b.clone(),
    });
    m.propagate_fixpoint().unwrap();
    assert_eq!(m.store().value(a[0]), Some(0));
    assert_eq!(m.store().value(b[0]), Some(1));
}

#[test]
fn bit_channel_examples() {
    let mut m = Model::new();
    let s = set_with(&mut m, 3, &[2], &[0, 1, 2]);
    let row = bools(&mut m, &[None, None, None]);
    m.post(Constraint::BitChannel {
        set: s,
        bits: row.clone(),
    });
    m.propagate_fixpoint().unwrap();
    assert_eq!(m.store().value(row[2]), Some(1));

    let mut m = Model::new();
    let s = m.new_set(3);
    let row = bools(&mut m, &[Some(0), None, None]);
    m.post(Constraint::BitChannel { set: s, bits: row });
    m.propagate_fixpoint().unwrap();
    assert_eq!(members(m.store().possible(s)), vec![1, 2]);

    let mut m = Model::new();
    let s = m.new_set(3);
    let row = bools(&mut m, &[Some(1), Some(0), Some(1)]);
    m.post(Constraint::BitChannel { set: s, bits: row });
    m.propagate_fixpoint().unwrap();
    assert!(m.store().set_fixed(s));
    assert_eq!(members(m.store().required(s)), vec![0, 2]);
}

#[test]
fn int_eq_ne_examples() {
    let mut m = Model::new();
    let x = m.new_int([0, 1, 2]);
    m.post(Constraint::IntNe { x, value: 1 });
    m.propagate_fixpoint().unwrap();
    assert_eq!(members(m.store().domain(x)), vec![0, 2]);

    let mut m = Model::new();
    let x = m.new_int([0]);
    m.post(Constraint::IntEq { x, value: 0 });
    m.propagate_fixpoint().unwrap();
    assert_eq!(m.store().value(x), Some(0));

    let mut m = Model::new();
    let x = m.new_int([1]);
    m.post(Constraint::IntEq { x, value: 0 });
    assert!(m.propagate_fixpoint().is_err());
}

#[test]
fn fixpoint_is_idempotent_after_failure_recovery() {
    let mut m = Model::new();
    let x = m.new_int(0..3);
    let s = m.new_set(3);
    let row = vec![m.new_bool(), m.new_bool(), m.new_bool()];
    m.post(Constraint::BitChannel {
        set: s,
        bits: row.clone(),
    });
    m.post(Constraint::CardLe { set: s, bound: 1 });
    m.post(Constraint::IntNe { x, value: 2 });
    m.propagate_fixpoint().unwrap();
    let mark = m.store().mark();
    let before = m.store().snapshot();
    m.store_mut().fix(row[0], 1).unwrap();
    m.store_mut().fix(row[1], 1).unwrap();
    assert!(m.propagate_fixpoint().is_err());
    m.store_mut().undo_to(mark);
    assert_eq!(m.store().snapshot(), before);
    let props = m.propagations();
    m.propagate_fixpoint().unwrap();
    assert_eq!(m.propagations(), props);
}
