//! Declarative constraint descriptions.
//!
//! Each variant names its variables and has two independent readings:
//! [`Constraint::holds`] evaluates it on a complete assignment, and the
//! filtering code in `propagators.rs` narrows bounds during search.

use super::store::{bit, IntVar, SetVar, Var};

/// Values of every variable in a solved model.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    pub(crate) ints: Vec<u32>,
    pub(crate) sets: Vec<u64>,
}

impl Assignment {
    pub fn new(ints: Vec<u32>, sets: Vec<u64>) -> Self {
        Self { ints, sets }
    }

    pub fn int(&self, x: IntVar) -> u32 {
        self.ints[x.index()]
    }

    /// Members of a set variable, as a bitmask.
    pub fn set(&self, s: SetVar) -> u64 {
        self.sets[s.index()]
    }

    pub fn set_members(&self, s: SetVar) -> Vec<usize> {
        super::store::bits(self.set(s))
            .map(|b| b as usize)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    /// `x = value`
    IntEq { x: IntVar, value: u32 },
    /// `x != value`
    IntNe { x: IntVar, value: u32 },
    /// `|set| <= bound`
    CardLe { set: SetVar, bound: u32 },
    /// Union of `sets` equals the constant `universe`.
    UnionEq { sets: Vec<SetVar>, universe: u64 },
    /// `z = x ∩ y`
    Intersection { x: SetVar, y: SetVar, z: SetVar },
    /// `flag = 1 <=> {u, v} ⊆ set`
    PairInSet {
        flag: IntVar,
        u: u32,
        v: u32,
        set: SetVar,
    },
    /// At least one of the 0/1 `flags` is 1.
    AtLeastOne { flags: Vec<IntVar> },
    /// For every `j != node`: `parent = j => depth = depths[j] + 1`.
    ParentDepth {
        node: u32,
        parent: IntVar,
        depth: IntVar,
        depths: Vec<IntVar>,
    },
    /// `depth_i <= depth_k => shared ⊆ sets[parent_k]`.
    GuardedSubset {
        depth_i: IntVar,
        depth_k: IntVar,
        shared: SetVar,
        parent_k: IntVar,
        sets: Vec<SetVar>,
    },
    /// The 0/1 vector `a` is lexicographically `<=` the 0/1 vector `b`.
    LexLe { a: Vec<IntVar>, b: Vec<IntVar> },
    /// `bits[v] = 1 <=> v ∈ set`
    BitChannel { set: SetVar, bits: Vec<IntVar> },
}

impl Constraint {
    /// Every variable the constraint reads.
    pub fn scope(&self) -> Vec<Var> {
        use Constraint::*;
        let ints = |xs: &[IntVar]| xs.iter().copied().map(Var::Int).collect::<Vec<_>>();
        let sets = |xs: &[SetVar]| xs.iter().copied().map(Var::Set).collect::<Vec<_>>();
        match self {
            IntEq { x, .. } | IntNe { x, .. } => vec![Var::Int(*x)],
            CardLe { set, .. } => vec![Var::Set(*set)],
            UnionEq { sets: s, .. } => sets(s),
            Intersection { x, y, z } => sets(&[*x, *y, *z]),
            PairInSet { flag, set, .. } => vec![Var::Int(*flag), Var::Set(*set)],
            AtLeastOne { flags } => ints(flags),
            ParentDepth {
                parent,
                depth,
                depths,
                ..
            } => {
                let mut v = vec![Var::Int(*parent), Var::Int(*depth)];
                v.extend(ints(depths));
                v
            }
            GuardedSubset {
                depth_i,
                depth_k,
                shared,
                parent_k,
                sets: s,
            } => {
                let mut v = ints(&[*depth_i, *depth_k, *parent_k]);
                v.push(Var::Set(*shared));
                v.extend(sets(s));
                v
            }
            LexLe { a, b } => {
                let mut v = ints(a);
                v.extend(ints(b));
                v
            }
            BitChannel { set, bits } => {
                let mut v = vec![Var::Set(*set)];
                v.extend(ints(bits));
                v
            }
        }
    }

    /// Straight-line check of the constraint on a complete assignment.
    pub fn holds(&self, a: &Assignment) -> bool {
        use Constraint::*;
        match self {
            IntEq { x, value } => a.int(*x) == *value,
            IntNe { x, value } => a.int(*x) != *value,
            CardLe { set, bound } => a.set(*set).count_ones() <= *bound,
            UnionEq { sets, universe } => {
                sets.iter().fold(0, |acc, s| acc | a.set(*s)) == *universe
            }
            Intersection { x, y, z } => a.set(*z) == a.set(*x) & a.set(*y),
            PairInSet { flag, u, v, set } => {
                let both = a.set(*set) & bit(*u) != 0 && a.set(*set) & bit(*v) != 0;
                match a.int(*flag) {
                    1 => both,
                    0 => !both,
                    _ => false,
                }
            }
            AtLeastOne { flags } => flags.iter().any(|f| a.int(*f) == 1),
            ParentDepth {
                node,
                parent,
                depth,
                depths,
            } => {
                let j = a.int(*parent);
                j == *node
                    || depths
                        .get(j as usize)
                        .is_some_and(|dj| a.int(*depth) == a.int(*dj) + 1)
            }
            GuardedSubset {
                depth_i,
                depth_k,
                shared,
                parent_k,
                sets,
            } => {
                if a.int(*depth_i) > a.int(*depth_k) {
                    return true;
                }
                match sets.get(a.int(*parent_k) as usize) {
                    Some(target) => a.set(*shared) & !a.set(*target) == 0,
                    None => false,
                }
            }
            LexLe { a: xs, b: ys } => {
                let left: Vec<u32> = xs.iter().map(|x| a.int(*x)).collect();
                let right: Vec<u32> = ys.iter().map(|y| a.int(*y)).collect();
                left <= right
            }
            BitChannel { set, bits } => bits.iter().enumerate().all(|(v, b)| {
                let member = a.set(*set) & bit(v as u32) != 0;
                a.int(*b) == u32::from(member)
            }),
        }
    }
}
