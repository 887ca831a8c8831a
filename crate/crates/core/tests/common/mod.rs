//! Graph generators and engine harnesses shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use tdcp_core::engine::{bits, Assignment, Constraint, IntVar, Model, SetVar};
use tdcp_core::Graph;

pub fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect()
}

/// Every labelled graph on `n` vertices (`2^(n choose 2)` of them).
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let pairs = all_pairs(n);
    (0u64..1 << pairs.len())
        .map(|mask| {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &e)| e);
            Graph::from_edges(n, edges).unwrap()
        })
        .collect()
}

pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let edges: Vec<_> = all_pairs(n)
        .into_iter()
        .filter(|_| rng.gen_bool(p))
        .collect();
    Graph::from_edges(n, edges).unwrap()
}

pub fn random_connected<R: Rng>(n: usize, edges: usize, rng: &mut R) -> Graph {
    loop {
        let mut pairs = all_pairs(n);
        pairs.shuffle(rng);
        pairs.truncate(edges);
        let g = Graph::from_edges(n, pairs).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

/// Uniform labelled tree via a Prüfer sequence.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Graph {
    assert!(n >= 2);
    if n == 2 {
        return Graph::path(2);
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1; n];
    for &v in &seq {
        degree[v] += 1;
    }
    let mut edges = Vec::new();
    for &v in &seq {
        let leaf = (0..n).find(|&u| degree[u] == 1).unwrap();
        edges.push((leaf, v));
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let rest: Vec<_> = (0..n).filter(|&u| degree[u] == 1).collect();
    edges.push((rest[0], rest[1]));
    Graph::from_edges(n, edges).unwrap()
}

// ---- engine micro-instances ----

/// A model whose every variable has a tiny domain, so that all assignments
/// can be enumerated.
pub struct Micro {
    pub model: Model,
    pub ints: Vec<IntVar>,
    pub sets: Vec<SetVar>,
    pub universe: usize,
}

fn random_mask<R: Rng>(rng: &mut R, width: u32) -> u64 {
    loop {
        let m = rng.gen_range(1u64..1 << width);
        if m != 0 {
            return m;
        }
    }
}

impl Micro {
    /// `n_int` integer variables with random non-empty domains inside
    /// `0..=3`, `n_set` set variables over `0..universe` with random bounds.
    pub fn random<R: Rng>(
        rng: &mut R,
        n_int: usize,
        n_set: usize,
        universe: usize,
        bools: bool,
    ) -> Self {
        let mut model = Model::new();
        let ints = (0..n_int)
            .map(|_| {
                let mask = if bools {
                    random_mask(rng, 2)
                } else {
                    random_mask(rng, 4)
                };
                model.new_int(bits(mask))
            })
            .collect();
        let sets = (0..n_set)
            .map(|_| {
                let s = model.new_set(universe);
                let full = (1u64 << universe) - 1;
                let pos = rng.gen_range(0..=full);
                let req = rng.gen_range(0..=full) & pos & rng.gen_range(0..=full);
                model.store_mut().restrict_possible(s, pos).unwrap();
                model.store_mut().require(s, req).unwrap();
                s
            })
            .collect();
        Micro {
            model,
            ints,
            sets,
            universe,
        }
    }

    /// Every assignment inside the current bounds.
    pub fn assignments(&self) -> Vec<Assignment> {
        let store = self.model.store();
        let mut out = vec![Assignment::new(vec![], vec![])];
        let mut ints_so_far: Vec<Vec<u32>> = vec![vec![]];
        for &x in &self.ints {
            let mut next = Vec::new();
            for prefix in &ints_so_far {
                for v in bits(store.domain(x)) {
                    let mut p = prefix.clone();
                    p.push(v);
                    next.push(p);
                }
            }
            ints_so_far = next;
        }
        let mut sets_so_far: Vec<Vec<u64>> = vec![vec![]];
        for &s in &self.sets {
            let (req, pos) = (store.required(s), store.possible(s));
            let free = pos & !req;
            let mut next = Vec::new();
            for prefix in &sets_so_far {
                // All subsets of `free`.
                let mut sub = free;
                loop {
                    let mut p = prefix.clone();
                    p.push(req | sub);
                    next.push(p);
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & free;
                }
            }
            sets_so_far = next;
        }
        out.clear();
        for i in &ints_so_far {
            for s in &sets_so_far {
                out.push(Assignment::new(i.clone(), s.clone()));
            }
        }
        out
    }
}

/// A random constraint over the micro-instance's variables. Returns `None`
/// when the instance lacks the variables the chosen kind needs.
pub fn random_constraint<R: Rng>(rng: &mut R, micro: &Micro) -> Option<Constraint> {
    let ints = &micro.ints;
    let sets = &micro.sets;
    let pick_i = |rng: &mut R| ints[rng.gen_range(0..ints.len())];
    let pick_s = |rng: &mut R| sets[rng.gen_range(0..sets.len())];
    let u = micro.universe as u32;
    Some(match rng.gen_range(0..11) {
        0 if !ints.is_empty() => Constraint::IntEq {
            x: pick_i(rng),
            value: rng.gen_range(0..4),
        },
        1 if !ints.is_empty() => Constraint::IntNe {
            x: pick_i(rng),
            value: rng.gen_range(0..4),
        },
        2 if !sets.is_empty() => Constraint::CardLe {
            set: pick_s(rng),
            bound: rng.gen_range(0..=u),
        },
        3 if sets.len() >= 2 => Constraint::UnionEq {
            sets: sets.clone(),
            universe: rng.gen_range(0..1u64 << u),
        },
        4 if sets.len() >= 3 => Constraint::Intersection {
            x: sets[0],
            y: sets[1],
            z: sets[2],
        },
        5 if !ints.is_empty() && !sets.is_empty() && u >= 2 => Constraint::PairInSet {
            flag: pick_i(rng),
            u: 0,
            v: 1,
            set: pick_s(rng),
        },
        6 if !ints.is_empty() => Constraint::AtLeastOne {
            flags: ints.clone(),
        },
        7 if ints.len() >= 4 => Constraint::ParentDepth {
            node: 1,
            parent: ints[0],
            depth: ints[2],
            depths: ints[1..4].to_vec(),
        },
        8 if ints.len() >= 3 && sets.len() >= 3 => Constraint::GuardedSubset {
            depth_i: ints[0],
            depth_k: ints[1],
            shared: sets[0],
            parent_k: ints[2],
            sets: sets[1..].to_vec(),
        },
        9 if ints.len() >= 2 => {
            let half = ints.len() / 2;
            Constraint::LexLe {
                a: ints[..half].to_vec(),
                b: ints[half..2 * half].to_vec(),
            }
        }
        10 if !sets.is_empty() && ints.len() >= micro.universe => Constraint::BitChannel {
            set: sets[0],
            bits: ints[..micro.universe].to_vec(),
        },
        _ => return None,
    })
}

/// Outcome of checking one propagator against exhaustive enumeration.
#[derive(Debug)]
pub enum SupportCheck {
    Sound,
    /// The filter removed a value that some solution uses.
    Removed(String),
}

/// Posts `c`, propagates, and checks that no solution-supported value was
/// pruned (and that failure only happens when there is no solution).
pub fn check_support(mut micro: Micro, c: Constraint) -> SupportCheck {
    let solutions: Vec<Assignment> = micro
        .assignments()
        .into_iter()
        .filter(|a| c.holds(a))
        .collect();
    micro.model.post(c.clone());
    let result = micro.model.propagate_fixpoint();
    if result.is_err() {
        return if solutions.is_empty() {
            SupportCheck::Sound
        } else {
            SupportCheck::Removed(format!("{c:?}: failed with {} solutions", solutions.len()))
        };
    }
    let store = micro.model.store();
    for a in &solutions {
        for &x in &micro.ints {
            if !store.contains(x, a.int(x)) {
                return SupportCheck::Removed(format!("{c:?}: removed {} from {x:?}", a.int(x)));
            }
        }
        for &s in &micro.sets {
            let v = a.set(s);
            if store.required(s) & !v != 0 || v & !store.possible(s) != 0 {
                return SupportCheck::Removed(format!("{c:?}: excluded value {v:#b} of {s:?}"));
            }
        }
    }
    SupportCheck::Sound
}
