//! The tree-decomposition model for one decision instance `(G, m, w)`.
//!
//! Variables per instance:
//!
//! * `nodes[i]`: the vertex set of tree node `i` (a set variable over `0..n`);
//! * `parent[i]`, `depth[i]`: rooted-tree encoding with node 0 as the root;
//! * `location[e][k]`: 0/1, edge `e` lies inside node `k` (one variable per
//!   unordered edge, shared by both orientations);
//! * `intersection(i, j)`: `nodes[i] ∩ nodes[j]`, one variable per unordered
//!   pair, aliased for both orders;
//! * `bits[i][v]`: characteristic vector of `nodes[i]`, only present when
//!   symmetry breaking is on.

#![allow(clippy::needless_range_loop)]

use thiserror::Error;

use crate::decomposition::TreeDecomposition;
use crate::engine::{Assignment, Constraint, IntVar, Model, SetVar, MAX_UNIVERSE, MAX_VALUE};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    #[default]
    Tree,
    /// Path decompositions: node `i` hangs below node `i - 1`.
    Path,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelOptions {
    /// Channel nodes to bit vectors and order them lexicographically.
    pub symmetry_breaking: bool,
}

impl Default for ModelOptions {
    fn default() -> Self {
        Self {
            symmetry_breaking: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("node count must be at least 1")]
    NoNodes,
    #[error("width bound must be at least 1")]
    NoWidth,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("{what} = {value} exceeds the supported maximum {max}")]
    TooLarge {
        what: &'static str,
        value: usize,
        max: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("witness does not match the model: {0}")]
pub struct ExtractError(String);

#[derive(Debug, Clone)]
pub struct ModelInstance {
    pub graph: Graph,
    pub m: usize,
    pub w: usize,
    pub variant: Variant,
    pub model: Model,
    pub nodes: Vec<SetVar>,
    pub parent: Vec<IntVar>,
    pub depth: Vec<IntVar>,
    /// `location[e][k]` for edge `graph.edges()[e]` and node `k`.
    pub location: Vec<Vec<IntVar>>,
    /// Dense `m × m` table; the diagonal is `None`, `(i, j)` and `(j, i)` share a variable.
    intersection: Vec<Vec<Option<SetVar>>>,
    pub bits: Vec<Vec<IntVar>>,
    lex_count: usize,
}

impl ModelInstance {
    pub fn intersection(&self, i: usize, j: usize) -> Option<SetVar> {
        self.intersection[i][j]
    }

    pub fn location_var_count(&self) -> usize {
        self.location.iter().map(Vec::len).sum()
    }

    pub fn intersection_var_count(&self) -> usize {
        let mut vars: Vec<_> = self.intersection.iter().flatten().flatten().collect();
        vars.sort();
        vars.dedup();
        vars.len()
    }

    pub fn lex_constraint_count(&self) -> usize {
        self.lex_count
    }
}

/// [`build_model_with`] using the default options.
pub fn build_model(
    g: &Graph,
    m: usize,
    w: usize,
    variant: Variant,
) -> Result<ModelInstance, ModelError> {
    build_model_with(g, m, w, variant, ModelOptions::default())
}

pub fn build_model_with(
    g: &Graph,
    m: usize,
    w: usize,
    variant: Variant,
    options: ModelOptions,
) -> Result<ModelInstance, ModelError> {
    let n = g.n();
    if m < 1 {
        return Err(ModelError::NoNodes);
    }
    if w < 1 {
        return Err(ModelError::NoWidth);
    }
    if n == 0 {
        return Err(ModelError::EmptyGraph);
    }
    if n > MAX_UNIVERSE {
        return Err(ModelError::TooLarge {
            what: "n",
            value: n,
            max: MAX_UNIVERSE,
        });
    }
    let max_m = MAX_VALUE as usize + 1;
    if m > max_m {
        return Err(ModelError::TooLarge {
            what: "m",
            value: m,
            max: max_m,
        });
    }
    let mu = m as u32;
    let mut model = Model::new();

    // Node sets first: membership fallback branching visits them in this order.
    let nodes: Vec<SetVar> = (0..m).map(|_| model.new_set(n)).collect();
    let mut intersection = vec![vec![None; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let z = model.new_set(n);
            intersection[i][j] = Some(z);
            intersection[j][i] = Some(z);
        }
    }
    let parent: Vec<IntVar> = (0..m).map(|_| model.new_int(0..mu)).collect();
    let depth: Vec<IntVar> = (0..m).map(|_| model.new_int(0..mu)).collect();
    let location: Vec<Vec<IntVar>> = g
        .edges()
        .iter()
        .map(|_| (0..m).map(|_| model.new_bool()).collect())
        .collect();

    let width = u32::try_from(w).unwrap_or(u32::MAX);
    for &set in &nodes {
        model.post(Constraint::CardLe { set, bound: width });
    }
    let vertices = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    model.post(Constraint::UnionEq {
        sets: nodes.clone(),
        universe: vertices,
    });
    for i in 0..m {
        for j in i + 1..m {
            model.post(Constraint::Intersection {
                x: nodes[i],
                y: nodes[j],
                z: intersection[i][j].expect("upper triangle allocated"),
            });
        }
    }

    // Rooted tree.
    model.post(Constraint::IntEq {
        x: parent[0],
        value: 0,
    });
    model.post(Constraint::IntEq {
        x: depth[0],
        value: 0,
    });
    for i in 1..m {
        model.post(Constraint::IntNe {
            x: parent[i],
            value: i as u32,
        });
    }
    for i in 1..m {
        model.post(Constraint::ParentDepth {
            node: i as u32,
            parent: parent[i],
            depth: depth[i],
            depths: depth.clone(),
        });
    }

    // Every edge inside some node.
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        for k in 0..m {
            model.post(Constraint::PairInSet {
                flag: location[e][k],
                u: u as u32,
                v: v as u32,
                set: nodes[k],
            });
        }
        model.post(Constraint::AtLeastOne {
            flags: location[e].clone(),
        });
    }

    // Running intersection: the shallower (or equal-depth) node's overlap
    // with node k must sit in k's parent.
    for i in 0..m {
        for k in 0..m {
            if i == k {
                continue;
            }
            model.post(Constraint::GuardedSubset {
                depth_i: depth[i],
                depth_k: depth[k],
                shared: intersection[i][k].expect("off-diagonal allocated"),
                parent_k: parent[k],
                sets: nodes.clone(),
            });
        }
    }

    if variant == Variant::Path {
        for i in 1..m {
            model.post(Constraint::IntEq {
                x: parent[i],
                value: i as u32 - 1,
            });
        }
    }

    let mut bits = Vec::new();
    let mut lex_count = 0;
    if options.symmetry_breaking {
        bits = (0..m)
            .map(|_| (0..n).map(|_| model.new_bool()).collect::<Vec<_>>())
            .collect();
        for (i, row) in bits.iter().enumerate() {
            model.post(Constraint::BitChannel {
                set: nodes[i],
                bits: row.clone(),
            });
        }
        // Tree nodes can be freely renumbered, so consecutive rows are sorted.
        // A path only admits reversal, so only its two ends are compared.
        let pairs: Vec<(usize, usize)> = match variant {
            Variant::Tree => (1..m).map(|i| (i - 1, i)).collect(),
            Variant::Path if m >= 2 => vec![(0, m - 1)],
            Variant::Path => Vec::new(),
        };
        for (i, j) in pairs {
            model.post(Constraint::LexLe {
                a: bits[i].clone(),
                b: bits[j].clone(),
            });
            lex_count += 1;
        }
    }

    let mut decision_vars = parent.clone();
    decision_vars.extend(location.iter().flatten().copied());
    model.set_decision_vars(decision_vars);

    Ok(ModelInstance {
        graph: g.clone(),
        m,
        w,
        variant,
        model,
        nodes,
        parent,
        depth,
        location,
        intersection,
        bits,
        lex_count,
    })
}

/// Reads node sets, parents and depths out of a solved instance.
pub fn extract_decomposition(
    mi: &ModelInstance,
    witness: &Assignment,
) -> Result<TreeDecomposition, ExtractError> {
    let store = mi.model.store();
    if witness.ints.len() != store.int_count() || witness.sets.len() != store.set_count() {
        return Err(ExtractError(format!(
            "expected {} integer and {} set values, got {} and {}",
            store.int_count(),
            store.set_count(),
            witness.ints.len(),
            witness.sets.len()
        )));
    }
    let nodes = mi.nodes.iter().map(|&s| witness.set_members(s)).collect();
    let parent = mi.parent.iter().map(|&x| witness.int(x) as usize).collect();
    let depth = mi.depth.iter().map(|&x| witness.int(x) as usize).collect();
    Ok(TreeDecomposition {
        nodes,
        parent,
        depth,
    })
}
