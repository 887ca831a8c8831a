//! Brute-force ground truth for small graphs.
//!
//! Treewidth comes from exhaustive search over elimination orders, pathwidth
//! from the vertex separation number. Neither shares code with the
//! constraint model. Widths are node sizes (treewidth + 1), like the rest of
//! the crate.

use thiserror::Error;

use crate::decomposition::TreeDecomposition;
use crate::exec::Execution;
use crate::graph::Graph;

pub const DEFAULT_TREEWIDTH_LIMIT: usize = 9;
pub const DEFAULT_PATHWIDTH_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has {n} vertices, oracle limit is {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("not a permutation of 0..{n}")]
    BadOrder { n: usize },
}

/// A permutation of the vertices, first-eliminated first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EliminationOrder(Vec<usize>);

impl EliminationOrder {
    pub fn new(order: Vec<usize>) -> Result<Self, OracleError> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n || seen[v] {
                return Err(OracleError::BadOrder { n });
            }
            seen[v] = true;
        }
        Ok(Self(order))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

fn adjacency_masks(g: &Graph) -> Vec<u64> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u64, |acc, &u| acc | 1 << u))
        .collect()
}

/// Eliminates `v` from the working adjacency: its remaining neighbours become
/// a clique. Returns the neighbourhood at elimination time.
fn eliminate(adj: &mut [u64], v: usize) -> u64 {
    let nb = adj[v];
    let mut rest = nb;
    while rest != 0 {
        let u = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        adj[u] |= nb & !(1 << u);
        adj[u] &= !(1 << v);
    }
    adj[v] = 0;
    nb
}

/// Largest `1 + remaining degree` met while eliminating along `order`.
pub fn elimination_width(g: &Graph, order: &EliminationOrder) -> Result<usize, OracleError> {
    if order.0.len() != g.n() {
        return Err(OracleError::BadOrder { n: g.n() });
    }
    check_size(g.n(), 64)?;
    let mut adj = adjacency_masks(g);
    Ok(order
        .0
        .iter()
        .map(|&v| 1 + eliminate(&mut adj, v).count_ones() as usize)
        .max()
        .unwrap_or(0))
}

fn check_size(n: usize, limit: usize) -> Result<(), OracleError> {
    if n > limit {
        Err(OracleError::TooLarge { n, limit })
    } else {
        Ok(())
    }
}

/// Result of the exhaustive treewidth search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreewidthCertificate {
    pub min_width: usize,
    pub order: EliminationOrder,
    pub decomposition: TreeDecomposition,
}

struct Branch {
    best: usize,
    best_order: Vec<usize>,
}

fn explore(
    adj: &mut Vec<u64>,
    remaining: u64,
    running: usize,
    prefix: &mut Vec<usize>,
    b: &mut Branch,
) {
    if remaining == 0 {
        if running < b.best {
            b.best = running;
            b.best_order = prefix.clone();
        }
        return;
    }
    let mut rest = remaining;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let cost = 1 + (adj[v] & remaining).count_ones() as usize;
        let next = running.max(cost);
        if next >= b.best {
            continue;
        }
        let saved = adj.clone();
        eliminate(adj, v);
        prefix.push(v);
        explore(adj, remaining & !(1 << v), next, prefix, b);
        prefix.pop();
        *adj = saved;
    }
}

/// Minimum width over all elimination orders, with an optimal order and the
/// decomposition it induces.
pub fn brute_treewidth(g: &Graph) -> Result<TreewidthCertificate, OracleError> {
    brute_treewidth_with(g, DEFAULT_TREEWIDTH_LIMIT, Execution::Sequential)
}

/// As [`brute_treewidth`], with a vertex limit and the first elimination
/// choice optionally spread across threads. The result does not depend on
/// the execution mode.
pub fn brute_treewidth_with(
    g: &Graph,
    limit: usize,
    exec: Execution,
) -> Result<TreewidthCertificate, OracleError> {
    let n = g.n();
    check_size(n, limit.min(64))?;
    if n == 0 {
        let decomposition =
            TreeDecomposition::from_parents(vec![vec![]], vec![0]).expect("one node");
        return Ok(TreewidthCertificate {
            min_width: 0,
            order: EliminationOrder(vec![]),
            decomposition,
        });
    }
    let adj = adjacency_masks(g);
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let per_first = exec.map_indices(n, |first| {
        let mut adj = adj.clone();
        let cost = 1 + adj[first].count_ones() as usize;
        eliminate(&mut adj, first);
        let mut b = Branch {
            best: n + 1,
            best_order: Vec::new(),
        };
        let mut prefix = vec![first];
        explore(&mut adj, all & !(1 << first), cost, &mut prefix, &mut b);
        (b.best, b.best_order)
    });
    let (min_width, order) = per_first
        .into_iter()
        .min_by_key(|(w, _)| *w)
        .expect("at least one vertex");
    let order = EliminationOrder(order);
    let decomposition = decomposition_from_order(g, &order);
    Ok(TreewidthCertificate {
        min_width,
        order,
        decomposition,
    })
}

/// Builds the decomposition induced by an elimination order: one node per
/// vertex holding the vertex and its neighbours at elimination time, hung
/// below the node of the earliest-eliminated of those neighbours. The node of
/// the last-eliminated vertex is the root (index 0).
pub fn decomposition_from_order(g: &Graph, order: &EliminationOrder) -> TreeDecomposition {
    let n = g.n();
    let mut adj = adjacency_masks(g);
    let mut position = vec![0; n];
    for (i, &v) in order.0.iter().enumerate() {
        position[v] = i;
    }
    // Node index for the vertex eliminated at step i is n - 1 - i.
    let mut nodes = vec![Vec::new(); n];
    let mut parent = vec![0; n];
    for (i, &v) in order.0.iter().enumerate() {
        let nb = eliminate(&mut adj, v);
        let mut bag = vec![v];
        let mut next: Option<usize> = None;
        let mut rest = nb;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            bag.push(u);
            if next.is_none_or(|x| position[u] < position[x]) {
                next = Some(u);
            }
        }
        let idx = n - 1 - i;
        nodes[idx] = bag;
        parent[idx] = match next {
            Some(u) => n - 1 - position[u],
            // No later neighbours: attach to the next node in the order.
            None if i + 1 < n => idx - 1,
            None => 0,
        };
    }
    TreeDecomposition::from_parents(nodes, parent).expect("elimination tree is rooted at node 0")
}

/// Minimum path-decomposition width: one more than the vertex separation
/// number, computed over all vertex orderings by dynamic programming on the
/// set of already-placed vertices.
pub fn brute_pathwidth(g: &Graph) -> Result<usize, OracleError> {
    brute_pathwidth_with(g, DEFAULT_PATHWIDTH_LIMIT)
}

pub fn brute_pathwidth_with(g: &Graph, limit: usize) -> Result<usize, OracleError> {
    let n = g.n();
    check_size(n, limit.min(20))?;
    if n == 0 {
        return Ok(0);
    }
    let adj = adjacency_masks(g);
    let full = (1usize << n) - 1;
    // best[s]: smallest achievable max boundary over orderings that place s first.
    let mut best = vec![usize::MAX; 1 << n];
    best[0] = 0;
    for placed in 0..=full {
        let cur = best[placed];
        if cur == usize::MAX {
            continue;
        }
        for v in 0..n {
            if placed & (1 << v) != 0 {
                continue;
            }
            let next = placed | (1 << v);
            let boundary = (0..n)
                .filter(|&u| next & (1 << u) != 0 && (adj[u] as usize) & !next & full != 0)
                .count();
            let cost = cur.max(boundary);
            if cost < best[next] {
                best[next] = cost;
            }
        }
    }
    Ok(best[full] + 1)
}
