//! Rooted tree decompositions.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("a decomposition needs at least one node")]
    NoNodes,
    #[error("{nodes} nodes but {parents} parent entries")]
    LengthMismatch { nodes: usize, parents: usize },
    #[error("node {node} does not reach the root")]
    Detached { node: usize },
}

/// A tree decomposition rooted at node 0.
///
/// `parent[0] == 0` marks the root; every other node points at its parent and
/// sits one level deeper. Node contents are sorted vertex lists. Fields are
/// public so that callers can build arbitrary (possibly broken) candidates for
/// the validator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreeDecomposition {
    pub nodes: Vec<Vec<usize>>,
    pub parent: Vec<usize>,
    pub depth: Vec<usize>,
}

impl TreeDecomposition {
    /// Builds a decomposition from node contents and a parent array, deriving
    /// the depths. Node contents are sorted and deduplicated.
    pub fn from_parents(nodes: Vec<Vec<usize>>, parent: Vec<usize>) -> Result<Self, ShapeError> {
        if nodes.is_empty() {
            return Err(ShapeError::NoNodes);
        }
        if nodes.len() != parent.len() {
            return Err(ShapeError::LengthMismatch {
                nodes: nodes.len(),
                parents: parent.len(),
            });
        }
        let m = nodes.len();
        let mut depth = vec![usize::MAX; m];
        if parent[0] != 0 {
            return Err(ShapeError::Detached { node: 0 });
        }
        depth[0] = 0;
        for start in 1..m {
            // Walk up until a node with known depth; more than m steps means a cycle.
            let mut chain = Vec::new();
            let mut cur = start;
            while depth[cur] == usize::MAX {
                if chain.len() > m || parent[cur] >= m || parent[cur] == cur {
                    return Err(ShapeError::Detached { node: start });
                }
                chain.push(cur);
                cur = parent[cur];
            }
            let mut d = depth[cur];
            for &node in chain.iter().rev() {
                d += 1;
                depth[node] = d;
            }
        }
        let nodes = nodes
            .into_iter()
            .map(|mut bag| {
                bag.sort_unstable();
                bag.dedup();
                bag
            })
            .collect();
        Ok(Self {
            nodes,
            parent,
            depth,
        })
    }

    /// Roots an undirected tree given as an edge list at node 0.
    pub fn from_tree_edges(
        nodes: Vec<Vec<usize>>,
        edges: &[(usize, usize)],
    ) -> Result<Self, ShapeError> {
        let m = nodes.len();
        if m == 0 {
            return Err(ShapeError::NoNodes);
        }
        let mut adjacency = vec![Vec::new(); m];
        for &(a, b) in edges {
            if a >= m || b >= m || a == b {
                return Err(ShapeError::Detached {
                    node: a.max(b).min(m - 1),
                });
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        let mut parent = vec![usize::MAX; m];
        parent[0] = 0;
        let mut queue = std::collections::VecDeque::from([0]);
        let mut visited = 1;
        while let Some(u) = queue.pop_front() {
            adjacency[u].sort_unstable();
            for &v in &adjacency[u] {
                if parent[v] == usize::MAX {
                    parent[v] = u;
                    visited += 1;
                    queue.push_back(v);
                }
            }
        }
        if visited != m || edges.len() != m - 1 {
            let node = parent.iter().position(|&p| p == usize::MAX).unwrap_or(0);
            return Err(ShapeError::Detached { node });
        }
        Self::from_parents(nodes, parent)
    }

    /// Number of nodes.
    pub fn m(&self) -> usize {
        self.nodes.len()
    }

    /// Size of the largest node.
    pub fn width(&self) -> usize {
        self.nodes.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `(parent, child)` pairs for every non-root node, in child order.
    pub fn tree_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..self.m()).map(move |i| (self.parent[i], i))
    }

    pub fn has_duplicate_nodes(&self) -> bool {
        let mut sorted: Vec<_> = self.nodes.iter().collect();
        sorted.sort();
        sorted.windows(2).any(|w| w[0] == w[1])
    }
}
