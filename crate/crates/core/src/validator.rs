//! Independent checker for tree decompositions.
//!
//! Checks run in a fixed order (tree shape, foreign vertices, coverage, edges,
//! connectedness, width, node count) and every violation found is reported.
//! Nothing here depends on the constraint solver.

#![allow(clippy::needless_range_loop)]

use std::fmt;

use thiserror::Error;

use crate::decomposition::TreeDecomposition;
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    Coverage,
    Edge,
    Connectedness,
    TreeShape,
    Width,
    NodeCount,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Coverage => "COVERAGE",
            Self::Edge => "EDGE",
            Self::Connectedness => "CONNECTEDNESS",
            Self::TreeShape => "TREE_SHAPE",
            Self::Width => "WIDTH",
            Self::NodeCount => "NODE_COUNT",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShapeIssue {
    /// The root (node 0) must be its own parent.
    RootParent,
    /// A non-root node names itself as parent.
    SelfParent,
    ParentOutOfRange,
    /// The node's depth is not one more than its parent's (or the root is not at 0).
    Depth,
    /// Following parents from this node never reaches the root.
    Unrooted,
}

/// One failed property, with indices into the graph or decomposition (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Violation {
    TreeShape {
        node: usize,
        issue: ShapeIssue,
    },
    /// A node holds a vertex outside `0..n`.
    ForeignVertex {
        node: usize,
        vertex: usize,
    },
    /// The vertex appears in no node.
    Uncovered {
        vertex: usize,
    },
    /// No node holds both endpoints.
    Edge {
        u: usize,
        v: usize,
    },
    /// The nodes holding `vertex` split into `components` pieces.
    Connectedness {
        vertex: usize,
        components: usize,
    },
    Width {
        node: usize,
        size: usize,
        bound: usize,
    },
    NodeCount {
        actual: usize,
        expected: usize,
    },
}

impl Violation {
    pub fn kind(&self) -> ViolationKind {
        match self {
            Self::TreeShape { .. } => ViolationKind::TreeShape,
            Self::ForeignVertex { .. } | Self::Uncovered { .. } => ViolationKind::Coverage,
            Self::Edge { .. } => ViolationKind::Edge,
            Self::Connectedness { .. } => ViolationKind::Connectedness,
            Self::Width { .. } => ViolationKind::Width,
            Self::NodeCount { .. } => ViolationKind::NodeCount,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.kind())?;
        // Reported 1-based, like the file formats.
        match *self {
            Self::TreeShape { node, issue } => {
                let what = match issue {
                    ShapeIssue::RootParent => "root is not its own parent",
                    ShapeIssue::SelfParent => "non-root node is its own parent",
                    ShapeIssue::ParentOutOfRange => "parent index out of range",
                    ShapeIssue::Depth => "depth inconsistent with parent",
                    ShapeIssue::Unrooted => "does not reach the root",
                };
                write!(f, "node {}: {what}", node + 1)
            }
            Self::ForeignVertex { node, vertex } => {
                write!(f, "node {} holds unknown vertex {}", node + 1, vertex + 1)
            }
            Self::Uncovered { vertex } => write!(f, "vertex {} is in no node", vertex + 1),
            Self::Edge { u, v } => write!(f, "edge ({}, {}) is in no node", u + 1, v + 1),
            Self::Connectedness { vertex, components } => write!(
                f,
                "nodes holding vertex {} form {components} disconnected pieces",
                vertex + 1
            ),
            Self::Width { node, size, bound } => {
                write!(f, "node {} has {size} vertices, bound is {bound}", node + 1)
            }
            Self::NodeCount { actual, expected } => {
                write!(f, "{actual} nodes, expected {expected}")
            }
        }
    }
}

/// The candidate is too malformed to check at all.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("decomposition has no nodes")]
    Empty,
    #[error("{nodes} nodes, {parents} parent entries, {depths} depth entries")]
    LengthMismatch {
        nodes: usize,
        parents: usize,
        depths: usize,
    },
}

/// Checks `td` against `g`, optionally also against an exact node count and a
/// width bound. An empty list means the decomposition is valid.
pub fn validate(
    g: &Graph,
    td: &TreeDecomposition,
    expect_m: Option<usize>,
    expect_w: Option<usize>,
) -> Result<Vec<Violation>, StructureError> {
    let m = td.nodes.len();
    if m == 0 {
        return Err(StructureError::Empty);
    }
    if td.parent.len() != m || td.depth.len() != m {
        return Err(StructureError::LengthMismatch {
            nodes: m,
            parents: td.parent.len(),
            depths: td.depth.len(),
        });
    }
    let n = g.n();
    let mut out = Vec::new();

    check_shape(td, &mut out);

    let mut member = vec![vec![false; n]; m];
    for (i, bag) in td.nodes.iter().enumerate() {
        for &v in bag {
            if v < n {
                member[i][v] = true;
            } else {
                out.push(Violation::ForeignVertex { node: i, vertex: v });
            }
        }
    }

    for v in 0..n {
        if !(0..m).any(|i| member[i][v]) {
            out.push(Violation::Uncovered { vertex: v });
        }
    }

    for &(u, v) in g.edges() {
        if !(0..m).any(|i| member[i][u] && member[i][v]) {
            out.push(Violation::Edge { u, v });
        }
    }

    // Tree adjacency, ignoring malformed parent entries.
    let mut adjacent = vec![Vec::new(); m];
    for i in 1..m {
        let p = td.parent[i];
        if p < m && p != i {
            adjacent[i].push(p);
            adjacent[p].push(i);
        }
    }
    for v in 0..n {
        let components = count_components(&adjacent, |i| member[i][v]);
        if components > 1 {
            out.push(Violation::Connectedness {
                vertex: v,
                components,
            });
        }
    }

    if let Some(bound) = expect_w {
        for (i, bag) in td.nodes.iter().enumerate() {
            let size = distinct_len(bag);
            if size > bound {
                out.push(Violation::Width {
                    node: i,
                    size,
                    bound,
                });
            }
        }
    }

    if let Some(expected) = expect_m {
        if expected != m {
            out.push(Violation::NodeCount {
                actual: m,
                expected,
            });
        }
    }

    Ok(out)
}

fn distinct_len(bag: &[usize]) -> usize {
    let mut b = bag.to_vec();
    b.sort_unstable();
    b.dedup();
    b.len()
}

fn check_shape(td: &TreeDecomposition, out: &mut Vec<Violation>) {
    let m = td.nodes.len();
    if td.parent[0] != 0 {
        out.push(Violation::TreeShape {
            node: 0,
            issue: ShapeIssue::RootParent,
        });
    }
    if td.depth[0] != 0 {
        out.push(Violation::TreeShape {
            node: 0,
            issue: ShapeIssue::Depth,
        });
    }
    for i in 1..m {
        let p = td.parent[i];
        let issue = if p == i {
            Some(ShapeIssue::SelfParent)
        } else if p >= m {
            Some(ShapeIssue::ParentOutOfRange)
        } else if td.depth[i] != td.depth[p] + 1 {
            Some(ShapeIssue::Depth)
        } else {
            None
        };
        if let Some(issue) = issue {
            out.push(Violation::TreeShape { node: i, issue });
        }
    }
    // Reachability of the root by following parent pointers at most m steps.
    for i in 1..m {
        let mut cur = i;
        let mut steps = 0;
        while cur != 0 && steps <= m {
            let p = td.parent[cur];
            if p >= m || p == cur {
                break;
            }
            cur = p;
            steps += 1;
        }
        if cur != 0 {
            out.push(Violation::TreeShape {
                node: i,
                issue: ShapeIssue::Unrooted,
            });
        }
    }
}

fn count_components(adjacent: &[Vec<usize>], keep: impl Fn(usize) -> bool) -> usize {
    let m = adjacent.len();
    let mut seen = vec![false; m];
    let mut components = 0;
    for start in 0..m {
        if seen[start] || !keep(start) {
            continue;
        }
        components += 1;
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &x in &adjacent[u] {
                if !seen[x] && keep(x) {
                    seen[x] = true;
                    stack.push(x);
                }
            }
        }
    }
    components
}
