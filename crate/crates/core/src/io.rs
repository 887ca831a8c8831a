//! PACE `.gr` / `.td` formats, a plain edge-list format, and DOT export.
//!
//! External files use 1-based vertex and node indices (except the edge-list
//! format, which is 0-based); everything in memory is 0-based. All index
//! conversion happens here.

use std::fmt::Write as _;

use thiserror::Error;

use crate::decomposition::TreeDecomposition;
use crate::graph::{Graph, GraphError};
use crate::validator::{validate, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing header")]
    MissingHeader,
    #[error("malformed header `{0}`")]
    BadHeader(String),
    #[error("duplicate header")]
    DuplicateHeader,
    #[error("malformed line `{0}`")]
    BadLine(String),
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("index {index} out of range {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("header declares {declared} edges but {found} were listed")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("header declares {declared} bags but {found} were listed")]
    BagCountMismatch { declared: usize, found: usize },
    #[error("bag {0} listed twice")]
    DuplicateBag(usize),
    #[error("tree edges do not form a tree over the bags")]
    NotATree,
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

/// Numbered, trimmed, non-blank, non-comment lines.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('c'))
}

fn parse_usizes(line: usize, s: &str) -> Result<Vec<usize>, ParseError> {
    s.split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| err(line, ParseErrorKind::BadLine(s.to_string())))
}

fn graph_error(line: usize, e: GraphError, one_based: bool) -> ParseError {
    let shift = usize::from(one_based);
    match e {
        GraphError::SelfLoop(v) => err(line, ParseErrorKind::SelfLoop(v + shift)),
        GraphError::VertexOutOfRange { vertex, n } => err(
            line,
            ParseErrorKind::VertexOutOfRange {
                vertex: vertex + shift,
                n,
            },
        ),
    }
}

/// Parses a PACE `.gr` document: `p tw <n> <m>` then one `<u> <v>` line per edge.
pub fn parse_gr(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut last_line = 0;
    for (line, content) in content_lines(text) {
        last_line = line;
        if content.starts_with('p') {
            if header.is_some() {
                return Err(err(line, ParseErrorKind::DuplicateHeader));
            }
            let parts: Vec<_> = content.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "tw", n, m] => n.parse().ok().zip(m.parse().ok()),
                _ => None,
            };
            header = Some(
                parsed.ok_or_else(|| err(line, ParseErrorKind::BadHeader(content.to_string())))?,
            );
            continue;
        }
        let Some((n, _)) = header else {
            return Err(err(line, ParseErrorKind::MissingHeader));
        };
        let nums = parse_usizes(line, content)?;
        let [u, v] = nums[..] else {
            return Err(err(line, ParseErrorKind::BadLine(content.to_string())));
        };
        for x in [u, v] {
            if x == 0 || x > n {
                return Err(err(line, ParseErrorKind::VertexOutOfRange { vertex: x, n }));
            }
        }
        if u == v {
            return Err(err(line, ParseErrorKind::SelfLoop(u)));
        }
        edges.push((line, u - 1, v - 1));
    }
    let Some((n, declared)) = header else {
        return Err(err(last_line.max(1), ParseErrorKind::MissingHeader));
    };
    if edges.len() != declared {
        return Err(err(
            last_line,
            ParseErrorKind::EdgeCountMismatch {
                declared,
                found: edges.len(),
            },
        ));
    }
    Graph::from_edges(n, edges.iter().map(|&(_, u, v)| (u, v)))
        .map_err(|e| graph_error(last_line, e, true))
}

/// Parses `<n>` followed by 0-based `<u> <v>` lines.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut lines = content_lines(text);
    let Some((first, header)) = lines.next() else {
        return Err(err(1, ParseErrorKind::MissingHeader));
    };
    let n: usize = header
        .parse()
        .map_err(|_| err(first, ParseErrorKind::BadHeader(header.to_string())))?;
    let mut edges = Vec::new();
    for (line, content) in lines {
        let nums = parse_usizes(line, content)?;
        let [u, v] = nums[..] else {
            return Err(err(line, ParseErrorKind::BadLine(content.to_string())));
        };
        Graph::from_edges(n, [(u, v)]).map_err(|e| graph_error(line, e, false))?;
        edges.push((u, v));
    }
    Ok(Graph::from_edges(n, edges).expect("edges checked line by line"))
}

/// Picks [`parse_gr`] when the first content line is a `p` header, otherwise
/// [`parse_edge_list`].
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    match content_lines(text).next() {
        Some((_, l)) if l.starts_with('p') => parse_gr(text),
        _ => parse_edge_list(text),
    }
}

/// Refusal to serialize a decomposition that does not fit its graph.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WriteError {
    #[error("decomposition is malformed: {0}")]
    Malformed(String),
    #[error("decomposition is invalid for the graph: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
}

fn join_violations(vs: &[Violation]) -> String {
    vs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

fn check(td: &TreeDecomposition, g: &Graph) -> Result<(), WriteError> {
    let violations =
        validate(g, td, None, None).map_err(|e| WriteError::Malformed(e.to_string()))?;
    if violations.is_empty() {
        Ok(())
    } else {
        Err(WriteError::Invalid(violations))
    }
}

/// Serializes a valid decomposition in PACE `.td` format.
pub fn write_td(td: &TreeDecomposition, g: &Graph) -> Result<String, WriteError> {
    check(td, g)?;
    let mut out = String::new();
    writeln!(out, "s td {} {} {}", td.m(), td.width(), g.n()).unwrap();
    for (i, bag) in td.nodes.iter().enumerate() {
        let mut sorted = bag.clone();
        sorted.sort_unstable();
        write!(out, "b {}", i + 1).unwrap();
        for v in sorted {
            write!(out, " {}", v + 1).unwrap();
        }
        out.push('\n');
    }
    for (p, c) in td.tree_edges() {
        writeln!(out, "{} {}", p + 1, c + 1).unwrap();
    }
    Ok(out)
}

/// Parses a PACE `.td` document and roots the tree at bag 1.
///
/// Returns the decomposition together with the vertex count from the header.
/// Bag contents are range-checked against that count; whether the
/// decomposition fits a particular graph is the validator's job.
pub fn parse_td(text: &str) -> Result<(TreeDecomposition, usize), ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut edges = Vec::new();
    let mut last_line = 0;
    for (line, content) in content_lines(text) {
        last_line = line;
        if content.starts_with('s') {
            if header.is_some() {
                return Err(err(line, ParseErrorKind::DuplicateHeader));
            }
            let parts: Vec<_> = content.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["s", "td", m, _w, n] => m.parse().ok().zip(n.parse().ok()),
                _ => None,
            };
            let (m, n) =
                parsed.ok_or_else(|| err(line, ParseErrorKind::BadHeader(content.to_string())))?;
            bags = vec![None; m];
            header = Some((m, n));
            continue;
        }
        let Some((m, n)) = header else {
            return Err(err(line, ParseErrorKind::MissingHeader));
        };
        if let Some(rest) = content.strip_prefix('b') {
            let nums = parse_usizes(line, rest)?;
            let Some((&id, verts)) = nums.split_first() else {
                return Err(err(line, ParseErrorKind::BadLine(content.to_string())));
            };
            if id == 0 || id > m {
                return Err(err(
                    line,
                    ParseErrorKind::IndexOutOfRange {
                        index: id,
                        lo: 1,
                        hi: m,
                    },
                ));
            }
            if bags[id - 1].is_some() {
                return Err(err(line, ParseErrorKind::DuplicateBag(id)));
            }
            let mut bag = Vec::with_capacity(verts.len());
            for &v in verts {
                if v == 0 || v > n {
                    return Err(err(line, ParseErrorKind::VertexOutOfRange { vertex: v, n }));
                }
                bag.push(v - 1);
            }
            bags[id - 1] = Some(bag);
        } else {
            let nums = parse_usizes(line, content)?;
            let [a, b] = nums[..] else {
                return Err(err(line, ParseErrorKind::BadLine(content.to_string())));
            };
            for x in [a, b] {
                if x == 0 || x > m {
                    return Err(err(
                        line,
                        ParseErrorKind::IndexOutOfRange {
                            index: x,
                            lo: 1,
                            hi: m,
                        },
                    ));
                }
            }
            edges.push((a - 1, b - 1));
        }
    }
    let Some((_, n)) = header else {
        return Err(err(last_line.max(1), ParseErrorKind::MissingHeader));
    };
    let found = bags.iter().filter(|b| b.is_some()).count();
    if found != bags.len() {
        return Err(err(
            last_line,
            ParseErrorKind::BagCountMismatch {
                declared: bags.len(),
                found,
            },
        ));
    }
    let nodes = bags.into_iter().map(Option::unwrap).collect();
    let td = TreeDecomposition::from_tree_edges(nodes, &edges)
        .map_err(|_| err(last_line, ParseErrorKind::NotATree))?;
    Ok((td, n))
}

fn bag_label(bag: &[usize]) -> String {
    let inner: Vec<_> = bag.iter().map(|v| (v + 1).to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

/// Renders the graph, and optionally a decomposition of it, as a DOT digraph.
///
/// Graph edges are drawn without arrowheads; each decomposition node is a box
/// labelled with its (1-based) vertex set and has an arc to its parent.
pub fn export_dot(g: &Graph, td: Option<&TreeDecomposition>) -> Result<String, WriteError> {
    if let Some(td) = td {
        check(td, g)?;
    }
    let mut out = String::new();
    out.push_str("digraph decomposition {\n");
    out.push_str("  subgraph cluster_graph {\n");
    writeln!(
        out,
        "    label=\"G: n = {}, |E| = {}\";",
        g.n(),
        g.edge_count()
    )
    .unwrap();
    out.push_str("    node [shape=circle];\n");
    for v in 0..g.n() {
        writeln!(out, "    v{} [label=\"{}\"];", v + 1, v + 1).unwrap();
    }
    for &(u, v) in g.edges() {
        writeln!(out, "    v{} -> v{} [dir=none];", u + 1, v + 1).unwrap();
    }
    out.push_str("  }\n");
    if let Some(td) = td {
        out.push_str("  subgraph cluster_td {\n");
        writeln!(out, "    label=\"m = {}, w = {}\";", td.m(), td.width()).unwrap();
        out.push_str("    node [shape=box];\n");
        for (i, bag) in td.nodes.iter().enumerate() {
            writeln!(out, "    t{} [label=\"{}\"];", i + 1, bag_label(bag)).unwrap();
        }
        for (p, c) in td.tree_edges() {
            writeln!(out, "    t{} -> t{};", c + 1, p + 1).unwrap();
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    Ok(out)
}
