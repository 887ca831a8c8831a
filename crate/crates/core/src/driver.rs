//! Treewidth and pathwidth as a sequence of decision problems.
//!
//! The schedule runs `(m, w) = (1, n), (2, n - 1), ...`, growing the node
//! count while shrinking the width bound, and stops at the first step that is
//! not satisfiable (or once `w` reaches 1). The last satisfiable width is the
//! minimum width; treewidth is one less.

use thiserror::Error;

use crate::decomposition::TreeDecomposition;
use crate::engine::{search, Limits, SolveReport, SolveStatus, Strategy};
use crate::exec::Execution;
use crate::graph::Graph;
use crate::model::{build_model_with, extract_decomposition, ModelError, ModelOptions, Variant};
use crate::validator::{validate, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Sat,
    Unsat,
    /// A decision or time limit was reached.
    Indeterminate,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Outcome::Sat => "SAT",
            Outcome::Unsat => "UNSAT",
            Outcome::Indeterminate => "INDETERMINATE",
        })
    }
}

#[derive(Debug, Clone)]
pub struct DriverConfig {
    /// Stop at `w = 2` instead of `w = 1`.
    pub strict_paper_schedule: bool,
    pub symmetry_breaking: bool,
    pub strategy: Strategy,
    /// Per-step caps.
    pub limits: Limits,
    /// Run every schedule step at once instead of stopping at the first failure.
    pub concurrent: bool,
}

impl Default for DriverConfig {
    fn default() -> Self {
        Self {
            strict_paper_schedule: false,
            symmetry_breaking: true,
            strategy: Strategy::default(),
            limits: Limits::default(),
            concurrent: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DriverError {
    #[error(transparent)]
    Model(#[from] ModelError),
    /// The solver produced a witness the validator rejects.
    #[error("solver witness failed validation: {0:?}")]
    InvalidWitness(Vec<Violation>),
}

#[derive(Debug, Clone)]
pub struct ScheduleStep {
    pub m: usize,
    pub w: usize,
    pub outcome: Outcome,
    pub report: SolveReport,
    pub witness: Option<TreeDecomposition>,
}

#[derive(Debug, Clone)]
pub struct WidthResult {
    pub variant: Variant,
    /// Size of the largest node in the best decomposition found.
    pub min_width: usize,
    /// `min_width - 1`: the treewidth, or pathwidth for [`Variant::Path`].
    pub treewidth: usize,
    pub witness: TreeDecomposition,
    pub trace: Vec<ScheduleStep>,
    /// False when a limit cut the schedule short, in which case `min_width`
    /// is only an upper bound.
    pub optimal: bool,
}

/// Solves one decision instance and validates any witness.
pub fn decide(
    g: &Graph,
    m: usize,
    w: usize,
    variant: Variant,
    config: &DriverConfig,
) -> Result<ScheduleStep, DriverError> {
    let options = ModelOptions {
        symmetry_breaking: config.symmetry_breaking,
    };
    let mut mi = build_model_with(g, m, w, variant, options)?;
    let mut report = search(&mut mi.model, &config.strategy, &config.limits);
    let outcome = match report.status {
        SolveStatus::Sat => Outcome::Sat,
        SolveStatus::Unsat => Outcome::Unsat,
        SolveStatus::Indeterminate => Outcome::Indeterminate,
    };
    let witness = match report.witness.take() {
        Some(a) => {
            let td = extract_decomposition(&mi, &a).expect("witness comes from this model");
            let violations =
                validate(g, &td, Some(m), Some(w)).expect("extracted shape is well formed");
            if !violations.is_empty() {
                return Err(DriverError::InvalidWitness(violations));
            }
            report.witness = Some(a);
            Some(td)
        }
        None => None,
    };
    Ok(ScheduleStep {
        m,
        w,
        outcome,
        report,
        witness,
    })
}

/// Node counts and widths visited by the schedule for `n` vertices.
pub fn schedule(n: usize, strict_paper_schedule: bool) -> Vec<(usize, usize)> {
    let last_w = if strict_paper_schedule { 2.min(n) } else { 1 };
    (0..n)
        .map(|i| (i + 1, n - i))
        .take_while(|&(_, w)| w >= last_w)
        .collect()
}

pub fn treewidth(g: &Graph) -> Result<WidthResult, DriverError> {
    width(g, Variant::Tree, &DriverConfig::default())
}

pub fn pathwidth(g: &Graph) -> Result<WidthResult, DriverError> {
    width(g, Variant::Path, &DriverConfig::default())
}

/// Runs the full schedule for either variant.
pub fn width(
    g: &Graph,
    variant: Variant,
    config: &DriverConfig,
) -> Result<WidthResult, DriverError> {
    let n = g.n();
    if n == 0 {
        return Err(ModelError::EmptyGraph.into());
    }
    let steps = schedule(n, config.strict_paper_schedule);
    let trace = if config.concurrent {
        let results = Execution::Parallel.map(&steps, |&(m, w)| decide(g, m, w, variant, config));
        let mut trace = Vec::new();
        for r in results {
            let step = r?;
            let stop = step.outcome != Outcome::Sat;
            trace.push(step);
            if stop {
                break;
            }
        }
        trace
    } else {
        let mut trace = Vec::new();
        for &(m, w) in &steps {
            let step = decide(g, m, w, variant, config)?;
            let stop = step.outcome != Outcome::Sat;
            trace.push(step);
            if stop {
                break;
            }
        }
        trace
    };

    let last_sat = trace.iter().rev().find(|s| s.outcome == Outcome::Sat);
    let (min_width, witness) = match last_sat {
        Some(step) => (
            step.w,
            step.witness.clone().expect("SAT step carries a witness"),
        ),
        None => {
            // Only reachable when limits stop the trivial first step.
            let all: Vec<usize> = (0..n).collect();
            let td = TreeDecomposition::from_parents(vec![all], vec![0]).expect("single node");
            (n, td)
        }
    };
    let optimal = trace.iter().all(|s| s.outcome != Outcome::Indeterminate);
    Ok(WidthResult {
        variant,
        min_width,
        treewidth: min_width - 1,
        witness,
        trace,
        optimal,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("width {w} outside 1..={n}")]
pub struct BoundError {
    pub n: usize,
    pub w: usize,
}

/// Largest node count of a duplicate-free decomposition of width `w` on `n`
/// vertices: every non-root node must bring in a vertex not seen above it.
pub fn max_nodes_bound(n: usize, w: usize) -> Result<usize, BoundError> {
    if w == 0 || w > n {
        return Err(BoundError { n, w });
    }
    Ok(n - w + 1)
}
