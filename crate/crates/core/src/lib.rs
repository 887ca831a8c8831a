//! Exact treewidth and pathwidth through a constraint model over set variables.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`], [`decomposition`] and [`io`] hold the data types and the
//!   PACE `.gr`/`.td` and DOT formats;
//! * [`engine`] is a small trailed propagation engine with integer and set
//!   variables;
//! * [`model`] posts the tree-decomposition model for one `(G, m, w)` instance;
//! * [`driver`] runs the lockstep sequence of decision problems;
//! * [`validator`] and [`oracle`] check results without touching the solver;
//! * [`exec`] runs batches of independent jobs, in parallel when the
//!   `parallel` feature is enabled.

pub mod decomposition;
pub mod driver;
pub mod engine;
pub mod exec;
pub mod graph;
pub mod io;
pub mod model;
pub mod oracle;
pub mod validator;

pub use decomposition::TreeDecomposition;
pub use driver::{
    decide, max_nodes_bound, pathwidth, treewidth, DriverConfig, Outcome, ScheduleStep, WidthResult,
};
pub use graph::Graph;
pub use model::{build_model, extract_decomposition, ModelError, ModelInstance, Variant};
pub use validator::{validate, Violation, ViolationKind};
