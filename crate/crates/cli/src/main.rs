use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use tdcp_core::driver::{self, DriverConfig, Outcome, ScheduleStep};
use tdcp_core::engine::Limits;
use tdcp_core::exec::Execution;
use tdcp_core::io::{export_dot, parse_graph, parse_td, write_td};
use tdcp_core::oracle::{
    brute_pathwidth_with, brute_treewidth_with, DEFAULT_PATHWIDTH_LIMIT, DEFAULT_TREEWIDTH_LIMIT,
};
use tdcp_core::{validate, Graph, TreeDecomposition, Variant};

const EXIT_SAT: u8 = 10;
const EXIT_UNSAT: u8 = 20;
const EXIT_USAGE: u8 = 1;
const EXIT_INDETERMINATE: u8 = 2;

/// Exact treewidth and pathwidth by constraint programming.
#[derive(Debug, Parser)]
#[command(name = "tdcp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Is there a decomposition with `m` nodes of at most `w` vertices each?
    Decide {
        graph: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        w: usize,
        /// Require the nodes to form a path.
        #[arg(long)]
        path: bool,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Minimum-width tree decomposition.
    Treewidth {
        graph: PathBuf,
        #[command(flatten)]
        solve: SolveArgs,
        #[command(flatten)]
        schedule: ScheduleArgs,
    },
    /// Minimum-width path decomposition.
    Pathwidth {
        graph: PathBuf,
        #[command(flatten)]
        solve: SolveArgs,
        #[command(flatten)]
        schedule: ScheduleArgs,
    },
    /// Checks a `.td` file against a graph.
    Validate {
        graph: PathBuf,
        td: PathBuf,
        /// Expected node count.
        #[arg(long)]
        m: Option<usize>,
        /// Width bound.
        #[arg(long)]
        w: Option<usize>,
    },
    /// Exhaustive reference value (small graphs only).
    Oracle {
        graph: PathBuf,
        #[arg(long)]
        path: bool,
    },
    /// Writes the graph, and optionally a decomposition, as Graphviz DOT.
    ExportDot {
        graph: PathBuf,
        #[arg(long)]
        td: Option<PathBuf>,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    no_symmetry_breaking: bool,
    /// Per-step decision cap.
    #[arg(long, value_name = "N")]
    decision_limit: Option<u64>,
    /// Per-step time cap in seconds.
    #[arg(long, value_name = "SECS")]
    timeout: Option<f64>,
    /// Print search statistics, including timings.
    #[arg(long)]
    stats: bool,
    /// Write the witness decomposition here.
    #[arg(long, value_name = "FILE")]
    td: Option<PathBuf>,
    /// Write a DOT rendering of the witness here.
    #[arg(long, value_name = "FILE")]
    dot: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScheduleArgs {
    /// Stop the schedule at width 2.
    #[arg(long)]
    strict_paper_schedule: bool,
    /// Solve all schedule steps at once.
    #[arg(long)]
    concurrent: bool,
}

impl SolveArgs {
    fn config(&self) -> Result<DriverConfig> {
        let timeout = match self.timeout {
            Some(t) if !(t.is_finite() && t >= 0.0) => {
                bail!("--timeout: expected a non-negative number of seconds, got {t}")
            }
            Some(t) => Some(Duration::from_secs_f64(t)),
            None => None,
        };
        Ok(DriverConfig {
            symmetry_breaking: !self.no_symmetry_breaking,
            limits: Limits {
                decisions: self.decision_limit,
                timeout,
            },
            ..DriverConfig::default()
        })
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("{}: cannot read", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("{}: cannot write", path.display()))
}

fn load_graph(path: &Path) -> Result<Graph> {
    let text = read(path)?;
    parse_graph(&text).with_context(|| format!("{}", path.display()))
}

fn load_td(path: &Path) -> Result<(TreeDecomposition, usize)> {
    let text = read(path)?;
    parse_td(&text).with_context(|| format!("{}", path.display()))
}

fn save_witness(g: &Graph, td: &TreeDecomposition, args: &SolveArgs) -> Result<()> {
    if let Some(path) = &args.td {
        write(path, &write_td(td, g)?)?;
    }
    if let Some(path) = &args.dot {
        write(path, &export_dot(g, Some(td))?)?;
    }
    Ok(())
}

fn step_line(out: &mut String, step: &ScheduleStep, stats: bool) {
    let outcome = step.outcome.to_string();
    write!(
        out,
        "{:>3} {:>3}  {:<13} {:>10}",
        step.m, step.w, outcome, step.report.decisions
    )
    .unwrap();
    if stats {
        let r = &step.report;
        write!(
            out,
            " {:>12} {:>10} {:>12.3?}",
            r.propagations, r.fails, r.elapsed
        )
        .unwrap();
    }
    out.push('\n');
}

fn table_header(out: &mut String, stats: bool) {
    write!(
        out,
        "{:>3} {:>3}  {:<13} {:>10}",
        "m", "w", "outcome", "decisions"
    )
    .unwrap();
    if stats {
        write!(
            out,
            " {:>12} {:>10} {:>12}",
            "propagations", "fails", "elapsed"
        )
        .unwrap();
    }
    out.push('\n');
}

fn run(cli: Cli, out: &mut String) -> Result<u8> {
    match cli.command {
        Command::Decide {
            graph,
            m,
            w,
            path,
            solve,
        } => {
            let g = load_graph(&graph)?;
            if m == 0 {
                bail!("--m: must be at least 1");
            }
            if w == 0 {
                bail!("--w: must be at least 1");
            }
            let variant = if path { Variant::Path } else { Variant::Tree };
            let step = driver::decide(&g, m, w, variant, &solve.config()?)?;
            writeln!(out, "{}", step.outcome).unwrap();
            if solve.stats {
                table_header(out, true);
                step_line(out, &step, true);
            }
            if let Some(td) = &step.witness {
                save_witness(&g, td, &solve)?;
            }
            Ok(match step.outcome {
                Outcome::Sat => EXIT_SAT,
                Outcome::Unsat => EXIT_UNSAT,
                Outcome::Indeterminate => EXIT_INDETERMINATE,
            })
        }
        Command::Treewidth {
            graph,
            solve,
            schedule,
        } => width(&graph, Variant::Tree, &solve, &schedule, out),
        Command::Pathwidth {
            graph,
            solve,
            schedule,
        } => width(&graph, Variant::Path, &solve, &schedule, out),
        Command::Validate { graph, td, m, w } => {
            let g = load_graph(&graph)?;
            let (decomposition, n) = load_td(&td)?;
            if n != g.n() {
                bail!(
                    "{}: header declares {n} vertices but {} has {}",
                    td.display(),
                    graph.display(),
                    g.n()
                );
            }
            let violations =
                validate(&g, &decomposition, m, w).with_context(|| format!("{}", td.display()))?;
            if violations.is_empty() {
                out.push_str("OK\n");
            }
            for v in violations {
                writeln!(out, "{v}").unwrap();
            }
            Ok(0)
        }
        Command::Oracle { graph, path } => {
            let g = load_graph(&graph)?;
            if path {
                let width = brute_pathwidth_with(&g, DEFAULT_PATHWIDTH_LIMIT)?;
                writeln!(
                    out,
                    "min_width {width}\npathwidth {}",
                    width.saturating_sub(1)
                )
                .unwrap();
            } else {
                let cert = brute_treewidth_with(&g, DEFAULT_TREEWIDTH_LIMIT, Execution::default())?;
                let order: Vec<String> = cert
                    .order
                    .as_slice()
                    .iter()
                    .map(|v| (v + 1).to_string())
                    .collect();
                writeln!(
                    out,
                    "min_width {}\ntreewidth {}\norder {}",
                    cert.min_width,
                    cert.min_width.saturating_sub(1),
                    order.join(" ")
                )
                .unwrap();
            }
            Ok(0)
        }
        Command::ExportDot { graph, td, output } => {
            let g = load_graph(&graph)?;
            let decomposition = match &td {
                Some(path) => Some(load_td(path)?.0),
                None => None,
            };
            let dot = export_dot(&g, decomposition.as_ref())?;
            match output {
                Some(path) => write(&path, &dot)?,
                None => out.push_str(&dot),
            }
            Ok(0)
        }
    }
}

fn width(
    graph: &Path,
    variant: Variant,
    solve: &SolveArgs,
    schedule: &ScheduleArgs,
    out: &mut String,
) -> Result<u8> {
    let g = load_graph(graph)?;
    let config = DriverConfig {
        strict_paper_schedule: schedule.strict_paper_schedule,
        concurrent: schedule.concurrent,
        ..solve.config()?
    };
    let r = driver::width(&g, variant, &config)?;
    table_header(out, solve.stats);
    for step in &r.trace {
        step_line(out, step, solve.stats);
    }
    let name = match variant {
        Variant::Tree => "treewidth",
        Variant::Path => "pathwidth",
    };
    writeln!(out, "min_width {}", r.min_width).unwrap();
    writeln!(out, "{name} {}", r.treewidth).unwrap();
    if !r.optimal {
        out.push_str("note: a limit was reached; the result is an upper bound\n");
    }
    save_witness(&g, &r.witness, solve)?;
    Ok(if r.optimal { 0 } else { EXIT_INDETERMINATE })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let mut out = String::new();
    let result = run(cli, &mut out);
    print!("{out}");
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
