//! Command-line front end. Exit codes: 0 success, 1 runtime failure,
//! 2 usage or configuration error.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::bench::{
    generate, run_bench, thread_count, write_rows, BenchSpec, FamilyParams, GraphFamily,
};
use crate::dvqe::{params_json, trace_csv};
use crate::error::{Error, Result};
use crate::graph::{read_graph, write_graph, CutAssignment};
use crate::gw::{gw_runs, gw_solve, GwConfig, GwReport, GwRunsReport};
use crate::haplotype::{
    format_fragments, format_fragments_sparse, gen_synthetic_diploid, haplotype_string, phase,
    read_fragments, read_haplotype, write_haplotype, ConflictMode, PhaseSolver, PhasingResult,
};
use crate::perturbation::{edvqe_solve, warm_start_solve, EdvqeConfig, SolveResult};

#[derive(Debug, Parser)]
#[command(
    name = "edvqe",
    version,
    about = "Distributed variational MaxCut solver and baselines"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a benchmark graph as an edge list.
    Gen {
        #[arg(value_enum)]
        family: GraphFamily,
        n: usize,
        seed: u64,
        out: PathBuf,
        /// JSON file overriding weight ranges and community shape.
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Run the full EDVQE pipeline on a graph.
    Solve {
        graph: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the initial-phase expected-cut trace as CSV.
        #[arg(long)]
        trace_csv: Option<PathBuf>,
        /// Write the initial-phase parameters as JSON keyed by block.
        #[arg(long)]
        params_out: Option<PathBuf>,
    },
    /// Goemans–Williamson baseline over independent runs.
    Gw {
        graph: PathBuf,
        #[arg(long)]
        projections: Option<usize>,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Refine a GW cut with the CNS-1/QP-2 loop.
    Warmstart {
        graph: PathBuf,
        #[arg(long)]
        projections: Option<usize>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        gw_config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Phase reads into two haplotypes.
    Phase {
        fragments: PathBuf,
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SolverKind::Edvqe)]
        solver: SolverKind,
        /// Solver configuration JSON (EDVQE or GW schema).
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ConflictMode::Signed)]
        mode: ConflictMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write h1 and h2 (one per line, `?` unphased).
        #[arg(long)]
        haplotypes: Option<PathBuf>,
    },
    /// Run a benchmark sweep and write CSV.
    Bench { spec: PathBuf, out: PathBuf },
    /// Generate synthetic diploid fragments.
    Synth {
        #[arg(long)]
        sites: usize,
        #[arg(long)]
        reads: usize,
        #[arg(long)]
        read_len: usize,
        #[arg(long, default_value_t = 0.0)]
        error_rate: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        out: PathBuf,
        #[arg(long)]
        truth_out: Option<PathBuf>,
        #[arg(long)]
        sparse: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SolverKind {
    Edvqe,
    Gw,
    Brute,
}

#[derive(Serialize)]
struct SolveReport<'a> {
    graph: &'a Path,
    #[serde(flatten)]
    result: &'a SolveResult,
    wall_time_s: f64,
}

#[derive(Serialize)]
struct GwCliReport<'a> {
    graph: &'a Path,
    #[serde(flatten)]
    report: &'a GwRunsReport,
    wall_time_s: f64,
}

#[derive(Serialize)]
struct WarmReport<'a> {
    graph: &'a Path,
    gw: &'a GwReport,
    gw_cut: &'a CutAssignment,
    result: &'a SolveResult,
    wall_time_s: f64,
}

#[derive(Serialize)]
struct PhaseReport<'a> {
    fragments: &'a Path,
    mode: ConflictMode,
    solver: &'a PhaseSolver,
    seed: u64,
    #[serde(flatten)]
    result: &'a PhasingResult,
    wall_time_s: f64,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(path) => write_text(path, &text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

pub fn execute(command: Command) -> Result<()> {
    match command {
        Command::Gen {
            family,
            n,
            seed,
            out,
            params,
        } => {
            let params: FamilyParams = params
                .as_deref()
                .map(read_json)
                .transpose()?
                .unwrap_or_default();
            write_graph(&generate(family, n, seed, &params)?, &out)
        }
        Command::Solve {
            graph,
            config,
            seed,
            out,
            trace_csv: trace_path,
            params_out,
        } => {
            let config: EdvqeConfig = config
                .as_deref()
                .map(read_json)
                .transpose()?
                .unwrap_or_default();
            let g = read_graph(&graph)?;
            let start = Instant::now();
            let result = edvqe_solve(&g, &config, seed)?;
            let wall_time_s = start.elapsed().as_secs_f64();
            if let Some(path) = trace_path {
                write_text(&path, &trace_csv(&result.initial_energy_trace))?;
            }
            if let Some(path) = params_out {
                write_text(
                    &path,
                    &serde_json::to_string_pretty(&params_json(&result.initial_params))?,
                )?;
            }
            emit_json(
                &SolveReport {
                    graph: &graph,
                    result: &result,
                    wall_time_s,
                },
                out.as_deref(),
            )
        }
        Command::Gw {
            graph,
            projections,
            runs,
            rank,
            config,
            seed,
            out,
        } => {
            let mut cfg: GwConfig = config
                .as_deref()
                .map(read_json)
                .transpose()?
                .unwrap_or_default();
            if let Some(r) = projections {
                cfg.projections = r;
            }
            if rank.is_some() {
                cfg.rank = rank;
            }
            let g = read_graph(&graph)?;
            let start = Instant::now();
            let report = gw_runs(&g, &cfg, runs, seed)?;
            emit_json(
                &GwCliReport {
                    graph: &graph,
                    report: &report,
                    wall_time_s: start.elapsed().as_secs_f64(),
                },
                out.as_deref(),
            )
        }
        Command::Warmstart {
            graph,
            projections,
            config,
            gw_config,
            seed,
            out,
        } => {
            let cfg: EdvqeConfig = config
                .as_deref()
                .map(read_json)
                .transpose()?
                .unwrap_or_default();
            let mut gw_cfg: GwConfig = gw_config
                .as_deref()
                .map(read_json)
                .transpose()?
                .unwrap_or_default();
            if let Some(r) = projections {
                gw_cfg.projections = r;
            }
            cfg.validate()?;
            let g = read_graph(&graph)?;
            let start = Instant::now();
            let (gw_cut, gw) = gw_solve(&g, &gw_cfg, seed)?;
            let result = warm_start_solve(&g, &gw_cut, &cfg, seed)?;
            emit_json(
                &WarmReport {
                    graph: &graph,
                    gw: &gw,
                    gw_cut: &gw_cut,
                    result: &result,
                    wall_time_s: start.elapsed().as_secs_f64(),
                },
                out.as_deref(),
            )
        }
        Command::Phase {
            fragments,
            truth,
            solver,
            config,
            mode,
            seed,
            out,
            haplotypes,
        } => {
            let solver = match solver {
                SolverKind::Edvqe => PhaseSolver::Edvqe(
                    config
                        .as_deref()
                        .map(read_json)
                        .transpose()?
                        .unwrap_or_default(),
                ),
                SolverKind::Gw => PhaseSolver::Gw(
                    config
                        .as_deref()
                        .map(read_json)
                        .transpose()?
                        .unwrap_or_default(),
                ),
                SolverKind::Brute => PhaseSolver::Brute,
            };
            let frags = read_fragments(&fragments)?;
            let truth = truth.as_deref().map(read_haplotype).transpose()?;
            let start = Instant::now();
            let result = phase(&frags, mode, &solver, seed, truth.as_deref())?;
            let wall_time_s = start.elapsed().as_secs_f64();
            if let Some(path) = haplotypes {
                let text = format!(
                    "{}\n{}\n",
                    haplotype_string(&result.h1),
                    haplotype_string(&result.h2)
                );
                write_text(&path, &text)?;
            }
            emit_json(
                &PhaseReport {
                    fragments: &fragments,
                    mode,
                    solver: &solver,
                    seed,
                    result: &result,
                    wall_time_s,
                },
                out.as_deref(),
            )
        }
        Command::Bench { spec, out } => {
            let spec: BenchSpec = read_json(&spec)?;
            let rows = run_bench(&spec, thread_count())?;
            let file = std::fs::File::create(&out).map_err(|e| Error::io(&out, e))?;
            write_rows(&rows, file)
        }
        Command::Synth {
            sites,
            reads,
            read_len,
            error_rate,
            seed,
            out,
            truth_out,
            sparse,
        } => {
            let (frags, truth) = gen_synthetic_diploid(sites, reads, read_len, error_rate, seed)?;
            let text = if sparse {
                format_fragments_sparse(&frags)
            } else {
                format_fragments(&frags)
            };
            write_text(&out, &text)?;
            match truth_out {
                Some(path) => write_haplotype(&truth, &path),
                None => Ok(()),
            }
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    }
}
