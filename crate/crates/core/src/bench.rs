//! Benchmark sweeps: GW at several projection counts against the EDVQE
//! stages, one CSV row per (family, n, metric).

use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    gen_cluster, gen_complete, gen_regular, normalized_avg_cut, WeightRange, WeightedGraph,
};
use crate::gw::{bm_solve, round_nested, GwConfig};
use crate::perturbation::{edvqe_solve, warm_start_solve, EdvqeConfig, SolveResult};

/// Seed used for benchmark instances unless a spec overrides it.
pub const DEFAULT_GRAPH_SEED: u64 = 3587;

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "EDVQE_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum GraphFamily {
    Complete,
    Cluster,
    Regular3,
}

impl GraphFamily {
    pub fn name(self) -> &'static str {
        match self {
            GraphFamily::Complete => "complete",
            GraphFamily::Cluster => "cluster",
            GraphFamily::Regular3 => "regular3",
        }
    }
}

/// Weight ranges and community shape for the generated families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FamilyParams {
    pub complete_weights: WeightRange,
    pub regular_weights: WeightRange,
    pub community_size: usize,
    pub intra_weights: WeightRange,
    pub inter_weights: WeightRange,
    pub p_inter: f64,
}

impl Default for FamilyParams {
    fn default() -> Self {
        Self {
            complete_weights: WeightRange::new(1.0, 10.0),
            regular_weights: WeightRange::new(1.0, 10.0),
            community_size: 10,
            intra_weights: WeightRange::new(5.0, 10.0),
            inter_weights: WeightRange::new(1.0, 3.0),
            p_inter: 0.3,
        }
    }
}

pub fn generate(
    family: GraphFamily,
    n: usize,
    seed: u64,
    params: &FamilyParams,
) -> Result<WeightedGraph> {
    match family {
        GraphFamily::Complete => gen_complete(n, seed, params.complete_weights),
        GraphFamily::Cluster => gen_cluster(
            n,
            params.community_size,
            params.intra_weights,
            params.inter_weights,
            params.p_inter,
            seed,
        ),
        GraphFamily::Regular3 => gen_regular(n, 3, seed, params.regular_weights),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchSpec {
    pub graph_family: GraphFamily,
    pub sizes: Vec<usize>,
    pub graph_seed: u64,
    pub run_seeds: Vec<u64>,
    pub family: FamilyParams,
    pub edvqe: EdvqeConfig,
    pub gw: GwConfig,
    /// Projection counts reported for GW; one stream serves all of them.
    pub r_list: Vec<usize>,
    /// Also refine the best GW cut (largest R) with the EDVQE loop.
    pub warm_start: bool,
}

impl Default for BenchSpec {
    fn default() -> Self {
        Self {
            graph_family: GraphFamily::Complete,
            sizes: vec![100],
            graph_seed: DEFAULT_GRAPH_SEED,
            run_seeds: (0..10).collect(),
            family: FamilyParams::default(),
            edvqe: EdvqeConfig::default(),
            gw: GwConfig::default(),
            r_list: vec![1],
            warm_start: false,
        }
    }
}

impl BenchSpec {
    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.run_seeds.is_empty() || self.r_list.is_empty() {
            return Err(Error::InvalidConfig(
                "sizes, run_seeds and r_list must be non-empty".into(),
            ));
        }
        if self.r_list.contains(&0) {
            return Err(Error::InvalidConfig(
                "projection counts must be at least 1".into(),
            ));
        }
        self.edvqe.validate()?;
        self.gw.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub family: String,
    pub n: usize,
    pub metric: String,
    #[serde(rename = "R")]
    pub r: Option<usize>,
    #[serde(rename = "A_bar")]
    pub a_bar: Option<f64>,
    pub delta_cns1: Option<f64>,
    pub delta_qp2: Option<f64>,
    pub pct_cns1: Option<f64>,
    pub pct_qp2: Option<f64>,
    pub wall_time_s: f64,
    pub status: String,
    pub n_edges: usize,
    /// Per-run cuts joined with `;`.
    pub cuts: String,
}

impl BenchRow {
    fn new(family: GraphFamily, n: usize, metric: impl Into<String>, n_edges: usize) -> Self {
        Self {
            family: family.name().into(),
            n,
            metric: metric.into(),
            r: None,
            a_bar: None,
            delta_cns1: None,
            delta_qp2: None,
            pct_cns1: None,
            pct_qp2: None,
            wall_time_s: 0.0,
            status: "ok".into(),
            n_edges,
            cuts: String::new(),
        }
    }

    fn with_cuts(mut self, cuts: &[f64]) -> Self {
        self.a_bar = normalized_avg_cut(cuts, self.n_edges).ok();
        self.cuts = cuts
            .iter()
            .map(|c| format!("{c:.17e}"))
            .collect::<Vec<_>>()
            .join(";");
        self
    }

    /// Per-run cuts parsed back from the `cuts` column.
    pub fn parsed_cuts(&self) -> Vec<f64> {
        self.cuts
            .split(';')
            .filter(|s| !s.is_empty())
            .filter_map(|s| s.parse().ok())
            .collect()
    }
}

/// Worker count from [`THREADS_ENV`], defaulting to the available
/// parallelism.
pub fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// `f` over `items` on up to `threads` scoped workers; results keep the
/// input order.
pub fn map_parallel<T: Sync, R: Send>(
    items: &[T],
    threads: usize,
    f: impl Fn(&T) -> R + Sync,
) -> Vec<R> {
    let threads = threads.clamp(1, items.len().max(1));
    if threads == 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                if k >= items.len() {
                    break;
                }
                let r = f(&items[k]);
                slots.lock().unwrap()[k] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every slot filled"))
        .collect()
}

/// Everything computed for one instance.
#[derive(Debug)]
pub struct InstanceRuns {
    /// Best cut per run for each entry of `r_list`.
    pub gw_cuts: Vec<Vec<f64>>,
    pub solves: Vec<Result<SolveResult>>,
    pub warm: Vec<Result<SolveResult>>,
    pub gw_time_s: f64,
    pub edvqe_time_s: f64,
    pub warm_time_s: f64,
}

pub fn run_instance(
    graph: &WeightedGraph,
    spec: &BenchSpec,
    threads: usize,
) -> Result<InstanceRuns> {
    spec.validate()?;
    let start = Instant::now();
    let gw = map_parallel(&spec.run_seeds, threads, |&seed| {
        let emb = bm_solve(graph, &spec.gw, seed)?;
        round_nested(&emb, &spec.r_list, graph, seed)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let gw_time_s = start.elapsed().as_secs_f64();
    let gw_cuts = (0..spec.r_list.len())
        .map(|k| gw.iter().map(|run| run[k].best.cut).collect())
        .collect();

    let start = Instant::now();
    let solves = map_parallel(&spec.run_seeds, threads, |&seed| {
        edvqe_solve(graph, &spec.edvqe, seed)
    });
    let edvqe_time_s = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let warm = if spec.warm_start {
        let widest = (0..spec.r_list.len())
            .max_by_key(|&k| spec.r_list[k])
            .unwrap();
        let jobs: Vec<(u64, usize)> = spec.run_seeds.iter().copied().zip(0..).collect();
        map_parallel(&jobs, threads, |&(seed, k)| {
            warm_start_solve(graph, &gw[k][widest].best, &spec.edvqe, seed)
        })
    } else {
        Vec::new()
    };
    Ok(InstanceRuns {
        gw_cuts,
        solves,
        warm,
        gw_time_s,
        edvqe_time_s,
        warm_time_s: start.elapsed().as_secs_f64(),
    })
}

fn edvqe_rows(
    family: GraphFamily,
    n: usize,
    n_edges: usize,
    solves: &[Result<SolveResult>],
    time: f64,
) -> Vec<BenchRow> {
    let ok: Vec<&SolveResult> = solves.iter().filter_map(|s| s.as_ref().ok()).collect();
    let failures: Vec<String> = solves
        .iter()
        .filter_map(|s| s.as_ref().err().map(ToString::to_string))
        .collect();
    let status = if failures.is_empty() {
        "ok".to_string()
    } else {
        format!(
            "{} of {} runs failed: {}",
            failures.len(),
            solves.len(),
            failures[0]
        )
    };
    let initial: Vec<f64> = ok.iter().map(|s| s.initial.cut).collect();
    let after_cns1: Vec<f64> = ok
        .iter()
        .map(|s| s.initial.cut + s.stage_gains().cns1)
        .collect();
    let after_qp2: Vec<f64> = ok.iter().map(|s| s.best.cut).collect();
    let mut rows = vec![
        BenchRow::new(family, n, "Initial", n_edges).with_cuts(&initial),
        BenchRow::new(family, n, "CNS1", n_edges).with_cuts(&after_cns1),
        BenchRow::new(family, n, "QP2", n_edges).with_cuts(&after_qp2),
    ];
    if let (Some(a0), Some(a1), Some(a2)) = (rows[0].a_bar, rows[1].a_bar, rows[2].a_bar) {
        let last = &mut rows[2];
        last.delta_cns1 = Some(a1 - a0);
        last.delta_qp2 = Some(a2 - a1);
        last.pct_cns1 = Some(100.0 * (a1 - a0) / a0);
        last.pct_qp2 = Some(100.0 * (a2 - a1) / a1);
    }
    for row in &mut rows {
        row.wall_time_s = time;
        row.status.clone_from(&status);
        if ok.is_empty() {
            row.status = format!(
                "error: {}",
                failures.first().map_or("no runs", String::as_str)
            );
        }
    }
    rows
}

/// Rows for one size; a failure to build the instance becomes an error row.
pub fn bench_size(spec: &BenchSpec, n: usize, threads: usize) -> Vec<BenchRow> {
    let family = spec.graph_family;
    let graph = match generate(family, n, spec.graph_seed, &spec.family) {
        Ok(g) => g,
        Err(e) => {
            let mut row = BenchRow::new(family, n, "instance", 0);
            row.status = format!("error: {e}");
            return vec![row];
        }
    };
    let m = graph.n_edges();
    let runs = match run_instance(&graph, spec, threads) {
        Ok(r) => r,
        Err(e) => {
            let mut row = BenchRow::new(family, n, "instance", m);
            row.status = format!("error: {e}");
            return vec![row];
        }
    };
    let mut rows: Vec<BenchRow> = spec
        .r_list
        .iter()
        .zip(&runs.gw_cuts)
        .map(|(&r, cuts)| {
            let mut row = BenchRow::new(family, n, format!("GW({r})"), m).with_cuts(cuts);
            row.r = Some(r);
            row.wall_time_s = runs.gw_time_s;
            row
        })
        .collect();
    rows.extend(edvqe_rows(family, n, m, &runs.solves, runs.edvqe_time_s));
    if spec.warm_start {
        let cuts: Vec<f64> = runs
            .warm
            .iter()
            .filter_map(|s| s.as_ref().ok())
            .map(|s| s.best.cut)
            .collect();
        let mut row = BenchRow::new(family, n, "WarmStart", m).with_cuts(&cuts);
        row.r = spec.r_list.iter().max().copied();
        row.wall_time_s = runs.warm_time_s;
        if let Some(Err(e)) = runs.warm.iter().find(|s| s.is_err()) {
            row.status = format!("error: {e}");
        }
        rows.push(row);
    }
    rows
}

pub fn run_bench(spec: &BenchSpec, threads: usize) -> Result<Vec<BenchRow>> {
    spec.validate()?;
    let mut sizes = spec.sizes.clone();
    sizes.sort_unstable();
    Ok(sizes
        .into_iter()
        .flat_map(|n| bench_size(spec, n, threads))
        .collect())
}

pub fn write_rows(rows: &[BenchRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)
            .map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))
}

pub fn read_rows(input: impl std::io::Read) -> Result<Vec<BenchRow>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidInput(format!("csv: {e}")))
}

/// Run summary against a reference cut: best, mean, fraction of runs
/// reaching the reference, mean ratio to it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutSummary {
    pub best_cut: f64,
    pub avg_cut: f64,
    pub success_rate: f64,
    pub avg_ratio: f64,
    pub reference: f64,
}

pub fn summarize_runs(cuts: &[f64], reference: f64) -> Result<CutSummary> {
    if cuts.is_empty() {
        return Err(Error::InvalidInput("no runs to summarize".into()));
    }
    if reference.is_nan() || reference <= 0.0 {
        return Err(Error::Value(format!(
            "reference cut {reference} must be positive"
        )));
    }
    let n = cuts.len() as f64;
    let tol = 1e-9 * reference.abs().max(1.0);
    Ok(CutSummary {
        best_cut: cuts.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        avg_cut: cuts.iter().sum::<f64>() / n,
        success_rate: cuts.iter().filter(|&&c| c >= reference - tol).count() as f64 / n,
        avg_ratio: cuts.iter().map(|c| c / reference).sum::<f64>() / n,
        reference,
    })
}
