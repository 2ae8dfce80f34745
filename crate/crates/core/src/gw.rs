//! Goemans–Williamson baseline.
//!
//! The relaxation `max 1/4 sum w_ij |v_i - v_j|^2` over unit vectors is
//! solved in low rank (Burer–Monteiro) by Riemannian gradient ascent on a
//! product of spheres, then rounded with random hyperplanes.

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{cut_value_unchecked, Adjacency, CutAssignment, WeightedGraph};
use crate::rng::{derive_seed, rng_from_seed, tags};

/// Above this many projections individual cut values are not kept.
pub const MAX_STORED_CUTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GwConfig {
    /// Embedding dimension; `None` uses `min(N, ceil(sqrt(2N)) + 1)`.
    pub rank: Option<usize>,
    pub ascent_iters: usize,
    /// Step size relative to `1 / max_i sum_j |w_ij|`.
    pub ascent_lr: f64,
    pub restarts: usize,
    pub projections: usize,
}

impl Default for GwConfig {
    fn default() -> Self {
        Self {
            rank: None,
            ascent_iters: 500,
            ascent_lr: 1.0,
            restarts: 3,
            projections: 100,
        }
    }
}

impl GwConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rank.is_some_and(|r| r < 2) {
            return Err(Error::InvalidConfig("rank must be at least 2".into()));
        }
        if self.projections == 0 || self.restarts == 0 {
            return Err(Error::InvalidConfig(
                "projections and restarts must be at least 1".into(),
            ));
        }
        if !(self.ascent_lr > 0.0 && self.ascent_lr.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "ascent_lr {} must be positive",
                self.ascent_lr
            )));
        }
        Ok(())
    }

    pub fn rank_for(&self, n: usize) -> usize {
        self.rank.unwrap_or_else(|| default_rank(n))
    }
}

pub fn default_rank(n: usize) -> usize {
    let heuristic = ((2.0 * n as f64).sqrt().ceil() as usize) + 1;
    heuristic.min(n).max(2)
}

/// Unit vectors, one row of length `rank` per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSolution {
    pub rank: usize,
    pub vectors: Vec<f64>,
    pub relaxation_value: f64,
}

impl EmbeddingSolution {
    pub fn n_vertices(&self) -> usize {
        self.vectors.len() / self.rank
    }

    pub fn vector(&self, v: usize) -> &[f64] {
        &self.vectors[v * self.rank..(v + 1) * self.rank]
    }
}

fn relaxation_value(adj: &Adjacency, vectors: &[f64], rank: usize) -> f64 {
    let mut total = 0.0;
    for v in 0..adj.n_vertices() {
        let xv = &vectors[v * rank..(v + 1) * rank];
        for &(u, w) in adj.neighbors(v) {
            if u > v {
                let xu = &vectors[u * rank..(u + 1) * rank];
                total += 0.5 * w * (1.0 - dot(xv, xu));
            }
        }
    }
    total
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(x: &mut [f64]) {
    let norm = dot(x, x).sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|c| *c /= norm);
    } else {
        x[0] = 1.0;
    }
}

/// Best of `config.restarts` seeded ascents.
pub fn bm_solve(graph: &WeightedGraph, config: &GwConfig, seed: u64) -> Result<EmbeddingSolution> {
    config.validate()?;
    let adj = graph.adjacency();
    let rank = config.rank_for(graph.n_vertices());
    let mut best: Option<EmbeddingSolution> = None;
    for r in 0..config.restarts {
        let sol = ascend(
            &adj,
            rank,
            config,
            derive_seed(seed, tags::GW_RESTART, r as u64),
        )?;
        if best
            .as_ref()
            .is_none_or(|b| sol.relaxation_value > b.relaxation_value)
        {
            best = Some(sol);
        }
    }
    Ok(best.expect("restarts >= 1"))
}

fn ascend(adj: &Adjacency, rank: usize, config: &GwConfig, seed: u64) -> Result<EmbeddingSolution> {
    let n = adj.n_vertices();
    let mut rng = rng_from_seed(seed);
    let mut x: Vec<f64> = (0..n * rank)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    for row in x.chunks_mut(rank) {
        normalize(row);
    }
    let max_degree = (0..n)
        .map(|v| adj.neighbors(v).iter().map(|&(_, w)| w.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut value = relaxation_value(adj, &x, rank);
    if max_degree == 0.0 {
        return Ok(EmbeddingSolution {
            rank,
            vectors: x,
            relaxation_value: value,
        });
    }
    let mut step = config.ascent_lr / max_degree;
    let mut grad = vec![0.0; n * rank];
    let mut trial = vec![0.0; n * rank];
    let mut iters = 0;
    while iters < config.ascent_iters {
        // Euclidean gradient -1/2 sum_j w_ij v_j, projected on the tangent space
        for v in 0..n {
            let g = &mut grad[v * rank..(v + 1) * rank];
            g.fill(0.0);
            for &(u, w) in adj.neighbors(v) {
                for (gk, xk) in g.iter_mut().zip(&x[u * rank..(u + 1) * rank]) {
                    *gk -= 0.5 * w * xk;
                }
            }
            let xv = &x[v * rank..(v + 1) * rank];
            let radial = dot(g, xv);
            g.iter_mut().zip(xv).for_each(|(gk, xk)| *gk -= radial * xk);
        }
        let grad_norm = dot(&grad, &grad).sqrt();
        if grad_norm < 1e-10 * max_degree {
            break;
        }
        loop {
            for ((t, xk), gk) in trial.iter_mut().zip(&x).zip(&grad) {
                *t = xk + step * gk;
            }
            for row in trial.chunks_mut(rank) {
                normalize(row);
            }
            let next = relaxation_value(adj, &trial, rank);
            if !next.is_finite() {
                return Err(Error::Numeric("non-finite relaxation objective".into()));
            }
            iters += 1;
            if next >= value {
                let gain = next - value;
                std::mem::swap(&mut x, &mut trial);
                value = next;
                if gain <= 1e-13 * value.abs().max(1.0) {
                    iters = config.ascent_iters;
                }
                break;
            }
            step *= 0.5;
            if step < 1e-16 || iters >= config.ascent_iters {
                iters = config.ascent_iters;
                break;
            }
        }
    }
    Ok(EmbeddingSolution {
        rank,
        vectors: x,
        relaxation_value: value,
    })
}

/// Result of rounding with a number of projections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundingOutcome {
    pub projections: usize,
    pub best: CutAssignment,
    pub mean_cut: f64,
    /// Every projection's cut, kept when `projections <= MAX_STORED_CUTS`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_cuts: Option<Vec<f64>>,
}

/// Rounds with `R` random hyperplanes: `bit_v = 1` iff `g · v_v >= 0`.
pub fn hyperplane_round(
    embedding: &EmbeddingSolution,
    projections: usize,
    graph: &WeightedGraph,
    seed: u64,
) -> Result<RoundingOutcome> {
    Ok(round_nested(embedding, &[projections], graph, seed)?.remove(0))
}

/// One projection stream, reported at every requested count. Projection `k`
/// draws from its own derived seed, so the first `R` projections are the
/// same for every total.
pub fn round_nested(
    embedding: &EmbeddingSolution,
    counts: &[usize],
    graph: &WeightedGraph,
    seed: u64,
) -> Result<Vec<RoundingOutcome>> {
    if counts.contains(&0) || counts.is_empty() {
        return Err(Error::InvalidConfig(
            "projection counts must be at least 1".into(),
        ));
    }
    if embedding.n_vertices() != graph.n_vertices() {
        return Err(Error::Dimension(format!(
            "embedding has {} vectors for {} vertices",
            embedding.n_vertices(),
            graph.n_vertices()
        )));
    }
    let total = *counts.iter().max().unwrap();
    let store = total <= MAX_STORED_CUTS;
    let mut cuts = Vec::new();
    let mut sum = 0.0;
    let mut best = CutAssignment {
        bits: vec![0; graph.n_vertices()],
        cut: f64::NEG_INFINITY,
    };
    let mut bits = vec![0u8; graph.n_vertices()];
    let mut g = vec![0.0; embedding.rank];
    let mut out = Vec::with_capacity(counts.len());
    for k in 0..total {
        let mut rng = rng_from_seed(derive_seed(seed, tags::GW_PROJECTION, k as u64));
        g.iter_mut()
            .for_each(|x| *x = StandardNormal.sample(&mut rng));
        for (v, b) in bits.iter_mut().enumerate() {
            *b = u8::from(dot(&g, embedding.vector(v)) >= 0.0);
        }
        let cut = cut_value_unchecked(graph, &bits);
        sum += cut;
        if store {
            cuts.push(cut);
        }
        if cut > best.cut {
            best.cut = cut;
            best.bits.copy_from_slice(&bits);
        }
        for &r in counts {
            if r == k + 1 {
                out.push((
                    r,
                    RoundingOutcome {
                        projections: r,
                        best: best.clone(),
                        mean_cut: sum / r as f64,
                        all_cuts: store.then(|| cuts.clone()),
                    },
                ));
            }
        }
    }
    // restore the caller's order
    Ok(counts
        .iter()
        .map(|&r| out.iter().find(|(c, _)| *c == r).unwrap().1.clone())
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GwReport {
    pub seed: u64,
    pub rank: usize,
    pub relaxation_value: f64,
    pub projections: usize,
    pub best_cut: f64,
    pub mean_cut: f64,
}

/// Embedding followed by `config.projections` roundings.
pub fn gw_solve(
    graph: &WeightedGraph,
    config: &GwConfig,
    seed: u64,
) -> Result<(CutAssignment, GwReport)> {
    let emb = bm_solve(graph, config, seed)?;
    let round = hyperplane_round(&emb, config.projections, graph, seed)?;
    let report = GwReport {
        seed,
        rank: emb.rank,
        relaxation_value: emb.relaxation_value,
        projections: config.projections,
        best_cut: round.best.cut,
        mean_cut: round.mean_cut,
    };
    Ok((round.best, report))
}

/// Independent runs (embedding plus rounding) with derived seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GwRunsReport {
    pub seed: u64,
    pub config: GwConfig,
    pub runs: Vec<GwReport>,
    pub best: CutAssignment,
    /// Mean of the per-run best cuts divided by the edge count; absent for
    /// edgeless graphs.
    pub normalized_avg_cut: Option<f64>,
}

pub fn gw_runs(
    graph: &WeightedGraph,
    config: &GwConfig,
    runs: usize,
    seed: u64,
) -> Result<GwRunsReport> {
    if runs == 0 {
        return Err(Error::InvalidConfig("at least one run required".into()));
    }
    let mut reports = Vec::with_capacity(runs);
    let mut best: Option<CutAssignment> = None;
    for r in 0..runs {
        let (cut, report) = gw_solve(graph, config, derive_seed(seed, tags::GW_RUN, r as u64))?;
        if best.as_ref().is_none_or(|b| cut.cut > b.cut) {
            best = Some(cut);
        }
        reports.push(report);
    }
    let cuts: Vec<f64> = reports.iter().map(|r| r.best_cut).collect();
    Ok(GwRunsReport {
        seed,
        config: config.clone(),
        normalized_avg_cut: crate::graph::normalized_avg_cut(&cuts, graph.n_edges()).ok(),
        runs: reports,
        best: best.unwrap(),
    })
}
