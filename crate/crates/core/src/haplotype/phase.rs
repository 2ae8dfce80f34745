use serde::{Deserialize, Serialize};

use super::{build_conflict_graph, ConflictMode, FragmentMatrix};
use crate::error::{Error, Result};
use crate::graph::{brute_force_maxcut, cut_value, CutAssignment, WeightedGraph};
use crate::gw::{gw_solve, GwConfig};
use crate::perturbation::{edvqe_solve, EdvqeConfig};
use crate::rng::{derive_seed, tags};

/// MaxCut backend used on each component of the read graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "config", rename_all = "snake_case")]
pub enum PhaseSolver {
    Edvqe(EdvqeConfig),
    Gw(GwConfig),
    Brute,
}

impl Default for PhaseSolver {
    fn default() -> Self {
        PhaseSolver::Edvqe(EdvqeConfig::default())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasingResult {
    pub read_partition: CutAssignment,
    /// Per site: +1, -1, or 0 when unphased.
    #[serde(with = "hapstring")]
    pub h1: Vec<i8>,
    #[serde(with = "hapstring")]
    pub h2: Vec<i8>,
    pub mec: u64,
    pub completeness: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub switch_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hamming_error: Option<f64>,
    pub n_components: usize,
    pub n_conflict_edges: usize,
}

/// Haplotypes as text: `+`, `-`, and `?` for unphased.
pub fn haplotype_string(h: &[i8]) -> String {
    h.iter()
        .map(|&v| match v {
            1 => '+',
            -1 => '-',
            _ => '?',
        })
        .collect()
}

mod hapstring {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(h: &[i8], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::haplotype_string(h))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<i8>, D::Error> {
        String::deserialize(d)?
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                '?' => Ok(0),
                _ => Err(D::Error::custom(format!("bad haplotype character {c:?}"))),
            })
            .collect()
    }
}

/// Majority vote of partition-0 reads per site; when that is tied or
/// empty, the complement of the partition-1 vote; otherwise unphased.
pub fn consensus(frags: &FragmentMatrix, partition: &[u8]) -> Result<(Vec<i8>, Vec<i8>)> {
    if partition.len() != frags.n_reads() {
        return Err(Error::Dimension(format!(
            "partition has {} entries for {} reads",
            partition.len(),
            frags.n_reads()
        )));
    }
    let mut votes = vec![[0i64; 2]; frags.n_sites()];
    for (read, &side) in frags.reads().iter().zip(partition) {
        for &(s, v) in read {
            votes[s][usize::from(side != 0)] += i64::from(v);
        }
    }
    let h1: Vec<i8> = votes
        .iter()
        .map(|&[p0, p1]| {
            if p0 != 0 {
                p0.signum() as i8
            } else {
                -(p1.signum() as i8)
            }
        })
        .collect();
    let h2 = h1.iter().map(|&v| -v).collect();
    Ok((h1, h2))
}

/// Sum over reads of the smaller mismatch count against either haplotype,
/// counting only phased sites.
pub fn mec_score(frags: &FragmentMatrix, h1: &[i8], h2: &[i8]) -> Result<u64> {
    if h1.len() != frags.n_sites() || h2.len() != frags.n_sites() {
        return Err(Error::Dimension(
            "haplotype length differs from site count".into(),
        ));
    }
    Ok(frags
        .reads()
        .iter()
        .map(|read| {
            let (mut m1, mut m2) = (0u64, 0u64);
            for &(s, v) in read {
                if h1[s] != 0 && h1[s] != v {
                    m1 += 1;
                }
                if h2[s] != 0 && h2[s] != v {
                    m2 += 1;
                }
            }
            m1.min(m2)
        })
        .sum())
}

/// Agreement with the truth at sites phased in both.
fn agreement(pred: &[i8], truth: &[i8]) -> Result<Vec<bool>> {
    if pred.len() != truth.len() {
        return Err(Error::Dimension(format!(
            "predicted haplotype has {} sites, truth has {}",
            pred.len(),
            truth.len()
        )));
    }
    Ok(pred
        .iter()
        .zip(truth)
        .filter(|(p, t)| **p != 0 && **t != 0)
        .map(|(p, t)| p == t)
        .collect())
}

/// Fraction of consecutive common phased sites where agreement with the
/// truth flips; `None` with fewer than two common sites.
pub fn switch_error_rate(pred: &[i8], truth: &[i8]) -> Result<Option<f64>> {
    let agree = agreement(pred, truth)?;
    if agree.len() < 2 {
        return Ok(None);
    }
    let switches = agree.windows(2).filter(|w| w[0] != w[1]).count();
    Ok(Some(switches as f64 / (agree.len() - 1) as f64))
}

/// `min(d, n - d) / n` over common phased sites; `None` when there are none.
pub fn hamming_error_rate(pred: &[i8], truth: &[i8]) -> Result<Option<f64>> {
    let agree = agreement(pred, truth)?;
    if agree.is_empty() {
        return Ok(None);
    }
    let d = agree.iter().filter(|a| !**a).count();
    Ok(Some(d.min(agree.len() - d) as f64 / agree.len() as f64))
}

/// Phased sites over sites covered by at least one read.
pub fn completeness(pred: &[i8], frags: &FragmentMatrix) -> Result<f64> {
    if pred.len() != frags.n_sites() {
        return Err(Error::Dimension(
            "haplotype length differs from site count".into(),
        ));
    }
    let covered = frags.covered_sites();
    let n_covered = covered.iter().filter(|c| **c).count();
    if n_covered == 0 {
        return Err(Error::InvalidInput("no covered sites".into()));
    }
    let phased = covered
        .iter()
        .zip(pred)
        .filter(|(c, p)| **c && **p != 0)
        .count();
    Ok(phased as f64 / n_covered as f64)
}

/// Groups of reads connected through shared sites, each sorted, ordered by
/// their smallest read.
pub fn read_components(frags: &FragmentMatrix) -> Vec<Vec<usize>> {
    let n = frags.n_reads();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut first_at_site: Vec<Option<usize>> = vec![None; frags.n_sites()];
    for (r, read) in frags.reads().iter().enumerate() {
        for &(s, _) in read {
            match first_at_site[s] {
                None => first_at_site[s] = Some(r),
                Some(o) => {
                    let (a, b) = (find(&mut parent, o), find(&mut parent, r));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for r in 0..n {
        let root = find(&mut parent, r);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(r);
    }
    groups
}

fn solve_component(graph: &WeightedGraph, solver: &PhaseSolver, seed: u64) -> Result<Vec<u8>> {
    let n = graph.n_vertices();
    if n < 2 || graph.n_edges() == 0 {
        return Ok(vec![0; n]);
    }
    Ok(match solver {
        PhaseSolver::Brute => brute_force_maxcut(graph)?.bits,
        PhaseSolver::Gw(cfg) => gw_solve(graph, cfg, seed)?.0.bits,
        PhaseSolver::Edvqe(cfg) => {
            let cfg = EdvqeConfig {
                subsystem_size: cfg.subsystem_size.min(n),
                ..cfg.clone()
            };
            edvqe_solve(graph, &cfg, seed)?.best.bits
        }
    })
}

/// Conflict graph, MaxCut per read component, consensus and metrics.
/// `truth` enables the switch and Hamming error rates.
pub fn phase(
    frags: &FragmentMatrix,
    mode: ConflictMode,
    solver: &PhaseSolver,
    seed: u64,
    truth: Option<&[i8]>,
) -> Result<PhasingResult> {
    if frags.n_reads() == 0 {
        return Err(Error::InvalidInput("no reads to phase".into()));
    }
    if let Some(t) = truth {
        if t.len() != frags.n_sites() {
            return Err(Error::Dimension(format!(
                "truth has {} sites, fragments have {}",
                t.len(),
                frags.n_sites()
            )));
        }
    }
    let graph = build_conflict_graph(frags, mode);
    let components = read_components(frags);
    let mut bits = vec![0u8; frags.n_reads()];
    for (c, members) in components.iter().enumerate() {
        let sub = build_conflict_graph(&frags.subset(members), mode);
        let part = solve_component(&sub, solver, derive_seed(seed, tags::PHASE, c as u64))?;
        for (&r, b) in members.iter().zip(part) {
            bits[r] = b;
        }
    }
    let (h1, h2) = consensus(frags, &bits)?;
    let mec = mec_score(frags, &h1, &h2)?;
    let completeness = completeness(&h1, frags)?;
    let (switch_error, hamming_error) = match truth {
        Some(t) => (switch_error_rate(&h1, t)?, hamming_error_rate(&h1, t)?),
        None => (None, None),
    };
    Ok(PhasingResult {
        read_partition: CutAssignment {
            cut: cut_value(&graph, &bits)?,
            bits,
        },
        h1,
        h2,
        mec,
        completeness,
        switch_error,
        hamming_error,
        n_components: components.len(),
        n_conflict_edges: graph.n_edges(),
    })
}
