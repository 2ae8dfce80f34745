//! The factorized product-state energy.
//!
//! For a product state every `Z_i Z_j` term is either an intra-block
//! correlator, evaluated inside one subsystem, or a product of two
//! single-qubit expectations from different subsystems. The expected cut is
//! `sum_e w_e (1 - ⟨Z_i Z_j⟩) / 2`.

use crate::circuit::AnsatzCircuit;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::statevector::Statevector;

use super::SubsystemLayout;

#[derive(Debug, Clone, Copy, PartialEq)]
enum EdgeKind {
    Intra,
    Cross,
}

/// A graph bound to a subsystem layout, with the per-block data the energy
/// and gradient need precomputed.
#[derive(Debug, Clone)]
pub struct DistributedModel<'g> {
    graph: &'g WeightedGraph,
    layout: SubsystemLayout,
    kinds: Vec<EdgeKind>,
    /// Per block, per local qubit: `(global neighbor, weight)` for cross-block
    /// edges.
    cross: Vec<Vec<Vec<(usize, f64)>>>,
    /// Per block: `(edge index, local a, local b)` of its intra-block edges.
    intra: Vec<Vec<(usize, usize, usize)>>,
    /// Per block, the diagonal of `-1/2 sum_intra w Z_a Z_b`.
    intra_diag: Vec<Vec<f64>>,
}

impl<'g> DistributedModel<'g> {
    pub fn new(graph: &'g WeightedGraph, layout: SubsystemLayout) -> Result<Self> {
        if layout.n_vertices() != graph.n_vertices() {
            return Err(Error::Layout(format!(
                "layout covers {} vertices, graph has {}",
                layout.n_vertices(),
                graph.n_vertices()
            )));
        }
        let mut kinds = Vec::with_capacity(graph.n_edges());
        let mut cross: Vec<Vec<Vec<(usize, f64)>>> = layout
            .blocks()
            .iter()
            .map(|b| vec![Vec::new(); b.len()])
            .collect();
        let mut intra = vec![Vec::new(); layout.n_blocks()];
        let mut intra_diag: Vec<Vec<f64>> = layout
            .blocks()
            .iter()
            .map(|b| {
                if b.len() > crate::statevector::MAX_QUBITS {
                    return Err(Error::Capacity(format!("block of {} qubits", b.len())));
                }
                Ok(vec![0.0; 1 << b.len()])
            })
            .collect::<Result<_>>()?;
        for (idx, e) in graph.edges().iter().enumerate() {
            let (bi, qi) = layout.owner(e.i);
            let (bj, qj) = layout.owner(e.j);
            if bi == bj {
                kinds.push(EdgeKind::Intra);
                intra[bi].push((idx, qi, qj));
                let half = -0.5 * e.w;
                for (k, d) in intra_diag[bi].iter_mut().enumerate() {
                    if (k >> qi ^ k >> qj) & 1 == 0 {
                        *d += half;
                    } else {
                        *d -= half;
                    }
                }
            } else {
                kinds.push(EdgeKind::Cross);
                cross[bi][qi].push((e.j, e.w));
                cross[bj][qj].push((e.i, e.w));
            }
        }
        Ok(Self {
            graph,
            layout,
            kinds,
            cross,
            intra,
            intra_diag,
        })
    }

    pub fn graph(&self) -> &'g WeightedGraph {
        self.graph
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    /// Diagonal of the block-local observable whose expectation equals the
    /// global energy up to a constant that does not depend on block `b`:
    /// intra-block couplings plus mean fields from the other blocks' `⟨Z⟩`.
    pub fn block_observable(&self, b: usize, z: &[f64]) -> Vec<f64> {
        let mut diag = self.intra_diag[b].clone();
        for (q, neighbors) in self.cross[b].iter().enumerate() {
            let field: f64 = -0.5 * neighbors.iter().map(|&(u, w)| w * z[u]).sum::<f64>();
            if field == 0.0 {
                continue;
            }
            for (k, d) in diag.iter_mut().enumerate() {
                if k >> q & 1 == 0 {
                    *d += field;
                } else {
                    *d -= field;
                }
            }
        }
        diag
    }
}

/// One subsystem's circuit, parameters and prepared state.
#[derive(Debug, Clone)]
pub struct BlockState {
    pub circuit: AnsatzCircuit,
    pub params: Vec<f64>,
    pub state: Statevector,
}

/// Product state over all subsystems with cached `⟨Z_i⟩` (per vertex) and
/// intra-block `⟨Z_i Z_j⟩` (per graph edge; zero for cross edges).
#[derive(Debug, Clone)]
pub struct DistributedState {
    blocks: Vec<BlockState>,
    z: Vec<f64>,
    zz: Vec<f64>,
}

impl DistributedState {
    pub fn new(
        model: &DistributedModel<'_>,
        circuits: Vec<AnsatzCircuit>,
        params: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let layout = model.layout();
        if circuits.len() != layout.n_blocks() || params.len() != layout.n_blocks() {
            return Err(Error::Dimension(format!(
                "{} circuits and {} parameter vectors for {} blocks",
                circuits.len(),
                params.len(),
                layout.n_blocks()
            )));
        }
        let blocks = circuits
            .into_iter()
            .zip(params)
            .zip(layout.blocks())
            .enumerate()
            .map(|(b, ((circuit, params), vertices))| {
                if circuit.n_qubits() != vertices.len() {
                    return Err(Error::Dimension(format!(
                        "block {b} has {} vertices but its circuit has {} qubits",
                        vertices.len(),
                        circuit.n_qubits()
                    )));
                }
                let state = circuit.run(&params)?;
                Ok(BlockState {
                    circuit,
                    params,
                    state,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut out = Self {
            blocks,
            z: vec![0.0; model.graph().n_vertices()],
            zz: vec![0.0; model.graph().n_edges()],
        };
        for b in 0..out.blocks.len() {
            out.refresh_caches(model, b);
        }
        Ok(out)
    }

    pub fn blocks(&self) -> &[BlockState] {
        &self.blocks
    }

    /// Cached `⟨Z_v⟩` for every vertex.
    pub fn z(&self) -> &[f64] {
        &self.z
    }

    /// Cached intra-block correlators aligned with the graph's edge list.
    pub fn zz(&self) -> &[f64] {
        &self.zz
    }

    pub fn params(&self) -> Vec<Vec<f64>> {
        self.blocks.iter().map(|b| b.params.clone()).collect()
    }

    /// Replaces block `b`'s parameters and recomputes its state and caches.
    pub fn set_block_params(
        &mut self,
        model: &DistributedModel<'_>,
        b: usize,
        params: &[f64],
    ) -> Result<()> {
        let block = &mut self.blocks[b];
        block.circuit.run_into(&mut block.state, params)?;
        block.params.clear();
        block.params.extend_from_slice(params);
        self.refresh_caches(model, b);
        Ok(())
    }

    fn refresh_caches(&mut self, model: &DistributedModel<'_>, b: usize) {
        let state = &self.blocks[b].state;
        let vertices = &model.layout().blocks()[b];
        for (q, zq) in state.z_expectations().into_iter().enumerate() {
            self.z[vertices[q]] = zq;
        }
        let probs = state.probabilities();
        for &(e, qa, qb) in &model.intra[b] {
            let mask = (1usize << qa) | (1usize << qb);
            self.zz[e] = probs
                .iter()
                .enumerate()
                .map(|(k, p)| {
                    if (k & mask).count_ones() % 2 == 0 {
                        *p
                    } else {
                        -*p
                    }
                })
                .sum();
        }
    }
}

/// Expected cut of the product state, summed in edge-list order.
pub fn distributed_energy(model: &DistributedModel<'_>, dstate: &DistributedState) -> f64 {
    model
        .graph()
        .edges()
        .iter()
        .zip(&model.kinds)
        .zip(&dstate.zz)
        .map(|((e, kind), zz)| {
            let corr = match kind {
                EdgeKind::Intra => *zz,
                EdgeKind::Cross => dstate.z[e.i] * dstate.z[e.j],
            };
            0.5 * e.w * (1.0 - corr)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_ansatz, AnsatzCircuit, Gate};
    use crate::dvqe::partition_vertices;
    use std::f64::consts::PI;

    #[test]
    fn zero_state_has_zero_energy() {
        let g =
            crate::graph::gen_complete(7, 1, crate::graph::WeightRange::new(1.0, 10.0)).unwrap();
        let model = DistributedModel::new(&g, partition_vertices(7, 3).unwrap()).unwrap();
        let circuits: Vec<_> = model
            .layout()
            .blocks()
            .iter()
            .map(|b| build_ansatz(b.len(), 2).unwrap())
            .collect();
        let params = circuits.iter().map(|c| vec![0.0; c.n_params()]).collect();
        let ds = DistributedState::new(&model, circuits, params).unwrap();
        assert_eq!(distributed_energy(&model, &ds), 0.0);
    }

    #[test]
    fn deterministic_cross_edge() {
        let g = WeightedGraph::new(4, [(1, 2, 3.5)]).unwrap();
        let model = DistributedModel::new(&g, partition_vertices(4, 2).unwrap()).unwrap();
        let rx = |q| AnsatzCircuit::new(2, vec![Gate::Rx { qubit: q, param: 0 }], 1).unwrap();
        // vertex 1 stays |0⟩ (Z=+1), vertex 2 is flipped (Z=-1)
        let ds =
            DistributedState::new(&model, vec![rx(0), rx(0)], vec![vec![PI], vec![PI]]).unwrap();
        assert!((ds.z()[1] - 1.0).abs() < 1e-15);
        assert!((ds.z()[2] + 1.0).abs() < 1e-15);
        assert!((distributed_energy(&model, &ds) - 3.5).abs() < 1e-12);
    }

    #[test]
    fn layout_must_cover_graph() {
        let g = WeightedGraph::empty(5);
        assert!(matches!(
            DistributedModel::new(&g, partition_vertices(4, 2).unwrap()),
            Err(Error::Layout(_))
        ));
    }

    #[test]
    fn circuit_size_must_match_block() {
        let g = WeightedGraph::empty(4);
        let model = DistributedModel::new(&g, partition_vertices(4, 2).unwrap()).unwrap();
        let c = build_ansatz(3, 1).unwrap();
        let p = vec![0.0; c.n_params()];
        assert!(DistributedState::new(&model, vec![c.clone(), c], vec![p.clone(), p]).is_err());
    }
}
