use serde::Serialize;

use crate::error::{Error, Result};

/// Assignment of graph vertices to subsystems. Block `b` holds the global
/// vertex indices simulated by subsystem `b`; position within the block is
/// the local qubit index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsystemLayout {
    blocks: Vec<Vec<usize>>,
    subsystem_size: usize,
    #[serde(skip)]
    owner: Vec<(usize, usize)>,
}

impl SubsystemLayout {
    /// Validates that `blocks` partition `0..n_vertices`, each block is
    /// strictly increasing and no longer than `subsystem_size`.
    pub fn from_blocks(
        n_vertices: usize,
        blocks: Vec<Vec<usize>>,
        subsystem_size: usize,
    ) -> Result<Self> {
        let mut owner = vec![(usize::MAX, usize::MAX); n_vertices];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Layout(format!("block {b} is empty")));
            }
            if block.len() > subsystem_size {
                return Err(Error::Layout(format!(
                    "block {b} has {} vertices, more than subsystem size {subsystem_size}",
                    block.len()
                )));
            }
            if block.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Layout(format!(
                    "block {b} is not strictly increasing"
                )));
            }
            for (q, &v) in block.iter().enumerate() {
                let slot = owner.get_mut(v).ok_or_else(|| {
                    Error::Layout(format!("vertex {v} out of range for {n_vertices} vertices"))
                })?;
                if slot.0 != usize::MAX {
                    return Err(Error::Layout(format!("vertex {v} appears in two blocks")));
                }
                *slot = (b, q);
            }
        }
        if let Some(v) = owner.iter().position(|o| o.0 == usize::MAX) {
            return Err(Error::Layout(format!(
                "vertex {v} is not assigned to any block"
            )));
        }
        Ok(Self {
            blocks,
            subsystem_size,
            owner,
        })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.owner.len()
    }

    pub fn subsystem_size(&self) -> usize {
        self.subsystem_size
    }

    /// `(block, local qubit)` holding vertex `v`.
    pub fn owner(&self, v: usize) -> (usize, usize) {
        self.owner[v]
    }
}

/// Contiguous blocks of `subsystem_size` vertices; the last block may be
/// smaller.
pub fn partition_vertices(n_vertices: usize, subsystem_size: usize) -> Result<SubsystemLayout> {
    if subsystem_size < 2 {
        return Err(Error::InvalidConfig(format!(
            "subsystem size must be at least 2, got {subsystem_size}"
        )));
    }
    let blocks = (0..n_vertices)
        .step_by(subsystem_size)
        .map(|start| (start..(start + subsystem_size).min(n_vertices)).collect())
        .collect();
    SubsystemLayout::from_blocks(n_vertices, blocks, subsystem_size)
}
