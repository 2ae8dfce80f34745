//! Read-based haplotype phasing as MaxCut on a read conflict graph.

mod conflict;
mod fragments;
mod phase;

pub use conflict::{build_conflict_graph, pair_counts, ConflictMode};
pub use fragments::{
    format_fragments, format_fragments_sparse, format_haplotype, gen_synthetic_diploid,
    parse_fragments, parse_haplotype, read_fragments, read_haplotype, write_fragments,
    write_haplotype, FragmentMatrix,
};
pub use phase::{
    completeness, consensus, hamming_error_rate, haplotype_string, mec_score, phase,
    read_components, switch_error_rate, PhaseSolver, PhasingResult,
};
