//! Color energy methods for generalized Ramsey lower bounds.
//!
//! A (p, q)-coloring of `K_n` makes every p-clique span at least q colors.
//! This crate builds the machinery for reasoning about such colorings
//! through r-th color energy graphs: exact energy statistics and the Hölder
//! color-count bound, pruned energy graphs with their structural guarantees,
//! reveal-process bookkeeping for repetition counting, witness pipelines
//! that turn pattern copies in pruned graphs into violation certificates,
//! and an exhaustive oracle for tiny exact values.

pub mod coloring;
pub mod combin;
pub mod energy;
pub mod exact;
pub mod generate;
pub mod matcher;
pub mod pattern;
pub mod prune;
pub mod reveal;
pub mod witness;

pub use coloring::{
    is_pq_coloring, max_color_degree, repetitions_of_subset, ColoredCompleteGraph, PqMode,
    PqParams, PqVerdict, RepetitionCount, Subgraph,
};
pub use exact::{
    coloring_with_palette, exact_f, exact_f_capped, exponent_entry, exponent_table, search_cap,
    ExactCache, ExactError, ExactResult, ExponentEntry, TheoremInstance,
};
pub use energy::{
    build_energy_graph, color_energy, edge_count_exact, holder_lower_bound,
    paper_edge_statistic, EnergyCaps, EnergyGraph, HolderBound,
};
pub use generate::{generate_coloring, plant_coloring, Filler, PlantLayout, Scheme};
pub use matcher::{find_subgraph, Embedding, SimpleGraph};
pub use pattern::{make_pattern, parse_pattern, PatternGraph, PatternKind};
pub use prune::{build_pruned, build_pruned_with_plan, verify_pruned, PrunePlan, PrunedEnergyGraph};
pub use reveal::{
    canonical_path_order, construct_witness, eventual_savings_site, reveal_ledger, total_savings,
    Reservoir, RevealError, RevealInstance, RevealLedger, RevealStep, SavingsSearch, Tuple,
};
pub use witness::{
    extract_subkt, extract_subktt, extract_theta, greedy_low_color_clique, incidence_witness,
    validate_witness, GreedyOutcome, PipelineError, PipelineParams, Provenance, WitnessDefect,
    WitnessReport,
};
