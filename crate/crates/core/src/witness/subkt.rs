//! Subdivided-clique pipeline: a copy of `K_t⁺` in a second-order pruned
//! graph projects, in both coordinates, to `2·C(t,2)` distinct same-colored
//! edge pairs, so the union of the two projections is already a violating
//! set. No reveal or reservoir is needed.

use crate::coloring::{ColoredCompleteGraph, Subgraph};
use crate::combin::choose2;
use crate::matcher::find_subgraph;
use crate::pattern::{make_pattern, PatternKind};
use crate::prune::{PrunedEnergyGraph, TupleId};

use super::{
    add_projected_edge, finish_report, PipelineError, PipelineParams, Provenance, WitnessReport,
};

/// Finds `SubdividedClique(t)` in `pg` and returns the union of both
/// projections: at most `2s` vertices (`s = t + C(t,2)`) carrying at least
/// `2·C(t,2)` repetitions, violating `(2s, C(2s,2) − 2·C(t,2) + 1)`.
pub fn extract_subkt(
    g: &ColoredCompleteGraph,
    pg: &PrunedEnergyGraph,
    t: usize,
    params: PipelineParams,
) -> Result<WitnessReport, PipelineError> {
    if pg.r() != 2 {
        return Err(PipelineError::BadParams(format!(
            "subdivided cliques need a second-order pruned graph, got r = {}",
            pg.r()
        )));
    }
    if t < 3 {
        return Err(PipelineError::BadParams(format!("need t >= 3, got {t}")));
    }
    let pattern = make_pattern(PatternKind::SubdividedClique { t })
        .map_err(|e| PipelineError::BadParams(e.to_string()))?;
    let host = pg.to_host();
    let outcome = find_subgraph(&host, &pattern, 1, params.budget);
    let Some(emb) = outcome.embeddings.first() else {
        return Err(PipelineError::NotFound {
            budget_exhausted: outcome.budget_exhausted,
        });
    };

    let tuples: Vec<Vec<u32>> = emb.map.iter().map(|&v| pg.tuple(v as TupleId)).collect();
    let mut union = Subgraph::new();
    for &(a, b) in pattern.edges() {
        add_projected_edge(&mut union, &tuples[a], &tuples[b]);
    }

    let s = t + choose2(t);
    let p = 2 * s;
    let q = choose2(p) - 2 * choose2(t) + 1;
    let provenance = Provenance {
        pipeline: "subkt".into(),
        embedding: tuples,
        notes: vec![format!("t = {t}, seed = {}", params.seed)],
        ..Provenance::default()
    };
    finish_report(g, union.vertices().iter().copied(), p, q, provenance)
}
