//! Incidence extractor: after deleting rare colors, a bipartite pattern in
//! the vertex-color incidence graph pins down a union of stars whose edges
//! reuse few colors. Overlapping stars shed an edge apiece, which is paid
//! back by padding with fresh edges from the same color pool.

use std::collections::BTreeSet;

use crate::coloring::{ColoredCompleteGraph, Subgraph};
use crate::combin::choose2;
use crate::matcher::{find_subgraph_filtered, SimpleGraph};
use crate::pattern::PatternGraph;

use super::{finish_report, PipelineError, PipelineParams, Provenance, WitnessReport};

/// Searches the vertex-color incidence graph of `g` (colors thinner than
/// `n^{(2−γ)/2}` removed) for `f` with its vertex-0 side on vertices and
/// the other side on colors, then assembles a star union violating
/// `(|A| + |E(f)|, C(|A|+|E(f)|,2) − (|E(f)| − |B|) + 1)`.
pub fn incidence_witness(
    g: &ColoredCompleteGraph,
    f: &PatternGraph,
    gamma: f64,
    params: PipelineParams,
) -> Result<WitnessReport, PipelineError> {
    if !(1.0 < gamma && gamma < 2.0) {
        return Err(PipelineError::BadParams(format!(
            "need 1 < gamma < 2, got {gamma}"
        )));
    }
    let Some((side_a, side_b)) = f.bipartition() else {
        return Err(PipelineError::BadParams(
            "pattern is not connected bipartite".into(),
        ));
    };
    if f.edges().len() < 2 {
        return Err(PipelineError::BadParams(
            "pattern needs at least two edges".into(),
        ));
    }

    let n = g.n();
    let threshold = (n as f64).powf((2.0 - gamma) / 2.0);
    let surviving: Vec<u32> = g
        .class_sizes()
        .iter()
        .enumerate()
        .filter(|&(_, &size)| size as f64 >= threshold)
        .map(|(c, _)| c as u32)
        .collect();

    let mut host = SimpleGraph::new(n + surviving.len());
    for (slot, &c) in surviving.iter().enumerate() {
        for &(u, v) in g.class(c) {
            host.add_edge(u as usize, n + slot);
            host.add_edge(v as usize, n + slot);
        }
    }

    let on_vertex_side: Vec<bool> = {
        let mut side = vec![false; f.vertex_count()];
        for &v in &side_a {
            side[v] = true;
        }
        side
    };
    let outcome = find_subgraph_filtered(&host, f, 1, params.budget, |pv, hv| {
        on_vertex_side[pv] == (hv < n)
    });
    let Some(emb) = outcome.embeddings.first() else {
        return Err(PipelineError::NotFound {
            budget_exhausted: outcome.budget_exhausted,
        });
    };

    // One star edge per incidence: the least edge of the matched color at
    // the matched center.
    let color_at = |pv: usize| surviving[emb.map[pv] - n];
    let mut picked = BTreeSet::new();
    let mut slots = 0usize;
    for &pa in &side_a {
        let v = emb.map[pa] as u32;
        for pb in f.neighbors(pa) {
            let c = color_at(pb);
            let edge = g
                .class(c)
                .iter()
                .find(|&&(x, y)| x == v || y == v)
                .copied()
                .expect("incidence edges come from class edges");
            slots += 1;
            picked.insert(edge);
        }
    }
    let overlap = slots - picked.len();

    // Pay each shed edge back with a fresh same-pool edge.
    let pool: BTreeSet<u32> = side_b.iter().map(|&pb| color_at(pb)).collect();
    let padding: Vec<(u32, u32)> = pool
        .iter()
        .flat_map(|&c| g.class(c))
        .filter(|e| !picked.contains(*e))
        .take(overlap)
        .copied()
        .collect();
    if padding.len() < overlap {
        return Err(PipelineError::PaddingInfeasible {
            p: side_a.len() + f.edges().len(),
            detail: format!(
                "{} of {overlap} shed edges have no spare in the {} matched colors",
                overlap - padding.len(),
                pool.len()
            ),
        });
    }

    let mut union = Subgraph::new();
    for &(u, v) in picked.iter().chain(&padding) {
        union.insert_edge(u, v);
    }
    let p = side_a.len() + f.edges().len();
    let q = choose2(p) - (f.edges().len() - side_b.len()) + 1;
    let provenance = Provenance {
        pipeline: "incidence".into(),
        notes: vec![
            format!(
                "centers {:?}, colors {:?}",
                side_a.iter().map(|&pa| emb.map[pa]).collect::<Vec<_>>(),
                pool
            ),
            format!("gamma = {gamma}, overlap = {overlap}, seed = {}", params.seed),
        ],
        ..Provenance::default()
    };
    finish_report(g, union.vertices().iter().copied(), p, q, provenance)
}
