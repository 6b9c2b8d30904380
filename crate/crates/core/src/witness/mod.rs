//! Pipelines that turn structure in the pruned energy graph (or in the
//! coloring directly) into a concrete vertex set spanning fewer colors than
//! a stated `(p, q)` bound allows.
//!
//! Every pipeline recounts its output against the coloring before returning;
//! [`validate_witness`] repeats the recount so reports can be checked long
//! after the run that produced them.

mod greedy;
mod incidence;
mod subkt;
mod subktt;
mod theta;

pub use greedy::{greedy_low_color_clique, GreedyOutcome};
pub use incidence::incidence_witness;
pub use subkt::extract_subkt;
pub use subktt::extract_subktt;
pub use theta::extract_theta;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{repetitions_of_subset, ColoredCompleteGraph, GraphError, Subgraph};
use crate::matcher::DEFAULT_BUDGET;
use crate::reveal::{RevealError, Tuple};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("no pattern copy found (budget exhausted: {budget_exhausted})")]
    NotFound { budget_exhausted: bool },
    #[error("every found copy left too few coordinate-disjoint reservoir vertices")]
    ReservoirDepleted,
    #[error("chapter {chapter} lost its guaranteed savings: {detail}")]
    ChapterGuaranteeFailed { chapter: usize, detail: String },
    #[error("runtime check of {lemma} failed: {detail}")]
    LemmaCheckFailed { lemma: String, detail: String },
    #[error("cannot pad the witness to {p} vertices: {detail}")]
    PaddingInfeasible { p: usize, detail: String },
    #[error("bad pipeline parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Reveal(#[from] RevealError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Search knobs shared by the pruned-graph pipelines.
#[derive(Debug, Clone, Copy)]
pub struct PipelineParams {
    /// Overrides the default abundance of the searched pattern (`2a(r+1)`
    /// pendant leaves, `2ra²b` or `30rbl²` parallel paths). The defaults are
    /// generous; desk-scale hosts usually need this dialed down.
    pub multiplicity: Option<usize>,
    /// Node-expansion budget for the subgraph search.
    pub budget: u64,
    /// How many embeddings to request up front; a copy whose reservoir
    /// comes up short falls through to the next one.
    pub retries: usize,
    /// Recorded in the provenance so replays can be keyed to the run.
    pub seed: u64,
}

impl Default for PipelineParams {
    fn default() -> Self {
        PipelineParams {
            multiplicity: None,
            budget: DEFAULT_BUDGET,
            retries: 8,
            seed: 0,
        }
    }
}

/// Which chapter source a subdivided-bipartite run committed to.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChapterChoice {
    pub chapter: usize,
    /// `Some(page)` when a whole page cleared the savings test, `None` when
    /// the chapter fell back to the three first paths.
    pub page: Option<usize>,
    /// Exact total savings of the chosen piece, as `num/den`.
    pub sav: String,
}

/// Where a report came from: the pipeline, the pattern embedding as product
/// vertices, the reservoir, the reveal ledger, and pipeline-specific notes.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct Provenance {
    pub pipeline: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub embedding: Vec<Tuple>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub reservoir: Vec<Tuple>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ledger: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub chapters: Vec<ChapterChoice>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

/// A violating clique made explicit: `vertices` spans `distinct_colors`
/// colors, fewer than the `q_claimed` demanded of a `(p, q)`-coloring.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessReport {
    pub vertices: Vec<u32>,
    pub p_claimed: usize,
    pub q_claimed: usize,
    pub distinct_colors: usize,
    pub repetitions: usize,
    pub provenance: Provenance,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WitnessDefect {
    #[error("witness has {got} vertices, more than the claimed p = {p}")]
    TooManyVertices { got: usize, p: usize },
    #[error("stored distinct_colors {stored} disagrees with recount {recounted}")]
    DistinctMismatch { stored: usize, recounted: usize },
    #[error("stored repetitions {stored} disagrees with recount {recounted}")]
    RepetitionMismatch { stored: usize, recounted: usize },
    #[error("vertex set spans {distinct} colors, not below q = {q}")]
    NotViolating { distinct: usize, q: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Recounts a report from scratch and confirms it certifies a violation.
pub fn validate_witness(
    g: &ColoredCompleteGraph,
    w: &WitnessReport,
) -> Result<(), WitnessDefect> {
    if w.vertices.len() > w.p_claimed {
        return Err(WitnessDefect::TooManyVertices {
            got: w.vertices.len(),
            p: w.p_claimed,
        });
    }
    let count = repetitions_of_subset(g, &w.vertices)?;
    if count.distinct_colors as usize != w.distinct_colors {
        return Err(WitnessDefect::DistinctMismatch {
            stored: w.distinct_colors,
            recounted: count.distinct_colors as usize,
        });
    }
    if count.repetitions as usize != w.repetitions {
        return Err(WitnessDefect::RepetitionMismatch {
            stored: w.repetitions,
            recounted: count.repetitions as usize,
        });
    }
    if w.distinct_colors >= w.q_claimed {
        return Err(WitnessDefect::NotViolating {
            distinct: w.distinct_colors,
            q: w.q_claimed,
        });
    }
    Ok(())
}

/// Pads the vertex set with the smallest unused host vertices up to exactly
/// `p` (a superset clique keeps every repetition), recounts, and seals the
/// report. The final recount must land below `q`; a miss means the pipeline
/// that called this broke its own guarantee, so it panics rather than
/// returning a bad report.
pub(crate) fn finish_report(
    g: &ColoredCompleteGraph,
    verts: impl IntoIterator<Item = u32>,
    p: usize,
    q: usize,
    provenance: Provenance,
) -> Result<WitnessReport, PipelineError> {
    let mut verts: Vec<u32> = verts.into_iter().collect();
    verts.sort_unstable();
    verts.dedup();
    assert!(
        verts.len() <= p,
        "pipeline produced {} vertices against a budget of {p}",
        verts.len()
    );
    if g.n() < p {
        return Err(PipelineError::PaddingInfeasible {
            p,
            detail: format!("host has only {} vertices", g.n()),
        });
    }
    let have: BTreeSet<u32> = verts.iter().copied().collect();
    let mut fresh = (0..g.n() as u32).filter(|v| !have.contains(v));
    while verts.len() < p {
        verts.push(fresh.next().expect("host is at least p"));
    }
    verts.sort_unstable();
    let count = repetitions_of_subset(g, &verts)?;
    let distinct = count.distinct_colors as usize;
    assert!(
        distinct < q,
        "recount found {distinct} distinct colors, not below q = {q}"
    );
    Ok(WitnessReport {
        vertices: verts,
        p_claimed: p,
        q_claimed: q,
        distinct_colors: distinct,
        repetitions: count.repetitions as usize,
        provenance,
    })
}

/// Inserts every coordinate of `t` as a vertex.
pub(crate) fn add_projected_vertex(sub: &mut Subgraph, t: &[u32]) {
    for &v in t {
        sub.insert_vertex(v);
    }
}

/// Inserts all `r` projected base edges of the pruned edge `uv`.
pub(crate) fn add_projected_edge(sub: &mut Subgraph, u: &[u32], v: &[u32]) {
    for k in 0..u.len() {
        sub.insert_edge(u[k], v[k]);
    }
}

/// The coordinates already owned by a set under construction.
pub(crate) fn coordinate_pool(tuples: &[Tuple]) -> BTreeSet<u32> {
    tuples.iter().flat_map(|t| t.iter().copied()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::round_robin_proper;

    #[test]
    fn validation_recounts_and_rejects_tampering() {
        let g = round_robin_proper(4).unwrap();
        let count = repetitions_of_subset(&g, &[0, 1, 2]).unwrap();
        assert_eq!(count.distinct_colors, 3);
        let genuine = WitnessReport {
            vertices: vec![0, 1, 2],
            p_claimed: 3,
            q_claimed: 3,
            distinct_colors: 3,
            repetitions: 0,
            provenance: Provenance::default(),
        };
        assert_eq!(
            validate_witness(&g, &genuine),
            Err(WitnessDefect::NotViolating { distinct: 3, q: 3 })
        );

        let mut inflated = genuine.clone();
        inflated.q_claimed = 5;
        inflated.repetitions = 2;
        assert_eq!(
            validate_witness(&g, &inflated),
            Err(WitnessDefect::RepetitionMismatch {
                stored: 2,
                recounted: 0
            })
        );

        let mut oversized = genuine.clone();
        oversized.p_claimed = 2;
        assert_eq!(
            validate_witness(&g, &oversized),
            Err(WitnessDefect::TooManyVertices { got: 3, p: 2 })
        );

        let mut misread = genuine;
        misread.q_claimed = 5;
        misread.distinct_colors = 2;
        assert_eq!(
            validate_witness(&g, &misread),
            Err(WitnessDefect::DistinctMismatch {
                stored: 2,
                recounted: 3
            })
        );
    }

    #[test]
    fn padding_tops_up_with_least_unused_vertices() {
        let g = round_robin_proper(6).unwrap();
        let report = finish_report(
            &g,
            [5u32, 2],
            4,
            100,
            Provenance::default(),
        )
        .unwrap();
        assert_eq!(report.vertices, vec![0, 1, 2, 5]);
        assert_eq!(report.p_claimed, 4);
        assert!(validate_witness(&g, &report).is_ok());

        let err = finish_report(&g, [0u32], 9, 100, Provenance::default());
        assert!(matches!(
            err,
            Err(PipelineError::PaddingInfeasible { p: 9, .. })
        ));
    }
}
