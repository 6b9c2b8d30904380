//! Theta pipeline. Both branches reveal paths between two anchored hubs and
//! spend a reservoir of coordinate-fresh neighbors of one hub.
//!
//! With `b = 2` the theta is an even cycle, so the search target is the
//! cycle plus pendant leaves on one vertex and the leaves stock the
//! reservoir. With `b ≥ 3` the search target is a much fatter theta; paths
//! whose second vertex is coordinate-fresh are selected greedily, the first
//! `b` are revealed and the second vertices of the next `ab` are reserved.

use crate::coloring::{ColoredCompleteGraph, Subgraph};
use crate::combin::choose2;
use crate::matcher::find_subgraph;
use crate::pattern::{make_pattern, PatternKind};
use crate::prune::{PrunedEnergyGraph, TupleId};
use crate::reveal::{
    canonical_path_order, construct_witness, ledger_json, reveal_ledger, Reservoir,
    RevealError, RevealInstance, Tuple,
};

use super::{
    add_projected_edge, add_projected_vertex, coordinate_pool, finish_report, PipelineError,
    PipelineParams, Provenance, WitnessReport,
};

/// Finds `Θ(a,b)` structure in `pg` and assembles a witness violating
/// `(rl, C(rl,2) − (r−1)ab + 1)` with `l = 2 + b(a−1)`.
pub fn extract_theta(
    g: &ColoredCompleteGraph,
    pg: &PrunedEnergyGraph,
    a: usize,
    b: usize,
    params: PipelineParams,
) -> Result<WitnessReport, PipelineError> {
    let r = pg.r();
    if a <= r {
        return Err(PipelineError::BadParams(format!(
            "need a > r, got a = {a} with r = {r}"
        )));
    }
    if b < 2 {
        return Err(PipelineError::BadParams(format!("need b >= 2, got {b}")));
    }
    let l = 2 + b * (a - 1);
    let p = r * l;
    let q = choose2(p) - (r - 1) * a * b + 1;
    if b == 2 {
        cycle_with_star(g, pg, a, p, q, params)
    } else {
        many_paths(g, pg, a, b, p, q, params)
    }
}

/// `b = 2`: the theta is `C_2a`. Search for the cycle with `2a(r+1)` pendant
/// leaves on one vertex; reveal the long way around the cycle, reserve the
/// coordinate-fresh leaves, and demand `t = r` savings.
fn cycle_with_star(
    g: &ColoredCompleteGraph,
    pg: &PrunedEnergyGraph,
    a: usize,
    p: usize,
    q: usize,
    params: PipelineParams,
) -> Result<WitnessReport, PipelineError> {
    let r = pg.r();
    let k = params.multiplicity.unwrap_or(2 * a * (r + 1));
    let pattern = make_pattern(PatternKind::CycleWithStar { a, k })
        .map_err(|e| PipelineError::BadParams(e.to_string()))?;
    let host = pg.to_host();
    let outcome = find_subgraph(&host, &pattern, params.retries.max(1), params.budget);
    let (cycle, hub, leaves) = pattern.cycle_and_leaves().expect("cycle-star pattern");

    let mut depleted = false;
    for emb in &outcome.embeddings {
        let tuple_of = |v: usize| pg.tuple(emb.map[v] as TupleId);
        let hub_tuple = tuple_of(hub);
        // The long u–v path: around the cycle from the hub's successor back
        // to the hub, leaving the edge uv itself to H.
        let path: Vec<Tuple> = cycle[1..]
            .iter()
            .chain([&cycle[0]])
            .map(|&v| tuple_of(v))
            .collect();

        let mut h = Subgraph::new();
        add_projected_vertex(&mut h, &path[0]);
        add_projected_vertex(&mut h, &hub_tuple);
        add_projected_edge(&mut h, &path[0], &hub_tuple);
        let inst = RevealInstance::new(r, h, canonical_path_order(&path))?;

        let mut pool = coordinate_pool(&path);
        let mut members = Vec::new();
        for &leaf in &leaves {
            let t = tuple_of(leaf);
            if t.iter().all(|v| !pool.contains(v)) {
                pool.extend(t.iter().copied());
                members.push(t);
            }
        }
        let res = Reservoir {
            source: hub_tuple,
            members,
        };

        match construct_witness(g, pg, &inst, &res, r) {
            Ok(w) => {
                let provenance = Provenance {
                    pipeline: "theta".into(),
                    embedding: emb.map.iter().map(|&v| pg.tuple(v as TupleId)).collect(),
                    reservoir: res.members.clone(),
                    ledger: Some(ledger_json(&inst, &reveal_ledger(&inst))),
                    notes: vec![format!(
                        "a = {a}, b = 2, leaves = {k}, seed = {}",
                        params.seed
                    )],
                    ..Provenance::default()
                };
                return finish_report(g, w.graph.vertices().iter().copied(), p, q, provenance);
            }
            Err(RevealError::ReservoirTooSmall { .. }) => {
                depleted = true;
                continue;
            }
            Err(e) => return Err(e.into()),
        }
    }
    if depleted {
        Err(PipelineError::ReservoirDepleted)
    } else {
        Err(PipelineError::NotFound {
            budget_exhausted: outcome.budget_exhausted,
        })
    }
}

/// `b ≥ 3`: search `Θ(a, 2ra²b)`, keep `ab + b` paths whose second vertex
/// is coordinate-fresh, reveal the first `b` under the consistent ordering
/// and reserve the second vertices of the rest, demanding `t = rb` savings.
fn many_paths(
    g: &ColoredCompleteGraph,
    pg: &PrunedEnergyGraph,
    a: usize,
    b: usize,
    p: usize,
    q: usize,
    params: PipelineParams,
) -> Result<WitnessReport, PipelineError> {
    let r = pg.r();
    let mult = params.multiplicity.unwrap_or(2 * r * a * a * b);
    if mult < b {
        return Err(PipelineError::BadParams(format!(
            "multiplicity {mult} cannot cover the {b} revealed paths"
        )));
    }
    let pattern = make_pattern(PatternKind::Theta { a, b: mult })
        .map_err(|e| PipelineError::BadParams(e.to_string()))?;
    let host = pg.to_host();
    let outcome = find_subgraph(&host, &pattern, params.retries.max(1), params.budget);
    let ((hub0, hub1), pattern_paths) = pattern.theta_paths().expect("theta pattern");

    let mut depleted = false;
    for emb in &outcome.embeddings {
        let tuple_of = |v: usize| pg.tuple(emb.map[v] as TupleId);
        let v0 = tuple_of(hub0);
        let va = tuple_of(hub1);
        let paths: Vec<Vec<Tuple>> = pattern_paths
            .iter()
            .map(|seq| seq.iter().map(|&v| tuple_of(v)).collect())
            .collect();

        let mut pool = coordinate_pool(&[v0.clone(), va.clone()]);
        let mut selected = Vec::new();
        for (i, path) in paths.iter().enumerate() {
            if selected.len() == a * b + b {
                break;
            }
            if path[1].iter().all(|v| !pool.contains(v)) {
                pool.extend(path.iter().flat_map(|t| t.iter().copied()));
                selected.push(i);
            }
        }
        if selected.len() < b {
            depleted = true;
            continue;
        }

        let mut h = Subgraph::new();
        add_projected_vertex(&mut h, &v0);
        add_projected_vertex(&mut h, &va);
        let mut steps = Vec::new();
        for &i in &selected[..b] {
            steps.extend(canonical_path_order(&paths[i]));
        }
        let inst = RevealInstance::new(r, h, steps)?;
        let res = Reservoir {
            source: v0.clone(),
            members: selected[b..].iter().map(|&i| paths[i][1].clone()).collect(),
        };

        match construct_witness(g, pg, &inst, &res, r * b) {
            Ok(w) => {
                let provenance = Provenance {
                    pipeline: "theta".into(),
                    embedding: emb.map.iter().map(|&v| pg.tuple(v as TupleId)).collect(),
                    reservoir: res.members.clone(),
                    ledger: Some(ledger_json(&inst, &reveal_ledger(&inst))),
                    notes: vec![format!(
                        "a = {a}, b = {b}, searched multiplicity {mult}, seed = {}",
                        params.seed
                    )],
                    ..Provenance::default()
                };
                return finish_report(g, w.graph.vertices().iter().copied(), p, q, provenance);
            }
            Err(RevealError::ReservoirTooSmall { .. }) => {
                depleted = true;
                continue;
            }
            Err(e) => return Err(e.into()),
        }
    }
    if depleted {
        Err(PipelineError::ReservoirDepleted)
    } else {
        Err(PipelineError::NotFound {
            budget_exhausted: outcome.budget_exhausted,
        })
    }
}
