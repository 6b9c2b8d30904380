//! The graph revealing algorithm with full ledger accounting, reservoirs,
//! and witness assembly.
//!
//! Revealing adds the edges of a pruned-graph subgraph T⃗ to a base subgraph
//! H one at a time under an H-compatible ordering, classifying every step
//! and coordinate as a new vertex, a savings, or a delayed vertex. The
//! ledger's aggregates drive exact vertex counts, repetition lower bounds,
//! and the total-savings threshold used to assemble witness graphs from
//! reservoirs.

use std::collections::BTreeSet;

use num_rational::Rational64;
use rand::seq::IndexedRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thiserror::Error;

use crate::coloring::{subgraph_repetitions, ColoredCompleteGraph, Subgraph};
use crate::prune::PrunedEnergyGraph;

pub type Tuple = Vec<u32>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RevealError {
    #[error("step {step}: tuple has {got} coordinates, expected {r}")]
    BadArity { step: usize, got: usize, r: usize },
    #[error("step {step}: endpoints share coordinate {coord}")]
    SharedCoordinate { step: usize, coord: usize },
    #[error("steps {a} and {b} reveal the same edge")]
    DuplicateEdge { a: usize, b: usize },
    #[error("steps {a} and {b} share an endpoint but project to the same edge in coordinate {coord}")]
    NotP3Preserving { a: usize, b: usize, coord: usize },
    #[error("designated endpoint of step {step} has unrevealed coordinates")]
    IncompatibleOrder { step: usize },
    #[error("no compatible order: only {revealed} of {total} edges could be ordered")]
    NoCompatibleOrder { revealed: usize, total: usize },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("not a reservoir: {0}")]
    NotAReservoir(String),
    #[error("reservoir of {members} members cannot host {needed} vertices")]
    ReservoirTooSmall { members: usize, needed: usize },
    #[error("total savings {sav} is below the threshold {t}")]
    InsufficientSavings { sav: String, t: i64 },
}

/// One ordered reveal step: the designated endpoint has every coordinate
/// already revealed, the other endpoint is being disclosed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RevealStep {
    pub designated: Tuple,
    pub other: Tuple,
}

impl RevealStep {
    fn edge_key(&self) -> (Tuple, Tuple) {
        if self.designated <= self.other {
            (self.designated.clone(), self.other.clone())
        } else {
            (self.other.clone(), self.designated.clone())
        }
    }

    /// The base edge this step reveals in coordinate `k`, normalized.
    pub fn projected(&self, k: usize) -> (u32, u32) {
        let (a, b) = (self.designated[k], self.other[k]);
        if a < b {
            (a, b)
        } else {
            (b, a)
        }
    }
}

/// H, T⃗ and an H-compatible ordering with designated endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevealInstance {
    pub r: usize,
    pub h: Subgraph,
    pub steps: Vec<RevealStep>,
}

impl RevealInstance {
    /// Validates arity, distinctness of coordinates along every edge, edge
    /// distinctness, the P₃-preserving projection property on edges sharing
    /// an endpoint, and H-compatibility of the ordering (vertex-set
    /// containment of the designated endpoint's projection).
    pub fn new(r: usize, h: Subgraph, steps: Vec<RevealStep>) -> Result<Self, RevealError> {
        for (i, step) in steps.iter().enumerate() {
            for t in [&step.designated, &step.other] {
                if t.len() != r {
                    return Err(RevealError::BadArity {
                        step: i,
                        got: t.len(),
                        r,
                    });
                }
            }
            for k in 0..r {
                if step.designated[k] == step.other[k] {
                    return Err(RevealError::SharedCoordinate { step: i, coord: k });
                }
            }
        }
        for i in 0..steps.len() {
            for j in i + 1..steps.len() {
                if steps[i].edge_key() == steps[j].edge_key() {
                    return Err(RevealError::DuplicateEdge { a: i, b: j });
                }
                let shared = [&steps[i].designated, &steps[i].other]
                    .into_iter()
                    .any(|t| *t == steps[j].designated || *t == steps[j].other);
                if shared {
                    for k in 0..r {
                        if steps[i].projected(k) == steps[j].projected(k) {
                            return Err(RevealError::NotP3Preserving { a: i, b: j, coord: k });
                        }
                    }
                }
            }
        }
        let mut revealed: BTreeSet<u32> = h.vertices().clone();
        for (i, step) in steps.iter().enumerate() {
            if !step.designated.iter().all(|v| revealed.contains(v)) {
                return Err(RevealError::IncompatibleOrder { step: i });
            }
            revealed.extend(step.designated.iter().copied());
            revealed.extend(step.other.iter().copied());
        }
        Ok(Self { r, h, steps })
    }

    pub fn m(&self) -> usize {
        self.steps.len()
    }

    /// The edge set of T⃗, independent of the ordering.
    pub fn edge_set(&self) -> BTreeSet<(Tuple, Tuple)> {
        self.steps.iter().map(RevealStep::edge_key).collect()
    }
}

/// Per-coordinate classification of one reveal step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    New,
    Savings,
    Delayed,
}

impl Flag {
    pub fn letter(self) -> char {
        match self {
            Flag::New => 'n',
            Flag::Savings => 's',
            Flag::Delayed => 'd',
        }
    }
}

/// Everything the revealing algorithm tracks: per-step per-coordinate
/// flags, aggregates in total and per coordinate, the count of steps with
/// no delayed vertex, the exact total savings, and all snapshots
/// `H = H⁽⁰⁾ ⊆ … ⊆ H⁽ᵐ⁾ = H ∪ π(T⃗)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevealLedger {
    pub r: usize,
    pub flags: Vec<Vec<Flag>>,
    pub n_step: Vec<usize>,
    pub s_step: Vec<usize>,
    pub d_step: Vec<usize>,
    pub n_total: usize,
    pub s_total: usize,
    pub d_total: usize,
    pub n_coord: Vec<usize>,
    pub s_coord: Vec<usize>,
    pub d_coord: Vec<usize>,
    /// Number of steps with `d_i = 0`.
    pub d_zero_steps: usize,
    pub sav: Rational64,
    pub snapshots: Vec<Subgraph>,
}

impl RevealLedger {
    pub fn m(&self) -> usize {
        self.flags.len()
    }

    /// The revealed graph `H ∪ π(T⃗)`.
    pub fn final_graph(&self) -> &Subgraph {
        self.snapshots.last().expect("at least the H snapshot")
    }

    /// Lower bound on repetitions gained by the reveal: `rm - D - d`.
    pub fn repetition_gain_bound(&self) -> i64 {
        (self.r * self.m()) as i64 - self.d_total as i64 - self.d_zero_steps as i64
    }
}

/// Runs the revealing algorithm. Classification of step i is simultaneous
/// across coordinates, against the snapshot before any of step i's edges.
pub fn reveal_ledger(inst: &RevealInstance) -> RevealLedger {
    let r = inst.r;
    let m = inst.m();
    let mut revealed = inst.h.clone();
    let mut snapshots = Vec::with_capacity(m + 1);
    snapshots.push(revealed.clone());
    let mut ledger = RevealLedger {
        r,
        flags: Vec::with_capacity(m),
        n_step: vec![0; m],
        s_step: vec![0; m],
        d_step: vec![0; m],
        n_total: 0,
        s_total: 0,
        d_total: 0,
        n_coord: vec![0; r],
        s_coord: vec![0; r],
        d_coord: vec![0; r],
        d_zero_steps: 0,
        sav: Rational64::from_integer(0),
        snapshots: Vec::new(),
    };
    for (i, step) in inst.steps.iter().enumerate() {
        let mut flags = Vec::with_capacity(r);
        for k in 0..r {
            let (a, b) = step.projected(k);
            let flag = if revealed.contains_edge(a, b) {
                Flag::Delayed
            } else if revealed.contains_vertex(step.other[k]) {
                Flag::Savings
            } else {
                Flag::New
            };
            match flag {
                Flag::New => {
                    ledger.n_step[i] += 1;
                    ledger.n_coord[k] += 1;
                }
                Flag::Savings => {
                    ledger.s_step[i] += 1;
                    ledger.s_coord[k] += 1;
                }
                Flag::Delayed => {
                    ledger.d_step[i] += 1;
                    ledger.d_coord[k] += 1;
                }
            }
            flags.push(flag);
        }
        for k in 0..r {
            let (a, b) = step.projected(k);
            revealed.insert_edge(a, b);
        }
        if ledger.d_step[i] == 0 {
            ledger.d_zero_steps += 1;
        } else {
            ledger.sav += Rational64::new((r - ledger.d_step[i]) as i64, (r - 1) as i64);
        }
        ledger.flags.push(flags);
        snapshots.push(revealed.clone());
    }
    ledger.n_total = ledger.n_coord.iter().sum();
    ledger.s_total = ledger.s_coord.iter().sum();
    ledger.d_total = ledger.d_coord.iter().sum();
    ledger.sav += Rational64::from_integer(ledger.s_total as i64);
    ledger.snapshots = snapshots;
    debug_assert_eq!(ledger.n_total + ledger.s_total + ledger.d_total, r * m);
    debug_assert_eq!(
        ledger.final_graph().vertex_count(),
        inst.h.vertex_count() + ledger.n_total,
        "vertex count law"
    );
    ledger
}

/// Recomputes `S + Σ_i 1(d_i>0)·(r−d_i)/(r−1)` from the per-step flags.
pub fn total_savings(ledger: &RevealLedger) -> Rational64 {
    let r = ledger.r as i64;
    let mut sav = Rational64::from_integer(ledger.s_total as i64);
    for &d_i in &ledger.d_step {
        if d_i > 0 {
            sav += Rational64::new(r - d_i as i64, r - 1);
        }
    }
    sav
}

/// Order-free oracle for `N_k`: vertices of `H ∪ π_k(T⃗)` beyond `H`.
pub fn coordinate_new_vertices(h: &Subgraph, steps: &[RevealStep], k: usize) -> usize {
    let mut verts: BTreeSet<u32> = h.vertices().clone();
    let before = verts.len();
    for step in steps {
        let (a, b) = step.projected(k);
        verts.insert(a);
        verts.insert(b);
    }
    verts.len() - before
}

/// Order-free oracle for `D_k`: per base edge e, `max{0, |π_k⁻¹(e)| − 1(e ∉ E(H))}`.
pub fn coordinate_delayed_vertices(h: &Subgraph, steps: &[RevealStep], k: usize) -> usize {
    let mut counts: std::collections::BTreeMap<(u32, u32), usize> = Default::default();
    for step in steps {
        *counts.entry(step.projected(k)).or_insert(0) += 1;
    }
    counts
        .into_iter()
        .map(|((a, b), c)| c.saturating_sub(usize::from(!h.contains_edge(a, b))))
        .sum()
}

/// Greedy deterministic order: repeatedly reveal the least eligible edge,
/// designating its least eligible endpoint.
pub fn generate_order(
    h: &Subgraph,
    edges: &[(Tuple, Tuple)],
) -> Result<Vec<RevealStep>, RevealError> {
    generate_order_with(h, edges, |eligible| eligible.iter().min().unwrap().clone())
}

/// Seeded order: uniform choice among eligible (edge, designated endpoint)
/// pairs at every step. Order-invariance tests quantify over this.
pub fn generate_order_seeded(
    h: &Subgraph,
    edges: &[(Tuple, Tuple)],
    seed: u64,
) -> Result<Vec<RevealStep>, RevealError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generate_order_with(h, edges, move |eligible| {
        eligible.choose(&mut rng).unwrap().clone()
    })
}

fn generate_order_with(
    h: &Subgraph,
    edges: &[(Tuple, Tuple)],
    mut pick: impl FnMut(&[RevealStep]) -> RevealStep,
) -> Result<Vec<RevealStep>, RevealError> {
    let mut revealed: BTreeSet<u32> = h.vertices().clone();
    let mut remaining: BTreeSet<(Tuple, Tuple)> = edges.iter().cloned().collect();
    let mut steps = Vec::with_capacity(remaining.len());
    let total = remaining.len();
    while !remaining.is_empty() {
        let mut eligible = Vec::new();
        for (a, b) in &remaining {
            for (u, v) in [(a, b), (b, a)] {
                if u.iter().all(|x| revealed.contains(x)) {
                    eligible.push(RevealStep {
                        designated: u.clone(),
                        other: v.clone(),
                    });
                }
            }
        }
        if eligible.is_empty() {
            return Err(RevealError::NoCompatibleOrder {
                revealed: steps.len(),
                total,
            });
        }
        let step = pick(&eligible);
        remaining.remove(&step.edge_key());
        revealed.extend(step.designated.iter().copied());
        revealed.extend(step.other.iter().copied());
        steps.push(step);
    }
    Ok(steps)
}

/// Canonical ordering of a path from its first vertex: step i designates
/// the predecessor and discloses the successor.
pub fn canonical_path_order(path: &[Tuple]) -> Vec<RevealStep> {
    path.windows(2)
        .map(|w| RevealStep {
            designated: w[0].clone(),
            other: w[1].clone(),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SavingsSearch {
    Found { step: usize },
    /// The guaranteed savings step is absent; callers treat this as a
    /// refutation (test failure), never an expected outcome.
    Refuted,
}

/// Searches the canonical reveal of `path` over `f` for the coordinate-k
/// vertex savings promised between steps `j` and `j_end` (inclusive,
/// 0-indexed) when (1) the step-`j` projection is an unrevealed edge and
/// (2) the step-`j_end` disclosed vertex already lies in `f`.
pub fn eventual_savings_site(
    f: &Subgraph,
    path: &[Tuple],
    k: usize,
    j: usize,
    j_end: usize,
) -> Result<SavingsSearch, RevealError> {
    if path.len() < 2 {
        return Err(RevealError::HypothesisViolated("path has no edges".into()));
    }
    let r = path[0].len();
    let steps = canonical_path_order(path);
    let inst = RevealInstance::new(r, f.clone(), steps)?;
    if k >= r || j > j_end || j_end >= inst.m() {
        return Err(RevealError::HypothesisViolated(format!(
            "need k < {r} and j <= j_end < {}, got k = {k}, j = {j}, j_end = {j_end}",
            inst.m()
        )));
    }
    let (a, b) = inst.steps[j].projected(k);
    let mut seen_before_j = f.contains_edge(a, b);
    for earlier in &inst.steps[..j] {
        seen_before_j |= earlier.projected(k) == (a, b);
    }
    if seen_before_j {
        return Err(RevealError::HypothesisViolated(format!(
            "projection of step {j} in coordinate {k} is already revealed"
        )));
    }
    if !f.contains_vertex(inst.steps[j_end].other[k]) {
        return Err(RevealError::HypothesisViolated(format!(
            "coordinate {k} of the step-{j_end} endpoint is not a vertex of F"
        )));
    }
    let ledger = reveal_ledger(&inst);
    for i in j..=j_end {
        if ledger.flags[i][k] == Flag::Savings {
            return Ok(SavingsSearch::Found { step: i });
        }
    }
    Ok(SavingsSearch::Refuted)
}

/// A reservoir for a target subgraph: the source's projection lies in the
/// target, every member is a pruned-graph neighbor of the source, and
/// member projections avoid the target entirely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reservoir {
    pub source: Tuple,
    pub members: Vec<Tuple>,
}

pub fn validate_reservoir(
    pg: &PrunedEnergyGraph,
    h: &Subgraph,
    res: &Reservoir,
) -> Result<(), RevealError> {
    let source_id = pg
        .id_of(&res.source)
        .ok_or_else(|| RevealError::NotAReservoir("source is not a product vertex".into()))?;
    if !res.source.iter().all(|&v| h.contains_vertex(v)) {
        return Err(RevealError::NotAReservoir(
            "source projection is not contained in the target".into(),
        ));
    }
    for (i, member) in res.members.iter().enumerate() {
        let member_id = pg.id_of(member).ok_or_else(|| {
            RevealError::NotAReservoir(format!("member {i} is not a product vertex"))
        })?;
        if !pg.has_edge(source_id, member_id) {
            return Err(RevealError::NotAReservoir(format!(
                "member {i} is not adjacent to the source"
            )));
        }
        if member.iter().any(|&v| h.contains_vertex(v)) {
            return Err(RevealError::NotAReservoir(format!(
                "member {i} projects into the target"
            )));
        }
        for other in &res.members[..i] {
            if member.iter().zip(other).any(|(a, b)| a == b) {
                return Err(RevealError::NotAReservoir(format!(
                    "member {i} shares a coordinate with an earlier member"
                )));
            }
        }
    }
    Ok(())
}

/// A witness graph together with its guaranteed vertex budget and the
/// recounted repetitions it gained over the graph it extends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessGraph {
    pub graph: Subgraph,
    pub vertex_budget: usize,
    pub new_repetitions: u64,
}

/// Spends `d_total` delayed vertices against a reservoir: writes `d_total
/// = wr + z`, adds the source edges of `w` whole members, then `z`
/// coordinate edges of one more member. Exact vertex count, recounted
/// repetition gain of at least `⌊(r−1)·d_total/r⌋`.
pub fn apply_reservoir(
    g: &ColoredCompleteGraph,
    pg: &PrunedEnergyGraph,
    h: &Subgraph,
    res: &Reservoir,
    d_total: usize,
) -> Result<WitnessGraph, RevealError> {
    validate_reservoir(pg, h, res)?;
    let r = pg.r();
    if d_total > r * res.members.len() {
        return Err(RevealError::ReservoirTooSmall {
            members: res.members.len(),
            needed: d_total,
        });
    }
    let (w, z) = (d_total / r, d_total % r);
    let mut star = h.clone();
    for member in &res.members[..w] {
        for (&s, &v) in res.source.iter().zip(member) {
            star.insert_edge(s, v);
        }
    }
    if z > 0 {
        let member = &res.members[w];
        for (&s, &v) in res.source.iter().zip(member).take(z) {
            star.insert_edge(s, v);
        }
    }
    assert_eq!(
        star.vertex_count(),
        h.vertex_count() + d_total,
        "member projections are pairwise disjoint and avoid the target"
    );
    let (_, before) = subgraph_repetitions(g, h);
    let (_, after) = subgraph_repetitions(g, &star);
    let gain_bound = ((r - 1) * d_total / r) as u64;
    assert!(
        after - before >= gain_bound,
        "reservoir gain {} below {}",
        after - before,
        gain_bound
    );
    Ok(WitnessGraph {
        graph: star,
        vertex_budget: h.vertex_count() + d_total,
        new_repetitions: after - before,
    })
}

/// The witness-assembly construction: reveal T⃗ over H, demand total
/// savings at least `t`, then spend `D′ = S + D − t` reservoir vertices.
/// The result extends `H ∪ π(T⃗)`, has exactly `|V(H)| + rm − t` vertices,
/// and gains at least `(r−1)m` repetitions over H, verified by recount.
pub fn construct_witness(
    g: &ColoredCompleteGraph,
    pg: &PrunedEnergyGraph,
    inst: &RevealInstance,
    res: &Reservoir,
    t: usize,
) -> Result<WitnessGraph, RevealError> {
    let r = pg.r();
    let m = inst.m();
    let ledger = reveal_ledger(inst);
    if ledger.sav < Rational64::from_integer(t as i64) {
        return Err(RevealError::InsufficientSavings {
            sav: format!("{}/{}", ledger.sav.numer(), ledger.sav.denom()),
            t: t as i64,
        });
    }
    let revealed = ledger.final_graph();
    validate_reservoir(pg, revealed, res)?;
    if r * res.members.len() < ledger.d_total {
        return Err(RevealError::ReservoirTooSmall {
            members: res.members.len(),
            needed: ledger.d_total,
        });
    }
    let spend = ledger.s_total + ledger.d_total - t;
    let star = apply_reservoir(g, pg, revealed, res, spend)?;
    let budget = inst.h.vertex_count() + r * m - t;
    assert_eq!(star.graph.vertex_count(), budget, "vertex budget is exact");
    let (_, base) = subgraph_repetitions(g, &inst.h);
    let (_, total) = subgraph_repetitions(g, &star.graph);
    let gained = total - base;
    assert!(
        gained >= ((r - 1) * m) as u64,
        "repetition gain {gained} below {}",
        (r - 1) * m
    );
    Ok(WitnessGraph {
        graph: star.graph,
        vertex_budget: budget,
        new_repetitions: gained,
    })
}

/// Draws a valid instance out of a pruned graph: a root tuple whose
/// projection seeds H, optional projected edges and stray vertices mixed
/// into H (sources of delayed vertices and savings), then a T⃗ grown by
/// repeatedly revealing random eligible edges.
pub fn sample_instance(
    g: &ColoredCompleteGraph,
    pg: &PrunedEnergyGraph,
    seed: u64,
    m_target: usize,
) -> Option<RevealInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all_edges: Vec<(u32, u32)> = pg.edges.keys().map(|&(a, b)| (a, b)).collect();
    if all_edges.is_empty() {
        return None;
    }
    let &(a, b) = all_edges.choose(&mut rng).unwrap();
    let root = if rng.random_bool(0.5) { a } else { b };
    let mut h = Subgraph::new();
    for v in pg.tuple(root) {
        h.insert_vertex(v);
    }
    for _ in 0..rng.random_range(0..3u32) {
        let &(x, y) = all_edges.choose(&mut rng).unwrap();
        let (tx, ty) = (pg.tuple(x), pg.tuple(y));
        for k in 0..pg.r() {
            h.insert_edge(tx[k], ty[k]);
        }
    }
    for _ in 0..rng.random_range(0..4u32) {
        h.insert_vertex(rng.random_range(0..g.n() as u32));
    }
    let mut revealed: BTreeSet<u32> = h.vertices().clone();
    let mut chosen: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut steps = Vec::new();
    while steps.len() < m_target {
        let mut eligible = Vec::new();
        for &(x, y) in &all_edges {
            if chosen.contains(&(x, y)) {
                continue;
            }
            for (u, v) in [(x, y), (y, x)] {
                if pg.tuple(u).iter().all(|c| revealed.contains(c)) {
                    eligible.push((u, v));
                }
            }
        }
        let Some(&(u, v)) = eligible.choose(&mut rng) else {
            break;
        };
        chosen.insert(if u < v { (u, v) } else { (v, u) });
        let (tu, tv) = (pg.tuple(u), pg.tuple(v));
        revealed.extend(tu.iter().copied());
        revealed.extend(tv.iter().copied());
        steps.push(RevealStep {
            designated: tu,
            other: tv,
        });
    }
    if steps.is_empty() {
        return None;
    }
    Some(RevealInstance::new(pg.r(), h, steps).expect("sampled instances are valid"))
}

/// The ledger in its external JSON shape: per-step flag letters plus
/// aggregates, with sav as an exact "num/den" string.
pub fn ledger_json(inst: &RevealInstance, ledger: &RevealLedger) -> serde_json::Value {
    let steps: Vec<serde_json::Value> = inst
        .steps
        .iter()
        .zip(&ledger.flags)
        .enumerate()
        .map(|(i, (step, flags))| {
            json!({
                "i": i,
                "designated": step.designated,
                "other": step.other,
                "per_coordinate": flags.iter().map(|f| f.letter().to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "r": ledger.r,
        "m": ledger.m(),
        "steps": steps,
        "n_total": ledger.n_total,
        "s_total": ledger.s_total,
        "d_total": ledger.d_total,
        "n_coord": ledger.n_coord,
        "s_coord": ledger.s_coord,
        "d_coord": ledger.d_coord,
        "d_zero_steps": ledger.d_zero_steps,
        "sav": format!("{}/{}", ledger.sav.numer(), ledger.sav.denom()),
        "revealed_vertices": ledger.final_graph().vertex_count(),
        "repetition_gain_bound": ledger.repetition_gain_bound(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{plant_coloring, Filler};
    use crate::pattern::PatternKind;
    use crate::prune::build_pruned_with_plan;
    use crate::prune::build_pruned;

    fn verts(vs: &[u32]) -> Subgraph {
        Subgraph::from_parts(vs.iter().copied(), std::iter::empty())
    }

    fn step(u: &[u32], v: &[u32]) -> RevealStep {
        RevealStep {
            designated: u.to_vec(),
            other: v.to_vec(),
        }
    }

    #[test]
    fn fresh_disclosure_is_all_new() {
        let inst =
            RevealInstance::new(2, verts(&[0, 3]), vec![step(&[0, 3], &[1, 4])]).unwrap();
        let ledger = reveal_ledger(&inst);
        assert_eq!(ledger.flags, vec![vec![Flag::New, Flag::New]]);
        assert_eq!(ledger.n_total, 2);
        assert_eq!(ledger.final_graph().vertex_count(), 4);
        assert_eq!(ledger.sav, Rational64::from_integer(0));
    }

    #[test]
    fn present_vertex_with_absent_edge_is_a_savings() {
        let inst =
            RevealInstance::new(2, verts(&[0, 3, 4]), vec![step(&[0, 3], &[1, 4])]).unwrap();
        let ledger = reveal_ledger(&inst);
        assert_eq!(ledger.flags, vec![vec![Flag::New, Flag::Savings]]);
        assert_eq!(ledger.sav, Rational64::from_integer(1));
    }

    #[test]
    fn present_edge_is_delayed_and_contributes_fractionally() {
        let mut h = verts(&[0, 3]);
        h.insert_edge(3, 4);
        let inst = RevealInstance::new(2, h, vec![step(&[0, 3], &[1, 4])]).unwrap();
        let ledger = reveal_ledger(&inst);
        assert_eq!(ledger.flags, vec![vec![Flag::New, Flag::Delayed]]);
        assert_eq!(ledger.d_zero_steps, 0);
        assert_eq!(ledger.sav, Rational64::from_integer(1));
    }

    #[test]
    fn one_delayed_of_three_coordinates_saves_one() {
        let mut h = verts(&[0, 3, 6]);
        h.insert_edge(0, 1);
        let inst = RevealInstance::new(3, h, vec![step(&[0, 3, 6], &[1, 4, 7])]).unwrap();
        let ledger = reveal_ledger(&inst);
        assert_eq!(
            ledger.flags,
            vec![vec![Flag::Delayed, Flag::New, Flag::New]]
        );
        assert_eq!(ledger.sav, Rational64::from_integer(1));
        assert_eq!(total_savings(&ledger), ledger.sav);
    }

    #[test]
    fn validation_rejects_bad_instances() {
        assert_eq!(
            RevealInstance::new(2, verts(&[0, 3]), vec![step(&[0, 3], &[0, 4])]),
            Err(RevealError::SharedCoordinate { step: 0, coord: 0 })
        );
        assert_eq!(
            RevealInstance::new(2, verts(&[0, 3]), vec![step(&[1, 4], &[2, 5])]),
            Err(RevealError::IncompatibleOrder { step: 0 })
        );
        assert_eq!(
            RevealInstance::new(
                2,
                verts(&[0, 3]),
                vec![step(&[0, 3], &[1, 4]), step(&[1, 4], &[0, 3])]
            ),
            Err(RevealError::DuplicateEdge { a: 0, b: 1 })
        );
        // Two edges at the shared tuple (1,4) disclosing (0,·) twice: the
        // coordinate-0 walk would repeat vertex 0 at distance two.
        assert_eq!(
            RevealInstance::new(
                2,
                verts(&[0, 3]),
                vec![step(&[0, 3], &[1, 4]), step(&[1, 4], &[0, 5])]
            ),
            Err(RevealError::NotP3Preserving {
                a: 0,
                b: 1,
                coord: 0
            })
        );
    }

    #[test]
    fn generated_orders_are_compatible_and_greedy_is_deterministic() {
        let h = verts(&[0, 5]);
        let edges = vec![
            (vec![0, 5], vec![1, 6]),
            (vec![1, 6], vec![2, 7]),
            (vec![2, 7], vec![3, 8]),
        ];
        let steps = generate_order(&h, &edges).unwrap();
        let inst = RevealInstance::new(2, h.clone(), steps.clone()).unwrap();
        assert_eq!(inst.m(), 3);
        assert_eq!(steps, generate_order(&h, &edges).unwrap());
        for seed in 0..5 {
            let seeded = generate_order_seeded(&h, &edges, seed).unwrap();
            RevealInstance::new(2, h.clone(), seeded).unwrap();
        }
        let stuck = generate_order(&verts(&[9]), &edges);
        assert!(matches!(
            stuck,
            Err(RevealError::NoCompatibleOrder {
                revealed: 0,
                total: 3
            })
        ));
    }

    #[test]
    fn order_invariant_aggregates_match_closed_forms() {
        let g = crate::generate::random_coloring(14, 3, 5).unwrap();
        let pg = build_pruned(&g, 2, 5).unwrap();
        let mut tested = 0;
        for seed in 0..40 {
            let Some(inst) = sample_instance(&g, &pg, seed, 6) else {
                continue;
            };
            let ledger = reveal_ledger(&inst);
            let edges: Vec<(Tuple, Tuple)> = inst.edge_set().into_iter().collect();
            for k in 0..inst.r {
                assert_eq!(
                    ledger.n_coord[k],
                    coordinate_new_vertices(&inst.h, &inst.steps, k)
                );
                assert_eq!(
                    ledger.d_coord[k],
                    coordinate_delayed_vertices(&inst.h, &inst.steps, k)
                );
            }
            for reorder_seed in 0..5 {
                let steps = generate_order_seeded(&inst.h, &edges, reorder_seed).unwrap();
                let other = reveal_ledger(
                    &RevealInstance::new(inst.r, inst.h.clone(), steps).unwrap(),
                );
                assert_eq!(ledger.n_coord, other.n_coord);
                assert_eq!(ledger.s_coord, other.s_coord);
                assert_eq!(ledger.d_coord, other.d_coord);
            }
            tested += 1;
        }
        assert!(tested >= 10, "only {tested} sampled instances");
    }

    #[test]
    fn savings_is_found_where_the_walk_returns() {
        let f = verts(&[0, 5, 2]);
        let path = vec![vec![0, 5], vec![1, 6], vec![2, 7]];
        assert_eq!(
            eventual_savings_site(&f, &path, 0, 0, 1).unwrap(),
            SavingsSearch::Found { step: 1 }
        );
        let single = vec![vec![0, 5], vec![2, 6]];
        assert_eq!(
            eventual_savings_site(&f, &single, 0, 0, 0).unwrap(),
            SavingsSearch::Found { step: 0 }
        );
        let mut f_with_edge = f.clone();
        f_with_edge.insert_edge(0, 1);
        assert!(matches!(
            eventual_savings_site(&f_with_edge, &path, 0, 0, 1),
            Err(RevealError::HypothesisViolated(_))
        ));
        assert!(matches!(
            eventual_savings_site(&f, &path, 1, 0, 1),
            Err(RevealError::HypothesisViolated(_))
        ));
    }

    fn leaf_reservoir(
        a: usize,
        leaves: usize,
        r: usize,
        n: usize,
        seed: u64,
    ) -> (
        ColoredCompleteGraph,
        PrunedEnergyGraph,
        Subgraph,
        Reservoir,
    ) {
        let (g, layout) = plant_coloring(
            n,
            PatternKind::CycleWithStar { a, k: leaves },
            r,
            seed,
            Filler::DistinctRandomOrder,
        )
        .unwrap();
        let pg = build_pruned_with_plan(&g, layout.plan.clone(), seed);
        let source = layout.diagonal_tuple(0);
        let h = Subgraph::from_parts(source.iter().copied(), std::iter::empty());
        let members: Vec<Tuple> = (2 * a..2 * a + leaves)
            .map(|v| layout.diagonal_tuple(v))
            .collect();
        (g, pg, h, Reservoir { source, members })
    }

    #[test]
    fn reservoir_spends_delayed_vertices_exactly() {
        let (g, pg, h, res) = leaf_reservoir(2, 1, 2, 12, 3);
        let out = apply_reservoir(&g, &pg, &h, &res, 2).unwrap();
        assert_eq!(out.graph.vertex_count(), 4);
        assert_eq!(out.new_repetitions, 1);

        let (g, pg, h, res) = leaf_reservoir(2, 2, 3, 18, 4);
        let out = apply_reservoir(&g, &pg, &h, &res, 5).unwrap();
        assert_eq!(out.graph.vertex_count(), 8);
        assert_eq!(out.new_repetitions, 3);

        let zero = apply_reservoir(&g, &pg, &h, &res, 0).unwrap();
        assert_eq!(zero.graph, h);
        assert_eq!(zero.new_repetitions, 0);

        assert_eq!(
            apply_reservoir(&g, &pg, &h, &res, 7).unwrap_err(),
            RevealError::ReservoirTooSmall {
                members: 2,
                needed: 7
            }
        );
    }

    #[test]
    fn reservoir_validation_rejects_broken_inputs() {
        let (_, pg, h, res) = leaf_reservoir(2, 1, 2, 12, 3);
        let mut inflated = res.clone();
        inflated.members.push(res.source.clone());
        assert!(matches!(
            validate_reservoir(&pg, &h, &inflated),
            Err(RevealError::NotAReservoir(_))
        ));
        let mut floating = res.clone();
        floating.source = vec![u32::MAX, u32::MAX];
        assert!(matches!(
            validate_reservoir(&pg, &h, &floating),
            Err(RevealError::NotAReservoir(_))
        ));
    }

    #[test]
    fn witness_assembly_meets_the_stated_bounds() {
        let (g, layout) = plant_coloring(
            20,
            PatternKind::Path { l: 4 },
            2,
            9,
            Filler::DistinctRandomOrder,
        )
        .unwrap();
        let pg = build_pruned_with_plan(&g, layout.plan.clone(), 9);
        let diag = layout.diagonal_tuples();
        let mut h = Subgraph::new();
        for v in diag[0].iter().chain(&diag[3]) {
            h.insert_vertex(*v);
        }
        let steps = canonical_path_order(&diag);
        let inst = RevealInstance::new(2, h.clone(), steps).unwrap();
        let ledger = reveal_ledger(&inst);
        assert_eq!(ledger.s_total, 2);
        assert_eq!(ledger.d_total, 0);
        assert_eq!(ledger.sav, Rational64::from_integer(2));

        let res = Reservoir {
            source: diag[0].clone(),
            members: vec![],
        };
        let out = construct_witness(&g, &pg, &inst, &res, 2).unwrap();
        assert_eq!(out.vertex_budget, 4 + 2 * 3 - 2);
        assert_eq!(out.graph.vertex_count(), 8);
        assert_eq!(out.new_repetitions, 3);

        assert!(matches!(
            construct_witness(&g, &pg, &inst, &res, 3),
            Err(RevealError::InsufficientSavings { .. })
        ));
    }

    #[test]
    fn savings_splits_across_a_concatenation() {
        let g = crate::generate::random_coloring(14, 3, 8).unwrap();
        let pg = build_pruned(&g, 2, 8).unwrap();
        let mut tested = 0;
        for seed in 100..160 {
            let Some(inst) = sample_instance(&g, &pg, seed, 6) else {
                continue;
            };
            if inst.m() < 2 {
                continue;
            }
            let ledger = reveal_ledger(&inst);
            for cut in 1..inst.m() {
                let first = RevealInstance::new(
                    inst.r,
                    inst.h.clone(),
                    inst.steps[..cut].to_vec(),
                )
                .unwrap();
                let second = RevealInstance::new(
                    inst.r,
                    ledger.snapshots[cut].clone(),
                    inst.steps[cut..].to_vec(),
                )
                .unwrap();
                assert_eq!(
                    ledger.sav,
                    reveal_ledger(&first).sav + reveal_ledger(&second).sav
                );
            }
            tested += 1;
        }
        assert!(tested >= 10, "only {tested} concatenations tested");
    }
}
