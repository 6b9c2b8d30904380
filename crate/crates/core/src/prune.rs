//! Pruned color energy graphs.
//!
//! Starting from the r-th energy graph, the vertex set is restricted to the
//! product `V_1 x ... x V_r` of a balanced vertex partition, edges must cross
//! a fixed bipartition of every class coordinatewise, and a thinning pass
//! leaves at most one neighbor per (vertex, coordinate, coordinate value).
//! The surviving graph satisfies:
//!
//! 1. tuple coordinates range over the partition classes;
//! 2. every edge's i-th coordinate pair crosses the i-th bipartition;
//! 3. tuples at distance at most two differ in every coordinate.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::ColoredCompleteGraph;
use crate::matcher::SimpleGraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PruneError {
    #[error("r must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("plan does not fit: {0}")]
    PlanInfeasible(String),
}

pub type TupleId = u32;

/// A balanced partition of the base vertices into `r` classes plus one
/// bipartition per class. `sides[k]` is the primed half of class `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrunePlan {
    pub classes: Vec<Vec<u32>>,
    pub sides: Vec<BTreeSet<u32>>,
}

impl PrunePlan {
    /// Seeded plan: a uniform balanced partition into classes, then a
    /// uniform balanced bipartition of each class (degenerate empty/full
    /// sides would void every crossing edge).
    pub fn seeded(n: usize, r: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut verts: Vec<u32> = (0..n as u32).collect();
        verts.shuffle(&mut rng);
        let classes = split_balanced(&verts, n, r);
        let sides = classes
            .iter()
            .map(|class| {
                let mut pool = class.clone();
                pool.shuffle(&mut rng);
                pool.truncate(class.len().div_ceil(2));
                pool.into_iter().collect()
            })
            .collect();
        Self { classes, sides }
    }

    /// Seeded plan whose bipartitions are sized to hold `primed` vertices on
    /// the primed side and `unprimed` on the other, slack split evenly.
    pub fn fitted(
        n: usize,
        r: usize,
        seed: u64,
        primed: usize,
        unprimed: usize,
    ) -> Result<Self, PruneError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut verts: Vec<u32> = (0..n as u32).collect();
        verts.shuffle(&mut rng);
        let classes = split_balanced(&verts, n, r);
        let mut sides = Vec::with_capacity(r);
        for class in &classes {
            if primed + unprimed > class.len() {
                return Err(PruneError::PlanInfeasible(format!(
                    "class of {} vertices cannot hold sides of {} and {}",
                    class.len(),
                    primed,
                    unprimed
                )));
            }
            let take = primed + (class.len() - primed - unprimed) / 2;
            let mut pool = class.clone();
            pool.shuffle(&mut rng);
            sides.push(pool.into_iter().take(take).collect());
        }
        Ok(Self { classes, sides })
    }

    pub fn r(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, v: u32) -> Option<usize> {
        self.classes.iter().position(|c| c.binary_search(&v).is_ok())
    }

    /// True when the edge `{u, v}` (both in class `k`) crosses the k-th
    /// bipartition.
    pub fn crosses(&self, k: usize, u: u32, v: u32) -> bool {
        self.sides[k].contains(&u) != self.sides[k].contains(&v)
    }
}

fn split_balanced(shuffled: &[u32], n: usize, r: usize) -> Vec<Vec<u32>> {
    let base = n / r;
    let extra = n % r;
    let mut classes = Vec::with_capacity(r);
    let mut at = 0;
    for k in 0..r {
        let len = base + usize::from(k < extra);
        let mut class: Vec<u32> = shuffled[at..at + len].to_vec();
        class.sort_unstable();
        classes.push(class);
        at += len;
    }
    classes
}

/// A pruned energy graph. Tuple vertices are the product of the plan's
/// classes, mixed-radix encoded over per-class positions (coordinate 0 most
/// significant); only retained edges are stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrunedEnergyGraph {
    pub n: usize,
    pub seed: u64,
    pub plan: PrunePlan,
    /// Retained edges as normalized tuple-id pairs with their lifted color.
    #[serde(with = "edge_list")]
    pub edges: BTreeMap<(TupleId, TupleId), u32>,
    /// Candidate edge count before thinning (crossing energy edges).
    pub candidates_before_thinning: u64,
}

impl PrunedEnergyGraph {
    pub fn r(&self) -> usize {
        self.plan.r()
    }

    pub fn tuple_count(&self) -> u64 {
        self.plan
            .classes
            .iter()
            .map(|c| c.len() as u64)
            .product()
    }

    pub fn tuple(&self, mut id: TupleId) -> Vec<u32> {
        let r = self.r();
        let mut out = vec![0u32; r];
        for k in (0..r).rev() {
            let len = self.plan.classes[k].len() as TupleId;
            out[k] = self.plan.classes[k][(id % len) as usize];
            id /= len;
        }
        out
    }

    pub fn id_of(&self, tuple: &[u32]) -> Option<TupleId> {
        let mut id: TupleId = 0;
        for (k, &v) in tuple.iter().enumerate() {
            let pos = self.plan.classes[k].binary_search(&v).ok()?;
            id = id * self.plan.classes[k].len() as TupleId + pos as TupleId;
        }
        Some(id)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: TupleId, b: TupleId) -> bool {
        self.edges.contains_key(&norm(a, b))
    }

    pub fn edge_color(&self, a: TupleId, b: TupleId) -> Option<u32> {
        self.edges.get(&norm(a, b)).copied()
    }

    pub fn neighbors(&self, v: TupleId) -> Vec<TupleId> {
        let mut out: Vec<TupleId> = self
            .edges
            .keys()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// The retained graph as a plain host for subgraph search; vertex ids are
    /// tuple ids.
    pub fn to_host(&self) -> SimpleGraph {
        SimpleGraph::from_edges(
            self.tuple_count() as usize,
            self.edges.keys().map(|&(a, b)| (a as usize, b as usize)),
        )
    }
}

fn norm(a: TupleId, b: TupleId) -> (TupleId, TupleId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// JSON object keys must be strings, so the edge map rides as a sorted list
/// of `[a, b, color]` triples.
mod edge_list {
    use super::TupleId;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<(TupleId, TupleId), u32>,
        ser: S,
    ) -> Result<S::Ok, S::Error> {
        let list: Vec<(TupleId, TupleId, u32)> =
            map.iter().map(|(&(a, b), &c)| (a, b, c)).collect();
        list.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> Result<BTreeMap<(TupleId, TupleId), u32>, D::Error> {
        let list = Vec::<(TupleId, TupleId, u32)>::deserialize(de)?;
        Ok(list.into_iter().map(|(a, b, c)| ((a, b), c)).collect())
    }
}

/// Builds the pruned r-th energy graph under the seeded plan.
pub fn build_pruned(
    g: &ColoredCompleteGraph,
    r: usize,
    seed: u64,
) -> Result<PrunedEnergyGraph, PruneError> {
    if r < 2 {
        return Err(PruneError::OrderTooSmall(r));
    }
    let plan = PrunePlan::seeded(g.n(), r, seed);
    Ok(build_pruned_with_plan(g, plan, seed))
}

/// Builds the pruned energy graph under an explicit plan (the seeded path
/// and planted-instance tests share this).
pub fn build_pruned_with_plan(
    g: &ColoredCompleteGraph,
    plan: PrunePlan,
    seed: u64,
) -> PrunedEnergyGraph {
    let r = plan.r();
    let mut pg = PrunedEnergyGraph {
        n: g.n(),
        seed,
        plan,
        edges: BTreeMap::new(),
        candidates_before_thinning: 0,
    };
    // Per color and class: the class edges inside V_k that cross the
    // bipartition, as oriented pairs.
    let class_sets: Vec<BTreeSet<u32>> = pg
        .plan
        .classes
        .iter()
        .map(|c| c.iter().copied().collect())
        .collect();
    let mut adj: BTreeMap<TupleId, BTreeSet<TupleId>> = BTreeMap::new();
    for color in 0..g.num_colors() as u32 {
        let mut per_coord: Vec<Vec<(u32, u32)>> = vec![Vec::new(); r];
        for &(u, v) in g.class(color) {
            for k in 0..r {
                if class_sets[k].contains(&u)
                    && class_sets[k].contains(&v)
                    && pg.plan.crosses(k, u, v)
                {
                    per_coord[k].push((u, v));
                    per_coord[k].push((v, u));
                }
            }
        }
        if per_coord.iter().any(Vec::is_empty) {
            continue;
        }
        let mut x = vec![0u32; r];
        let mut y = vec![0u32; r];
        collect_product(&per_coord, &mut x, &mut y, 0, &mut |x, y| {
            let xi = pg.id_of(x).expect("coordinate in class");
            let yi = pg.id_of(y).expect("coordinate in class");
            if xi < yi {
                pg.edges.insert((xi, yi), color);
                adj.entry(xi).or_default().insert(yi);
                adj.entry(yi).or_default().insert(xi);
            }
        });
    }
    pg.candidates_before_thinning = pg.edges.len() as u64;

    // Thinning: for every vertex, coordinate, and coordinate value, keep at
    // most one neighbor with that value (the least tuple id). Deletion only
    // shrinks neighborhoods, so one sweep in id order suffices.
    let vertex_order: Vec<TupleId> = adj.keys().copied().collect();
    for &z in &vertex_order {
        let neighbors: Vec<TupleId> = match adj.get(&z) {
            Some(s) => s.iter().copied().collect(),
            None => continue,
        };
        let mut keep: BTreeMap<(usize, u32), TupleId> = BTreeMap::new();
        for &x in &neighbors {
            let tx = pg.tuple(x);
            for (k, &v) in tx.iter().enumerate() {
                keep.entry((k, v)).or_insert(x);
            }
        }
        for &x in &neighbors {
            let tx = pg.tuple(x);
            let retained = (0..r).all(|k| keep[&(k, tx[k])] == x);
            if !retained {
                pg.edges.remove(&norm(z, x));
                adj.get_mut(&z).map(|s| s.remove(&x));
                adj.get_mut(&x).map(|s| s.remove(&z));
            }
        }
    }

    // Final guarantee sweep: delete any residual distance-<=2 violations
    // (none are expected after thinning; this makes the property
    // unconditional).
    loop {
        let report = verify_pruned(&pg, g);
        let mut removed = false;
        for violation in &report.violations {
            if let PruneViolation::SharedCoordinate { via, x, y, .. } = violation {
                let (a, b) = if x > y { (*via, *x) } else { (*via, *y) };
                if pg.edges.remove(&norm(a, b)).is_some() {
                    removed = true;
                    break;
                }
            }
        }
        if !removed {
            break;
        }
    }
    pg
}

fn collect_product(
    per_coord: &[Vec<(u32, u32)>],
    x: &mut Vec<u32>,
    y: &mut Vec<u32>,
    k: usize,
    sink: &mut impl FnMut(&[u32], &[u32]),
) {
    if k == per_coord.len() {
        sink(x, y);
        return;
    }
    for &(a, b) in &per_coord[k] {
        x[k] = a;
        y[k] = b;
        collect_product(per_coord, x, y, k + 1, sink);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PruneViolation {
    /// Partition classes must tile `0..n` with balanced sizes.
    BadPartition { detail: String },
    /// A retained edge is not an energy edge of the base coloring.
    NotEnergyEdge { x: TupleId, y: TupleId },
    /// A retained edge whose k-th coordinate pair does not cross side k.
    EdgeNotCrossing { x: TupleId, y: TupleId, coord: usize },
    /// Two tuples at distance <= 2 share coordinate `coord`; `via` is the
    /// middle vertex (equal to `x` for a direct edge).
    SharedCoordinate {
        x: TupleId,
        y: TupleId,
        via: TupleId,
        coord: usize,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneReport {
    pub violations: Vec<PruneViolation>,
}

impl PruneReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the three pruned-graph properties plus edge genuineness against
/// the base coloring, listing every violation with a witness.
pub fn verify_pruned(pg: &PrunedEnergyGraph, g: &ColoredCompleteGraph) -> PruneReport {
    let mut report = PruneReport::default();
    let r = pg.r();

    // Property 1: balanced partition covering every vertex exactly once.
    let mut seen: BTreeMap<u32, usize> = BTreeMap::new();
    for (k, class) in pg.plan.classes.iter().enumerate() {
        for &v in class {
            if seen.insert(v, k).is_some() {
                report.violations.push(PruneViolation::BadPartition {
                    detail: format!("vertex {v} appears in two classes"),
                });
            }
        }
        let lo = pg.n / r;
        let hi = pg.n.div_ceil(r);
        if class.len() < lo || class.len() > hi {
            report.violations.push(PruneViolation::BadPartition {
                detail: format!("class {k} has size {}, outside [{lo}, {hi}]", class.len()),
            });
        }
        if !pg.plan.sides[k].iter().all(|v| class.binary_search(v).is_ok()) {
            report.violations.push(PruneViolation::BadPartition {
                detail: format!("side {k} is not a subset of its class"),
            });
        }
    }
    if seen.len() != pg.n {
        report.violations.push(PruneViolation::BadPartition {
            detail: format!("classes cover {} of {} vertices", seen.len(), pg.n),
        });
    }

    // Property 2 (and edge genuineness) per retained edge.
    let mut adj: BTreeMap<TupleId, Vec<TupleId>> = BTreeMap::new();
    for (&(a, b), &color) in &pg.edges {
        let ta = pg.tuple(a);
        let tb = pg.tuple(b);
        let genuine = (0..r).all(|k| ta[k] != tb[k])
            && (0..r).all(|k| g.color_of(ta[k], tb[k]) == color);
        if !genuine {
            report
                .violations
                .push(PruneViolation::NotEnergyEdge { x: a, y: b });
        }
        for k in 0..r {
            if ta[k] == tb[k] || !pg.plan.crosses(k, ta[k], tb[k]) {
                report.violations.push(PruneViolation::EdgeNotCrossing {
                    x: a,
                    y: b,
                    coord: k,
                });
            }
        }
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }

    // Property 3: distance-1 pairs (endpoints of an edge) and distance-2
    // pairs (neighbors of a common vertex) differ in every coordinate.
    for &(a, b) in pg.edges.keys() {
        let ta = pg.tuple(a);
        let tb = pg.tuple(b);
        for k in 0..r {
            if ta[k] == tb[k] {
                report.violations.push(PruneViolation::SharedCoordinate {
                    x: a,
                    y: b,
                    via: a,
                    coord: k,
                });
            }
        }
    }
    for (&z, nbrs) in &adj {
        for i in 0..nbrs.len() {
            for j in i + 1..nbrs.len() {
                let tx = pg.tuple(nbrs[i]);
                let ty = pg.tuple(nbrs[j]);
                for k in 0..r {
                    if tx[k] == ty[k] {
                        report.violations.push(PruneViolation::SharedCoordinate {
                            x: nbrs[i],
                            y: nbrs[j],
                            via: z,
                            coord: k,
                        });
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::choose2;

    fn mono(n: usize) -> ColoredCompleteGraph {
        ColoredCompleteGraph::from_edge_colors(n, vec![0; choose2(n)]).unwrap()
    }

    fn rainbow(n: usize) -> ColoredCompleteGraph {
        ColoredCompleteGraph::from_edge_colors(n, (0..choose2(n) as u32).collect()).unwrap()
    }

    #[test]
    fn seeded_plan_is_balanced_and_deterministic() {
        for n in [7usize, 12, 24] {
            for r in [2usize, 3] {
                let a = PrunePlan::seeded(n, r, 11);
                let b = PrunePlan::seeded(n, r, 11);
                assert_eq!(a, b);
                let mut all: Vec<u32> = a.classes.iter().flatten().copied().collect();
                all.sort_unstable();
                assert_eq!(all, (0..n as u32).collect::<Vec<_>>());
                for (class, side) in a.classes.iter().zip(&a.sides) {
                    assert!(class.len() >= n / r && class.len() <= n.div_ceil(r));
                    assert_eq!(side.len(), class.len().div_ceil(2));
                }
            }
        }
    }

    #[test]
    fn rainbow_prunes_to_an_edgeless_graph() {
        let g = rainbow(8);
        let pg = build_pruned(&g, 2, 3).unwrap();
        assert_eq!(pg.edge_count(), 0);
        assert!(verify_pruned(&pg, &g).ok());
    }

    #[test]
    fn mono_builds_pass_verification() {
        for (n, r, seed) in [(8usize, 2usize, 0u64), (9, 3, 1), (12, 2, 2), (12, 3, 5)] {
            let g = mono(n);
            let pg = build_pruned(&g, r, seed).unwrap();
            let report = verify_pruned(&pg, &g);
            assert!(report.ok(), "violations: {:?}", report.violations);
        }
    }

    #[test]
    fn same_seed_builds_are_byte_identical() {
        let g = mono(10);
        let a = build_pruned(&g, 2, 42).unwrap();
        let b = build_pruned(&g, 2, 42).unwrap();
        assert_eq!(
            serde_json::to_vec(&a).unwrap(),
            serde_json::to_vec(&b).unwrap()
        );
    }

    #[test]
    fn thinning_enforces_unique_coordinate_values() {
        let g = mono(10);
        let pg = build_pruned(&g, 2, 7).unwrap();
        for id in 0..pg.tuple_count() as TupleId {
            let nbrs = pg.neighbors(id);
            for k in 0..pg.r() {
                let mut vals: Vec<u32> = nbrs.iter().map(|&x| pg.tuple(x)[k]).collect();
                let before = vals.len();
                vals.sort_unstable();
                vals.dedup();
                assert_eq!(vals.len(), before);
            }
        }
    }

    #[test]
    fn verifier_flags_planted_violations() {
        let g = mono(4);
        // Classes {0,1}, {2,3}; primed sides {0} and {2}.
        let plan = PrunePlan {
            classes: vec![vec![0, 1], vec![2, 3]],
            sides: vec![BTreeSet::from([0]), BTreeSet::from([2])],
        };
        let mut pg = build_pruned_with_plan(&g, plan, 0);
        // Tuples: id = pos0 * 2 + pos1 over classes [0,1] x [2,3].
        // (0,2) = 0, (0,3) = 1, (1,2) = 2, (1,3) = 3.
        // Edge (0,2)-(0,3): first coordinates equal, violating crossing and
        // distance-1 separation.
        pg.edges.insert((0, 1), 0);
        let report = verify_pruned(&pg, &g);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, PruneViolation::NotEnergyEdge { .. })));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, PruneViolation::SharedCoordinate { coord: 0, .. })));
    }

    #[test]
    fn verifier_flags_non_crossing_edges() {
        let g = mono(4);
        // Both 0,1 on the primed side: the genuine energy edge
        // (0,2)-(1,3) fails to cross coordinate 0.
        let plan = PrunePlan {
            classes: vec![vec![0, 1], vec![2, 3]],
            sides: vec![BTreeSet::from([0, 1]), BTreeSet::from([2])],
        };
        let mut pg = PrunedEnergyGraph {
            n: 4,
            seed: 0,
            plan,
            edges: BTreeMap::new(),
            candidates_before_thinning: 0,
        };
        pg.edges.insert((0, 3), 0);
        let report = verify_pruned(&pg, &g);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, PruneViolation::EdgeNotCrossing { coord: 0, .. })));
    }
}
