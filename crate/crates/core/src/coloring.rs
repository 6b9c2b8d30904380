//! Edge colorings of complete graphs and repetition counting.
//!
//! A coloring assigns one of `num_colors` dense color ids to every edge of
//! `K_n`. A vertex subset `S` has `C(|S|, 2) - (distinct colors inside S)`
//! color repetitions; a coloring is a `(p, q)`-coloring when every `p`-subset
//! spans at least `q` distinct colors.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combin::{choose2, pair_index, pairs};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("subset must contain at least two vertices, got {0}")]
    SubsetTooSmall(usize),
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: u32, n: usize },
    #[error("invalid coloring: {0}")]
    InvalidColoring(String),
}

/// Parameters of the `(p, q)` property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PqParams {
    pub p: usize,
    pub q: u64,
}

/// Repetition count of one vertex subset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepetitionCount {
    pub subset: Vec<u32>,
    pub distinct_colors: u64,
    pub repetitions: u64,
}

/// An edge coloring of `K_n` with dense color ids `0..num_colors`.
///
/// Edge colors are stored in lexicographic pair order; per-color edge lists
/// are kept alongside for class-size queries. Every color id is used by at
/// least one edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredCompleteGraph {
    n: usize,
    num_colors: usize,
    chi: Vec<u32>,
    classes: Vec<Vec<(u32, u32)>>,
}

/// On-disk JSON form: edge colors for pairs `(i, j)`, `i < j`, in
/// lexicographic order.
#[derive(Debug, Serialize, Deserialize)]
pub struct ColoringFile {
    pub n: usize,
    pub num_colors: usize,
    pub edges: Vec<u32>,
}

impl ColoredCompleteGraph {
    /// Builds a coloring from raw per-edge labels, compacting the used labels
    /// to dense ids `0..k` monotonically (already-dense inputs are kept
    /// verbatim).
    pub fn from_edge_colors(n: usize, raw: Vec<u32>) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::InvalidColoring(format!(
                "need at least two vertices, got {n}"
            )));
        }
        if raw.len() != choose2(n) {
            return Err(GraphError::InvalidColoring(format!(
                "expected {} edge colors for n = {}, got {}",
                choose2(n),
                n,
                raw.len()
            )));
        }
        let used: BTreeSet<u32> = raw.iter().copied().collect();
        let relabel: BTreeMap<u32, u32> = used
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new as u32))
            .collect();
        let chi: Vec<u32> = raw.iter().map(|c| relabel[c]).collect();
        let num_colors = used.len();
        let mut classes = vec![Vec::new(); num_colors];
        for ((i, j), &c) in pairs(n).zip(chi.iter()) {
            classes[c as usize].push((i as u32, j as u32));
        }
        Ok(Self {
            n,
            num_colors,
            chi,
            classes,
        })
    }

    pub fn from_file(file: &ColoringFile) -> Result<Self, GraphError> {
        let g = Self::from_edge_colors(file.n, file.edges.clone())?;
        if g.num_colors != file.num_colors {
            return Err(GraphError::InvalidColoring(format!(
                "file declares {} colors but {} are used",
                file.num_colors, g.num_colors
            )));
        }
        Ok(g)
    }

    pub fn to_file(&self) -> ColoringFile {
        ColoringFile {
            n: self.n,
            num_colors: self.num_colors,
            edges: self.chi.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn color_of(&self, u: u32, v: u32) -> u32 {
        debug_assert_ne!(u, v);
        let (i, j) = if u < v { (u, v) } else { (v, u) };
        self.chi[pair_index(self.n, i as usize, j as usize)]
    }

    pub fn edge_colors(&self) -> &[u32] {
        &self.chi
    }

    /// Edges of one color class, in lexicographic order.
    pub fn class(&self, color: u32) -> &[(u32, u32)] {
        &self.classes[color as usize]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn check_vertex(&self, v: u32) -> Result<(), GraphError> {
        if (v as usize) < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        }
    }
}

/// Distinct colors and repetitions spanned by a vertex subset.
pub fn repetitions_of_subset(
    g: &ColoredCompleteGraph,
    subset: &[u32],
) -> Result<RepetitionCount, GraphError> {
    if subset.len() < 2 {
        return Err(GraphError::SubsetTooSmall(subset.len()));
    }
    let mut sorted: Vec<u32> = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != subset.len() {
        return Err(GraphError::InvalidColoring(
            "subset contains repeated vertices".into(),
        ));
    }
    for &v in &sorted {
        g.check_vertex(v)?;
    }
    let mut seen = BTreeSet::new();
    for a in 0..sorted.len() {
        for b in a + 1..sorted.len() {
            seen.insert(g.color_of(sorted[a], sorted[b]));
        }
    }
    let pairs = choose2(sorted.len()) as u64;
    let distinct = seen.len() as u64;
    Ok(RepetitionCount {
        subset: sorted,
        distinct_colors: distinct,
        repetitions: pairs - distinct,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PqMode {
    Exhaustive,
    Sampled { trials: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PqVerdict {
    /// Exhaustive check passed; this is a proof.
    Holds,
    /// Sampling found nothing; not a proof.
    NoViolationFound,
    /// A `p`-subset spanning fewer than `q` colors. Exhaustive mode reports
    /// the lexicographically least violator.
    Violated(RepetitionCount),
}

/// Checks the `(p, q)` property, exhaustively or by seeded sampling.
pub fn is_pq_coloring(
    g: &ColoredCompleteGraph,
    params: PqParams,
    mode: PqMode,
) -> Result<PqVerdict, GraphError> {
    let PqParams { p, q } = params;
    if p < 2 {
        return Err(GraphError::SubsetTooSmall(p));
    }
    if p > g.n() {
        // No p-subset exists, so the property holds vacuously.
        return Ok(match mode {
            PqMode::Exhaustive => PqVerdict::Holds,
            PqMode::Sampled { .. } => PqVerdict::NoViolationFound,
        });
    }
    match mode {
        PqMode::Exhaustive => {
            let verts: Vec<u32> = (0..g.n() as u32).collect();
            let mut subset = vec![0u32; p];
            if let Some(hit) = first_violator(g, &verts, &mut subset, 0, 0, q)? {
                return Ok(PqVerdict::Violated(hit));
            }
            Ok(PqVerdict::Holds)
        }
        PqMode::Sampled { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut verts: Vec<u32> = (0..g.n() as u32).collect();
            for _ in 0..trials {
                verts.shuffle(&mut rng);
                let mut pick: Vec<u32> = verts[..p].to_vec();
                pick.sort_unstable();
                let count = repetitions_of_subset(g, &pick)?;
                if count.distinct_colors < q {
                    return Ok(PqVerdict::Violated(count));
                }
            }
            Ok(PqVerdict::NoViolationFound)
        }
    }
}

fn first_violator(
    g: &ColoredCompleteGraph,
    verts: &[u32],
    subset: &mut Vec<u32>,
    depth: usize,
    start: usize,
    q: u64,
) -> Result<Option<RepetitionCount>, GraphError> {
    if depth == subset.len() {
        let count = repetitions_of_subset(g, subset)?;
        if count.distinct_colors < q {
            return Ok(Some(count));
        }
        return Ok(None);
    }
    let remaining = subset.len() - depth;
    for idx in start..=verts.len().saturating_sub(remaining) {
        subset[depth] = verts[idx];
        if let Some(hit) = first_violator(g, verts, subset, depth + 1, idx + 1, q)? {
            return Ok(Some(hit));
        }
    }
    Ok(None)
}

/// Largest number of same-colored edges at a single vertex.
pub fn max_color_degree(g: &ColoredCompleteGraph) -> usize {
    let mut counts = vec![0usize; g.n() * g.num_colors()];
    for (i, j) in pairs(g.n()) {
        let c = g.color_of(i as u32, j as u32) as usize;
        counts[i * g.num_colors() + c] += 1;
        counts[j * g.num_colors() + c] += 1;
    }
    counts.into_iter().max().unwrap_or(0)
}

/// True when no two edges sharing a vertex have the same color.
pub fn is_proper(g: &ColoredCompleteGraph) -> bool {
    max_color_degree(g) <= 1
}

/// Splits every color class into matchings by greedy edge coloring, producing
/// a proper coloring in which the output color of an edge determines its
/// input color. Uses at most `num_colors * (2 * max_color_degree - 1)`
/// colors; an already-proper coloring is returned with the same class count.
pub fn properize(g: &ColoredCompleteGraph) -> ColoredCompleteGraph {
    let n = g.n();
    let mut out = vec![0u32; choose2(n)];
    let mut next_color = 0u32;
    for c in 0..g.num_colors() as u32 {
        // Greedy proper edge coloring of the class, local ids 0..
        let edges = g.class(c);
        let mut local = vec![0u32; edges.len()];
        let mut used_local = 0u32;
        for (idx, &(u, v)) in edges.iter().enumerate() {
            let mut taken = BTreeSet::new();
            for (jdx, &(x, y)) in edges.iter().enumerate().take(idx) {
                if x == u || x == v || y == u || y == v {
                    taken.insert(local[jdx]);
                }
            }
            let mut pick = 0u32;
            while taken.contains(&pick) {
                pick += 1;
            }
            local[idx] = pick;
            used_local = used_local.max(pick + 1);
        }
        for (idx, &(u, v)) in edges.iter().enumerate() {
            out[pair_index(n, u as usize, v as usize)] = next_color + local[idx];
        }
        next_color += used_local;
    }
    ColoredCompleteGraph::from_edge_colors(n, out).expect("properize output is well formed")
}

/// A subgraph of the underlying complete graph: a vertex set plus a set of
/// edges between those vertices, normalized as `(min, max)` pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgraph {
    verts: BTreeSet<u32>,
    edges: BTreeSet<(u32, u32)>,
}

impl Subgraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts<V, E>(verts: V, edges: E) -> Self
    where
        V: IntoIterator<Item = u32>,
        E: IntoIterator<Item = (u32, u32)>,
    {
        let mut s = Self::new();
        for v in verts {
            s.insert_vertex(v);
        }
        for (u, v) in edges {
            s.insert_edge(u, v);
        }
        s
    }

    pub fn insert_vertex(&mut self, v: u32) {
        self.verts.insert(v);
    }

    /// Inserts an edge, adding both endpoints to the vertex set.
    pub fn insert_edge(&mut self, u: u32, v: u32) {
        assert_ne!(u, v, "loops are not subgraph edges");
        self.verts.insert(u);
        self.verts.insert(v);
        self.edges.insert(if u < v { (u, v) } else { (v, u) });
    }

    pub fn contains_vertex(&self, v: u32) -> bool {
        self.verts.contains(&v)
    }

    pub fn contains_edge(&self, u: u32, v: u32) -> bool {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.contains(&key)
    }

    pub fn vertices(&self) -> &BTreeSet<u32> {
        &self.verts
    }

    pub fn edges(&self) -> &BTreeSet<(u32, u32)> {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn union(&self, other: &Subgraph) -> Subgraph {
        let mut out = self.clone();
        out.verts.extend(other.verts.iter().copied());
        out.edges.extend(other.edges.iter().copied());
        out
    }

    pub fn is_subgraph_of(&self, other: &Subgraph) -> bool {
        self.verts.is_subset(&other.verts) && self.edges.is_subset(&other.edges)
    }
}

/// Edge count, distinct colors, and repetitions of a subgraph's edge set.
/// Repetitions of an edge-colored graph are `|E| - (distinct colors)`.
pub fn subgraph_repetitions(g: &ColoredCompleteGraph, sub: &Subgraph) -> (u64, u64) {
    let mut seen = BTreeSet::new();
    for &(u, v) in sub.edges() {
        seen.insert(g.color_of(u, v));
    }
    let distinct = seen.len() as u64;
    (distinct, sub.edge_count() as u64 - distinct)
}
