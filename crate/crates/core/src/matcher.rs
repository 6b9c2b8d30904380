//! Backtracking subgraph search with degree and neighborhood pruning.
//!
//! Embeddings are injective, edge-preserving (not necessarily induced) maps
//! from a pattern into a host graph. Results are deduplicated by image
//! vertex set plus image edge set: pipelines need distinct copies, not
//! distinct automorphic labelings of the same copy.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::pattern::PatternGraph;

/// Undirected simple graph on `0..n` with bitset adjacency rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    degree: Vec<usize>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        Self {
            n,
            words,
            rows: vec![0; n * words],
            degree: vec![0; n],
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n);
        if !self.adjacent(u, v) {
            self.rows[u * self.words + v / 64] |= 1 << (v % 64);
            self.rows[v * self.words + u / 64] |= 1 << (u % 64);
            self.degree[u] += 1;
            self.degree[v] += 1;
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degree[v]
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&w| self.adjacent(v, w)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.degree.iter().sum::<usize>() / 2
    }
}

/// One pattern copy in the host.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    /// `map[p]` is the host vertex carrying pattern vertex `p`.
    pub map: Vec<usize>,
    pub pattern: PatternGraph,
}

/// An embedding up to pattern automorphism: the sorted vertex image and the
/// normalized edge image.
pub type ImageKey = (Vec<usize>, Vec<(usize, usize)>);

impl Embedding {
    /// Independent edge-preservation check.
    pub fn verify(&self, host: &SimpleGraph) -> bool {
        let mut seen = BTreeSet::new();
        for &v in &self.map {
            if v >= host.n() || !seen.insert(v) {
                return false;
            }
        }
        self.pattern
            .edges()
            .iter()
            .all(|&(a, b)| host.adjacent(self.map[a], self.map[b]))
    }

    fn image_key(&self) -> ImageKey {
        let mut verts: Vec<usize> = self.map.clone();
        verts.sort_unstable();
        let mut edges: Vec<(usize, usize)> = self
            .pattern
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (self.map[a], self.map[b]);
                if x < y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect();
        edges.sort_unstable();
        (verts, edges)
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub embeddings: Vec<Embedding>,
    pub nodes_expanded: u64,
    /// When true, an empty result is not a nonexistence proof.
    pub budget_exhausted: bool,
}

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Finds up to `limit` pairwise-distinct copies of `pattern` in `host`,
/// spending at most `budget` node expansions.
pub fn find_subgraph(
    host: &SimpleGraph,
    pattern: &PatternGraph,
    limit: usize,
    budget: u64,
) -> SearchOutcome {
    find_subgraph_filtered(host, pattern, limit, budget, |_, _| true)
}

/// [`find_subgraph`] with a per-vertex candidate filter; `allow(p, h)` must
/// hold for pattern vertex `p` to map onto host vertex `h`.
pub fn find_subgraph_filtered<F>(
    host: &SimpleGraph,
    pattern: &PatternGraph,
    limit: usize,
    budget: u64,
    allow: F,
) -> SearchOutcome
where
    F: Fn(usize, usize) -> bool,
{
    let pn = pattern.vertex_count();
    let mut out = SearchOutcome {
        embeddings: Vec::new(),
        nodes_expanded: 0,
        budget_exhausted: false,
    };
    if pn > host.n() || limit == 0 {
        return out;
    }
    let order = matching_order(pattern);
    let mut assigned = vec![usize::MAX; pn];
    let mut used = vec![false; host.n()];
    let mut seen_images = BTreeSet::new();
    let mut stack: Vec<Vec<usize>> = vec![candidates(host, pattern, &order, &assigned, 0, &allow)];
    let mut depth = 0usize;
    loop {
        if out.nodes_expanded >= budget {
            out.budget_exhausted = true;
            break;
        }
        let Some(cand) = stack.last_mut() else { break };
        let Some(h) = cand.pop() else {
            stack.pop();
            if depth == 0 {
                break;
            }
            depth -= 1;
            let p = order[depth];
            used[assigned[p]] = false;
            assigned[p] = usize::MAX;
            continue;
        };
        out.nodes_expanded += 1;
        let p = order[depth];
        assigned[p] = h;
        used[h] = true;
        if depth + 1 == pn {
            let emb = Embedding {
                map: assigned.clone(),
                pattern: pattern.clone(),
            };
            debug_assert!(emb.verify(host));
            if seen_images.insert(emb.image_key()) {
                out.embeddings.push(emb);
                if out.embeddings.len() >= limit {
                    break;
                }
            }
            used[h] = false;
            assigned[p] = usize::MAX;
            continue;
        }
        depth += 1;
        let next: Vec<usize> = candidates(host, pattern, &order, &assigned, depth, &allow)
            .into_iter()
            .filter(|&c| !used[c])
            .collect();
        stack.push(next);
    }
    out
}

/// Pattern vertices ordered most-constrained-first: highest degree first,
/// then by number of already-ordered neighbors so every later vertex is
/// anchored to the partial image (patterns are connected).
fn matching_order(pattern: &PatternGraph) -> Vec<usize> {
    let pn = pattern.vertex_count();
    let mut order = Vec::with_capacity(pn);
    let mut placed = vec![false; pn];
    let mut anchored = vec![0usize; pn];
    let first = (0..pn).max_by_key(|&v| pattern.degree(v)).unwrap_or(0);
    order.push(first);
    placed[first] = true;
    for w in pattern.neighbors(first) {
        anchored[w] += 1;
    }
    while order.len() < pn {
        let next = (0..pn)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| (anchored[v], pattern.degree(v), std::cmp::Reverse(v)))
            .unwrap();
        order.push(next);
        placed[next] = true;
        for w in pattern.neighbors(next) {
            anchored[w] += 1;
        }
    }
    order
}

fn candidates<F>(
    host: &SimpleGraph,
    pattern: &PatternGraph,
    order: &[usize],
    assigned: &[usize],
    depth: usize,
    allow: &F,
) -> Vec<usize>
where
    F: Fn(usize, usize) -> bool,
{
    let p = order[depth];
    let want = pattern.degree(p);
    let anchors: Vec<usize> = pattern
        .neighbors(p)
        .into_iter()
        .filter(|&w| assigned[w] != usize::MAX)
        .map(|w| assigned[w])
        .collect();
    let base: Vec<usize> = if let Some(&a) = anchors.first() {
        host.neighbors(a)
    } else {
        (0..host.n()).collect()
    };
    base.into_iter()
        .filter(|&h| {
            host.degree(h) >= want
                && anchors.iter().all(|&a| host.adjacent(a, h))
                && allow(p, h)
        })
        .collect()
}

/// Counts injective edge-preserving maps and collects distinct images by
/// brute force; the oracle for hosts with few vertices.
pub fn naive_embeddings(
    host: &SimpleGraph,
    pattern: &PatternGraph,
) -> (u64, BTreeSet<ImageKey>) {
    let pn = pattern.vertex_count();
    let mut maps = 0u64;
    let mut images = BTreeSet::new();
    let mut assigned = vec![usize::MAX; pn];
    let mut used = vec![false; host.n()];
    fn rec(
        host: &SimpleGraph,
        pattern: &PatternGraph,
        assigned: &mut Vec<usize>,
        used: &mut Vec<bool>,
        depth: usize,
        maps: &mut u64,
        images: &mut BTreeSet<ImageKey>,
    ) {
        if depth == assigned.len() {
            *maps += 1;
            let emb = Embedding {
                map: assigned.clone(),
                pattern: pattern.clone(),
            };
            images.insert(emb.image_key());
            return;
        }
        for h in 0..host.n() {
            if used[h] {
                continue;
            }
            let ok = pattern.neighbors(depth).into_iter().all(|w| {
                if w < depth {
                    host.adjacent(assigned[w], h)
                } else {
                    true
                }
            });
            if ok {
                assigned[depth] = h;
                used[h] = true;
                rec(host, pattern, assigned, used, depth + 1, maps, images);
                used[h] = false;
                assigned[depth] = usize::MAX;
            }
        }
    }
    rec(
        host,
        pattern,
        &mut assigned,
        &mut used,
        0,
        &mut maps,
        &mut images,
    );
    (maps, images)
}
