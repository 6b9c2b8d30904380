//! Parametric pattern graphs searched for inside pruned energy graphs.
//!
//! Vertex numbering is deterministic per family so pipelines can recover the
//! structure (branch vertices, paths, hubs) of an embedding from indices
//! alone.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combin::{choose2, pairs};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("invalid pattern parameters: {0}")]
    InvalidParams(String),
    #[error("cannot parse pattern spec {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatternKind {
    /// `K_t` with every edge subdivided once: branch vertices keep pairwise
    /// distance two.
    SubdividedClique { t: usize },
    /// `b` internally disjoint paths of length `a` between two endpoints.
    Theta { a: usize, b: usize },
    /// `K_{a,b}` with every edge replaced by a path of `l` edges.
    SubdividedBipartite { a: usize, b: usize, l: usize },
    /// An even cycle `C_{2a}` with `k` pendant leaves on one cycle vertex.
    CycleWithStar { a: usize, k: usize },
    /// A path on `l` vertices.
    Path { l: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    Branch,
    Subdivision,
    Hub,
    Leaf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternGraph {
    pub kind: PatternKind,
    verts: usize,
    edges: Vec<(usize, usize)>,
    roles: Vec<Role>,
}

fn norm(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

pub fn make_pattern(kind: PatternKind) -> Result<PatternGraph, PatternError> {
    let (verts, mut edges, roles) = match kind {
        PatternKind::SubdividedClique { t } => {
            if t < 3 {
                return Err(PatternError::InvalidParams(format!(
                    "subdivided clique needs t >= 3, got {t}"
                )));
            }
            let mut edges = Vec::new();
            let mut roles = vec![Role::Branch; t];
            for (rank, (i, j)) in pairs(t).enumerate() {
                let mid = t + rank;
                edges.push(norm(i, mid));
                edges.push(norm(j, mid));
                roles.push(Role::Subdivision);
            }
            (t + choose2(t), edges, roles)
        }
        PatternKind::Theta { a, b } => {
            if a < 2 || b < 2 {
                return Err(PatternError::InvalidParams(format!(
                    "theta needs a >= 2 and b >= 2, got a = {a}, b = {b}"
                )));
            }
            let mut edges = Vec::new();
            let mut roles = vec![Role::Branch; 2];
            for i in 0..b {
                let base = 2 + i * (a - 1);
                let mut prev = 0;
                for s in 0..a - 1 {
                    edges.push(norm(prev, base + s));
                    roles.push(Role::Subdivision);
                    prev = base + s;
                }
                edges.push(norm(prev, 1));
            }
            (2 + b * (a - 1), edges, roles)
        }
        PatternKind::SubdividedBipartite { a, b, l } => {
            if a < 2 || b < 2 || l < 1 {
                return Err(PatternError::InvalidParams(format!(
                    "subdivided bipartite needs a, b >= 2 and l >= 1, got ({a}, {b}, {l})"
                )));
            }
            let mut edges = Vec::new();
            let mut roles = vec![Role::Branch; a + b];
            for i in 0..a {
                for j in 0..b {
                    let base = a + b + (i * b + j) * (l - 1);
                    let mut prev = i;
                    for s in 0..l - 1 {
                        edges.push(norm(prev, base + s));
                        roles.push(Role::Subdivision);
                        prev = base + s;
                    }
                    edges.push(norm(prev, a + j));
                }
            }
            (a + b + a * b * (l - 1), edges, roles)
        }
        PatternKind::CycleWithStar { a, k } => {
            if a < 2 {
                return Err(PatternError::InvalidParams(format!(
                    "cycle with star needs a >= 2, got {a}"
                )));
            }
            let m = 2 * a;
            let mut edges = Vec::new();
            let mut roles = vec![Role::Subdivision; m];
            roles[0] = Role::Hub;
            for i in 0..m {
                edges.push(norm(i, (i + 1) % m));
            }
            for leaf in 0..k {
                edges.push(norm(0, m + leaf));
                roles.push(Role::Leaf);
            }
            (m + k, edges, roles)
        }
        PatternKind::Path { l } => {
            if l < 1 {
                return Err(PatternError::InvalidParams(format!(
                    "path needs l >= 1 vertices, got {l}"
                )));
            }
            let mut edges = Vec::new();
            let mut roles = vec![Role::Subdivision; l];
            roles[0] = Role::Branch;
            roles[l - 1] = Role::Branch;
            for i in 0..l.saturating_sub(1) {
                edges.push(norm(i, i + 1));
            }
            (l, edges, roles)
        }
    };
    edges.sort_unstable();
    edges.dedup();
    Ok(PatternGraph {
        kind,
        verts,
        edges,
        roles,
    })
}

/// Parses compact CLI specs: `ktplus:t`, `theta:a,b`, `kab_l:a,b,l`,
/// `cycle_star:a,k`, `path:l`.
pub fn parse_pattern(spec: &str) -> Result<PatternGraph, PatternError> {
    let (name, rest) = spec
        .split_once(':')
        .ok_or_else(|| PatternError::Parse(spec.into()))?;
    let nums: Vec<usize> = rest
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| PatternError::Parse(spec.into()))?;
    let kind = match (name, nums.as_slice()) {
        ("ktplus", [t]) => PatternKind::SubdividedClique { t: *t },
        ("theta", [a, b]) => PatternKind::Theta { a: *a, b: *b },
        ("kab_l", [a, b, l]) => PatternKind::SubdividedBipartite {
            a: *a,
            b: *b,
            l: *l,
        },
        ("cycle_star", [a, k]) => PatternKind::CycleWithStar { a: *a, k: *k },
        ("path", [l]) => PatternKind::Path { l: *l },
        _ => return Err(PatternError::Parse(spec.into())),
    };
    make_pattern(kind)
}

impl PatternGraph {
    pub fn vertex_count(&self) -> usize {
        self.verts
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
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

    /// Proper 2-coloring by BFS from vertex 0; all families here are
    /// connected and bipartite. Returns (side containing 0, other side).
    pub fn bipartition(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let mut side = vec![u8::MAX; self.verts];
        let mut queue = std::collections::VecDeque::new();
        side[0] = 0;
        queue.push_back(0);
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if side[w] == u8::MAX {
                    side[w] = 1 - side[v];
                    queue.push_back(w);
                } else if side[w] == side[v] {
                    return None;
                }
            }
        }
        if side.contains(&u8::MAX) {
            return None;
        }
        let zero = (0..self.verts).filter(|&v| side[v] == 0).collect();
        let one = (0..self.verts).filter(|&v| side[v] == 1).collect();
        Some((zero, one))
    }

    /// For theta patterns: the two endpoints and each path as a full vertex
    /// sequence from endpoint 0 to endpoint 1.
    #[allow(clippy::type_complexity)]
    pub fn theta_paths(&self) -> Option<((usize, usize), Vec<Vec<usize>>)> {
        let PatternKind::Theta { a, b } = self.kind else {
            return None;
        };
        let mut paths = Vec::with_capacity(b);
        for i in 0..b {
            let base = 2 + i * (a - 1);
            let mut seq = vec![0];
            seq.extend(base..base + (a - 1));
            seq.push(1);
            paths.push(seq);
        }
        Some(((0, 1), paths))
    }

    /// For cycle-with-star patterns: cycle sequence starting at the hub, the
    /// hub, and the leaves.
    pub fn cycle_and_leaves(&self) -> Option<(Vec<usize>, usize, Vec<usize>)> {
        let PatternKind::CycleWithStar { a, k } = self.kind else {
            return None;
        };
        let m = 2 * a;
        Some(((0..m).collect(), 0, (m..m + k).collect()))
    }

    /// For subdivided bipartite patterns: the two terminal sides plus the
    /// vertex sequence of each subdivided edge, indexed `[i][j]` for terminal
    /// pair `(A_i, B_j)`, running from `A_i` to `B_j`.
    #[allow(clippy::type_complexity)]
    pub fn bipartite_paths(&self) -> Option<(Vec<usize>, Vec<usize>, Vec<Vec<Vec<usize>>>)> {
        let PatternKind::SubdividedBipartite { a, b, l } = self.kind else {
            return None;
        };
        let a_side: Vec<usize> = (0..a).collect();
        let b_side: Vec<usize> = (a..a + b).collect();
        let mut paths = vec![vec![Vec::new(); b]; a];
        for (i, row) in paths.iter_mut().enumerate() {
            for (j, path) in row.iter_mut().enumerate() {
                let base = a + b + (i * b + j) * (l - 1);
                let mut seq = vec![i];
                seq.extend(base..base + (l - 1));
                seq.push(a + j);
                *path = seq;
            }
        }
        Some((a_side, b_side, paths))
    }

    /// For subdivided cliques: branch vertices and, per branch pair, the
    /// subdivision vertex.
    #[allow(clippy::type_complexity)]
    pub fn clique_structure(&self) -> Option<(Vec<usize>, Vec<((usize, usize), usize)>)> {
        let PatternKind::SubdividedClique { t } = self.kind else {
            return None;
        };
        let branch: Vec<usize> = (0..t).collect();
        let subs = pairs(t)
            .enumerate()
            .map(|(rank, (i, j))| ((i, j), t + rank))
            .collect();
        Some((branch, subs))
    }

    pub fn path_sequence(&self) -> Option<Vec<usize>> {
        let PatternKind::Path { l } = self.kind else {
            return None;
        };
        Some((0..l).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subdivided_clique_counts() {
        for t in 3..7 {
            let p = make_pattern(PatternKind::SubdividedClique { t }).unwrap();
            assert_eq!(p.vertex_count(), t + choose2(t));
            assert_eq!(p.edges().len(), 2 * choose2(t));
            for v in 0..t {
                assert_eq!(p.degree(v), t - 1);
            }
            for v in t..p.vertex_count() {
                assert_eq!(p.degree(v), 2);
            }
        }
    }

    #[test]
    fn k3_plus_is_a_hexagon() {
        let p = make_pattern(PatternKind::SubdividedClique { t: 3 }).unwrap();
        assert_eq!(p.vertex_count(), 6);
        assert_eq!(p.edges().len(), 6);
        assert!((0..6).all(|v| p.degree(v) == 2));
    }

    #[test]
    fn theta_counts() {
        for a in 2..6 {
            for b in 2..6 {
                let p = make_pattern(PatternKind::Theta { a, b }).unwrap();
                assert_eq!(p.vertex_count(), 2 + b * (a - 1));
                assert_eq!(p.edges().len(), a * b);
                assert_eq!(p.degree(0), b);
                assert_eq!(p.degree(1), b);
                let (ends, paths) = p.theta_paths().unwrap();
                assert_eq!(ends, (0, 1));
                assert_eq!(paths.len(), b);
                for seq in paths {
                    assert_eq!(seq.len(), a + 1);
                    for w in seq.windows(2) {
                        assert!(p.edges().contains(&norm(w[0], w[1])));
                    }
                }
            }
        }
    }

    #[test]
    fn subdivided_bipartite_counts() {
        for (a, b, l) in [(2, 2, 1), (3, 4, 2), (3, 9, 2), (2, 3, 3)] {
            let p = make_pattern(PatternKind::SubdividedBipartite { a, b, l }).unwrap();
            assert_eq!(p.vertex_count(), a + b + a * b * (l - 1));
            assert_eq!(p.edges().len(), a * b * l);
        }
    }

    #[test]
    fn cycle_with_star_counts() {
        let p = make_pattern(PatternKind::CycleWithStar { a: 3, k: 4 }).unwrap();
        assert_eq!(p.vertex_count(), 10);
        assert_eq!(p.edges().len(), 10);
        assert_eq!(p.degree(0), 6);
        let (cycle, hub, leaves) = p.cycle_and_leaves().unwrap();
        assert_eq!(cycle.len(), 6);
        assert_eq!(hub, 0);
        assert_eq!(leaves, vec![6, 7, 8, 9]);
    }

    #[test]
    fn all_families_are_bipartite() {
        let kinds = [
            PatternKind::SubdividedClique { t: 4 },
            PatternKind::Theta { a: 3, b: 3 },
            PatternKind::SubdividedBipartite { a: 3, b: 5, l: 2 },
            PatternKind::CycleWithStar { a: 4, k: 3 },
            PatternKind::Path { l: 5 },
        ];
        for kind in kinds {
            let p = make_pattern(kind).unwrap();
            let (s0, s1) = p.bipartition().expect("bipartite");
            assert_eq!(s0.len() + s1.len(), p.vertex_count());
            for &(u, v) in p.edges() {
                assert_ne!(s0.contains(&u), s0.contains(&v));
            }
        }
    }

    #[test]
    fn parses_cli_specs() {
        assert_eq!(
            parse_pattern("ktplus:3").unwrap().kind,
            PatternKind::SubdividedClique { t: 3 }
        );
        assert_eq!(
            parse_pattern("theta:3,2").unwrap().kind,
            PatternKind::Theta { a: 3, b: 2 }
        );
        assert_eq!(
            parse_pattern("kab_l:3,9,2").unwrap().kind,
            PatternKind::SubdividedBipartite { a: 3, b: 9, l: 2 }
        );
        assert_eq!(
            parse_pattern("cycle_star:3,6").unwrap().kind,
            PatternKind::CycleWithStar { a: 3, k: 6 }
        );
        assert_eq!(
            parse_pattern("path:4").unwrap().kind,
            PatternKind::Path { l: 4 }
        );
        assert!(parse_pattern("blob:1").is_err());
        assert!(parse_pattern("theta:1").is_err());
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(make_pattern(PatternKind::SubdividedClique { t: 2 }).is_err());
        assert!(make_pattern(PatternKind::Theta { a: 1, b: 2 }).is_err());
        assert!(make_pattern(PatternKind::Path { l: 0 }).is_err());
    }
}
