//! Coloring generators: deterministic schemes, seeded random colorings, and
//! planted instances that hide pattern copies inside a pruned energy graph.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{ColoredCompleteGraph, GraphError};
use crate::combin::{choose2, pair_index, pairs};
use crate::pattern::{make_pattern, PatternError, PatternGraph, PatternKind};
use crate::prune::{PruneError, PrunePlan};

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("color count {c} outside [1, {max}]")]
    InvalidColorCount { c: usize, max: usize },
    #[error("pattern is not bipartite")]
    NotBipartite,
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Plan(#[from] PruneError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// Each edge color uniform iid over `0..c`.
    Random { c: usize, seed: u64 },
    /// Circle-method proper coloring: `n - 1` colors for even `n` (a
    /// 1-factorization), `n` colors for odd `n` (color `K_{n+1}`, drop the
    /// last vertex).
    RoundRobinProper,
    /// `chi({i, j}) = (i + j) mod c`.
    Modular { c: usize },
}

pub fn generate_coloring(n: usize, scheme: Scheme) -> Result<ColoredCompleteGraph, GenerateError> {
    match scheme {
        Scheme::Random { c, seed } => random_coloring(n, c, seed),
        Scheme::RoundRobinProper => Ok(round_robin_proper(n)?),
        Scheme::Modular { c } => modular_coloring(n, c),
    }
}

fn check_color_count(n: usize, c: usize) -> Result<(), GenerateError> {
    let max = choose2(n);
    if c < 1 || c > max {
        return Err(GenerateError::InvalidColorCount { c, max });
    }
    Ok(())
}

pub fn round_robin_proper(n: usize) -> Result<ColoredCompleteGraph, GraphError> {
    let m = if n.is_multiple_of(2) { n } else { n + 1 };
    let mut chi = vec![0u32; choose2(n)];
    let mut assign = |u: usize, v: usize, round: usize| {
        if u < n && v < n {
            let (i, j) = if u < v { (u, v) } else { (v, u) };
            chi[pair_index(n, i, j)] = round as u32;
        }
    };
    for round in 0..m - 1 {
        assign(m - 1, round, round);
        for i in 1..m / 2 {
            let a = (round + i) % (m - 1);
            let b = (round + m - 1 - i) % (m - 1);
            assign(a, b, round);
        }
    }
    ColoredCompleteGraph::from_edge_colors(n, chi)
}

pub fn random_coloring(
    n: usize,
    c: usize,
    seed: u64,
) -> Result<ColoredCompleteGraph, GenerateError> {
    check_color_count(n, c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chi: Vec<u32> = (0..choose2(n))
        .map(|_| rng.random_range(0..c as u32))
        .collect();
    Ok(ColoredCompleteGraph::from_edge_colors(n, chi)?)
}

pub fn modular_coloring(n: usize, c: usize) -> Result<ColoredCompleteGraph, GenerateError> {
    check_color_count(n, c)?;
    let chi: Vec<u32> = pairs(n).map(|(i, j)| ((i + j) % c) as u32).collect();
    Ok(ColoredCompleteGraph::from_edge_colors(n, chi)?)
}

/// How the non-planted edges are colored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Filler {
    /// Every filler edge gets its own fresh color, ids handed out in seeded
    /// random order. Singleton classes produce no energy edges, so the plant
    /// is the entire pruned graph up to per-color junk matchings.
    DistinctRandomOrder,
    /// Filler edges draw iid from a fresh palette of the given size;
    /// collisions may create energy edges beyond the plant.
    Palette(usize),
}

/// Where a plant ended up: the partition plan to rebuild the pruned graph,
/// the pattern, the vertex of each copy playing each pattern vertex, and the
/// color assigned to each pattern edge (colors `0..|E(pattern)|`, shared by
/// all copies; filler colors come after, so these ids survive
/// canonicalization).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantLayout {
    pub plan: PrunePlan,
    pub pattern: PatternGraph,
    /// `copies[k][v]` is the class-`k` vertex playing pattern vertex `v`.
    pub copies: Vec<Vec<u32>>,
    pub edge_colors: BTreeMap<(usize, usize), u32>,
}

impl PlantLayout {
    /// Coordinate `k` of pattern vertex `v`'s diagonal tuple is its copy in
    /// class `k`.
    pub fn diagonal_tuple(&self, v: usize) -> Vec<u32> {
        self.copies.iter().map(|c| c[v]).collect()
    }

    pub fn diagonal_tuples(&self) -> Vec<Vec<u32>> {
        (0..self.pattern.vertex_count())
            .map(|v| self.diagonal_tuple(v))
            .collect()
    }
}

/// Colors `K_n` so that the pruned r-th energy graph under the layout's plan
/// contains the pattern on the diagonal tuples: `r` vertex-disjoint
/// color-isomorphic copies, copy `k` inside class `k` with the pattern
/// bipartition mapped onto the class bipartition, one fresh color per
/// pattern edge shared across copies, filler elsewhere.
pub fn plant_coloring(
    n: usize,
    kind: PatternKind,
    r: usize,
    seed: u64,
    filler: Filler,
) -> Result<(ColoredCompleteGraph, PlantLayout), GenerateError> {
    let pattern = make_pattern(kind)?;
    let (x_side, y_side) = pattern.bipartition().ok_or(GenerateError::NotBipartite)?;
    let plan = PrunePlan::fitted(n, r, seed, x_side.len(), y_side.len())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut copies = vec![vec![u32::MAX; pattern.vertex_count()]; r];
    for (k, copy) in copies.iter_mut().enumerate() {
        let mut primed: Vec<u32> = plan.sides[k].iter().copied().collect();
        let mut unprimed: Vec<u32> = plan.classes[k]
            .iter()
            .copied()
            .filter(|v| !plan.sides[k].contains(v))
            .collect();
        primed.shuffle(&mut rng);
        unprimed.shuffle(&mut rng);
        for (slot, &v) in x_side.iter().enumerate() {
            copy[v] = primed[slot];
        }
        for (slot, &v) in y_side.iter().enumerate() {
            copy[v] = unprimed[slot];
        }
    }
    let m = pattern.edges().len();
    let sentinel = u32::MAX;
    let mut chi = vec![sentinel; choose2(n)];
    let mut edge_colors = BTreeMap::new();
    for (idx, &(p, q)) in pattern.edges().iter().enumerate() {
        edge_colors.insert((p, q), idx as u32);
        for copy in &copies {
            let (u, v) = (copy[p], copy[q]);
            let (i, j) = if u < v { (u, v) } else { (v, u) };
            chi[pair_index(n, i as usize, j as usize)] = idx as u32;
        }
    }
    let free: Vec<usize> = (0..chi.len()).filter(|&e| chi[e] == sentinel).collect();
    match filler {
        Filler::DistinctRandomOrder => {
            let mut order = free.clone();
            order.shuffle(&mut rng);
            for (t, &e) in order.iter().enumerate() {
                chi[e] = (m + t) as u32;
            }
        }
        Filler::Palette(c) => {
            check_color_count(n, c)?;
            for &e in &free {
                chi[e] = (m + rng.random_range(0..c)) as u32;
            }
        }
    }
    let g = ColoredCompleteGraph::from_edge_colors(n, chi)?;
    Ok((
        g,
        PlantLayout {
            plan,
            pattern,
            copies,
            edge_colors,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{is_pq_coloring, is_proper, PqMode, PqParams, PqVerdict};
    use crate::prune::{build_pruned_with_plan, verify_pruned, TupleId};
    use std::collections::BTreeSet;

    #[test]
    fn round_robin_k4_is_three_matchings() {
        let g = round_robin_proper(4).unwrap();
        assert_eq!(g.num_colors(), 3);
        for c in 0..3 {
            let class = g.class(c);
            assert_eq!(class.len(), 2);
            let verts: BTreeSet<u32> = class.iter().flat_map(|&(a, b)| [a, b]).collect();
            assert_eq!(verts.len(), 4);
        }
    }

    #[test]
    fn round_robin_is_proper_with_chromatic_index_colors() {
        for n in 2..=13 {
            let g = round_robin_proper(n).unwrap();
            assert!(is_proper(&g), "n = {n}");
            let expect = if n % 2 == 0 { n - 1 } else { n };
            assert_eq!(g.num_colors(), expect.max(1), "n = {n}");
        }
    }

    #[test]
    fn modular_k3_with_three_colors_is_rainbow() {
        let g = modular_coloring(3, 3).unwrap();
        assert_eq!(g.edge_colors(), &[1, 2, 0]);
    }

    #[test]
    fn random_two_coloring_of_k6_has_a_monochromatic_triangle() {
        for seed in 0..20 {
            let g = random_coloring(6, 2, seed).unwrap();
            let verdict =
                is_pq_coloring(&g, PqParams { p: 3, q: 2 }, PqMode::Exhaustive).unwrap();
            assert!(matches!(verdict, PqVerdict::Violated(_)), "seed {seed}");
        }
    }

    #[test]
    fn random_is_seed_deterministic() {
        let a = random_coloring(10, 4, 99).unwrap();
        let b = random_coloring(10, 4, 99).unwrap();
        assert_eq!(a.edge_colors(), b.edge_colors());
        let c = random_coloring(10, 4, 100).unwrap();
        assert_ne!(a.edge_colors(), c.edge_colors());
    }

    #[test]
    fn color_count_bounds_are_enforced() {
        assert!(matches!(
            random_coloring(5, 0, 0),
            Err(GenerateError::InvalidColorCount { .. })
        ));
        assert!(matches!(
            modular_coloring(4, 7),
            Err(GenerateError::InvalidColorCount { .. })
        ));
    }

    #[test]
    fn plant_colors_pattern_edges_consistently() {
        let (g, layout) = plant_coloring(
            30,
            PatternKind::Theta { a: 3, b: 2 },
            2,
            7,
            Filler::DistinctRandomOrder,
        )
        .unwrap();
        let m = layout.pattern.edges().len();
        for (&(p, q), &color) in &layout.edge_colors {
            for copy in &layout.copies {
                assert_eq!(g.color_of(copy[p], copy[q]), color);
            }
            assert_eq!(g.class(color).len(), layout.copies.len());
        }
        assert_eq!(
            g.num_colors(),
            m + (choose2(30) - 2 * m),
            "filler classes are singletons"
        );
    }

    #[test]
    fn plant_is_the_diagonal_of_the_pruned_graph() {
        let cases = [
            (PatternKind::Theta { a: 3, b: 3 }, 2usize, 24usize),
            (PatternKind::CycleWithStar { a: 3, k: 4 }, 3, 36),
            (PatternKind::SubdividedClique { t: 3 }, 2, 20),
        ];
        for (kind, r, n) in cases {
            let (g, layout) = plant_coloring(n, kind, r, 11, Filler::DistinctRandomOrder).unwrap();
            let pg = build_pruned_with_plan(&g, layout.plan.clone(), 11);
            assert!(verify_pruned(&pg, &g).ok());
            let m = layout.pattern.edges().len();
            assert_eq!(pg.edge_count(), (1usize << (r - 1)) * m);

            let diag: Vec<TupleId> = layout
                .diagonal_tuples()
                .iter()
                .map(|t| pg.id_of(t).unwrap())
                .collect();
            for &(p, q) in layout.pattern.edges() {
                assert_eq!(
                    pg.edge_color(diag[p], diag[q]),
                    Some(layout.edge_colors[&(p, q)])
                );
            }
            let diag_set: BTreeSet<TupleId> = diag.iter().copied().collect();
            for (v, &id) in diag.iter().enumerate() {
                let expect: BTreeSet<TupleId> = layout
                    .pattern
                    .neighbors(v)
                    .into_iter()
                    .map(|w| diag[w])
                    .collect();
                let got: BTreeSet<TupleId> = pg.neighbors(id).into_iter().collect();
                assert_eq!(got, expect, "diagonal neighborhoods match the pattern");
                assert!(got.is_subset(&diag_set));
            }
        }
    }

    #[test]
    fn palette_plants_build_verified_pruned_graphs() {
        // Palette filler may add junk energy edges that out-compete plant
        // edges during thinning, so no survival guarantee here; the build
        // must still verify, and surviving diagonal edges keep their color.
        for seed in 0..5 {
            let (g, layout) = plant_coloring(
                24,
                PatternKind::Theta { a: 3, b: 2 },
                2,
                seed,
                Filler::Palette(40),
            )
            .unwrap();
            let pg = build_pruned_with_plan(&g, layout.plan.clone(), seed);
            assert!(verify_pruned(&pg, &g).ok());
            let diag: Vec<TupleId> = layout
                .diagonal_tuples()
                .iter()
                .map(|t| pg.id_of(t).unwrap())
                .collect();
            for &(p, q) in layout.pattern.edges() {
                if let Some(c) = pg.edge_color(diag[p], diag[q]) {
                    assert_eq!(c, layout.edge_colors[&(p, q)]);
                }
            }
        }
    }
}
