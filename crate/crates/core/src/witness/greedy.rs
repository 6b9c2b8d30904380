//! Greedy extractor: restrict `m` times to the majority color neighborhood
//! of the least surviving vertex. When `k − m` vertices survive, the picks
//! plus any `k − m` survivors span at most `m + C(k−m,2)` colors, because
//! every edge at pick `i` into the residual set carries color `c_i`.

use std::collections::BTreeMap;

use crate::coloring::ColoredCompleteGraph;
use crate::combin::choose2;

use super::{finish_report, PipelineError, Provenance, WitnessReport};

#[derive(Debug)]
pub enum GreedyOutcome {
    Witness(WitnessReport),
    /// The surviving set died before `m` rounds finished or ended below
    /// `k − m`; expected once the color count beats the counting threshold.
    Inapplicable { round: usize, survivors: usize },
}

/// Runs the greedy restriction and, on survival, returns a `k`-set spanning
/// at most `C(k,2) − m(k−m) − C(m,2) + m` colors. Ties between equally
/// popular colors break toward the least color id.
pub fn greedy_low_color_clique(
    g: &ColoredCompleteGraph,
    k: usize,
    m: usize,
) -> Result<GreedyOutcome, PipelineError> {
    let n = g.n();
    if m < 1 || m >= k {
        return Err(PipelineError::BadParams(format!(
            "need 1 <= m <= k - 1, got m = {m} with k = {k}"
        )));
    }
    if k > n {
        return Err(PipelineError::BadParams(format!(
            "need k <= n, got k = {k} with n = {n}"
        )));
    }

    let mut survivors: Vec<u32> = (0..n as u32).collect();
    let mut picks: Vec<(u32, u32)> = Vec::new();
    for round in 1..=m {
        let Some((&v, rest)) = survivors.split_first() else {
            return Ok(GreedyOutcome::Inapplicable {
                round,
                survivors: 0,
            });
        };
        let mut tally: BTreeMap<u32, usize> = BTreeMap::new();
        for &u in rest {
            *tally.entry(g.color_of(v, u)).or_default() += 1;
        }
        let Some((&majority, _)) = tally
            .iter()
            .max_by_key(|&(&c, &sz)| (sz, std::cmp::Reverse(c)))
        else {
            return Ok(GreedyOutcome::Inapplicable {
                round,
                survivors: 0,
            });
        };
        survivors = rest
            .iter()
            .copied()
            .filter(|&u| g.color_of(v, u) == majority)
            .collect();
        picks.push((v, majority));
    }
    if survivors.len() < k - m {
        return Ok(GreedyOutcome::Inapplicable {
            round: m,
            survivors: survivors.len(),
        });
    }

    let verts = picks
        .iter()
        .map(|&(v, _)| v)
        .chain(survivors[..k - m].iter().copied());
    let q = choose2(k) - m * (k - m) - choose2(m) + m + 1;
    let provenance = Provenance {
        pipeline: "greedy".into(),
        notes: picks
            .iter()
            .enumerate()
            .map(|(i, &(v, c))| format!("round {}: vertex {v}, color {c}", i + 1))
            .collect(),
        ..Provenance::default()
    };
    Ok(GreedyOutcome::Witness(finish_report(
        g, verts, k, q, provenance,
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::random_coloring;
    use crate::witness::validate_witness;

    fn mono(n: usize) -> ColoredCompleteGraph {
        ColoredCompleteGraph::from_edge_colors(n, vec![0; choose2(n)]).unwrap()
    }

    #[test]
    fn one_color_host_gives_a_monochromatic_triangle() {
        let g = mono(5);
        let GreedyOutcome::Witness(report) = greedy_low_color_clique(&g, 3, 1).unwrap() else {
            panic!("one color always survives");
        };
        assert_eq!(report.vertices, vec![0, 1, 2]);
        assert_eq!(report.p_claimed, 3);
        assert_eq!(report.q_claimed, 3);
        assert_eq!(report.distinct_colors, 1);
        validate_witness(&g, &report).unwrap();
    }

    #[test]
    fn below_the_counting_threshold_the_greedy_always_survives() {
        // (2c)^m (k-m) <= n makes the majority classes large enough.
        for (n, k, m, c) in [(20, 3, 1, 5), (32, 4, 2, 2), (60, 6, 1, 5)] {
            for seed in 0..20 {
                let g = random_coloring(n, c, seed).unwrap();
                match greedy_low_color_clique(&g, k, m).unwrap() {
                    GreedyOutcome::Witness(report) => {
                        assert!(report.distinct_colors <= m + choose2(k - m));
                        validate_witness(&g, &report).unwrap();
                    }
                    GreedyOutcome::Inapplicable { round, survivors } => {
                        panic!(
                            "n = {n}, k = {k}, m = {m}, c = {c}, seed = {seed} died at \
                             round {round} with {survivors} survivors"
                        )
                    }
                }
            }
        }
    }

    #[test]
    fn rainbow_hosts_are_inapplicable() {
        let n = 6;
        let raw: Vec<u32> = (0..choose2(n) as u32).collect();
        let g = ColoredCompleteGraph::from_edge_colors(n, raw).unwrap();
        match greedy_low_color_clique(&g, 3, 1).unwrap() {
            GreedyOutcome::Inapplicable { round, survivors } => {
                assert_eq!(round, 1);
                assert_eq!(survivors, 1);
            }
            GreedyOutcome::Witness(_) => panic!("rainbow majority classes are single edges"),
        }
    }

    #[test]
    fn majority_ties_break_toward_the_least_color() {
        // Vertex 0 sees colors 1,1,0,0; the tie must resolve to color 0.
        let g =
            ColoredCompleteGraph::from_edge_colors(5, vec![1, 1, 0, 0, 2, 2, 2, 2, 2, 2]).unwrap();
        let GreedyOutcome::Witness(report) = greedy_low_color_clique(&g, 3, 1).unwrap() else {
            panic!("two survivors are enough for k - m = 2");
        };
        assert_eq!(report.vertices, vec![0, 3, 4]);
        validate_witness(&g, &report).unwrap();
    }

    #[test]
    fn parameter_gates_hold() {
        let g = mono(4);
        assert!(matches!(
            greedy_low_color_clique(&g, 3, 0),
            Err(PipelineError::BadParams(_))
        ));
        assert!(matches!(
            greedy_low_color_clique(&g, 3, 3),
            Err(PipelineError::BadParams(_))
        ));
        assert!(matches!(
            greedy_low_color_clique(&g, 5, 1),
            Err(PipelineError::BadParams(_))
        ));
    }
}
