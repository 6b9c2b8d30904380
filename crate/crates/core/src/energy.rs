//! The r-th color energy graph of an edge coloring.
//!
//! For a coloring of `K_n`, the r-th energy graph lives on all `n^r` vertex
//! tuples (repeated coordinates included, loops excluded); two tuples are
//! adjacent when all r coordinate pairs are edges of one common color, which
//! is then the lifted color of that edge. A color class of size `m` spawns
//! exactly `2^(r-1) * m^r` such edges, so the materialized edge count is
//! `2^(r-1) * sum_c m_c^r`; the unhalved sum `sum_c m_c^r` is the statistic
//! the lower-bound certificate uses.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::ColoredCompleteGraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnergyError {
    #[error("r must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error(
        "materializing would need {needed} {what}, cap is {cap}; \
         use the implicit representation or raise the cap"
    )]
    CapacityExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },
}

#[derive(Debug, Clone, Copy)]
pub struct EnergyCaps {
    pub max_vertices: u128,
    pub max_edges: u128,
}

impl Default for EnergyCaps {
    fn default() -> Self {
        Self {
            max_vertices: 1 << 22,
            max_edges: 1 << 24,
        }
    }
}

#[derive(Debug, Clone)]
enum Repr {
    /// Tuples are mixed-radix encoded, coordinate 0 most significant.
    Materialized { edges: Vec<(u64, u64, u32)> },
    Implicit,
}

/// The r-th color energy graph over a base coloring.
#[derive(Debug, Clone)]
pub struct EnergyGraph<'a> {
    base: &'a ColoredCompleteGraph,
    r: usize,
    repr: Repr,
}

pub fn tuple_id(n: usize, tuple: &[u32]) -> u64 {
    tuple.iter().fold(0u64, |acc, &c| acc * n as u64 + c as u64)
}

pub fn tuple_from_id(n: usize, r: usize, mut id: u64) -> Vec<u32> {
    let mut out = vec![0u32; r];
    for slot in out.iter_mut().rev() {
        *slot = (id % n as u64) as u32;
        id /= n as u64;
    }
    out
}

/// `sum_c m_c^r`, the proof-side edge statistic.
pub fn paper_edge_statistic(g: &ColoredCompleteGraph, r: usize) -> u128 {
    g.class_sizes()
        .iter()
        .map(|&m| (m as u128).pow(r as u32))
        .sum()
}

/// `2^(r-1) * sum_c m_c^r`, the number of materialized edges.
pub fn edge_count_exact(g: &ColoredCompleteGraph, r: usize) -> u128 {
    (1u128 << (r - 1)) * paper_edge_statistic(g, r)
}

pub fn build_energy_graph<'a>(
    g: &'a ColoredCompleteGraph,
    r: usize,
    materialize: bool,
    caps: EnergyCaps,
) -> Result<EnergyGraph<'a>, EnergyError> {
    if r < 2 {
        return Err(EnergyError::OrderTooSmall(r));
    }
    if !materialize {
        return Ok(EnergyGraph {
            base: g,
            r,
            repr: Repr::Implicit,
        });
    }
    let vertices = (g.n() as u128).pow(r as u32);
    if vertices > caps.max_vertices {
        return Err(EnergyError::CapacityExceeded {
            what: "tuple vertices",
            needed: vertices,
            cap: caps.max_vertices,
        });
    }
    let edge_total = edge_count_exact(g, r);
    if edge_total > caps.max_edges {
        return Err(EnergyError::CapacityExceeded {
            what: "edges",
            needed: edge_total,
            cap: caps.max_edges,
        });
    }
    let mut edges = Vec::with_capacity(edge_total as usize);
    for c in 0..g.num_colors() as u32 {
        let class = g.class(c);
        // Every choice of one oriented class edge per coordinate yields an
        // ordered tuple pair; keeping x < y halves it to unordered edges.
        let mut x = vec![0u32; r];
        let mut y = vec![0u32; r];
        fill_edges(g.n(), class, c, &mut x, &mut y, 0, &mut edges);
    }
    edges.sort_unstable();
    debug_assert_eq!(edges.len() as u128, edge_total);
    Ok(EnergyGraph {
        base: g,
        r,
        repr: Repr::Materialized { edges },
    })
}

fn fill_edges(
    n: usize,
    class: &[(u32, u32)],
    color: u32,
    x: &mut Vec<u32>,
    y: &mut Vec<u32>,
    k: usize,
    out: &mut Vec<(u64, u64, u32)>,
) {
    if k == x.len() {
        let xi = tuple_id(n, x);
        let yi = tuple_id(n, y);
        if xi < yi {
            out.push((xi, yi, color));
        }
        return;
    }
    for &(u, v) in class {
        for (a, b) in [(u, v), (v, u)] {
            x[k] = a;
            y[k] = b;
            fill_edges(n, class, color, x, y, k + 1, out);
        }
    }
}

impl<'a> EnergyGraph<'a> {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn base(&self) -> &ColoredCompleteGraph {
        self.base
    }

    pub fn vertex_count(&self) -> u128 {
        (self.base.n() as u128).pow(self.r as u32)
    }

    pub fn edge_count_exact(&self) -> u128 {
        edge_count_exact(self.base, self.r)
    }

    pub fn paper_edge_statistic(&self) -> u128 {
        paper_edge_statistic(self.base, self.r)
    }

    pub fn is_materialized(&self) -> bool {
        matches!(self.repr, Repr::Materialized { .. })
    }

    pub fn materialized_edges(&self) -> Option<&[(u64, u64, u32)]> {
        match &self.repr {
            Repr::Materialized { edges } => Some(edges),
            Repr::Implicit => None,
        }
    }

    /// Lifted color of the tuple pair, if adjacent. Representation-agnostic:
    /// both answer from the base coloring in O(r).
    pub fn lifted_color(&self, x: &[u32], y: &[u32]) -> Option<u32> {
        assert_eq!(x.len(), self.r);
        assert_eq!(y.len(), self.r);
        let mut color = None;
        for k in 0..self.r {
            if x[k] == y[k] {
                return None;
            }
            let c = self.base.color_of(x[k], y[k]);
            match color {
                None => color = Some(c),
                Some(p) if p != c => return None,
                _ => {}
            }
        }
        color
    }

    pub fn adjacent(&self, x: &[u32], y: &[u32]) -> bool {
        self.lifted_color(x, y).is_some()
    }
}

/// The color energy `E(G) = |{(v1,v2,v3,v4) : chi(v1 v2) = chi(v3 v4)}|`
/// over ordered quadruples with `v1 != v2`, `v3 != v4`; equals
/// `4 * sum_c m_c^2`.
pub fn color_energy(g: &ColoredCompleteGraph) -> u128 {
    4 * paper_edge_statistic(g, 2)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HolderBound {
    pub r: usize,
    pub num_colors: u64,
    pub edge_total: u64,
    pub paper_edge_statistic: String,
    /// `(|E|^r / sum_c m_c^r)^(1/(r-1))` as a float.
    pub bound_float: f64,
    /// `|C|^(r-1) * sum_c m_c^r` as a decimal string.
    pub certificate_lhs: String,
    /// `|E|^r` as a decimal string.
    pub certificate_rhs: String,
    /// Exact integer verdict of `lhs >= rhs`; never floating point.
    pub certificate_ok: bool,
    /// True exactly when the bound is tight.
    pub certificate_tight: bool,
}

/// The lower bound on the number of colors implied by class-size averaging:
/// `|C| >= (|E|^r / sum_c m_c^r)^(1/(r-1))`, certified in exact integers as
/// `|C|^(r-1) * sum_c m_c^r >= |E|^r`.
pub fn holder_lower_bound(g: &ColoredCompleteGraph, r: usize) -> Result<HolderBound, EnergyError> {
    if r < 2 {
        return Err(EnergyError::OrderTooSmall(r));
    }
    let e = crate::combin::choose2(g.n()) as u64;
    let stat = paper_edge_statistic(g, r);
    let lhs = BigUint::from(g.num_colors()).pow(r as u32 - 1) * BigUint::from(stat);
    let rhs = BigUint::from(e).pow(r as u32);
    let ratio = (e as f64).powi(r as i32) / stat as f64;
    Ok(HolderBound {
        r,
        num_colors: g.num_colors() as u64,
        edge_total: e,
        paper_edge_statistic: stat.to_string(),
        bound_float: ratio.powf(1.0 / (r as f64 - 1.0)),
        certificate_lhs: lhs.to_string(),
        certificate_rhs: rhs.to_string(),
        certificate_ok: lhs >= rhs,
        certificate_tight: lhs == rhs,
    })
}
