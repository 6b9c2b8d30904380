//! Ground truth at desk scale: exhaustive f(n, p, q) for tiny n, a JSON
//! cache for the computed values, and the closed-form exponent table
//! pairing each lower-bound family with its local-lemma upper bound.

use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use itertools::Itertools;
use num_rational::Rational64;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::combin::{choose2, pair_index};

#[derive(Debug, Error)]
pub enum ExactError {
    #[error("n = {n} exceeds the search cap {cap} for p = {p}")]
    CapExceeded { n: usize, p: usize, cap: usize },
    #[error("{family}: {detail}")]
    ConstraintViolated { family: &'static str, detail: String },
    #[error("bad parameters: {0}")]
    BadParams(String),
}

/// One solved instance. `witness_coloring` lists edge colors in
/// lexicographic pair order, the same layout the coloring JSON format
/// uses, and spends exactly `f_value` colors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactResult {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub f_value: usize,
    pub witness_coloring: Vec<u32>,
    pub nodes_explored: u64,
}

/// Default search cap on n for a given clique size.
pub fn search_cap(p: usize) -> usize {
    if p == 3 {
        7
    } else {
        6
    }
}

/// Minimum number of colors in a (p, q)-coloring of `K_n`, by iterative
/// deepening on the palette size.
pub fn exact_f(n: usize, p: usize, q: usize) -> Result<ExactResult, ExactError> {
    exact_f_capped(n, p, q, search_cap(p))
}

/// [`exact_f`] with an explicit cap override.
pub fn exact_f_capped(n: usize, p: usize, q: usize, cap: usize) -> Result<ExactResult, ExactError> {
    gate_params(n, p, q, cap)?;
    let edge_total = choose2(n);
    let (touching, subset_total) = touching_table(n, p);

    // Any (p, q)-coloring spends at least q colors once a p-clique exists,
    // and the rainbow coloring always succeeds, so the loop terminates.
    let start = if n >= p { q } else { 1 };
    let mut nodes = 0u64;
    for target in start..=edge_total {
        let mut search = Search::fresh(q, target, p, &touching, subset_total, edge_total);
        let found = search.assign(0, 0);
        nodes += search.nodes;
        if found {
            debug_assert_eq!(
                search.colors.iter().max().map(|&c| c as usize + 1),
                Some(target)
            );
            return Ok(ExactResult {
                n,
                p,
                q,
                f_value: target,
                witness_coloring: search.colors,
                nodes_explored: nodes,
            });
        }
    }
    unreachable!("rainbow coloring satisfies every (p, q) with q <= C(p,2)")
}

/// Exhaustive search for a (p, q)-coloring of `K_n` spending at most
/// `palette` colors. `Ok(None)` certifies f(n, p, q) > palette.
pub fn coloring_with_palette(
    n: usize,
    p: usize,
    q: usize,
    palette: usize,
) -> Result<Option<Vec<u32>>, ExactError> {
    gate_params(n, p, q, search_cap(p))?;
    if palette < 1 {
        return Err(ExactError::BadParams("need palette >= 1".into()));
    }
    let edge_total = choose2(n);
    let (touching, subset_total) = touching_table(n, p);
    let target = palette.min(edge_total);
    let mut search = Search::fresh(q, target, p, &touching, subset_total, edge_total);
    if search.assign(0, 0) {
        Ok(Some(search.colors))
    } else {
        Ok(None)
    }
}

fn gate_params(n: usize, p: usize, q: usize, cap: usize) -> Result<(), ExactError> {
    if n < 2 {
        return Err(ExactError::BadParams(format!("need n >= 2, got {n}")));
    }
    if p < 3 {
        return Err(ExactError::BadParams(format!("need p >= 3, got {p}")));
    }
    if q < 1 || q > choose2(p) {
        return Err(ExactError::BadParams(format!(
            "need 1 <= q <= C(p,2) = {}, got {q}",
            choose2(p)
        )));
    }
    if n > cap {
        return Err(ExactError::CapExceeded { n, p, cap });
    }
    Ok(())
}

/// For each edge slot in lexicographic pair order, the p-subsets touching it.
fn touching_table(n: usize, p: usize) -> (Vec<Vec<u32>>, usize) {
    let mut touching = vec![Vec::new(); choose2(n)];
    let mut subset_total = 0;
    if n >= p {
        for combo in (0..n).combinations(p) {
            for (i, &u) in combo.iter().enumerate() {
                for &v in &combo[i + 1..] {
                    touching[pair_index(n, u, v)].push(subset_total as u32);
                }
            }
            subset_total += 1;
        }
    }
    (touching, subset_total)
}

struct Search<'a> {
    q: usize,
    target: usize,
    subset_edges: usize,
    touching: &'a [Vec<u32>],
    colors: Vec<u32>,
    counts: Vec<Vec<u16>>,
    filled: Vec<usize>,
    distinct: Vec<usize>,
    nodes: u64,
}

impl<'a> Search<'a> {
    fn fresh(
        q: usize,
        target: usize,
        p: usize,
        touching: &'a [Vec<u32>],
        subset_total: usize,
        edge_total: usize,
    ) -> Self {
        Search {
            q,
            target,
            subset_edges: choose2(p),
            touching,
            colors: vec![u32::MAX; edge_total],
            counts: vec![vec![0u16; target]; subset_total],
            filled: vec![0; subset_total],
            distinct: vec![0; subset_total],
            nodes: 0,
        }
    }

    /// Colors edges in lexicographic order; a new color id enters the
    /// palette only as max-used + 1.
    fn assign(&mut self, edge: usize, used: usize) -> bool {
        if edge == self.colors.len() {
            return true;
        }
        let palette = (used + 1).min(self.target);
        for c in 0..palette {
            self.nodes += 1;
            self.apply(edge, c);
            if self.feasible(edge) {
                self.colors[edge] = c as u32;
                if self.assign(edge + 1, used.max(c + 1)) {
                    return true;
                }
            }
            self.retract(edge, c);
        }
        false
    }

    fn apply(&mut self, edge: usize, c: usize) {
        for &s in &self.touching[edge] {
            let s = s as usize;
            self.filled[s] += 1;
            self.counts[s][c] += 1;
            if self.counts[s][c] == 1 {
                self.distinct[s] += 1;
            }
        }
    }

    fn retract(&mut self, edge: usize, c: usize) {
        for &s in &self.touching[edge] {
            let s = s as usize;
            self.filled[s] -= 1;
            self.counts[s][c] -= 1;
            if self.counts[s][c] == 0 {
                self.distinct[s] -= 1;
            }
        }
    }

    /// Even a rainbow completion cannot rescue a subset whose distinct
    /// count plus open slots falls short of q.
    fn feasible(&self, edge: usize) -> bool {
        self.touching[edge].iter().all(|&s| {
            let s = s as usize;
            self.distinct[s] + (self.subset_edges - self.filled[s]) >= self.q
        })
    }
}

/// On-disk table of solved instances, keyed `n,p,q`.
#[derive(Debug, Default, Serialize, Deserialize)]
pub struct ExactCache {
    entries: BTreeMap<String, ExactResult>,
}

impl ExactCache {
    pub fn load(path: &Path) -> io::Result<Self> {
        match std::fs::read(path) {
            Ok(bytes) => serde_json::from_slice(&bytes).map_err(io::Error::other),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(Self::default()),
            Err(e) => Err(e),
        }
    }

    pub fn save(&self, path: &Path) -> io::Result<()> {
        let tmp = path.with_extension("cache.tmp");
        std::fs::write(&tmp, serde_json::to_vec_pretty(self).map_err(io::Error::other)?)?;
        std::fs::rename(&tmp, path)
    }

    pub fn get(&self, n: usize, p: usize, q: usize) -> Option<&ExactResult> {
        self.entries.get(&Self::key(n, p, q))
    }

    pub fn put(&mut self, result: ExactResult) {
        self.entries
            .insert(Self::key(result.n, result.p, result.q), result);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn key(n: usize, p: usize, q: usize) -> String {
        format!("{n},{p},{q}")
    }
}

/// One lower-bound family instantiated at concrete parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "theorem", rename_all = "snake_case")]
pub enum TheoremInstance {
    Paths { k: usize, m: usize },
    Greedy { k: usize, m: usize },
    SubKt { t: usize },
    Theta { r: usize, a: usize, b: usize },
    SubKtt { r: usize, b: usize, l: usize },
}

impl TheoremInstance {
    pub fn source(&self) -> &'static str {
        match self {
            Self::Paths { .. } => "paths",
            Self::Greedy { .. } => "greedy",
            Self::SubKt { .. } => "subkt",
            Self::Theta { .. } => "theta",
            Self::SubKtt { .. } => "subktt",
        }
    }

    /// Builds an instance from a theorem id and named arguments, the shape
    /// the CLI collects.
    pub fn from_args(theorem: &str, args: &BTreeMap<String, usize>) -> Result<Self, ExactError> {
        let get = |key: &str| {
            args.get(key)
                .copied()
                .ok_or_else(|| ExactError::BadParams(format!("{theorem} needs parameter {key}")))
        };
        match theorem {
            "paths" => Ok(Self::Paths {
                k: get("k")?,
                m: get("m")?,
            }),
            "greedy" => Ok(Self::Greedy {
                k: get("k")?,
                m: get("m")?,
            }),
            "subkt" => Ok(Self::SubKt { t: get("t")? }),
            "theta" => Ok(Self::Theta {
                r: get("r")?,
                a: get("a")?,
                b: get("b")?,
            }),
            "subktt" => Ok(Self::SubKtt {
                r: get("r")?,
                b: get("b")?,
                l: get("l")?,
            }),
            other => Err(ExactError::BadParams(format!("unknown theorem {other}"))),
        }
    }
}

fn rational_string<S: Serializer>(x: &Rational64, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(&format!("{}/{}", x.numer(), x.denom()))
}

/// A (p, q) pair with the family's lower exponent and the local-lemma
/// upper exponent (p−2)/(C(p,2)−q+1), both exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentEntry {
    pub source: &'static str,
    pub p: usize,
    pub q: usize,
    #[serde(serialize_with = "rational_string")]
    pub lower_exponent: Rational64,
    #[serde(serialize_with = "rational_string")]
    pub upper_exponent: Rational64,
}

/// Evaluates one family at concrete parameters. Repetition counts are
/// carried instead of q so the range gate reads directly.
pub fn exponent_entry(inst: TheoremInstance) -> Result<ExponentEntry, ExactError> {
    let source = inst.source();
    let fail = |detail: String| ExactError::ConstraintViolated {
        family: source,
        detail,
    };
    let (p, reps, lower) = match inst {
        TheoremInstance::Paths { k, m } => {
            if !(m >= 2 && k > m) {
                return Err(fail(format!("need k > m >= 2, got k = {k}, m = {m}")));
            }
            let reps = m * (k / (m + 1)) - m;
            (k, reps, Rational64::new(m as i64 + 1, m as i64))
        }
        TheoremInstance::Greedy { k, m } => {
            if !(1 <= m && m < k) {
                return Err(fail(format!("need 1 <= m <= k - 1, got k = {k}, m = {m}")));
            }
            let reps = m * (k - m) + choose2(m) - m;
            (k, reps, Rational64::new(1, m as i64))
        }
        TheoremInstance::SubKt { t } => {
            if t < 3 {
                return Err(fail(format!("need t >= 3, got {t}")));
            }
            let s = t + choose2(t);
            let lower = Rational64::new(2 * t as i64 - 2, 2 * t as i64 - 3);
            (2 * s, 2 * choose2(t), lower)
        }
        TheoremInstance::Theta { r, a, b } => {
            if !(r >= 2 && b >= 2 && a > r) {
                return Err(fail(format!(
                    "need r >= 2, b >= 2, a > r, got r = {r}, a = {a}, b = {b}"
                )));
            }
            let l = 2 + b * (a - 1);
            let lower = Rational64::new((r * (a - 1)) as i64, ((r - 1) * a) as i64);
            (r * l, (r - 1) * a * b, lower)
        }
        TheoremInstance::SubKtt { r, b, l } => {
            if !((2..=6).contains(&r) && b >= 3 && l >= 2 && 2 * r < 3 * l) {
                return Err(fail(format!(
                    "need 2 <= r <= 6, b >= 3, l >= 2, 2r < 3l, got r = {r}, b = {b}, l = {l}"
                )));
            }
            let s = 3 + b + 3 * (l - 1) * b;
            let lower = Rational64::new((r * (3 * l - 2)) as i64, ((r - 1) * 3 * l) as i64);
            (r * s, 3 * (r - 1) * b * l, lower)
        }
    };
    if reps < 1 || reps > choose2(p) {
        return Err(fail(format!(
            "q = C({p},2) - {reps} + 1 leaves the meaningful range 1..=C(p,2)"
        )));
    }
    let entry = ExponentEntry {
        source,
        p,
        q: choose2(p) - reps + 1,
        lower_exponent: lower,
        upper_exponent: Rational64::new(p as i64 - 2, reps as i64),
    };
    debug_assert!(entry.lower_exponent <= entry.upper_exponent);
    Ok(entry)
}

/// Evaluates each instantiation, keeping per-row failures in place.
pub fn exponent_table(instances: &[TheoremInstance]) -> Vec<Result<ExponentEntry, ExactError>> {
    instances.iter().map(|&inst| exponent_entry(inst)).collect()
}
