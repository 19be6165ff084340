//! Nerves of covers, mod-2 homology, and landmark-count sweeps.

mod homology;
mod sweep;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::landmark::{CoverError, LandmarkError};

pub use homology::{betti, euler_characteristic};
pub use sweep::{
    dominance_range, landmark_persistence_sweep, median_length, sweep_prefixes, DominanceRange, PersistenceSweep, SweepPlan,
    SweepRecord,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error("cover has no sets")]
    EmptyCover,
    #[error("dimension cap must be at least 1")]
    InvalidDimCap,
    #[error("Betti numbers up to dimension {requested} need simplices up to dimension {needed}, but the cap is {cap}")]
    InsufficientDimCap { requested: usize, needed: usize, cap: usize },
    #[error("simplex {0:?} is not strictly increasing or has a vertex out of range")]
    InvalidSimplex(Vec<usize>),
    #[error("set {set} contains point {point} outside 0..{n}")]
    PointOutOfRange { set: usize, point: usize, n: usize },
    #[error("sweep needs m_max in 1..={uniq}, got {m_max}")]
    InvalidSweepRange { m_max: usize, uniq: usize },
    #[error(transparent)]
    Landmark(#[from] LandmarkError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// A simplicial complex stored by dimension, truncated at `dim_cap`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialComplex {
    n_vertices: usize,
    dim_cap: usize,
    /// `simplices[d]` holds the `d`-simplices in lexicographic order.
    simplices: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    /// Downward closure of `maximal` truncated at `dim_cap`, plus every
    /// vertex in `0..n_vertices`.
    pub fn from_maximal(
        n_vertices: usize,
        maximal: &[Vec<usize>],
        dim_cap: usize,
    ) -> Result<Self, ComplexError> {
        let mut simplices = vec![Vec::new(); dim_cap + 1];
        simplices[0] = (0..n_vertices).map(|v| vec![v]).collect();
        for s in maximal {
            if s.windows(2).any(|w| w[0] >= w[1]) || s.iter().any(|&v| v >= n_vertices) {
                return Err(ComplexError::InvalidSimplex(s.clone()));
            }
            for size in 1..=s.len().min(dim_cap + 1) {
                for_each_subset(s, size, &mut |f| simplices[size - 1].push(f.to_vec()));
            }
        }
        for level in &mut simplices {
            level.sort_unstable();
            level.dedup();
        }
        Ok(SimplicialComplex { n_vertices, dim_cap, simplices })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn dim_cap(&self) -> usize {
        self.dim_cap
    }

    /// The `d`-simplices, sorted; empty above the cap.
    pub fn simplices(&self, d: usize) -> &[Vec<usize>] {
        self.simplices.get(d).map_or(&[], |v| v.as_slice())
    }

    /// Number of `d`-simplices.
    pub fn count(&self, d: usize) -> usize {
        self.simplices(d).len()
    }

    /// Highest dimension with a stored simplex.
    pub fn dimension(&self) -> Option<usize> {
        (0..=self.dim_cap).rev().find(|&d| self.count(d) > 0)
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        simplex
            .len()
            .checked_sub(1)
            .is_some_and(|d| self.simplices(d).binary_search_by(|s| s.as_slice().cmp(simplex)).is_ok())
    }
}

fn for_each_subset(s: &[usize], size: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(s: &[usize], size: usize, start: usize, buf: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if buf.len() == size {
            f(buf);
            return;
        }
        let need = size - buf.len();
        for i in start..=s.len() - need {
            buf.push(s[i]);
            rec(s, size, i + 1, buf, f);
            buf.pop();
        }
    }
    rec(s, size, 0, &mut Vec::with_capacity(size), f);
}

/// The nerve of a family of subsets of `0..n_points`, up to dimension `dim_cap`.
///
/// Vertex `j` stands for `sets[j]`; a simplex is kept when its sets share a
/// point. Simplices are grown from the overlap graph one vertex at a time,
/// carrying the running intersection as a bitset.
pub fn nerve_of_sets(
    n_points: usize,
    sets: &[Vec<usize>],
    dim_cap: usize,
) -> Result<SimplicialComplex, ComplexError> {
    if sets.is_empty() {
        return Err(ComplexError::EmptyCover);
    }
    if dim_cap == 0 {
        return Err(ComplexError::InvalidDimCap);
    }
    for (set, s) in sets.iter().enumerate() {
        if let Some(&point) = s.iter().find(|&&x| x >= n_points) {
            return Err(ComplexError::PointOutOfRange { set, point, n: n_points });
        }
    }
    let m = sets.len();
    let words = n_points.div_ceil(64).max(1);
    let bits: Vec<Vec<u64>> = sets
        .iter()
        .map(|s| {
            let mut b = vec![0u64; words];
            for &x in s {
                b[x / 64] |= 1 << (x % 64);
            }
            b
        })
        .collect();

    // overlap graph: sets sharing a point, listed above each vertex
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n_points];
    for (j, s) in sets.iter().enumerate() {
        for &x in s {
            incident[x].push(j);
        }
    }
    let mut up: Vec<Vec<usize>> = vec![Vec::new(); m];
    for list in &incident {
        for (a, &i) in list.iter().enumerate() {
            up[i].extend_from_slice(&list[a + 1..]);
        }
    }
    for nb in &mut up {
        nb.sort_unstable();
        nb.dedup();
    }

    let mut simplices: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim_cap + 1];
    let mut stack = Vec::with_capacity(dim_cap + 1);
    for v in 0..m {
        if sets[v].is_empty() {
            // an empty set meets nothing but still names a vertex
            simplices[0].push(vec![v]);
            continue;
        }
        stack.push(v);
        grow(&bits, &up, &up[v], &bits[v], &mut stack, &mut simplices, dim_cap);
        stack.pop();
    }
    for level in &mut simplices {
        level.sort_unstable();
    }
    Ok(SimplicialComplex { n_vertices: m, dim_cap, simplices })
}

fn grow(
    bits: &[Vec<u64>],
    up: &[Vec<usize>],
    cands: &[usize],
    inter: &[u64],
    stack: &mut Vec<usize>,
    out: &mut [Vec<Vec<usize>>],
    dim_cap: usize,
) {
    out[stack.len() - 1].push(stack.clone());
    if stack.len() > dim_cap {
        return;
    }
    for (i, &w) in cands.iter().enumerate() {
        let next: Vec<u64> = inter.iter().zip(&bits[w]).map(|(a, b)| a & b).collect();
        if next.iter().all(|&x| x == 0) {
            continue;
        }
        // later candidates must also be adjacent to w
        let rest: Vec<usize> = intersect_sorted(&cands[i + 1..], &up[w]);
        stack.push(w);
        grow(bits, up, &rest, &next, stack, out, dim_cap);
        stack.pop();
    }
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// The nerve of a landmark cover.
pub fn nerve(cover: &crate::landmark::Cover, dim_cap: usize) -> Result<SimplicialComplex, ComplexError> {
    nerve_of_sets(cover.n_points(), &cover.sets, dim_cap)
}

/// Betti numbers `(β_0, β_1, …)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BettiVector(pub Vec<usize>);

impl BettiVector {
    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, d: usize) -> Option<usize> {
        self.0.get(d).copied()
    }

    /// Whether `self` agrees with `target` in every dimension `target` lists.
    pub fn matches(&self, target: &BettiVector) -> bool {
        target.0.iter().enumerate().all(|(d, &b)| self.get(d) == Some(b))
    }
}

impl std::fmt::Display for BettiVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|b| b.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl std::str::FromStr for BettiVector {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        inner
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| format!("bad Betti number `{t}`: {e}")))
            .collect::<Result<Vec<_>, _>>()
            .map(BettiVector)
    }
}
