//! Finite pseudometric and asymmetric dissimilarity spaces.
//!
//! A [`DissimilaritySpace`] stores a dense `N × N` table of nonnegative
//! dissimilarities. Symmetry is optional: directed shortest-path matrices and
//! other one-way relevance measures are accepted as long as every point is no
//! farther from itself than from any other point (`d(x,x) ≤ d(x,y)`).
//!
//! Relative ranks are derived from the table row by row. With the
//! [`RankVariant::Check`] tie rule the out-rank `q(x,y)` counts the points
//! strictly nearer to `x` than `y` is; with [`RankVariant::Hat`] it counts the
//! points at most as near as `y`, so that co-located points share the larger
//! rank. Rank rows are computed on first use and cached; the cache is
//! thread-safe, so a space can be shared across workers by reference.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised while building or querying a space.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpaceError {
    #[error("input contains no points")]
    EmptyInput,
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NonSquare { row: usize, len: usize, expected: usize },
    #[error("row {row} has {len} coordinates, expected {expected}")]
    RaggedRows { row: usize, len: usize, expected: usize },
    #[error("entry ({row}, {col}) is negative")]
    NegativeEntry { row: usize, col: usize },
    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("d({row},{row}) exceeds d({row},{col}); a point must be no farther from itself than from any other")]
    RelativeRankViolation { row: usize, col: usize },
    #[error("matrix flagged symmetric but d({row},{col}) != d({col},{row})")]
    AsymmetryUnderSymmetricFlag { row: usize, col: usize },
    #[error("row {row} is the zero vector; cosine distance is undefined")]
    ZeroVector { row: usize },
    #[error("numeric column {column} has zero or negative range")]
    ZeroRange { column: usize },
    #[error("column {column} mixes numeric and categorical values")]
    MixedTypeColumn { column: usize },
    #[error("index {index} out of bounds for a space of {len} points")]
    IndexOutOfBounds { index: usize, len: usize },
    #[error("rank sequences differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("co-location tolerance must be a nonnegative finite number")]
    InvalidTolerance,
}

/// Tie-handling rule for relative ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RankVariant {
    /// `q̌(x,y) = |{z : d(x,z) < d(x,y)}|`; takes values in `[0, N)`.
    #[default]
    Check,
    /// `q̂(x,y) = |{z : d(x,z) ≤ d(x,y)}|`; takes values in `[1, N]`.
    Hat,
}

impl RankVariant {
    /// Smallest rank bound at which neighborhood sequences start.
    pub fn first_bound(self) -> usize {
        match self {
            RankVariant::Check => 0,
            RankVariant::Hat => 1,
        }
    }
}

/// Orientation of a neighborhood: points reached from `x`, or points that reach `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Out,
    In,
}

/// Partition of the points into co-location classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColocationPartition {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl ColocationPartition {
    /// Classes ordered by their smallest member; members are sorted.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, point: usize) -> usize {
        self.class_of[point]
    }

    /// Number of distinguishable points, `uniq(X)`.
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_members(&self, point: usize) -> &[usize] {
        &self.classes[self.class_of[point]]
    }

    /// Indicator mask of `cl(Y)`.
    pub fn closure_mask(&self, points: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.class_of.len()];
        for &p in points {
            for &q in &self.classes[self.class_of[p]] {
                mask[q] = true;
            }
        }
        mask
    }
}

/// Counts `(|N_k(x)|)_k` over a range of rank bounds.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RankSequence(pub Vec<usize>);

impl RankSequence {
    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Reverse lexicographic comparison: `a < b` iff at the first position
    /// where they differ, `a` has the larger entry.
    pub fn revlex_cmp(&self, other: &RankSequence) -> Result<Ordering, SpaceError> {
        revlex_compare(&self.0, &other.0)
    }
}

/// Reverse lexicographic order on equal-length sequences.
pub fn revlex_compare(a: &[usize], b: &[usize]) -> Result<Ordering, SpaceError> {
    if a.len() != b.len() {
        return Err(SpaceError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(b.cmp(a))
}

/// A finite set of points with a dense, possibly asymmetric dissimilarity.
#[derive(Clone)]
pub struct DissimilaritySpace {
    n: usize,
    values: Vec<f64>,
    symmetric: bool,
    tolerance: f64,
    partition: OnceLock<ColocationPartition>,
    check_rows: Vec<OnceLock<Box<[u32]>>>,
    hat_rows: Vec<OnceLock<Box<[u32]>>>,
}

impl fmt::Debug for DissimilaritySpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DissimilaritySpace")
            .field("n", &self.n)
            .field("symmetric", &self.symmetric)
            .field("tolerance", &self.tolerance)
            .finish_non_exhaustive()
    }
}

impl DissimilaritySpace {
    /// Validates a square table given as rows.
    pub fn from_rows<R: AsRef<[f64]>>(
        rows: &[R],
        symmetric: bool,
        tolerance: f64,
    ) -> Result<Self, SpaceError> {
        let n = rows.len();
        if n == 0 {
            return Err(SpaceError::EmptyInput);
        }
        let mut values = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return Err(SpaceError::NonSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
            values.extend_from_slice(r);
        }
        Self::from_dense(n, values, symmetric, tolerance)
    }

    /// Validates a row-major `n × n` table.
    pub fn from_dense(
        n: usize,
        values: Vec<f64>,
        symmetric: bool,
        tolerance: f64,
    ) -> Result<Self, SpaceError> {
        if n == 0 {
            return Err(SpaceError::EmptyInput);
        }
        if values.len() != n * n {
            return Err(SpaceError::NonSquare {
                row: values.len() / n,
                len: values.len() % n,
                expected: n,
            });
        }
        if !(tolerance.is_finite() && tolerance >= 0.0) {
            return Err(SpaceError::InvalidTolerance);
        }
        for row in 0..n {
            let r = &values[row * n..(row + 1) * n];
            for (col, &v) in r.iter().enumerate() {
                if !v.is_finite() {
                    return Err(SpaceError::NonFinite { row, col });
                }
                if v < 0.0 {
                    return Err(SpaceError::NegativeEntry { row, col });
                }
            }
            let diag = r[row];
            if let Some(col) = r.iter().position(|&v| v < diag) {
                return Err(SpaceError::RelativeRankViolation { row, col });
            }
        }
        if symmetric {
            for row in 0..n {
                for col in row + 1..n {
                    if values[row * n + col] != values[col * n + row] {
                        return Err(SpaceError::AsymmetryUnderSymmetricFlag { row, col });
                    }
                }
            }
        }
        Ok(Self::new_unchecked(n, values, symmetric, tolerance))
    }

    fn new_unchecked(n: usize, values: Vec<f64>, symmetric: bool, tolerance: f64) -> Self {
        DissimilaritySpace {
            n,
            values,
            symmetric,
            tolerance,
            partition: OnceLock::new(),
            check_rows: (0..n).map(|_| OnceLock::new()).collect(),
            hat_rows: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    /// Pairwise Euclidean distances between coordinate rows.
    pub fn euclidean<P: AsRef<[f64]>>(points: &[P]) -> Result<Self, SpaceError> {
        let dim = check_coordinates(points)?;
        let n = points.len();
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            let a = points[i].as_ref();
            for j in i + 1..n {
                let b = points[j].as_ref();
                let d = (0..dim)
                    .map(|k| (a[k] - b[k]) * (a[k] - b[k]))
                    .sum::<f64>()
                    .sqrt();
                values[i * n + j] = d;
                values[j * n + i] = d;
            }
        }
        Ok(Self::new_unchecked(n, values, true, 0.0))
    }

    /// `1 − cos(x, y)`, clamped to `[0, 2]`.
    pub fn cosine<P: AsRef<[f64]>>(points: &[P]) -> Result<Self, SpaceError> {
        let dim = check_coordinates(points)?;
        let n = points.len();
        let norms: Vec<f64> = points
            .iter()
            .map(|p| p.as_ref().iter().map(|v| v * v).sum::<f64>().sqrt())
            .collect();
        if let Some(row) = norms.iter().position(|&v| v == 0.0) {
            return Err(SpaceError::ZeroVector { row });
        }
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            let a = points[i].as_ref();
            for j in i + 1..n {
                let b = points[j].as_ref();
                let dot: f64 = (0..dim).map(|k| a[k] * b[k]).sum();
                let mut d = (1.0 - dot / (norms[i] * norms[j])).clamp(0.0, 2.0);
                // parallel vectors should be co-located, not 1 ulp apart
                if d < 1e-12 {
                    d = 0.0;
                }
                values[i * n + j] = d;
                values[j * n + i] = d;
            }
        }
        Ok(Self::new_unchecked(n, values, true, 0.0))
    }

    /// Gower dissimilarity over mixed numeric and categorical records.
    ///
    /// Numeric variables contribute `|x − y| / range`, categorical ones `0`
    /// on equality and `1` otherwise; the result is the mean over variables.
    /// `ranges[c]`, when supplied, overrides the observed span of column `c`.
    pub fn gower(
        table: &[Vec<GowerValue>],
        ranges: Option<&[Option<f64>]>,
    ) -> Result<Self, SpaceError> {
        let n = table.len();
        if n == 0 {
            return Err(SpaceError::EmptyInput);
        }
        let p = table[0].len();
        for (row, r) in table.iter().enumerate() {
            if r.len() != p {
                return Err(SpaceError::RaggedRows {
                    row,
                    len: r.len(),
                    expected: p,
                });
            }
        }
        let mut spans: Vec<Option<f64>> = Vec::with_capacity(p);
        for column in 0..p {
            let numeric = matches!(table[0][column], GowerValue::Num(_));
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for (row, r) in table.iter().enumerate() {
                match (&r[column], numeric) {
                    (GowerValue::Num(v), true) => {
                        if !v.is_finite() {
                            return Err(SpaceError::NonFinite { row, col: column });
                        }
                        lo = lo.min(*v);
                        hi = hi.max(*v);
                    }
                    (GowerValue::Cat(_), false) => {}
                    _ => return Err(SpaceError::MixedTypeColumn { column }),
                }
            }
            if numeric {
                let span = ranges
                    .and_then(|r| r.get(column).copied().flatten())
                    .unwrap_or(hi - lo);
                if !(span > 0.0 && span.is_finite()) {
                    return Err(SpaceError::ZeroRange { column });
                }
                spans.push(Some(span));
            } else {
                spans.push(None);
            }
        }
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let total: f64 = (0..p)
                    .map(|c| match (&table[i][c], &table[j][c], spans[c]) {
                        (GowerValue::Num(a), GowerValue::Num(b), Some(span)) => {
                            ((a - b).abs() / span).min(1.0)
                        }
                        (GowerValue::Cat(a), GowerValue::Cat(b), None) => {
                            if a == b {
                                0.0
                            } else {
                                1.0
                            }
                        }
                        _ => unreachable!("column types validated above"),
                    })
                    .sum();
                let d = if p == 0 { 0.0 } else { total / p as f64 };
                values[i * n + j] = d;
                values[j * n + i] = d;
            }
        }
        Ok(Self::new_unchecked(n, values, true, 0.0))
    }

    /// Replaces the co-location tolerance.
    pub fn with_tolerance(self, tolerance: f64) -> Result<Self, SpaceError> {
        if !(tolerance.is_finite() && tolerance >= 0.0) {
            return Err(SpaceError::InvalidTolerance);
        }
        Ok(Self::new_unchecked(
            self.n,
            self.values,
            self.symmetric,
            tolerance,
        ))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// `d(i, j)`. Panics on out-of-range indices.
    #[inline]
    pub fn dissim(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// Dissimilarities from `i` to every point.
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn check_index(&self, index: usize) -> Result<(), SpaceError> {
        if index < self.n {
            Ok(())
        } else {
            Err(SpaceError::IndexOutOfBounds {
                index,
                len: self.n,
            })
        }
    }

    /// Whether `i` and `j` are indistinguishable at the configured tolerance.
    pub fn colocated(&self, i: usize, j: usize) -> bool {
        self.dissim(i, j) <= self.tolerance && self.dissim(j, i) <= self.tolerance
    }

    /// Co-location classes (transitive closure of [`Self::colocated`]).
    pub fn colocation(&self) -> &ColocationPartition {
        self.partition.get_or_init(|| self.compute_partition())
    }

    fn compute_partition(&self) -> ColocationPartition {
        let n = self.n;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.colocated(i, j) {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        // keep the smaller index as root so class order is by first member
                        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                        parent[hi] = lo;
                    }
                }
            }
        }
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut root_class = vec![usize::MAX; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            if root_class[r] == usize::MAX {
                root_class[r] = classes.len();
                classes.push(Vec::new());
            }
            class_of[i] = root_class[r];
            classes[root_class[r]].push(i);
        }
        ColocationPartition { classes, class_of }
    }

    /// Full out-rank row of `x` under `variant`, cached after the first call.
    pub fn rank_row(&self, variant: RankVariant, x: usize) -> &[u32] {
        let cache = match variant {
            RankVariant::Check => &self.check_rows[x],
            RankVariant::Hat => &self.hat_rows[x],
        };
        cache.get_or_init(|| compute_rank_row(self.row(x), variant).into_boxed_slice())
    }

    /// Out-rank `q(x, y)`; the in-rank is `out_rank(variant, y, x)`.
    pub fn out_rank(&self, variant: RankVariant, x: usize, y: usize) -> Result<usize, SpaceError> {
        self.check_index(x)?;
        self.check_index(y)?;
        Ok(self.rank_row(variant, x)[y] as usize)
    }

    pub fn in_rank(&self, variant: RankVariant, x: usize, y: usize) -> Result<usize, SpaceError> {
        self.out_rank(variant, y, x)
    }

    /// `N_k^+(x) = {y : q(x,y) ≤ k}` or `N_k^-(x) = {y : q(y,x) ≤ k}`.
    pub fn k_neighborhood(
        &self,
        variant: RankVariant,
        direction: Direction,
        x: usize,
        k: usize,
    ) -> Result<Vec<usize>, SpaceError> {
        self.check_index(x)?;
        Ok((0..self.n)
            .filter(|&y| self.directed_rank(variant, direction, x, y) <= k)
            .collect())
    }

    /// The `k`-nearest neighborhood: the smallest closed ball about `x`
    /// holding at least `k` points. Equal to `N^+_{k−1}(x)` under `Check`.
    pub fn nearest_neighborhood(&self, x: usize, k: usize) -> Result<Vec<usize>, SpaceError> {
        if k == 0 {
            self.check_index(x)?;
            return Ok(Vec::new());
        }
        self.k_neighborhood(RankVariant::Check, Direction::Out, x, k - 1)
    }

    /// In-neighborhood counterpart of [`Self::nearest_neighborhood`].
    pub fn nearest_in_neighborhood(&self, x: usize, k: usize) -> Result<Vec<usize>, SpaceError> {
        if k == 0 {
            self.check_index(x)?;
            return Ok(Vec::new());
        }
        self.k_neighborhood(RankVariant::Check, Direction::In, x, k - 1)
    }

    #[inline]
    fn directed_rank(&self, variant: RankVariant, direction: Direction, x: usize, y: usize) -> usize {
        match direction {
            Direction::Out => self.rank_row(variant, x)[y] as usize,
            Direction::In => self.rank_row(variant, y)[x] as usize,
        }
    }

    /// `(|N_k^±(x, Y)|)` for `k = 0..N` (`Check`) or `k = 1..=N` (`Hat`),
    /// where `Y` is `restrict` or all of `X`.
    pub fn rank_sequence(
        &self,
        variant: RankVariant,
        direction: Direction,
        x: usize,
        restrict: Option<&[usize]>,
    ) -> Result<RankSequence, SpaceError> {
        self.check_index(x)?;
        let n = self.n;
        let mut hist = vec![0usize; n + 1];
        let mut tally = |y: usize| -> Result<(), SpaceError> {
            self.check_index(y)?;
            hist[self.directed_rank(variant, direction, x, y)] += 1;
            Ok(())
        };
        match restrict {
            Some(ys) => ys.iter().try_for_each(|&y| tally(y))?,
            None => (0..n).try_for_each(&mut tally)?,
        }
        let start = variant.first_bound();
        let mut acc: usize = hist[..start].iter().sum();
        let values = (start..start + n)
            .map(|k| {
                acc += hist[k];
                acc
            })
            .collect();
        Ok(RankSequence(values))
    }

    /// Copy of the space restricted to `indices`, in the given order.
    pub fn subspace(&self, indices: &[usize]) -> Result<Self, SpaceError> {
        if indices.is_empty() {
            return Err(SpaceError::EmptyInput);
        }
        for &i in indices {
            self.check_index(i)?;
        }
        let m = indices.len();
        let mut values = Vec::with_capacity(m * m);
        for &i in indices {
            let row = self.row(i);
            values.extend(indices.iter().map(|&j| row[j]));
        }
        Ok(Self::new_unchecked(m, values, self.symmetric, self.tolerance))
    }

    /// The out-rank relation as a dissimilarity space of its own.
    pub fn rank_space(&self, variant: RankVariant) -> Self {
        let n = self.n;
        let mut values = Vec::with_capacity(n * n);
        for x in 0..n {
            values.extend(self.rank_row(variant, x).iter().map(|&q| q as f64));
        }
        let symmetric = (0..n).all(|i| (i + 1..n).all(|j| values[i * n + j] == values[j * n + i]));
        // q(x,y) = 0 iff y is co-located with x under Check; Hat shifts every
        // rank up by at least one, so co-location never holds there.
        Self::new_unchecked(n, values, symmetric, 0.0)
    }
}

/// A cell of a mixed-type record for Gower dissimilarity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GowerValue {
    Num(f64),
    Cat(String),
}

fn check_coordinates<P: AsRef<[f64]>>(points: &[P]) -> Result<usize, SpaceError> {
    let first = points.first().ok_or(SpaceError::EmptyInput)?;
    let dim = first.as_ref().len();
    for (row, p) in points.iter().enumerate() {
        let p = p.as_ref();
        if p.len() != dim {
            return Err(SpaceError::RaggedRows {
                row,
                len: p.len(),
                expected: dim,
            });
        }
        if let Some(col) = p.iter().position(|v| !v.is_finite()) {
            return Err(SpaceError::NonFinite { row, col });
        }
    }
    Ok(dim)
}

/// Ranks of every entry of `row` under the tie rule.
pub(crate) fn compute_rank_row(row: &[f64], variant: RankVariant) -> Vec<u32> {
    let n = row.len();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_unstable_by(|&a, &b| row[a as usize].total_cmp(&row[b as usize]));
    let mut ranks = vec![0u32; n];
    let mut start = 0;
    while start < n {
        let v = row[order[start] as usize];
        let mut end = start + 1;
        while end < n && row[order[end] as usize] == v {
            end += 1;
        }
        let rank = match variant {
            RankVariant::Check => start,
            RankVariant::Hat => end,
        } as u32;
        for &i in &order[start..end] {
            ranks[i as usize] = rank;
        }
        start = end;
    }
    ranks
}

/// Ranks of the entries of `row` whose rank is strictly below `bound`.
///
/// Uses a partial selection, so the cost is linear in `row.len()` plus
/// `bound · log(bound)` for the selected prefix.
pub(crate) fn ranks_below(row: &[f64], variant: RankVariant, bound: usize) -> Vec<(usize, u32)> {
    let n = row.len();
    if bound == 0 {
        return Vec::new();
    }
    if bound >= n {
        return compute_rank_row(row, variant)
            .into_iter()
            .enumerate()
            .filter(|&(_, q)| (q as usize) < bound)
            .collect();
    }
    let mut order: Vec<u32> = (0..n as u32).collect();
    let cmp = |a: &u32, b: &u32| row[*a as usize].total_cmp(&row[*b as usize]);
    order.select_nth_unstable_by(bound - 1, cmp);
    let pivot = row[order[bound - 1] as usize];
    let mut chosen: Vec<u32> = match variant {
        // q̌ < bound  ⇔  d ≤ s_(bound−1)
        RankVariant::Check => {
            let mut c = order[..bound].to_vec();
            c.extend(order[bound..].iter().copied().filter(|&i| row[i as usize] == pivot));
            c
        }
        // q̂ < bound  ⇔  d < s_(bound−1)
        RankVariant::Hat => order[..bound]
            .iter()
            .copied()
            .filter(|&i| row[i as usize] < pivot)
            .collect(),
    };
    chosen.sort_unstable_by(cmp);
    let m = chosen.len();
    let mut out = Vec::with_capacity(m);
    let mut start = 0;
    while start < m {
        let v = row[chosen[start] as usize];
        let mut end = start + 1;
        while end < m && row[chosen[end] as usize] == v {
            end += 1;
        }
        let rank = match variant {
            RankVariant::Check => start,
            RankVariant::Hat => end,
        } as u32;
        out.extend(chosen[start..end].iter().map(|&i| (i as usize, rank)));
        start = end;
    }
    out
}
