//! Instances, assignments and objective evaluation.
//!
//! An instance has `T` sets of `B` items each. Every group receives exactly
//! one item from every set; the objective is the heaviest group load.
//! Indices are 0-based here and 1-based in every text format.

use std::fmt;

use thiserror::Error;

/// Item weights and group loads.
pub type Weight = i64;

/// Upper limit (exclusive) for `T * B * max(w)`, so that any sum of weights
/// fits in a signed 64-bit accumulator with room to spare.
pub const WEIGHT_BUDGET: u128 = 1 << 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("instance has no sets")]
    NoSets,
    #[error("instance has no groups")]
    NoGroups,
    #[error("dimension mismatch at row {}: expected {expected} entries, found {found}", .row + 1)]
    DimensionMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("negative weight {value} at set {}, item {}", .row + 1, .column + 1)]
    NegativeWeight {
        row: usize,
        column: usize,
        value: i64,
    },
    #[error("total weight budget exceeded: T*B*max(w) = {product} >= 2^62")]
    WeightBudgetExceeded { product: u128 },
    #[error("set {} is not a permutation: group {} receives {count} items", .set + 1, .group + 1)]
    NotAPermutation {
        set: usize,
        group: usize,
        count: usize,
    },
}

/// One entry of a validation report. Coordinates are 0-based; `column` is
/// `None` for row-level problems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub row: Option<usize>,
    pub column: Option<usize>,
    pub error: ModelError,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.row, self.column) {
            (Some(r), Some(c)) => write!(f, "({}, {}): {}", r + 1, c + 1, self.error),
            (Some(r), None) => write!(f, "({}, -): {}", r + 1, self.error),
            _ => write!(f, "(-, -): {}", self.error),
        }
    }
}

/// Checks a raw weight matrix and stops at the first problem.
pub fn validate(rows: &[Vec<i64>]) -> Result<(), ModelError> {
    match validate_all(rows).into_iter().next() {
        Some(v) => Err(v.error),
        None => Ok(()),
    }
}

/// Checks a raw weight matrix and reports every problem found.
pub fn validate_all(rows: &[Vec<i64>]) -> Vec<Violation> {
    let mut report = Vec::new();
    let Some(first) = rows.first() else {
        report.push(Violation {
            row: None,
            column: None,
            error: ModelError::NoSets,
        });
        return report;
    };
    let groups = first.len();
    if groups == 0 {
        report.push(Violation {
            row: Some(0),
            column: None,
            error: ModelError::NoGroups,
        });
    }
    let mut max_weight: i64 = 0;
    for (t, row) in rows.iter().enumerate() {
        if row.len() != groups {
            report.push(Violation {
                row: Some(t),
                column: None,
                error: ModelError::DimensionMismatch {
                    row: t,
                    expected: groups,
                    found: row.len(),
                },
            });
        }
        for (b, &w) in row.iter().enumerate() {
            if w < 0 {
                report.push(Violation {
                    row: Some(t),
                    column: Some(b),
                    error: ModelError::NegativeWeight {
                        row: t,
                        column: b,
                        value: w,
                    },
                });
            }
            max_weight = max_weight.max(w);
        }
    }
    let product = rows.len() as u128 * groups as u128 * max_weight.max(0) as u128;
    if product >= WEIGHT_BUDGET {
        report.push(Violation {
            row: None,
            column: None,
            error: ModelError::WeightBudgetExceeded { product },
        });
    }
    report
}

/// A validated `T x B` matrix of non-negative integer weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    sets: usize,
    groups: usize,
    weights: Vec<Weight>,
}

impl Instance {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, ModelError> {
        validate(&rows)?;
        let sets = rows.len();
        let groups = rows[0].len();
        let weights = rows.into_iter().flatten().collect();
        Ok(Self {
            sets,
            groups,
            weights,
        })
    }

    /// Number of sets, `T`.
    pub fn sets(&self) -> usize {
        self.sets
    }

    /// Number of groups (and items per set), `B`.
    pub fn groups(&self) -> usize {
        self.groups
    }

    pub fn weight(&self, set: usize, item: usize) -> Weight {
        self.weights[set * self.groups + item]
    }

    pub fn row(&self, set: usize) -> &[Weight] {
        &self.weights[set * self.groups..(set + 1) * self.groups]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Weight]> + '_ {
        self.weights.chunks_exact(self.groups)
    }

    /// `W`, the sum of all weights.
    pub fn total_weight(&self) -> Weight {
        self.weights.iter().sum()
    }

    pub fn ranges(&self) -> Ranges {
        let per_set: Vec<SetRange> = self
            .rows()
            .enumerate()
            .map(|(set, row)| {
                let hi = row.iter().max().copied().unwrap_or(0);
                let lo = row.iter().min().copied().unwrap_or(0);
                SetRange {
                    set,
                    range: hi - lo,
                }
            })
            .collect();
        let max = per_set.iter().map(|r| r.range).max().unwrap_or(0);
        Ranges { per_set, max }
    }

    /// `ceil(W / B)`. With integral weights no assignment can do better.
    pub fn lower_bound(&self) -> Weight {
        let b = self.groups as Weight;
        (self.total_weight() + b - 1) / b
    }
}

/// Spread of one set, `max_b w[t][b] - min_b w[t][b]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SetRange {
    pub set: usize,
    pub range: Weight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranges {
    pub per_set: Vec<SetRange>,
    /// `R`, the largest range over all sets.
    pub max: Weight,
}

impl Ranges {
    pub fn values(&self) -> Vec<Weight> {
        self.per_set.iter().map(|r| r.range).collect()
    }
}

/// For every set, the group that receives each item.
///
/// Row `t` maps item `b` to group `rows[t][b]`; each row is a permutation of
/// `0..B`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    rows: Vec<Vec<usize>>,
}

impl Assignment {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self, ModelError> {
        let groups = rows.first().map_or(0, Vec::len);
        for (t, row) in rows.iter().enumerate() {
            if row.len() != groups {
                return Err(ModelError::DimensionMismatch {
                    row: t,
                    expected: groups,
                    found: row.len(),
                });
            }
            check_permutation(t, row)?;
        }
        Ok(Self { rows })
    }

    /// Item `b` of every set goes to group `b`.
    pub fn identity(sets: usize, groups: usize) -> Self {
        Self {
            rows: vec![(0..groups).collect(); sets],
        }
    }

    pub fn sets(&self) -> usize {
        self.rows.len()
    }

    pub fn groups(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn group_of(&self, set: usize, item: usize) -> usize {
        self.rows[set][item]
    }

    pub fn row(&self, set: usize) -> &[usize] {
        &self.rows[set]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub(crate) fn swap_items(&mut self, set: usize, a: usize, b: usize) {
        self.rows[set].swap(a, b);
    }

    /// Relabels groups: whatever went to group `g` now goes to `sigma[g]`.
    pub fn relabel(&self, sigma: &[usize]) -> Result<Self, ModelError> {
        check_permutation(0, sigma)?;
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|&g| sigma[g]).collect())
            .collect();
        Ok(Self { rows })
    }
}

fn check_permutation(set: usize, row: &[usize]) -> Result<(), ModelError> {
    let mut hits = vec![0usize; row.len()];
    for &g in row {
        if g >= row.len() {
            return Err(ModelError::NotAPermutation {
                set,
                group: g,
                count: 1,
            });
        }
        hits[g] += 1;
    }
    if let Some((group, &count)) = hits.iter().enumerate().find(|(_, &c)| c != 1) {
        return Err(ModelError::NotAPermutation { set, group, count });
    }
    Ok(())
}

/// Accumulated group weights `W_b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadVector {
    pub loads: Vec<Weight>,
}

impl LoadVector {
    pub fn zeros(groups: usize) -> Self {
        Self {
            loads: vec![0; groups],
        }
    }

    /// Heaviest group load, the quantity being minimized.
    pub fn objective(&self) -> Weight {
        self.loads.iter().copied().max().unwrap_or(0)
    }

    pub fn min_load(&self) -> Weight {
        self.loads.iter().copied().min().unwrap_or(0)
    }

    pub fn total(&self) -> Weight {
        self.loads.iter().sum()
    }

    /// `max_b W_b - min_b W_b`.
    pub fn max_pairwise_diff(&self) -> Weight {
        self.objective() - self.min_load()
    }
}

/// Group loads produced by `assignment` on `instance`.
pub fn evaluate(instance: &Instance, assignment: &Assignment) -> Result<LoadVector, ModelError> {
    if assignment.sets() != instance.sets() {
        return Err(ModelError::DimensionMismatch {
            row: assignment.sets().min(instance.sets()),
            expected: instance.sets(),
            found: assignment.sets(),
        });
    }
    let mut loads = LoadVector::zeros(instance.groups());
    for (t, (weights, groups)) in instance.rows().zip(assignment.rows()).enumerate() {
        if groups.len() != weights.len() {
            return Err(ModelError::DimensionMismatch {
                row: t,
                expected: weights.len(),
                found: groups.len(),
            });
        }
        check_permutation(t, groups)?;
        for (&w, &g) in weights.iter().zip(groups) {
            loads.loads[g] += w;
        }
    }
    Ok(loads)
}
