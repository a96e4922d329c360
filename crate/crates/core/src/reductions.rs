//! PARTITION and 3-PARTITION as executable reductions.
//!
//! A PARTITION instance becomes a two-group instance with sets `(a_t, 0)`;
//! it is a yes-instance exactly when the optimum is half the total.
//! A 3-PARTITION instance with `m` triples and bound `U` becomes an
//! `m`-group instance with sets `(a_t, 0, ..., 0)`; it is a yes-instance
//! exactly when the optimum is `U`.

use std::fmt;

use thiserror::Error;

use crate::exact::{solve_brute_force, solve_dp_b2, ExactError};
use crate::model::{Assignment, Instance, ModelError, Weight, WEIGHT_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("invalid instance: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Ordered multiset of positive sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionInstance {
    sizes: Vec<Weight>,
}

impl PartitionInstance {
    pub fn new(sizes: Vec<Weight>) -> Result<Self, ReductionError> {
        if sizes.is_empty() {
            return Err(ReductionError::InvariantViolation(
                "PARTITION needs at least one element".into(),
            ));
        }
        if let Some((i, s)) = sizes.iter().enumerate().find(|(_, &s)| s <= 0) {
            return Err(ReductionError::InvariantViolation(format!(
                "size {s} of element {} is not positive",
                i + 1
            )));
        }
        check_budget(&sizes, 2)?;
        Ok(Self { sizes })
    }

    pub fn sizes(&self) -> &[Weight] {
        &self.sizes
    }

    pub fn total(&self) -> Weight {
        self.sizes.iter().sum()
    }

    /// True when `first` and `second` split the elements into two halves of
    /// equal sum.
    pub fn is_witness(&self, first: &[usize], second: &[usize]) -> bool {
        let mut seen = vec![false; self.sizes.len()];
        for &i in first.iter().chain(second) {
            if i >= seen.len() || std::mem::replace(&mut seen[i], true) {
                return false;
            }
        }
        let sum = |idx: &[usize]| idx.iter().map(|&i| self.sizes[i]).sum::<Weight>();
        seen.iter().all(|&s| s) && sum(first) == sum(second)
    }
}

/// `3m` sizes, each strictly between `U/4` and `U/2`, summing to `m * U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreePartitionInstance {
    sizes: Vec<Weight>,
    bound: Weight,
}

impl ThreePartitionInstance {
    pub fn new(sizes: Vec<Weight>, bound: Weight) -> Result<Self, ReductionError> {
        let fail = |msg: String| Err(ReductionError::InvariantViolation(msg));
        if bound <= 0 {
            return fail(format!("bound U = {bound} is not positive"));
        }
        if sizes.is_empty() || !sizes.len().is_multiple_of(3) {
            return fail(format!(
                "element count {} is not a positive multiple of 3",
                sizes.len()
            ));
        }
        for (i, &s) in sizes.iter().enumerate() {
            let (s4, s2, u) = (4 * s as i128, 2 * s as i128, bound as i128);
            if s4 <= u || s2 >= u {
                return fail(format!(
                    "size {s} of element {} is not strictly between U/4 and U/2 (U = {bound})",
                    i + 1
                ));
            }
        }
        let m = (sizes.len() / 3) as i128;
        let total: i128 = sizes.iter().map(|&s| s as i128).sum();
        if total != m * bound as i128 {
            return fail(format!(
                "sizes sum to {total}, expected m*U = {}",
                m * bound as i128
            ));
        }
        check_budget(&sizes, sizes.len() / 3)?;
        Ok(Self { sizes, bound })
    }

    pub fn sizes(&self) -> &[Weight] {
        &self.sizes
    }

    pub fn bound(&self) -> Weight {
        self.bound
    }

    /// Number of triples, `m`.
    pub fn triples(&self) -> usize {
        self.sizes.len() / 3
    }

    pub fn is_witness(&self, triples: &[Vec<usize>]) -> bool {
        let mut seen = vec![false; self.sizes.len()];
        triples.len() == self.triples()
            && triples.iter().all(|triple| {
                triple.len() == 3
                    && triple.iter().map(|&i| self.sizes[i]).sum::<Weight>() == self.bound
                    && triple
                        .iter()
                        .all(|&i| i < seen.len() && !std::mem::replace(&mut seen[i], true))
            })
    }
}

/// The reduced instance must respect the model's weight budget.
fn check_budget(sizes: &[Weight], groups: usize) -> Result<(), ReductionError> {
    let max = sizes.iter().copied().max().unwrap_or(0).max(0) as u128;
    let product = sizes.len() as u128 * groups as u128 * max;
    if product >= WEIGHT_BUDGET {
        return Err(ModelError::WeightBudgetExceeded { product }.into());
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    /// The search hit its node cap before settling the question.
    Unknown,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Unknown => "unknown",
        })
    }
}

/// Element indices (0-based) of the source instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Partition {
        first: Vec<usize>,
        second: Vec<usize>,
    },
    ThreePartition {
        triples: Vec<Vec<usize>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionOutcome {
    pub answer: Answer,
    pub witness: Option<Witness>,
    /// Objective of the reduced instance that settled the answer; `None`
    /// when no solve was needed.
    pub certificate_objective: Option<Weight>,
}

pub fn reduce_partition(p: &PartitionInstance) -> Instance {
    Instance::new(p.sizes.iter().map(|&s| vec![s, 0]).collect())
        .expect("positive sizes give a valid instance")
}

pub fn decide_partition(p: &PartitionInstance) -> Result<DecisionOutcome, ReductionError> {
    let total = p.total();
    if total % 2 != 0 {
        return Ok(DecisionOutcome {
            answer: Answer::No,
            witness: None,
            certificate_objective: None,
        });
    }
    let instance = reduce_partition(p);
    let result = solve_dp_b2(&instance)?;
    if result.objective != total / 2 {
        return Ok(DecisionOutcome {
            answer: Answer::No,
            witness: None,
            certificate_objective: Some(result.objective),
        });
    }
    let (first, second) = (0..p.sizes.len()).partition(|&t| result.assignment.group_of(t, 0) == 0);
    Ok(DecisionOutcome {
        answer: Answer::Yes,
        witness: Some(Witness::Partition { first, second }),
        certificate_objective: Some(result.objective),
    })
}

pub fn reduce_3partition(q: &ThreePartitionInstance) -> Instance {
    let groups = q.triples();
    Instance::new(
        q.sizes
            .iter()
            .map(|&s| {
                let mut row = vec![0; groups];
                row[0] = s;
                row
            })
            .collect(),
    )
    .expect("validated sizes give a valid instance")
}

pub fn decide_3partition(
    q: &ThreePartitionInstance,
    node_cap: u64,
) -> Result<DecisionOutcome, ReductionError> {
    let instance = reduce_3partition(q);
    let result = match solve_brute_force(&instance, node_cap) {
        Ok(result) => result,
        Err(ExactError::NodeCapExceeded { incumbent, .. }) if incumbent.objective != q.bound => {
            return Ok(DecisionOutcome {
                answer: Answer::Unknown,
                witness: None,
                certificate_objective: None,
            })
        }
        Err(ExactError::NodeCapExceeded { incumbent, .. }) => *incumbent,
        Err(e) => return Err(e.into()),
    };
    if result.objective != q.bound {
        return Ok(DecisionOutcome {
            answer: Answer::No,
            witness: None,
            certificate_objective: Some(result.objective),
        });
    }
    Ok(DecisionOutcome {
        answer: Answer::Yes,
        witness: Some(Witness::ThreePartition {
            triples: triples_from(&result.assignment, q.triples()),
        }),
        certificate_objective: Some(result.objective),
    })
}

fn triples_from(assignment: &Assignment, groups: usize) -> Vec<Vec<usize>> {
    let mut triples = vec![Vec::new(); groups];
    for t in 0..assignment.sets() {
        triples[assignment.group_of(t, 0)].push(t);
    }
    triples
}
