//! Exact solvers.
//!
//! [`solve_dp_b2`] is the pseudo-polynomial subset-sum style dynamic program
//! for two groups. [`solve_brute_force`] is a depth-first search over per-set
//! permutations, used as ground truth on small instances of any shape.

use std::fmt;

use thiserror::Error;

use crate::model::{evaluate, Assignment, Instance, ModelError, Weight};

/// Default cap on the number of DP states, `W + 1`.
pub const DEFAULT_STATE_BUDGET: u64 = 1 << 31;

/// Default cap on search nodes for [`solve_brute_force`].
pub const DEFAULT_NODE_CAP: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("the two-group DP needs B = 2, instance has B = {groups}")]
    WrongGroupCount { groups: usize },
    #[error("DP table needs {states} states, budget is {budget}")]
    TableBudgetExceeded { states: u64, budget: u64 },
    #[error("node cap of {cap} exceeded; best objective found is {}", .incumbent.objective)]
    NodeCapExceeded {
        cap: u64,
        incumbent: Box<ExactResult>,
    },
    #[error("reconstructed assignment has objective {found}, expected {expected}")]
    ReconstructionMismatch { expected: Weight, found: Weight },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Proof {
    DpB2,
    BruteForce,
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Proof::DpB2 => "dp-b2",
            Proof::BruteForce => "brute-force",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub objective: Weight,
    pub assignment: Assignment,
    pub proof: Proof,
    /// DP states touched (words processed times 64) or search nodes expanded.
    pub work: u64,
    /// False only for an incumbent returned after the node cap was hit.
    pub proven: bool,
}

/// Packed bit set over `0..len`.
#[derive(Clone, PartialEq, Eq)]
pub struct Bitset {
    len: usize,
    words: Vec<u64>,
}

impl fmt::Debug for Bitset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter_ones()).finish()
    }
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn insert(&mut self, idx: usize) {
        assert!(idx < self.len, "bit {idx} out of range {}", self.len);
        self.words[idx / 64] |= 1 << (idx % 64);
    }

    pub fn contains(&self, idx: usize) -> bool {
        idx < self.len && self.words[idx / 64] & (1 << (idx % 64)) != 0
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * 64 + bit)
            })
        })
    }

    /// `self |= src << shift`, dropping bits that fall off the end.
    pub fn or_shifted(&mut self, src: &Bitset, shift: usize) {
        debug_assert_eq!(self.len, src.len);
        let n = self.words.len();
        let word_shift = shift / 64;
        let bit_shift = shift % 64;
        for i in (word_shift..n).rev() {
            let j = i - word_shift;
            let mut v = src.words[j] << bit_shift;
            if bit_shift > 0 && j > 0 {
                v |= src.words[j - 1] >> (64 - bit_shift);
            }
            self.words[i] |= v;
        }
        self.trim();
    }

    fn trim(&mut self) {
        let tail = self.len % 64;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }

    fn word_count(&self) -> usize {
        self.words.len()
    }
}

/// Whether the DP keeps every stage for backtracking or only the last one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DpMemory {
    #[default]
    AllStages,
    /// Keeps one row and recomputes earlier rows while backtracking;
    /// `O(T^2 W / 64)` time instead of `O(T W / 64)`.
    SingleRow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpOptions {
    pub state_budget: u64,
    pub memory: DpMemory,
}

impl Default for DpOptions {
    fn default() -> Self {
        Self {
            state_budget: DEFAULT_STATE_BUDGET,
            memory: DpMemory::AllStages,
        }
    }
}

/// Reachable weights of group 1 after each stage.
///
/// Row `t` holds every `s` such that some choice of one item from each of
/// the sets `0..=t` sums to `s`. Row 0 is `{w[0][0], w[0][1]}` and row `t` is
/// row `t - 1` shifted by `w[t][0]` united with row `t - 1` shifted by
/// `w[t][1]`.
#[derive(Debug, Clone)]
pub struct FeasibilityTable {
    rows: Vec<Bitset>,
    work: u64,
}

impl FeasibilityTable {
    pub fn build(instance: &Instance, budget: u64) -> Result<Self, ExactError> {
        let width = state_width(instance, budget)?;
        let mut rows = Vec::with_capacity(instance.sets());
        let mut work = 0;
        let mut current = first_row(instance, width);
        for t in 1..instance.sets() {
            let next = advance(&current, instance.row(t));
            work += 2 * current.word_count() as u64 * 64;
            rows.push(std::mem::replace(&mut current, next));
        }
        rows.push(current);
        Ok(Self { rows, work })
    }

    pub fn stages(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, stage: usize) -> &Bitset {
        &self.rows[stage]
    }

    pub fn is_feasible(&self, stage: usize, state: Weight) -> bool {
        state >= 0 && self.rows[stage].contains(state as usize)
    }

    pub fn final_states(&self) -> Vec<Weight> {
        self.rows
            .last()
            .map(|r| r.iter_ones().map(|s| s as Weight).collect())
            .unwrap_or_default()
    }
}

fn state_width(instance: &Instance, budget: u64) -> Result<usize, ExactError> {
    if instance.groups() != 2 {
        return Err(ExactError::WrongGroupCount {
            groups: instance.groups(),
        });
    }
    let states = instance.total_weight() as u64 + 1;
    if states > budget || usize::try_from(states).is_err() {
        return Err(ExactError::TableBudgetExceeded { states, budget });
    }
    Ok(states as usize)
}

fn first_row(instance: &Instance, width: usize) -> Bitset {
    let mut row = Bitset::new(width);
    for &w in instance.row(0) {
        row.insert(w as usize);
    }
    row
}

fn advance(prev: &Bitset, weights: &[Weight]) -> Bitset {
    let mut next = Bitset::new(prev.len());
    next.or_shifted(prev, weights[0] as usize);
    next.or_shifted(prev, weights[1] as usize);
    next
}

/// Final state with the smallest `max(s, W - s)`; ties go to the smaller `s`.
fn best_state(states: impl Iterator<Item = usize>, total: Weight) -> Option<Weight> {
    states
        .map(|s| s as Weight)
        .min_by_key(|&s| (s.max(total - s), s))
}

/// Optimal two-group solution through the feasibility DP.
pub fn solve_dp_b2(instance: &Instance) -> Result<ExactResult, ExactError> {
    solve_dp_b2_with(instance, &DpOptions::default())
}

pub fn solve_dp_b2_with(
    instance: &Instance,
    options: &DpOptions,
) -> Result<ExactResult, ExactError> {
    let total = instance.total_weight();
    let (items_in_group_one, state, work) = match options.memory {
        DpMemory::AllStages => {
            let table = FeasibilityTable::build(instance, options.state_budget)?;
            let state = best_state(table.row(table.stages() - 1).iter_ones(), total)
                .expect("final stage always has a reachable state");
            let picks = backtrack(instance, state, |t| table.row(t).clone());
            (picks, state, table.work)
        }
        DpMemory::SingleRow => {
            let width = state_width(instance, options.state_budget)?;
            let mut work = 0u64;
            let row_at = |stage: usize, work: &mut u64| {
                let mut row = first_row(instance, width);
                for t in 1..=stage {
                    row = advance(&row, instance.row(t));
                    *work += 2 * row.word_count() as u64 * 64;
                }
                row
            };
            let last = row_at(instance.sets() - 1, &mut work);
            let state = best_state(last.iter_ones(), total)
                .expect("final stage always has a reachable state");
            let picks = backtrack(instance, state, |t| row_at(t, &mut work));
            (picks, state, work)
        }
    };

    let rows = items_in_group_one
        .iter()
        .map(|&item| if item == 0 { vec![0, 1] } else { vec![1, 0] })
        .collect();
    let assignment = Assignment::new(rows)?;
    let objective = state.max(total - state);
    let found = evaluate(instance, &assignment)?.objective();
    if found != objective {
        return Err(ExactError::ReconstructionMismatch {
            expected: objective,
            found,
        });
    }
    Ok(ExactResult {
        objective,
        assignment,
        proof: Proof::DpB2,
        work,
        proven: true,
    })
}

/// Walks the stages backwards from `state`, returning for every set which
/// item (0 or 1) was routed to group 1.
fn backtrack(
    instance: &Instance,
    mut state: Weight,
    mut row_at: impl FnMut(usize) -> Bitset,
) -> Vec<usize> {
    let sets = instance.sets();
    let mut picks = vec![0; sets];
    for t in (1..sets).rev() {
        let prev = row_at(t - 1);
        let w = instance.row(t);
        let item = if state >= w[0] && prev.contains((state - w[0]) as usize) {
            0
        } else {
            1
        };
        picks[t] = item;
        state -= w[item];
        debug_assert!(state >= 0 && prev.contains(state as usize));
    }
    let w = instance.row(0);
    picks[0] = if w[0] == state { 0 } else { 1 };
    debug_assert_eq!(w[picks[0]], state);
    picks
}

/// Exhaustive search with the first processed set pinned to the identity
/// permutation.
pub fn solve_brute_force(instance: &Instance, node_cap: u64) -> Result<ExactResult, ExactError> {
    let groups = instance.groups();
    let sets = instance.sets();
    let ranges = instance.ranges();

    // Wide sets first, heavy items first: both tighten pruning early.
    let mut set_order: Vec<usize> = (0..sets).collect();
    set_order.sort_by_key(|&t| std::cmp::Reverse(ranges.per_set[t].range));
    let item_order: Vec<Vec<usize>> = (0..sets)
        .map(|t| {
            let mut items: Vec<usize> = (0..groups).collect();
            items.sort_by_key(|&b| std::cmp::Reverse(instance.weight(t, b)));
            items
        })
        .collect();

    let incumbent = Assignment::identity(sets, groups);
    let best = evaluate(instance, &incumbent)?.objective();
    let mut search = Search {
        instance,
        set_order,
        item_order,
        loads: vec![0; groups],
        rows: incumbent.rows().to_vec(),
        used: vec![vec![false; groups]; sets],
        best,
        best_rows: incumbent.rows().to_vec(),
        lower_bound: instance.lower_bound(),
        nodes: 0,
        cap: node_cap,
        aborted: false,
    };
    let pinned = search.set_order[0];
    for b in 0..groups {
        search.loads[b] += instance.weight(pinned, b);
    }
    if sets > 1 && search.best > search.lower_bound {
        search.dfs(1, 0);
    }

    let result = ExactResult {
        objective: search.best,
        assignment: Assignment::new(search.best_rows)?,
        proof: Proof::BruteForce,
        work: search.nodes,
        proven: !search.aborted,
    };
    if search.aborted {
        return Err(ExactError::NodeCapExceeded {
            cap: node_cap,
            incumbent: Box::new(result),
        });
    }
    Ok(result)
}

struct Search<'a> {
    instance: &'a Instance,
    set_order: Vec<usize>,
    item_order: Vec<Vec<usize>>,
    loads: Vec<Weight>,
    rows: Vec<Vec<usize>>,
    used: Vec<Vec<bool>>,
    best: Weight,
    best_rows: Vec<Vec<usize>>,
    lower_bound: Weight,
    nodes: u64,
    cap: u64,
    aborted: bool,
}

impl Search<'_> {
    /// Places item `pos` (in weight order) of the `level`-th processed set.
    /// Returns true once the search should stop.
    fn dfs(&mut self, level: usize, pos: usize) -> bool {
        let groups = self.instance.groups();
        if pos == groups {
            if level + 1 == self.set_order.len() {
                let objective = self.loads.iter().copied().max().unwrap_or(0);
                if objective < self.best {
                    self.best = objective;
                    self.best_rows.clone_from(&self.rows);
                }
                return self.best <= self.lower_bound;
            }
            return self.dfs(level + 1, 0);
        }

        let set = self.set_order[level];
        let item = self.item_order[set][pos];
        let w = self.instance.weight(set, item);
        // Equal items of one set are interchangeable: place them in
        // increasing group order only.
        let first_group = match pos.checked_sub(1).map(|p| self.item_order[set][p]) {
            Some(prev) if self.instance.weight(set, prev) == w => self.rows[set][prev] + 1,
            _ => 0,
        };
        for g in first_group..groups {
            if self.used[set][g] || self.loads[g] + w >= self.best {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.cap {
                self.aborted = true;
                return true;
            }
            self.used[set][g] = true;
            self.loads[g] += w;
            self.rows[set][item] = g;
            let stop = self.dfs(level, pos + 1);
            self.loads[g] -= w;
            self.used[set][g] = false;
            if stop {
                return true;
            }
        }
        false
    }
}
