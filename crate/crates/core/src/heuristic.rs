//! Greedy construction with an additive guarantee of `R`, plus a swap local
//! search.
//!
//! For each set in turn the lightest item goes to the heaviest group, the
//! second lightest to the second heaviest, and so on. After every stage the
//! spread between any two groups is at most `max(previous spread, r_t)`, so
//! the final spread, and therefore the distance from `ceil(W/B)`, is at most
//! `R`.

use std::cell::Cell;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{evaluate, Assignment, Instance, LoadVector, ModelError, Weight};

/// Order in which sets are fed to the greedy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SetOrder {
    /// Sets in file order.
    Input,
    /// Widest range first.
    #[default]
    NonIncreasingRange,
    /// Narrowest range first.
    NonDecreasingRange,
}

impl SetOrder {
    pub const ALL: [SetOrder; 3] = [
        SetOrder::Input,
        SetOrder::NonIncreasingRange,
        SetOrder::NonDecreasingRange,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SetOrder::Input => "input",
            SetOrder::NonIncreasingRange => "dec-range",
            SetOrder::NonDecreasingRange => "inc-range",
        }
    }

    /// Processing order of set indices. Ties keep input order.
    pub fn arrange(self, instance: &Instance) -> Vec<usize> {
        let ranges = instance.ranges();
        let mut order: Vec<usize> = (0..instance.sets()).collect();
        match self {
            SetOrder::Input => {}
            SetOrder::NonIncreasingRange => {
                order.sort_by_key(|&t| std::cmp::Reverse(ranges.per_set[t].range))
            }
            SetOrder::NonDecreasingRange => order.sort_by_key(|&t| ranges.per_set[t].range),
        }
        order
    }
}

impl fmt::Display for SetOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown set order `{0}` (expected input, dec-range or inc-range)")]
pub struct UnknownSetOrder(pub String);

impl FromStr for SetOrder {
    type Err = UnknownSetOrder;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SetOrder::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| UnknownSetOrder(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeuristicConfig {
    pub set_order: SetOrder,
    /// Follow the greedy with [`local_search_swap`].
    pub local_search: bool,
    pub ls_iteration_cap: usize,
    /// Keep a load snapshot after every stage.
    pub record_trace: bool,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        Self {
            set_order: SetOrder::default(),
            local_search: false,
            ls_iteration_cap: 10_000,
            record_trace: false,
        }
    }
}

/// Loads right after a set was placed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageSnapshot {
    pub set: usize,
    pub loads: Vec<Weight>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalSearchStats {
    pub moves: usize,
    /// The search stopped at the cap while an improving move remained.
    pub cap_reached: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeuristicResult {
    pub objective: Weight,
    pub assignment: Assignment,
    pub loads: LoadVector,
    /// `ceil(W/B)`.
    pub lb: Weight,
    pub abs_gap: Weight,
    pub max_pairwise_diff: Weight,
    /// `R` of the instance.
    pub max_range: Weight,
    pub trace: Option<Vec<StageSnapshot>>,
    /// Comparisons made while sorting items and groups.
    pub work: u64,
    pub local_search: Option<LocalSearchStats>,
}

impl HeuristicResult {
    fn from_loads(
        instance: &Instance,
        assignment: Assignment,
        loads: LoadVector,
        trace: Option<Vec<StageSnapshot>>,
        work: u64,
    ) -> Self {
        let lb = instance.lower_bound();
        let objective = loads.objective();
        Self {
            objective,
            assignment,
            lb,
            abs_gap: objective - lb,
            max_pairwise_diff: loads.max_pairwise_diff(),
            max_range: instance.ranges().max,
            loads,
            trace,
            work,
            local_search: None,
        }
    }
}

/// Runs the greedy, and the swap search afterwards when configured.
pub fn algorithm1(instance: &Instance, config: &HeuristicConfig) -> HeuristicResult {
    let groups = instance.groups();
    let order = config.set_order.arrange(instance);
    let comparisons = Cell::new(0u64);

    let mut loads = vec![0 as Weight; groups];
    let mut rows = vec![vec![0usize; groups]; instance.sets()];
    let mut trace = config.record_trace.then(Vec::new);
    let mut items: Vec<usize> = Vec::with_capacity(groups);
    let mut targets: Vec<usize> = Vec::with_capacity(groups);

    for &t in &order {
        let weights = instance.row(t);
        items.clear();
        items.extend(0..groups);
        items.sort_by(|&a, &b| {
            comparisons.set(comparisons.get() + 1);
            weights[a].cmp(&weights[b])
        });
        targets.clear();
        targets.extend(0..groups);
        targets.sort_by(|&a, &b| {
            comparisons.set(comparisons.get() + 1);
            loads[b].cmp(&loads[a])
        });
        for (&item, &group) in items.iter().zip(&targets) {
            rows[t][item] = group;
            loads[group] += weights[item];
        }
        if let Some(trace) = trace.as_mut() {
            trace.push(StageSnapshot {
                set: t,
                loads: loads.clone(),
            });
        }
    }

    let assignment = Assignment::new(rows).expect("greedy builds a permutation per set");
    let result = HeuristicResult::from_loads(
        instance,
        assignment,
        LoadVector { loads },
        trace,
        comparisons.get(),
    );
    if config.local_search {
        let mut improved = local_search_swap(instance, &result.assignment, config.ls_iteration_cap)
            .expect("greedy assignment matches the instance");
        improved.trace = result.trace;
        improved.work += result.work;
        improved
    } else {
        result
    }
}

/// Best-improvement descent over swaps of two items within one set.
///
/// Moves are ranked by the resulting `(max load, number of groups at the max
/// load)`; a move is taken only if it lowers that pair, so the objective never
/// increases. Ties go to the lowest `(set, item, item)` triple.
pub fn local_search_swap(
    instance: &Instance,
    start: &Assignment,
    cap: usize,
) -> Result<HeuristicResult, ModelError> {
    let mut loads = evaluate(instance, start)?.loads;
    let mut assignment = start.clone();
    let groups = instance.groups();
    let mut moves = 0;
    let mut cap_reached = false;
    let mut work = 0u64;
    // item held by each group, per set
    let mut holder: Vec<Vec<usize>> = assignment
        .rows()
        .iter()
        .map(|row| {
            let mut inv = vec![0; groups];
            for (item, &g) in row.iter().enumerate() {
                inv[g] = item;
            }
            inv
        })
        .collect();

    loop {
        let view = LoadView::new(&loads);
        let current = (view.max, view.count_at(view.max));
        let mut best: Option<((Weight, usize), usize, usize, usize)> = None;
        for &top in view.groups_at_max() {
            for (t, held) in holder.iter().enumerate() {
                let weights = instance.row(t);
                let item_top = held[top];
                for other in 0..groups {
                    if other == top {
                        continue;
                    }
                    work += 1;
                    let item_other = held[other];
                    let delta = weights[item_other] - weights[item_top];
                    let key = view.key_after(top, loads[top] + delta, other, loads[other] - delta);
                    if key >= current {
                        continue;
                    }
                    let (a, b) = (item_top.min(item_other), item_top.max(item_other));
                    let candidate = (key, t, a, b);
                    if best.is_none_or(|best| candidate < best) {
                        best = Some(candidate);
                    }
                }
            }
        }
        let Some((_, t, a, b)) = best else { break };
        if moves == cap {
            cap_reached = true;
            break;
        }
        let (ga, gb) = (assignment.group_of(t, a), assignment.group_of(t, b));
        let delta = instance.weight(t, b) - instance.weight(t, a);
        loads[ga] += delta;
        loads[gb] -= delta;
        assignment.swap_items(t, a, b);
        holder[t][ga] = b;
        holder[t][gb] = a;
        moves += 1;
    }

    let mut result =
        HeuristicResult::from_loads(instance, assignment, LoadVector { loads }, None, work);
    result.local_search = Some(LocalSearchStats { moves, cap_reached });
    Ok(result)
}

/// Loads sorted descending, for asking "what is the max once two groups
/// change" in constant time.
struct LoadView<'a> {
    loads: &'a [Weight],
    by_load: Vec<usize>,
    max: Weight,
    at_max: usize,
}

impl<'a> LoadView<'a> {
    fn new(loads: &'a [Weight]) -> Self {
        let mut by_load: Vec<usize> = (0..loads.len()).collect();
        by_load.sort_by_key(|&g| std::cmp::Reverse(loads[g]));
        let max = loads[by_load[0]];
        let at_max = by_load.partition_point(|&g| loads[g] == max);
        Self {
            loads,
            by_load,
            max,
            at_max,
        }
    }

    fn groups_at_max(&self) -> &[usize] {
        &self.by_load[..self.at_max]
    }

    fn count_at(&self, value: Weight) -> usize {
        let hi = self.by_load.partition_point(|&g| self.loads[g] >= value);
        let lo = self.by_load.partition_point(|&g| self.loads[g] > value);
        hi - lo
    }

    /// `(max, count at max)` after groups `a` and `b` take the given loads.
    fn key_after(&self, a: usize, load_a: Weight, b: usize, load_b: Weight) -> (Weight, usize) {
        let rest = self
            .by_load
            .iter()
            .find(|&&g| g != a && g != b)
            .map(|&g| self.loads[g]);
        let mut max = load_a.max(load_b);
        if let Some(r) = rest {
            max = max.max(r);
        }
        let mut count = usize::from(load_a == max) + usize::from(load_b == max);
        if rest == Some(max) {
            count += self.count_at(max)
                - usize::from(self.loads[a] == max)
                - usize::from(self.loads[b] == max);
        }
        (max, count)
    }
}

/// A broken promise of the greedy; only an implementation bug produces one.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GuaranteeViolation {
    #[error("groups {} and {} differ by {diff}, more than R = {bound}", .heavy + 1, .light + 1)]
    PairwiseDiff {
        heavy: usize,
        light: usize,
        diff: Weight,
        bound: Weight,
    },
    #[error("objective {objective} exceeds ceil(W/B) = {lower_bound} by more than R = {bound}")]
    Gap {
        objective: Weight,
        lower_bound: Weight,
        bound: Weight,
    },
}

/// Checks a greedy result against the spread and gap bounds of `R`.
///
/// Works from the loads stored in `result`, not from its assignment.
pub fn guarantee_check(
    instance: &Instance,
    result: &HeuristicResult,
) -> Result<(), GuaranteeViolation> {
    let bound = instance.ranges().max;
    let loads = &result.loads.loads;
    let heavy = argmax(loads);
    let light = argmin(loads);
    if let (Some(heavy), Some(light)) = (heavy, light) {
        let diff = loads[heavy] - loads[light];
        if diff > bound {
            return Err(GuaranteeViolation::PairwiseDiff {
                heavy,
                light,
                diff,
                bound,
            });
        }
    }
    gap_check(instance, result.objective.max(result.loads.objective()))
}

/// The gap half of [`guarantee_check`]; local search keeps this one.
pub fn gap_check(instance: &Instance, objective: Weight) -> Result<(), GuaranteeViolation> {
    let bound = instance.ranges().max;
    let lower_bound = instance.lower_bound();
    if objective - lower_bound > bound {
        return Err(GuaranteeViolation::Gap {
            objective,
            lower_bound,
            bound,
        });
    }
    Ok(())
}

fn argmax(loads: &[Weight]) -> Option<usize> {
    (0..loads.len()).max_by_key(|&g| (loads[g], std::cmp::Reverse(g)))
}

fn argmin(loads: &[Weight]) -> Option<usize> {
    (0..loads.len()).min_by_key(|&g| (loads[g], g))
}
