//! Naive oracles shared by the integration tests. Nothing here calls the
//! solvers under test.

#![allow(dead_code)]

use minimax_bsc::model::{Instance, Weight};

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Objectives of every assignment, no symmetry breaking and no pruning.
pub fn all_objectives(instance: &Instance) -> Vec<Weight> {
    let perms = permutations(instance.groups());
    let mut out = Vec::new();
    let mut loads = vec![0; instance.groups()];
    fn rec(
        instance: &Instance,
        perms: &[Vec<usize>],
        t: usize,
        loads: &mut Vec<Weight>,
        out: &mut Vec<Weight>,
    ) {
        if t == instance.sets() {
            out.push(*loads.iter().max().unwrap());
            return;
        }
        for p in perms {
            for (b, &g) in p.iter().enumerate() {
                loads[g] += instance.weight(t, b);
            }
            rec(instance, perms, t + 1, loads, out);
            for (b, &g) in p.iter().enumerate() {
                loads[g] -= instance.weight(t, b);
            }
        }
    }
    rec(instance, &perms, 0, &mut loads, &mut out);
    out
}

pub fn naive_optimum(instance: &Instance) -> Weight {
    all_objectives(instance).into_iter().min().unwrap()
}

/// Two-group optimum by enumerating which item of each set joins group 1.
pub fn two_group_optimum(instance: &Instance) -> Weight {
    assert_eq!(instance.groups(), 2);
    let total = instance.total_weight();
    (0u64..1 << instance.sets())
        .map(|mask| {
            let s: Weight = (0..instance.sets())
                .map(|t| instance.weight(t, ((mask >> t) & 1) as usize))
                .sum();
            s.max(total - s)
        })
        .min()
        .unwrap()
}

/// Every reachable weight of group 1 for a two-group instance, by enumeration.
pub fn two_group_states(instance: &Instance, upto: usize) -> Vec<Weight> {
    let mut states: Vec<Weight> = (0u64..1 << (upto + 1))
        .map(|mask| {
            (0..=upto)
                .map(|t| instance.weight(t, ((mask >> t) & 1) as usize))
                .sum()
        })
        .collect();
    states.sort();
    states.dedup();
    states
}

/// PARTITION by subset enumeration.
pub fn has_equal_split(sizes: &[Weight]) -> bool {
    let total: Weight = sizes.iter().sum();
    (0u64..1 << sizes.len()).any(|mask| {
        let s: Weight = (0..sizes.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| sizes[i])
            .sum();
        2 * s == total
    })
}

/// 3-PARTITION by trying every way to cut the elements into triples.
pub fn has_triples(sizes: &[Weight], bound: Weight) -> bool {
    fn rec(left: &mut Vec<Weight>, bound: Weight) -> bool {
        if left.is_empty() {
            return true;
        }
        let first = left.remove(0);
        let n = left.len();
        for i in 0..n {
            for j in i + 1..n {
                if first + left[i] + left[j] == bound {
                    let (a, b) = (left[i], left[j]);
                    left.remove(j);
                    left.remove(i);
                    let ok = rec(left, bound);
                    left.insert(i, a);
                    left.insert(j, b);
                    if ok {
                        left.insert(0, first);
                        return true;
                    }
                }
            }
        }
        left.insert(0, first);
        false
    }
    rec(&mut sizes.to_vec(), bound)
}

pub fn instance(rows: &[&[Weight]]) -> Instance {
    Instance::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
}
