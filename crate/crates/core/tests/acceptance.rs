//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use minimax_bsc::exact::{solve_brute_force, solve_dp_b2, DEFAULT_NODE_CAP};
use minimax_bsc::heuristic::{algorithm1, guarantee_check, HeuristicConfig, SetOrder};
use minimax_bsc::model::{Instance, Weight};
use minimax_bsc::reductions::{
    decide_3partition, decide_partition, Answer, PartitionInstance, ThreePartitionInstance, Witness,
};
use minimax_bsc::toolkit::generate::{generate, GeneratorSpec};
use minimax_bsc::toolkit::{bench, BenchOptions, Method};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_instance(rng: &mut ChaCha8Rng, sets: usize, groups: usize, max_w: Weight) -> Instance {
    let spec = GeneratorSpec {
        sets,
        groups,
        weight_min: 0,
        weight_max: max_w,
        seed: rng.gen(),
    };
    generate(&spec).unwrap()
}

/// DP and brute force agree exactly on 200+ two-group instances, in < 10 s.
fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD9B2);
    let start = Instant::now();
    let trials = 240;
    let mut mismatches = 0;
    for _ in 0..trials {
        let t = rng.gen_range(1..=12);
        let i = random_instance(&mut rng, t, 2, 50);
        let dp = solve_dp_b2(&i).unwrap().objective;
        let bf = solve_brute_force(&i, DEFAULT_NODE_CAP).unwrap().objective;
        if dp != bf {
            mismatches += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches == 0 && elapsed < Duration::from_secs(10),
        format!(
            "{trials} instances, {mismatches} mismatches, {:.3} s (limit 10 s)",
            elapsed.as_secs_f64()
        ),
    )
}

/// Spread and gap both within R on 1000+ instances, in < 5 s.
fn guarantee_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6A4A);
    let start = Instant::now();
    let trials = 1200;
    let mut violations = 0;
    for _ in 0..trials {
        let t = rng.gen_range(1..=50);
        let b = rng.gen_range(2..=20);
        let i = random_instance(&mut rng, t, b, 100);
        let r = algorithm1(&i, &HeuristicConfig::default());
        let bound = i.ranges().max;
        let ok = guarantee_check(&i, &r).is_ok()
            && r.max_pairwise_diff <= bound
            && r.objective - i.lower_bound() <= bound;
        if !ok {
            violations += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        violations == 0 && elapsed < Duration::from_secs(5),
        format!(
            "{trials} instances, {violations} violations, {:.3} s (limit 5 s)",
            elapsed.as_secs_f64()
        ),
    )
}

/// Random 3-PARTITION instances with at most 3 triples: 40 built from
/// triples summing to `U` (yes) and 40 sampled at random and kept only when
/// the independent enumerator finds no triple cover (no).
fn three_partition_cases(rng: &mut ChaCha8Rng) -> Vec<ThreePartitionInstance> {
    let (mut yes, mut no) = (Vec::new(), Vec::new());
    while yes.len() < 40 || no.len() < 40 {
        let want_yes = yes.len() < 40 && (no.len() >= 40 || rng.gen_bool(0.5));
        let m = if want_yes {
            rng.gen_range(1..=3)
        } else {
            rng.gen_range(2..=3)
        };
        let bound: Weight = rng.gen_range(40..=120);
        let (lo, hi) = (bound / 4 + 1, (bound - 1) / 2);
        let mut sizes = Vec::with_capacity(3 * m);
        if want_yes {
            while sizes.len() < 3 * m {
                let a = rng.gen_range(lo..=hi);
                let b = rng.gen_range(lo..=hi);
                let c = bound - a - b;
                if (lo..=hi).contains(&c) {
                    sizes.extend([a, b, c]);
                }
            }
            sizes.shuffle(rng);
        } else {
            sizes.extend((0..3 * m - 1).map(|_| rng.gen_range(lo..=hi)));
            sizes.push(m as Weight * bound - sizes.iter().sum::<Weight>());
        }
        let Ok(q) = ThreePartitionInstance::new(sizes, bound) else {
            continue;
        };
        if want_yes {
            yes.push(q);
        } else if !common::has_triples(q.sizes(), q.bound()) {
            no.push(q);
        }
    }
    yes.into_iter().chain(no).collect()
}

/// PARTITION against subset enumeration; 3-PARTITION against a triple
/// enumerator with witnesses re-checked.
fn reduction_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3EDC);
    let mut wrong = 0;
    let mut bad_witness = 0;
    let (mut yes, mut no) = (0, 0);
    let partitions = 600;
    for _ in 0..partitions {
        let n = rng.gen_range(1..=15);
        let sizes: Vec<Weight> = (0..n).map(|_| rng.gen_range(1..=30)).collect();
        let p = PartitionInstance::new(sizes.clone()).unwrap();
        let d = decide_partition(&p).unwrap();
        let truth = common::has_equal_split(&sizes);
        if (d.answer == Answer::Yes) != truth || d.answer == Answer::Unknown {
            wrong += 1;
        }
        match &d.witness {
            Some(Witness::Partition { first, second }) if !p.is_witness(first, second) => {
                bad_witness += 1
            }
            None if d.answer == Answer::Yes => bad_witness += 1,
            _ => {}
        }
    }
    let cases = three_partition_cases(&mut rng);
    for q in &cases {
        let d = decide_3partition(q, DEFAULT_NODE_CAP).unwrap();
        let truth = common::has_triples(q.sizes(), q.bound());
        if truth {
            yes += 1;
        } else {
            no += 1;
        }
        if (d.answer == Answer::Yes) != truth || d.answer == Answer::Unknown {
            wrong += 1;
        }
        match &d.witness {
            Some(Witness::ThreePartition { triples }) if !q.is_witness(triples) => bad_witness += 1,
            None if d.answer == Answer::Yes => bad_witness += 1,
            _ => {}
        }
    }
    outcome(
        wrong == 0 && bad_witness == 0 && yes >= 25 && no >= 25,
        format!(
            "{partitions} PARTITION + {} 3-PARTITION ({yes} yes / {no} no), {wrong} wrong answers, {bad_witness} bad witnesses",
            cases.len()
        ),
    )
}

/// Mean relative gap at most 0.07 over 25 seeds of T=20, B=300, [1, 100].
fn gap_replication() -> Outcome {
    let suite: Vec<GeneratorSpec> = (1..=25)
        .map(|s| GeneratorSpec::uniform(20, 300, s))
        .collect();
    let options = BenchOptions {
        set_order: SetOrder::NonIncreasingRange,
        timing: false,
        ..BenchOptions::default()
    };
    let report = bench(&suite, &[Method::Heuristic], &options);
    let all_within_r = report
        .records
        .iter()
        .all(|r| r.abs_gap().is_some_and(|g| g <= r.max_range));
    let summary = &report.summary[0];
    outcome(
        report.records.len() == 25
            && summary.solved == 25
            && summary.mean_gap <= 0.07
            && all_within_r
            && summary.guarantee_pass_rate() == 1.0,
        format!(
            "mean relative gap {:.5} (limit 0.07), max {:.5}, abs_gap <= R on all: {all_within_r}",
            summary.mean_gap, summary.max_gap
        ),
    )
}

/// Greedy on 6000 items in < 0.1 s.
fn runtime_replication() -> Outcome {
    let i = generate(&GeneratorSpec::uniform(20, 300, 1)).unwrap();
    let config = HeuristicConfig::default();
    let mut times: Vec<f64> = (0..5)
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(algorithm1(&i, &config));
            start.elapsed().as_secs_f64()
        })
        .collect();
    times.sort_by(f64::total_cmp);
    let median = times[2];
    let worst = times[4];
    outcome(
        worst < 0.1,
        format!(
            "T=20 B=300: median {:.4} s, worst {:.4} s (limit 0.1 s)",
            median, worst
        ),
    )
}

/// dec-range mean objective no worse than input order.
fn set_ordering() -> Outcome {
    let (mut dec, mut input) = (0i64, 0i64);
    let mut n = 0;
    for b in [10, 50] {
        for seed in 0..120 {
            let i = generate(&GeneratorSpec::uniform(20, b, 10_000 + seed)).unwrap();
            let run = |set_order| {
                algorithm1(
                    &i,
                    &HeuristicConfig {
                        set_order,
                        ..HeuristicConfig::default()
                    },
                )
                .objective
            };
            dec += run(SetOrder::NonIncreasingRange);
            input += run(SetOrder::Input);
            n += 1;
        }
    }
    let (dec_mean, input_mean) = (dec as f64 / n as f64, input as f64 / n as f64);
    outcome(
        dec_mean <= input_mean,
        format!("{n} instances: mean objective dec-range {dec_mean:.3} vs input {input_mean:.3}"),
    )
}

fn run_cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_minimax-bsc"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code(), out.stdout)
}

/// Every CLI verb twice with the same inputs gives identical bytes.
fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let write = |name: &str, text: &str| std::fs::write(Path::new(&path(name)), text).unwrap();
    write("two.txt", "3 2\n5 1\n4 4\n2 9\n");
    write("part.txt", "3\n1\n1\n2\n3\n");
    write("three.txt", "2 100\n30\n35\n35\n40\n30\n30\n");
    let (code, _) = run_cli(&[
        "gen",
        "-t",
        "8",
        "-b",
        "5",
        "--seed",
        "11",
        "-o",
        &path("gen.txt"),
    ]);
    assert_eq!(code, Some(0));
    let (code, _) = run_cli(&["solve", &path("gen.txt"), "-o", &path("sol.txt")]);
    assert_eq!(code, Some(0));

    let commands: Vec<Vec<String>> = [
        vec!["gen", "-t", "20", "-b", "300", "--seed", "5"],
        vec![
            "gen", "-t", "4", "-b", "3", "--min", "0", "--max", "9", "--seed", "77",
        ],
        vec!["solve", &path("gen.txt")],
        vec![
            "solve",
            &path("gen.txt"),
            "--method",
            "heuristic+ls",
            "--set-order",
            "input",
            "--trace",
        ],
        vec!["solve", &path("gen.txt"), "--set-order", "inc-range"],
        vec!["solve", &path("two.txt"), "--method", "dp-b2"],
        vec![
            "solve",
            &path("two.txt"),
            "--method",
            "dp-b2",
            "--low-memory",
        ],
        vec!["solve", &path("two.txt"), "--method", "brute-force"],
        vec!["verify", &path("gen.txt"), &path("sol.txt")],
        vec![
            "bench",
            "-t",
            "20",
            "-b",
            "30",
            "--seeds",
            "6",
            "--method",
            "heuristic,heuristic+ls",
            "--no-timing",
        ],
        vec![
            "bench",
            "-t",
            "10",
            "-b",
            "2",
            "--seeds",
            "6",
            "--method",
            "heuristic,dp-b2,brute-force",
            "--no-timing",
            "--csv",
        ],
        vec!["reduce", "partition", &path("part.txt")],
        vec!["reduce", "3partition", &path("three.txt")],
        vec!["decide", "partition", &path("part.txt")],
        vec!["decide", "3partition", &path("three.txt")],
    ]
    .into_iter()
    .map(|c| c.into_iter().map(String::from).collect())
    .collect();

    let mut differing = Vec::new();
    for cmd in &commands {
        let args: Vec<&str> = cmd.iter().map(String::as_str).collect();
        let first = run_cli(&args);
        let second = run_cli(&args);
        if first != second || first.0 != Some(0) || first.1.is_empty() {
            differing.push(args[..2].join(" "));
        }
    }
    outcome(
        differing.is_empty(),
        format!(
            "{} commands run twice, {} differed or failed {:?}",
            commands.len(),
            differing.len(),
            differing
        ),
    )
}

fn main() {
    let criteria: [Criterion; 7] = [
        (
            "oracle equivalence (dp-b2 vs brute force)",
            oracle_equivalence,
        ),
        ("absolute guarantee R", guarantee_suite),
        ("reduction correctness", reduction_correctness),
        ("gap replication T=20 B=300", gap_replication),
        ("runtime replication T=20 B=300", runtime_replication),
        ("set ordering dec-range vs input", set_ordering),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let result = check();
        if !result.pass {
            failed += 1;
        }
        println!(
            "[{}] {name}: {}",
            if result.pass { "PASS" } else { "FAIL" },
            result.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
