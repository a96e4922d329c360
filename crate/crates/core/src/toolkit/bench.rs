//! Benchmark harness: generate, solve, self-check, time, summarize.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::exact::{solve_brute_force, solve_dp_b2, ExactError, DEFAULT_NODE_CAP};
use crate::heuristic::{algorithm1, gap_check, guarantee_check, HeuristicConfig, SetOrder};
use crate::model::{Assignment, Instance, Weight};
use crate::toolkit::generate::{generate, GeneratorSpec};
use crate::toolkit::verify::verify;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Heuristic,
    HeuristicLs,
    DpB2,
    BruteForce,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Heuristic,
        Method::HeuristicLs,
        Method::DpB2,
        Method::BruteForce,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Heuristic => "heuristic",
            Method::HeuristicLs => "heuristic+ls",
            Method::DpB2 => "dp-b2",
            Method::BruteForce => "brute-force",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown method `{0}` (expected heuristic, heuristic+ls, dp-b2 or brute-force)")]
pub struct UnknownMethod(pub String);

impl FromStr for Method {
    type Err = UnknownMethod;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| UnknownMethod(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchOptions {
    pub set_order: SetOrder,
    pub ls_cap: usize,
    pub node_cap: u64,
    /// Solve repetitions per record; the median wall time is reported.
    pub repetitions: usize,
    /// When false, every solve runs once and no times are reported, which
    /// makes the output byte-for-byte reproducible.
    pub timing: bool,
    pub parallel: bool,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            set_order: SetOrder::default(),
            ls_cap: HeuristicConfig::default().ls_iteration_cap,
            node_cap: DEFAULT_NODE_CAP,
            repetitions: 5,
            timing: true,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub id: usize,
    pub method: Method,
    pub sets: usize,
    pub groups: usize,
    pub seed: u64,
    pub lb: Weight,
    pub max_range: Weight,
    pub objective: Option<Weight>,
    /// `(objective - lb) / lb`, or 0 when both are 0.
    pub relative_gap: Option<f64>,
    pub wall_ms: Option<f64>,
    /// `None` for methods without a guarantee to check.
    pub guarantee_ok: Option<bool>,
    pub error: Option<String>,
}

impl BenchRecord {
    pub fn abs_gap(&self) -> Option<Weight> {
        self.objective.map(|o| o - self.lb)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodSummary {
    pub method: Method,
    pub solved: usize,
    pub failed: usize,
    pub mean_gap: f64,
    pub max_gap: f64,
    pub mean_ms: Option<f64>,
    pub max_ms: Option<f64>,
    pub guarantee_checked: usize,
    pub guarantee_passed: usize,
}

impl MethodSummary {
    /// Fraction of checked records that met the guarantee; 1 when none were
    /// checked.
    pub fn guarantee_pass_rate(&self) -> f64 {
        if self.guarantee_checked == 0 {
            1.0
        } else {
            self.guarantee_passed as f64 / self.guarantee_checked as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub instances: usize,
    pub options: BenchOptions,
    pub records: Vec<BenchRecord>,
    pub summary: Vec<MethodSummary>,
}

pub fn relative_gap(objective: Weight, lb: Weight) -> f64 {
    if lb == 0 {
        if objective == 0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (objective - lb) as f64 / lb as f64
    }
}

struct Solved {
    objective: Weight,
    assignment: Assignment,
    guarantee_ok: Option<bool>,
}

fn solve(instance: &Instance, method: Method, options: &BenchOptions) -> Result<Solved, String> {
    let heuristic = |local_search| HeuristicConfig {
        set_order: options.set_order,
        local_search,
        ls_iteration_cap: options.ls_cap,
        record_trace: false,
    };
    let exact = |r: Result<_, ExactError>| {
        r.map(|r: crate::exact::ExactResult| Solved {
            objective: r.objective,
            assignment: r.assignment,
            guarantee_ok: None,
        })
        .map_err(|e| e.to_string())
    };
    match method {
        Method::Heuristic => {
            let r = algorithm1(instance, &heuristic(false));
            let guarantee_ok = Some(guarantee_check(instance, &r).is_ok());
            Ok(Solved {
                objective: r.objective,
                assignment: r.assignment,
                guarantee_ok,
            })
        }
        Method::HeuristicLs => {
            let r = algorithm1(instance, &heuristic(true));
            let guarantee_ok = Some(gap_check(instance, r.objective).is_ok());
            Ok(Solved {
                objective: r.objective,
                assignment: r.assignment,
                guarantee_ok,
            })
        }
        Method::DpB2 => exact(solve_dp_b2(instance)),
        Method::BruteForce => exact(solve_brute_force(instance, options.node_cap)),
    }
}

fn run_one(
    id: usize,
    spec: &GeneratorSpec,
    instance: &Instance,
    method: Method,
    options: &BenchOptions,
) -> BenchRecord {
    let mut record = BenchRecord {
        id,
        method,
        sets: instance.sets(),
        groups: instance.groups(),
        seed: spec.seed,
        lb: instance.lower_bound(),
        max_range: instance.ranges().max,
        objective: None,
        relative_gap: None,
        wall_ms: None,
        guarantee_ok: None,
        error: None,
    };
    let reps = if options.timing {
        options.repetitions.max(1)
    } else {
        1
    };
    let mut times = Vec::with_capacity(reps);
    let mut outcome = None;
    for _ in 0..reps {
        let start = Instant::now();
        let solved = solve(instance, method, options);
        times.push(start.elapsed().as_secs_f64() * 1e3);
        outcome = Some(solved);
    }
    match outcome.expect("at least one repetition") {
        Ok(solved) => {
            if let Err(e) = verify(instance, &solved.assignment, solved.objective) {
                record.error = Some(format!("self-check failed: {e}"));
                return record;
            }
            record.objective = Some(solved.objective);
            record.relative_gap = Some(relative_gap(solved.objective, record.lb));
            record.guarantee_ok = solved.guarantee_ok;
            if options.timing {
                times.sort_by(f64::total_cmp);
                record.wall_ms = Some(times[times.len() / 2]);
            }
        }
        Err(e) => record.error = Some(e),
    }
    record
}

/// One record per `(instance, method)`, ordered by instance then method as
/// given, regardless of parallelism.
pub fn bench(suite: &[GeneratorSpec], methods: &[Method], options: &BenchOptions) -> BenchReport {
    let job = |(id, spec): (usize, &GeneratorSpec)| -> Vec<BenchRecord> {
        match generate(spec) {
            Ok(instance) => methods
                .iter()
                .map(|&m| run_one(id, spec, &instance, m, options))
                .collect(),
            Err(e) => methods
                .iter()
                .map(|&method| BenchRecord {
                    id,
                    method,
                    sets: spec.sets,
                    groups: spec.groups,
                    seed: spec.seed,
                    lb: 0,
                    max_range: 0,
                    objective: None,
                    relative_gap: None,
                    wall_ms: None,
                    guarantee_ok: None,
                    error: Some(e.to_string()),
                })
                .collect(),
        }
    };
    let nested: Vec<Vec<BenchRecord>> = if options.parallel {
        suite.par_iter().enumerate().map(job).collect()
    } else {
        suite.iter().enumerate().map(job).collect()
    };
    let records: Vec<BenchRecord> = nested.into_iter().flatten().collect();
    let summary = methods.iter().map(|&m| summarize(m, &records)).collect();
    BenchReport {
        instances: suite.len(),
        options: *options,
        records,
        summary,
    }
}

fn summarize(method: Method, records: &[BenchRecord]) -> MethodSummary {
    let mine: Vec<&BenchRecord> = records.iter().filter(|r| r.method == method).collect();
    let gaps: Vec<f64> = mine.iter().filter_map(|r| r.relative_gap).collect();
    let times: Vec<f64> = mine.iter().filter_map(|r| r.wall_ms).collect();
    let mean = |v: &[f64]| (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64);
    let max = |v: &[f64]| v.iter().copied().reduce(f64::max);
    let checked: Vec<bool> = mine.iter().filter_map(|r| r.guarantee_ok).collect();
    MethodSummary {
        method,
        solved: gaps.len(),
        failed: mine.len() - gaps.len(),
        mean_gap: mean(&gaps).unwrap_or(0.0),
        max_gap: max(&gaps).unwrap_or(0.0),
        mean_ms: mean(&times),
        max_ms: max(&times),
        guarantee_checked: checked.len(),
        guarantee_passed: checked.iter().filter(|&&ok| ok).count(),
    }
}

fn opt<T: fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn ms(v: Option<f64>) -> String {
    opt(v.map(|v| format!("{v:.3}")))
}

impl BenchReport {
    /// `id,method,T,B,objective,lb,gap,ms,seed`; ids are 1-based.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,method,T,B,objective,lb,gap,ms,seed\n");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.id + 1,
                r.method,
                r.sets,
                r.groups,
                r.objective.map_or(String::new(), |o| o.to_string()),
                r.lb,
                r.relative_gap.map_or(String::new(), |g| format!("{g:.6}")),
                r.wall_ms.map_or(String::new(), |t| format!("{t:.3}")),
                r.seed
            );
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let o = &self.options;
        let _ = writeln!(
            out,
            "# bench instances={} set-order={} ls-cap={} node-cap={} reps={} timing={}",
            self.instances,
            o.set_order,
            o.ls_cap,
            o.node_cap,
            if o.timing { o.repetitions } else { 1 },
            if o.timing { "on" } else { "off" }
        );
        if self.instances == 0 {
            out.push_str("# n=0: empty suite, nothing solved\n");
            return out;
        }
        let _ = writeln!(
            out,
            "{:>5} {:<13} {:>5} {:>5} {:>8} {:>10} {:>10} {:>6} {:>9} {:>10} {:>5} {:>20}",
            "id",
            "method",
            "T",
            "B",
            "R",
            "objective",
            "lb",
            "gap",
            "rel_gap",
            "ms",
            "guar",
            "seed"
        );
        for r in &self.records {
            let _ = write!(
                out,
                "{:>5} {:<13} {:>5} {:>5} {:>8} {:>10} {:>10} {:>6} {:>9} {:>10} {:>5} {:>20}",
                r.id + 1,
                r.method.name(),
                r.sets,
                r.groups,
                r.max_range,
                opt(r.objective),
                r.lb,
                opt(r.abs_gap()),
                opt(r.relative_gap.map(|g| format!("{g:.5}"))),
                ms(r.wall_ms),
                opt(r.guarantee_ok.map(|ok| if ok { "ok" } else { "FAIL" })),
                r.seed
            );
            if let Some(e) = &r.error {
                let _ = write!(out, "  error: {e}");
            }
            out.push('\n');
        }
        out.push_str("# summary\n");
        for s in &self.summary {
            let _ = writeln!(
                out,
                "# {:<13} solved={} failed={} mean_gap={:.5} max_gap={:.5} mean_ms={} max_ms={} guarantee={}/{} ({:.1}%)",
                s.method.name(),
                s.solved,
                s.failed,
                s.mean_gap,
                s.max_gap,
                ms(s.mean_ms),
                ms(s.max_ms),
                s.guarantee_passed,
                s.guarantee_checked,
                100.0 * s.guarantee_pass_rate()
            );
        }
        out
    }
}
