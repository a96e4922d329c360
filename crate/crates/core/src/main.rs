use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use minimax_bsc::exact::{
    solve_brute_force, solve_dp_b2_with, DpMemory, DpOptions, ExactError, DEFAULT_NODE_CAP,
    DEFAULT_STATE_BUDGET,
};
use minimax_bsc::heuristic::{algorithm1, gap_check, guarantee_check, HeuristicConfig, SetOrder};
use minimax_bsc::model::{Assignment, Instance, LoadVector, Weight};
use minimax_bsc::reductions::{
    decide_3partition, decide_partition, reduce_3partition, reduce_partition, Answer,
    DecisionOutcome, Witness,
};
use minimax_bsc::toolkit::io::{
    parse_3partition, parse_assignment, parse_instance, parse_partition, write_assignment,
    write_instance,
};
use minimax_bsc::toolkit::{bench, generate, verify, BenchOptions, GeneratorSpec, Method};

const VIOLATION: u8 = 1;
const USAGE: u8 = 2;

/// Solvers for minimax bin packing with bin size constraints.
#[derive(Parser)]
#[command(name = "minimax-bsc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance.
    Gen {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write to a file instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve an instance and print the assignment.
    Solve {
        instance: PathBuf,
        #[arg(long, default_value = "heuristic")]
        method: Method,
        #[arg(long, default_value = "dec-range")]
        set_order: SetOrder,
        #[arg(long, default_value_t = 10_000)]
        ls_cap: usize,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        node_cap: u64,
        #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
        state_budget: u64,
        /// Keep a single DP row and recompute while backtracking.
        #[arg(long)]
        low_memory: bool,
        /// Print group loads after every stage of the greedy.
        #[arg(long)]
        trace: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check an assignment against an instance.
    Verify {
        instance: PathBuf,
        assignment: PathBuf,
        /// Claimed objective; defaults to the `# objective` comment of the
        /// assignment file, if any.
        #[arg(long)]
        objective: Option<Weight>,
    },
    /// Run methods over a suite of generated instances.
    Bench(BenchArgs),
    /// Turn a PARTITION or 3-PARTITION file into an instance.
    Reduce {
        problem: Problem,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Answer a PARTITION or 3-PARTITION file through its reduction.
    Decide {
        problem: Problem,
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        node_cap: u64,
    },
}

#[derive(Args)]
struct Shape {
    /// Number of sets, T.
    #[arg(long, short = 't')]
    sets: usize,
    /// Number of groups, B.
    #[arg(long, short = 'b')]
    groups: usize,
    #[arg(long, default_value_t = 1)]
    min: Weight,
    #[arg(long, default_value_t = 100)]
    max: Weight,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    shape: Shape,
    /// Number of instances; seeds run from --seed-start upwards.
    #[arg(long, default_value_t = 25)]
    seeds: u64,
    #[arg(long, default_value_t = 1)]
    seed_start: u64,
    /// Comma-separated list of methods.
    #[arg(long, value_delimiter = ',', default_value = "heuristic")]
    method: Vec<Method>,
    #[arg(long, default_value = "dec-range")]
    set_order: SetOrder,
    #[arg(long, default_value_t = 10_000)]
    ls_cap: usize,
    #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
    node_cap: u64,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    /// Skip timing; output is then byte-for-byte reproducible.
    #[arg(long)]
    no_timing: bool,
    /// Solve instances one at a time.
    #[arg(long)]
    serial: bool,
    /// Emit CSV instead of the table.
    #[arg(long)]
    csv: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    Partition,
    #[value(name = "3partition")]
    ThreePartition,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_instance(path: &Path) -> Result<Instance> {
    parse_instance(&read(path)?).with_context(|| format!("invalid instance {}", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn loads_line(loads: &LoadVector) -> String {
    let parts: Vec<String> = loads.loads.iter().map(Weight::to_string).collect();
    parts.join(" ")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Gen {
            shape,
            seed,
            output,
        } => {
            let spec = GeneratorSpec {
                sets: shape.sets,
                groups: shape.groups,
                weight_min: shape.min,
                weight_max: shape.max,
                seed,
            };
            let instance = generate(&spec)?;
            let text = format!(
                "# uniform [{}, {}] seed {}\n{}",
                spec.weight_min,
                spec.weight_max,
                spec.seed,
                write_instance(&instance)
            );
            emit(output.as_deref(), &text)?;
            Ok(0)
        }
        Command::Solve {
            instance,
            method,
            set_order,
            ls_cap,
            node_cap,
            state_budget,
            low_memory,
            trace,
            output,
        } => {
            let instance = load_instance(&instance)?;
            let solve = SolveArgs {
                method,
                set_order,
                ls_cap,
                node_cap,
                dp: DpOptions {
                    state_budget,
                    memory: if low_memory {
                        DpMemory::SingleRow
                    } else {
                        DpMemory::AllStages
                    },
                },
                trace,
            };
            let (text, code) = solve_command(&instance, &solve)?;
            emit(output.as_deref(), &text)?;
            Ok(code)
        }
        Command::Verify {
            instance,
            assignment,
            objective,
        } => {
            let instance = load_instance(&instance)?;
            let text = read(&assignment)?;
            let claimed = objective.or_else(|| claimed_objective(&text));
            let assignment = match parse_assignment(&text) {
                Ok(a) => a,
                Err(e) => {
                    println!("violation: {e}");
                    return Ok(VIOLATION);
                }
            };
            let outcome = match claimed {
                Some(claimed) => verify(&instance, &assignment, claimed),
                None => minimax_bsc::evaluate(&instance, &assignment).map_err(Into::into),
            };
            match outcome {
                Ok(loads) => {
                    println!("ok objective {}", loads.objective());
                    println!("loads {}", loads_line(&loads));
                    Ok(0)
                }
                Err(e) => {
                    println!("violation: {e}");
                    Ok(VIOLATION)
                }
            }
        }
        Command::Bench(args) => bench_command(&args),
        Command::Reduce {
            problem,
            input,
            output,
        } => {
            let text = read(&input)?;
            let instance = match problem {
                Problem::Partition => reduce_partition(&parse_partition(&text)?),
                Problem::ThreePartition => reduce_3partition(&parse_3partition(&text)?),
            };
            emit(output.as_deref(), &write_instance(&instance))?;
            Ok(0)
        }
        Command::Decide {
            problem,
            input,
            node_cap,
        } => {
            let text = read(&input)?;
            let (outcome, sizes) = match problem {
                Problem::Partition => {
                    let p = parse_partition(&text)?;
                    (decide_partition(&p)?, p.sizes().to_vec())
                }
                Problem::ThreePartition => {
                    let q = parse_3partition(&text)?;
                    (decide_3partition(&q, node_cap)?, q.sizes().to_vec())
                }
            };
            print!("{}", render_decision(&outcome, &sizes));
            Ok(if outcome.answer == Answer::Yes {
                0
            } else {
                VIOLATION
            })
        }
    }
}

struct SolveArgs {
    method: Method,
    set_order: SetOrder,
    ls_cap: usize,
    node_cap: u64,
    dp: DpOptions,
    trace: bool,
}

fn solve_command(instance: &Instance, args: &SolveArgs) -> Result<(String, u8)> {
    let mut out = String::new();
    let mut code = 0;
    let _ = writeln!(out, "# method {}", args.method);
    let (objective, assignment): (Weight, Assignment) = match args.method {
        Method::Heuristic | Method::HeuristicLs => {
            let local_search = args.method == Method::HeuristicLs;
            let config = HeuristicConfig {
                set_order: args.set_order,
                local_search,
                ls_iteration_cap: args.ls_cap,
                record_trace: args.trace,
            };
            let r = algorithm1(instance, &config);
            let _ = writeln!(out, "# set-order {}", args.set_order);
            let check = if local_search {
                gap_check(instance, r.objective)
            } else {
                guarantee_check(instance, &r)
            };
            match check {
                Ok(()) => out.push_str("# guarantee ok\n"),
                Err(e) => {
                    let _ = writeln!(out, "# guarantee VIOLATED: {e}");
                    code = VIOLATION;
                }
            }
            if let Some(ls) = r.local_search {
                let _ = writeln!(
                    out,
                    "# ls-moves {} cap-reached {}",
                    ls.moves, ls.cap_reached
                );
            }
            for stage in r.trace.iter().flatten() {
                let loads = LoadVector {
                    loads: stage.loads.clone(),
                };
                let _ = writeln!(
                    out,
                    "# stage set {} loads {}",
                    stage.set + 1,
                    loads_line(&loads)
                );
            }
            (r.objective, r.assignment)
        }
        Method::DpB2 | Method::BruteForce => {
            let result = if args.method == Method::DpB2 {
                solve_dp_b2_with(instance, &args.dp)
            } else {
                solve_brute_force(instance, args.node_cap)
            };
            let r = match result {
                Ok(r) => r,
                Err(ExactError::NodeCapExceeded { cap, incumbent }) => {
                    eprintln!(
                        "node cap {cap} exceeded; printing best incumbent, not proven optimal"
                    );
                    code = VIOLATION;
                    *incumbent
                }
                Err(e @ ExactError::WrongGroupCount { .. }) => bail!(e),
                Err(e) => return Err(e.into()),
            };
            let _ = writeln!(
                out,
                "# proof {} proven {} work {}",
                r.proof, r.proven, r.work
            );
            (r.objective, r.assignment)
        }
    };
    let loads = match verify(instance, &assignment, objective) {
        Ok(loads) => loads,
        Err(e) => bail!("self-check failed: {e}"),
    };
    let _ = writeln!(out, "# objective {objective}");
    let _ = writeln!(out, "# lower_bound {}", instance.lower_bound());
    let _ = writeln!(out, "# max_range {}", instance.ranges().max);
    let _ = writeln!(out, "# loads {}", loads_line(&loads));
    out.push_str(&write_assignment(&assignment));
    Ok((out, code))
}

fn claimed_objective(text: &str) -> Option<Weight> {
    text.lines()
        .filter_map(|l| l.trim().strip_prefix("# objective "))
        .find_map(|v| v.trim().parse().ok())
}

fn bench_command(args: &BenchArgs) -> Result<u8> {
    if args.method.is_empty() {
        bail!("no methods given");
    }
    let suite: Vec<GeneratorSpec> = (0..args.seeds)
        .map(|k| GeneratorSpec {
            sets: args.shape.sets,
            groups: args.shape.groups,
            weight_min: args.shape.min,
            weight_max: args.shape.max,
            seed: args.seed_start + k,
        })
        .collect();
    if let Some(spec) = suite.first() {
        spec.validate()?;
    }
    let options = BenchOptions {
        set_order: args.set_order,
        ls_cap: args.ls_cap,
        node_cap: args.node_cap,
        repetitions: args.reps,
        timing: !args.no_timing,
        parallel: !args.serial,
    };
    let report = bench(&suite, &args.method, &options);
    if args.csv {
        print!("{}", report.to_csv());
    } else {
        println!(
            "# suite T={} B={} weights=[{}, {}] seeds={}..{}",
            args.shape.sets,
            args.shape.groups,
            args.shape.min,
            args.shape.max,
            args.seed_start,
            (args.seed_start + args.seeds).saturating_sub(1)
        );
        print!("{}", report.to_table());
    }
    let all_guaranteed = report
        .summary
        .iter()
        .all(|s| s.guarantee_passed == s.guarantee_checked);
    Ok(if all_guaranteed { 0 } else { VIOLATION })
}

fn render_decision(outcome: &DecisionOutcome, sizes: &[Weight]) -> String {
    let mut out = format!("answer {}\n", outcome.answer);
    if let Some(objective) = outcome.certificate_objective {
        let _ = writeln!(out, "objective {objective}");
    }
    let parts: Vec<&[usize]> = match &outcome.witness {
        Some(Witness::Partition { first, second }) => vec![first, second],
        Some(Witness::ThreePartition { triples }) => triples.iter().map(Vec::as_slice).collect(),
        None => Vec::new(),
    };
    for (k, part) in parts.iter().enumerate() {
        let elements: Vec<String> = part.iter().map(|i| (i + 1).to_string()).collect();
        let values: Vec<String> = part.iter().map(|&i| sizes[i].to_string()).collect();
        let sum: Weight = part.iter().map(|&i| sizes[i]).sum();
        let _ = writeln!(
            out,
            "part {}: elements {} sizes {} sum {}",
            k + 1,
            elements.join(" "),
            values.join(" "),
            sum
        );
    }
    out
}
