use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use stacktsp::bench::{instances, run_grid, write_csv, BenchConfig};
use stacktsp::feasibility::verify_solution;
use stacktsp::generators::{gen_bivalued_tight, gen_metric_tight, gen_random, Profile};
use stacktsp::io::{emit_instance, emit_solution, parse_instance, parse_solution};
use stacktsp::oracle::{exact_extremes_capped, DEFAULT_ORACLE_CAP};
use stacktsp::solve::{run, Algo, SolveOptions};
use stacktsp::tsp::{TspMethod, TspSolver};
use stacktsp::{Error, Goal, Instance, Value};

#[derive(Parser)]
#[command(
    name = "stacktsp",
    version,
    about = "Double TSP with multiple stacks: solvers, oracles and benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a generated instance.
    Gen(GenArgs),
    /// Solve an instance file and write the solution.
    Solve(SolveArgs),
    /// Check a solution file against its instance.
    Verify { instance: PathBuf, solution: PathBuf },
    /// Run algorithms over a seeded grid and write CSV.
    Bench(BenchArgs),
    /// Print the exact best and worst values of an instance.
    Extremes {
        instance: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        oracle_cap: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Random,
    MetricTight,
    BivaluedTight,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value = "random")]
    family: Family,
    /// general, symmetric, metric or bivalued-A-B
    #[arg(long, default_value = "symmetric")]
    profile: Profile,
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Defaults to ceil(n/k).
    #[arg(long)]
    c: Option<usize>,
    #[arg(long, default_value = "min")]
    goal: Goal,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "1")]
    lambda: Value,
    #[arg(long, default_value = "0")]
    mu: Value,
    #[arg(long, default_value_t = 1)]
    n_prime: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, default_value = "apx2")]
    algo: Algo,
    #[arg(long, default_value = "exact")]
    tsp: TspMethod,
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    oracle_cap: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value = "symmetric")]
    profile: Profile,
    /// Item counts, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "4,5,6")]
    n: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Row capacity above ceil(n/k).
    #[arg(long, default_value_t = 1)]
    slack: usize,
    #[arg(long, default_value = "max")]
    goal: Goal,
    /// Instances per size.
    #[arg(long, default_value_t = 10)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "apx2,dapx2,dapx-odd,reduce-two,reduce-sigma")]
    algo: Vec<Algo>,
    #[arg(long, default_value = "exact")]
    tsp: TspMethod,
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    oracle_cap: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Infeasible(String),
    Error(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Error(Error::Precondition(format!("cannot read {}: {e}", path.display()))))
}

fn write(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Error(Error::Precondition(format!("cannot write {}: {e}", p.display())))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<Instance, Failure> {
    let inst = parse_instance(&read(path)?)?;
    let report = inst.validate();
    if !report.is_valid() {
        return Err(Failure::Error(Error::Precondition(report.violations.join("; "))));
    }
    Ok(inst)
}

fn gen(a: &GenArgs) -> Result<(), Failure> {
    let inst = match a.family {
        Family::Random => gen_random(a.profile, a.n, a.k, a.c.unwrap_or(a.n.div_ceil(a.k.max(1))), a.goal, a.seed)?,
        Family::MetricTight => gen_metric_tight(a.lambda, a.k, a.c.unwrap_or(3))?,
        Family::BivaluedTight => gen_bivalued_tight(a.lambda, a.mu, a.n_prime)?,
    };
    write(a.out.as_deref(), &emit_instance(&inst))
}

fn solve(a: &SolveArgs) -> Result<(), Failure> {
    let inst = load(&a.instance)?;
    let opts = SolveOptions {
        tsp: TspSolver::new(a.tsp),
        oracle_cap: a.oracle_cap,
    };
    let s = run(&inst, a.algo, &opts)?;
    let report = verify_solution(&inst, &s);
    if !report.is_ok() {
        return Err(Failure::Error(Error::Internal(format!(
            "{} produced an invalid solution: {}",
            a.algo,
            report.violations.join("; ")
        ))));
    }
    write(a.out.as_deref(), &emit_solution(&s))
}

fn verify(instance: &Path, solution: &Path) -> Result<(), Failure> {
    let inst = load(instance)?;
    let s = parse_solution(&read(solution)?)?;
    let report = verify_solution(&inst, &s);
    if report.is_ok() {
        println!("ok value {}", s.value);
        Ok(())
    } else {
        Err(Failure::Infeasible(report.violations.join("\n")))
    }
}

fn bench(a: &BenchArgs) -> Result<(), Failure> {
    let cfg = BenchConfig {
        profile: a.profile,
        sizes: a.n.clone(),
        k: a.k,
        slack: a.slack,
        goal: a.goal,
        count: a.count,
        seed: a.seed,
        algos: a.algo.clone(),
        opts: SolveOptions {
            tsp: TspSolver::new(a.tsp),
            oracle_cap: a.oracle_cap,
        },
    };
    let rows = run_grid(&instances(&cfg)?, &cfg.algos, &cfg.opts)?;
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf)?;
    write(a.out.as_deref(), &String::from_utf8(buf).expect("CSV is UTF-8"))
}

fn extremes(instance: &Path, cap: usize) -> Result<(), Failure> {
    let inst = load(instance)?;
    let e = exact_extremes_capped(&inst, cap)?;
    println!("opt {}\nwor {}\nplans {}", e.opt.value, e.wor.value, e.plans);
    Ok(())
}

fn threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("STACKTSP_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| Failure::Error(Error::Precondition(format!("STACKTSP_THREADS must be a number, got {v:?}"))))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Error(Error::Internal(e.to_string())))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = threads().and_then(|()| match &cli.cmd {
        Cmd::Gen(a) => gen(a),
        Cmd::Solve(a) => solve(a),
        Cmd::Verify { instance, solution } => verify(instance, solution),
        Cmd::Bench(a) => bench(a),
        Cmd::Extremes { instance, oracle_cap } => extremes(instance, *oracle_cap),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Infeasible(msg)) => {
            eprintln!("infeasible:\n{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Internal(_) => 3,
                Error::Capacity(_) | Error::InvalidPlan(_) | Error::InvalidTour(_) => 1,
                _ => 2,
            })
        }
    }
}
