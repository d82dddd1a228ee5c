use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use cmst_core::experiments::{run_sweep_with_threads, write_csv, SweepConfig};
use cmst_core::instances::{exact_constrained_mst, sample_instance, Instance};
use cmst_core::lagrange::{default_tol, maximize_dual, solve_with_tightening, tree_edge_maxima, TreeSummary};
use cmst_core::selftest::run_selftest;
use cmst_core::theory::{self, SeriesConfig, SeriesValue};
use cmst_core::Error;
use serde_json::{json, Value};

/// Cost-constrained random minimum spanning trees.
#[derive(Parser, Debug)]
#[command(name = "cmst", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample an instance and write it as JSON.
    Gen(GenArgs),
    /// Maximise the Lagrangian dual and repair the dual trees.
    Solve(SolveArgs),
    /// Exhaustive optimum for n <= 9.
    Exact(ExactArgs),
    /// Evaluate a theory function.
    Theory {
        #[command(subcommand)]
        action: TheoryAction,
    },
    /// Predicted optimum and regime for (n, c0, gamma).
    Predict(PredictArgs),
    /// Run a Monte Carlo sweep from a JSON config.
    Sweep(SweepArgs),
    /// Run the reduced-scale invariant suite.
    Selftest,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(short = 'n')]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long)]
    seed: u64,
    /// Output path; stdout when absent.
    #[arg(short = 'o')]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(short = 'i')]
    input: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    c0: f64,
    /// Multiplier tolerance; 1e-9 n by default.
    #[arg(long)]
    tol: Option<f64>,
    /// Solve again at c0 - c_max of the first repair.
    #[arg(long)]
    tighten: bool,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[arg(short = 'i')]
    input: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    c0: f64,
}

#[derive(Subcommand, Debug)]
enum TheoryAction {
    /// `theory eval <name> [args...]`
    Eval {
        name: String,
        #[arg(allow_negative_numbers = true)]
        args: Vec<f64>,
    },
}

#[derive(Args, Debug)]
struct PredictArgs {
    #[arg(short = 'n')]
    n: usize,
    #[arg(long, allow_negative_numbers = true)]
    c0: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Use the nearest regime's formula outside every regime.
    #[arg(long)]
    extrapolate: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(short = 'o')]
    out: PathBuf,
    /// Worker threads; all cores when absent.
    #[arg(long)]
    threads: Option<usize>,
}

/// Accepts `-gamma` style long flags by rewriting them to `--gamma`.
fn normalize(args: impl IntoIterator<Item = String>) -> Vec<String> {
    args.into_iter()
        .map(|a| {
            let b = a.as_bytes();
            if b.len() > 2 && b[0] == b'-' && b[1].is_ascii_alphabetic() {
                format!("-{a}")
            } else {
                a
            }
        })
        .collect()
}

fn print_json(v: &Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn read_instance(path: &PathBuf) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Instance::from_json(&text)?)
}

fn series_json(v: SeriesValue) -> Value {
    json!({ "value": v.value, "abs_error_bound": v.abs_error_bound, "terms_used": v.terms_used })
}

fn exact_json(value: f64) -> Value {
    json!({ "value": value, "abs_error_bound": 0.0, "terms_used": 0 })
}

/// Usage problems detected after parsing; reported with exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

const THEORY_FUNCTIONS: &str = "zeta3, c1, c_gamma <gamma>, f <beta>, f_prime <beta>, g <beta>, \
f_k <k> <beta>, log_gamma <x>, lower_incomplete_gamma <s> <x>, beta_case2 <alpha>, \
beta_case3 <alpha>, lambda_star <n> <c0> <gamma>, expected_ln <n> <lambda> <gamma>, \
expected_min_ugamma <n> <gamma>, phat <p> <lambda>, phat_inv <q> <lambda>, \
phat_gamma <t> <lambda> <gamma>, t0 <n> <lambda> <gamma>";

fn as_count(x: f64) -> Result<usize> {
    if x < 0.0 || x.fract() != 0.0 || x > 1e15 {
        bail!(Usage(format!("expected a non-negative integer, got {x}")));
    }
    Ok(x as usize)
}

fn theory_eval(name: &str, args: &[f64]) -> Result<Value> {
    let cfg = SeriesConfig::default();
    let arity = |k: usize| -> Result<()> {
        if args.len() != k {
            bail!(Usage(format!("{name} takes {k} argument(s), got {}", args.len())));
        }
        Ok(())
    };
    let v = match name {
        "zeta3" => {
            arity(0)?;
            series_json(theory::zeta3(&cfg)?)
        }
        "c1" => {
            arity(0)?;
            series_json(theory::c1_const(&cfg)?)
        }
        "c_gamma" => {
            arity(1)?;
            series_json(theory::c_gamma_const(args[0], &cfg)?)
        }
        "f" => {
            arity(1)?;
            series_json(theory::f(args[0], &cfg)?)
        }
        "f_prime" => {
            arity(1)?;
            series_json(theory::f_prime(args[0], &cfg)?)
        }
        "g" => {
            arity(1)?;
            series_json(theory::g(args[0], &cfg)?)
        }
        "f_k" => {
            arity(2)?;
            exact_json(theory::f_k(as_count(args[0])?, args[1], &cfg)?)
        }
        "log_gamma" => {
            arity(1)?;
            exact_json(theory::log_gamma(args[0])?)
        }
        "lower_incomplete_gamma" => {
            arity(2)?;
            exact_json(theory::lower_incomplete_gamma(args[0], args[1])?)
        }
        "beta_case2" => {
            arity(1)?;
            exact_json(theory::solve_beta_case2(args[0], &cfg)?)
        }
        "beta_case3" => {
            arity(1)?;
            exact_json(theory::solve_beta_case3(args[0], &cfg)?)
        }
        "lambda_star" => {
            arity(3)?;
            exact_json(theory::lambda_star(as_count(args[0])?, args[1], args[2], &cfg)?)
        }
        "expected_ln" => {
            arity(3)?;
            series_json(theory::expected_ln(as_count(args[0])?, args[1], args[2], &cfg)?)
        }
        "expected_min_ugamma" => {
            arity(2)?;
            let m = theory::expected_min_ugamma(as_count(args[0])?, args[1])?;
            json!({ "value": m.exact, "abs_error_bound": 0.0, "terms_used": 0, "asymptotic": m.asymptotic })
        }
        "phat" => {
            arity(2)?;
            exact_json(theory::phat(args[0], args[1])?)
        }
        "phat_inv" => {
            arity(2)?;
            exact_json(theory::phat_inv(args[0], args[1])?)
        }
        "phat_gamma" => {
            arity(3)?;
            exact_json(theory::phat_gamma(args[0], args[1], args[2])?)
        }
        "t0" => {
            arity(3)?;
            let t = theory::t0_threshold(as_count(args[0])?, args[1], args[2])?;
            json!({ "value": t.t0, "abs_error_bound": 0.0, "terms_used": 0, "below_one": t.below_one })
        }
        _ => bail!(Usage(format!("unknown function {name:?}; available: {THEORY_FUNCTIONS}"))),
    };
    Ok(v)
}

fn tree_json(t: &cmst_core::SpanningTree) -> Value {
    serde_json::to_value(TreeSummary::from(t)).expect("plain data serializes")
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen(a) => {
            let inst = sample_instance(a.n, a.gamma, a.seed)?;
            let text = inst.to_json();
            match a.out {
                Some(p) => fs::write(&p, text + "\n").with_context(|| format!("writing {}", p.display()))?,
                None => println!("{text}"),
            }
        }
        Command::Solve(a) => {
            let inst = read_instance(&a.input)?;
            let tol = a.tol.unwrap_or_else(|| default_tol(inst.n()));
            let mut v = if a.tighten {
                let t = solve_with_tightening(&inst, a.c0, tol)?;
                let mut v = t.original.to_json_value();
                v["c0_hat"] = json!(t.c0_hat);
                v["tightened"] = t.tightened.as_ref().map_or(Value::Null, |s| s.to_json_value());
                v["final"] = tree_json(t.final_tree());
                v
            } else {
                let s = maximize_dual(&inst, a.c0, tol)?;
                let mut v = s.to_json_value();
                v["final"] = tree_json(&s.repaired);
                v
            };
            let fin: Vec<cmst_core::Edge> = serde_json::from_value(v["final"]["edges"].clone())?;
            let tree = cmst_core::SpanningTree::from_edges(&inst, fin)?;
            let (z_max, c_max) = tree_edge_maxima(&tree, &inst, v["lambda_star"].as_f64().unwrap_or(0.0));
            v["z_max"] = json!(z_max);
            v["c_max"] = json!(c_max);
            v["feasible"] = json!(tree.total_cost() <= a.c0);
            print_json(&v)?;
        }
        Command::Exact(a) => {
            let inst = read_instance(&a.input)?;
            match exact_constrained_mst(&inst, a.c0)? {
                Some(t) => print_json(&tree_json(&t))?,
                None => {
                    eprintln!("infeasible: no spanning tree has cost <= {}", a.c0);
                    return Ok(ExitCode::from(1));
                }
            }
        }
        Command::Theory { action: TheoryAction::Eval { name, args } } => {
            print_json(&theory_eval(&name, &args)?)?;
        }
        Command::Predict(a) => {
            let p = theory::predict_wstar(a.n, a.c0, a.gamma, a.extrapolate, &SeriesConfig::default())?;
            print_json(&serde_json::to_value(p)?)?;
        }
        Command::Sweep(a) => {
            let text = fs::read_to_string(&a.config).with_context(|| format!("reading {}", a.config.display()))?;
            let cfg = SweepConfig::from_json(&text)?;
            let threads = a.threads.unwrap_or(0);
            let out = run_sweep_with_threads(&cfg, &SeriesConfig::default(), threads)?;
            let mut buf = Vec::new();
            write_csv(&out.records, &mut buf)?;
            fs::write(&a.out, buf).with_context(|| format!("writing {}", a.out.display()))?;
            print_json(&serde_json::to_value(&out.summary)?)?;
        }
        Command::Selftest => {
            let report = run_selftest();
            print_json(&serde_json::to_value(&report)?)?;
            if !report.passed() {
                for c in report.checks.iter().filter(|c| !c.passed) {
                    eprintln!("selftest failed: {}: {}", c.name, c.detail);
                }
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse_from(normalize(std::env::args())) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            if e.downcast_ref::<Usage>().is_some() {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            match e.downcast_ref::<Error>() {
                Some(Error::Infeasible { min_cost, c0 }) => {
                    eprintln!("infeasible: cheapest spanning tree costs {min_cost} > c0 = {c0}");
                }
                Some(Error::InvalidArgument(_) | Error::Config(_)) => {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(2);
                }
                _ => eprintln!("error: {e:#}"),
            }
            ExitCode::from(1)
        }
    }
}
