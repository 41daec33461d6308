//! `qf` command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::decompose::{
    bhk_experiment, increment_floor, linear_kvn, quadratic_kvn, regularity, regularity_high_rank, BhkOptions,
    GrowthFn,
};
use crate::error::{QfError, Result};
use crate::factors::{atom_statistics, factor_rank, rank_reduce_traced, FactorSpec, QuadraticFactor};
use crate::field::GroupConfig;
use crate::fourier::{dft, DenseFunction, PointSet};
use crate::gowers::{gowers_norm_direct, gowers_norm_fast, uk_norm, DEFAULT_BUDGET};
use crate::harness::report::{load_json, to_json_string, Report, RunConfig};
use crate::harness::rng::{random_balanced, random_factor, random_set, SeededRng};
use crate::harness::verify::run_verify;
use crate::progressions::{lambda3, lambda3_spectral, lambda4, lambda4_weighted};
use crate::quadratic::{best_quadratic_correlation, OracleConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable that overrides `--budget`.
pub const BUDGET_ENV: &str = "QF_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "qf", version, about = "Quadratic Fourier analysis on F_5^n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Fourier transform of a function file.
    Ft,
    /// Gowers norms by the direct and the fast method.
    Gowers,
    /// Progression averages Λ_3 or Λ_4.
    Lambda,
    /// Exhaustive quadratic correlation search.
    Inverse,
    /// Atom statistics, rank and rank reduction of a factor.
    Factor,
    /// Koopman–von Neumann decomposition.
    Kvn,
    /// Arithmetic regularity decomposition.
    Regularity,
    /// Four-term progressions with a common difference in a dense set.
    Bhk,
    /// Run the invariant suite.
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Direct,
    Fast,
    Both,
    Spectral,
    Weighted,
    All,
    Linear,
    Quadratic,
    HighRank,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    #[arg(long, global = true, default_value_t = 2)]
    pub n: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    #[arg(long, global = true)]
    pub eta: Option<f64>,
    /// Growth preset: exp:BASE:SCALE, poly:POWER, const:VALUE or affine:SLOPE:INTERCEPT.
    #[arg(long, global = true)]
    pub growth: Option<GrowthFn>,
    /// Growth preset for the rank requirement.
    #[arg(long, global = true)]
    pub rank_growth: Option<GrowthFn>,
    /// Largest number of inner-loop evaluations for direct methods.
    #[arg(long, global = true)]
    pub budget: Option<f64>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Weight function for `lambda --method weighted`.
    #[arg(long, global = true)]
    pub weight: Option<PathBuf>,
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Record wall-clock time in the report.
    #[arg(long, global = true)]
    pub timings: bool,
    #[arg(long, global = true)]
    pub k: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
}

/// A factor file: the group dimension next to the factor's forms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorFile {
    pub n: usize,
    #[serde(flatten)]
    pub spec: FactorSpec,
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Ft => "ft",
        Command::Gowers => "gowers",
        Command::Lambda => "lambda",
        Command::Inverse => "inverse",
        Command::Factor => "factor",
        Command::Kvn => "kvn",
        Command::Regularity => "regularity",
        Command::Bhk => "bhk",
        Command::Verify => "verify",
    }
}

fn method_name(m: MethodArg) -> String {
    m.to_possible_value().expect("no skipped variants").get_name().to_string()
}

fn exit_code(e: &QfError) -> i32 {
    match e {
        QfError::InvariantViolated(_) | QfError::InverseTheoremViolated { .. } | QfError::IterationCap { .. } => {
            EXIT_ASSERTION
        }
        _ => EXIT_USAGE,
    }
}

fn usage(msg: impl Into<String>) -> QfError {
    QfError::InvalidParameter(msg.into())
}

fn resolve_budget(flag: Option<f64>) -> Result<f64> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse::<f64>().map_err(|e| usage(format!("{BUDGET_ENV}={v}: {e}"))),
        Err(_) => Ok(flag.unwrap_or(DEFAULT_BUDGET)),
    }
}

struct Ctx {
    args: CommonArgs,
    config: RunConfig,
    evaluations: Option<f64>,
}

impl Ctx {
    fn cfg(&self) -> Result<GroupConfig> {
        GroupConfig::new(self.args.n)
    }

    fn rng(&self) -> SeededRng {
        SeededRng::new(self.args.seed)
    }

    /// The input function, or a seeded balanced function 1_A − α with α ≈ 1/2.
    fn function(&mut self) -> Result<DenseFunction> {
        let f = match &self.args.input {
            Some(p) => load_json::<DenseFunction>(p)?,
            None => random_balanced(self.cfg()?, &mut self.rng()),
        };
        self.config.n = f.cfg().dim();
        Ok(f)
    }

    fn set(&mut self) -> Result<PointSet> {
        let s = match &self.args.input {
            Some(p) => load_json::<PointSet>(p)?,
            None => random_set(self.args.n, 0.5, self.args.seed)?,
        };
        self.config.n = s.cfg().dim();
        Ok(s)
    }

    fn factor(&mut self) -> Result<QuadraticFactor> {
        match &self.args.input {
            Some(p) => {
                let file = load_json::<FactorFile>(p)?;
                self.config.n = file.n;
                file.spec.into_factor(GroupConfig::new(file.n)?)
            }
            None => Ok(random_factor(self.cfg()?, 1, 2, &mut self.rng())),
        }
    }
}

fn run_ft(ctx: &mut Ctx) -> Result<Value> {
    let f = ctx.function()?;
    Ok(json!({ "spectrum": dft(&f) }))
}

fn run_gowers(ctx: &mut Ctx) -> Result<Value> {
    let f = ctx.function()?;
    let k = ctx.args.k.unwrap_or(3);
    let method = ctx.args.method.unwrap_or(MethodArg::Both);
    ctx.config.k = Some(k);
    ctx.config.method = Some(method_name(method));
    let direct = match method {
        MethodArg::Direct | MethodArg::Both => Some(gowers_norm_direct(&f, k, ctx.config.budget)?),
        MethodArg::Fast => None,
        other => return Err(usage(format!("gowers accepts direct, fast or both, not {}", method_name(other)))),
    };
    let fast = match method {
        MethodArg::Fast | MethodArg::Both => Some(gowers_norm_fast(&f, k)?),
        _ => None,
    };
    ctx.evaluations = Some(direct.iter().chain(fast.iter()).map(|r| r.cost).sum());
    let difference = match (&direct, &fast) {
        (Some(d), Some(s)) => Some((d.value - s.value).abs()),
        _ => None,
    };
    Ok(json!({ "k": k, "direct": direct, "fast": fast, "difference": difference }))
}

fn run_lambda(ctx: &mut Ctx) -> Result<Value> {
    let f = ctx.function()?;
    let k = ctx.args.k.unwrap_or(4);
    let method = ctx.args.method.unwrap_or(MethodArg::All);
    ctx.config.k = Some(k);
    ctx.config.method = Some(method_name(method));
    let want = |m: MethodArg| method == MethodArg::All || method == m;
    let mut out = serde_json::Map::new();
    out.insert("k".into(), json!(k));
    match k {
        3 => {
            if want(MethodArg::Direct) {
                out.insert("direct".into(), json!(lambda3(&f, &f, &f)?));
            }
            if want(MethodArg::Spectral) {
                out.insert("spectral".into(), json!(lambda3_spectral(&f, &f, &f)?));
            }
        }
        4 => {
            if want(MethodArg::Direct) {
                out.insert("direct".into(), json!(lambda4(&f, &f, &f, &f)?));
            }
            if want(MethodArg::Weighted) {
                let w = match &ctx.args.weight {
                    Some(p) => load_json::<DenseFunction>(p)?,
                    None => DenseFunction::ones(*f.cfg()),
                };
                out.insert("weighted".into(), json!(lambda4_weighted([&f, &f, &f, &f], &w)?));
            }
        }
        _ => return Err(usage(format!("lambda needs k = 3 or 4, got {k}"))),
    }
    if out.len() == 1 {
        return Err(usage(format!("method {} does not apply to k = {k}", method_name(method))));
    }
    Ok(Value::Object(out))
}

fn run_inverse(ctx: &mut Ctx) -> Result<Value> {
    let f = ctx.function()?;
    let delta = ctx.args.delta.unwrap_or(0.5);
    let oracle = OracleConfig::default();
    ctx.config.delta = Some(delta);
    ctx.config.theta = Some(oracle.theta(delta));
    let best = best_quadratic_correlation(&f)?;
    let u3 = uk_norm(&f, 3)?;
    let accepted = best.magnitude >= oracle.theta(delta);
    Ok(json!({ "u3": u3, "theta": oracle.theta(delta), "accepted": accepted, "best": best }))
}

fn run_factor(ctx: &mut Ctx) -> Result<Value> {
    let factor = ctx.factor()?;
    let omega = ctx.args.growth.unwrap_or(GrowthFn::Constant { value: 2.0 });
    ctx.config.growth = Some(omega.to_string());
    let (d1, d2) = factor.complexity();
    let rank = if d2 == 0 { json!("+∞") } else { json!(factor_rank(&factor)?) };
    let stats = atom_statistics(&factor)?;
    let (reduced, trace) = rank_reduce_traced(&factor, |d| crate::decompose::Growth::eval(&omega, d))?;
    Ok(json!({
        "factor": factor,
        "complexity": [d1, d2],
        "rank": rank,
        "atom_statistics": stats,
        "reduced": reduced,
        "reduced_complexity": reduced.complexity(),
        "reductions": trace,
    }))
}

fn run_kvn(ctx: &mut Ctx) -> Result<Value> {
    let f = ctx.function()?;
    let delta = ctx.args.delta.unwrap_or(0.5);
    let method = ctx.args.method.unwrap_or(MethodArg::Quadratic);
    let oracle = OracleConfig::default();
    ctx.config.delta = Some(delta);
    ctx.config.method = Some(method_name(method));
    let dec = match method {
        MethodArg::Linear => {
            ctx.config.eta = Some(delta * delta / 2.0);
            linear_kvn(&f, delta)?
        }
        MethodArg::Quadratic => {
            ctx.config.theta = Some(oracle.theta(delta));
            ctx.config.increment_floor = Some(increment_floor(delta, &oracle));
            quadratic_kvn(&f, delta, &QuadraticFactor::trivial(*f.cfg()), &oracle)?
        }
        other => return Err(usage(format!("kvn accepts linear or quadratic, not {}", method_name(other)))),
    };
    Ok(serde_json::to_value(&dec)?)
}

fn run_regularity(ctx: &mut Ctx) -> Result<Value> {
    let f = ctx.function()?;
    let delta = ctx.args.delta.unwrap_or(0.5);
    let omega = ctx.args.growth.unwrap_or(GrowthFn::Exponential { base: 5.0, scale: 2.0 });
    let method = ctx.args.method.unwrap_or(MethodArg::Quadratic);
    let oracle = OracleConfig::default();
    ctx.config.delta = Some(delta);
    ctx.config.growth = Some(omega.to_string());
    ctx.config.method = Some(method_name(method));
    let trivial = QuadraticFactor::trivial(*f.cfg());
    let dec = match method {
        MethodArg::Quadratic => regularity(&f, delta, &omega, &trivial, &oracle)?,
        MethodArg::HighRank => {
            let omega1 = ctx.args.rank_growth.unwrap_or(GrowthFn::Constant { value: 2.0 });
            regularity_high_rank(&f, delta, &omega1, &omega, &trivial, &oracle)?
        }
        other => return Err(usage(format!("regularity accepts quadratic or high-rank, not {}", method_name(other)))),
    };
    Ok(serde_json::to_value(&dec)?)
}

fn run_bhk(ctx: &mut Ctx) -> Result<Value> {
    let set = ctx.set()?;
    let epsilon = ctx.args.epsilon.unwrap_or(0.1);
    ctx.config.epsilon = Some(epsilon);
    let options = BhkOptions {
        delta: ctx.args.delta,
        omega1: ctx.args.rank_growth,
        omega2: ctx.args.growth,
        oracle: OracleConfig::default(),
    };
    let report = bhk_experiment(&set, epsilon, &options)?;
    ctx.config.delta = Some(report.delta);
    ctx.config.growth = Some(report.omega2.to_string());
    Ok(serde_json::to_value(&report)?)
}

fn dispatch(command: Command, ctx: &mut Ctx) -> Result<(Value, bool, Option<String>)> {
    let value = match command {
        Command::Ft => run_ft(ctx)?,
        Command::Gowers => run_gowers(ctx)?,
        Command::Lambda => run_lambda(ctx)?,
        Command::Inverse => run_inverse(ctx)?,
        Command::Factor => run_factor(ctx)?,
        Command::Kvn => run_kvn(ctx)?,
        Command::Regularity => run_regularity(ctx)?,
        Command::Bhk => run_bhk(ctx)?,
        Command::Verify => {
            let trials = ctx.args.trials.unwrap_or(20);
            ctx.config.trials = Some(trials);
            let table = run_verify(ctx.args.n, ctx.args.seed, trials, ctx.config.budget)?;
            return Ok((serde_json::to_value(&table)?, table.passed, Some(table.render())));
        }
    };
    Ok((value, true, None))
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let args = cli.common;
    let config = RunConfig {
        command: command_name(cli.command).to_string(),
        n: args.n,
        seed: args.seed,
        delta: args.delta,
        epsilon: args.epsilon,
        eta: args.eta,
        growth: args.growth.map(|g| g.to_string()),
        budget: resolve_budget(args.budget)?,
        threads: args.threads,
        input: args.input.clone(),
        output: args.output.clone(),
        k: args.k,
        method: args.method.map(method_name),
        trials: args.trials,
        theta: None,
        increment_floor: None,
    };
    let mut ctx = Ctx { args, config, evaluations: None };
    let started = Instant::now();
    let (result, passed, text_table) = match ctx.args.threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| usage(format!("thread pool: {e}")))?;
            pool.install(|| dispatch(cli.command, &mut ctx))?
        }
        None => dispatch(cli.command, &mut ctx)?,
    };
    if let Some(table) = text_table {
        out.write_all(table.as_bytes())?;
    }
    let mut report = Report::new(ctx.config.clone(), result);
    report.metrics.evaluations = ctx.evaluations;
    if ctx.args.timings {
        report.metrics.wall_clock_seconds = Some(started.elapsed().as_secs_f64());
    }
    let text = to_json_string(&report)?;
    match &ctx.args.output {
        Some(p) => std::fs::write(p, &text)?,
        None if cli.command != Command::Verify => out.write_all(text.as_bytes())?,
        None => {}
    }
    Ok(if passed { EXIT_OK } else { EXIT_ASSERTION })
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code: 0 success, 1 assertion failure, 2 usage error.
pub fn run_with_output<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn cli_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_output(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
