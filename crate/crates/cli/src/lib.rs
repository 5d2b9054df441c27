//! Command-line front end: `solve`, `gen`, `export` and `verify` over JSON instances.
//!
//! Results are JSON lines on stdout, diagnostics go to stderr.
//! Exit codes: 0 success, 1 invalid input, 2 algorithm/problem mismatch,
//! 3 internal error or failed verification.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use robsel::adversary_continuous::{a2st_continuous, a2st_continuous_levels, arec_continuous_intervals, arec_continuous_levels};
use robsel::adversary_discrete::{a2st_discrete, arec_discrete};
use robsel::generator::{generate, GenParams};
use robsel::model::{instance_to_value, parse_instance, serialize_instance};
use robsel::oracle::{oracle_adversarial_continuous, oracle_adversarial_discrete, oracle_incremental, oracle_robust};
use robsel::rational::{parse_rational, to_decimal};
use robsel::robust_continuous::{solve_r2st_continuous, solve_rrec_continuous};
use robsel::robust_discrete::{
    approx_nominal_rrec, approx_r2st, build_r2st_discrete_mip, build_rrec_discrete_mip, solve_exact_enumeration,
    special_cases, write_lp,
};
use robsel::selection::{solve_i2st, solve_irec};
use robsel::{BudgetModel, Error, Instance, Problem, Rational, Scenario, SelectionSolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProblemArg {
    Irec,
    I2st,
    Arec,
    A2st,
    Rrec,
    R2st,
}

impl From<ProblemArg> for Problem {
    fn from(p: ProblemArg) -> Self {
        match p {
            ProblemArg::Irec => Problem::Irec,
            ProblemArg::I2st => Problem::I2st,
            ProblemArg::Arec => Problem::Arec,
            ProblemArg::A2st => Problem::A2st,
            ProblemArg::Rrec => Problem::Rrec,
            ProblemArg::R2st => Problem::R2st,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Auto,
    Intervals,
    Levels,
    Lp,
    Enum,
    Approx,
    Oracle,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Auto => "auto",
            Algorithm::Intervals => "intervals",
            Algorithm::Levels => "levels",
            Algorithm::Lp => "lp",
            Algorithm::Enum => "enum",
            Algorithm::Approx => "approx",
            Algorithm::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Continuous,
    Discrete,
}

impl From<ModelArg> for BudgetModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Continuous => BudgetModel::Continuous,
            ModelArg::Discrete => BudgetModel::Discrete,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "robsel", version, about = "Exact robust selection solvers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance and print a JSON result line.
    Solve(SolveArgs),
    /// Write a seeded random instance.
    Gen(GenArgs),
    /// Write the discrete MIP of an instance in LP file format.
    Export(ExportArgs),
    /// Compare an algorithm against the brute-force oracle.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub problem: ProblemArg,
    #[arg(long, default_value = "auto")]
    pub algorithm: Algorithm,
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// First-stage items for the incremental and adversarial problems, 1-based and comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Scenario deviations for the incremental problems, comma separated (default: nominal).
    #[arg(long)]
    pub scenario: Option<String>,
    /// Ratio for `--algorithm approx` (default: the largest one the instance satisfies).
    #[arg(long)]
    pub alpha: Option<String>,
}

#[derive(Debug, Args, Clone)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub k: usize,
    /// Defaults to ⌈n/4⌉ (discrete) or ⌈Σd/4⌉ (continuous).
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long, default_value = "discrete")]
    pub budget_model: ModelArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Inclusive `lo:hi` range of the first-stage costs.
    #[arg(long, default_value = "0:20")]
    pub first_stage_range: String,
    #[arg(long, default_value = "0:20")]
    pub nominal_range: String,
    #[arg(long, default_value = "0:20")]
    pub deviation_range: String,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub problem: ProblemArg,
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub problem: ProblemArg,
    #[arg(long, default_value = "auto")]
    pub algorithm: Algorithm,
    /// Verify a single instance file instead of generated ones.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    /// Fixed `p`; by default it varies with the seed.
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long, default_value = "discrete")]
    pub budget_model: ModelArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "0:20")]
    pub first_stage_range: String,
    #[arg(long, default_value = "0:20")]
    pub nominal_range: String,
    #[arg(long, default_value = "0:20")]
    pub deviation_range: String,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// An error with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn invalid(m: impl Into<String>) -> Self {
        CliError { code: 1, message: m.into() }
    }

    pub fn mismatch(m: impl Into<String>) -> Self {
        CliError { code: 2, message: m.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::WrongBudgetModel { .. } | Error::TrivialCase => 2,
            Error::Internal(_) => 3,
            _ => 1,
        };
        CliError { code, message: e.to_string() }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Parses the arguments and runs the command. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    let res = match cli.command {
        Command::Solve(a) => cmd_solve(&a).and_then(|v| emit(a.output.as_deref(), &format!("{v}\n"), out)),
        Command::Gen(a) => cmd_gen(&a).and_then(|s| emit(a.output.as_deref(), &format!("{s}\n"), out)),
        Command::Export(a) => cmd_export(&a).and_then(|s| emit(a.output.as_deref(), &s, out)),
        Command::Verify(a) => cmd_verify(&a).and_then(|r| {
            let text = format!("{}\n", r.to_json());
            emit(a.output.as_deref(), &text, out)?;
            if r.is_equal() {
                Ok(())
            } else {
                Err(CliError { code: 3, message: "verification found a counterexample".into() })
            }
        }),
    };
    match res {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code
        }
    }
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::invalid(format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::invalid(format!("cannot write output: {e}"))),
    }
}

pub fn read_instance(path: &Path) -> CliResult<Instance> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::invalid(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_instance(&text)?)
}

/// `1,3,4` (1-based) into a first stage. An empty string is the empty set.
pub fn parse_items(inst: &Instance, text: &str) -> CliResult<SelectionSolution> {
    let mut items = Vec::new();
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let i: usize = tok.parse().map_err(|_| CliError::invalid(format!("bad item index {tok:?}")))?;
        if i == 0 || i > inst.n {
            return Err(CliError::invalid(format!("item index {i} outside 1..={}", inst.n)));
        }
        items.push(i - 1);
    }
    let mut sorted = items.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != items.len() {
        return Err(CliError::invalid("repeated item index in --x"));
    }
    Ok(SelectionSolution::from_items(&sorted, &inst.first_stage_cost))
}

pub fn parse_scenario(inst: &Instance, text: &str) -> CliResult<Scenario> {
    let deltas = text
        .split(',')
        .map(|t| parse_rational(t.trim()).ok_or_else(|| CliError::invalid(format!("bad deviation {t:?}"))))
        .collect::<CliResult<Vec<_>>>()?;
    let s = Scenario { deltas };
    s.check(inst)?;
    Ok(s)
}

fn parse_range(name: &str, text: &str) -> CliResult<(u64, u64)> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| CliError::invalid(format!("{name}: expected lo:hi, got {text:?}")))?;
    let p = |s: &str| s.trim().parse::<u64>().map_err(|_| CliError::invalid(format!("{name}: bad bound {s:?}")));
    Ok((p(a)?, p(b)?))
}

fn parse_gamma(text: &Option<String>) -> CliResult<Option<Rational>> {
    text.as_ref()
        .map(|g| parse_rational(g).ok_or_else(|| CliError::invalid(format!("bad gamma {g:?}"))))
        .transpose()
}

/// Which algorithms apply to a (problem, budget model) pair. `Auto` is always allowed.
pub fn algorithm_allowed(problem: Problem, model: BudgetModel, alg: Algorithm) -> bool {
    use Algorithm::*;
    if matches!(alg, Auto | Oracle) {
        return true;
    }
    match (problem, model) {
        (Problem::Irec | Problem::I2st, _) => false,
        (Problem::Arec | Problem::A2st, BudgetModel::Continuous) => matches!(alg, Intervals | Levels | Lp),
        (Problem::Arec | Problem::A2st, BudgetModel::Discrete) => false,
        (Problem::Rrec | Problem::R2st, BudgetModel::Continuous) => alg == Enum,
        (Problem::Rrec | Problem::R2st, BudgetModel::Discrete) => matches!(alg, Enum | Approx),
    }
}

/// The answer of one solver call.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub value: Rational,
    pub method: String,
    /// First stage (robust problems) or second stage (incremental problems).
    pub witness: Option<SelectionSolution>,
    pub worst: Option<Scenario>,
    pub ratio: Option<Rational>,
}

impl Outcome {
    fn plain(value: Rational, method: &str) -> Self {
        Outcome { value, method: method.into(), witness: None, worst: None, ratio: None }
    }
}

/// Largest `α` with `c̲_i ≥ α c̄_i` for every item.
pub fn default_alpha(inst: &Instance) -> Rational {
    let one = Rational::from_integer(1.into());
    (0..inst.n)
        .filter(|&i| inst.upper(i) > Rational::from_integer(0.into()))
        .map(|i| &inst.nominal_cost[i] / inst.upper(i))
        .fold(one, |a, b| a.min(b))
}

/// Runs one algorithm. `x` is required for the incremental and adversarial problems.
pub fn solve_with(
    inst: &Instance,
    problem: Problem,
    alg: Algorithm,
    x: Option<&SelectionSolution>,
    scen: Option<&Scenario>,
    alpha: Option<&Rational>,
) -> CliResult<Outcome> {
    if !algorithm_allowed(problem, inst.budget_model, alg) {
        return Err(CliError::mismatch(format!(
            "algorithm {} does not apply to {} with a {} budget",
            alg.as_str(),
            problem.as_str(),
            inst.budget_model.as_str()
        )));
    }
    let need_x = || x.ok_or_else(|| CliError::invalid(format!("{} needs a first stage (--x)", problem.as_str())));
    let discrete = inst.is_discrete();
    let adv = |(v, s): (Rational, Scenario), method: &str| Outcome { worst: Some(s), ..Outcome::plain(v, method) };
    let out = match problem {
        Problem::Irec | Problem::I2st => {
            let x = need_x()?;
            let nominal = Scenario::nominal(inst.n);
            let scen = scen.unwrap_or(&nominal);
            if alg == Algorithm::Oracle {
                let r = oracle_incremental(inst, x, scen, problem)?;
                Outcome { witness: r.witness_y, ..Outcome::plain(r.value, "oracle") }
            } else {
                let y = if problem == Problem::Irec { solve_irec(inst, x, scen)? } else { solve_i2st(inst, x, scen)? };
                Outcome { value: y.value.clone(), witness: Some(y), ..Outcome::plain(Rational::default(), "greedy") }
            }
        }
        Problem::Arec | Problem::A2st => {
            let x = need_x()?;
            let rec = problem == Problem::Arec;
            match (alg, discrete) {
                (Algorithm::Oracle, true) => {
                    let r = oracle_adversarial_discrete(inst, x, problem)?;
                    Outcome { worst: r.witness_scenario, ..Outcome::plain(r.value, "oracle") }
                }
                (Algorithm::Oracle | Algorithm::Lp, false) => {
                    let r = oracle_adversarial_continuous(inst, x, problem)?;
                    Outcome { worst: r.witness_scenario, ..Outcome::plain(r.value, "lp") }
                }
                (_, true) if rec => adv(arec_discrete(inst, x)?, "candidates"),
                (_, true) => adv(a2st_discrete(inst, x)?, "candidates"),
                (Algorithm::Levels, false) if rec => adv(arec_continuous_levels(inst, x)?, "levels"),
                (Algorithm::Levels, false) => adv(a2st_continuous_levels(inst, x)?, "levels"),
                (_, false) if rec => adv(arec_continuous_intervals(inst, x)?, "intervals"),
                (_, false) => adv(a2st_continuous(inst, x)?, "intervals"),
            }
        }
        Problem::Rrec | Problem::R2st => {
            let found = |(x, v): (SelectionSolution, Rational), method: &str| Outcome {
                witness: Some(x),
                ..Outcome::plain(v, method)
            };
            match alg {
                Algorithm::Oracle => {
                    let r = oracle_robust(inst, problem)?;
                    let x = r.witness_x.clone();
                    Outcome { witness: x, ..Outcome::plain(r.value, "oracle") }
                }
                Algorithm::Enum => found(solve_exact_enumeration(inst, problem)?, "enum"),
                Algorithm::Approx => {
                    let a = alpha.cloned().unwrap_or_else(|| default_alpha(inst));
                    let r = if problem == Problem::Rrec { approx_nominal_rrec(inst, &a)? } else { approx_r2st(inst, &a)? };
                    Outcome { ratio: Some(r.ratio), ..found((r.x, r.value), "approx") }
                }
                _ if !discrete && problem == Problem::Rrec => found(solve_rrec_continuous(inst)?, "cells"),
                _ if !discrete => found(solve_r2st_continuous(inst)?, "cells"),
                _ => match special_cases(inst, problem)? {
                    Some((x, v, tag)) => found((x, v), tag.as_str()),
                    None => found(solve_exact_enumeration(inst, problem)?, "enum"),
                },
            }
        }
    };
    Ok(out)
}

/// Exact `p/q` text (plain integer when `q = 1`).
pub fn fraction(v: &Rational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

fn one_based(s: &SelectionSolution) -> Value {
    Value::Array(s.items.iter().map(|&i| json!(i + 1)).collect())
}

pub fn cmd_solve(a: &SolveArgs) -> CliResult<Value> {
    let inst = read_instance(&a.instance)?;
    let problem: Problem = a.problem.into();
    let x = a.x.as_deref().map(|t| parse_items(&inst, t)).transpose()?;
    let scen = a.scenario.as_deref().map(|t| parse_scenario(&inst, t)).transpose()?;
    let alpha = parse_gamma(&a.alpha)?;
    let start = Instant::now();
    let o = solve_with(&inst, problem, a.algorithm, x.as_ref(), scen.as_ref(), alpha.as_ref())?;
    let ms = start.elapsed().as_secs_f64() * 1000.0;
    let mut rec = json!({
        "problem": problem.as_str(),
        "algorithm": a.algorithm.as_str(),
        "method": o.method,
        "value": fraction(&o.value),
        "value_decimal": to_decimal(&o.value, 6),
    });
    let m = rec.as_object_mut().expect("object");
    if let Some(w) = &o.witness {
        m.insert("witness".into(), one_based(w));
    }
    if let Some(s) = &o.worst {
        m.insert("worst_scenario".into(), Value::Array(s.deltas.iter().map(|d| json!(fraction(d))).collect()));
    }
    if let Some(r) = &o.ratio {
        m.insert("ratio".into(), json!(fraction(r)));
    }
    m.insert("wall_time_ms".into(), json!((ms * 1000.0).round() / 1000.0));
    Ok(rec)
}

fn gen_params(
    n: usize,
    p: usize,
    k: usize,
    gamma: Option<Rational>,
    model: ModelArg,
    seed: u64,
    ranges: [&str; 3],
) -> CliResult<GenParams> {
    let mut g = GenParams::new(n, p, k, model.into(), seed);
    g.gamma = gamma;
    g.first_stage = parse_range("first-stage-range", ranges[0])?;
    g.nominal = parse_range("nominal-range", ranges[1])?;
    g.deviation = parse_range("deviation-range", ranges[2])?;
    Ok(g)
}

pub fn cmd_gen(a: &GenArgs) -> CliResult<String> {
    let g = gen_params(
        a.n,
        a.p,
        a.k,
        parse_gamma(&a.gamma)?,
        a.budget_model,
        a.seed,
        [&a.first_stage_range, &a.nominal_range, &a.deviation_range],
    )?;
    Ok(serialize_instance(&generate(&g)?))
}

pub fn cmd_export(a: &ExportArgs) -> CliResult<String> {
    let inst = read_instance(&a.instance)?;
    let m = match a.problem {
        ProblemArg::Rrec => build_rrec_discrete_mip(&inst)?,
        ProblemArg::R2st => build_r2st_discrete_mip(&inst)?,
        other => {
            return Err(CliError::mismatch(format!("export supports rrec and r2st, not {}", Problem::from(other).as_str())))
        }
    };
    Ok(write_lp(&m))
}

/// One instance to check.
#[derive(Debug, Clone)]
pub struct Case {
    pub seed: u64,
    pub instance: Instance,
}

/// Result of [`verify_cases`].
#[derive(Debug, Clone)]
pub enum VerifyReport {
    Equal { instances: usize, checks: usize },
    Counterexample { seed: u64, instance: Instance, x: Option<SelectionSolution>, algorithm: String, oracle: String },
}

impl VerifyReport {
    pub fn is_equal(&self) -> bool {
        matches!(self, VerifyReport::Equal { .. })
    }

    pub fn to_json(&self) -> Value {
        match self {
            VerifyReport::Equal { instances, checks } => json!({"status": "EQUAL", "instances": instances, "checks": checks}),
            VerifyReport::Counterexample { seed, instance, x, algorithm, oracle } => json!({
                "status": "COUNTEREXAMPLE",
                "seed": seed,
                "instance": instance_to_value(instance),
                "x": x.as_ref().map(one_based),
                "algorithm_value": algorithm,
                "oracle_value": oracle,
            }),
        }
    }
}

/// First stages to try for the incremental and adversarial problems: every feasible
/// set when there are at most `limit`, else a seeded sample.
pub fn sample_first_stages(inst: &Instance, problem: Problem, seed: u64, limit: usize) -> Vec<SelectionSolution> {
    let sizes: Vec<usize> = if problem.recoverable() { vec![inst.p] } else { (0..=inst.p).collect() };
    let mut all: Vec<Vec<usize>> = Vec::new();
    for s in sizes {
        let mut cur: Vec<usize> = (0..s).collect();
        loop {
            all.push(cur.clone());
            // Next combination in lexicographic order.
            let Some(i) = (0..s).rev().find(|&i| cur[i] < inst.n - s + i) else { break };
            cur[i] += 1;
            for j in i + 1..s {
                cur[j] = cur[j - 1] + 1;
            }
            if all.len() > 4096 {
                break;
            }
        }
    }
    if all.len() > limit {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        all.shuffle(&mut rng);
        all.truncate(limit);
        all.sort();
    }
    all.iter().map(|items| SelectionSolution::from_items(items, &inst.first_stage_cost)).collect()
}

/// A scenario for the incremental checks: nominal for even seeds, otherwise the
/// budget is spent on the items in index order.
pub fn sample_scenario(inst: &Instance, seed: u64) -> Scenario {
    let mut s = Scenario::nominal(inst.n);
    if seed % 2 == 0 {
        return s;
    }
    let mut left = inst.gamma.clone();
    let zero = Rational::from_integer(0.into());
    let one = Rational::from_integer(1.into());
    for i in 0..inst.n {
        if left <= zero {
            break;
        }
        let d = &inst.deviation[i];
        match inst.budget_model {
            BudgetModel::Continuous => {
                let t = d.clone().min(left.clone());
                left -= &t;
                s.deltas[i] = t;
            }
            BudgetModel::Discrete => {
                if left >= one {
                    s.deltas[i] = d.clone();
                    left -= &one;
                }
            }
        }
    }
    s
}

/// The oracle value matching `problem`.
pub fn oracle_value(inst: &Instance, problem: Problem, x: Option<&SelectionSolution>, scen: &Scenario) -> CliResult<Rational> {
    let need = || x.ok_or_else(|| CliError::invalid("missing first stage"));
    Ok(match problem {
        Problem::Irec | Problem::I2st => oracle_incremental(inst, need()?, scen, problem)?.value,
        Problem::Arec | Problem::A2st if inst.is_discrete() => oracle_adversarial_discrete(inst, need()?, problem)?.value,
        Problem::Arec | Problem::A2st => oracle_adversarial_continuous(inst, need()?, problem)?.value,
        Problem::Rrec | Problem::R2st => oracle_robust(inst, problem)?.value,
    })
}

/// Solver under test: `(instance, first stage, scenario) -> value`.
pub type Solver<'a> = dyn Fn(&Instance, Option<&SelectionSolution>, &Scenario) -> CliResult<Rational> + 'a;

/// Checks `solver` against the oracle on every case. Stops at the first disagreement.
pub fn verify_cases(cases: &[Case], problem: Problem, solver: &Solver<'_>) -> CliResult<VerifyReport> {
    let mut checks = 0usize;
    let mut sorted: Vec<&Case> = cases.iter().collect();
    sorted.sort_by_key(|c| c.seed);
    for case in sorted {
        let inst = &case.instance;
        let scen = sample_scenario(inst, case.seed);
        let xs: Vec<Option<SelectionSolution>> = match problem {
            Problem::Rrec | Problem::R2st => vec![None],
            _ => sample_first_stages(inst, problem, case.seed, 24).into_iter().map(Some).collect(),
        };
        for x in xs {
            checks += 1;
            let want = oracle_value(inst, problem, x.as_ref(), &scen)?;
            let got = solver(inst, x.as_ref(), &scen);
            let agree = matches!(&got, Ok(v) if *v == want);
            if !agree {
                let algorithm = match got {
                    Ok(v) => fraction(&v),
                    Err(e) => format!("error: {e}"),
                };
                return Ok(VerifyReport::Counterexample {
                    seed: case.seed,
                    instance: inst.clone(),
                    x,
                    algorithm,
                    oracle: fraction(&want),
                });
            }
        }
    }
    Ok(VerifyReport::Equal { instances: cases.len(), checks })
}

pub fn cmd_verify(a: &VerifyArgs) -> CliResult<VerifyReport> {
    let problem: Problem = a.problem.into();
    let cases: Vec<Case> = match &a.instance {
        Some(path) => vec![Case { seed: a.seed, instance: read_instance(path)? }],
        None => {
            if a.n == 0 {
                return Err(CliError::invalid("n must be at least 1"));
            }
            let gamma = parse_gamma(&a.gamma)?;
            (0..a.count as u64)
                .map(|i| {
                    let seed = a.seed + i;
                    let p = a.p.unwrap_or(1 + (seed as usize) % a.n);
                    let k = a.k.unwrap_or((seed as usize / a.n) % (p + 1));
                    let g = gen_params(
                        a.n,
                        p,
                        k,
                        gamma.clone(),
                        a.budget_model,
                        seed,
                        [&a.first_stage_range, &a.nominal_range, &a.deviation_range],
                    )?;
                    Ok(Case { seed, instance: generate(&g)? })
                })
                .collect::<CliResult<_>>()?
        }
    };
    if let Some(c) = cases.first() {
        if !algorithm_allowed(problem, c.instance.budget_model, a.algorithm) {
            return Err(CliError::mismatch(format!(
                "algorithm {} does not apply to {} with a {} budget",
                a.algorithm.as_str(),
                problem.as_str(),
                c.instance.budget_model.as_str()
            )));
        }
    }
    let alg = a.algorithm;
    let solver = move |inst: &Instance, x: Option<&SelectionSolution>, scen: &Scenario| -> CliResult<Rational> {
        Ok(solve_with(inst, problem, alg, x, Some(scen), None)?.value)
    };
    verify_cases(&cases, problem, &solver)
}
