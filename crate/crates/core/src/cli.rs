//! The `lap` command line.
//!
//! Every subcommand is a pure function of its flags: identical flags and
//! seed give identical bytes. Exit status is 0 on success, 1 when a
//! verification finds a counterexample, 2 on usage or input errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::random::{
    random_prior, random_prior_with, random_step, subcritical_instances_from, lambda_grid,
    PriorShape,
};
use crate::analysis::{
    check_lambda_patience, check_prepend_bound, check_suffix_append, construction_checks,
    exact_outcome, monte_carlo, ratio_report, sample_representation, verify_online_bound,
    verify_prophet_bound, CounterexampleReport, ReportRow,
};
use crate::error::{Error, Result};
use crate::instances::{
    alternating_geometric, alternating_linear, growth_exponents, det_to_iid, dominance_pair,
    identical_value, iid_from_sequence, inversion_probability, partial_sums, quality_pair,
    representation_match_probability, representation_miss_bound, salient_feature, tightness_rows,
    worstcase_mixed, worstcase_mixed_unchecked, LogBase,
};
use crate::model::{
    prior_from_json, prior_or_sequence_from_json, prior_to_json, sequence_from_json,
    sequence_to_json, vector_from_json, vector_to_json, AgentParams, ProductPrior, Regime, Sequence,
};
use crate::policies::{PolicySpec, DEFAULT_STATE_BUDGET};
use crate::scalar::{Rational, Scalar};

/// Environment variable that overrides the default state budget.
pub const BUDGET_ENV: &str = "LAP_BUDGET_STATES";

/// Prophet inequalities under comparative loss aversion.
#[derive(Parser, Debug)]
#[command(name = "lap", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Emit an instance as JSON.
    Generate {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Exact expected utility of a policy on a prior.
    Evaluate {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        policy: PolicyArgs,
        /// Include the decision table of optimal policies.
        #[arg(long)]
        table: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Prophet and online utility ratios of one instance.
    Ratio {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Number of random instances.
        #[arg(long)]
        count: Option<usize>,
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Ratios over a grid of λ, k and optionally n.
    Sweep {
        /// start:stop:step, inclusive.
        #[arg(long)]
        lambda_grid: String,
        /// start:stop[:step], inclusive.
        #[arg(long)]
        k_grid: String,
        /// start:stop[:step], inclusive; overrides --n per cell.
        #[arg(long)]
        n_grid: Option<String>,
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Seeded Monte Carlo estimate of a policy's expected utility.
    MonteCarlo {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        policy: PolicyArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Deterministic-to-i.i.d. reduction of a sequence.
    Reduce {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Horizon of the emitted prior instead of the nominal one.
        #[arg(long = "n-override")]
        n_override: Option<usize>,
        /// Use this atom-decay parameter instead of the derived one.
        #[arg(long)]
        x: Option<String>,
        #[arg(long, value_enum, default_value_t = LogBaseArg::Natural)]
        log_base: LogBaseArg,
        /// Include the reduced prior in the output.
        #[arg(long)]
        emit_prior: bool,
        /// Sampled horizons when --seed is given.
        #[arg(long)]
        trials: Option<u64>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args, Debug, Clone, Default)]
pub struct InstanceArgs {
    /// Generator name.
    #[arg(long = "gen", value_enum)]
    pub generator: Option<Generator>,
    /// JSON sequence or prior file instead of a generator.
    #[arg(long, conflicts_with = "generator")]
    pub input: Option<PathBuf>,
    /// Number of candidates
    #[arg(long)]
    pub n: Option<usize>,
    /// Dimension of the value vectors
    #[arg(long)]
    pub k: Option<usize>,
    /// Loss aversion λ.
    #[arg(long)]
    pub lambda: Option<String>,
    /// Growth ratio; defaults to λ(k−1).
    #[arg(long)]
    pub beta: Option<String>,
    /// Slack ε of the tightness and reduction constructions
    #[arg(long)]
    pub eps: Option<String>,
    /// Rows of the partial-sum constructions; defaults to the smallest w with β^w ≤ ε.
    #[arg(long)]
    pub w: Option<usize>,
    /// Common value q of the behavioral constructions
    #[arg(long)]
    pub q: Option<String>,
    /// Salient-feature bonus a
    #[arg(long)]
    pub a: Option<String>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct PolicyArgs {
    /// Policy as inline JSON or a path to a JSON file.
    #[arg(long)]
    pub policy: Option<String>,
    /// Shorthand for a threshold policy with this selection probability.
    #[arg(long, conflicts_with = "policy")]
    pub alpha: Option<String>,
    #[arg(long)]
    pub trials: Option<u64>,
}

#[derive(Args, Debug, Clone, Default)]
#[command(group(ArgGroup::new("mode").args(["exact", "float"])))]
pub struct CommonArgs {
    /// Seed for random instances, randomized policies and sampling
    #[arg(long)]
    pub seed: Option<u64>,
    /// Exact rational arithmetic (default).
    #[arg(long)]
    pub exact: bool,
    /// Floating-point arithmetic.
    #[arg(long)]
    pub float: bool,
    /// State and enumeration budget; also read from LAP_BUDGET_STATES.
    #[arg(long)]
    pub budget_states: Option<u64>,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    AlternatingGeometric,
    AlternatingLinear,
    PartialSums,
    WorstcaseMixed,
    IdenticalValue,
    SalientFeature,
    QualityPair,
    DominancePair,
    /// Seeded random small prior.
    Random,
}

impl Generator {
    fn name(self) -> &'static str {
        match self {
            Generator::AlternatingGeometric => "alternating-geometric",
            Generator::AlternatingLinear => "alternating-linear",
            Generator::PartialSums => "partial-sums",
            Generator::WorstcaseMixed => "worstcase-mixed",
            Generator::IdenticalValue => "identical-value",
            Generator::SalientFeature => "salient-feature",
            Generator::QualityPair => "quality-pair",
            Generator::DominancePair => "dominance-pair",
            Generator::Random => "random",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Bounds,
    Monotonicity,
    Constructions,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogBaseArg {
    Natural,
    Two,
}

impl From<LogBaseArg> for LogBase {
    fn from(b: LogBaseArg) -> Self {
        match b {
            LogBaseArg::Natural => LogBase::Natural,
            LogBaseArg::Two => LogBase::Two,
        }
    }
}

/// Parses `std::env::args` and runs.
pub fn main() -> ExitCode {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli.command) {
        Ok(Outcome::Passed) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Counterexample(_) => 1,
                _ => 2,
            })
        }
    }
}

/// Whether every verification in the run held.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Passed,
    Failed,
}

/// Runs a parsed command, writing its report to `--out` or stdout.
pub fn run(command: &Command) -> Result<Outcome> {
    let common = common_of(command);
    let (text, outcome) = if common.float {
        render::<f64>(command)?
    } else {
        render::<Rational>(command)?
    };
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(outcome)
}

fn common_of(command: &Command) -> &CommonArgs {
    match command {
        Command::Generate { common, .. }
        | Command::Evaluate { common, .. }
        | Command::Ratio { common, .. }
        | Command::Verify { common, .. }
        | Command::Sweep { common, .. }
        | Command::MonteCarlo { common, .. }
        | Command::Reduce { common, .. } => common,
    }
}

/// Budget from the flag, then the environment, then the default.
pub fn resolve_budget(flag: Option<u64>) -> Result<u64> {
    let budget = match flag {
        Some(b) => b,
        None => match std::env::var(BUDGET_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("{BUDGET_ENV} is not a positive integer: {v:?}")))?,
            Err(_) => DEFAULT_STATE_BUDGET,
        },
    };
    if budget == 0 {
        return Err(Error::invalid("budget must be positive"));
    }
    Ok(budget)
}

fn render<N: Scalar>(command: &Command) -> Result<(String, Outcome)> {
    let common = common_of(command);
    let budget = resolve_budget(common.budget_states)?;
    match command {
        Command::Generate { instance, common } => {
            require_json(common, "generate")?;
            let built = build::<N>(instance, common.seed, false)?;
            Ok((pretty(&built.to_json()), Outcome::Passed))
        }
        Command::Evaluate {
            instance,
            policy,
            table,
            common,
        } => evaluate::<N>(instance, policy, *table, common, budget),
        Command::Ratio { instance, common } => {
            let built = build::<N>(instance, common.seed, false)?;
            let prior = built.prior()?;
            let params = agent::<N>(instance, prior.k())?;
            let report = ratio_report(prior, &params, budget)?;
            let row = ReportRow::new(&report, &params, prior.n(), built.id.clone(), common.seed);
            Ok((rows_out(&[row], common.format)?, Outcome::Passed))
        }
        Command::Verify {
            suite,
            count,
            instance,
            common,
        } => verify::<N>(*suite, *count, instance, common, budget),
        Command::Sweep {
            lambda_grid,
            k_grid,
            n_grid,
            instance,
            common,
        } => sweep::<N>(lambda_grid, k_grid, n_grid.as_deref(), instance, common, budget),
        Command::MonteCarlo {
            instance,
            policy,
            common,
        } => monte::<N>(instance, policy, common, budget),
        Command::Reduce {
            instance,
            n_override,
            x,
            log_base,
            emit_prior,
            trials,
            common,
        } => reduce::<N>(
            instance,
            *n_override,
            x.as_deref(),
            (*log_base).into(),
            *emit_prior,
            *trials,
            common,
            budget,
        ),
    }
}

enum Instance<N> {
    Prior(ProductPrior<N>),
    Pair(Sequence<N>, Sequence<N>),
}

struct Built<N> {
    instance: Instance<N>,
    id: String,
}

impl<N: Scalar> Built<N> {
    fn prior(&self) -> Result<&ProductPrior<N>> {
        match &self.instance {
            Instance::Prior(p) => Ok(p),
            Instance::Pair(..) => Err(Error::invalid(format!(
                "{} yields a pair of sequences, not a single instance",
                self.id
            ))),
        }
    }

    fn to_json(&self) -> Value {
        match &self.instance {
            Instance::Prior(p) => match p.as_sequence() {
                Some(s) => sequence_to_json(&s),
                None => prior_to_json(p),
            },
            Instance::Pair(a, b) => json!({ "a": sequence_to_json(a), "b": sequence_to_json(b) }),
        }
    }
}

fn num<N: Scalar>(value: &Option<String>, flag: &str) -> Result<N> {
    match value {
        Some(text) => N::parse(text),
        None => Err(Error::invalid(format!("--{flag} is required"))),
    }
}

fn need(value: Option<usize>, flag: &str) -> Result<usize> {
    value.ok_or_else(|| Error::invalid(format!("--{flag} is required")))
}

fn agent<N: Scalar>(args: &InstanceArgs, k: usize) -> Result<AgentParams<N>> {
    if let Some(flag_k) = args.k {
        if flag_k != k {
            return Err(Error::invalid(format!("--k {flag_k} does not match the instance's k={k}")));
        }
    }
    AgentParams::new(num(&args.lambda, "lambda")?, k)
}

/// --beta, or λ(k−1) when only --lambda is given.
fn beta<N: Scalar>(args: &InstanceArgs, k: usize) -> Result<N> {
    match (&args.beta, &args.lambda) {
        (Some(_), _) => num(&args.beta, "beta"),
        (None, Some(_)) => Ok(AgentParams::new(num::<N>(&args.lambda, "lambda")?, k)?.bias()),
        (None, None) => Err(Error::invalid("--beta or --lambda is required")),
    }
}

fn build<N: Scalar>(args: &InstanceArgs, seed: Option<u64>, unchecked: bool) -> Result<Built<N>> {
    if let Some(path) = &args.input {
        return Ok(Built {
            instance: load(path)?,
            id: path.display().to_string(),
        });
    }
    let generator = args
        .generator
        .ok_or_else(|| Error::invalid("one of --gen or --input is required"))?;
    let k = || need(args.k, "k");
    let single = |s: Sequence<N>| Instance::Prior(ProductPrior::deterministic(&s));
    let instance = match generator {
        Generator::AlternatingGeometric => {
            single(alternating_geometric(need(args.n, "n")?, k()?, &beta::<N>(args, k()?)?)?)
        }
        Generator::AlternatingLinear => single(alternating_linear(need(args.n, "n")?, k()?)?),
        Generator::PartialSums => single(partial_sums(need(args.w, "w")?, k()?, &beta::<N>(args, k()?)?)?),
        Generator::WorstcaseMixed => {
            let lambda: N = num(&args.lambda, "lambda")?;
            let eps: N = num(&args.eps, "eps")?;
            let w = match args.w {
                Some(w) => w,
                None => default_rows(&AgentParams::new(lambda.clone(), k()?)?.bias(), &eps)?,
            };
            Instance::Prior(if unchecked {
                worstcase_mixed_unchecked(w, k()?, &lambda, &eps)?
            } else {
                worstcase_mixed(w, k()?, &lambda, &eps)?
            })
        }
        Generator::IdenticalValue => single(identical_value(k()?, &num(&args.q, "q")?)?),
        Generator::SalientFeature => {
            single(salient_feature(k()?, &num(&args.a, "a")?, &num(&args.q, "q")?)?)
        }
        Generator::QualityPair => {
            let (a, b) = quality_pair(k()?, &num(&args.q, "q")?)?;
            Instance::Pair(a, b)
        }
        Generator::DominancePair => {
            let (a, b) = dominance_pair(
                k()?,
                need(args.n, "n")?,
                &num(&args.lambda, "lambda")?,
                &num(&args.eps, "eps")?,
            )?;
            Instance::Pair(a, b)
        }
        Generator::Random => {
            let seed = seed.ok_or_else(|| Error::invalid("--gen random needs --seed"))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let shape = PriorShape::default();
            let prior = match (args.n, args.k) {
                (None, None) => random_prior(&mut rng, &shape),
                (n, k) => random_prior_with(&mut rng, &shape, n.unwrap_or(shape.max_n), k.unwrap_or(2)),
            };
            Instance::Prior(convert(&prior)?)
        }
    };
    Ok(Built {
        instance,
        id: generator.name().to_string(),
    })
}

/// Rows for the tightness construction: ⌈log_β ε⌉ when 0 < β < 1, one row when β = 0.
fn default_rows<N: Scalar>(beta: &N, eps: &N) -> Result<usize> {
    if !beta.is_positive_tol() {
        return Ok(1);
    }
    if !N::one().tol_gt(beta) {
        return Err(Error::invalid(
            "--w is required when lambda*(k-1) >= 1",
        ));
    }
    tightness_rows(beta, eps)
}

fn convert<N: Scalar>(prior: &ProductPrior<Rational>) -> Result<ProductPrior<N>> {
    prior_from_json(&prior_to_json(prior))
}

fn load<N: Scalar>(path: &Path) -> Result<Instance<N>> {
    let text = std::fs::read_to_string(path)?;
    let value: Value = serde_json::from_str(&text)?;
    if let (Some(a), Some(b)) = (value.get("a"), value.get("b")) {
        return Ok(Instance::Pair(sequence_from_json(a)?, sequence_from_json(b)?));
    }
    Ok(Instance::Prior(prior_or_sequence_from_json(&value)?))
}

fn policy_spec(args: &PolicyArgs, seed: Option<u64>) -> Result<PolicySpec> {
    if let Some(alpha) = &args.alpha {
        return Ok(PolicySpec::Threshold {
            alpha: Some(Value::String(alpha.clone())),
            threshold: None,
            atom_accept_prob: None,
            seed,
        });
    }
    let spec: PolicySpec = match &args.policy {
        None => return Ok(PolicySpec::OptimalBiased { allow_no_selection: true }),
        Some(text) if text.trim_start().starts_with('{') => serde_json::from_str(text)?,
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
    };
    Ok(match spec {
        PolicySpec::Threshold {
            alpha,
            threshold,
            atom_accept_prob,
            seed: None,
        } => PolicySpec::Threshold {
            alpha,
            threshold,
            atom_accept_prob,
            seed,
        },
        other => other,
    })
}

fn evaluate<N: Scalar>(
    args: &InstanceArgs,
    policy_args: &PolicyArgs,
    table: bool,
    common: &CommonArgs,
    budget: u64,
) -> Result<(String, Outcome)> {
    require_json(common, "evaluate")?;
    let built = build::<N>(args, common.seed, false)?;
    let prior = built.prior()?;
    let params = agent::<N>(args, prior.k())?;
    let spec = policy_spec(policy_args, common.seed)?;
    let policy = spec.resolve(prior, &params, budget)?;
    let out = exact_outcome(prior, &policy, &params, budget)?;
    let mut report = json!({
        "instance": built.id,
        "lambda": params.lambda().render(),
        "k": params.k(),
        "n": prior.n(),
        "policy": serde_json::to_value(&spec)?,
        "expected_utility": out.utility.render(),
        "expected_value": out.value.render(),
        "selection_prob": out.selection_prob.render(),
    });
    if table {
        if let crate::policies::PolicyKind::OptimalBiased(dp) | crate::policies::PolicyKind::OptimalRational(dp) =
            &policy.kind
        {
            report["table"] = dp.to_json();
        }
    }
    Ok((pretty(&report), Outcome::Passed))
}

fn monte<N: Scalar>(
    args: &InstanceArgs,
    policy_args: &PolicyArgs,
    common: &CommonArgs,
    budget: u64,
) -> Result<(String, Outcome)> {
    let seed = common
        .seed
        .ok_or_else(|| Error::invalid("monte-carlo needs --seed"))?;
    let trials = policy_args
        .trials
        .ok_or_else(|| Error::invalid("monte-carlo needs --trials"))?;
    let built = build::<N>(args, Some(seed), false)?;
    let prior = built.prior()?;
    let params = agent::<N>(args, prior.k())?;
    let spec = policy_spec(policy_args, Some(seed))?;
    let policy = spec.resolve(prior, &params, budget)?;
    let est = monte_carlo(prior, &policy, &params, trials, seed)?;
    let exact = match exact_outcome(prior, &policy, &params, budget) {
        Ok(o) => Some(o.utility),
        Err(Error::ResourceLimit { .. }) => None,
        Err(e) => return Err(e),
    };
    #[derive(Serialize)]
    struct Row {
        instance: String,
        lambda: String,
        k: usize,
        n: usize,
        mean: f64,
        half_width: f64,
        trials: u64,
        seed: u64,
        exact: Option<String>,
    }
    let row = Row {
        instance: built.id.clone(),
        lambda: params.lambda().render(),
        k: params.k(),
        n: prior.n(),
        mean: est.mean,
        half_width: est.half_width,
        trials: est.trials,
        seed: est.seed,
        exact: exact.map(|e| e.render()),
    };
    Ok((rows_out(&[row], common.format)?, Outcome::Passed))
}

#[derive(Serialize)]
struct CheckTally {
    check: &'static str,
    passed: usize,
    failed: usize,
}

fn tally(tallies: &mut Vec<CheckTally>, check: &'static str, ok: bool) {
    let entry = match tallies.iter_mut().position(|t| t.check == check) {
        Some(i) => &mut tallies[i],
        None => {
            tallies.push(CheckTally { check, passed: 0, failed: 0 });
            tallies.last_mut().expect("just pushed")
        }
    };
    if ok {
        entry.passed += 1;
    } else {
        entry.failed += 1;
    }
}

/// Records a check's result; counterexamples are collected, other errors abort.
fn record<T>(
    tallies: &mut Vec<CheckTally>,
    failures: &mut Vec<CounterexampleReport>,
    check: &'static str,
    result: Result<T>,
) -> Result<()> {
    match result {
        Ok(_) => tally(tallies, check, true),
        Err(Error::Counterexample(report)) => {
            tally(tallies, check, false);
            failures.push(*report);
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

fn verify<N: Scalar>(
    suite: Suite,
    count: Option<usize>,
    args: &InstanceArgs,
    common: &CommonArgs,
    budget: u64,
) -> Result<(String, Outcome)> {
    require_json(common, "verify")?;
    let mut tallies = Vec::new();
    let mut failures = Vec::new();
    let mut instances = 0usize;
    match suite {
        Suite::Bounds => {
            let cases: Vec<(ProductPrior<N>, AgentParams<N>)> =
                if args.generator.is_some() || args.input.is_some() {
                    let built = build::<N>(args, common.seed, false)?;
                    let prior = built.prior()?.clone();
                    let params = agent::<N>(args, prior.k())?;
                    vec![(prior, params)]
                } else {
                    let seed = common
                        .seed
                        .ok_or_else(|| Error::invalid("the bounds sweep needs --seed"))?;
                    let mut shape = PriorShape::default();
                    if let Some(k) = args.k {
                        shape.dims = vec![k];
                    }
                    let lambdas = match &args.lambda {
                        Some(text) => vec![Rational::parse(text)?],
                        None => lambda_grid(),
                    };
                    let drawn = subcritical_instances_from(seed, count.unwrap_or(200), &shape, &lambdas);
                    if drawn.is_empty() {
                        return Err(Error::invalid("no subcritical (lambda, k) pair in the requested range"));
                    }
                    drawn
                        .into_iter()
                        .map(|(p, l)| {
                            let prior = convert::<N>(&p)?;
                            let params = AgentParams::new(N::parse(&l.lambda().render())?, l.k())?;
                            Ok((prior, params))
                        })
                        .collect::<Result<_>>()?
                };
            for (prior, params) in &cases {
                instances += 1;
                record(&mut tallies, &mut failures, "offline guarantee", verify_prophet_bound(prior, params, budget))?;
                record(&mut tallies, &mut failures, "online guarantee", verify_online_bound(prior, params, budget))?;
            }
        }
        Suite::Monotonicity => {
            let seed = common
                .seed
                .ok_or_else(|| Error::invalid("the monotonicity sweep needs --seed"))?;
            let lambda: N = match &args.lambda {
                Some(text) => N::parse(text)?,
                None => N::from_ratio(1, 2),
            };
            let (low, high) = (N::from_ratio(1, 5), N::from_ratio(4, 5));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut shape = PriorShape::default();
            if let Some(k) = args.k {
                shape.dims = vec![k];
            }
            for _ in 0..count.unwrap_or(100) {
                instances += 1;
                let prior = random_prior(&mut rng, &shape);
                let extra = random_step(&mut rng, &shape, prior.k());
                let front = random_step(&mut rng, &shape, prior.k()).atoms()[0].value.clone();
                let sigma = prior.sequence_of(&prior.sample_indices(&mut rng));
                let prior_n = convert::<N>(&prior)?;
                let extra_n = convert::<N>(&ProductPrior::new(vec![extra])?)?.steps()[0].clone();
                let sigma_n: Sequence<N> = sequence_from_json(&sequence_to_json(&sigma))?;
                let front_n = vector_from_json(&vector_to_json(&front))?;
                let params = AgentParams::new(lambda.clone(), prior.k())?;
                record(
                    &mut tallies,
                    &mut failures,
                    "lambda-pair patience and value",
                    check_lambda_patience(&prior_n, &low, &high, budget),
                )?;
                record(
                    &mut tallies,
                    &mut failures,
                    "suffix append",
                    check_suffix_append(&prior_n, &[extra_n], &params, budget),
                )?;
                record(
                    &mut tallies,
                    &mut failures,
                    "prepend bound",
                    check_prepend_bound(&sigma_n, &front_n, &params),
                )?;
            }
        }
        Suite::Constructions => {
            for check in construction_checks(budget)? {
                instances += check.cases;
                for _ in 0..check.cases - check.failures.len() {
                    tally(&mut tallies, check.name, true);
                }
                for f in &check.failures {
                    tally(&mut tallies, check.name, false);
                    failures.push(CounterexampleReport {
                        check: check.name.to_string(),
                        lambda: String::new(),
                        k: 0,
                        lhs: f.clone(),
                        rhs: String::new(),
                        instance: Value::Null,
                    });
                }
            }
        }
    }
    let outcome = if failures.is_empty() {
        Outcome::Passed
    } else {
        Outcome::Failed
    };
    let report = json!({
        "suite": format!("{suite:?}").to_lowercase(),
        "seed": common.seed,
        "instances": instances,
        "checks": tallies,
        "counterexamples": failures,
        "passed": outcome == Outcome::Passed,
    });
    Ok((pretty(&report), outcome))
}

/// Inclusive `start:stop[:step]` grid of exact values.
pub fn parse_grid(text: &str, default_step: Option<&str>) -> Result<Vec<Rational>> {
    let parts: Vec<&str> = text.split(':').collect();
    let (start, stop, step) = match (parts.as_slice(), default_step) {
        ([a, b, s], _) => (*a, *b, *s),
        ([a, b], Some(s)) => (*a, *b, s),
        _ => return Err(Error::invalid(format!("grid {text:?} is not start:stop:step"))),
    };
    let (start, stop, step) = (Rational::parse(start)?, Rational::parse(stop)?, Rational::parse(step)?);
    if step <= Rational::from_int(0) {
        return Err(Error::invalid(format!("grid {text:?} needs a positive step")));
    }
    let mut out = Vec::new();
    let mut x = start;
    while x <= stop {
        out.push(x.clone());
        x += step.clone();
    }
    if out.is_empty() {
        return Err(Error::invalid(format!("grid {text:?} is empty")));
    }
    Ok(out)
}

fn grid_usize(text: &str) -> Result<Vec<usize>> {
    parse_grid(text, Some("1"))?
        .into_iter()
        .map(|v| {
            if !v.is_integer() || v < Rational::from_int(1) {
                return Err(Error::invalid(format!("grid {text:?} must hold positive integers")));
            }
            v.to_integer()
                .try_into()
                .map_err(|_| Error::invalid(format!("grid {text:?} is out of range")))
        })
        .collect()
}

/// A ratio row plus the closed-form subcritical ratio bounds.
#[derive(Serialize)]
struct SweepRow {
    lambda: String,
    k: usize,
    bias: String,
    n: usize,
    e_upr: String,
    e_ugr: String,
    e_ugb: String,
    prophet_ratio: String,
    online_ratio: String,
    regime: Regime,
    instance_id: String,
    seed: Option<u64>,
    /// (2+λ)/(1−λ(k−1)), empty outside the subcritical regime.
    prophet_bound: String,
    /// (1+λ)/(1−λ(k−1)), likewise.
    online_bound: String,
}

fn sweep<N: Scalar>(
    lambda_grid: &str,
    k_grid: &str,
    n_grid: Option<&str>,
    args: &InstanceArgs,
    common: &CommonArgs,
    budget: u64,
) -> Result<(String, Outcome)> {
    let lambdas = parse_grid(lambda_grid, None)?;
    let ks = grid_usize(k_grid)?;
    let ns: Vec<Option<usize>> = match n_grid {
        Some(g) => grid_usize(g)?.into_iter().map(Some).collect(),
        None => vec![args.n],
    };
    let mut cells = Vec::new();
    for lambda in &lambdas {
        for &k in &ks {
            for &n in &ns {
                cells.push((lambda.clone(), k, n));
            }
        }
    }
    let rows: Vec<SweepRow> = cells
        .par_iter()
        .map(|(lambda, k, n)| {
            let cell = InstanceArgs {
                lambda: Some(lambda.render()),
                k: Some(*k),
                n: *n,
                ..args.clone()
            };
            let built = build::<N>(&cell, common.seed, true)?;
            let prior = built.prior()?;
            let params = agent::<N>(&cell, prior.k())?;
            let r = ratio_report(prior, &params, budget)?;
            let row = ReportRow::new(&r, &params, prior.n(), built.id.clone(), common.seed);
            let one = N::one();
            let slack = one.clone() - params.bias();
            let (pb, ob) = if slack.is_positive_tol() {
                let l = params.lambda().clone();
                (
                    ((N::from_int(2) + l.clone()) / slack.clone()).render(),
                    ((one + l) / slack).render(),
                )
            } else {
                (String::new(), String::new())
            };
            Ok(SweepRow {
                lambda: row.lambda,
                k: row.k,
                bias: row.bias,
                n: row.n,
                e_upr: row.e_upr,
                e_ugr: row.e_ugr,
                e_ugb: row.e_ugb,
                prophet_ratio: row.prophet_ratio,
                online_ratio: row.online_ratio,
                regime: row.regime,
                instance_id: row.instance_id,
                seed: row.seed,
                prophet_bound: pb,
                online_bound: ob,
            })
        })
        .collect::<Result<_>>()?;
    Ok((rows_out(&rows, common.format)?, Outcome::Passed))
}

#[allow(clippy::too_many_arguments)]
fn reduce<N: Scalar>(
    args: &InstanceArgs,
    n_override: Option<usize>,
    x_override: Option<&str>,
    log_base: LogBase,
    emit_prior: bool,
    trials: Option<u64>,
    common: &CommonArgs,
    budget: u64,
) -> Result<(String, Outcome)> {
    require_json(common, "reduce")?;
    let built = build::<N>(args, common.seed, false)?;
    let sigma = built
        .prior()?
        .as_sequence()
        .ok_or_else(|| Error::invalid("the reduction needs a deterministic sequence"))?;
    let params = agent::<N>(args, sigma.k())?;
    let eps: N = num(&args.eps, "eps")?;
    let (mut prior, meta) = det_to_iid(&sigma, &params, &eps, n_override, budget, log_base)?;
    let x = match x_override {
        Some(text) => {
            let x = N::parse(text)?;
            prior = iid_from_sequence(&sigma, &x, meta.n)?;
            x
        }
        None => meta.x.clone(),
    };
    let probs: Vec<N> = prior.steps()[0].atoms().iter().map(|a| a.prob.clone()).collect();
    let mut report = json!({
        "instance": built.id,
        "m": meta.m,
        "x": x.render(),
        "x_source": if x_override.is_some() { "override" } else { "derived" },
        "alpha_exp": meta.alpha_exp,
        "nominal_n": meta.nominal_n.to_string(),
        "ln_nominal_n": meta.ln_nominal_n,
        "epsilon": meta.epsilon.render(),
        "log_base": format!("{log_base:?}").to_lowercase(),
        "n": meta.n,
        "atom_probabilities": probs.iter().map(Scalar::render).collect::<Vec<_>>(),
        "inversion_probability": inversion_probability(&x).render(),
        "match_probability": representation_match_probability(&probs, meta.n).to_f64(),
        "miss_union_bound": representation_miss_bound(meta.m, x.to_f64(), meta.n),
    });
    if params.bias().to_f64() > 1.0 {
        let ln_n = meta.ln_nominal_n;
        report["growth_exponents"] =
            serde_json::to_value(growth_exponents(params.lambda().to_f64(), params.k(), ln_n, log_base)?)?;
    }
    if let Some(seed) = common.seed {
        let trials = trials.unwrap_or(REDUCE_TRIALS);
        let sample = sample_representation(&prior, trials, seed)?;
        report["sampling"] = json!({
            "trials": trials,
            "seed": sample.seed,
            "match_frequency": sample.matched.frequency(),
            "inversion_frequencies": sample.inversions.iter().map(|p| p.frequency()).collect::<Vec<_>>(),
        });
    }
    if emit_prior {
        report["prior"] = prior_to_json(&prior);
    }
    Ok((pretty(&report), Outcome::Passed))
}

/// Default draws when `reduce` is given a seed.
const REDUCE_TRIALS: u64 = 100_000;

fn require_json(common: &CommonArgs, command: &str) -> Result<()> {
    if common.format == Format::Csv {
        return Err(Error::invalid(format!("{command} only emits JSON")));
    }
    Ok(())
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}

fn rows_out<T: Serialize>(rows: &[T], format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let value = serde_json::to_value(rows)?;
            Ok(pretty(&value))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.serialize(row)
                    .map_err(|e| Error::Parse(format!("csv: {e}")))?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| Error::Parse(format!("csv: {e}")))?;
            let mut out = String::from_utf8(bytes).expect("csv is utf-8");
            if out.is_empty() {
                let _ = writeln!(out);
            }
            Ok(out)
        }
    }
}
