//! Command-line front end.
//!
//! Exit codes: 0 success / property holds, 1 witness or violation found,
//! 2 usage or input error, 3 unknown (randomized search gave up).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::expansion::{
    certify_expansion_exact_with_limit, falsify_expansion_randomized, ExpanderParams, ExpansionCertificate,
    Method, Verdict, EXACT_LIMIT,
};
use crate::generators::FamilySpec;
use crate::geometry::{
    average_squared_distance, validate_triangle_inequalities, validate_unit_sphere, PointSet, Tolerance,
};
use crate::graph::{build_threshold_graph, Graph};
use crate::reductions::{
    check_generalized, check_main_theorem_instance, extract_separated_from_witness, witness_from_separated_pair,
    CheckOptions, EmbeddedGraph,
};
use crate::separation::{
    best_separated_pair_exact_with_limit, find_separated_pair_projection, SeparatedPair, SEPARATION_EXACT_LIMIT,
};
use crate::sweep::{parse_grid, parse_int_grid, run_sweep, write_reports_csv, SweepSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FOUND: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "sepcert", version, about = "Threshold graphs, expansion certificates and separated sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a point-set family as JSON.
    Generate(GenerateArgs),
    /// Check the squared triangle inequality and unit norms.
    Validate(ValidateArgs),
    /// Build the ε-threshold graph.
    Graph(GraphArgs),
    /// Certify (α,β)-expansion of the ε-threshold graph.
    Certify(CertifyArgs),
    /// Find a well-separated pair at squared distance ≥ delta.
    Separate(SeparateArgs),
    /// Convert between a non-expansion witness and a separated pair.
    Reduce(ReduceArgs),
    /// One (n, ε, α, β, k, verdict, ratio) row as CSV.
    CheckMain(CheckMainArgs),
    /// Search for a short-hop pair with far-apart images.
    CheckGeneralized(CheckGeneralizedArgs),
    /// check-main over a family and an ε grid, as CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    Antipodal,
    Hypercube,
    Orthonormal,
    RandomSphere,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Args)]
struct Common {
    /// Absolute tolerance for float comparisons.
    #[arg(long, default_value_t = Tolerance::DEFAULT_ABS)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct GraphArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    epsilon: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Randomized {
    /// Required whenever the randomized path runs.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    budget: usize,
    #[arg(long, default_value_t = EXACT_LIMIT)]
    exact_limit: usize,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[command(flatten)]
    randomized: Randomized,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct SeparateArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 32)]
    rounds: usize,
    #[arg(long, default_value_t = SEPARATION_EXACT_LIMIT)]
    exact_limit: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct ReduceArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum)]
    direction: Direction,
    #[arg(long)]
    epsilon: f64,
    /// Forward only.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: f64,
    /// Backward only: SeparatedPair JSON file.
    #[arg(long)]
    pair: Option<PathBuf>,
    #[arg(long, default_value_t = EXACT_LIMIT)]
    exact_limit: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct CheckMainArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[command(flatten)]
    randomized: Randomized,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct CheckGeneralizedArgs {
    /// Point-set JSON used as the embedding.
    #[arg(long = "in")]
    input: PathBuf,
    /// Graph JSON; defaults to the threshold graph at --epsilon.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    gamma: f64,
    #[arg(long)]
    delta: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Point counts (antipodal, orthonormal, random-sphere): grid or list.
    #[arg(long)]
    n: Option<String>,
    /// Dimensions: a grid for hypercube, a single value otherwise.
    #[arg(long)]
    d: Option<String>,
    /// start:stop:step, a comma list, or one value.
    #[arg(long)]
    epsilon: String,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    budget: usize,
    #[arg(long, default_value_t = EXACT_LIMIT)]
    exact_limit: usize,
    #[command(flatten)]
    common: Common,
}

/// Parses `args` (including the program name) and runs one command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
            } else {
                let _ = write!(stdout, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Generate(a) => generate(a, stdout),
        Command::Validate(a) => validate(a, stdout),
        Command::Graph(a) => graph(a, stdout),
        Command::Certify(a) => certify(a, stdout),
        Command::Separate(a) => separate(a, stdout),
        Command::Reduce(a) => reduce(a, stdout),
        Command::CheckMain(a) => check_main(a, stdout),
        Command::CheckGeneralized(a) => check_gen(a, stdout),
        Command::Sweep(a) => sweep(a, stdout),
    }
}

fn emit(out: Option<&Path>, stdout: &mut dyn Write, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n"))?,
        None => writeln!(stdout, "{text}")?,
    }
    Ok(())
}

fn read_points(path: &Path) -> Result<PointSet> {
    PointSet::from_json(&fs::read_to_string(path)?)
}

fn require<T>(value: Option<T>, flag: &str, why: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidArgument(format!("--{flag} is required {why}")))
}

fn family_spec(family: Family, n: Option<usize>, d: Option<usize>, seed: Option<u64>) -> Result<FamilySpec> {
    Ok(match family {
        Family::Antipodal => FamilySpec::Antipodal {
            n: require(n, "n", "for antipodal")?,
            d: d.unwrap_or(1),
        },
        Family::Hypercube => FamilySpec::Hypercube {
            d: require(d, "d", "for hypercube")?,
        },
        Family::Orthonormal => FamilySpec::Orthonormal {
            n: require(n, "n", "for orthonormal")?,
        },
        Family::RandomSphere => FamilySpec::RandomSphere {
            n: require(n, "n", "for random-sphere")?,
            d: require(d, "d", "for random-sphere")?,
            seed: require(seed, "seed", "for random-sphere")?,
        },
    })
}

fn generate(a: GenerateArgs, stdout: &mut dyn Write) -> Result<i32> {
    let ps = family_spec(a.family, a.n, a.d, a.seed)?.generate()?;
    emit(a.out.as_deref(), stdout, &ps.to_json())?;
    Ok(EXIT_OK)
}

fn validate(a: ValidateArgs, stdout: &mut dyn Write) -> Result<i32> {
    let tol = Tolerance::new(a.common.tol)?;
    let ps = read_points(&a.input)?;
    let (value, code) = if let Some(v) = validate_triangle_inequalities(&ps, tol) {
        (
            serde_json::json!({"status": "triangle-violation", "i": v.i, "j": v.j, "k": v.k, "slack": v.slack}),
            EXIT_FOUND,
        )
    } else if let Some(i) = validate_unit_sphere(&ps, tol) {
        let norm_sq: f64 = ps.point(i).iter().map(|x| x * x).sum();
        (
            serde_json::json!({"status": "off-sphere", "index": i, "norm_squared": norm_sq}),
            EXIT_FOUND,
        )
    } else {
        (
            serde_json::json!({
                "status": "ok",
                "n": ps.len(),
                "dim": ps.dim(),
                "average_squared_distance": average_squared_distance(&ps),
            }),
            EXIT_OK,
        )
    };
    emit(a.common.out.as_deref(), stdout, &value.to_string())?;
    Ok(code)
}

fn graph(a: GraphArgs, stdout: &mut dyn Write) -> Result<i32> {
    let tol = Tolerance::new(a.common.tol)?;
    let g = build_threshold_graph(&read_points(&a.input)?, a.epsilon, tol)?;
    emit(a.common.out.as_deref(), stdout, &g.to_json())?;
    Ok(EXIT_OK)
}

fn verdict_exit(v: Verdict) -> i32 {
    match v {
        Verdict::Expander | Verdict::Vacuous => EXIT_OK,
        Verdict::NotExpander => EXIT_FOUND,
        Verdict::Unknown => EXIT_UNKNOWN,
    }
}

fn certify(a: CertifyArgs, stdout: &mut dyn Write) -> Result<i32> {
    let tol = Tolerance::new(a.common.tol)?;
    let ps = read_points(&a.input)?;
    let params = ExpanderParams::new(a.alpha, a.beta)?;
    let g = build_threshold_graph(&ps, a.epsilon, tol)?;
    let n = ps.len();
    let cert = if n <= a.randomized.exact_limit {
        certify_expansion_exact_with_limit(&g, &params, a.randomized.exact_limit)?
    } else {
        let window = params.window(n);
        let mut cert = ExpansionCertificate {
            params: params.clone(),
            verdict: Verdict::Vacuous,
            witness: None,
            window,
            method: Method::Randomized,
        };
        if !window.is_empty() {
            let seed = require(a.randomized.seed, "seed", "above the exact limit")?;
            cert.witness = falsify_expansion_randomized(&g, &params, a.randomized.budget, seed)?;
            cert.verdict = if cert.witness.is_some() {
                Verdict::NotExpander
            } else {
                Verdict::Unknown
            };
        }
        cert
    };
    emit(a.common.out.as_deref(), stdout, &cert.to_json())?;
    Ok(verdict_exit(cert.verdict))
}

fn separate(a: SeparateArgs, stdout: &mut dyn Write) -> Result<i32> {
    let tol = Tolerance::new(a.common.tol)?;
    let ps = read_points(&a.input)?;
    let (pair, miss) = if ps.len() <= a.exact_limit {
        (
            best_separated_pair_exact_with_limit(&ps, a.delta, tol, a.exact_limit)?,
            EXIT_FOUND,
        )
    } else {
        let seed = require(a.seed, "seed", "above the exact limit")?;
        (
            find_separated_pair_projection(&ps, a.delta, seed, a.rounds)?,
            EXIT_UNKNOWN,
        )
    };
    match pair {
        Some(p) => {
            emit(a.common.out.as_deref(), stdout, &p.to_json())?;
            Ok(EXIT_OK)
        }
        None => {
            emit(a.common.out.as_deref(), stdout, "null")?;
            Ok(miss)
        }
    }
}

fn reduce(a: ReduceArgs, stdout: &mut dyn Write) -> Result<i32> {
    let tol = Tolerance::new(a.common.tol)?;
    let ps = read_points(&a.input)?;
    match a.direction {
        Direction::Forward => {
            let params = ExpanderParams::new(require(a.alpha, "alpha", "for --direction forward")?, a.beta)?;
            let g = build_threshold_graph(&ps, a.epsilon, tol)?;
            let cert = certify_expansion_exact_with_limit(&g, &params, a.exact_limit)?;
            match cert.witness {
                Some(w) => {
                    let pair = extract_separated_from_witness(&ps, &g, &w)?;
                    emit(a.common.out.as_deref(), stdout, &pair.to_json())?;
                    Ok(EXIT_OK)
                }
                None => {
                    emit(a.common.out.as_deref(), stdout, "null")?;
                    Ok(EXIT_FOUND)
                }
            }
        }
        Direction::Backward => {
            let path = require(a.pair, "pair", "for --direction backward")?;
            let pair = SeparatedPair::from_json(&fs::read_to_string(path)?)?;
            match witness_from_separated_pair(&ps, a.epsilon, &pair, a.beta, tol)? {
                Some(w) => {
                    emit(a.common.out.as_deref(), stdout, &serde_json::to_string(&w)?)?;
                    Ok(EXIT_OK)
                }
                None => {
                    emit(a.common.out.as_deref(), stdout, "null")?;
                    Ok(EXIT_FOUND)
                }
            }
        }
    }
}

fn check_main(a: CheckMainArgs, stdout: &mut dyn Write) -> Result<i32> {
    let ps = read_points(&a.input)?;
    let params = ExpanderParams::new(a.alpha, a.beta)?;
    let seed = if ps.len() > a.randomized.exact_limit {
        require(a.randomized.seed, "seed", "above the exact limit")?
    } else {
        a.randomized.seed.unwrap_or(0)
    };
    let opts = CheckOptions {
        tol: Tolerance::new(a.common.tol)?,
        exact_limit: a.randomized.exact_limit,
        budget: a.randomized.budget,
        seed,
    };
    let report = check_main_theorem_instance(&ps, a.epsilon, &params, &opts)?;
    let mut buf = Vec::new();
    write_reports_csv(&mut buf, std::slice::from_ref(&report))?;
    write_csv(a.common.out.as_deref(), stdout, &buf)?;
    Ok(verdict_exit(report.verdict))
}

fn check_gen(a: CheckGeneralizedArgs, stdout: &mut dyn Write) -> Result<i32> {
    let tol = Tolerance::new(a.common.tol)?;
    let ps = read_points(&a.input)?;
    let graph = match (&a.graph, a.epsilon) {
        (Some(path), _) => Graph::from_json(&fs::read_to_string(path)?)?,
        (None, Some(eps)) => build_threshold_graph(&ps, eps, tol)?.graph().clone(),
        (None, None) => {
            return Err(Error::InvalidArgument("one of --graph or --epsilon is required".into()));
        }
    };
    let eg = EmbeddedGraph::from_points(graph, &ps, tol)?;
    let params = ExpanderParams::new(a.alpha, a.beta)?;
    match check_generalized(&eg, &params, a.gamma, a.delta)? {
        Some(hit) => {
            emit(a.common.out.as_deref(), stdout, &serde_json::to_string(&hit)?)?;
            Ok(EXIT_OK)
        }
        None => {
            emit(a.common.out.as_deref(), stdout, "null")?;
            Ok(EXIT_FOUND)
        }
    }
}

fn sweep(a: SweepArgs, stdout: &mut dyn Write) -> Result<i32> {
    let families = match a.family {
        Family::Hypercube => parse_int_grid(&require(a.d, "d", "for hypercube")?)?
            .into_iter()
            .map(|d| family_spec(a.family, None, Some(d), Some(a.seed)))
            .collect::<Result<Vec<_>>>()?,
        _ => {
            let d = a.d.as_deref().map(parse_int_grid).transpose()?;
            let d = match d.as_deref() {
                None => None,
                Some([d]) => Some(*d),
                Some(_) => return Err(Error::InvalidArgument("--d must be a single value here".into())),
            };
            parse_int_grid(&require(a.n, "n", "for this family")?)?
                .into_iter()
                .map(|n| family_spec(a.family, Some(n), d, Some(a.seed)))
                .collect::<Result<Vec<_>>>()?
        }
    };
    let spec = SweepSpec {
        families,
        epsilons: parse_grid(&a.epsilon)?,
        params: ExpanderParams::new(a.alpha, a.beta)?,
        options: CheckOptions {
            tol: Tolerance::new(a.common.tol)?,
            exact_limit: a.exact_limit,
            budget: a.budget,
            seed: a.seed,
        },
    };
    let rows = run_sweep(&spec)?;
    let mut buf = Vec::new();
    write_reports_csv(&mut buf, &rows)?;
    write_csv(a.common.out.as_deref(), stdout, &buf)?;
    Ok(EXIT_OK)
}

fn write_csv(out: Option<&Path>, stdout: &mut dyn Write, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => stdout.write_all(bytes)?,
    }
    Ok(())
}
