//! Command-line front end.
//!
//! Every command writes one JSON document (or CSV for staircases). Exit
//! codes: 0 success or PROVED, 1 a valid negative answer, 2 usage or runtime
//! error.

use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::decompose::{
    matrix_monic_decompose, sln_monic_decompose, symmetric_monic_decompose, tensor222_monic_decompose,
    tensor222_sigma2_membership, verify_certificate, waring_monic_binary, BinaryForm, Certificate, Family, Target,
    Tensor222, DEFAULT_RETRY_BUDGET,
};
use crate::error::{Error, Result};
use crate::json::{mat_from_json, mat_to_json, JsonScalar};
use crate::scalar::is_prime;
use crate::secant::{generic_monic_rank, monic_secant_dim, staircase, to_csv, DimReport, VarietySpec, DEFAULT_TRIALS};
use crate::shapiro::{parse_duration, verify_chain_with_budget, verify_step_with_budget, ChainReport, StepBudget};
use crate::{MatC, C64, DEFAULT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "monic-rank", version, about = "Monic rank verification, decomposition and secant dimensions")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Prime field for Groebner computations.
    #[arg(long, global = true, default_value_t = 101)]
    prime: u64,
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tolerance: f64,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = DEFAULT_RETRY_BUDGET)]
    retry_budget: usize,
    /// Per-step time budget such as `90`, `2m` or `1.5h`; defaults to
    /// MONIC_RANK_TIME_BUDGET, then one hour.
    #[arg(long, global = true, value_parser = duration)]
    time_budget: Option<Duration>,
    /// Write the document here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

fn duration(raw: &str) -> std::result::Result<Duration, String> {
    parse_duration(raw).map_err(|e| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Groebner-basis verification of the monic Shapiro conjecture.
    #[command(subcommand)]
    Shapiro(ShapiroCmd),
    /// Certified monic decompositions.
    #[command(subcommand)]
    Decompose(DecomposeCmd),
    /// Monic secant dimensions from Jacobian ranks.
    #[command(subcommand)]
    Secant(SecantCmd),
    /// Re-verify a certificate document written by `decompose`.
    Certify {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum ShapiroCmd {
    /// One induction step `(k, d, e)`.
    Verify {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        e: usize,
    },
    /// Base case and steps `e = 2..=e_max`; repeat `--k`/`--d` for several chains.
    Chain {
        #[arg(long, required = true)]
        k: Vec<usize>,
        #[arg(long, required = true)]
        d: Vec<usize>,
        #[arg(long)]
        e_max: usize,
        /// Worker threads across chains.
        #[arg(long, default_value_t = 1)]
        parallel: usize,
    },
}

/// JSON input, from a file or inline.
#[derive(Args, Debug)]
struct Input {
    #[arg(long, conflicts_with = "json", required_unless_present = "json")]
    input: Option<PathBuf>,
    #[arg(long)]
    json: Option<String>,
}

impl Input {
    fn read(&self) -> Result<String> {
        match (&self.input, &self.json) {
            (Some(path), _) => {
                std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
            }
            (None, Some(text)) => Ok(text.clone()),
            (None, None) => Err(Error::Parse("no input".into())),
        }
    }
}

#[derive(Subcommand, Debug)]
enum DecomposeCmd {
    /// Binary form `[c_0, ..., c_d]` (or `{"coeffs": [...]}`) with `c_0 = d`.
    Binary(#[command(flatten)] Input),
    /// Matrix with top-left entry `k`.
    Matrix {
        #[command(flatten)]
        input: Input,
        /// Defaults to the top-left entry.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Symmetric matrix with top-left entry `k`.
    Symmetric {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Tensor `{"a": [[..]], "b": [[..]]}` with `a11 = k`.
    Tensor {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: Option<usize>,
        /// Report second-secant membership instead of decomposing.
        #[arg(long)]
        classify: bool,
    },
    /// Trace-zero `n x n` matrix with top-right entry `n`.
    Sln(#[command(flatten)] Input),
}

#[derive(Subcommand, Debug)]
enum SecantCmd {
    /// Dimension at one `k`, or the staircase up to `--k-max`.
    Dim {
        #[arg(long)]
        variety: VarietySpec,
        #[arg(long, conflicts_with = "k_max", required_unless_present = "k_max")]
        k: Option<usize>,
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        /// Staircase as CSV.
        #[arg(long, requires = "k_max")]
        csv: bool,
    },
    /// Generic monic rank, searching `k = 1..=k_max`.
    Rank {
        #[arg(long)]
        variety: VarietySpec,
        #[arg(long, default_value_t = 12)]
        k_max: usize,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long)]
        csv: bool,
    },
}

/// A certificate together with the object it decomposes.
#[derive(Serialize, Deserialize)]
pub struct CertificateDocument {
    pub target: Value,
    pub certificate: Certificate,
}

pub fn target_to_json(target: &Target) -> Value {
    match target {
        Target::Binary(q) => serde_json::to_value(q).expect("serializable"),
        Target::Matrix(m) | Target::Symmetric(m) | Target::Sln(m) => json!(mat_to_json(m)),
        Target::Tensor(t) => serde_json::to_value(t).expect("serializable"),
    }
}

pub fn target_from_json(family: Family, value: &Value) -> Result<Target> {
    let parse = |e: serde_json::Error| Error::Parse(e.to_string());
    let matrix = || -> Result<MatC> {
        let rows: Vec<Vec<JsonScalar>> = serde_json::from_value(value.clone()).map_err(parse)?;
        mat_from_json(&rows)
    };
    Ok(match family {
        Family::Binary => Target::Binary(parse_binary(value)?),
        Family::Matrix => Target::Matrix(matrix()?),
        Family::Symmetric => Target::Symmetric(matrix()?),
        Family::Sln => Target::Sln(matrix()?),
        Family::Tensor => Target::Tensor(serde_json::from_value(value.clone()).map_err(parse)?),
    })
}

fn parse_binary(value: &Value) -> Result<BinaryForm> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Bare(Vec<JsonScalar>),
        Wrapped { coeffs: Vec<JsonScalar> },
    }
    let raw: Raw = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    let (Raw::Bare(c) | Raw::Wrapped { coeffs: c }) = raw;
    BinaryForm::new(c.into_iter().map(C64::from).collect())
}

fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// `k` from the flag, or the nearest integer to `h` when omitted.
fn resolve_k(k: Option<usize>, h: C64) -> Result<usize> {
    match k {
        Some(k) => Ok(k),
        None if h.re >= 0.5 => Ok(h.re.round() as usize),
        None => Err(Error::Precondition(format!("cannot infer k from h = {h}; pass --k"))),
    }
}

/// What a command produced.
enum Outcome {
    Json(Value, i32),
    Text(String, i32),
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// Decomposition errors that answer "not a member".
fn is_membership_failure(e: &Error) -> bool {
    matches!(e, Error::RankTooLarge { .. } | Error::NotInDH { .. } | Error::ExactlyOneZero | Error::NotInSigma2(_))
}

fn validate(config: &RunConfig) -> Result<()> {
    if !is_prime(config.prime) {
        return Err(Error::NotPrime(config.prime));
    }
    if !(config.tolerance > 0.0 && config.tolerance.is_finite()) {
        return Err(Error::Tolerance(format!("{} must be positive", config.tolerance)));
    }
    if config.retry_budget == 0 {
        return Err(Error::Precondition("retry budget must be at least 1".into()));
    }
    Ok(())
}

fn step_budget(config: &RunConfig) -> Result<StepBudget> {
    let mut budget = StepBudget::from_env()?;
    if let Some(time) = config.time_budget {
        budget.time = time;
    }
    Ok(budget)
}

fn shapiro(cmd: &ShapiroCmd, config: &RunConfig) -> Result<Outcome> {
    let budget = step_budget(config)?;
    match cmd {
        ShapiroCmd::Verify { k, d, e } => {
            let report = verify_step_with_budget(*k, *d, *e, config.prime, &budget)?;
            let code = if report.verdict.is_proved() { EXIT_OK } else { EXIT_NEGATIVE };
            Ok(Outcome::Json(to_value(&report), code))
        }
        ShapiroCmd::Chain { k, d, e_max, parallel } => {
            if k.len() != d.len() {
                return Err(Error::Precondition(format!("{} values of --k but {} of --d", k.len(), d.len())));
            }
            let cases: Vec<(usize, usize)> = k.iter().copied().zip(d.iter().copied()).collect();
            let reports = run_chains(&cases, *e_max, config.prime, &budget, (*parallel).max(1))?;
            let proved = reports.iter().all(|r| r.overall.is_proved());
            let doc = json!({ "chains": reports, "all_proved": proved });
            Ok(Outcome::Json(doc, if proved { EXIT_OK } else { EXIT_NEGATIVE }))
        }
    }
}

/// Chains fanned out over `workers` threads; results keep input order.
fn run_chains(
    cases: &[(usize, usize)],
    e_max: usize,
    p: u64,
    budget: &StepBudget,
    workers: usize,
) -> Result<Vec<ChainReport>> {
    let mut results: Vec<Option<Result<ChainReport>>> = vec![None; cases.len()];
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots = std::sync::Mutex::new(&mut results);
    std::thread::scope(|scope| {
        for _ in 0..workers.min(cases.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some(&(k, d)) = cases.get(i) else { break };
                let report = verify_chain_with_budget(k, d, e_max, p, budget);
                slots.lock().expect("no worker panics while holding the lock")[i] = Some(report);
            });
        }
    });
    results.into_iter().map(|r| r.expect("every case ran")).collect()
}

fn decompose(cmd: &DecomposeCmd, config: &RunConfig) -> Result<Outcome> {
    let tol = config.tolerance;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (target, result) = match cmd {
        DecomposeCmd::Binary(input) => {
            let q = parse_binary(&parse_value(&input.read()?)?)?;
            let result = waring_monic_binary(&q, tol);
            (Target::Binary(q), result)
        }
        DecomposeCmd::Matrix { input, k } => {
            let a = match target_from_json(Family::Matrix, &parse_value(&input.read()?)?)? {
                Target::Matrix(a) => a,
                _ => unreachable!(),
            };
            let k = resolve_k(*k, a[(0, 0)])?;
            let result = matrix_monic_decompose(&a, k, tol);
            (Target::Matrix(a), result)
        }
        DecomposeCmd::Symmetric { input, k } => {
            let a = match target_from_json(Family::Symmetric, &parse_value(&input.read()?)?)? {
                Target::Symmetric(a) => a,
                _ => unreachable!(),
            };
            let k = resolve_k(*k, a[(0, 0)])?;
            let result = symmetric_monic_decompose(&a, k, tol);
            (Target::Symmetric(a), result)
        }
        DecomposeCmd::Tensor { input, k, classify } => {
            let t: Tensor222 =
                serde_json::from_value(parse_value(&input.read()?)?).map_err(|e| Error::Parse(e.to_string()))?;
            if *classify {
                let m = tensor222_sigma2_membership(&t, tol)?;
                let code = if m.in_osec2 { EXIT_OK } else { EXIT_NEGATIVE };
                return Ok(Outcome::Json(json!({ "tensor": t, "membership": m }), code));
            }
            let k = resolve_k(*k, t.a11)?;
            let result = tensor222_monic_decompose(&t, k, tol, &mut rng, config.retry_budget);
            (Target::Tensor(t), result)
        }
        DecomposeCmd::Sln(input) => {
            let a = match target_from_json(Family::Sln, &parse_value(&input.read()?)?)? {
                Target::Sln(a) => a,
                _ => unreachable!(),
            };
            let result = sln_monic_decompose(&a, tol, &mut rng, config.retry_budget);
            (Target::Sln(a), result)
        }
    };
    match result {
        Ok(mut certificate) => {
            certificate.seed = Some(config.seed);
            let doc = CertificateDocument { target: target_to_json(&target), certificate };
            Ok(Outcome::Json(to_value(&doc), EXIT_OK))
        }
        Err(e) if is_membership_failure(&e) => Ok(Outcome::Json(
            json!({ "family": target.family(), "target": target_to_json(&target), "member": false, "reason": e.to_string() }),
            EXIT_NEGATIVE,
        )),
        Err(e) => Err(e),
    }
}

#[derive(Serialize)]
struct DimDocument<'a> {
    variety: String,
    #[serde(flatten)]
    report: &'a DimReport,
}

fn secant(cmd: &SecantCmd, config: &RunConfig) -> Result<Outcome> {
    match cmd {
        SecantCmd::Dim { variety, k: Some(k), trials, .. } => {
            let report = monic_secant_dim(variety, *k, *trials, config.seed)?;
            Ok(Outcome::Json(to_value(&DimDocument { variety: variety.to_string(), report: &report }), EXIT_OK))
        }
        SecantCmd::Dim { variety, k_max, trials, csv, .. } => {
            let reports = staircase(variety, k_max.expect("clap enforces --k or --k-max"), *trials, config.seed)?;
            if *csv {
                return Ok(Outcome::Text(to_csv(&reports), EXIT_OK));
            }
            Ok(Outcome::Json(
                json!({ "variety": variety.to_string(), "dim_h": variety.dim_h(), "reports": reports }),
                EXIT_OK,
            ))
        }
        SecantCmd::Rank { variety, k_max, trials, csv } => {
            let k0 = generic_monic_rank(variety, *k_max, *trials, config.seed)?;
            let reports = staircase(variety, k0, *trials, config.seed)?;
            if *csv {
                return Ok(Outcome::Text(to_csv(&reports), EXIT_OK));
            }
            let doc = json!({
                "variety": variety.to_string(),
                "dim_x1": variety.dim_x1(),
                "dim_h": variety.dim_h(),
                "generic_monic_rank": k0,
                "reports": reports,
            });
            Ok(Outcome::Json(doc, EXIT_OK))
        }
    }
}

fn certify(path: &PathBuf, config: &RunConfig) -> Result<Outcome> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let doc: CertificateDocument = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let target = target_from_json(doc.certificate.family, &doc.target)?;
    let v = verify_certificate(&doc.certificate, &target, config.tolerance)?;
    let code = if v.valid { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(Outcome::Json(json!({ "family": doc.certificate.family, "verification": v }), code))
}

fn execute(cli: &Cli) -> Result<Outcome> {
    validate(&cli.config)?;
    match &cli.command {
        Command::Shapiro(cmd) => shapiro(cmd, &cli.config),
        Command::Decompose(cmd) => decompose(cmd, &cli.config),
        Command::Secant(cmd) => secant(cmd, &cli.config),
        Command::Certify { input } => certify(input, &cli.config),
    }
}

fn emit(text: &str, output: &Option<PathBuf>, stdout: &mut dyn Write) -> std::io::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text),
        None => stdout.write_all(text.as_bytes()),
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run_with_io<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let (text, code) = match outcome {
                Outcome::Json(v, code) => (serde_json::to_string_pretty(&v).expect("serializable") + "\n", code),
                Outcome::Text(t, code) => (t, code),
            };
            match emit(&text, &cli.config.output, stdout) {
                Ok(()) => code,
                Err(e) => {
                    let _ = writeln!(stderr, "error: cannot write output: {e}");
                    EXIT_ERROR
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}

/// [`run_with_io`] on the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with_io(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
