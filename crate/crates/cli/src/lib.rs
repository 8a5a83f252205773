//! Command-line front end for `plap-core`.
//!
//! Every subcommand is a plain function from parsed arguments to text on a
//! writer, so the binary and the tests share one code path.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use plap_core::eigen::{self, Check};
use plap_core::ops::{self, Improved};
use plap_core::suite::{self, SuiteOptions};
use plap_core::{bounds_report, Case, Chain, Error, Exponent, ScanOptions};

pub const CSV_HEADER: &str = "p,k_sigma,delta1,delta_bar1,delta1_prime,sigma,lambda_exact";

#[derive(Debug, Parser)]
#[command(name = "plap", version, about = "Bounds and exact values for the principal eigenvalue of the discrete p-Laplacian on a chain")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Basic bounds, closed-form estimates and iterated sequences as JSON.
    Bounds {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long)]
        p: f64,
        /// Steps of each approximating sequence.
        #[arg(long, default_value_t = 1)]
        iters: usize,
    },
    /// Shooting eigenvalue and eigenfunction with verification checks, as JSON.
    Solve {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = eigen::DEFAULT_TOL)]
        tol: f64,
    },
    /// CSV of the first-step estimates over a grid of exponents.
    Sweep {
        #[command(flatten)]
        chain: ChainArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = Transform::Root)]
        transform: Transform,
        /// Write here instead of stdout. Nothing is written on failure.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = eigen::DEFAULT_TOL)]
        tol: f64,
    },
    /// Runs the invariant suite and prints one line per check.
    Verify {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long)]
        p: f64,
        /// Random test functions per admissibility class.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 5)]
        iters: usize,
        #[arg(long, default_value_t = eigen::DEFAULT_TOL)]
        tol: f64,
    },
    /// Compares a DN chain with its dual chain at the conjugate exponent.
    Duality {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = eigen::DEFAULT_TOL)]
        tol: f64,
    },
    /// Prints a gnuplot script that plots a sweep CSV.
    Gnuplot {
        /// The CSV produced by `sweep`.
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Where the chain comes from. Exactly one source is required.
#[derive(Debug, Clone, Args)]
#[group(skip)]
#[command(group(ArgGroup::new("source").required(true).args(["uniform", "geometric", "file"])))]
pub struct ChainArgs {
    /// Unit weights on `N` (+1) states.
    #[arg(long, value_name = "N")]
    pub uniform: Option<usize>,
    /// `mu_k = r^k`, `nu_k = a r^(k+1)`.
    #[arg(long, num_args = 3, value_names = ["A", "R", "N"])]
    pub geometric: Option<Vec<String>>,
    /// JSON chain file `{"case":..,"mu":[..],"nu":[..]}`.
    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,
    /// Boundary case for generated chains. Must match the file if both given.
    #[arg(long, value_enum)]
    pub case: Option<CaseArg>,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct GridArgs {
    #[arg(long)]
    pub p: Option<f64>,
    /// Inclusive, evenly spaced.
    #[arg(long, num_args = 3, value_names = ["START", "STOP", "COUNT"])]
    pub p_grid: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    Nd,
    Dn,
}

impl From<CaseArg> for Case {
    fn from(c: CaseArg) -> Case {
        match c {
            CaseArg::Nd => Case::Nd,
            CaseArg::Dn => Case::Dn,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Transform {
    /// `x -> x^(1/p)`.
    Root,
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Failure {
    Usage,
    Verification,
    Numerical,
}

impl Failure {
    pub fn exit_code(self) -> i32 {
        match self {
            Failure::Usage => 2,
            Failure::Verification => 3,
            Failure::Numerical => 4,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Failure,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            kind: Failure::Usage,
            message: message.into(),
        }
    }

    fn verification(message: impl Into<String>) -> Self {
        Self {
            kind: Failure::Verification,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::Numerical(_) => Failure::Numerical,
            _ => Failure::Usage,
        };
        Self {
            kind,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::usage(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn parse_num<T: std::str::FromStr>(what: &str, s: &str) -> CliResult<T> {
    s.parse()
        .map_err(|_| CliError::usage(format!("cannot parse {what} from {s:?}")))
}

impl ChainArgs {
    pub fn build(&self) -> CliResult<Chain> {
        let case = self.case.map(Case::from);
        if let Some(path) = &self.file {
            let chain = Chain::from_path(path)?;
            if let Some(c) = case {
                if c != chain.case() {
                    return Err(CliError::usage(format!(
                        "--case {c} conflicts with the {} chain in {}",
                        chain.case(),
                        path.display()
                    )));
                }
            }
            return Ok(chain);
        }
        let case = case.unwrap_or(Case::Nd);
        if let Some(n) = self.uniform {
            return Ok(Chain::uniform(n, case)?);
        }
        if let Some(v) = &self.geometric {
            let a = parse_num("a", &v[0])?;
            let r = parse_num("r", &v[1])?;
            let n = parse_num("N", &v[2])?;
            return Ok(Chain::geometric(a, r, n, case)?);
        }
        Err(CliError::usage("no chain source given"))
    }
}

/// `count` evenly spaced points from `start` to `stop`, both included.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let h = (stop - start) / (count - 1) as f64;
            (0..count)
                .map(|k| if k + 1 == count { stop } else { start + h * k as f64 })
                .collect()
        }
    }
}

impl GridArgs {
    pub fn points(&self) -> CliResult<Vec<f64>> {
        let ps = match (&self.p, &self.p_grid) {
            (Some(p), _) => vec![*p],
            (None, Some(v)) => {
                let start: f64 = parse_num("start", &v[0])?;
                let stop: f64 = parse_num("stop", &v[1])?;
                let count: usize = parse_num("count", &v[2])?;
                if count == 0 || start.is_nan() || stop.is_nan() || start > stop {
                    return Err(CliError::usage(
                        "--p-grid needs START <= STOP and a positive COUNT",
                    ));
                }
                linspace(start, stop, count)
            }
            (None, None) => return Err(CliError::usage("give --p or --p-grid")),
        };
        for &p in &ps {
            Exponent::new(p)?;
        }
        Ok(ps)
    }
}

/// One CSV row before transformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub p: f64,
    pub k_sigma: f64,
    pub delta1: f64,
    pub delta_bar1: f64,
    pub delta1_prime: f64,
    pub sigma: f64,
    /// Optimal constant `1/lambda`, absent when the solver gave up.
    pub lambda_exact: Option<f64>,
}

impl Row {
    pub fn compute(chain: &Chain, p: f64, tol: f64) -> CliResult<Row> {
        let e = Exponent::new(p)?;
        let sigma = ops::sigma(chain, &e).value;
        let Improved {
            delta1,
            delta1_prime,
            delta_bar1,
        } = ops::improved_estimates(chain, &e)?;
        let lambda_exact = match eigen::solve(chain, &e, tol) {
            Ok(sol) => Some(1.0 / sol.lambda),
            Err(Error::Numerical(_)) => None,
            Err(other) => return Err(other.into()),
        };
        Ok(Row {
            p,
            k_sigma: e.kp() * sigma,
            delta1,
            delta_bar1,
            delta1_prime,
            sigma,
            lambda_exact,
        })
    }

    /// Every column but `p` mapped through the transform.
    pub fn transformed(&self, t: Transform) -> Row {
        let f = |x: f64| match t {
            Transform::Root => x.powf(1.0 / self.p),
            Transform::Raw => x,
        };
        Row {
            p: self.p,
            k_sigma: f(self.k_sigma),
            delta1: f(self.delta1),
            delta_bar1: f(self.delta_bar1),
            delta1_prime: f(self.delta1_prime),
            sigma: f(self.sigma),
            lambda_exact: self.lambda_exact.map(f),
        }
    }

    pub fn csv_line(&self) -> String {
        let exact = match self.lambda_exact {
            Some(x) => format!("{x:.16e}"),
            None => "NA".to_string(),
        };
        format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{exact}\n",
            self.p, self.k_sigma, self.delta1, self.delta_bar1, self.delta1_prime, self.sigma
        )
    }
}

/// Rows for every `p`, computed on all cores and returned in input order.
pub fn sweep_rows(chain: &Chain, ps: &[f64], tol: f64) -> CliResult<Vec<Row>> {
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(ps.len().max(1));
    let chunk = ps.len().div_ceil(workers).max(1);
    let parts: Vec<CliResult<Vec<Row>>> = std::thread::scope(|s| {
        let handles: Vec<_> = ps
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || part.iter().map(|&p| Row::compute(chain, p, tol)).collect())
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let mut rows = Vec::with_capacity(ps.len());
    for part in parts {
        rows.extend(part?);
    }
    Ok(rows)
}

pub fn sweep_csv(rows: &[Row], t: Transform) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.transformed(t).csv_line());
    }
    out
}

/// Writes through a temporary file in the target directory, so a failed run
/// never leaves a partial file behind.
pub fn write_atomic(path: &Path, text: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.persist(path).map_err(|e| CliError::from(e.error))?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct SolveOutput<'a> {
    case: Case,
    p: f64,
    lambda: f64,
    residual: f64,
    iterations: usize,
    bracket: (f64, f64),
    g: &'a [f64],
    checks: &'a [Check],
    passed: bool,
}

#[derive(Debug, Serialize)]
pub struct DualityOutput {
    pub p: f64,
    pub pstar: f64,
    /// `lambda_p(chain)^(-1/p)`.
    pub direct: f64,
    /// `lambda_{p*}(dual)^(-1/p*)`.
    pub dual: f64,
    pub gap: f64,
    pub passed: bool,
}

pub const DUALITY_TOL: f64 = 1e-8;

pub fn duality(chain: &Chain, p: f64, tol: f64) -> CliResult<DualityOutput> {
    if chain.case() != Case::Dn {
        return Err(CliError::usage("duality needs a DN chain"));
    }
    let e = Exponent::new(p)?;
    let (direct, dual) = suite::duality_sides(chain, &e, tol)?;
    let gap = (direct - dual).abs() / direct;
    Ok(DualityOutput {
        p,
        pstar: e.pstar(),
        direct,
        dual,
        gap,
        passed: gap <= DUALITY_TOL,
    })
}

pub fn gnuplot_script(data: &Path) -> String {
    let data = data.display().to_string().replace('\'', "''");
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set datafile missing 'NA'\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str("set xlabel 'p'\n");
    s.push_str("set logscale y\n");
    s.push_str(&format!("plot for [c=2:7] '{data}' using 1:c with lines\n"));
    s
}

fn json_line<T: Serialize>(out: &mut dyn Write, value: &T) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Runs one parsed command, writing its normal output to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Bounds { chain, p, iters } => {
            let chain = chain.build()?;
            let e = Exponent::new(*p)?;
            if *iters == 0 {
                return Err(CliError::usage("--iters must be at least 1"));
            }
            let rep = bounds_report(&chain, &e, *iters, &ScanOptions::default())?;
            json_line(out, &rep)
        }
        Command::Solve { chain, p, tol } => {
            let chain = chain.build()?;
            let e = Exponent::new(*p)?;
            let sol = eigen::solve(&chain, &e, *tol)?;
            let v = eigen::verify_solution(&chain, &e, &sol)?;
            json_line(
                out,
                &SolveOutput {
                    case: chain.case(),
                    p: *p,
                    lambda: sol.lambda,
                    residual: sol.residual,
                    iterations: sol.iterations,
                    bracket: sol.bracket,
                    g: &sol.g,
                    checks: &v.checks,
                    passed: v.passed(),
                },
            )?;
            if v.passed() {
                Ok(())
            } else {
                Err(CliError::verification(format!(
                    "verification failed: {}",
                    v.failures().join(", ")
                )))
            }
        }
        Command::Sweep {
            chain,
            grid,
            transform,
            out: path,
            tol,
        } => {
            let chain = chain.build()?;
            let ps = grid.points()?;
            let rows = sweep_rows(&chain, &ps, *tol)?;
            let text = sweep_csv(&rows, *transform);
            match path {
                Some(path) => write_atomic(path, &text),
                None => Ok(out.write_all(text.as_bytes())?),
            }
        }
        Command::Verify {
            chain,
            p,
            trials,
            iters,
            tol,
        } => {
            let chain = chain.build()?;
            let e = Exponent::new(*p)?;
            if *iters == 0 {
                return Err(CliError::usage("--iters must be at least 1"));
            }
            let opts = SuiteOptions {
                trials: *trials,
                iters: *iters,
                tol: *tol,
                ..SuiteOptions::default()
            };
            let rep = suite::run(&chain, &e, &opts)?;
            let width = rep.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            writeln!(out, "lambda = {:.16e}", rep.lambda)?;
            for c in &rep.checks {
                let status = if c.passed { "pass" } else { "FAIL" };
                writeln!(out, "{:width$}  {status}  {}", c.name, c.detail)?;
            }
            if rep.passed() {
                writeln!(out, "all {} checks passed", rep.checks.len())?;
                Ok(())
            } else {
                Err(CliError::verification(format!(
                    "failed checks: {}",
                    rep.failures().join(", ")
                )))
            }
        }
        Command::Duality { chain, p, tol } => {
            let chain = chain.build()?;
            let rep = duality(&chain, *p, *tol)?;
            json_line(out, &rep)?;
            if rep.passed {
                Ok(())
            } else {
                Err(CliError::verification(format!(
                    "duality gap {:.3e} exceeds {DUALITY_TOL:e}",
                    rep.gap
                )))
            }
        }
        Command::Gnuplot { data, out: path } => {
            let text = gnuplot_script(data);
            match path {
                Some(path) => Ok(fs::write(path, text)?),
                None => Ok(out.write_all(text.as_bytes())?),
            }
        }
    }
}

/// Parses `args` (program name first) and runs. Returns the exit code;
/// diagnostics go to `err`.
pub fn main_with(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match run(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.kind.exit_code()
        }
    }
}
