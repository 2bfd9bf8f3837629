//! `lcong`: densities, digit matrices, L-series and congruence checks from a
//! TOML problem description.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lcong::density::{analyze, subset_densities, DigitSet};
use lcong::dwork::Setup;
use lcong::lfun::{artin_schreier_numerator, feasible_degree, l_series, CycInt};
use lcong::problem::{Problem, ProblemConfig};
use lcong::verify::{self, CorpusCase, Fault, SCHEMA_VERSION};
use lcong::Error;

#[derive(Parser, Debug)]
#[command(name = "lcong", version, about = "p-adic L-functions of exponential sums and their congruences")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Problem description (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Write the JSON report here.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Overrides `run.kmax`.
    #[arg(long, global = true, value_name = "N")]
    kmax: Option<usize>,

    /// Overrides `run.rmax_budget`: the largest number of points or tuples enumerated.
    #[arg(long, global = true, value_name = "N")]
    budget: Option<u64>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Density, critical graph and densities of coordinate restrictions.
    Density,
    /// Minimal support and digit sets.
    Support,
    /// Digit matrix of the full coordinate set.
    Matrix,
    /// Exact L-series from point counts.
    Lseries,
    /// Zeta numerator of y^p - y = f(x) against the norm of the predicted product.
    Curve,
    /// L-series against the predicted product of determinants.
    Verify,
    /// Property suites on the built-in corpus, plus the configured case if given.
    Selftest {
        /// Corrupt an input on purpose to check that the suites notice.
        #[arg(long, value_enum, hide = true)]
        fault: Option<FaultArg>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FaultArg {
    CorruptLambda,
}

/// Exit codes.
const PASS: u8 = 0;
const FAIL: u8 = 1;
const INPUT: u8 = 2;
const BUDGET: u8 = 3;

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Budget { .. } => BUDGET,
            Error::Internal(_) => FAIL,
            _ => INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: INPUT,
        message: message.into(),
    }
}

/// Text for stdout, JSON for `--out`, and the exit code.
struct Output {
    text: String,
    json: serde_json::Value,
    code: u8,
}

fn to_json<T: Serialize>(x: &T) -> serde_json::Value {
    serde_json::to_value(x).expect("report serializes")
}

fn load_config(cli: &Cli) -> Result<ProblemConfig, Failure> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| input_error("this subcommand needs --config PATH"))?;
    let mut cfg = read_config(path)?;
    if let Some(k) = cli.kmax {
        cfg.run.kmax = k;
    }
    if let Some(b) = cli.budget {
        cfg.run.rmax_budget = b;
    }
    Ok(cfg)
}

fn read_config(path: &Path) -> Result<ProblemConfig, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
    Ok(ProblemConfig::from_toml(&text)?)
}

fn budget_of(cfg: &ProblemConfig) -> u128 {
    cfg.run.rmax_budget as u128
}

#[derive(Serialize)]
struct SubsetRow {
    coordinates: Vec<usize>,
    density: String,
}

#[derive(Serialize)]
struct DensityReport {
    schema_version: u32,
    kind: &'static str,
    p: u64,
    n: usize,
    exponents: Vec<Vec<u32>>,
    density: String,
    mean_weight: String,
    minimal_support: Vec<Vec<u32>>,
    critical_edges: Vec<DigitSet>,
    restrictions: Vec<SubsetRow>,
}

fn density_report(problem: &Problem, budget: u128) -> Result<DensityReport, Failure> {
    let (set, p) = (problem.set(), problem.p());
    let a = analyze(set, p, budget)?;
    let restrictions = subset_densities(set, p, budget)?
        .into_iter()
        .map(|(i, d)| SubsetRow {
            coordinates: i.into_iter().map(|x| x + 1).collect(),
            density: d.to_string(),
        })
        .collect();
    Ok(DensityReport {
        schema_version: SCHEMA_VERSION,
        kind: "density",
        p,
        n: set.dim(),
        exponents: set.vectors().to_vec(),
        density: a.density.to_string(),
        mean_weight: a.critical.mean.to_string(),
        minimal_support: a.minimal_support(),
        critical_edges: a.digit_sets(),
        restrictions,
    })
}

fn cmd_density(cfg: &ProblemConfig, digits: bool) -> Result<Output, Failure> {
    let problem = cfg.build()?;
    let r = density_report(&problem, budget_of(cfg))?;
    let mut t = String::new();
    let _ = writeln!(t, "D = {:?} over p = {}", r.exponents, r.p);
    let _ = writeln!(t, "density = {}  (minimum mean cycle weight {})", r.density, r.mean_weight);
    let _ = writeln!(t, "minimal support ({}): {:?}", r.minimal_support.len(), r.minimal_support);
    if digits {
        let _ = writeln!(t, "critical edges:");
        for e in &r.critical_edges {
            let _ = writeln!(t, "  {:?} -> {:?}  weight {}  digits {:?}", e.from, e.to, e.weight, e.digits);
        }
    } else {
        let _ = writeln!(t, "coordinate restrictions:");
        for s in &r.restrictions {
            let _ = writeln!(t, "  I = {:?}: {}", s.coordinates, s.density);
        }
    }
    let mut json = to_json(&r);
    if digits {
        json["kind"] = "support".into();
    }
    Ok(Output { text: t, json, code: PASS })
}

#[derive(Serialize)]
struct MatrixReport {
    schema_version: u32,
    kind: &'static str,
    f: String,
    labels: Vec<Vec<u32>>,
    /// Integers where the entry is one, otherwise its valuation.
    entries: Vec<Vec<String>>,
    precision: u32,
}

fn cmd_matrix(cfg: &ProblemConfig) -> Result<Output, Failure> {
    let problem = cfg.build()?;
    let setup = Setup::new(problem, cfg.run.kmax, cfg.run.precision, budget_of(cfg))?;
    let (labels, entries) = verify::digit_matrix_rows(&setup)?;
    let r = MatrixReport {
        schema_version: SCHEMA_VERSION,
        kind: "matrix",
        f: setup.problem().describe(),
        labels,
        entries,
        precision: setup.ram().base().precision(),
    };
    let mut t = String::new();
    let _ = writeln!(t, "digit matrix of f = {} (rows and columns indexed by the minimal support)", r.f);
    let width = r.entries.iter().flatten().map(String::len).max().unwrap_or(1);
    for (label, row) in r.labels.iter().zip(&r.entries) {
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(t, "  {:<12} {}", format!("{label:?}"), cells.join("  "));
    }
    Ok(Output {
        text: t,
        json: to_json(&r),
        code: PASS,
    })
}

fn cycs(v: &[CycInt]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn cmd_lseries(cfg: &ProblemConfig) -> Result<Output, Failure> {
    let problem = cfg.build()?;
    let budget = budget_of(cfg);
    let kmax = feasible_degree(&problem, cfg.run.kmax, budget);
    if kmax == 0 {
        return Err(input_budget(&problem, budget));
    }
    let l = l_series(&problem, kmax, budget)?;
    let mut t = String::new();
    let _ = writeln!(t, "L(f, T) for f = {} over F_{}^{}, z = exp(2 pi i / {})", l.f, l.p, l.m, l.p);
    if kmax < cfg.run.kmax {
        let _ = writeln!(t, "kmax reduced from {} to {kmax} by the point-count budget", cfg.run.kmax);
    }
    let _ = writeln!(t, "exponential sums S_1..S_{}: [{}]", l.rmax, cycs(&l.sums));
    for (k, c) in l.coeffs.iter().enumerate() {
        let _ = writeln!(t, "  a_{k} = {c}");
    }
    let mut json = to_json(&l);
    json["schema_version"] = SCHEMA_VERSION.into();
    json["kind"] = "lseries".into();
    Ok(Output { text: t, json, code: PASS })
}

fn input_budget(problem: &Problem, budget: u128) -> Failure {
    Failure {
        code: BUDGET,
        message: format!(
            "budget exceeded: one point count over F_{} with n = {} needs more than {budget} points",
            problem.q(),
            problem.n()
        ),
    }
}

fn cmd_curve(cfg: &ProblemConfig) -> Result<Output, Failure> {
    let report = verify::verify_curve(cfg)?;
    let problem = cfg.build()?;
    let num = artin_schreier_numerator(&problem, budget_of(cfg))?;
    let mut t = String::new();
    let coeffs: Vec<String> = num.coeffs.iter().map(ToString::to_string).collect();
    let _ = writeln!(
        t,
        "curve y^{} - y = {}: genus {}, point counts {:?}",
        problem.p(),
        problem.describe(),
        num.genus,
        num.counts
    );
    let _ = writeln!(t, "numerator coefficients: [{}]", coeffs.join(", "));
    t.push_str(&verify::render_report(&report));
    let mut json = to_json(&report);
    json["numerator"] = to_json(&num);
    Ok(Output {
        text: t,
        json,
        code: if report.verdict.is_pass() { PASS } else { FAIL },
    })
}

fn cmd_verify(cfg: &ProblemConfig) -> Result<Output, Failure> {
    let report = verify::verify_congruence(cfg)?;
    Ok(Output {
        text: verify::render_report(&report),
        json: to_json(&report),
        code: if report.verdict.is_pass() { PASS } else { FAIL },
    })
}

fn cmd_selftest(cli: &Cli, fault: Option<FaultArg>) -> Result<Output, Failure> {
    let mut cases = verify::corpus();
    let mut budget = 10_000_000u128;
    if cli.config.is_some() {
        let cfg = load_config(cli)?;
        cfg.build()?;
        budget = budget_of(&cfg);
        cases.push(CorpusCase {
            name: "configured case".into(),
            config: cfg,
        });
    } else if let Some(b) = cli.budget {
        budget = b as u128;
    }
    let fault = fault.map(|FaultArg::CorruptLambda| Fault::CorruptLambda);
    let report = verify::selftest_on(&cases, fault, budget);
    Ok(Output {
        text: verify::render_selftest(&report),
        json: to_json(&report),
        code: if report.pass { PASS } else { FAIL },
    })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(input_error("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| input_error(format!("cannot start {n} threads: {e}")))?;
    }
    match &cli.command {
        Command::Selftest { fault } => cmd_selftest(cli, *fault),
        cmd => {
            let cfg = load_config(cli)?;
            match cmd {
                Command::Density => cmd_density(&cfg, false),
                Command::Support => cmd_density(&cfg, true),
                Command::Matrix => cmd_matrix(&cfg),
                Command::Lseries => cmd_lseries(&cfg),
                Command::Curve => cmd_curve(&cfg),
                Command::Verify => cmd_verify(&cfg),
                Command::Selftest { .. } => unreachable!(),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT } else { PASS });
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if let Some(path) = &cli.out {
                let body = serde_json::to_string_pretty(&out.json).expect("json") + "\n";
                if let Err(e) = std::fs::write(path, body) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(INPUT);
                }
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
