//! Coefficient-by-coefficient comparison of the L-function with the product
//! of digit-matrix determinants, plus the built-in corpus and self-test.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::Ratio;
use serde::Serialize;

use crate::density::{
    analyze, check_digit_bijection, density, density_upto, digit_sets_from_solutions,
    enumerate_solutions, subsets, Density,
};
use crate::dwork::{
    certify_bound, cyclic_minor_check, fm_coefficients, l_from_fredholm, qualifying_subsets,
    rhs_assemble, rhs_factor, support_indices, table_extent, Setup,
};
use crate::error::{Error, Result};
use crate::lfun::{artin_schreier_numerator, embed_integers, feasible_degree, l_series};
use crate::padic::{check_lambda_congruence, check_lambda_value, lambda_coeffs, ExactPiRational, Valuation};
use crate::problem::{Correction, Problem, ProblemConfig, SignConvention};
use crate::series::TruncatedSeries;
use crate::padic::PadicScalar;

pub const SCHEMA_VERSION: u32 = 1;

const THRESHOLD_NOTE: &str = "v_q(a_k - b_k) > delta k is checked as v_w(a_k - b_k) >= m u k + 1, \
where (p-1) delta = u/v in lowest terms, w^v = pi, pi^(p-1) = -p";

/// One degree of the comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub k: usize,
    pub valuation: Valuation,
    pub threshold: u64,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    fn from_rows(rows: &[Row]) -> Self {
        if rows.iter().all(|r| r.pass) {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

/// The comparison under one scaling convention and one choice for the
/// empty-set correction.
#[derive(Clone, Debug, Serialize)]
pub struct Variant {
    pub convention: SignConvention,
    pub correction_applied: bool,
    /// Whether this variant counts towards the verdict.
    pub primary: bool,
    pub rows: Vec<Row>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct QualifyingSet {
    /// Coordinates, counted from 1.
    pub coordinates: Vec<usize>,
    pub density: String,
    pub exponent: i64,
    pub q_power: usize,
    pub varpi_power: u64,
    pub support: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub kind: &'static str,
    pub p: u64,
    pub m: usize,
    pub n: usize,
    pub f: String,
    pub exponents: Vec<Vec<u32>>,
    pub delta: String,
    pub u: u64,
    pub v: u64,
    pub e: usize,
    pub precision: u32,
    pub cap: u64,
    pub minimal_support: Vec<Vec<u32>>,
    pub support_size: usize,
    pub qualifying: Vec<QualifyingSet>,
    pub kmax_requested: usize,
    pub kmax: usize,
    pub threshold_rule: &'static str,
    pub lhs: Vec<String>,
    pub variants: Vec<Variant>,
    pub verdict: Verdict,
    /// Wall-clock time, kept out of the JSON so reports are reproducible.
    #[serde(skip)]
    pub elapsed_ms: u128,
}

fn ratio_string(r: Ratio<i64>) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `a_k` printed as its `w`-adic digits would be unreadable; integers are
/// printed as integers and anything else by its valuation.
fn describe_coeff(c: &PadicScalar) -> String {
    match crate::lfun::small_integer(c) {
        Some(x) => x.to_string(),
        None => format!("v_w = {}", c.valuation()),
    }
}

fn rows_for(setup: &Setup, lhs: &TruncatedSeries<PadicScalar>, rhs: &TruncatedSeries<PadicScalar>) -> Vec<Row> {
    (0..=setup.kmax())
        .map(|k| {
            let d = lhs.coeff(k).clone() - rhs.coeff(k).clone();
            let valuation = d.valuation();
            let threshold = setup.threshold(k);
            Row {
                k,
                valuation,
                threshold,
                pass: valuation.at_least(threshold),
            }
        })
        .collect()
}

fn conventions(c: SignConvention) -> Vec<SignConvention> {
    match c {
        SignConvention::Both => vec![SignConvention::Proof, SignConvention::Literal],
        other => vec![other],
    }
}

fn effective_kmax(problem: &Problem, cfg: &ProblemConfig) -> Result<usize> {
    let budget = cfg.run.rmax_budget as u128;
    let k = feasible_degree(problem, cfg.run.kmax, budget);
    if k == 0 {
        return Err(Error::budget(
            "a single point count",
            (problem.q() as u128).saturating_pow(problem.n() as u32),
            budget,
        ));
    }
    Ok(k)
}

fn build_report(
    kind: &'static str,
    setup: &Setup,
    cfg: &ProblemConfig,
    lhs: &TruncatedSeries<PadicScalar>,
    rhs_of: impl Fn(&TruncatedSeries<PadicScalar>) -> Result<TruncatedSeries<PadicScalar>>,
) -> Result<VerifyReport> {
    let pr = setup.problem();
    let applied = crate::dwork::correction_applies(setup, cfg.run.empty_correction);
    let mut variants = Vec::new();
    let mut qualifying = Vec::new();
    for conv in conventions(cfg.run.sign_convention) {
        for corr in [applied, !applied] {
            let mode = if corr { Correction::On } else { Correction::Off };
            let asm = rhs_assemble(setup, mode, conv)?;
            if qualifying.is_empty() && conv == conventions(cfg.run.sign_convention)[0] {
                qualifying = asm
                    .factors
                    .iter()
                    .map(|f| QualifyingSet {
                        coordinates: f.subset.iter().map(|i| i + 1).collect(),
                        density: ratio_string(f.density),
                        exponent: f.exponent,
                        q_power: f.q_power,
                        varpi_power: f.varpi_power,
                        support: f.digit_matrix.labels.clone(),
                    })
                    .collect();
            }
            let rhs = rhs_of(&asm.series)?;
            let rows = rows_for(setup, lhs, &rhs);
            variants.push(Variant {
                convention: conv,
                correction_applied: corr,
                primary: corr == applied,
                verdict: Verdict::from_rows(&rows),
                rows,
            });
        }
    }
    let verdict = if variants.iter().filter(|v| v.primary).all(|v| v.verdict.is_pass()) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let ram = setup.ram();
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        kind,
        p: pr.p(),
        m: pr.m(),
        n: pr.n(),
        f: pr.describe(),
        exponents: pr.set().vectors().to_vec(),
        delta: ratio_string(setup.delta()),
        u: setup.u(),
        v: setup.v(),
        e: ram.e(),
        precision: ram.base().precision(),
        cap: ram.cap(),
        minimal_support: setup.analysis().minimal_support(),
        support_size: setup.analysis().minimal_support().len(),
        qualifying,
        kmax_requested: cfg.run.kmax,
        kmax: setup.kmax(),
        threshold_rule: THRESHOLD_NOTE,
        lhs: lhs.coeffs().iter().map(describe_coeff).collect(),
        variants,
        verdict,
        elapsed_ms: 0,
    })
}

/// L-function against the predicted product of determinants.
pub fn verify_congruence(cfg: &ProblemConfig) -> Result<VerifyReport> {
    let start = std::time::Instant::now();
    let problem = cfg.build()?;
    let budget = cfg.run.rmax_budget as u128;
    let kmax = effective_kmax(&problem, cfg)?;
    let setup = Setup::new(problem, kmax, cfg.run.precision, budget)?;
    let l = l_series(setup.problem(), kmax, budget)?;
    let lhs = l.embed(setup.ram())?;
    let mut report = build_report("congruence", &setup, cfg, &lhs, |s| Ok(s.clone()))?;
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

/// Zeta numerator of `y^p - y = f(x)` against the norm of the predicted product.
pub fn verify_curve(cfg: &ProblemConfig) -> Result<VerifyReport> {
    let start = std::time::Instant::now();
    let problem = cfg.build()?;
    if problem.n() != 1 {
        return Err(Error::Unsupported("curve check needs n = 1".into()));
    }
    let budget = cfg.run.rmax_budget as u128;
    let num = artin_schreier_numerator(&problem, budget)?;
    let setup = Setup::new(problem, cfg.run.kmax, cfg.run.precision, budget)?;
    let lhs = embed_integers(setup.ram(), &num.coeffs, setup.kmax());
    let mut report = build_report("curve", &setup, cfg, &lhs, crate::lfun::norm_poly)?;
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

/// Plain-text rendering of a report.
pub fn render_report(r: &VerifyReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} check, f = {} over F_{}^{} (n = {})", r.kind, r.f, r.p, r.m, r.n);
    let _ = writeln!(
        s,
        "delta = {}  (p-1) delta = {}/{}  e = {}  K = {}  cap = {}",
        r.delta, r.u, r.v, r.e, r.precision, r.cap
    );
    let _ = writeln!(s, "minimal support ({}): {:?}", r.support_size, r.minimal_support);
    for q in &r.qualifying {
        let _ = writeln!(
            s,
            "  I = {:?}: delta_I = {}, exponent {:+}, scale q^{} w^{}",
            q.coordinates, q.density, q.exponent, q.q_power, q.varpi_power
        );
    }
    if r.kmax != r.kmax_requested {
        let _ = writeln!(s, "kmax reduced from {} to {} by the point-count budget", r.kmax_requested, r.kmax);
    }
    let _ = writeln!(s, "lhs: [{}]", r.lhs.join(", "));
    let _ = writeln!(s, "{}", r.threshold_rule);
    for v in &r.variants {
        let conv = match v.convention {
            SignConvention::Proof => "proof",
            SignConvention::Literal => "literal",
            SignConvention::Both => "both",
        };
        let _ = writeln!(
            s,
            "[{conv} scaling, correction {}{}] {}",
            if v.correction_applied { "on" } else { "off" },
            if v.primary { "" } else { ", informational" },
            if v.verdict.is_pass() { "PASS" } else { "FAIL" }
        );
        let _ = writeln!(s, "   k  v_w(diff)  threshold  ok");
        for row in &v.rows {
            let _ = writeln!(
                s,
                "  {:>2}  {:>9}  {:>9}  {}",
                row.k,
                row.valuation.to_string(),
                row.threshold,
                if row.pass { "yes" } else { "NO" }
            );
        }
    }
    let _ = writeln!(s, "verdict: {}", if r.verdict.is_pass() { "PASS" } else { "FAIL" });
    s
}

// ---------------------------------------------------------------------------

/// Comparison of the Fredholm route with the exact L-series.
#[derive(Clone, Debug, Serialize)]
pub struct FredholmCheck {
    pub f: String,
    pub bound: usize,
    pub window: u64,
    pub doubled: bool,
    pub valuations: Vec<Valuation>,
    pub pass: bool,
}

fn max_bound(n: usize) -> usize {
    match n {
        1 => 96,
        2 => 20,
        _ => 6,
    }
}

/// `l_from_fredholm` at a certified bound, doubled once if the comparison fails.
pub fn fredholm_check(setup: &Setup, exact: &TruncatedSeries<PadicScalar>) -> Result<FredholmCheck> {
    let window = setup.threshold(setup.kmax());
    let n = setup.problem().n();
    let mut bound = certify_bound(setup, window, max_bound(n))?;
    let mut doubled = false;
    loop {
        let fl = l_from_fredholm(setup, bound, window)?;
        let valuations: Vec<Valuation> = (0..=setup.kmax())
            .map(|k| (fl.series.coeff(k).clone() - exact.coeff(k).clone()).valuation())
            .collect();
        let pass = valuations.iter().all(|v| v.at_least(window));
        if pass || doubled {
            return Ok(FredholmCheck {
                f: setup.problem().describe(),
                bound,
                window,
                doubled,
                valuations,
                pass,
            });
        }
        bound *= 2;
        doubled = true;
    }
}

// ---------------------------------------------------------------------------

/// A named built-in configuration.
#[derive(Clone, Debug)]
pub struct CorpusCase {
    pub name: String,
    pub config: ProblemConfig,
}

fn case(name: &'static str, p: u64, m: usize, n: usize, terms: &[(&[u32], &str)], kmax: usize) -> CorpusCase {
    let f = terms
        .iter()
        .map(|(d, c)| format!("{{ d = {:?}, c = \"{c}\" }}", d))
        .collect::<Vec<_>>()
        .join(", ");
    let d = terms.iter().map(|(d, _)| format!("{:?}", d)).collect::<Vec<_>>().join(", ");
    let text = format!("[problem]\np = {p}\nm = {m}\nn = {n}\nD = [{d}]\nf = [{f}]\n\n[run]\nkmax = {kmax}\n");
    CorpusCase {
        name: name.into(),
        config: ProblemConfig::from_toml(&text).expect("built-in configuration"),
    }
}

/// Desk-scale cases with `p in {2,3,5}`, `m, n in {1,2}`, `kmax >= 3`.
pub fn corpus() -> Vec<CorpusCase> {
    vec![
        case("x^3 over F_2", 2, 1, 1, &[(&[3], "1")], 4),
        case("x over F_2", 2, 1, 1, &[(&[1], "1")], 4),
        case("xy over F_2", 2, 1, 2, &[(&[1, 1], "1")], 4),
        case("x^2 over F_3", 3, 1, 1, &[(&[2], "1")], 4),
        case("x over F_3", 3, 1, 1, &[(&[1], "1")], 4),
        case("x^3 over F_4", 2, 2, 1, &[(&[3], "1")], 4),
        case("x^2 over F_9", 3, 2, 1, &[(&[2], "1")], 4),
        case("2x^2 over F_5", 5, 1, 1, &[(&[2], "2")], 4),
        case("x^5 over F_2", 2, 1, 1, &[(&[5], "1")], 4),
        case("x + y over F_2", 2, 1, 2, &[(&[1, 0], "1"), (&[0, 1], "1")], 4),
        case("x^2 + y^2 over F_3", 3, 1, 2, &[(&[2, 0], "1"), (&[0, 2], "1")], 4),
        case("x^4 + x over F_5", 5, 1, 1, &[(&[4], "1"), (&[1], "1")], 4),
        case("x^3 + g x over F_4", 2, 2, 1, &[(&[3], "1"), (&[1], "0,1")], 4),
        case("g x^2 over F_25", 5, 2, 1, &[(&[2], "0,1")], 3),
        case("xy over F_4", 2, 2, 2, &[(&[1, 1], "1")], 4),
        case("x^2 y + y^3 over F_3", 3, 1, 2, &[(&[2, 1], "1"), (&[0, 3], "2")], 4),
    ]
}

// ---------------------------------------------------------------------------

/// Deliberate corruption used to show that a suite can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Adds `pi` to every splitting-function coefficient before checking it.
    CorruptLambda,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub schema_version: u32,
    pub suites: Vec<SuiteResult>,
    pub pass: bool,
}

struct Suite {
    name: &'static str,
    checks: usize,
    failures: Vec<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn error(&mut self, what: &str, e: Error) {
        self.checks += 1;
        self.failures.push(format!("{what}: {e}"));
    }

    fn done(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            checks: self.checks,
            failures: self.failures,
        }
    }
}

/// Splitting-function congruence for `p in {2,3,5}`, `m in {1,2}`, `n <= 2q`.
pub fn lambda_suite(fault: Option<Fault>) -> SuiteResult {
    let mut s = Suite::new("splitting-function congruences");
    for p in [2u64, 3, 5] {
        for m in [1usize, 2] {
            let q = p.pow(m as u32);
            let lams = match lambda_coeffs(p, m, 2 * q) {
                Ok(l) => l,
                Err(e) => {
                    s.error("lambda table", e);
                    continue;
                }
            };
            for (n, lam) in lams.into_iter().enumerate() {
                let lam = match fault {
                    Some(Fault::CorruptLambda) => lam + ExactPiRational::pi_pow(p, 1),
                    None => lam,
                };
                let res = if fault.is_some() {
                    check_lambda_value(p, m, n as u64, &lam)
                } else {
                    check_lambda_congruence(p, m, n as u64)
                };
                match res {
                    Ok(c) => s.check(c.holds, || format!("p={p} m={m} n={n}: valuation {:?} below {}", c.valuation, c.bound)),
                    Err(e) => s.error("lambda check", e),
                }
            }
        }
    }
    s.done()
}

/// Minimum-mean-cycle density against enumeration up to length `|Sigma| + 2`,
/// and `delta(D) <= delta(D_I) + n - #I` for every `I`.
pub fn density_suite(cases: &[CorpusCase], budget: u128) -> SuiteResult {
    let mut s = Suite::new("density oracle");
    for c in cases {
        let Ok(pr) = c.config.build() else { continue };
        let set = pr.set();
        match analyze(set, pr.p(), budget) {
            Ok(a) => {
                let rmax = a.minimal_support().len() + 2;
                match density_upto(set, pr.p(), rmax, budget) {
                    Ok(d) => s.check(d == Density::Finite(a.density), || {
                        format!("{}: graph {} vs enumeration {d}", c.name, a.density)
                    }),
                    Err(e) => s.error(&c.name, e),
                }
                let n = set.dim() as i64;
                for idx in subsets(set.dim()) {
                    let (sub, _) = set.restrict(&idx);
                    match density(&sub, pr.p(), budget) {
                        Ok(Density::Finite(d)) => s.check(a.density <= d + Ratio::from_integer(n - idx.len() as i64), || {
                            format!("{}: delta {} exceeds delta_I + n - #I for I = {idx:?}", c.name, a.density)
                        }),
                        Ok(Density::Infinite) => s.check(true, String::new),
                        Err(e) => s.error(&c.name, e),
                    }
                }
            }
            Err(e) => s.error(&c.name, e),
        }
    }
    s.done()
}

/// Constant weight of digit sets, weight and minimality under shifts, and the
/// bijection between minimal solutions and products of digit sets.
pub fn structure_suite(cases: &[CorpusCase], budget: u128) -> SuiteResult {
    let mut s = Suite::new("solution structure");
    for c in cases {
        let Ok(pr) = c.config.build() else { continue };
        let (set, p) = (pr.set(), pr.p());
        let a = match analyze(set, p, budget) {
            Ok(a) => a,
            Err(e) => {
                s.error(&c.name, e);
                continue;
            }
        };
        let rmax = 4usize;
        let small = (p as u128).checked_pow((rmax * set.len()) as u32).is_some_and(|x| x <= budget / 10);
        let rmax = if small { rmax } else { 2 };
        // Digit sets read off minimal solutions have one weight per edge.
        match digit_sets_from_solutions(set, p, &a, rmax, budget) {
            Ok(map) => {
                for ((from, to), digits) in &map {
                    let weights: std::collections::BTreeSet<u64> = digits.iter().map(|v| v.iter().sum()).collect();
                    s.check(weights.len() == 1, || format!("{}: V({from:?},{to:?}) has weights {weights:?}", c.name));
                    let from_graph = a.digit_map().get(&(from.clone(), to.clone())).cloned().unwrap_or_default();
                    let from_graph: std::collections::BTreeSet<Vec<u64>> = from_graph.into_iter().collect();
                    s.check(&from_graph == digits, || format!("{}: V({from:?},{to:?}) differs from the graph", c.name));
                }
            }
            Err(e) => s.error(&c.name, e),
        }
        for r in 1..=rmax.min(3) {
            let Some(w) = a.minimal_weight(r) else { continue };
            match enumerate_solutions(set, p, r, budget) {
                Ok(sols) => {
                    for u in sols.iter().filter(|u| u.weight() == w) {
                        let sh = u.shift();
                        s.check(sh.weight() == w && sh.is_solution(set), || format!("{}: shift of {:?} not minimal", c.name, u.values()));
                        let sup = u.support(set);
                        let sup2 = sh.support(set);
                        s.check((0..r).all(|i| sup2[i] == sup[(i + 1) % r]), || format!("{}: shifted support of {:?}", c.name, u.values()));
                    }
                }
                Err(e) => s.error(&c.name, e),
            }
        }
        match check_digit_bijection(set, p, &a, rmax, budget) {
            Ok(checks) => {
                for b in checks {
                    s.check(b.mismatches.is_empty(), || format!("{}: {:?}", c.name, b.mismatches));
                }
            }
            Err(e) => s.error(&c.name, e),
        }
    }
    s.done()
}

/// Determinants of `(f_{q i - j})` over at most three indices against their
/// expansion in cyclic minors.
pub fn cyclic_minor_suite(cases: &[CorpusCase], budget: u128) -> SuiteResult {
    let mut s = Suite::new("cyclic minors");
    for c in cases {
        let Ok(pr) = c.config.build() else { continue };
        let setup = match Setup::new(pr, 2, None, budget) {
            Ok(x) => x,
            Err(e) => {
                s.error(&c.name, e);
                continue;
            }
        };
        let n = setup.problem().n();
        let full: Vec<usize> = (0..n).collect();
        let b = if n == 1 { 4 } else { 2 };
        let idx = support_indices(n, &full, b);
        let table = match fm_coefficients(&setup, setup.problem().m(), &table_extent(&setup, b)) {
            Ok(t) => t,
            Err(e) => {
                s.error(&c.name, e);
                continue;
            }
        };
        for size in 1..=3usize.min(idx.len()) {
            for start in 0..idx.len().saturating_sub(size - 1).min(3) {
                let f: Vec<Vec<usize>> = idx[start..start + size].to_vec();
                match cyclic_minor_check(&setup, &table, &f) {
                    Ok(ok) => s.check(ok, || format!("{}: indices {f:?}", c.name)),
                    Err(e) => s.error(&c.name, e),
                }
            }
        }
    }
    s.done()
}

/// Fredholm route against the exact L-series.
pub fn fredholm_suite(cases: &[CorpusCase], budget: u128) -> (SuiteResult, Vec<FredholmCheck>) {
    let mut s = Suite::new("Fredholm determinants");
    let mut out = Vec::new();
    for c in cases {
        let Ok(pr) = c.config.build() else { continue };
        let run = || -> Result<FredholmCheck> {
            let kmax = c.config.run.kmax.min(3);
            let setup = Setup::new(pr.clone(), kmax, None, budget)?;
            let exact = l_series(setup.problem(), kmax, budget)?.embed(setup.ram())?;
            fredholm_check(&setup, &exact)
        };
        match run() {
            Ok(fc) => {
                s.check(fc.pass, || format!("{}: valuations {:?} below window {}", c.name, fc.valuations, fc.window));
                out.push(fc);
            }
            Err(e) => s.error(&c.name, e),
        }
    }
    (s.done(), out)
}

/// Cases whose Fredholm matrices stay small.
pub fn fredholm_cases() -> Vec<CorpusCase> {
    let keep = ["x^3 over F_2", "x over F_2", "xy over F_2", "x^2 over F_3", "x over F_3", "x^5 over F_2", "2x^2 over F_5", "x^3 over F_4"];
    corpus().into_iter().filter(|c| keep.contains(&c.name.as_str())).collect()
}

/// The congruence on every corpus case.
pub fn congruence_suite(cases: &[CorpusCase]) -> SuiteResult {
    let mut s = Suite::new("congruence");
    for c in cases {
        match verify_congruence(&c.config) {
            Ok(r) => s.check(r.verdict.is_pass(), || format!("{}: verdict fail", c.name)),
            Err(e) => s.error(&c.name, e),
        }
    }
    s.done()
}

/// Runs every suite on the built-in corpus.
pub fn selftest(fault: Option<Fault>, budget: u128) -> SelftestReport {
    selftest_on(&corpus(), fault, budget)
}

/// Runs every suite; the Fredholm suite always uses [`fredholm_cases`].
pub fn selftest_on(cases: &[CorpusCase], fault: Option<Fault>, budget: u128) -> SelftestReport {
    let suites = vec![
        lambda_suite(fault),
        density_suite(cases, budget),
        structure_suite(cases, budget),
        cyclic_minor_suite(cases, budget),
        fredholm_suite(&fredholm_cases(), budget).0,
        congruence_suite(cases),
    ];
    let pass = suites.iter().all(SuiteResult::pass);
    SelftestReport {
        schema_version: SCHEMA_VERSION,
        suites,
        pass,
    }
}

pub fn render_selftest(r: &SelftestReport) -> String {
    let mut s = String::new();
    for suite in &r.suites {
        let _ = writeln!(
            s,
            "{:<34} {:>5} checks  {}",
            suite.name,
            suite.checks,
            if suite.pass() { "PASS" } else { "FAIL" }
        );
        for f in suite.failures.iter().take(5) {
            let _ = writeln!(s, "    {f}");
        }
    }
    let _ = writeln!(s, "selftest: {}", if r.pass { "PASS" } else { "FAIL" });
    s
}

/// Digit matrix of the full set, for display.
pub fn digit_matrix_rows(setup: &Setup) -> Result<(Vec<Vec<u32>>, Vec<Vec<String>>)> {
    let full: Vec<usize> = (0..setup.problem().n()).collect();
    let f = rhs_factor(setup, &full, SignConvention::Proof)?;
    let m = &f.digit_matrix.matrix;
    let rows = (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| describe_coeff(m.get(i, j))).collect())
        .collect();
    Ok((f.digit_matrix.labels, rows))
}

/// Whether every subset's density could be computed: a convenience for callers
/// that want the qualifying sets without running the whole check.
pub fn qualifying_coordinates(setup: &Setup) -> Result<Vec<Vec<usize>>> {
    Ok(qualifying_subsets(setup)?
        .into_iter()
        .map(|(i, _)| i.into_iter().map(|x| x + 1).collect())
        .collect())
}

/// Integer coefficients for display, when they are integers.
pub fn integer_coeffs(s: &TruncatedSeries<PadicScalar>) -> Option<Vec<BigInt>> {
    crate::lfun::as_integers(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(name: &str) -> ProblemConfig {
        corpus().into_iter().find(|c| c.name == name).unwrap().config
    }

    #[test]
    fn flagship_passes_exactly() {
        let r = verify_congruence(&cfg("x^3 over F_2")).unwrap();
        assert!(r.verdict.is_pass());
        assert_eq!(r.delta, "1/2");
        assert_eq!(r.lhs, vec!["1", "0", "2", "0", "0"]);
        for row in &r.variants[0].rows {
            assert!(matches!(row.valuation, Valuation::AtLeast(_)));
        }
    }

    #[test]
    fn correction_decides_linear_case() {
        let r = verify_congruence(&cfg("x over F_2")).unwrap();
        assert!(r.verdict.is_pass());
        let off = r.variants.iter().find(|v| !v.correction_applied).unwrap();
        assert_eq!(off.verdict, Verdict::Fail);
        assert_eq!(off.rows[1].valuation, Valuation::Exact(1));
        assert_eq!(off.rows[1].threshold, 2);
        let mut c = cfg("x over F_2");
        c.run.empty_correction = Correction::Off;
        assert_eq!(verify_congruence(&c).unwrap().verdict, Verdict::Fail);
    }

    #[test]
    fn xy_difference_at_degree_one() {
        let r = verify_congruence(&cfg("xy over F_2")).unwrap();
        assert!(r.verdict.is_pass());
        assert_eq!(r.variants[0].rows[1].valuation, Valuation::Exact(2));
    }

    #[test]
    fn curves() {
        for (name, want) in [("x^3 over F_2", true), ("x^3 over F_4", true), ("x over F_2", true)] {
            let r = verify_curve(&cfg(name)).unwrap();
            assert_eq!(r.verdict.is_pass(), want, "{}", render_report(&r));
        }
        let mut c = cfg("x over F_2");
        c.run.empty_correction = Correction::Off;
        assert_eq!(verify_curve(&c).unwrap().verdict, Verdict::Fail);
    }

    #[test]
    fn reports_are_deterministic() {
        let c = cfg("x^2 + y^2 over F_3");
        let a = serde_json::to_string(&verify_congruence(&c).unwrap()).unwrap();
        let b = serde_json::to_string(&verify_congruence(&c).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn kmax_reduced_by_budget() {
        let mut c = cfg("x^2 over F_3");
        c.run.rmax_budget = 30;
        let r = verify_congruence(&c).unwrap();
        assert_eq!(r.kmax, 3);
        assert!(render_report(&r).contains("reduced"));
        c.run.rmax_budget = 2;
        assert!(matches!(verify_congruence(&c), Err(Error::Budget { .. })));
    }

    #[test]
    fn lambda_fault_is_detected() {
        assert!(lambda_suite(None).pass());
        assert!(!lambda_suite(Some(Fault::CorruptLambda)).pass());
    }
}

#[cfg(test)]
mod corpus_tests {
    use super::*;

    #[test]
    fn selftest_passes_on_corpus() {
        let r = selftest(None, 10_000_000);
        println!("{}", render_selftest(&r));
        assert!(r.pass);
    }
}
