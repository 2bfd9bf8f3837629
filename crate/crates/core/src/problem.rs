//! A polynomial `f` over `F_q` with exponents in a fixed set `D`, and its
//! TOML description.

use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::density::ExponentSet;
use crate::error::{Error, Result};
use crate::ff::{make_field, FFElement, FieldCtx, SparsePoly};

/// `f = sum_{d in D} c_d x^d` with `c_d in F_q`, `q = p^m`.
#[derive(Clone, Debug)]
pub struct Problem {
    p: u64,
    m: usize,
    set: ExponentSet,
    /// Coefficient of each vector of `set`, zero when absent from `f`.
    coeffs: Vec<FFElement>,
    field: Arc<FieldCtx>,
    poly: SparsePoly,
}

impl Problem {
    /// `terms` pairs an exponent with its coefficient in the basis `1, g, g^2, ...`
    /// of `F_q`; every exponent must belong to `d`.
    pub fn new(
        p: u64,
        m: usize,
        n: usize,
        d: Vec<Vec<u32>>,
        terms: &[(Vec<u32>, Vec<u64>)],
    ) -> Result<Self> {
        let field = Arc::new(make_field(p, m)?);
        let set = ExponentSet::new(n, d)?;
        let mut coeffs = vec![field.zero(); set.len()];
        let mut seen = vec![false; set.len()];
        for (exp, c) in terms {
            let k = set
                .vectors()
                .iter()
                .position(|v| v == exp)
                .ok_or_else(|| Error::Argument(format!("exponent {exp:?} of f is not in D")))?;
            if seen[k] {
                return Err(Error::Argument(format!("exponent {exp:?} appears twice in f")));
            }
            if let Some(&bad) = c.iter().find(|&&x| x >= p) {
                return Err(Error::Argument(format!("coefficient digit {bad} is not below p = {p}")));
            }
            seen[k] = true;
            coeffs[k] = field.element(c)?;
        }
        let poly = SparsePoly::new(
            n,
            set.vectors()
                .iter()
                .cloned()
                .zip(coeffs.iter().cloned())
                .filter(|(_, c)| !field.is_zero(c)),
        )?;
        Ok(Problem {
            p,
            m,
            set,
            coeffs,
            field,
            poly,
        })
    }

    /// One-variable shorthand: `f = sum c x^d` over `F_q`, `D` = the exponents listed.
    pub fn univariate(p: u64, m: usize, terms: &[(u32, Vec<u64>)]) -> Result<Self> {
        let d: Vec<Vec<u32>> = terms.iter().map(|(e, _)| vec![*e]).collect();
        let t: Vec<(Vec<u32>, Vec<u64>)> = terms.iter().map(|(e, c)| (vec![*e], c.clone())).collect();
        Self::new(p, m, 1, d, &t)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.set.dim()
    }

    pub fn q(&self) -> u64 {
        self.field.size()
    }

    pub fn set(&self) -> &ExponentSet {
        &self.set
    }

    pub fn coeffs(&self) -> &[FFElement] {
        &self.coeffs
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn poly(&self) -> &SparsePoly {
        &self.poly
    }

    /// Human-readable `f`, e.g. `x1^3 + [0,1]*x1`.
    pub fn describe(&self) -> String {
        let terms: Vec<String> = self
            .set
            .vectors()
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !self.field.is_zero(c))
            .map(|(d, c)| {
                let mono: Vec<String> = d
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
                    .collect();
                let coeff = if *c == self.field.one() {
                    String::new()
                } else if self.m == 1 {
                    format!("{}*", c.coeffs()[0])
                } else {
                    format!("{:?}*", c.coeffs())
                };
                format!("{coeff}{}", mono.join("*"))
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// How the factor for the empty coordinate set is handled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Correction {
    /// Applied exactly when `n` equals the density.
    #[default]
    Auto,
    On,
    Off,
}

impl FromStr for Correction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Correction::Auto),
            "on" => Ok(Correction::On),
            "off" => Ok(Correction::Off),
            _ => Err(Error::Config(format!("unknown empty_correction {s:?}"))),
        }
    }
}

/// Scaling of the digit-matrix factor for a coordinate set `I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SignConvention {
    /// `q^{n-#I} pi^{m(p-1)delta_I}`.
    #[default]
    Proof,
    /// `pi^{m(p-1)delta}` for every factor.
    Literal,
    /// Run both.
    Both,
}

fn default_kmax() -> usize {
    4
}

fn default_budget() -> u64 {
    10_000_000
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub d: Vec<u32>,
    /// Comma-separated residues mod `p`: coefficients of `1, g, g^2, ...`.
    pub c: String,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub p: u64,
    pub m: usize,
    pub n: usize,
    #[serde(rename = "D")]
    pub d: Vec<Vec<u32>>,
    pub f: Vec<TermSpec>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default = "default_kmax")]
    pub kmax: usize,
    #[serde(default = "default_budget")]
    pub rmax_budget: u64,
    #[serde(default)]
    pub precision: Option<u32>,
    #[serde(default)]
    pub empty_correction: Correction,
    #[serde(default)]
    pub sign_convention: SignConvention,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            kmax: default_kmax(),
            rmax_budget: default_budget(),
            precision: None,
            empty_correction: Correction::Auto,
            sign_convention: SignConvention::Proof,
        }
    }
}

/// Contents of a configuration file.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub problem: ProblemSection,
    #[serde(default)]
    pub run: RunSection,
}

/// Parses `"1"`, `"0,1"`, `" 2 , 0 "` into residues.
pub fn parse_coeff(s: &str) -> Result<Vec<u64>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Config("empty coefficient string".into()));
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::Config(format!("bad coefficient entry {t:?} in {s:?}")))
        })
        .collect()
}

impl ProblemConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(Error::Config("configuration is empty".into()));
        }
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn build(&self) -> Result<Problem> {
        let pr = &self.problem;
        let terms: Vec<(Vec<u32>, Vec<u64>)> = pr
            .f
            .iter()
            .map(|t| Ok((t.d.clone(), parse_coeff(&t.c)?)))
            .collect::<Result<_>>()?;
        if self.run.kmax == 0 {
            return Err(Error::Config("kmax must be positive".into()));
        }
        Problem::new(pr.p, pr.m, pr.n, pr.d.clone(), &terms)
    }

    /// Configuration for `problem` with default run settings.
    pub fn for_problem(problem: &Problem) -> Self {
        let f = problem
            .set()
            .vectors()
            .iter()
            .zip(problem.coeffs())
            .filter(|(_, c)| !problem.field().is_zero(c))
            .map(|(d, c)| TermSpec {
                d: d.clone(),
                c: c.coeffs().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
            })
            .collect();
        ProblemConfig {
            problem: ProblemSection {
                p: problem.p(),
                m: problem.m(),
                n: problem.n(),
                d: problem.set().vectors().to_vec(),
                f,
            },
            run: RunSection::default(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_full_config() {
        let text = r#"
            [problem]
            p = 2
            m = 2
            n = 1
            D = [[3], [1]]
            f = [{ d = [3], c = "1" }, { d = [1], c = "0,1" }]

            [run]
            kmax = 5
            empty_correction = "off"
            sign_convention = "both"
        "#;
        let cfg = ProblemConfig::from_toml(text).unwrap();
        assert_eq!(cfg.run.kmax, 5);
        assert_eq!(cfg.run.empty_correction, Correction::Off);
        assert_eq!(cfg.run.sign_convention, SignConvention::Both);
        let pr = cfg.build().unwrap();
        assert_eq!(pr.q(), 4);
        assert_eq!(pr.coeffs()[1], pr.field().generator());
        assert_eq!(pr.describe(), "x1^3 + [0, 1]*x1");
    }

    #[test]
    fn defaults_and_errors() {
        let text = "[problem]\np = 3\nm = 1\nn = 1\nD = [[2]]\nf = [{ d = [2], c = \"1\" }]\n";
        let cfg = ProblemConfig::from_toml(text).unwrap();
        assert_eq!(cfg.run, RunSection::default());
        assert!(matches!(ProblemConfig::from_toml(""), Err(Error::Config(_))));
        assert!(ProblemConfig::from_toml("[problem]\np = 3").is_err());
        let bad = text.replace("d = [2]", "d = [1]");
        assert!(ProblemConfig::from_toml(&bad).unwrap().build().is_err());
        let bad = text.replace("p = 3", "p = 4");
        assert!(ProblemConfig::from_toml(&bad).unwrap().build().is_err());
        let bad = text.replace("c = \"1\"", "c = \"x\"");
        assert!(ProblemConfig::from_toml(&bad).unwrap().build().is_err());
        let bad = text.replace("D = [[2]]", "D = [[2], [2]]");
        assert!(ProblemConfig::from_toml(&bad).unwrap().build().is_err());
    }

    #[test]
    fn round_trip_through_toml() {
        let pr = Problem::new(3, 1, 2, vec![vec![1, 1], vec![2, 0]], &[(vec![1, 1], vec![2])]).unwrap();
        let cfg = ProblemConfig::for_problem(&pr);
        let text = toml::to_string(&cfg).unwrap();
        let back = ProblemConfig::from_toml(&text).unwrap();
        assert_eq!(back.problem.f, cfg.problem.f);
    }
}
