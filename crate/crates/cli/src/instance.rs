//! Instance files: `{"kind": ..., "payload": {...}, "options": {...}}`.

use std::fmt;
use std::path::Path;

use adaptroot_core::knapsack::KnapsackDual;
use adaptroot_core::pellet::Trinomial;
use adaptroot_core::secular::{Method, SecularProblem};
use adaptroot_core::SolverConfig;
use clap::ValueEnum;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Secular,
    Knapsack,
    Trinomial,
    Pellet,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Secular => "secular",
            Kind::Knapsack => "knapsack",
            Kind::Trinomial => "trinomial",
            Kind::Pellet => "pellet",
        })
    }
}

/// Per-file overrides. Command-line flags win over these.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub method: Option<String>,
    pub root: Option<usize>,
    pub f_tol: Option<f64>,
    pub step_tol: Option<f64>,
    pub inner_tol: Option<f64>,
    pub max_iters: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    kind: Kind,
    payload: serde_json::Value,
    #[serde(default)]
    options: Options,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SecularPayload {
    b: Vec<f64>,
    d: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KnapsackPayload {
    alpha: Vec<f64>,
    beta: Vec<f64>,
    budget: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TrinomialPayload {
    a: f64,
    b: f64,
    c: f64,
    n: u32,
    k: u32,
}

/// Coefficient moduli, constant term first, and the gap index.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PelletPayload {
    pub moduli: Vec<f64>,
    pub ell: usize,
}

#[derive(Debug, Clone)]
pub enum Problem {
    Secular(SecularProblem),
    Knapsack(KnapsackDual),
    Trinomial(Trinomial),
    Pellet(PelletPayload),
}

impl Problem {
    pub fn kind(&self) -> Kind {
        match self {
            Problem::Secular(_) => Kind::Secular,
            Problem::Knapsack(_) => Kind::Knapsack,
            Problem::Trinomial(_) => Kind::Trinomial,
            Problem::Pellet(_) => Kind::Pellet,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub problem: Problem,
    pub options: Options,
}

impl Instance {
    pub fn load(path: &Path, expected: Kind) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        let inst = Self::parse(&text).map_err(|e| match e {
            CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
            other => other,
        })?;
        if inst.problem.kind() != expected {
            return Err(CliError::Input(format!(
                "{}: file holds a {} instance, not {expected}",
                path.display(),
                inst.problem.kind()
            )));
        }
        Ok(inst)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawFile = serde_json::from_str(text).map_err(|e| CliError::Input(format!("parse error: {e}")))?;
        let kind = raw.kind;
        let payload_err = |e: serde_json::Error| CliError::Input(format!("invalid {kind} payload: {e}"));
        let invalid = |e: adaptroot_core::Error| CliError::Input(format!("invalid {kind} payload: {e}"));
        let problem = match kind {
            Kind::Secular => {
                let p: SecularPayload = serde_json::from_value(raw.payload).map_err(payload_err)?;
                Problem::Secular(SecularProblem::new(p.b, p.d).map_err(invalid)?)
            }
            Kind::Knapsack => {
                let p: KnapsackPayload = serde_json::from_value(raw.payload).map_err(payload_err)?;
                Problem::Knapsack(KnapsackDual::new(p.alpha, p.beta, p.budget).map_err(invalid)?)
            }
            Kind::Trinomial => {
                let p: TrinomialPayload = serde_json::from_value(raw.payload).map_err(payload_err)?;
                Problem::Trinomial(Trinomial::new(p.a, p.b, p.c, p.n, p.k).map_err(invalid)?)
            }
            Kind::Pellet => {
                let p: PelletPayload = serde_json::from_value(raw.payload).map_err(payload_err)?;
                if p.moduli.iter().any(|&m| !(m >= 0.0 && m.is_finite())) {
                    return Err(CliError::Input(format!(
                        "invalid {kind} payload: moduli must be finite and non-negative"
                    )));
                }
                Problem::Pellet(p)
            }
        };
        Ok(Instance {
            problem,
            options: raw.options,
        })
    }

    /// Solver settings: defaults, then file options, then flags.
    pub fn config(&self, tol: Option<f64>, max_iters: Option<usize>) -> Result<SolverConfig, CliError> {
        let mut cfg = SolverConfig::default();
        let o = &self.options;
        if let Some(v) = o.f_tol {
            cfg.f_tol = v;
        }
        if let Some(v) = o.step_tol {
            cfg.step_tol = v;
        }
        if let Some(v) = o.inner_tol {
            cfg.inner_tol = v;
        }
        if let Some(v) = o.max_iters {
            cfg.max_iters = v;
        }
        if let Some(v) = tol {
            cfg.f_tol = v;
        }
        if let Some(v) = max_iters {
            cfg.max_iters = v;
        }
        cfg.validate().map_err(|e| CliError::Input(e.to_string()))?;
        Ok(cfg)
    }

    /// Secular method from the flag, else the file, else BNS.
    pub fn method(&self, flag: Option<&str>) -> Result<Method, CliError> {
        let name = flag.or(self.options.method.as_deref());
        match (self.problem.kind(), name) {
            (Kind::Secular, None) => Ok(Method::Bns),
            (Kind::Secular, Some(s)) => s.parse().map_err(|e: adaptroot_core::Error| CliError::Input(e.to_string())),
            (kind, Some(s)) if s != "default" => Err(CliError::Input(format!(
                "--method applies only to secular instances ({kind} has a single method)"
            ))),
            _ => Ok(Method::Bns),
        }
    }

    pub fn root(&self, flag: Option<usize>) -> Option<usize> {
        flag.or(self.options.root)
    }
}
