//! The generic iteration driver and its trace record.

use std::fmt;

use crate::error::{Error, Result};
use crate::function::ScalarFunction;

/// Tolerances and limits shared by every solver.
///
/// `f_tol` is interpreted relative to the problem's natural magnitude by the
/// specialized solvers (secular, knapsack, pellet); [`iterate`] itself uses
/// it as an absolute residual bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Residual tolerance: stop when `|f(x_k)| <= f_tol`.
    pub f_tol: f64,
    /// Stagnation tolerance: stop when `|x_k - x_{k-1}| <= step_tol * (1 + |x_k|)`.
    pub step_tol: f64,
    pub max_iters: usize,
    /// Tolerance for nested solves (the knapsack inverse function).
    pub inner_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            f_tol: 1e-13,
            step_tol: 1e-14,
            max_iters: 100,
            inner_tol: 1e-15,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v >= 0.0;
        if !ok(self.f_tol) || !ok(self.step_tol) || !ok(self.inner_tol) {
            return Err(Error::invalid("tolerances must be finite and non-negative"));
        }
        if self.f_tol == 0.0 && self.step_tol == 0.0 {
            return Err(Error::invalid("f_tol and step_tol cannot both be zero"));
        }
        if self.max_iters == 0 {
            return Err(Error::invalid("max_iters must be at least 1"));
        }
        Ok(())
    }

    /// Copy with the residual tolerance multiplied by `scale`.
    pub fn scaled(&self, scale: f64) -> SolverConfig {
        SolverConfig {
            f_tol: self.f_tol * scale,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Termination {
    Converged,
    MaxIters,
    LeftDomain,
    Breakdown,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Termination::Converged => "Converged",
            Termination::MaxIters => "MaxIters",
            Termination::LeftDomain => "LeftDomain",
            Termination::Breakdown => "Breakdown",
        };
        f.write_str(s)
    }
}

/// Ordered record of the iterates `(x_k, f(x_k))` of one run.
///
/// Iterates that leave the domain are never recorded; the offending value is
/// kept in `escaped`. A step that returns the current point exactly is
/// counted in `steps` but not recorded again.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub iterates: Vec<(f64, f64)>,
    pub termination: Termination,
    /// Final accepted iterate; present iff `termination == Converged`.
    pub root: Option<f64>,
    /// Number of stepper invocations.
    pub steps: usize,
    /// Size of the last step taken (0 if none).
    pub last_step: f64,
    pub escaped: Option<f64>,
    /// Error text for `Breakdown` terminations.
    pub note: Option<String>,
}

impl IterationTrace {
    fn start(x0: f64, fx0: f64) -> Self {
        IterationTrace {
            iterates: vec![(x0, fx0)],
            termination: Termination::MaxIters,
            root: None,
            steps: 0,
            last_step: 0.0,
            escaped: None,
            note: None,
        }
    }

    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        self.iterates.iter().map(|&(x, _)| x)
    }

    pub fn last(&self) -> (f64, f64) {
        *self.iterates.last().expect("trace is never empty")
    }

    /// Applies a change of variables to every recorded abscissa (and the
    /// root). Function values are kept.
    pub fn map_x(mut self, map: impl Fn(f64) -> f64) -> Self {
        for it in &mut self.iterates {
            it.0 = map(it.0);
        }
        self.root = self.root.map(&map);
        self.escaped = self.escaped.map(&map);
        self
    }
}

/// One iteration of a root-finding method: maps the current iterate and its
/// function value to the next iterate.
pub trait Stepper {
    fn step(&mut self, x: f64, fx: f64) -> Result<f64>;
}

impl<T: FnMut(f64, f64) -> Result<f64>> Stepper for T {
    fn step(&mut self, x: f64, fx: f64) -> Result<f64> {
        self(x, fx)
    }
}

/// Runs `stepper` from `x0` until the residual or step test is met, an
/// iterate leaves `f`'s domain, the stepper breaks down, or `cfg.max_iters`
/// steps have been taken.
///
/// Only a bad starting point or configuration is an `Err`; everything that
/// happens during iteration is recorded in the trace.
pub fn iterate<F, S>(f: &F, mut stepper: S, x0: f64, cfg: &SolverConfig) -> Result<IterationTrace>
where
    F: ScalarFunction + ?Sized,
    S: Stepper,
{
    cfg.validate()?;
    let domain = f.domain();
    if !domain.contains(x0) {
        return Err(Error::PreconditionViolated(format!(
            "starting point {x0} outside domain ({}, {})",
            domain.lo, domain.hi
        )));
    }
    let fx0 = f.eval(x0)?;
    let mut trace = IterationTrace::start(x0, fx0);
    if fx0.abs() <= cfg.f_tol {
        trace.termination = Termination::Converged;
        trace.root = Some(x0);
        return Ok(trace);
    }

    let (mut x, mut fx) = (x0, fx0);
    for _ in 0..cfg.max_iters {
        let next = match stepper.step(x, fx) {
            Ok(v) => v,
            Err(e) => return Ok(trace.broken(e.to_string())),
        };
        trace.steps += 1;
        if next.is_nan() {
            return Ok(trace.broken(format!("step from {x} produced NaN")));
        }
        if !domain.contains(next) {
            trace.termination = Termination::LeftDomain;
            trace.escaped = Some(next);
            return Ok(trace);
        }
        let step = (next - x).abs();
        trace.last_step = step;
        if step == 0.0 {
            trace.termination = Termination::Converged;
            trace.root = Some(x);
            return Ok(trace);
        }
        let fnext = match f.eval(next) {
            Ok(v) => v,
            Err(e) => return Ok(trace.broken(e.to_string())),
        };
        if !fnext.is_finite() {
            return Ok(trace.broken(format!("f({next}) = {fnext}")));
        }
        trace.iterates.push((next, fnext));
        x = next;
        fx = fnext;
        if fx.abs() <= cfg.f_tol || step <= cfg.step_tol * (1.0 + x.abs()) {
            trace.termination = Termination::Converged;
            trace.root = Some(x);
            return Ok(trace);
        }
    }
    trace.termination = Termination::MaxIters;
    Ok(trace)
}

impl IterationTrace {
    fn broken(mut self, note: String) -> Self {
        self.termination = Termination::Breakdown;
        self.note = Some(note);
        self
    }
}
