//! `solve`: run the solver for an instance and report each root.

use std::io::Write;
use std::path::{Path, PathBuf};

use adaptroot_core::oracle::{bisect, bracket_inside};
use adaptroot_core::pellet::{pellet_radii_general, Trinomial};
use adaptroot_core::secular::Method;
use adaptroot_core::{Error, FnScalar, IterationTrace, ScalarFunction, SolverConfig};

use crate::instance::{Instance, PelletPayload, Problem};
use crate::{csv_float, root_float, CliError};

/// One solved (or failed) root.
#[derive(Debug, Clone)]
pub struct RootOutcome {
    pub index: usize,
    pub root: Option<f64>,
    pub iterations: usize,
    pub termination: String,
    pub trace: Option<IterationTrace>,
}

impl RootOutcome {
    fn from_trace(index: usize, trace: IterationTrace) -> Self {
        RootOutcome {
            index,
            root: trace.root,
            iterations: trace.steps,
            termination: trace.termination.to_string(),
            trace: Some(trace),
        }
    }

    pub fn converged(&self) -> bool {
        self.root.is_some()
    }
}

pub struct SolveRequest<'a> {
    pub instance: &'a Instance,
    pub method: Method,
    pub cfg: SolverConfig,
    pub root: Option<usize>,
    pub jobs: Option<usize>,
}

fn solver_error(e: Error) -> CliError {
    match e {
        Error::MaxIters(_) | Error::Breakdown(_) => CliError::NoConvergence(e.to_string()),
        other => CliError::Input(other.to_string()),
    }
}

fn check_index(index: Option<usize>, count: usize) -> Result<(), CliError> {
    match index {
        Some(i) if i >= count => Err(CliError::Input(format!(
            "--root {i} out of range: the instance has {count} root(s), numbered from 0"
        ))),
        _ => Ok(()),
    }
}

pub fn solve(req: &SolveRequest<'_>) -> Result<Vec<RootOutcome>, CliError> {
    let cfg = &req.cfg;
    match &req.instance.problem {
        Problem::Secular(p) => {
            let count = p.n().saturating_sub(1);
            check_index(req.root, count)?;
            let results = match req.root {
                Some(i) => vec![p.solve_root(i, req.method, cfg)],
                None => {
                    let run = || p.solve_all_roots(req.method, cfg);
                    match req.jobs {
                        Some(n) => rayon::ThreadPoolBuilder::new()
                            .num_threads(n)
                            .build()
                            .map_err(|e| CliError::Input(format!("--jobs: {e}")))?
                            .install(run),
                        None => run(),
                    }
                    .map_err(solver_error)?
                }
            };
            results
                .into_iter()
                .map(|r| {
                    let r = r.map_err(solver_error)?;
                    Ok(RootOutcome {
                        index: r.index,
                        root: r.root(),
                        iterations: r.iterations(),
                        termination: r.shifted.termination.to_string(),
                        trace: Some(r.trace()),
                    })
                })
                .collect()
        }
        Problem::Knapsack(k) => {
            check_index(req.root, 1)?;
            let trace = k.solve(cfg).map_err(solver_error)?;
            Ok(vec![RootOutcome::from_trace(0, trace)])
        }
        Problem::Trinomial(t) => {
            check_index(req.root, 2)?;
            let pair = t.solve_radii(cfg).map_err(solver_error)?;
            let to_x = |tr: IterationTrace| tr.map_x(|z| t.to_x(z));
            let mut out = vec![
                RootOutcome {
                    root: Some(pair.r1),
                    ..RootOutcome::from_trace(0, to_x(pair.trace_lower))
                },
                RootOutcome {
                    root: Some(pair.r2),
                    ..RootOutcome::from_trace(1, to_x(pair.trace_upper))
                },
            ];
            if pair.near_degenerate {
                for o in &mut out {
                    o.termination = "NearDegenerate".into();
                }
            }
            Ok(select(out, req.root))
        }
        Problem::Pellet(p) => {
            check_index(req.root, 2)?;
            let radii = pellet_radii_general(&p.moduli, p.ell)
                .map_err(|e| CliError::Input(e.to_string()))?
                .ok_or_else(|| {
                    CliError::Input("not applicable: the comparison polynomial has no negative values on (0, inf)".into())
                })?;
            let direct = |index, r| RootOutcome {
                index,
                root: Some(r),
                iterations: 0,
                termination: "Direct".into(),
                trace: None,
            };
            Ok(select(vec![direct(0, radii.inner), direct(1, radii.outer)], req.root))
        }
    }
}

fn select(all: Vec<RootOutcome>, root: Option<usize>) -> Vec<RootOutcome> {
    match root {
        Some(i) => all.into_iter().filter(|o| o.index == i).collect(),
        None => all,
    }
}

/// `q(x) = Σ_{j≠ℓ} m_j xʲ − m_ℓ x^ℓ`.
pub fn pellet_q(p: &PelletPayload, x: f64) -> f64 {
    let mut acc = 0.0;
    for (j, &m) in p.moduli.iter().enumerate().rev() {
        let term = m * x.powi(j as i32);
        acc += if j == p.ell { -term } else { term };
    }
    acc
}

/// Independent reference root by plain bisection. `claimed` only seeds the
/// search for a right end in the pellet case.
pub fn oracle_root(problem: &Problem, index: usize, claimed: f64) -> Result<f64, CliError> {
    let fail = |e: Error| CliError::Verify(format!("oracle for root {index}: {e}"));
    match problem {
        Problem::Secular(p) => {
            let d = p.d();
            let br = bracket_inside(p, d[index], d[index + 1]).map_err(fail)?;
            bisect(p, br, 0.0).map_err(fail)
        }
        Problem::Knapsack(k) => {
            let cfg = SolverConfig::default();
            let f = k.as_function(&cfg);
            let br = bracket_inside(&f, 0.0, k.gamma()).map_err(fail)?;
            bisect(&f, br, 0.0).map_err(fail)
        }
        Problem::Trinomial(t) => trinomial_oracle(t, index).map_err(fail),
        Problem::Pellet(p) => {
            let q = FnScalar::new(|x| pellet_q(p, x));
            let m = pellet_negative_point(p)
                .ok_or_else(|| CliError::Verify("oracle: q has no negative sample".into()))?;
            let br = if index == 0 {
                bracket_inside(&q, 0.0, m)
            } else {
                bracket_inside(&q, m, grow_until_positive(&q, 2.0 * m.max(claimed)))
            }
            .map_err(fail)?;
            bisect(&q, br, 0.0).map_err(fail)
        }
    }
}

fn grow_until_positive(f: &impl ScalarFunction, mut x: f64) -> f64 {
    for _ in 0..2000 {
        if matches!(f.eval(x), Ok(v) if v > 0.0) {
            break;
        }
        x *= 2.0;
    }
    x
}

/// Smallest sample of `q(x)/x^ℓ` on a fine logarithmic grid between the
/// crude bounds `(m_j/m_ℓ)^{1/(ℓ−j)}` and `(m_ℓ/m_n)^{1/(n−ℓ)}`, if negative.
fn pellet_negative_point(p: &PelletPayload) -> Option<f64> {
    let m = &p.moduli;
    let deg = m.iter().rposition(|&v| v > 0.0)?;
    let jlo = m.iter().position(|&v| v > 0.0)?;
    if jlo >= p.ell || deg <= p.ell {
        return None;
    }
    let lo = (m[jlo] / m[p.ell]).powf(1.0 / (p.ell - jlo) as f64).ln();
    let hi = (m[p.ell] / m[deg]).powf(1.0 / (deg - p.ell) as f64).ln();
    const GRID: usize = 1 << 14;
    (0..=GRID)
        .map(|i| (lo + (hi - lo) * i as f64 / GRID as f64).exp())
        .map(|x| (x, pellet_q(p, x) / x.powi(p.ell as i32)))
        .filter(|&(_, v)| v < 0.0)
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(x, _)| x)
}

fn trinomial_oracle(t: &Trinomial, index: usize) -> adaptroot_core::Result<f64> {
    let xmin = t.to_x(t.applicability().z0);
    let br = if index == 0 {
        bracket_inside(t, 0.0, xmin)?
    } else {
        let hi = grow_until_positive(t, 2.0 * xmin);
        bracket_inside(t, xmin, 2.0 * hi)?
    };
    bisect(t, br, 0.0)
}

pub struct Verified {
    pub oracle: f64,
    pub abs_err: f64,
    pub rel_err: f64,
}

pub fn verify(problem: &Problem, o: &RootOutcome) -> Result<Option<Verified>, CliError> {
    let Some(root) = o.root else { return Ok(None) };
    let oracle = oracle_root(problem, o.index, root)?;
    let abs_err = (root - oracle).abs();
    let rel_err = if oracle == 0.0 { abs_err } else { abs_err / oracle.abs() };
    Ok(Some(Verified { oracle, abs_err, rel_err }))
}

pub fn root_line(o: &RootOutcome, v: Option<&Verified>) -> String {
    let root = o.root.map(root_float).unwrap_or_else(|| "-".into());
    let mut line = format!(
        "index={} root={root} iterations={} termination={}",
        o.index, o.iterations, o.termination
    );
    if let Some(v) = v {
        line += &format!(
            " oracle={} abs_err={} rel_err={}",
            root_float(v.oracle),
            csv_float(v.abs_err),
            csv_float(v.rel_err)
        );
    }
    line
}

/// `trace.csv` becomes `trace-3.csv` when several traces are written.
pub fn trace_path(base: &Path, index: usize, several: bool) -> PathBuf {
    if !several {
        return base.to_path_buf();
    }
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}-{index}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{index}"),
    };
    base.with_file_name(name)
}

pub fn write_trace(path: &Path, trace: &IterationTrace, oracle: Option<f64>) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut w = std::io::BufWriter::new(std::fs::File::create(path).map_err(io)?);
    let header = if oracle.is_some() { "iter,x,f_x,abs_err,rel_err" } else { "iter,x,f_x" };
    writeln!(w, "{header}").map_err(io)?;
    for (k, &(x, fx)) in trace.iterates.iter().enumerate() {
        write!(w, "{k},{},{}", csv_float(x), csv_float(fx)).map_err(io)?;
        if let Some(r) = oracle {
            let abs = (x - r).abs();
            let rel = if r == 0.0 { abs } else { abs / r.abs() };
            write!(w, ",{},{}", csv_float(abs), csv_float(rel)).map_err(io)?;
        }
        writeln!(w).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Whether every requested root converged.
pub fn all_converged(outcomes: &[RootOutcome]) -> bool {
    outcomes.iter().all(RootOutcome::converged)
}
