//! `samples`: tabulate the target function and, at a fit point, the
//! adaptive approximant and the tangent line.

use std::io::Write;

use adaptroot_core::knapsack::KnapsackDual;
use adaptroot_core::pellet::Trinomial;
use adaptroot_core::secular::{BnsApproximant, Method, SecularProblem, TransformedApproximant};
use adaptroot_core::{ScalarFunction, SolverConfig};

use crate::instance::{Instance, Problem};
use crate::solve::pellet_q;
use crate::{csv_float, CliError};

/// Sample points closer than this to a pole are skipped.
pub const POLE_GAP: f64 = 1e-9;

pub struct SampleRequest<'a> {
    pub instance: &'a Instance,
    pub method: Method,
    pub cfg: SolverConfig,
    pub range: (f64, f64),
    pub samples: usize,
    pub fit_point: Option<f64>,
}

/// Model functions fitted at one point: the adaptive approximant `g` (where
/// defined) and the tangent `n`.
type Model<'a> = (Box<dyn Fn(f64) -> Option<f64> + 'a>, Box<dyn Fn(f64) -> f64 + 'a>);

pub fn write_samples(req: &SampleRequest<'_>, out: &mut dyn Write) -> Result<(), CliError> {
    let (lo, hi) = req.range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(CliError::Input(format!("invalid range {lo}:{hi}: need finite lo < hi")));
    }
    if req.samples < 2 {
        return Err(CliError::Input("--samples must be at least 2".into()));
    }
    let problem = &req.instance.problem;
    let cfg = &req.cfg;
    let model = match req.fit_point {
        Some(x) => Some(fit(problem, req.method, cfg, x)?),
        None => None,
    };
    let poles: Vec<f64> = match problem {
        Problem::Secular(p) => p.d().to_vec(),
        Problem::Knapsack(k) => vec![k.gamma()],
        _ => Vec::new(),
    };
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    let header = if model.is_some() { "x,f_x,g_x,n_x" } else { "x,f_x" };
    writeln!(out, "{header}").map_err(io)?;
    let h = (hi - lo) / req.samples as f64;
    for i in 0..=req.samples {
        let x = if i == req.samples { hi } else { lo + h * i as f64 };
        if poles.iter().any(|&p| (x - p).abs() < POLE_GAP) {
            continue;
        }
        let Some(fx) = eval(problem, cfg, x) else { continue };
        write!(out, "{},{}", csv_float(x), csv_float(fx)).map_err(io)?;
        if let Some((g, n)) = &model {
            let g = g(x).map(csv_float).unwrap_or_default();
            write!(out, ",{g},{}", csv_float(n(x))).map_err(io)?;
        }
        writeln!(out).map_err(io)?;
    }
    Ok(())
}

fn eval(problem: &Problem, cfg: &SolverConfig, x: f64) -> Option<f64> {
    let v = match problem {
        Problem::Secular(p) => p.eval_f(x).ok()?,
        Problem::Knapsack(k) => {
            if !(x > 0.0 && x < k.gamma()) {
                return None;
            }
            k.eval_f(x, cfg).ok()?
        }
        Problem::Trinomial(t) => {
            if x < 0.0 {
                return None;
            }
            t.eval_x(x)
        }
        Problem::Pellet(p) => {
            if x < 0.0 {
                return None;
            }
            pellet_q(p, x)
        }
    };
    v.is_finite().then_some(v)
}

fn fit<'a>(problem: &'a Problem, method: Method, cfg: &'a SolverConfig, x_bar: f64) -> Result<Model<'a>, CliError> {
    let bad = |e: adaptroot_core::Error| CliError::Input(format!("--fit-point {x_bar}: {e}"));
    match problem {
        Problem::Secular(p) => fit_secular(p, method, x_bar),
        Problem::Knapsack(k) => fit_knapsack(k, cfg, x_bar).map_err(bad),
        Problem::Trinomial(t) => fit_trinomial(t, x_bar).map_err(bad),
        Problem::Pellet(_) => Err(CliError::Input("--fit-point is not available for pellet instances".into())),
    }
}

fn tangent<'a>(x_bar: f64, f: f64, df: f64) -> Box<dyn Fn(f64) -> f64 + 'a> {
    Box::new(move |x| f + df * (x - x_bar))
}

fn fit_secular(p: &SecularProblem, method: Method, x_bar: f64) -> Result<Model<'_>, CliError> {
    let d = p.d();
    let i = d
        .windows(2)
        .position(|w| w[0] < x_bar && x_bar < w[1])
        .ok_or_else(|| CliError::Input(format!("--fit-point {x_bar} must lie strictly between two poles")))?;
    let bad = |e: adaptroot_core::Error| CliError::Input(format!("--fit-point {x_bar}: {e}"));
    let task = p.task(i).map_err(bad)?;
    let (origin, right) = (d[i], d[i + 1]);
    let s_bar = x_bar - origin;
    let n = tangent(x_bar, p.eval_f(x_bar).map_err(bad)?, p.eval_deriv(x_bar).map_err(bad)?);
    let inside = move |x: f64| x > origin && x < right;
    let g: Box<dyn Fn(f64) -> Option<f64>> = match method {
        Method::Bns => {
            let g = BnsApproximant::fit(&task, s_bar).map_err(bad)?;
            Box::new(move |x| inside(x).then(|| g.eval(x - origin)))
        }
        Method::Transformed => {
            let g = TransformedApproximant::fit(&task, 1.0 / s_bar).map_err(bad)?;
            Box::new(move |x| inside(x).then(|| g.eval(1.0 / (x - origin))))
        }
        Method::NewtonOnF => {
            let f = p.eval_f(x_bar).map_err(bad)?;
            let df = p.eval_deriv(x_bar).map_err(bad)?;
            Box::new(move |x| Some(f + df * (x - x_bar)))
        }
    };
    Ok((g, n))
}

/// `g` is the tangent of `L·f` at the fit point divided back by `L`.
fn fit_knapsack<'a>(k: &'a KnapsackDual, cfg: &'a SolverConfig, x_bar: f64) -> adaptroot_core::Result<Model<'a>> {
    let (lf, dlf) = k.eval_lf(x_bar, cfg)?;
    let n = tangent(x_bar, k.eval_f(x_bar, cfg)?, k.eval_deriv(x_bar, cfg)?);
    let gamma = k.gamma();
    let g = Box::new(move |x: f64| {
        let l = 1.0 - x / gamma;
        (l > 0.0).then(|| (lf + dlf * (x - x_bar)) / l)
    });
    Ok((g, n))
}

/// `g` is the approximant in `z = xᵏ`, evaluated at `xᵏ` left of its pole.
fn fit_trinomial(t: &Trinomial, x_bar: f64) -> adaptroot_core::Result<Model<'_>> {
    if !(x_bar > 0.0) {
        return Err(adaptroot_core::Error::DomainError("fit point must be positive".into()));
    }
    let k = t.k as i32;
    let approx = t.approximant(x_bar.powi(k));
    let n = tangent(x_bar, t.eval_x(x_bar), t.deriv1(x_bar)?);
    let g = Box::new(move |x: f64| {
        let z = x.powi(k);
        (x >= 0.0 && z < approx.beta).then(|| approx.eval(z))
    });
    Ok((g, n))
}
