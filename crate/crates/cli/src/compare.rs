//! `compare`: run every applicable method on the same instance and tabulate
//! iteration counts.

use adaptroot_core::secular::Method;
use adaptroot_core::steps::Newton;
use adaptroot_core::{iterate, IterationTrace, SolverConfig};

use crate::instance::{Instance, Problem};
use crate::CliError;

pub struct Table {
    pub methods: Vec<&'static str>,
    /// One row per root: the root index and one cell per method.
    pub rows: Vec<(usize, Vec<String>)>,
}

impl Table {
    pub fn render(&self) -> String {
        let width = 14;
        let mut out = format!("{:<6}", "root");
        for m in &self.methods {
            out += &format!("{m:>width$}");
        }
        out.push('\n');
        for (i, cells) in &self.rows {
            out += &format!("{i:<6}");
            for c in cells {
                out += &format!("{c:>width$}");
            }
            out.push('\n');
        }
        out
    }
}

/// `7` for a converged run, `7:LeftDomain` otherwise.
fn cell(trace: &IterationTrace) -> String {
    if trace.converged() {
        trace.steps.to_string()
    } else {
        format!("{}:{}", trace.steps, trace.termination)
    }
}

fn failed(e: adaptroot_core::Error) -> String {
    match e {
        adaptroot_core::Error::MaxIters(n) => format!("{n}:MaxIters"),
        _ => "error".into(),
    }
}

pub fn compare(inst: &Instance, cfg: &SolverConfig, root: Option<usize>) -> Result<Table, CliError> {
    let input = |e: adaptroot_core::Error| CliError::Input(e.to_string());
    match &inst.problem {
        Problem::Secular(p) => {
            let count = p.n().saturating_sub(1);
            let indices: Vec<usize> = match root {
                Some(i) if i >= count => {
                    return Err(CliError::Input(format!("--root {i} out of range (0..{count})")))
                }
                Some(i) => vec![i],
                None => (0..count).collect(),
            };
            let rows = indices
                .into_iter()
                .map(|i| {
                    let cells = Method::ALL
                        .iter()
                        .map(|&m| match p.solve_root(i, m, cfg) {
                            Ok(r) => cell(&r.shifted),
                            Err(e) => failed(e),
                        })
                        .collect();
                    (i, cells)
                })
                .collect();
            Ok(Table {
                methods: Method::ALL.iter().map(Method::name).collect(),
                rows,
            })
        }
        Problem::Knapsack(k) => {
            let adaptive = k.solve(cfg).map_err(input)?;
            // plain Newton on f from the same start, same scaled tolerance
            let f = k.as_function(cfg);
            let x0 = k.initial_point().map_err(input)?;
            let plain = iterate(&f, Newton::new(&f), x0, &cfg.scaled(k.budget())).map_err(input)?;
            Ok(Table {
                methods: vec!["convexified", "newton"],
                rows: vec![(0, vec![cell(&adaptive), cell(&plain)])],
            })
        }
        Problem::Trinomial(t) => {
            let (lower, upper) = match t.solve_radii(cfg) {
                Ok(pair) => (cell(&pair.trace_lower), cell(&pair.trace_upper)),
                Err(adaptroot_core::Error::NotApplicable(msg)) => return Err(CliError::Input(msg)),
                Err(e) => (failed(e.clone()), failed(e)),
            };
            // Newton on F from the same start: F′ vanishes there
            let f = t.in_z();
            let z0 = t.applicability().z0;
            let newton = cell(&iterate(&f, Newton::new(&f), z0, &cfg.scaled(t.scale())).map_err(input)?);
            Ok(Table {
                methods: vec!["adaptive", "newton"],
                rows: vec![(0, vec![lower, newton.clone()]), (1, vec![upper, newton])],
            })
        }
        Problem::Pellet(_) => Err(CliError::Input("compare is not available for pellet instances".into())),
    }
}
