//! Interior roots of the secular equation
//!
//! ```text
//! f(x) = 1 + Σ_j b_j / (d_j − x),   b_j > 0,  d_1 < d_2 < … < d_n,
//! ```
//!
//! one on each interval `(d_i, d_{i+1})`. Every root is computed in a frame
//! whose origin is moved to `d_i`, so the interval becomes `(0, D)` with
//! `D = d_{i+1} − d_i`. Two methods are provided:
//!
//! * **Rational (BNS)**: split `f = 1 + f_1 + f_2` into the poles left and
//!   right of the interval and fit `α/(β − x)` to `f_1` and
//!   `γ + δ/(D − x)` to `f_2` (value and slope). The fitted `g` dominates
//!   `f` on `(0, D)`, so from a point with `f < 0` the iterates increase
//!   monotonically to the root.
//! * **Transformed**: substitute `x = 1/z`. `F(z) = f(1/z)` is decreasing and
//!   convex on `(1/D, ∞)`. Keep the pole term at `1/D` and replace the rest by
//!   its tangent; the resulting approximant is dominated by `F`.
//!
//! Indices are zero-based: root `i` lies in `(d[i], d[i+1])`, for
//! `0 <= i < n − 1`. The root beyond the last pole is not handled.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::driver::{iterate, IterationTrace, SolverConfig};
use crate::error::{Error, Result};
use crate::function::{Domain, ScalarFunction};
use crate::quadratic::solve_quadratic_stable;
use crate::steps::Newton;
use crate::sum::CompensatedSum;

#[derive(Debug, Clone, PartialEq)]
pub struct SecularProblem {
    b: Vec<f64>,
    d: Vec<f64>,
}

impl SecularProblem {
    pub fn new(b: Vec<f64>, d: Vec<f64>) -> Result<Self> {
        if b.len() != d.len() {
            return Err(Error::invalid(format!(
                "b and d must have the same length (got {} and {})",
                b.len(),
                d.len()
            )));
        }
        if b.is_empty() {
            return Err(Error::invalid("b and d must be non-empty"));
        }
        for (j, &v) in b.iter().enumerate() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("b[j] must be positive (b[{j}] = {v})")));
            }
        }
        for (j, &v) in d.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::invalid(format!("d[j] must be finite (d[{j}] = {v})")));
            }
            if j > 0 && !(d[j - 1] < v) {
                return Err(Error::invalid(format!(
                    "d[j] must be strictly increasing (d[{}] = {}, d[{j}] = {v})",
                    j - 1,
                    d[j - 1]
                )));
            }
        }
        Ok(SecularProblem { b, d })
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn d(&self) -> &[f64] {
        &self.d
    }

    /// `f(x) = 1 + Σ b_j/(d_j − x)`, compensated.
    pub fn eval_f(&self, x: f64) -> Result<f64> {
        let mut acc = CompensatedSum::with_initial(1.0);
        for (&bj, &dj) in self.b.iter().zip(&self.d) {
            let den = dj - x;
            if den == 0.0 {
                return Err(Error::PoleHit { x, pole: dj });
            }
            acc += bj / den;
        }
        Ok(acc.value())
    }

    pub fn eval_deriv(&self, x: f64) -> Result<f64> {
        let mut acc = CompensatedSum::new();
        for (&bj, &dj) in self.b.iter().zip(&self.d) {
            let den = dj - x;
            if den == 0.0 {
                return Err(Error::PoleHit { x, pole: dj });
            }
            acc += bj / (den * den);
        }
        Ok(acc.value())
    }

    /// Shifted frame for root `i`.
    pub fn task(&self, i: usize) -> Result<ShiftedTask<'_>> {
        ShiftedTask::new(self, i)
    }

    pub fn solve_root(&self, i: usize, method: Method, cfg: &SolverConfig) -> Result<SecularRoot> {
        let task = self.task(i)?;
        let shifted = match method {
            Method::Bns => solve_bns(&task, cfg)?,
            Method::Transformed => solve_transformed(&task, cfg)?,
            Method::NewtonOnF => solve_newton_on_transformed(&task, cfg)?,
        };
        Ok(SecularRoot {
            index: i,
            method,
            origin: task.origin,
            shifted,
        })
    }

    /// All `n − 1` interior roots, solved independently (in parallel) and
    /// returned in index order.
    pub fn solve_all_roots(&self, method: Method, cfg: &SolverConfig) -> Result<Vec<Result<SecularRoot>>> {
        if self.n() < 2 {
            return Err(Error::PreconditionViolated("need n >= 2 for interior roots".into()));
        }
        Ok((0..self.n() - 1)
            .into_par_iter()
            .map(|i| self.solve_root(i, method, cfg))
            .collect())
    }
}

impl ScalarFunction for SecularProblem {
    fn eval(&self, x: f64) -> Result<f64> {
        self.eval_f(x)
    }

    fn deriv1(&self, x: f64) -> Result<f64> {
        self.eval_deriv(x)
    }

    fn singularities(&self) -> &[f64] {
        &self.d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Two-part rational approximant in the original variable.
    Bns,
    /// Pole-plus-tangent approximant after `x = 1/z`.
    Transformed,
    /// Plain Newton on the transformed function; a baseline.
    NewtonOnF,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Bns, Method::Transformed, Method::NewtonOnF];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Bns => "bns",
            Method::Transformed => "transformed",
            Method::NewtonOnF => "newton",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bns" | "rational" => Ok(Method::Bns),
            "transformed" => Ok(Method::Transformed),
            "newton" | "newton-f" | "newtononf" => Ok(Method::NewtonOnF),
            other => Err(Error::invalid(format!(
                "unknown method `{other}` (expected bns, transformed or newton)"
            ))),
        }
    }
}

/// Result of one interior solve. The trace is kept in the shifted frame,
/// with abscissae in the original variable `x − d_i` for every method.
#[derive(Debug, Clone, PartialEq)]
pub struct SecularRoot {
    pub index: usize,
    pub method: Method,
    /// `d_i`, the shift.
    pub origin: f64,
    pub shifted: IterationTrace,
}

impl SecularRoot {
    pub fn root(&self) -> Option<f64> {
        self.shifted.root.map(|x| self.origin + x)
    }

    /// The trace in the original (unshifted) frame.
    pub fn trace(&self) -> IterationTrace {
        let origin = self.origin;
        self.shifted.clone().map_x(|x| origin + x)
    }

    pub fn iterations(&self) -> usize {
        self.shifted.steps
    }
}

/// The secular function with origin moved to `d_i`, restricted to `(0, D)`.
#[derive(Debug, Clone)]
pub struct ShiftedTask<'a> {
    problem: &'a SecularProblem,
    index: usize,
    origin: f64,
    /// `d_j − d_i`; the entry at `index` is exactly 0.
    shifted_d: Vec<f64>,
    /// `1/(d_j − d_i)` for `j != index`, NaN at `index`.
    inv_d: Vec<f64>,
    /// `1 + Σ_{j≠i} b_j/(d_j − d_i)`, the constant of the transformed function.
    transformed_const: f64,
}

impl<'a> ShiftedTask<'a> {
    fn new(problem: &'a SecularProblem, i: usize) -> Result<Self> {
        let n = problem.n();
        if n < 2 {
            return Err(Error::PreconditionViolated("need n >= 2 for interior roots".into()));
        }
        if i + 1 >= n {
            return Err(Error::PreconditionViolated(format!(
                "root index {i} out of range: interior roots are 0..{} (the root beyond the last pole is not supported)",
                n - 1
            )));
        }
        let origin = problem.d[i];
        let shifted_d: Vec<f64> = problem
            .d
            .iter()
            .enumerate()
            .map(|(j, &dj)| if j == i { 0.0 } else { dj - origin })
            .collect();
        let inv_d: Vec<f64> = shifted_d
            .iter()
            .enumerate()
            .map(|(j, &s)| if j == i { f64::NAN } else { 1.0 / s })
            .collect();
        let mut c = CompensatedSum::with_initial(1.0);
        for (j, &s) in shifted_d.iter().enumerate() {
            if j != i {
                c += problem.b[j] / s;
            }
        }
        Ok(ShiftedTask {
            problem,
            index: i,
            origin,
            shifted_d,
            inv_d,
            transformed_const: c.value(),
        })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn shifted_d(&self) -> &[f64] {
        &self.shifted_d
    }

    pub fn b(&self) -> &[f64] {
        &self.problem.b
    }

    /// `D = d_{i+1} − d_i`.
    pub fn right_pole(&self) -> f64 {
        self.shifted_d[self.index + 1]
    }

    pub fn interval(&self) -> (f64, f64) {
        (0.0, self.right_pole())
    }

    /// Shifted `f(x) = 1 + Σ b_j/(s_j − x)`.
    pub fn eval_f(&self, x: f64) -> Result<f64> {
        let mut acc = CompensatedSum::with_initial(1.0);
        for (&bj, &sj) in self.problem.b.iter().zip(&self.shifted_d) {
            let den = sj - x;
            if den == 0.0 {
                return Err(Error::PoleHit { x, pole: sj });
            }
            acc += bj / den;
        }
        Ok(acc.value())
    }

    pub fn eval_deriv(&self, x: f64) -> Result<f64> {
        let mut acc = CompensatedSum::new();
        for (&bj, &sj) in self.problem.b.iter().zip(&self.shifted_d) {
            let den = sj - x;
            if den == 0.0 {
                return Err(Error::PoleHit { x, pole: sj });
            }
            acc += bj / (den * den);
        }
        Ok(acc.value())
    }

    /// Pieces of `f_1` (poles `j <= i`) and `f_2` (poles `j >= i+1`) at `x`.
    fn split(&self, x: f64) -> Result<Split> {
        let d_right = self.right_pole();
        let mut f1 = CompensatedSum::new();
        let mut df1 = CompensatedSum::new();
        let mut beta_num = CompensatedSum::new();
        let mut f2 = CompensatedSum::new();
        let mut df2 = CompensatedSum::new();
        let mut gamma = CompensatedSum::new();
        for (j, (&bj, &sj)) in self.problem.b.iter().zip(&self.shifted_d).enumerate() {
            let den = sj - x;
            if den == 0.0 {
                return Err(Error::PoleHit { x, pole: sj });
            }
            let t = bj / den;
            let dt = t / den;
            if j <= self.index {
                f1 += t;
                df1 += dt;
                beta_num += dt * sj;
            } else {
                f2 += t;
                df2 += dt;
                gamma += dt * (sj - d_right);
            }
        }
        Ok(Split {
            f1: f1.value(),
            df1: df1.value(),
            beta_num: beta_num.value(),
            f2: f2.value(),
            df2: df2.value(),
            gamma: gamma.value(),
        })
    }

    /// Pole of the transformed function closest to the interval, `1/D`.
    pub fn transformed_pole(&self) -> f64 {
        self.inv_d[self.index + 1]
    }

    /// `F(z) = f(1/z)` from the expanded form
    /// `1 + Σ_{j≠i} b_j/s_j − b_i z + Σ_{j≠i} (b_j/s_j²)/(z − 1/s_j)`.
    pub fn eval_transformed(&self, z: f64) -> Result<f64> {
        let mut acc = CompensatedSum::with_initial(self.transformed_const);
        acc += -self.problem.b[self.index] * z;
        for j in 0..self.problem.n() {
            if j == self.index {
                continue;
            }
            let den = z - self.inv_d[j];
            if den == 0.0 {
                return Err(Error::PoleHit { x: z, pole: self.inv_d[j] });
            }
            acc += self.pole_weight(j) / den;
        }
        Ok(acc.value())
    }

    pub fn eval_transformed_deriv(&self, z: f64) -> Result<f64> {
        let mut acc = CompensatedSum::with_initial(-self.problem.b[self.index]);
        for j in 0..self.problem.n() {
            if j == self.index {
                continue;
            }
            let den = z - self.inv_d[j];
            if den == 0.0 {
                return Err(Error::PoleHit { x: z, pole: self.inv_d[j] });
            }
            acc += -self.pole_weight(j) / (den * den);
        }
        Ok(acc.value())
    }

    /// `b_j / s_j²`.
    fn pole_weight(&self, j: usize) -> f64 {
        let s = self.shifted_d[j];
        self.problem.b[j] / (s * s)
    }

    /// The function `F` as a [`ScalarFunction`] on `(1/D, ∞)`.
    pub fn transformed(&self) -> Transformed<'_, 'a> {
        Transformed { task: self }
    }
}

impl ScalarFunction for ShiftedTask<'_> {
    fn eval(&self, x: f64) -> Result<f64> {
        self.eval_f(x)
    }

    fn deriv1(&self, x: f64) -> Result<f64> {
        self.eval_deriv(x)
    }

    fn domain(&self) -> Domain {
        Domain::open(0.0, self.right_pole())
    }
}

/// `F(z) = f(1/z)` on `(1/D, ∞)`.
pub struct Transformed<'t, 'a> {
    task: &'t ShiftedTask<'a>,
}

impl ScalarFunction for Transformed<'_, '_> {
    fn eval(&self, z: f64) -> Result<f64> {
        self.task.eval_transformed(z)
    }

    fn deriv1(&self, z: f64) -> Result<f64> {
        self.task.eval_transformed_deriv(z)
    }

    fn domain(&self) -> Domain {
        Domain::open(self.task.transformed_pole(), f64::INFINITY)
    }
}

struct Split {
    f1: f64,
    df1: f64,
    /// `Σ_{j≤i} b_j s_j/(s_j − x)²`
    beta_num: f64,
    f2: f64,
    df2: f64,
    /// `Σ_{j≥i+1} b_j (s_j − D)/(s_j − x)²`, equal to `f_2 − (D − x) f_2'`
    gamma: f64,
}

/// `g(x) = 1 + α/(β − x) + γ + δ/(D − x)`, fitted to `f` at one point of
/// `(0, D)` so that each part matches its half of `f` in value and slope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BnsApproximant {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub right_pole: f64,
}

impl BnsApproximant {
    pub fn fit(task: &ShiftedTask<'_>, x_bar: f64) -> Result<Self> {
        let d_right = task.right_pole();
        if !(x_bar > 0.0 && x_bar < d_right) {
            return Err(Error::PreconditionViolated(format!(
                "fit point {x_bar} outside (0, {d_right})"
            )));
        }
        let s = task.split(x_bar)?;
        // β = x̄ + f1/f1' written without cancellation; exactly 0 when the only
        // left pole is the origin
        let beta = s.beta_num / s.df1;
        let alpha = (x_bar - beta) * (x_bar - beta) * s.df1;
        let dist = d_right - x_bar;
        let delta = dist * dist * s.df2;
        debug_assert!((s.gamma - (s.f2 - dist * s.df2)).abs() <= 1e-8 * (1.0 + s.f2.abs()));
        debug_assert!((alpha / (beta - x_bar) - s.f1).abs() <= 1e-8 * (1.0 + s.f1.abs()));
        Ok(BnsApproximant {
            alpha,
            beta,
            gamma: s.gamma,
            delta,
            right_pole: d_right,
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        1.0 + self.alpha / (self.beta - x) + self.gamma + self.delta / (self.right_pole - x)
    }

    /// The unique root of `g` in `(β, D)`.
    ///
    /// The quadratic `(1+γ)(β−x)(D−x) + α(D−x) + δ(β−x) = 0` is solved in the
    /// distance from the left pole `β` and, if the root falls in the right
    /// half, again in the distance from `D`, so the root keeps full relative
    /// accuracy next to either pole.
    pub fn root(&self) -> Result<f64> {
        let c = 1.0 + self.gamma;
        let span = self.right_pole - self.beta;
        // w = x − β: c w² − (c P + α + δ) w + α P = 0, both roots positive
        let (w1, w2) = solve_quadratic_stable(c, -(c * span + self.alpha + self.delta), self.alpha * span)?;
        let w = pick_unique(&[w1, w2], 0.0, span, "rational approximant")?;
        let x = self.beta + w;
        if x <= 0.5 * self.right_pole {
            return Ok(x);
        }
        // u = D − x: c u² + (α + δ − c P) u − δ P = 0, roots of opposite sign
        let (u1, u2) = solve_quadratic_stable(c, self.alpha + self.delta - c * span, -self.delta * span)?;
        let u = pick_unique(&[u1, u2], 0.0, span, "rational approximant")?;
        Ok(self.right_pole - u)
    }
}

/// Exactly one candidate must lie strictly inside `(lo, hi)`.
fn pick_unique(cands: &[f64], lo: f64, hi: f64, what: &str) -> Result<f64> {
    let inside: Vec<f64> = cands.iter().copied().filter(|&r| r > lo && r < hi).collect();
    match inside.as_slice() {
        [r] => Ok(*r),
        [] => Err(Error::breakdown(format!("{what}: no quadratic root in ({lo}, {hi})"))),
        _ => Err(Error::breakdown(format!(
            "{what}: both quadratic roots in ({lo}, {hi}); approximant is not monotone"
        ))),
    }
}

/// One rational step from `x_bar` (shifted frame). Requires `f(x_bar) < 0`.
pub fn bns_step(task: &ShiftedTask<'_>, x_bar: f64) -> Result<f64> {
    let fx = task.eval_f(x_bar)?;
    if !(fx < 0.0) {
        return Err(Error::PreconditionViolated(format!(
            "rational step needs f(x̄) < 0, got f({x_bar}) = {fx}"
        )));
    }
    bns_next(task, x_bar)
}

fn bns_next(task: &ShiftedTask<'_>, x_bar: f64) -> Result<f64> {
    let g = BnsApproximant::fit(task, x_bar)?;
    let x = g.root()?;
    // g(x̄) = f(x̄) < 0 puts the root right of x̄; anything else is rounding
    Ok(x.max(x_bar))
}

/// Starting point for the rational method: the root in `(0, D)` of
///
/// ```text
/// C − b_i/x + b_{i+1}/(D − x),   C = 1 + Σ_{j≠i,i+1} b_j/(s_j − D),
/// ```
///
/// which bounds `f` from above on the interval.
pub fn bns_initial_point(task: &ShiftedTask<'_>) -> Result<f64> {
    let i = task.index;
    let d_right = task.right_pole();
    let b = task.b();
    let (bl, br) = (b[i], b[i + 1]);
    let mut c = CompensatedSum::with_initial(1.0);
    for (j, &sj) in task.shifted_d.iter().enumerate() {
        if j != i && j != i + 1 {
            c += b[j] / (sj - d_right);
        }
    }
    let c = c.value();
    // x-form: −C x² + (C D + b_i + b_{i+1}) x − b_i D = 0
    let x = match solve_quadratic_stable(-c, c * d_right + bl + br, -bl * d_right) {
        Ok((r1, r2)) => pick_unique(&[r1, r2], 0.0, d_right, "starting point")?,
        Err(Error::DegenerateLinear) => bl * d_right / (bl + br),
        Err(e) => return Err(Error::breakdown(format!("starting point: {e}"))),
    };
    if x <= 0.5 * d_right {
        return Ok(x);
    }
    // u-form: −C u² + (C D − b_i − b_{i+1}) u + b_{i+1} D = 0
    let u = match solve_quadratic_stable(-c, c * d_right - bl - br, br * d_right) {
        Ok((r1, r2)) => pick_unique(&[r1, r2], 0.0, d_right, "starting point")?,
        Err(Error::DegenerateLinear) => br * d_right / (bl + br),
        Err(e) => return Err(Error::breakdown(format!("starting point: {e}"))),
    };
    Ok(d_right - u)
}

/// `G(z) = α + β z + w/(z − p)` with `p = 1/D`, `w = b_{i+1}/D²`, where
/// `α + β z` is the tangent at `z̄` of `F` minus its pole term at `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformedApproximant {
    pub a_lin: f64,
    pub b_lin: f64,
    pub pole_weight: f64,
    pub pole_loc: f64,
    /// `α + β p`, the tangent's value at the pole, computed directly.
    offset_at_pole: f64,
}

impl TransformedApproximant {
    pub fn fit(task: &ShiftedTask<'_>, z_bar: f64) -> Result<Self> {
        let p = task.transformed_pole();
        if !(z_bar > p) {
            return Err(Error::PreconditionViolated(format!(
                "transformed fit point {z_bar} must exceed 1/D = {p}"
            )));
        }
        let w = task.pole_weight(task.index + 1);
        let v = z_bar - p;
        let f1 = task.eval_transformed(z_bar)? - w / v;
        let df1 = task.eval_transformed_deriv(z_bar)? + w / (v * v);
        Ok(TransformedApproximant {
            a_lin: f1 - df1 * z_bar,
            b_lin: df1,
            pole_weight: w,
            pole_loc: p,
            offset_at_pole: f1 - df1 * v,
        })
    }

    pub fn eval(&self, z: f64) -> f64 {
        let v = z - self.pole_loc;
        self.offset_at_pole + self.b_lin * v + self.pole_weight / v
    }

    /// The unique root in `(p, ∞)`, from `β v² + (α + β p) v + w = 0` in
    /// `v = z − p`.
    pub fn root(&self) -> Result<f64> {
        if !(self.b_lin < 0.0) {
            return Err(Error::breakdown(format!(
                "transformed approximant slope {} is not negative",
                self.b_lin
            )));
        }
        let (v1, v2) = solve_quadratic_stable(self.b_lin, self.offset_at_pole, self.pole_weight)?;
        let v = pick_unique(&[v1, v2], 0.0, f64::INFINITY, "transformed approximant")?;
        Ok(self.pole_loc + v)
    }
}

/// One transformed step from `z_bar > 1/D`.
pub fn transformed_step(task: &ShiftedTask<'_>, z_bar: f64) -> Result<f64> {
    TransformedApproximant::fit(task, z_bar)?.root()
}

/// Roots of the two comparison functions that bracket the root of `F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformedBracket {
    /// Root of the function dominated by `F`; at or left of the root.
    pub lower: f64,
    /// Root of the function dominating `F`; at or right of the root.
    pub upper: f64,
}

impl TransformedBracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// Both comparison functions have the form `C − b_i z + w/(z − p)`; the
/// dominating one adds every other pole term evaluated at `p`.
pub fn transformed_bracket(task: &ShiftedTask<'_>) -> Result<TransformedBracket> {
    let i = task.index;
    let p = task.transformed_pole();
    let w = task.pole_weight(i + 1);
    let bi = task.b()[i];
    let c_lo = task.transformed_const;
    let mut c_up = CompensatedSum::with_initial(c_lo);
    for j in 0..task.problem.n() {
        if j != i && j != i + 1 {
            c_up += task.pole_weight(j) / (p - task.inv_d[j]);
        }
    }
    let root_of = |c: f64| -> Result<f64> {
        // −b_i v² + (C − b_i p) v + w = 0, roots of opposite sign
        let (v1, v2) = solve_quadratic_stable(-bi, c - bi * p, w)
            .map_err(|e| Error::breakdown(format!("transformed starting point: {e}")))?;
        Ok(p + pick_unique(&[v1, v2], 0.0, f64::INFINITY, "transformed starting point")?)
    };
    Ok(TransformedBracket {
        lower: root_of(c_lo)?,
        upper: root_of(c_up.value())?,
    })
}

/// Midpoint of [`transformed_bracket`].
pub fn transformed_initial_point(task: &ShiftedTask<'_>) -> Result<f64> {
    transformed_bracket(task).map(|b| b.midpoint())
}

/// Residual tolerance scale: `f` is dimensionless with the constant term 1.
const RESIDUAL_SCALE: f64 = 1.0;

fn solve_bns(task: &ShiftedTask<'_>, cfg: &SolverConfig) -> Result<IterationTrace> {
    let cfg = cfg.scaled(RESIDUAL_SCALE);
    let d_right = task.right_pole();
    let mut x0 = bns_initial_point(task)?;
    let f0 = task.eval_f(x0)?;
    if f0 >= 0.0 && f0 > cfg.f_tol {
        let nudged = x0 - 1e-12 * d_right;
        if nudged > 0.0 {
            x0 = nudged;
        }
    }
    let stepper = |x: f64, fx: f64| {
        if fx >= 0.0 {
            // a monotone iterate can only reach f >= 0 by rounding: stagnate
            return Ok(x);
        }
        bns_next(task, x)
    };
    iterate(task, stepper, x0, &cfg)
}

fn solve_transformed(task: &ShiftedTask<'_>, cfg: &SolverConfig) -> Result<IterationTrace> {
    let cfg = cfg.scaled(RESIDUAL_SCALE);
    let z0 = transformed_initial_point(task)?;
    let big_f = task.transformed();
    let trace = iterate(&big_f, |z: f64, _fz: f64| transformed_step(task, z), z0, &cfg)?;
    Ok(trace.map_x(|z| 1.0 / z))
}

fn solve_newton_on_transformed(task: &ShiftedTask<'_>, cfg: &SolverConfig) -> Result<IterationTrace> {
    let cfg = cfg.scaled(RESIDUAL_SCALE);
    let z0 = transformed_initial_point(task)?;
    let big_f = task.transformed();
    let trace = iterate(&big_f, Newton::new(&big_f), z0, &cfg)?;
    Ok(trace.map_x(|z| 1.0 / z))
}
