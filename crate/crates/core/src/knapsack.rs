//! The continuous knapsack dual
//!
//! ```text
//! f(x) = Σ_j α_j φ(β_j x) − K,   0 < x < γ = 1/max β_j,
//! ```
//!
//! where `φ` is the inverse of `h(y) = 1 − (1 + 1/y) e^{−1/y}`. `f` is
//! decreasing but not convex; `L(x) f(x)` with `L(x) = 1 − x/γ` is, so Newton
//! on `L f` from a point left of the root increases monotonically to it.
//!
//! `φ` has no closed form. It is evaluated with a bracketed Halley iteration
//! in `z = 1/y`; near `x = 1` the equation is solved in logarithmic form
//! from the complement `1 − x`, which the callers compute with a fused
//! multiply-add so that arguments close to 1 keep their accuracy.

use crate::driver::{iterate, IterationTrace, SolverConfig};
use crate::error::{Error, Result};
use crate::function::{Domain, ScalarFunction};
use crate::steps::newton_update;
use crate::sum::CompensatedSum;

/// `g(z) = 1 − (1 + z) e^{−z}`, so that `h(y) = g(1/y)`.
fn g_of_z(z: f64) -> f64 {
    if z < 1.0 {
        // Σ_{k≥2} (−1)^k (k−1) z^k / k!, alternating and fast for z < 1
        let mut term = z * z / 2.0;
        let mut sum = term;
        let mut k = 2.0;
        loop {
            term *= -z / (k + 1.0);
            let add = term * k;
            sum += add;
            if add.abs() <= 1e-18 * sum.abs() {
                break;
            }
            k += 1.0;
        }
        sum
    } else {
        1.0 - (1.0 + z) * (-z).exp()
    }
}

/// `h(x) = 1 − (1 + 1/x) e^{−1/x}`.
pub fn h_eval(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::DomainError(format!("h requires x > 0, got {x}")));
    }
    Ok(g_of_z(1.0 / x))
}

/// `h'(x) = −x⁻³ e^{−1/x}`.
pub fn h_deriv(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::DomainError(format!("h requires x > 0, got {x}")));
    }
    Ok(-(-1.0 / x).exp() / (x * x * x))
}

/// `y = φ(x)` together with the achieved `|h(y) − x|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiValue {
    pub y: f64,
    pub residual: f64,
}

/// Halley steps before the inner solver switches to bisection.
const HALLEY_LIMIT: usize = 50;
const BISECT_LIMIT: usize = 2000;

/// Inverse of [`h_eval`] on `(0, 1)`.
pub fn phi_eval(x: f64, cfg: &SolverConfig) -> Result<PhiValue> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::DomainError(format!("φ requires 0 < x < 1, got {x}")));
    }
    phi_with_complement(x, 1.0 - x, cfg.inner_tol)
}

/// `φ(x)` given both `x` and `s = 1 − x`. For `x > 1/2` only `s` is used.
pub(crate) fn phi_with_complement(x: f64, s: f64, tol: f64) -> Result<PhiValue> {
    if !(x > 0.0 && s > 0.0) {
        return Err(Error::DomainError(format!("φ requires 0 < x < 1, got {x}")));
    }
    let z = if x <= 0.5 { solve_small(x, tol)? } else { solve_large(s, tol)? };
    let residual = if x <= 0.5 {
        (g_of_z(z) - x).abs()
    } else {
        ((1.0 + z) * (-z).exp() - s).abs()
    };
    Ok(PhiValue { y: 1.0 / z, residual })
}

/// `p(z) = g(z) − x = 0`, increasing in `z`; here `z <= 1.68`.
fn solve_small(x: f64, tol: f64) -> Result<f64> {
    let p = |z: f64| g_of_z(z) - x;
    let (lo, hi) = (0.0, if x <= 1e-8 { 2.0 * (2.0 * x).sqrt() } else { 2.0 });
    let guess = (2.0 * x).sqrt().min(0.5 * hi);
    // Halley in the underflow-free form z − 2pz / (2z²e^{−z} − p(1 − z))
    let step = |z: f64, pz: f64| {
        let e = (-z).exp();
        z - 2.0 * pz * z / (2.0 * z * z * e - pz * (1.0 - z))
    };
    safeguarded(p, step, guess, lo, hi, tol * x, true)
}

/// `r(z) = ln(1 + z) − z − ln s = 0`, decreasing in `z`; here `z >= 1.67`.
fn solve_large(s: f64, tol: f64) -> Result<f64> {
    let ln_s = s.ln();
    let r = |z: f64| z.ln_1p() - z - ln_s;
    let lo = 1.6;
    let mut hi = 4.0;
    while r(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e4 {
            return Err(Error::DomainError(format!("φ: complement {s} out of range")));
        }
    }
    let guess = {
        let t = -ln_s;
        (t + (1.0 + t).ln()).clamp(lo, hi)
    };
    // r' = −z/(1+z), r'' = −1/(1+z)²
    let step = |z: f64, rz: f64| {
        let d1 = -z / (1.0 + z);
        let d2 = -1.0 / ((1.0 + z) * (1.0 + z));
        z - 2.0 * rz * d1 / (2.0 * d1 * d1 - rz * d2)
    };
    // |r| is the relative residual in s; s·|r| bounds |h(y) − x|
    safeguarded(r, step, guess, lo, hi, tol, false)
}

/// Halley with a sign-maintained bracket; falls back to bisection after
/// [`HALLEY_LIMIT`] steps. `increasing` is the sign pattern of `p`.
fn safeguarded(
    p: impl Fn(f64) -> f64,
    halley: impl Fn(f64, f64) -> f64,
    guess: f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    increasing: bool,
) -> Result<f64> {
    let below = |v: f64| if increasing { v < 0.0 } else { v > 0.0 };
    let mut z = guess;
    for _ in 0..HALLEY_LIMIT {
        let pz = p(z);
        if pz.abs() <= tol || pz == 0.0 {
            return Ok(z);
        }
        if below(pz) {
            lo = lo.max(z);
        } else {
            hi = hi.min(z);
        }
        let mut next = halley(z, pz);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - z).abs() <= 2.0 * f64::EPSILON * z {
            return Ok(next);
        }
        z = next;
    }
    for _ in 0..BISECT_LIMIT {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let pm = p(mid);
        if pm.abs() <= tol {
            return Ok(mid);
        }
        if below(pm) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::MaxIters(HALLEY_LIMIT + BISECT_LIMIT))
}

/// `(φ'(x), φ''(x))` expressed through `y = φ(x)`:
/// `(−y³ e^{1/y}, y⁴ (3y − 1) e^{2/y})`.
pub fn phi_derivatives(y: f64) -> Result<(f64, f64)> {
    if !(y > 0.0) {
        return Err(Error::DomainError(format!("φ derivatives need y > 0, got {y}")));
    }
    let e = (1.0 / y).exp();
    let first = -y * y * y * e;
    let q = y * y * e;
    let second = q * q * (3.0 * y - 1.0);
    if !first.is_finite() || !second.is_finite() {
        return Err(Error::Overflow(format!("e^(1/y) out of range at y = {y}")));
    }
    Ok((first, second))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feasibility {
    pub feasible: bool,
    /// `lim_{x→γ⁻} f(x) + K`, the smallest budget with a root.
    pub limit: f64,
    /// `K − limit`.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackDual {
    alpha: Vec<f64>,
    beta: Vec<f64>,
    budget: f64,
    beta_max: f64,
    alpha_sum: f64,
}

impl KnapsackDual {
    pub fn new(alpha: Vec<f64>, beta: Vec<f64>, budget: f64) -> Result<Self> {
        if alpha.len() != beta.len() {
            return Err(Error::invalid(format!(
                "alpha and beta must have the same length (got {} and {})",
                alpha.len(),
                beta.len()
            )));
        }
        if alpha.is_empty() {
            return Err(Error::invalid("alpha and beta must be non-empty"));
        }
        for (name, v) in [("alpha", &alpha), ("beta", &beta)] {
            for (j, &x) in v.iter().enumerate() {
                if !(x > 0.0 && x.is_finite()) {
                    return Err(Error::invalid(format!("{name}[j] must be positive ({name}[{j}] = {x})")));
                }
            }
        }
        if !(budget > 0.0 && budget.is_finite()) {
            return Err(Error::invalid(format!("K must be positive (K = {budget})")));
        }
        let beta_max = beta.iter().copied().fold(f64::MIN, f64::max);
        let alpha_sum = alpha.iter().sum();
        Ok(KnapsackDual {
            alpha,
            beta,
            budget,
            beta_max,
            alpha_sum,
        })
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    /// `γ = 1 / max β_j`, the right end of the domain.
    pub fn gamma(&self) -> f64 {
        1.0 / self.beta_max
    }

    /// Inner tolerance derived from the outer residual tolerance.
    pub fn inner_tol(&self, cfg: &SolverConfig) -> f64 {
        let tied = cfg.f_tol * self.budget / (10.0 * self.alpha_sum);
        cfg.inner_tol.min(tied).max(f64::EPSILON * 0.5)
    }

    fn check_x(&self, x: f64) -> Result<()> {
        if !(x > 0.0 && x * self.beta_max < 1.0) {
            return Err(Error::DomainError(format!(
                "x = {x} outside (0, γ = {})",
                self.gamma()
            )));
        }
        Ok(())
    }

    /// `y_j = φ(β_j x)` and `1 − β_j x` for every term.
    fn terms(&self, x: f64, tol: f64) -> Result<Vec<(f64, f64)>> {
        self.beta
            .iter()
            .map(|&bj| {
                let s = (-bj).mul_add(x, 1.0);
                let phi = phi_with_complement(bj * x, s, tol)?;
                Ok((phi.y, s))
            })
            .collect()
    }

    pub fn eval_f(&self, x: f64, cfg: &SolverConfig) -> Result<f64> {
        self.check_x(x)?;
        let terms = self.terms(x, self.inner_tol(cfg))?;
        let mut acc = CompensatedSum::with_initial(-self.budget);
        for (&aj, &(y, _)) in self.alpha.iter().zip(&terms) {
            acc += aj * y;
        }
        Ok(acc.value())
    }

    /// `f'(x) = Σ α_j β_j φ'(β_j x)`, with `e^{1/y} = (y + 1)/(y (1 − β_j x))`.
    pub fn eval_deriv(&self, x: f64, cfg: &SolverConfig) -> Result<f64> {
        self.check_x(x)?;
        let terms = self.terms(x, self.inner_tol(cfg))?;
        let mut acc = CompensatedSum::new();
        for ((&aj, &bj), &(y, s)) in self.alpha.iter().zip(&self.beta).zip(&terms) {
            acc += -aj * bj * y * y * (y + 1.0) / s;
        }
        Ok(acc.value())
    }

    /// `(L f, (L f)')` with `L(x) = 1 − x/γ`.
    pub fn eval_lf(&self, x: f64, cfg: &SolverConfig) -> Result<(f64, f64)> {
        self.check_x(x)?;
        let terms = self.terms(x, self.inner_tol(cfg))?;
        let l = (-self.beta_max).mul_add(x, 1.0);
        let mut f = CompensatedSum::with_initial(-self.budget);
        let mut l_df = CompensatedSum::new();
        for ((&aj, &bj), &(y, s)) in self.alpha.iter().zip(&self.beta).zip(&terms) {
            f += aj * y;
            // L / (1 − β_j x) is exactly 1 for the terms with β_j = max β
            let ratio = if bj == self.beta_max { 1.0 } else { l / s };
            l_df += -aj * bj * y * y * (y + 1.0) * ratio;
        }
        let f = f.value();
        Ok((l * f, -self.beta_max * f + l_df.value()))
    }

    /// `x₀ = γ h(K / Σα)`: the root of `Σα φ(x/γ) − K`, which bounds `f`
    /// from below, so `x₀` is never right of the root.
    pub fn initial_point(&self) -> Result<f64> {
        Ok(self.gamma() * h_eval(self.budget / self.alpha_sum)?)
    }

    /// Compares `K` with `lim_{x→γ⁻} Σ α_j φ(β_j x)`; terms with
    /// `β_j = max β` vanish in the limit.
    pub fn check_feasible(&self, cfg: &SolverConfig) -> Result<Feasibility> {
        let tol = self.inner_tol(cfg);
        let mut acc = CompensatedSum::new();
        for (&aj, &bj) in self.alpha.iter().zip(&self.beta) {
            if bj < self.beta_max {
                let u = bj / self.beta_max;
                let s = (self.beta_max - bj) / self.beta_max;
                acc += aj * phi_with_complement(u, s, tol)?.y;
            }
        }
        let limit = acc.value();
        Ok(Feasibility {
            feasible: self.budget > limit,
            limit,
            margin: self.budget - limit,
        })
    }

    /// Newton on `L f` from [`initial_point`](Self::initial_point). The trace
    /// records `(x, f(x))`; the residual test is `|f| <= f_tol · K`.
    pub fn solve(&self, cfg: &SolverConfig) -> Result<IterationTrace> {
        let feas = self.check_feasible(cfg)?;
        if !feas.feasible {
            return Err(Error::Infeasible(format!(
                "K = {} does not exceed the limit {} at x → γ (margin {})",
                self.budget, feas.limit, feas.margin
            )));
        }
        let outer = cfg.scaled(self.budget);
        let x0 = self.initial_point()?;
        let f = self.as_function(cfg);
        let stepper = |x: f64, fx: f64| {
            if fx <= 0.0 {
                // right of the root only by rounding
                return Ok(x);
            }
            let (v, dv) = self.eval_lf(x, cfg)?;
            newton_update(x, v, dv)
        };
        iterate(&f, stepper, x0, &outer)
    }

    /// `f` as a [`ScalarFunction`] on `(0, γ)`, evaluated with `cfg`'s inner
    /// tolerance.
    pub fn as_function<'a>(&'a self, cfg: &'a SolverConfig) -> KnapsackFunction<'a> {
        KnapsackFunction { problem: self, cfg }
    }
}

pub struct KnapsackFunction<'a> {
    problem: &'a KnapsackDual,
    cfg: &'a SolverConfig,
}

impl ScalarFunction for KnapsackFunction<'_> {
    fn eval(&self, x: f64) -> Result<f64> {
        self.problem.eval_f(x, self.cfg)
    }

    fn deriv1(&self, x: f64) -> Result<f64> {
        self.problem.eval_deriv(x, self.cfg)
    }

    fn domain(&self) -> Domain {
        Domain::open(0.0, self.problem.gamma())
    }
}
