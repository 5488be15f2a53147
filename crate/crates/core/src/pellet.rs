//! Positive roots of the trinomial `f(x) = a xⁿ − b xᵏ + c`, and Pellet
//! radii of a general polynomial.
//!
//! With `z = xᵏ` the trinomial becomes `F(z) = a z^{n/k} − b z + c`, convex
//! on `(0, ∞)`. At a point `z̄` with `F(z̄) < 0`, `z^{n/k}` is replaced by
//! `R(z) = α/(β − z)` matching value and slope, which lies above it. The two
//! roots of `G = aR − bz + c` therefore lie between the two roots of `F`,
//! and iterating with either one approaches that root from inside.

use crate::driver::{iterate, IterationTrace, SolverConfig, Termination};
use crate::error::{Error, Result};
use crate::function::{Domain, ScalarFunction};
use crate::quadratic::solve_quadratic_stable;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trinomial {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub n: u32,
    pub k: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Smaller root of the approximant; decreases towards `r₁ᵏ`.
    Lower,
    /// Larger root; increases towards `r₂ᵏ`.
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Applicability {
    /// Minimizer of `F`, `(kb/(na))^{k/(n−k)}`.
    pub z0: f64,
    /// `F(z0)`.
    pub f_min: f64,
    pub applicable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadiiPair {
    pub r1: f64,
    pub r2: f64,
    /// Iterates in `z = xᵏ`, values of `F`.
    pub trace_lower: IterationTrace,
    pub trace_upper: IterationTrace,
    /// Set when `F(z0)` is negative but within rounding of zero; both radii
    /// are then the double point `z0^{1/k}` and no iteration is run.
    pub near_degenerate: bool,
}

/// Relative size of `F(z0)` below which the two roots are treated as one.
/// Iteration floor for each branch of [`Trinomial::solve_radii`].
pub const MIN_BRANCH_ITERS: usize = 2000;

pub const NEAR_DEGENERATE: f64 = 1e-12;

impl Trinomial {
    pub fn new(a: f64, b: f64, c: f64, n: u32, k: u32) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive ({name} = {v})")));
            }
        }
        if n < 3 {
            return Err(Error::invalid(format!("n must be at least 3 (n = {n})")));
        }
        if k < 1 || k >= n {
            return Err(Error::invalid(format!("k must satisfy 1 <= k <= n - 1 (k = {k}, n = {n})")));
        }
        Ok(Trinomial { a, b, c, n, k })
    }

    fn ratio(&self) -> f64 {
        self.n as f64 / self.k as f64
    }

    /// `z^{n/k}`; by exponentiation for integer ratios, otherwise `powf`
    /// polished by one Newton step on `wᵏ = zⁿ`.
    pub fn z_pow(&self, z: f64) -> f64 {
        if self.n.is_multiple_of(self.k) {
            return z.powi((self.n / self.k) as i32);
        }
        let w = z.powf(self.ratio());
        let zn = z.powi(self.n as i32);
        let wk = w.powi(self.k as i32);
        if zn.is_finite() && wk.is_finite() && zn > 0.0 && wk > 0.0 {
            w - w / self.k as f64 * (1.0 - zn / wk)
        } else {
            w
        }
    }

    /// `F(z) = a z^{n/k} − b z + c`.
    pub fn eval_z(&self, z: f64) -> f64 {
        self.a * self.z_pow(z) - self.b * z + self.c
    }

    /// `F'(z) = (n/k) a z^{n/k − 1} − b`.
    pub fn deriv_z(&self, z: f64) -> f64 {
        self.ratio() * self.a * self.z_pow(z) / z - self.b
    }

    /// `f(x) = a xⁿ − b xᵏ + c`.
    pub fn eval_x(&self, x: f64) -> f64 {
        self.a * x.powi(self.n as i32) - self.b * x.powi(self.k as i32) + self.c
    }

    /// Magnitude of the terms of `F` near its minimum.
    pub fn scale(&self) -> f64 {
        self.b * self.minimizer() + self.c
    }

    /// Residual scale near each root: the terms of `F` are of size `c` at
    /// `r₁ᵏ` and of size `b z` at `r₂ᵏ >= z0`.
    pub fn branch_scale(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Lower => self.c,
            Branch::Upper => self.scale(),
        }
    }

    fn minimizer(&self) -> f64 {
        let (n, k) = (self.n as f64, self.k as f64);
        (k * self.b / (n * self.a)).powf(k / (n - k))
    }

    pub fn applicability(&self) -> Applicability {
        let z0 = self.minimizer();
        let f_min = self.eval_z(z0);
        Applicability {
            z0,
            f_min,
            applicable: f_min < 0.0,
        }
    }

    /// `F` on `(0, ∞)` as a [`ScalarFunction`].
    pub fn in_z(&self) -> TrinomialZ {
        TrinomialZ { t: *self }
    }

    pub fn solve_radii(&self, cfg: &SolverConfig) -> Result<RadiiPair> {
        cfg.validate()?;
        let app = self.applicability();
        if !app.applicable {
            return Err(Error::NotApplicable(format!(
                "F(z0) = {} >= 0 at z0 = {}: no two positive roots",
                app.f_min, app.z0
            )));
        }
        let z0 = app.z0;
        let scale = self.scale();
        if app.f_min.abs() <= NEAR_DEGENERATE * scale {
            let r = self.to_x(z0);
            let point = IterationTrace {
                iterates: vec![(z0, app.f_min)],
                termination: Termination::Converged,
                root: Some(z0),
                steps: 0,
                last_step: 0.0,
                escaped: None,
                note: Some("near-degenerate double root".into()),
            };
            return Ok(RadiiPair {
                r1: r,
                r2: r,
                trace_lower: point.clone(),
                trace_upper: point,
                near_degenerate: true,
            });
        }
        let run = |branch: Branch| {
            let mut cfg = cfg.scaled(self.branch_scale(branch));
            // the lower branch starts with a linear phase when k/n is near 1
            // and z0 is huge, roughly halving z per step
            cfg.max_iters = cfg.max_iters.max(MIN_BRANCH_ITERS);
            let f = self.in_z();
            let stepper = move |z: f64, fz: f64| {
                if fz >= 0.0 {
                    // an inside iterate reaches F >= 0 only by rounding
                    return Ok(z);
                }
                self.step_unchecked(z, fz, branch)
            };
            iterate(&f, stepper, z0, &cfg)
        };
        let (lower, upper) = rayon::join(|| run(Branch::Lower), || run(Branch::Upper));
        let (lower, upper) = (lower?, upper?);
        for (t, name) in [(&lower, "lower"), (&upper, "upper")] {
            if !t.converged() {
                return match t.termination {
                    Termination::MaxIters => Err(Error::MaxIters(t.steps)),
                    other => Err(Error::breakdown(format!(
                        "{name} branch ended with {other}: {}",
                        t.note.as_deref().unwrap_or("")
                    ))),
                };
            }
        }
        Ok(RadiiPair {
            r1: self.to_x(lower.root.expect("converged")),
            r2: self.to_x(upper.root.expect("converged")),
            trace_lower: lower,
            trace_upper: upper,
            near_degenerate: false,
        })
    }

    /// `x = z^{1/k}`.
    pub fn to_x(&self, z: f64) -> f64 {
        match self.k {
            1 => z,
            2 => z.sqrt(),
            3 => z.cbrt(),
            k => z.powf(1.0 / k as f64),
        }
    }

    fn step_unchecked(&self, z_bar: f64, f_bar: f64, branch: Branch) -> Result<f64> {
        let inv_ratio = self.k as f64 / self.n as f64;
        let ap = self.a * self.z_pow(z_bar);
        let rho = 1.0 + inv_ratio;
        // G(z) = aα/(β − z) − bz + c = 0 times (β − z), with α = z̄ P k/n and
        // β = ρ z̄, then written in w = z/z̄ and divided by b z̄² so that only
        // a P/(b z̄) appears, never z̄^{1+n/k} itself
        let bz = self.b * z_bar;
        let (lo, hi) = solve_quadratic_stable(1.0, -(rho + self.c / bz), (self.c * rho + ap * inv_ratio) / bz)
        .map_err(|e| Error::breakdown(format!("trinomial step at {z_bar} (F = {f_bar}): {e}")))?;
        // G(z̄) = F(z̄) < 0 and G is convex, so lo <= 1 <= hi up to rounding
        Ok(match branch {
            Branch::Lower => (lo * z_bar).min(z_bar),
            Branch::Upper => (hi * z_bar).max(z_bar),
        })
    }

    /// The approximant `G(z) = aα/(β − z) − bz + c` fitted at `z_bar`.
    pub fn approximant(&self, z_bar: f64) -> TrinomialApproximant {
        let ratio = self.ratio();
        TrinomialApproximant {
            a: self.a,
            b: self.b,
            c: self.c,
            alpha: z_bar * self.z_pow(z_bar) / ratio,
            beta: (1.0 + 1.0 / ratio) * z_bar,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrinomialApproximant {
    a: f64,
    b: f64,
    c: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl TrinomialApproximant {
    pub fn eval(&self, z: f64) -> f64 {
        self.a * self.alpha / (self.beta - z) - self.b * z + self.c
    }
}

/// One step of the inside iteration from `z_bar`, on the chosen branch.
pub fn trinomial_step(t: &Trinomial, z_bar: f64, branch: Branch) -> Result<f64> {
    if !(z_bar > 0.0) {
        return Err(Error::PreconditionViolated(format!("z̄ must be positive, got {z_bar}")));
    }
    let f_bar = t.eval_z(z_bar);
    if !(f_bar < 0.0) {
        return Err(Error::PreconditionViolated(format!(
            "trinomial step needs F(z̄) < 0, got F({z_bar}) = {f_bar}"
        )));
    }
    t.step_unchecked(z_bar, f_bar, branch)
}

pub struct TrinomialZ {
    t: Trinomial,
}

impl ScalarFunction for TrinomialZ {
    fn eval(&self, z: f64) -> Result<f64> {
        Ok(self.t.eval_z(z))
    }

    fn deriv1(&self, z: f64) -> Result<f64> {
        Ok(self.t.deriv_z(z))
    }

    fn domain(&self) -> Domain {
        Domain::open(0.0, f64::INFINITY)
    }
}

/// `f(x) = a xⁿ − b xᵏ + c` as a [`ScalarFunction`] on `(0, ∞)`.
impl ScalarFunction for Trinomial {
    fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.eval_x(x))
    }

    fn deriv1(&self, x: f64) -> Result<f64> {
        let (n, k) = (self.n as i32, self.k as i32);
        Ok(n as f64 * self.a * x.powi(n - 1) - k as f64 * self.b * x.powi(k - 1))
    }

    fn domain(&self) -> Domain {
        Domain::open(0.0, f64::INFINITY)
    }
}

/// The two positive roots of `q(z) = Σ_{j≠ℓ} |a_j| zʲ − |a_ℓ| z^ℓ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PelletRadii {
    pub inner: f64,
    pub outer: f64,
}

const GENERAL_SCAN: usize = 1024;

/// Pellet radii of the polynomial with coefficient moduli `moduli`
/// (constant term first), for the gap at index `ell`. `None` when `q` has no
/// negative values on `(0, ∞)`, or when all coefficients below `ell` vanish
/// (the inner radius degenerates to 0).
///
/// Found by a logarithmic scan of `q(z)/z^ℓ`, which is convex in `ln z`,
/// followed by bisection on each side of the smallest sample.
pub fn pellet_radii_general(moduli: &[f64], ell: usize) -> Result<Option<PelletRadii>> {
    if moduli.iter().any(|&m| !(m >= 0.0 && m.is_finite())) {
        return Err(Error::invalid("coefficient moduli must be finite and non-negative"));
    }
    let Some(degree) = moduli.iter().rposition(|&m| m > 0.0) else {
        return Err(Error::DegenerateInput("all coefficients are zero".into()));
    };
    if degree < 2 {
        return Err(Error::invalid(format!("degree must be at least 2 (degree = {degree})")));
    }
    if ell < 1 || ell >= degree {
        return Err(Error::invalid(format!("ell must satisfy 1 <= ell <= degree - 1 (ell = {ell}, degree = {degree})")));
    }
    let a_ell = moduli[ell];
    if a_ell == 0.0 {
        return Err(Error::invalid(format!("coefficient of degree ell = {ell} is zero")));
    }
    if moduli[..ell].iter().all(|&m| m == 0.0) {
        return Ok(None);
    }
    // s(z) = q(z)/z^ℓ = Σ_{j≠ℓ} |a_j| z^{j−ℓ} − |a_ℓ|
    let s = |z: f64| -> f64 {
        let mut acc = -a_ell;
        for (j, &m) in moduli.iter().enumerate() {
            if j != ell && m > 0.0 {
                acc += m * z.powi(j as i32 - ell as i32);
            }
        }
        acc
    };
    // s < 0 forces |a_j| z^{j−ℓ} < |a_ℓ| for every j, in particular for the
    // lowest nonzero j below ℓ and for the degree
    let j_lo = moduli.iter().position(|&m| m > 0.0).expect("nonzero");
    let lo = (moduli[j_lo] / a_ell).powf(1.0 / (ell - j_lo) as f64);
    let hi = (a_ell / moduli[degree]).powf(1.0 / (degree - ell) as f64);
    if !(lo < hi) {
        return Ok(None);
    }
    let (tlo, thi) = (lo.ln(), hi.ln());
    let sample = |i: usize| (tlo + (thi - tlo) * i as f64 / GENERAL_SCAN as f64).exp();
    let (mut imin, mut smin) = (0, f64::INFINITY);
    for i in 0..=GENERAL_SCAN {
        let v = s(sample(i));
        if v < smin {
            imin = i;
            smin = v;
        }
    }
    // golden-section refinement of the minimum between the neighbouring samples
    let (mut a, mut b) = (
        sample(imin.saturating_sub(1)).ln(),
        sample((imin + 1).min(GENERAL_SCAN)).ln(),
    );
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut t_min = sample(imin).ln();
    for _ in 0..200 {
        if b - a <= 1e-15 * a.abs().max(1.0) {
            break;
        }
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if s(c.exp()) < s(d.exp()) {
            b = d;
        } else {
            a = c;
        }
        let mid = 0.5 * (a + b);
        if s(mid.exp()) < smin {
            smin = s(mid.exp());
            t_min = mid;
        }
    }
    if !(smin < 0.0) {
        return Ok(None);
    }
    let zmin = t_min.exp();
    let inner = bisect_sign(&s, lo, zmin)?;
    let outer = bisect_sign(&s, zmin, hi)?;
    Ok(Some(PelletRadii { inner, outer }))
}

/// Plain bisection for a sign change of `s` on `[lo, hi]`, to float resolution.
fn bisect_sign(s: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let slo = s(lo);
    let shi = s(hi);
    if slo == 0.0 {
        return Ok(lo);
    }
    if shi == 0.0 {
        return Ok(hi);
    }
    if !(slo * shi < 0.0) {
        return Err(Error::InvalidBracket { lo, hi });
    }
    let lo_negative = slo < 0.0;
    loop {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let sm = s(mid);
        if sm == 0.0 {
            return Ok(mid);
        }
        if (sm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}
