//! Brute-force root verification: sign-change scanning and plain bisection.
//!
//! Nothing here shares code with the specialized solvers. Bisection is pure
//! (no interpolation) and fully deterministic.

use crate::driver::SolverConfig;
use crate::error::{Error, Result};
use crate::function::ScalarFunction;

/// Interval whose endpoints carry function values of opposite, nonzero sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::invalid(format!("bracket requires lo < hi, got [{lo}, {hi}]")));
        }
        Ok(Bracket { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScanResult {
    pub brackets: Vec<Bracket>,
    /// Sample points where evaluation failed (poles and the like).
    pub skipped: Vec<f64>,
    /// Sample points where the function vanished exactly.
    pub exact: Vec<f64>,
}

/// Evaluates `f` at `samples + 1` equispaced points of `[lo, hi]` and
/// returns every adjacent pair with a strict sign change, excluding pairs
/// that straddle one of `f`'s declared singularities.
pub fn bracket_scan<F: ScalarFunction + ?Sized>(
    f: &F,
    interval: (f64, f64),
    samples: usize,
) -> Result<ScanResult> {
    let (lo, hi) = interval;
    if samples < 2 {
        return Err(Error::invalid("bracket_scan needs at least 2 samples"));
    }
    if !(lo < hi) {
        return Err(Error::invalid(format!("empty scan interval [{lo}, {hi}]")));
    }
    let poles = f.singularities();
    let h = (hi - lo) / samples as f64;
    let mut out = ScanResult::default();
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=samples {
        let x = if i == samples { hi } else { lo + h * i as f64 };
        let fx = match f.eval(x) {
            Ok(v) if v.is_finite() => v,
            _ => {
                out.skipped.push(x);
                prev = None;
                continue;
            }
        };
        if fx == 0.0 {
            out.exact.push(x);
        }
        if let Some((px, pf)) = prev {
            let straddles_pole = poles.iter().any(|&p| px <= p && p <= x);
            if pf * fx < 0.0 && !straddles_pole {
                out.brackets.push(Bracket { lo: px, hi: x });
            }
        }
        prev = Some((x, fx));
    }
    Ok(out)
}

/// Bracket inside the open interval `(lo, hi)` for a function that is
/// finite inside but may blow up at either end (a pole, a domain edge).
///
/// Each endpoint starts one ulp inside and backs off geometrically until
/// `f` evaluates to a finite value there. Fails with `InvalidBracket` when
/// the two endpoint values do not differ in sign.
pub fn bracket_inside<F: ScalarFunction + ?Sized>(f: &F, lo: f64, hi: f64) -> Result<Bracket> {
    if !(lo < hi) {
        return Err(Error::invalid(format!("empty interval ({lo}, {hi})")));
    }
    let finite = |x: f64| matches!(f.eval(x), Ok(v) if v.is_finite());
    let mid = lo + 0.5 * (hi - lo);
    let mut a = lo.next_up();
    while !finite(a) {
        a = lo + 2.0 * (a - lo);
        if a >= mid {
            return Err(Error::DomainError(format!("f is not finite near {lo}")));
        }
    }
    let mut b = hi.next_down();
    while !finite(b) {
        b = hi - 2.0 * (hi - b);
        if b <= mid {
            return Err(Error::DomainError(format!("f is not finite near {hi}")));
        }
    }
    let (fa, fb) = (f.eval(a)?, f.eval(b)?);
    if !(fa * fb < 0.0) {
        return Err(Error::InvalidBracket { lo: a, hi: b });
    }
    Bracket::new(a, b)
}

/// Outcome of [`bisect_detailed`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bisection {
    pub root: f64,
    pub steps: usize,
    /// Width of the final enclosing interval.
    pub width: f64,
}

/// Midpoint of the final interval after halving `br` down to width `tol`
/// (or to floating-point resolution, whichever comes first).
pub fn bisect<F: ScalarFunction + ?Sized>(f: &F, br: Bracket, tol: f64) -> Result<f64> {
    bisect_detailed(f, br, tol).map(|b| b.root)
}

pub fn bisect_detailed<F: ScalarFunction + ?Sized>(f: &F, br: Bracket, tol: f64) -> Result<Bisection> {
    let (mut lo, mut hi) = (br.lo, br.hi);
    let flo = f.eval(lo)?;
    let fhi = f.eval(hi)?;
    if !(flo * fhi < 0.0) {
        return Err(Error::InvalidBracket { lo, hi });
    }
    let lo_negative = flo < 0.0;
    let mut steps = 0;
    while hi - lo > tol {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f.eval(mid)?;
        steps += 1;
        if fm == 0.0 {
            return Ok(Bisection {
                root: mid,
                steps,
                width: 0.0,
            });
        }
        if (fm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Bisection {
        root: lo + 0.5 * (hi - lo),
        steps,
        width: hi - lo,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootReport {
    pub claimed: f64,
    pub oracle: f64,
    pub abs_err: f64,
    pub rel_err: f64,
}

impl RootReport {
    pub fn agrees(&self, rel_tol: f64) -> bool {
        self.rel_err <= rel_tol
    }
}

/// Scan resolution starts here and doubles until a bracket appears.
pub const SCAN_START: usize = 64;
pub const SCAN_LIMIT: usize = 1 << 16;

/// Locates the root of `f` in `interval` closest to `claimed` by scanning
/// and bisection, and reports the discrepancy.
pub fn verify_root<F: ScalarFunction + ?Sized>(
    f: &F,
    claimed: f64,
    interval: (f64, f64),
    _cfg: &SolverConfig,
) -> Result<RootReport> {
    let (lo, hi) = interval;
    if !(lo <= claimed && claimed <= hi) {
        return Err(Error::PreconditionViolated(format!(
            "claimed root {claimed} outside [{lo}, {hi}]"
        )));
    }
    let mut samples = SCAN_START;
    let scan = loop {
        let scan = bracket_scan(f, interval, samples)?;
        if !scan.brackets.is_empty() || !scan.exact.is_empty() || samples >= SCAN_LIMIT {
            break scan;
        }
        samples *= 2;
    };
    let nearest_exact = scan
        .exact
        .iter()
        .copied()
        .min_by(|a, b| (a - claimed).abs().total_cmp(&(b - claimed).abs()));
    let nearest_bracket = scan.brackets.iter().copied().min_by(|a, b| {
        bracket_distance(a, claimed).total_cmp(&bracket_distance(b, claimed))
    });
    let oracle = match (nearest_bracket, nearest_exact) {
        (Some(br), exact) => {
            let scale = br.lo.abs().max(br.hi.abs());
            let root = bisect(f, br, 1e-13 * scale)?;
            match exact {
                Some(e) if (e - claimed).abs() < (root - claimed).abs() => e,
                _ => root,
            }
        }
        (None, Some(e)) => e,
        (None, None) => {
            return Err(Error::NoRootFound(format!(
                "no sign change in [{lo}, {hi}] at {SCAN_LIMIT} samples"
            )))
        }
    };
    let abs_err = (claimed - oracle).abs();
    let rel_err = if oracle == 0.0 { abs_err } else { abs_err / oracle.abs() };
    Ok(RootReport {
        claimed,
        oracle,
        abs_err,
        rel_err,
    })
}

fn bracket_distance(br: &Bracket, x: f64) -> f64 {
    if x < br.lo {
        br.lo - x
    } else if x > br.hi {
        x - br.hi
    } else {
        0.0
    }
}
