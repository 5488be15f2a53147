//! Classic one-point and two-point steps.
//!
//! Each is the root of a simple approximant fitted at the current point:
//! the tangent line (Newton), the chord through two points (secant) and the
//! osculating hyperbola `α + β/(x − γ)` (Halley).

use crate::driver::Stepper;
use crate::error::{Error, Result};
use crate::function::ScalarFunction;

/// `x - f/f'`.
///
/// A vanishing derivative is a breakdown even where `f` itself vanishes.
pub fn newton_update(x: f64, fx: f64, dfx: f64) -> Result<f64> {
    if dfx == 0.0 || !dfx.is_finite() {
        return Err(Error::breakdown(format!("Newton: f'({x}) = {dfx}")));
    }
    if fx == 0.0 {
        return Ok(x);
    }
    Ok(x - fx / dfx)
}

/// `x - f(x)(x - y)/(f(x) - f(y))`.
pub fn secant_update(x: f64, fx: f64, y: f64, fy: f64) -> Result<f64> {
    if x == y {
        return Err(Error::breakdown(format!("secant: coincident points x = y = {x}")));
    }
    if fx == fy {
        return Err(Error::breakdown(format!("secant: f({x}) = f({y}) = {fx}")));
    }
    Ok(x - fx * (x - y) / (fx - fy))
}

/// `x - 2ff' / (2f'^2 - ff'')`.
pub fn halley_update(x: f64, fx: f64, dfx: f64, d2fx: f64) -> Result<f64> {
    if fx == 0.0 {
        return Ok(x);
    }
    let denom = 2.0 * dfx * dfx - fx * d2fx;
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::breakdown(format!("Halley: zero denominator at {x}")));
    }
    Ok(x - 2.0 * fx * dfx / denom)
}

pub fn newton_step<F: ScalarFunction + ?Sized>(f: &F, x: f64) -> Result<f64> {
    newton_update(x, f.eval(x)?, f.deriv1(x)?)
}

pub fn secant_step<F: ScalarFunction + ?Sized>(f: &F, x: f64, y: f64) -> Result<f64> {
    if x == y {
        return Err(Error::breakdown(format!("secant: coincident points x = y = {x}")));
    }
    secant_update(x, f.eval(x)?, y, f.eval(y)?)
}

pub fn halley_step<F: ScalarFunction + ?Sized>(f: &F, x: f64) -> Result<f64> {
    let fx = f.eval(x)?;
    if fx == 0.0 {
        return Ok(x);
    }
    halley_update(x, fx, f.deriv1(x)?, f.deriv2(x)?)
}

/// Newton's method as a [`Stepper`].
pub struct Newton<'a, F: ?Sized> {
    f: &'a F,
}

impl<'a, F: ScalarFunction + ?Sized> Newton<'a, F> {
    pub fn new(f: &'a F) -> Self {
        Newton { f }
    }
}

impl<F: ScalarFunction + ?Sized> Stepper for Newton<'_, F> {
    fn step(&mut self, x: f64, fx: f64) -> Result<f64> {
        newton_update(x, fx, self.f.deriv1(x)?)
    }
}

/// Halley's method as a [`Stepper`].
pub struct Halley<'a, F: ?Sized> {
    f: &'a F,
}

impl<'a, F: ScalarFunction + ?Sized> Halley<'a, F> {
    pub fn new(f: &'a F) -> Self {
        Halley { f }
    }
}

impl<F: ScalarFunction + ?Sized> Stepper for Halley<'_, F> {
    fn step(&mut self, x: f64, fx: f64) -> Result<f64> {
        if fx == 0.0 {
            return Ok(x);
        }
        halley_update(x, fx, self.f.deriv1(x)?, self.f.deriv2(x)?)
    }
}

/// The secant method as a [`Stepper`]. Remembers the previous point; the
/// first step uses the point given to [`Secant::new`].
pub struct Secant<'a, F: ?Sized> {
    f: &'a F,
    prev: f64,
    prev_f: Option<f64>,
}

impl<'a, F: ScalarFunction + ?Sized> Secant<'a, F> {
    pub fn new(f: &'a F, previous: f64) -> Self {
        Secant {
            f,
            prev: previous,
            prev_f: None,
        }
    }
}

impl<F: ScalarFunction + ?Sized> Stepper for Secant<'_, F> {
    fn step(&mut self, x: f64, fx: f64) -> Result<f64> {
        if fx == 0.0 {
            return Ok(x);
        }
        let fy = match self.prev_f {
            Some(v) => v,
            None => self.f.eval(self.prev)?,
        };
        let next = secant_update(x, fx, self.prev, fy)?;
        self.prev = x;
        self.prev_f = Some(fx);
        Ok(next)
    }
}
