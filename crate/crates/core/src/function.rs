//! Real functions of one real variable, with optional analytic derivatives.

use crate::error::{Error, Result};

/// Open interval `(lo, hi)`; either endpoint may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
}

impl Domain {
    pub const REAL: Domain = Domain {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn open(lo: f64, hi: f64) -> Self {
        debug_assert!(lo < hi, "empty domain ({lo}, {hi})");
        Domain { lo, hi }
    }

    /// Strict membership; NaN is never inside.
    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }
}

impl Default for Domain {
    fn default() -> Self {
        Domain::REAL
    }
}

/// A scalar function `f` together with whatever derivative information the
/// caller can supply analytically.
///
/// Evaluation is fallible: poles and inner solver failures surface as
/// errors rather than infinities.
pub trait ScalarFunction {
    fn eval(&self, x: f64) -> Result<f64>;

    fn deriv1(&self, _x: f64) -> Result<f64> {
        Err(Error::breakdown("first derivative unavailable"))
    }

    fn deriv2(&self, _x: f64) -> Result<f64> {
        Err(Error::breakdown("second derivative unavailable"))
    }

    fn domain(&self) -> Domain {
        Domain::REAL
    }

    /// Known singular points inside the domain. Sign changes across these
    /// are not roots.
    fn singularities(&self) -> &[f64] {
        &[]
    }
}

impl<T: ScalarFunction + ?Sized> ScalarFunction for &T {
    fn eval(&self, x: f64) -> Result<f64> {
        (**self).eval(x)
    }
    fn deriv1(&self, x: f64) -> Result<f64> {
        (**self).deriv1(x)
    }
    fn deriv2(&self, x: f64) -> Result<f64> {
        (**self).deriv2(x)
    }
    fn domain(&self) -> Domain {
        (**self).domain()
    }
    fn singularities(&self) -> &[f64] {
        (**self).singularities()
    }
}

type RealMap<'a> = Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>;

/// Closure-backed [`ScalarFunction`].
///
/// ```
/// use adaptroot_core::{FnScalar, ScalarFunction};
/// let f = FnScalar::new(|x| x * x - 2.0).with_deriv1(|x| 2.0 * x);
/// assert_eq!(f.eval(3.0).unwrap(), 7.0);
/// assert_eq!(f.deriv1(3.0).unwrap(), 6.0);
/// ```
pub struct FnScalar<'a> {
    f: RealMap<'a>,
    d1: Option<RealMap<'a>>,
    d2: Option<RealMap<'a>>,
    domain: Domain,
}

impl<'a> FnScalar<'a> {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'a) -> Self {
        FnScalar {
            f: Box::new(f),
            d1: None,
            d2: None,
            domain: Domain::REAL,
        }
    }

    pub fn with_deriv1(mut self, d1: impl Fn(f64) -> f64 + Send + Sync + 'a) -> Self {
        self.d1 = Some(Box::new(d1));
        self
    }

    pub fn with_deriv2(mut self, d2: impl Fn(f64) -> f64 + Send + Sync + 'a) -> Self {
        self.d2 = Some(Box::new(d2));
        self
    }

    pub fn on(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }
}

impl ScalarFunction for FnScalar<'_> {
    fn eval(&self, x: f64) -> Result<f64> {
        Ok((self.f)(x))
    }

    fn deriv1(&self, x: f64) -> Result<f64> {
        self.d1
            .as_ref()
            .map(|d| d(x))
            .ok_or_else(|| Error::breakdown("first derivative unavailable"))
    }

    fn deriv2(&self, x: f64) -> Result<f64> {
        self.d2
            .as_ref()
            .map(|d| d(x))
            .ok_or_else(|| Error::breakdown("second derivative unavailable"))
    }

    fn domain(&self) -> Domain {
        self.domain
    }
}
