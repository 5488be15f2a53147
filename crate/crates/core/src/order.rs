//! Empirical order of convergence.
//!
//! A method has order `q` when `e_{k+1} ≈ C e_k^q` for the errors
//! `e_k = |x_k − x*|`. From three consecutive errors,
//! `q ≈ log(e_{k+1}/e_k) / log(e_k/e_{k−1})`; the estimate reported is the
//! median over all available triples. At `q = 1` the estimate cannot tell a
//! contracting constant `C < 1` from a non-contracting one, so it is
//! descriptive only.

use crate::driver::IterationTrace;
use crate::error::{Error, Result};

/// Errors below this fraction of `|root|` are rounding noise and ignored.
pub const NOISE_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderEstimate {
    pub q: f64,
    /// Number of errors that entered the estimate.
    pub samples_used: usize,
}

pub fn estimate_order(trace: &IterationTrace, reference_root: f64) -> Result<OrderEstimate> {
    let errors: Vec<f64> = trace.xs().map(|x| (x - reference_root).abs()).collect();
    estimate_order_from_errors(&errors, NOISE_FLOOR * reference_root.abs())
}

/// Order estimate from a raw error sequence.
///
/// Errors at or below `floor` end the usable run. Within the run the longest
/// strictly decreasing tail is used; it must hold at least three errors (two
/// consecutive error ratios).
pub fn estimate_order_from_errors(errors: &[f64], floor: f64) -> Result<OrderEstimate> {
    let run_end = errors
        .iter()
        .position(|&e| !(e > floor && e > 0.0 && e.is_finite()))
        .unwrap_or(errors.len());
    let run = &errors[..run_end];
    let mut start = run.len().saturating_sub(1);
    while start > 0 && run[start - 1] > run[start] {
        start -= 1;
    }
    let usable = &run[start..];
    if usable.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} usable decreasing errors, need at least 3",
            usable.len()
        )));
    }
    let mut qs: Vec<f64> = usable
        .windows(3)
        .map(|w| (w[2] / w[1]).ln() / (w[1] / w[0]).ln())
        .filter(|q| q.is_finite())
        .collect();
    if qs.is_empty() {
        return Err(Error::InsufficientData("no finite log-ratio".into()));
    }
    qs.sort_by(|a, b| a.total_cmp(b));
    let mid = qs.len() / 2;
    let q = if qs.len() % 2 == 1 {
        qs[mid]
    } else {
        0.5 * (qs[mid - 1] + qs[mid])
    };
    if q <= 0.0 {
        return Err(Error::InsufficientData(format!("non-positive order estimate {q}")));
    }
    Ok(OrderEstimate {
        q,
        samples_used: usable.len(),
    })
}
