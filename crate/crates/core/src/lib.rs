//! Scalar nonlinear-equation solvers built on adaptive approximation.
//!
//! Each iteration replaces the target function near the current iterate by a
//! structurally similar function whose root is cheap to compute, and takes
//! that root as the next iterate. The generic machinery (classic one-point
//! steps, the iteration driver, order estimation, a stable quadratic solver)
//! lives in [`function`], [`steps`], [`driver`], [`order`] and [`quadratic`].
//! The specialized solvers are:
//!
//! * [`secular`]: interior roots of `1 + Σ b_j/(d_j − x)` by a two-part
//!   rational approximant, or after the change of variables `x = 1/z`.
//! * [`knapsack`]: the dual equation `Σ α_j φ(β_j x) = K` solved by Newton's
//!   method on a convexified function.
//! * [`pellet`]: the two positive roots of a trinomial `ax^n − bx^k + c`,
//!   approached from inside the interval they bound.
//!
//! [`oracle`] holds the brute-force scan-and-bisect verifier used to check
//! all of the above.

pub mod driver;
pub mod error;
pub mod function;
pub mod knapsack;
pub mod oracle;
pub mod order;
pub mod pellet;
pub mod quadratic;
pub mod secular;
pub mod steps;
pub mod sum;

pub use driver::{iterate, IterationTrace, SolverConfig, Stepper, Termination};
pub use error::{Error, Result};
pub use function::{Domain, FnScalar, ScalarFunction};
pub use order::{estimate_order, OrderEstimate};
pub use quadratic::solve_quadratic_stable;
