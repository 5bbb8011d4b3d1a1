//! Extended-precision evaluation of the infinite q-Pochhammer symbol
//! `(e^{-y}; e^{-beta})_inf` and its logarithm near `beta -> 0`.
//!
//! The crate provides:
//!
//! - [`arith`]: arbitrary-precision real/complex arithmetic, constants and
//!   the branched logarithm with cut along `beta * R_{<=0}`;
//! - [`special`]: exact Bernoulli/Eulerian sequences and the polylogarithm
//!   machinery (`Li_n` for `n <= 2`, zeta values, partial-fraction sums);
//! - [`loggamma`]: the complex log-gamma function, its Stirling remainder
//!   `f_N` with a certified bound, and Artin's series as an independent
//!   oracle;
//! - [`identity`]: the summed-product oracle for `log (e^{-y}; e^{-beta})_inf`
//!   and the exact-identity evaluators (gamma-product identity, principal
//!   value form, Dedekind eta and Jacobi theta transformations);
//! - [`expansions`]: the uniform asymptotic expansion and the four scaling
//!   regime series `y = x beta^c` with exact symbolic coefficients.

pub mod arith;
pub mod error;
pub mod expansions;
pub mod identity;
pub mod loggamma;
pub mod special;

pub use arith::{branched_log, const_euler_gamma, const_pi, BranchContext, Complex, Precision};
pub use error::{Error, Result};
