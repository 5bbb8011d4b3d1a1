//! Exact combinatorial sequences (Bernoulli and Eulerian numbers) and the
//! polylogarithm machinery: `Li_n` for integer `n <= 2` on the paper branch,
//! power-series and partial-fraction evaluators, and integer zeta values.

mod bernoulli;
mod eulerian;
mod polylog;
mod zeta;

pub use bernoulli::{
    bernoulli_number, bernoulli_poly, bernoulli_poly_fourier, BernoulliCache,
};
pub(crate) use bernoulli::bernoulli_float;
pub use eulerian::eulerian;
pub use polylog::{
    li12_paper_branch, li_neg_large, li_neg_regularized, li_nonpos, li_series_exp,
    parfrac_partial, PolylogValue,
};
pub use zeta::zeta_int;
