//! Optimal-truncation estimators: the heuristic stopping order N* and
//! minimal-error scale R* for each asymptotic series, at real x > 0 and
//! real beta > 0.

use crate::sweep::SweepRegime;
use qpoch_core::arith::Precision;
use qpoch_core::error::{Error, Result};
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

/// Heuristic optimal truncation: stop near order `n_star`, expect a minimal
/// error of scale `r_star`.
#[derive(Debug, Clone)]
pub struct TruncEstimate {
    pub n_star: Float,
    pub r_star: Float,
    pub regime: SweepRegime,
    pub formula_id: &'static str,
}

/// Estimate (N*, R*) for the given regime at y = x beta^c.
///
/// For c = 1 with 2x integral the series converges and no optimal truncation
/// exists; the exact remainder evaluator applies there instead.
pub fn estimate_optimal(
    regime: SweepRegime,
    c: &Rational,
    x: &Float,
    beta: &Float,
    prec: Precision,
) -> Result<TruncEstimate> {
    if !(x.is_finite() && *x > 0) || !(beta.is_finite() && *beta > 0) {
        return Err(Error::Domain(
            "estimators are stated for real x > 0, beta > 0".into(),
        ));
    }
    let p = prec.working();
    let pi = Float::with_val(p, Constant::Pi);
    let x = Float::with_val(p, x);
    let beta = Float::with_val(p, beta);

    let (n_star, r_star, formula_id) = match regime {
        SweepRegime::Uniform => {
            // N* = 2 pi sqrt(x^2 + 4 pi^2)/beta,
            // R* = 2 sqrt(beta) e^{-N*} / (pi (x^2 + 4 pi^2)^{1/4})
            let (n, r) = uniform_formulas(&pi, &x, &beta, p);
            (n, r, "uniform")
        }
        SweepRegime::C0 => {
            // N* = 2 pi x / beta, R* = sqrt(beta) e^{-N*} / (pi sqrt(x))
            let n = Float::with_val(p, 2u32) * &pi * &x / &beta;
            let r = Float::with_val(p, beta.sqrt_ref())
                * Float::with_val(p, (-n.clone()).exp_ref())
                / (Float::with_val(p, &pi * Float::with_val(p, x.sqrt_ref())));
            (n, r, "fixed-y")
        }
        SweepRegime::CSmall => {
            // N* = 2 (1-c) pi x beta^{c-1},
            // R* = beta^{(1-c)/2} e^{-2 pi x beta^{c-1}} / (pi sqrt(x))
            let cf = Float::with_val(p, c);
            let omc = Float::with_val(p, 1u32) - &cf;
            let bc1 = Float::with_val(
                p,
                (Float::with_val(p, &cf - Float::with_val(p, 1u32))
                    * Float::with_val(p, beta.ln_ref()))
                .exp_ref(),
            );
            let full = Float::with_val(p, 2u32) * &pi * &x * &bc1;
            let n = Float::with_val(p, &omc * &full);
            let half_exp = Float::with_val(
                p,
                (Float::with_val(p, &omc / Float::with_val(p, 2u32))
                    * Float::with_val(p, beta.ln_ref()))
                .exp_ref(),
            );
            let r = half_exp * Float::with_val(p, (-full.clone()).exp_ref())
                / (Float::with_val(p, &pi * Float::with_val(p, x.sqrt_ref())));
            (n, r, "small-c")
        }
        SweepRegime::C1 => {
            let two_x = Float::with_val(p, &x * 2u32);
            let rounded = Float::with_val(p, two_x.round_ref());
            if Float::with_val(p, &two_x - &rounded).abs() < Float::with_val(p, 1e-12) {
                return Err(Error::Domain(
                    "c = 1 with 2x integral: series converges; use the exact remainder".into(),
                ));
            }
            // N* = 4 pi^2/beta, R* = sqrt(2 beta) |sin 2 pi x| e^{-N*} / pi^{3/2}
            let n = Float::with_val(p, 4u32) * Float::with_val(p, pi.square_ref()) / &beta;
            let s = Float::with_val(p, Float::with_val(p, 2u32) * &pi * &x)
                .sin()
                .abs();
            let r = Float::with_val(p, Float::with_val(p, 2u32) * &beta).sqrt()
                * s
                * Float::with_val(p, (-n.clone()).exp_ref())
                / Float::with_val(p, pi.clone().pow(3u32)).sqrt();
            (n, r, "c-1")
        }
        SweepRegime::CLarge => {
            // N* = 4 pi^2/beta, R* = sqrt(2 beta) e^{-N*} / pi^{3/2}
            let n = Float::with_val(p, 4u32) * Float::with_val(p, pi.square_ref()) / &beta;
            let r = Float::with_val(p, Float::with_val(p, 2u32) * &beta).sqrt()
                * Float::with_val(p, (-n.clone()).exp_ref())
                / Float::with_val(p, pi.clone().pow(3u32)).sqrt();
            (n, r, "c-gt-1")
        }
    };
    if !(n_star > 0) || !(r_star > 0) {
        return Err(Error::NonFinite("estimate produced a degenerate value".into()));
    }
    Ok(TruncEstimate {
        n_star,
        r_star,
        regime,
        formula_id,
    })
}

fn uniform_formulas(pi: &Float, x: &Float, beta: &Float, p: u32) -> (Float, Float) {
    let disc = Float::with_val(p, x.square_ref())
        + Float::with_val(p, 4u32) * Float::with_val(p, pi.square_ref());
    let root = Float::with_val(p, disc.sqrt_ref());
    let n = Float::with_val(p, 2u32) * pi * &root / beta;
    let r = Float::with_val(p, 2u32)
        * Float::with_val(p, beta.sqrt_ref())
        * Float::with_val(p, (-n.clone()).exp_ref())
        / (pi * Float::with_val(p, disc.sqrt_ref()).sqrt());
    (n, r)
}
