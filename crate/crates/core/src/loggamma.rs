//! Complex log-gamma on |arg x| < pi, the Stirling remainder f_N with a
//! certified bound, and Artin's series for f as an independent oracle.
//!
//! log Gamma is computed by upward recurrence into a zone where the Stirling
//! series is accurate past the working precision; f_N then comes from
//! subtracting the truncated series. The remainder bound is the classical
//! |f_N(x)| <= |B_{2N+2}| / ((2N+1)(2N+2) |x|^{2N+1} cos^{2N+2}(arg(x)/2)).

use crate::arith::{check_finite, pow2, Complex};
use crate::error::{Error, Result};
use crate::special::bernoulli_float;
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

/// Stirling-series cap: 64 at moderate precision, scaling up at high
/// precision where a fixed cap would push the recurrence shift (and its
/// per-term logarithms) into the tens of thousands.
fn n_cap(prec: u32) -> u32 {
    64.max((prec as f64 / 2.5).ceil() as u32)
}

/// A Stirling evaluation: the value of f_N(x) (or log Gamma) together with
/// the certified bound on the remainder where one applies.
#[derive(Debug, Clone)]
pub struct StirlingEval {
    pub value: Complex,
    pub order: u32,
    pub tail_bound: Float,
}

/// The classical sector bound on |f_N(x)|.
///
/// Finite for |arg x| < pi; the public `stirling_fn` restricts to
/// |arg x| <= 3 pi/4 where the secant power stays benign.
pub fn bound_fn(x: &Complex, n: u32) -> Result<Float> {
    let p = x.prec();
    let b = bernoulli_float(2 * n as usize + 2, p)?.abs();
    let ax = x.abs();
    if ax.is_zero() {
        return Err(Error::Domain("f_N bound undefined at x = 0".into()));
    }
    let half_arg = Float::with_val(p, x.arg() / 2u32);
    let c = half_arg.cos();
    if !(c > 0) {
        return Err(Error::Domain("f_N bound needs |arg x| < pi".into()));
    }
    let denom = Float::with_val(p, (2 * n + 1) * (2 * n + 2))
        * Float::with_val(p, ax.pow(2 * n + 1))
        * Float::with_val(p, c.pow(2 * n + 2));
    Ok(b / denom)
}

/// Truncated Stirling series at X (no shift): (X - 1/2) log X - X
/// + log(2 pi)/2 + sum_{k=1}^{N} B_{2k} / (2k (2k-1) X^{2k-1}).
fn stirling_series(x: &Complex, n: u32) -> Result<Complex> {
    let p = x.prec();
    let logx = x.ln()?;
    let half = Float::with_val(p, 0.5f32);
    let mut acc = x
        .sub(&Complex::from_real(half.clone()))
        .mul(&logx)
        .sub(x);
    let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
    acc = acc.add(&Complex::from_real(
        Float::with_val(p, two_pi.ln_ref()) / 2u32,
    ));
    let x2_inv = x.powi(-2)?;
    let mut xpow = x.recip()?; // X^{-(2k-1)}
    for k in 1..=n {
        let b = bernoulli_float(2 * k as usize, p)?;
        let den = Float::with_val(p, 2 * k * (2 * k - 1));
        acc = acc.add(&xpow.mul_real(&Float::with_val(p, &b / &den)));
        if k < n {
            xpow = xpow.mul(&x2_inv);
        }
    }
    Ok(acc)
}

/// Pick the shift m and order N so that bound_fn(x + m, N) < 2^{-prec-8}.
fn choose_shift(x: &Complex, p: u32) -> Result<(u32, u32)> {
    // |X| needs to reach roughly (p + 8) ln 2 / (2 pi) before the optimally
    // truncated Stirling tail dips under the target.
    let need = (p as f64 + 16.0) * std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI);
    let ax = x.abs().to_f64();
    let rex = x.re.to_f64();
    let mut m = if ax >= need && rex > 0.0 {
        0u32
    } else {
        // Start near the estimate; the loop below settles it.
        (need - rex).max(0.0).ceil() as u32
    };
    let target = pow2(p, -(p as i32) - 8);
    let cap = n_cap(p);
    loop {
        let shifted = x.add(&Complex::with_val(p, m as f64, 0.0));
        let ax = shifted.abs().to_f64();
        let n_auto = ((std::f64::consts::PI * ax).floor() as u32).clamp(1, cap);
        if shifted.re > 0 {
            let b = bound_fn(&shifted, n_auto)?;
            if b < target {
                return Ok((m, n_auto));
            }
        }
        m += 1;
        if m > 4 * p + 10_000 {
            return Err(Error::Convergence(
                "could not place Stirling zone for log_gamma".into(),
            ));
        }
    }
}

/// log Gamma(x) on the branch real for x > 0 and continuous off R_{<=0}.
pub fn log_gamma(x: &Complex) -> Result<Complex> {
    let p = x.prec();
    if x.is_zero() || (x.im.is_zero() && x.re <= 0) {
        return Err(Error::Domain("log_gamma needs x off R_{<=0}".into()));
    }
    let (m, n) = choose_shift(x, p)?;
    let shifted = x.add(&Complex::with_val(p, m as f64, 0.0));
    let mut acc = stirling_series(&shifted, n)?;
    // log Gamma(x) = log Gamma(x+m) - sum_{j=0}^{m-1} log(x+j)
    for j in 0..m {
        let xj = x.add(&Complex::with_val(p, j as f64, 0.0));
        acc = acc.sub(&xj.ln()?);
    }
    check_finite(acc, "log_gamma")
}

/// The Stirling remainder f_N(x) = log Gamma(x) - [truncated series],
/// restricted to the sector |arg x| <= 3 pi/4 where `tail_bound` is sharp.
pub fn stirling_fn(x: &Complex, n: u32) -> Result<StirlingEval> {
    let p = x.prec();
    if x.is_zero() {
        return Err(Error::Domain("f_N undefined at x = 0".into()));
    }
    let arg = x.arg().abs();
    let sector = Float::with_val(p, Constant::Pi) * 3u32 / 4u32;
    if arg > sector {
        return Err(Error::Domain(
            "stirling_fn restricted to |arg x| <= 3 pi/4".into(),
        ));
    }
    let value = fn_unchecked(x, n)?;
    let tail_bound = bound_fn(x, n)?;
    Ok(StirlingEval {
        value,
        order: n,
        tail_bound,
    })
}

/// f_N(x) without the sector restriction (valid on |arg x| < pi). The
/// identity evaluators need arguments arbitrarily close to the negative axis
/// for their n = 0 term; only the certified bound requires the sector.
pub(crate) fn fn_unchecked(x: &Complex, n: u32) -> Result<Complex> {
    Ok(log_gamma(x)?.sub(&stirling_series(x, n)?))
}

/// Artin's series for f(x) = f_1(x), folded so the terms decay like
/// (x+n)^{-4}: each summand is
/// (x+n+1/2) log((x+n+1)/(x+n)) - 1 + 1/(12(x+n+1)) - 1/(12(x+n)),
/// which telescopes the -1/(12x) head into the sum.
pub fn artin_f1(x: &Complex, terms: usize) -> Result<Complex> {
    let p = x.prec();
    if x.im.is_zero() && x.re <= 0 {
        return Err(Error::Domain("artin_f1 needs x off R_{<=0}".into()));
    }
    let half = Float::with_val(p, 0.5f32);
    let twelfth = Float::with_val(p, 12u32).recip();
    let mut acc = Complex::zero(p);
    for j in 0..terms {
        let xn = x.add(&Complex::with_val(p, j as f64, 0.0));
        let xn1 = x.add(&Complex::with_val(p, (j + 1) as f64, 0.0));
        let ratio = xn1.div(&xn)?;
        let mut term = xn
            .add(&Complex::from_real(half.clone()))
            .mul(&ratio.ln()?)
            .sub(&Complex::one(p));
        term = term.add(&xn1.recip()?.mul_real(&twelfth));
        term = term.sub(&xn.recip()?.mul_real(&twelfth));
        acc = acc.add(&term);
    }
    check_finite(acc, "artin_f1")
}
