//! Polylogarithms of integer order n <= 2.
//!
//! Three evaluation routes cover everything the identity and the asymptotic
//! expansions need:
//!
//! - `li_nonpos`: Li_{-n}(z) as a rational function via Eulerian numbers;
//! - `li_neg_regularized`: the cancellation-free combination
//!   `Li_{-n}(e^{-x}) - n!/x^{n+1}`, evaluated either by its Bernoulli power
//!   series (|x| < 2 pi) or by the image sum over the poles at 2 pi i m;
//! - `li12_paper_branch`: Li_1 and Li_2 of e^{-y} on the branch that is real
//!   for y > 0 and analytic off the cut beta*R_{<=0}.

use crate::arith::{branched_log, check_finite, pow2, BranchContext, Complex};
use crate::error::{Error, Result};
use crate::special::bernoulli::bernoulli_float;
use crate::special::eulerian::eulerian;
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

/// A polylogarithm value tagged with its order and the branch it was
/// evaluated on.
#[derive(Debug, Clone)]
pub struct PolylogValue {
    pub value: Complex,
    pub order: i32,
    pub beta: Complex,
}

/// Li_n(z) for n <= 0 as an elementary rational function of z.
///
/// Li_0(z) = z/(1-z); for n <= -1 the Eulerian-number closed form. Errors at
/// the pole z = 1.
pub fn li_nonpos(n: i64, z: &Complex) -> Result<Complex> {
    if n > 0 {
        return Err(Error::Domain(format!("li_nonpos needs n <= 0, got {n}")));
    }
    let p = z.prec();
    let one = Complex::one(p);
    let omz = one.sub(z);
    let tol = pow2(p, -(p as i32) + 8);
    if omz.abs() <= tol {
        return Err(Error::Domain("Li_n has a pole at z = 1".into()));
    }
    if n == 0 {
        return z.div(&omz);
    }
    let m = (-n) as usize;
    // sum_{k=0}^{m-1} <m,k> z^{m-k}, then divide by (1-z)^{m+1}.
    let mut num = Complex::zero(p);
    for k in 0..m {
        let e = Float::with_val(p, eulerian(m, k as i64));
        num = num.add(&z.powi((m - k) as i64)?.mul_real(&e));
    }
    num.div(&omz.powi((m + 1) as i64)?)
}

/// Li_{-n}(e^{-x}) for n >= 1, split as n!/x^{n+1} plus the regularized part.
/// Stable for all n; used where the full (unregularized) value is wanted.
pub fn li_neg_large(n: usize, x: &Complex) -> Result<Complex> {
    let p = x.prec();
    let fact = Float::with_val(p, Float::factorial(n as u32));
    let sing = x.powi(-(n as i64 + 1))?.mul_real(&fact);
    Ok(sing.add(&li_neg_regularized(n, x)?))
}

/// The regularized negative-order polylogarithm
/// R_n(x) = Li_{-n}(e^{-x}) - n!/x^{n+1}  (n >= 0, |x| < 2 pi or n >= 1).
///
/// Equals n! * sum_{m != 0} (x + 2 pi i m)^{-(n+1)}; no catastrophic
/// cancellation against the pole term, which matters for deep expansions.
pub fn li_neg_regularized(n: usize, x: &Complex) -> Result<Complex> {
    let p = x.prec();
    if x.is_zero() {
        return Err(Error::Domain("R_n(x) undefined at x = 0".into()));
    }
    if n == 0 {
        // Closed form 1/(e^x - 1) - 1/x, with a few extra bits for the
        // cancellation when |x| is small.
        let extra = (-x.abs().get_exp().unwrap_or(0)).max(0) as u32 + 16;
        let xw = Complex::new(
            Float::with_val(p + extra, &x.re),
            Float::with_val(p + extra, &x.im),
        );
        let em1 = xw.exp()?.sub(&Complex::one(p + extra));
        let out = em1.recip()?.sub(&xw.recip()?);
        return Ok(Complex::new(
            Float::with_val(p, out.re),
            Float::with_val(p, out.im),
        ));
    }

    let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
    let ax = x.abs();

    // Estimated costs of the two routes.
    let ax64 = ax.to_f64();
    let series_ok = ax64 < 6.2;
    let series_cost = if series_ok {
        let ramp = ax64 * (n as f64 + 1.0) / (2.0 * std::f64::consts::PI - ax64);
        let geo = p as f64 * 0.70 / (2.0 * std::f64::consts::PI / ax64).ln();
        ramp + geo + 32.0
    } else {
        f64::INFINITY
    };
    let image_cost = image_m_needed(ax64, n, p);

    if series_cost <= image_cost || image_cost > 2e6 {
        li_neg_reg_series(n, x, &two_pi)
    } else {
        li_neg_reg_images(n, x)
    }
}

/// Rough count of image pairs needed: the certified tail 2 n!/(n (pi m)^{n+1})
/// has to drop 2^p below the leading pair ~ 2 n!/|x+2 pi i|^{n+1}.
fn image_m_needed(ax: f64, n: usize, p: u32) -> f64 {
    let ratio_pi = (ax * ax + 4.0 * std::f64::consts::PI * std::f64::consts::PI).sqrt()
        / std::f64::consts::PI;
    let nn = n as f64;
    ratio_pi.powf((nn + 1.0) / nn) * 2f64.powf((p as f64 - nn.log2()) / nn) + 4.0
}

/// Bernoulli power series: R_n(x) = (-1)^n sum_{j>=0} B_{n+j+1} x^j / ((n+j+1) j!).
fn li_neg_reg_series(n: usize, x: &Complex, two_pi: &Float) -> Result<Complex> {
    let p = x.prec();
    let ax = x.abs();
    if ax >= *two_pi {
        return Err(Error::Convergence(
            "Bernoulli series for R_n(x) needs |x| < 2 pi".into(),
        ));
    }
    // Terms ramp up like C(n+j, j) (|x|/2pi)^j before decaying; widen the
    // working precision to absorb the transient.
    let ax64 = ax.to_f64();
    let ramp = (ax64 * (n as f64 + 1.0) / (2.0 * std::f64::consts::PI - ax64)).ceil();
    let grow_bits =
        ((n as f64 + ramp + 1.0) * (1.0 + ax64 / (2.0 * std::f64::consts::PI)).log2()).ceil();
    let pw = p + grow_bits as u32 + 32;

    let xw = Complex::new(Float::with_val(pw, &x.re), Float::with_val(pw, &x.im));
    let eps = pow2(pw, -(pw as i32) + 4);
    let mut acc = Complex::zero(pw);
    // x^j / j! updated incrementally.
    let mut pow_over_fact = Complex::one(pw);
    let mut last_term = Float::new(pw);
    let ax = xw.abs();
    let max_j = 200_000usize;
    let mut j = 0usize;
    loop {
        let idx = n + j + 1;
        if idx % 2 == 0 || idx == 1 {
            let b = bernoulli_float(idx, pw)?;
            let coeff = Float::with_val(pw, &b / Float::with_val(pw, idx as u32));
            let term = pow_over_fact.mul_real(&coeff);
            last_term = term.abs();
            acc = acc.add(&term);
        }
        // Per-step term ratio, Bernoulli growth included:
        // |t_{j+1}/t_j| ~ |x| (n+j+2) / (2 pi (j+1)).
        let ratio = Float::with_val(pw, &ax * Float::with_val(pw, (n + j + 2) as u32))
            / Float::with_val(pw, Float::with_val(pw, (j + 1) as u32) * two_pi);
        if j > 0 && ratio < 0.75f64 {
            // Geometric tail under the last materialized term.
            let tail_scale = Float::with_val(pw, &last_term * &ratio) * 4u32;
            let floor = Float::with_val(pw, acc.abs().max(&Float::with_val(pw, 1e-300)));
            if tail_scale < Float::with_val(pw, &eps * &floor) {
                break;
            }
        }
        j += 1;
        if j > max_j {
            return Err(Error::Convergence(format!(
                "R_{n}(x) Bernoulli series did not settle within {max_j} terms (|x| too close to 2 pi)"
            )));
        }
        pow_over_fact = pow_over_fact
            .mul(&xw)
            .div_real(&Float::with_val(pw, j as u32))?;
    }
    if n % 2 == 1 {
        acc = acc.neg();
    }
    let out = Complex::new(Float::with_val(p, acc.re), Float::with_val(p, acc.im));
    check_finite(out, "regularized polylog series")
}

/// Image sum: R_n(x) = n! sum_{m>=1} [(x+2 pi i m)^{-(n+1)} + (x-2 pi i m)^{-(n+1)}],
/// with the integral tail bound 2 n! / (n pi^{n+1} m^n). Effective for large n.
fn li_neg_reg_images(n: usize, x: &Complex) -> Result<Complex> {
    let p = x.prec();
    if n == 0 || image_m_needed(x.abs().to_f64(), n, p) > 1e7 {
        return Err(Error::Convergence(
            "image sum for R_n(x) impractical at this order/precision".into(),
        ));
    }
    let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
    let fact = Float::with_val(p, Float::factorial(n as u32));
    let eps = pow2(p, -(p as i32) + 4);
    let mut acc = Complex::zero(p);
    let mut first_scale: Option<Float> = None;
    let mut m = 1u64;
    loop {
        let shift = Float::with_val(p, &two_pi * Float::with_val(p, m));
        let up = Complex::new(x.re.clone(), Float::with_val(p, &x.im + &shift))
            .powi(-(n as i64 + 1))?;
        let dn = Complex::new(x.re.clone(), Float::with_val(p, &x.im - &shift))
            .powi(-(n as i64 + 1))?;
        let pair = up.add(&dn);
        acc = acc.add(&pair);
        if first_scale.is_none() {
            first_scale = Some(acc.abs().max(&pair.abs()));
        }
        if m >= 2 {
            // |x +- 2 pi i j| >= pi j for j >= 2 and |x| < 2 pi, so
            // tail <= 2 sum_{j>m} (pi j)^{-(n+1)} <= 2 m^{-n} / (n pi^{n+1}).
            let pi = Float::with_val(p, Constant::Pi);
            let tail = Float::with_val(p, 2u32)
                / (Float::with_val(p, pi.pow(n as u32 + 1))
                    * Float::with_val(p, n as u32)
                    * Float::with_val(p, Float::with_val(p, m).pow(n as u32)));
            let scale = first_scale.as_ref().unwrap();
            if tail < Float::with_val(p, scale * &eps) {
                break;
            }
        }
        m += 1;
        if m > 20_000_000 {
            return Err(Error::Convergence(
                "image sum for R_n(x) did not converge".into(),
            ));
        }
    }
    check_finite(acc.mul_real(&fact), "regularized polylog image sum")
}

/// Li_1 or Li_2 of e^{-y} on the paper branch: real-valued for y > 0 and
/// analytic for y off the cut beta*R_{<=0}.
///
/// Supported for Re y > 0 (principal series) or |y| < 2 pi (Bernoulli
/// expansion with the branched logarithm). The paper leaves the branch
/// implicit elsewhere, so anything outside is rejected.
pub fn li12_paper_branch(n: u32, y: &Complex, ctx: &BranchContext) -> Result<PolylogValue> {
    if n != 1 && n != 2 {
        return Err(Error::Domain(format!("paper-branch Li_n needs n in {{1,2}}, got {n}")));
    }
    if ctx.on_cut(y) {
        return Err(Error::Domain(
            "paper-branch Li_n argument on the cut beta*R_{<=0}".into(),
        ));
    }
    let p = y.prec();
    let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
    let re_pos = y.re > 0;
    let inside_disc = y.abs() < two_pi;
    if !re_pos && !inside_disc {
        return Err(Error::Domain(
            "paper-branch Li_n supported only for Re y > 0 or |y| < 2 pi".into(),
        ));
    }
    let use_series = re_pos && (!inside_disc || y.re >= 0.5f64);
    let value = if use_series {
        li12_principal_series(n, y)?
    } else {
        li12_bernoulli(n, y, ctx)?
    };
    Ok(PolylogValue {
        value,
        order: n as i32,
        beta: ctx.beta().clone(),
    })
}

/// Direct series sum_{k>=1} e^{-ky}/k^n for Re y > 0.
fn li12_principal_series(n: u32, y: &Complex) -> Result<Complex> {
    let p = y.prec();
    if n == 1 {
        // -log(1 - e^{-y}); principal, since Re(1 - e^{-y}) > 0 here.
        let w = y.neg().exp()?;
        return Ok(Complex::one(p).sub(&w).ln()?.neg());
    }
    let w = y.neg().exp()?;
    let eps = pow2(p, -(p as i32) + 4);
    let mut acc = Complex::zero(p);
    let mut wk = w.clone();
    let mut k = 1u64;
    loop {
        let den = Float::with_val(p, k).pow(n);
        acc = acc.add(&wk.div_real(&Float::with_val(p, den))?);
        // |tail| <= |w|^{k+1} / (1 - |w|)
        let aw = w.abs();
        let tail = Float::with_val(p, wk.abs() * &aw)
            / Float::with_val(p, Float::with_val(p, 1u32) - &aw);
        if tail < Float::with_val(p, acc.abs().max(&Float::with_val(p, 1u32)) * &eps) {
            break;
        }
        k += 1;
        if k > 10_000_000 {
            return Err(Error::Convergence(
                "principal polylog series did not converge (Re y too small)".into(),
            ));
        }
        wk = wk.mul(&w);
    }
    check_finite(acc, "principal polylog series")
}

/// Bernoulli expansions of Li_1 and Li_2 around y = 0 (|y| < 2 pi), with the
/// branched logarithm supplying the cut structure.
fn li12_bernoulli(n: u32, y: &Complex, ctx: &BranchContext) -> Result<Complex> {
    let p = y.prec();
    let logy = branched_log(y, ctx)?;
    let eps = pow2(p, -(p as i32) + 4);
    let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
    let ratio_cap = Float::with_val(p, y.abs() / &two_pi);

    // sum over k >= 1 of B_k y^k / (k k!)            (n = 1)
    // sum over k >= 1 of B_k y^{k+1} / (k (k+1)!)    (n = 2)
    let mut acc = Complex::zero(p);
    let mut pow_over_fact = y.clone(); // y^k / k!
    let mut k = 1usize;
    let max_k = 3000usize;
    loop {
        if k == 1 || k % 2 == 0 {
            let b = bernoulli_float(k, p)?;
            let term = match n {
                1 => pow_over_fact.mul_real(&Float::with_val(p, &b / Float::with_val(p, k as u32))),
                _ => {
                    // B_k y^{k+1} / (k (k+1)!) with pow_over_fact = y^k/k!
                    let den = Float::with_val(p, k as u32) * Float::with_val(p, (k + 1) as u32);
                    pow_over_fact
                        .mul(y)
                        .mul_real(&Float::with_val(p, &b / den))
                }
            };
            acc = acc.add(&term);
            if k > 2 {
                // |B_k| ~ 2 k! / (2 pi)^k: the k-th term scale is
                // ~ 2 |y|^k / (k (2 pi)^k); geometric in |y|/(2 pi).
                let scale = Float::with_val(p, pow_over_fact.abs() * &b.clone().abs());
                let tail = Float::with_val(p, &scale * &ratio_cap) * 4u32;
                if tail < Float::with_val(p, acc.abs().max(&Float::with_val(p, 1u32)) * &eps) {
                    break;
                }
            }
        }
        k += 1;
        if k > max_k {
            return Err(Error::Convergence(
                "Bernoulli polylog expansion needs |y| further inside the 2 pi disc".into(),
            ));
        }
        pow_over_fact = pow_over_fact.mul(y).div_real(&Float::with_val(p, k as u32))?;
    }

    let out = match n {
        1 => logy.neg().sub(&acc),
        _ => {
            // pi^2/6 + y log y - y + sum
            let pi = Float::with_val(p, Constant::Pi);
            let head = Complex::from_real(Float::with_val(p, pi.square_ref()) / 6u32);
            head.add(&y.mul(&logy)).sub(y).add(&acc)
        }
    };
    check_finite(out, "Bernoulli polylog expansion")
}

/// Truncated power series for Li_{2-k}(e^{-x}) around x = 0: the singular
/// part plus `terms` Bernoulli terms. Convergent for |x| < 2 pi.
pub fn li_series_exp(
    k: usize,
    x: &Complex,
    ctx: &BranchContext,
    terms: usize,
) -> Result<Complex> {
    let p = x.prec();
    let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
    if !(x.abs() < two_pi) {
        return Err(Error::Convergence(
            "li_series_exp needs |x| < 2 pi".into(),
        ));
    }
    if x.is_zero() {
        return Err(Error::Domain("li_series_exp undefined at x = 0".into()));
    }

    let singular = match k {
        0 => {
            let logx = branched_log(x, ctx)?;
            let pi = Float::with_val(p, Constant::Pi);
            Complex::from_real(Float::with_val(p, pi.square_ref()) / 6u32)
                .add(&x.mul(&logx))
                .sub(x)
        }
        1 => branched_log(x, ctx)?.neg(),
        _ => {
            let fact = Float::with_val(p, Float::factorial(k as u32 - 2));
            x.powi(1 - k as i64)?.mul_real(&fact)
        }
    };

    let start = 1.max(k as i64 - 1) as usize;
    let mut sum = Complex::zero(p);
    // x^{n-k+1} / (n-k+1)! tracked incrementally from n = start.
    let mut pw = x.powi(start as i64 - k as i64 + 1)?;
    let mut fact = Float::with_val(
        p,
        Float::factorial((start as i64 - k as i64 + 1).max(0) as u32),
    );
    for n in start..start + terms {
        if n > start {
            pw = pw.mul(x);
            fact *= (n as i64 - k as i64 + 1) as u32;
        }
        let idx_ok = n == 1 || n % 2 == 0;
        if idx_ok {
            let b = bernoulli_float(n, p)?;
            let coeff = Float::with_val(p, &b / Float::with_val(p, &fact * Float::with_val(p, n as u32)));
            sum = sum.add(&pw.mul_real(&coeff));
        }
    }
    if k % 2 == 1 {
        sum = sum.neg();
    }
    check_finite(singular.add(&sum), "li_series_exp")
}

/// Partial sums of the partial-fraction expansions: for n = 0 the symmetric
/// principal-value sum of 1/(x + 2 pi i k), for n >= 1 the plain symmetric
/// sum of (x + 2 pi i k)^{-(n+1)} (which tends to Li_{-n}(e^{-x})/n!).
pub fn parfrac_partial(n: usize, x: &Complex, m_terms: usize) -> Result<Complex> {
    let p = x.prec();
    let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
    // Pole check: x in 2 pi i Z.
    let nearest = Float::with_val(p, &x.im / &two_pi).round();
    let dist = Complex::new(
        x.re.clone(),
        Float::with_val(p, &x.im - Float::with_val(p, &nearest * &two_pi)),
    )
    .abs();
    if dist <= pow2(p, -(p as i32) + 8) {
        return Err(Error::Domain("parfrac argument at a pole 2 pi i k".into()));
    }

    let mut acc = x.powi(-(n as i64 + 1))?;
    for j in 1..=m_terms {
        let shift = Float::with_val(p, &two_pi * Float::with_val(p, j as u32));
        let up = Complex::new(x.re.clone(), Float::with_val(p, &x.im + &shift))
            .powi(-(n as i64 + 1))?;
        let dn = Complex::new(x.re.clone(), Float::with_val(p, &x.im - &shift))
            .powi(-(n as i64 + 1))?;
        acc = acc.add(&up.add(&dn));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{pi_raw, Precision};

    fn ctx1(p: u32) -> BranchContext {
        BranchContext::new(Complex::one(p)).unwrap()
    }

    #[test]
    fn li0_and_lim1_closed_forms() {
        let p = 128;
        let half = Complex::with_val(p, 0.5, 0.0);
        let v = li_nonpos(0, &half).unwrap();
        assert!(v.sub(&Complex::one(p)).abs() < pow2(p, -120));

        let third = Complex::from_real(Float::with_val(p, 1u32) / 3u32);
        let v = li_nonpos(-1, &third).unwrap();
        let want = Complex::with_val(p, 0.75, 0.0);
        assert!(v.sub(&want).abs() < pow2(p, -110));
    }

    #[test]
    fn lim2_matches_brute_series() {
        // Li_{-2}(1/2) = sum k^2 2^{-k}; 400 terms is far past convergence.
        let p = 160;
        let mut brute = Float::new(p);
        for k in 1..=400u32 {
            brute += Float::with_val(p, k).square() / Float::with_val(p, Float::u_pow_u(2, k));
        }
        let v = li_nonpos(-2, &Complex::with_val(p, 0.5, 0.0)).unwrap();
        assert!((v.re - brute).abs() < pow2(p, -100));
        assert!(v.im.is_zero());
    }

    #[test]
    fn li_nonpos_pole_rejected() {
        let p = 96;
        assert!(matches!(
            li_nonpos(-1, &Complex::one(p)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn li2_far_right_is_tiny() {
        let p = Precision::new(128).unwrap().working();
        let y = Complex::with_val(p, 50.0, 0.0);
        let v = li12_paper_branch(2, &y, &ctx1(p)).unwrap();
        assert!(v.value.abs() < Float::with_val(p, 1e-21));
    }

    #[test]
    fn li2_at_log2() {
        // Li_2(1/2) = pi^2/12 - log^2(2)/2, via brute series as the oracle.
        let p = 192;
        let y = Complex::from_real(Float::with_val(p, 2u32).ln());
        let v = li12_paper_branch(2, &y, &ctx1(p)).unwrap();
        let pi = pi_raw(p);
        let l2 = Float::with_val(p, 2u32).ln();
        let want = Float::with_val(p, pi.square_ref()) / 12u32
            - Float::with_val(p, l2.square_ref()) / 2u32;
        assert!((v.value.re - want).abs() < pow2(p, -170));
    }

    #[test]
    fn li1_at_log2() {
        let p = 160;
        let y = Complex::from_real(Float::with_val(p, 2u32).ln());
        let v = li12_paper_branch(1, &y, &ctx1(p)).unwrap();
        let want = Float::with_val(p, 2u32).ln();
        assert!((v.value.re - want).abs() < pow2(p, -150));
    }

    #[test]
    fn paper_branch_consistency_on_right_half_plane() {
        // Bernoulli route and principal series agree for Re y > 0.
        let p = 192;
        let ctx = ctx1(p);
        for (re, im) in [(0.3, 0.4), (0.1, -1.2), (0.45, 2.0)] {
            let y = Complex::with_val(p, re, im);
            let a = li12_bernoulli(2, &y, &ctx).unwrap();
            let b = li12_principal_series(2, &y).unwrap();
            assert!(a.sub(&b).abs() < pow2(p, -(p as i32) + 24), "y = {re}+{im}i");
            let a = li12_bernoulli(1, &y, &ctx).unwrap();
            let b = li12_principal_series(1, &y).unwrap();
            assert!(a.sub(&b).abs() < pow2(p, -(p as i32) + 24));
        }
    }

    #[test]
    fn li_series_exp_matches_closed_forms() {
        let p = 192;
        let ctx = ctx1(p);
        // k = 2: Li_0(e^{-1}) = 1/(e - 1)
        let x = Complex::one(p);
        let v = li_series_exp(2, &x, &ctx, 60).unwrap();
        let e = Float::with_val(p, 1f32).exp();
        let want = (Float::with_val(p, &e - 1u32)).recip();
        assert!((v.re - want).abs() < Float::with_val(p, 1e-40));

        // k = 0 cross-oracle against the paper-branch Li_2.
        let x = Complex::with_val(p, 0.1, 0.0);
        let v = li_series_exp(0, &x, &ctx, 40).unwrap();
        let w = li12_paper_branch(2, &x, &ctx).unwrap().value;
        assert!(v.sub(&w).abs() < pow2(p, -(p as i32) + 24));

        // k = 3: Li_{-1}(e^{-1/2}) against the Eulerian form.
        let x = Complex::with_val(p, 0.5, 0.0);
        let v = li_series_exp(3, &x, &ctx, 80).unwrap();
        let z = x.neg().exp().unwrap();
        let w = li_nonpos(-1, &z).unwrap();
        assert!(v.sub(&w).abs() < pow2(p, -(p as i32) + 24));
    }

    #[test]
    fn regularized_matches_direct_difference() {
        // Moderate n: R_n(x) vs Li_{-n}(e^{-x}) - n!/x^{n+1} at boosted
        // precision so the direct difference is meaningful.
        let p = 320;
        for n in [1usize, 2, 3, 6, 11] {
            let x = Complex::with_val(p, 1.5, 0.7);
            let reg = li_neg_regularized(n, &x).unwrap();
            let z = x.neg().exp().unwrap();
            let full = li_nonpos(-(n as i64), &z).unwrap();
            let fact = Float::with_val(p, Float::factorial(n as u32));
            let sing = x.powi(-(n as i64 + 1)).unwrap().mul_real(&fact);
            let diff = full.sub(&sing);
            assert!(
                reg.sub(&diff).abs() < pow2(p, -(p as i32) + 64 + 4 * n as i32),
                "n = {n}"
            );
        }
    }

    #[test]
    fn regularized_routes_agree() {
        // Force both evaluation routes on the same input and compare.
        let p = 256;
        let x = Complex::with_val(p, 0.3, 0.2);
        let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
        for n in [40usize, 64, 96] {
            let a = li_neg_reg_series(n, &x, &two_pi).unwrap();
            let b = li_neg_reg_images(n, &x).unwrap();
            let scale = a.abs().max(&Float::with_val(p, 1e-300));
            let rel = Float::with_val(p, a.sub(&b).abs() / scale);
            assert!(rel < pow2(p, -(p as i32) + 32), "n = {n}, rel = {rel}");
        }
    }

    #[test]
    fn parfrac_limits() {
        let p = 192;
        // n = 1: partial sum vs Li_{-1}(e^{-1}).
        let x = Complex::one(p);
        let part = parfrac_partial(1, &x, 10_000).unwrap();
        let z = x.neg().exp().unwrap();
        let want = li_nonpos(-1, &z).unwrap();
        let diff = part.sub(&want).abs();
        // Tail of the symmetric sum is ~ 1/(2 pi^2 M).
        assert!(diff < Float::with_val(p, 1e-4), "diff = {diff}");
        assert!(diff > Float::with_val(p, 1e-9));

        // n = 0: principal value vs coth(1/2)/2.
        let part = parfrac_partial(0, &x, 10_000).unwrap();
        let half = Complex::with_val(p, 0.5, 0.0);
        let want = half.coth().unwrap().mul_real(&Float::with_val(p, 0.5));
        assert!(part.sub(&want).abs() < Float::with_val(p, 1e-3));

        // n = 2 at x = i: sum is conjugate-symmetric, so exactly real pairing.
        let xi = Complex::with_val(p, 0.0, 1.0);
        let part = parfrac_partial(2, &xi, 50).unwrap();
        assert!(part.is_finite());
    }

    #[test]
    fn parfrac_pole_rejected() {
        let p = 128;
        let two_pi_i = Complex::new(Float::new(p), pi_raw(p) * 2u32);
        assert!(matches!(
            parfrac_partial(1, &two_pi_i, 10),
            Err(Error::Domain(_))
        ));
    }
}
