//! The q-Pochhammer oracle and the exact-identity evaluators.
//!
//! The oracle sums log(1 - e^{-y-k beta}) term by term on the branch that
//! vanishes as y -> +infinity, with a certified geometric tail bound. The
//! gamma-product evaluators reproduce the same value from Bernoulli-polylog
//! head terms minus a symmetric sum of Stirling remainders f_N.

use crate::arith::{check_finite, pow2, BranchContext, Complex};
use crate::error::{Error, Result};
use crate::loggamma::fn_unchecked;
use crate::special::{li12_paper_branch, li_nonpos};
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

/// A branch-resolved logarithm of (e^{-y}; e^{-beta})_inf.
#[derive(Debug, Clone)]
pub struct QPochEval {
    /// The branch vanishing as y -> +infinity.
    pub log_value: Complex,
    /// Certified bound on the truncation error (heuristic for the
    /// asymptotic-series evaluators, which mark it so).
    pub tail_bound: Float,
    pub terms_used: usize,
}

/// Two sides of an identity plus their distance.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub lhs: Complex,
    pub rhs: Complex,
    pub residual: Float,
    pub certified_tail: Float,
}

impl IdentityReport {
    pub(crate) fn new(lhs: Complex, rhs: Complex, certified_tail: Float) -> Self {
        let residual = lhs.sub(&rhs).abs();
        IdentityReport {
            lhs,
            rhs,
            residual,
            certified_tail,
        }
    }
}

/// Shift y by a multiple of 2 pi i into the strip Im y in (-pi, pi].
/// The q-Pochhammer value is exactly invariant under the shift.
pub fn reduce_strip(y: &Complex) -> Result<(Complex, i64)> {
    let p = y.prec();
    let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
    let pi = Float::with_val(p, Constant::Pi);
    let ratio = Float::with_val(p, &y.im - &pi) / &two_pi;
    let w = ratio.ceil();
    let w_i = w.to_f64();
    if !w_i.is_finite() || w_i.abs() > 9e15 {
        return Err(Error::Domain("imaginary part too large to reduce".into()));
    }
    let w_i = w_i as i64;
    let shift = Float::with_val(p, &two_pi * Float::with_val(p, w_i));
    let y_red = Complex::new(y.re.clone(), Float::with_val(p, &y.im - &shift));
    Ok((y_red, w_i))
}

/// Validate |arg beta| < pi/2, the strip-reduced region
/// Re y > -Y_max(theta), and distance from the cut beta*R_{<=0}.
///
/// Y_max = min(0.9 pi |cot theta|, pi sqrt(3)); the cap keeps |y| < 2 pi so
/// the paper-branch polylogarithms stay inside their series domain, and the
/// 0.9 margin keeps the neighbouring cuts (2 pi i +- beta R_{<=0}) at a safe
/// angle.
pub(crate) fn region_check_pub(y_red: &Complex, ctx: &BranchContext) -> Result<()> {
    region_check(y_red, ctx)
}

fn region_check(y_red: &Complex, ctx: &BranchContext) -> Result<()> {
    let beta = ctx.beta();
    let p = y_red.prec();
    let pi = Float::with_val(p, Constant::Pi);
    let sqrt3 = Float::with_val(p, 3u32).sqrt();
    let cap = Float::with_val(p, &pi * &sqrt3);
    let y_max = if beta.im.is_zero() {
        cap
    } else {
        let cot = Float::with_val(p, beta.arg().cot_ref()).abs();
        let lim = Float::with_val(p, &pi * &cot) * Float::with_val(p, 0.9f64);
        lim.min(&cap)
    };
    if !(y_red.re > -y_max.clone()) {
        return Err(Error::Domain(format!(
            "Re y = {} below the supported region floor -{}",
            y_red.re.to_f64(),
            y_max.to_f64()
        )));
    }
    if ctx.on_cut(y_red) {
        return Err(Error::Domain("y on the cut beta*R_{<=0}".into()));
    }
    Ok(())
}

/// log (e^{-y}; e^{-beta})_inf by direct term-wise summation on the branch
/// vanishing as y -> +infinity, with certified absolute tail <= tol.
///
/// Terms with Re(y + k beta) > 0 use the principal logarithm; earlier terms
/// have their branch fixed by continuity along the ray y + t beta, t down
/// from large, tracked with adaptive argument unwinding.
pub fn oracle_log_qpoch(y: &Complex, beta: &Complex, tol: &Float) -> Result<QPochEval> {
    let ctx = BranchContext::new(beta.clone())?;
    let p = y.prec().max(beta.prec());
    let (y_red, _) = reduce_strip(y)?;
    region_check(&y_red, &ctx)?;

    if !(tol > &Float::new(p)) {
        return Err(Error::Convergence("tol must be positive".into()));
    }
    let tol_floor = pow2(p, -(p as i32) + 6);
    if *tol < tol_floor {
        return Err(Error::Convergence(format!(
            "tol below what {p}-bit arithmetic can certify"
        )));
    }

    // Number of terms: |e^{-y-(K+1)beta}| must make the geometric tail small.
    let re_y = y_red.re.to_f64();
    let re_b = beta.re.to_f64();
    let r = (-re_b).exp();
    let tol64 = tol.to_f64().max(1e-320);
    let k_tail = ((-(tol64 * (1.0 - r)).ln() - re_y) / re_b).ceil().max(0.0);
    if k_tail > 2e8 {
        return Err(Error::Convergence(
            "tolerance unreachable: too many product terms".into(),
        ));
    }
    // Index of the last term with Re(y + k beta) <= 0, if any.
    let k_neg_max: i64 = if re_y > 0.0 {
        -1
    } else {
        (-re_y / re_b).floor() as i64
    };
    let k_top = (k_tail as i64).max(k_neg_max + 8) as usize;

    let mut acc = Complex::zero(p);
    let mut terms = 0usize;

    if k_neg_max >= 0 {
        let tracked = walk_tracked_terms(&y_red, beta, k_neg_max)?;
        for t in &tracked {
            acc = acc.add(t);
            terms += 1;
        }
    }

    // Principal zone: k from k_neg_max+1 upward, w_k updated incrementally.
    let q = beta.neg().exp()?;
    let start = (k_neg_max + 1) as usize;
    let mut w = y_red
        .add(&beta.mul_real(&Float::with_val(p, start as f64)))
        .neg()
        .exp()?;
    let one = Complex::one(p);
    for k in start..=k_top {
        if k > start {
            if (k - start) % 4096 == 0 {
                w = y_red
                    .add(&beta.mul_real(&Float::with_val(p, k as f64)))
                    .neg()
                    .exp()?;
            } else {
                w = w.mul(&q);
            }
        }
        acc = acc.add(&one.sub(&w).ln()?);
        terms += 1;
    }

    // Certified tail: Sum_{k>K} |log(1 - w_k)| <= t/((1-r)(1-t)), t = |w_{K+1}|.
    let t_next = y_red
        .add(&beta.mul_real(&Float::with_val(p, (k_top + 1) as f64)))
        .neg()
        .exp()?
        .abs();
    let r_f = (-beta.re.clone()).exp();
    let denom = (Float::with_val(p, 1u32) - &r_f)
        * (Float::with_val(p, 1u32) - Float::with_val(p, t_next.clone().min(&Float::with_val(p, 0.5f32))));
    let tail = Float::with_val(p, &t_next / &denom);

    let out = check_finite(acc, "oracle_log_qpoch")?;
    Ok(QPochEval {
        log_value: out,
        tail_bound: tail,
        terms_used: terms,
    })
}

/// Branch tracking for the terms with Re(y + k beta) <= 0: one walk down the
/// ray z(t) = y + t beta from the principal zone to t = 0, unwinding the
/// argument of g(t) = 1 - e^{-z(t)} and recording it at integer t.
fn walk_tracked_terms(y: &Complex, beta: &Complex, k_neg_max: i64) -> Result<Vec<Complex>> {
    let p = y.prec().max(beta.prec());
    let t_start = k_neg_max + 1;
    let mut out = vec![Complex::zero(p); (k_neg_max + 1) as usize];

    let g_at = |t: &Float| -> Result<Complex> {
        let z = y.add(&beta.mul_real(t));
        Ok(Complex::one(p).sub(&z.neg().exp()?))
    };

    let mut t_cur = Float::with_val(p, t_start);
    let mut g_cur = g_at(&t_cur)?;
    // Re z > 0 at t_start, so |e^{-z}| < 1 and the principal argument is the
    // continued one.
    let mut phi = g_cur.arg();
    let min_step = pow2(p, -64);
    let ab = beta.abs().to_f64();

    for k in (0..=k_neg_max).rev() {
        let t_target = Float::with_val(p, k);
        while t_cur > t_target {
            // Rotation rate of g is at most |beta| |w| / |g|.
            let w_abs = (g_cur.sub(&Complex::one(p))).abs().to_f64();
            let rate = ab * w_abs / g_cur.abs().to_f64().max(1e-300);
            let mut h = (0.4 / rate.max(1e-9)).min(1.0);
            let gap = Float::with_val(p, &t_cur - &t_target).to_f64();
            h = h.min(gap);
            loop {
                let t_next = Float::with_val(p, &t_cur - Float::with_val(p, h));
                let g_next = g_at(&t_next)?;
                let ratio = g_next.div(&g_cur)?;
                let d_arg = ratio.arg();
                let mag = ratio.abs().to_f64();
                let pi_f = std::f64::consts::PI;
                if d_arg.clone().abs().to_f64() < 0.45 * pi_f && (0.2..5.0).contains(&mag) {
                    phi += d_arg;
                    g_cur = g_next;
                    t_cur = t_next;
                    break;
                }
                h *= 0.5;
                if h < min_step.to_f64() {
                    return Err(Error::Domain(
                        "branch tracking passed too close to a zero of 1 - e^{-y-t beta}".into(),
                    ));
                }
            }
        }
        let ln_abs = Float::with_val(p, g_cur.abs().ln_ref());
        out[k as usize] = Complex::new(ln_abs, phi.clone());
    }
    Ok(out)
}

/// The infinite product (z; q)_inf = prod (1 - z q^j), truncated once the
/// remaining factors are within tol of 1.
pub fn qpoch_product(z: &Complex, q: &Complex, tol: &Float) -> Result<Complex> {
    let p = z.prec().max(q.prec());
    let aq = q.abs();
    if !(aq < 1) {
        return Err(Error::Domain("(z;q)_inf needs |q| < 1".into()));
    }
    let az = z.abs().to_f64();
    let aq64 = aq.to_f64();
    let tol64 = tol.to_f64().max(1e-320);
    // |log tail| <= 2 |z| |q|^{J+1} / (1 - |q|) once |z q^j| <= 1/2.
    let mut j_end = 0usize;
    if az > 0.0 && aq64 > 0.0 {
        let need = (tol64 * (1.0 - aq64) / (2.0 * az)).ln() / aq64.ln();
        let half = ((0.5 / az).ln() / aq64.ln()).max(0.0);
        j_end = need.max(half).ceil().max(0.0) as usize;
    }
    if j_end > 2e8 as usize {
        return Err(Error::Convergence("(z;q)_inf truncation too long".into()));
    }

    let one = Complex::one(p);
    let zero_tol = pow2(p, -(p as i32) + 8);
    let mut acc = one.clone();
    let mut zq = z.clone();
    for j in 0..=j_end {
        if j > 0 {
            zq = zq.mul(q);
        }
        let factor = one.sub(&zq);
        if factor.abs() <= zero_tol {
            return Err(Error::Domain(format!(
                "(z;q)_inf hits a zero factor at j = {j}"
            )));
        }
        acc = acc.mul(&factor);
    }
    check_finite(acc, "qpoch_product")
}

/// Shared head of the gamma-product identities:
/// sum_{k=0}^{2N} B_k Li_{2-k}(e^{-y}) (-beta)^{k-1} / k! with paper-branch
/// Li_1/Li_2 and rational Li_{2-k} for k >= 2.
fn bernoulli_polylog_head(
    y: &Complex,
    ctx: &BranchContext,
    two_n: usize,
) -> Result<Complex> {
    let p = y.prec();
    let beta = ctx.beta();
    let li2 = li12_paper_branch(2, y, ctx)?.value;
    let li1 = li12_paper_branch(1, y, ctx)?.value;
    // k = 0: B_0 Li_2 (-beta)^{-1} = -Li_2/beta
    let mut acc = li2.div(beta)?.neg();
    // k = 1: B_1 Li_1 = -Li_1/2
    acc = acc.sub(&li1.mul_real(&Float::with_val(p, 0.5f32)));
    let w = y.neg().exp()?;
    let neg_beta = beta.neg();
    for k in (2..=two_n).step_by(2) {
        let li = li_nonpos(2 - k as i64, &w)?;
        let b = crate::special::bernoulli_number(k)?;
        let fact = Float::with_val(p, Float::factorial(k as u32));
        let coeff = Float::with_val(p, Float::with_val(p, b) / fact);
        acc = acc.add(&li.mul(&neg_beta.powi(k as i64 - 1)?).mul_real(&coeff));
    }
    Ok(acc)
}

/// Certified bound on sum_{|n| > M} |f_N((y + 2 pi i n)/beta)| via
/// |y + 2 pi i n| >= (2|n| - 1) pi and the sector bound per half-plane.
fn fn_tail_bound(y: &Complex, beta: &Complex, n_ord: u32, m_cut: usize) -> Result<Float> {
    let p = y.prec();
    let pi = Float::with_val(p, Constant::Pi);
    let theta = beta.arg();
    // How far the strip points can lean left of the imaginary axis.
    let lean = Float::with_val(p, (-y.re.clone()).max(&Float::new(p)));
    let spread = Float::with_val(
        p,
        (&lean / (Float::with_val(p, (2 * m_cut + 1) as u32) * &pi)).atan_ref(),
    );
    let half_pi = Float::with_val(p, &pi / 2u32);
    let theta_abs = theta.clone().abs();
    let worst = Float::with_val(p, &half_pi + &spread) + &theta_abs;
    if worst >= pi {
        return Err(Error::Convergence(
            "f_N tail bound diverges for arg beta this close to pi/2".into(),
        ));
    }
    let sec_pow = |ang: &Float| -> Float {
        let c = Float::with_val(p, ang / 2u32).cos();
        Float::with_val(p, c.pow(2 * n_ord + 2)).recip()
    };
    // Opposite-sign side rotates away from the axis, same-sign side toward it.
    let near = Float::with_val(p, &half_pi + &spread) - &theta_abs;
    let near = Float::with_val(p, near.abs_ref());
    let sec_worst = sec_pow(&worst);
    let sec_near = sec_pow(&near);

    let b = crate::special::bernoulli_float(2 * n_ord as usize + 2, p)?.abs();
    let lead = b / Float::with_val(p, (2 * n_ord + 1) * (2 * n_ord + 2));
    let scale = Float::with_val(p, beta.abs() / &pi).pow(2 * n_ord + 1);
    // sum_{n>M} (2n-1)^{-(2N+1)} <= (2M-1)^{-2N} / (4N)
    let tail_sum = Float::with_val(p, (2 * m_cut - 1) as u32)
        .pow(2 * n_ord)
        .recip()
        / Float::with_val(p, 4 * n_ord);
    Ok(lead * scale * tail_sum * (sec_worst + sec_near))
}

/// Right-hand side of the gamma-product identity at Stirling order N >= 1,
/// truncating the n-sum at |n| <= M. Exact as M -> infinity; tail certified.
pub fn identity_rhs(y: &Complex, beta: &Complex, n_ord: u32, m_cut: usize) -> Result<QPochEval> {
    if n_ord < 1 {
        return Err(Error::Domain("identity_rhs needs N >= 1".into()));
    }
    if m_cut < 1 {
        return Err(Error::Domain("identity_rhs needs M >= 1".into()));
    }
    let ctx = BranchContext::new(beta.clone())?;
    let p = y.prec().max(beta.prec());
    let (y_red, _) = reduce_strip(y)?;
    region_check(&y_red, &ctx)?;

    let mut acc = bernoulli_polylog_head(&y_red, &ctx, 2 * n_ord as usize)?;

    let two_pi_i = Complex::new(Float::new(p), Float::with_val(p, Constant::Pi) * 2u32);
    let x0 = y_red.div(beta)?;
    acc = acc.sub(&fn_unchecked(&x0, n_ord)?);
    for n in 1..=m_cut {
        let shift = two_pi_i.mul_real(&Float::with_val(p, n as f64));
        let xp = y_red.add(&shift).div(beta)?;
        let xm = y_red.sub(&shift).div(beta)?;
        let pair = fn_unchecked(&xp, n_ord)?.add(&fn_unchecked(&xm, n_ord)?);
        acc = acc.sub(&pair);
    }

    let tail = fn_tail_bound(&y_red, beta, n_ord, m_cut)?;
    Ok(QPochEval {
        log_value: check_finite(acc, "identity_rhs")?,
        tail_bound: tail,
        terms_used: 2 * m_cut + 1,
    })
}

/// The principal-value (N = 0) form: (1/2) log(1-e^{-y}) + beta/24
/// - Li_2(e^{-y})/beta - PV sum of f_0. Symmetric truncation is mandatory;
/// convergence is O(1/M).
pub fn identity_rhs_pv(y: &Complex, beta: &Complex, m_cut: usize) -> Result<QPochEval> {
    if m_cut < 1 {
        return Err(Error::Domain("identity_rhs_pv needs M >= 1".into()));
    }
    let ctx = BranchContext::new(beta.clone())?;
    let p = y.prec().max(beta.prec());
    let (y_red, _) = reduce_strip(y)?;
    region_check(&y_red, &ctx)?;

    let li2 = li12_paper_branch(2, &y_red, &ctx)?.value;
    let li1 = li12_paper_branch(1, &y_red, &ctx)?.value;
    let mut acc = li2.div(beta)?.neg();
    acc = acc.sub(&li1.mul_real(&Float::with_val(p, 0.5f32)));
    acc = acc.add(&beta.div_real(&Float::with_val(p, 24u32))?);

    let two_pi_i = Complex::new(Float::new(p), Float::with_val(p, Constant::Pi) * 2u32);
    acc = acc.sub(&fn_unchecked(&y_red.div(beta)?, 0)?);
    for n in 1..=m_cut {
        let shift = two_pi_i.mul_real(&Float::with_val(p, n as f64));
        let xp = y_red.add(&shift).div(beta)?;
        let xm = y_red.sub(&shift).div(beta)?;
        let pair = fn_unchecked(&xp, 0)?.add(&fn_unchecked(&xm, 0)?);
        acc = acc.sub(&pair);
    }

    // Tail: the 1/(12 X) parts pair to O(n^{-2}); the rest is the N = 1 tail.
    let pi = Float::with_val(p, Constant::Pi);
    let pv_part = Float::with_val(p, beta.abs() * y_red.abs())
        / (Float::with_val(p, pi.square_ref())
            * Float::with_val(p, 12 * (2 * m_cut - 1) as u32));
    let tail = pv_part + fn_tail_bound(&y_red, beta, 1, m_cut)?;

    Ok(QPochEval {
        log_value: check_finite(acc, "identity_rhs_pv")?,
        tail_bound: tail,
        terms_used: 2 * m_cut + 1,
    })
}

/// Quotient consequence of the identity: the absolutely convergent product
/// prod_n e^{-1} (1 + beta/(y + 2 pi i n))^{(y+2 pi i n)/beta + 1/2} against
/// its closed form in Li_2 and square roots.
pub fn consequence_check(y: &Complex, beta: &Complex, m_cut: usize) -> Result<IdentityReport> {
    let ctx = BranchContext::new(beta.clone())?;
    let p = y.prec().max(beta.prec());
    let (y_red, _) = reduce_strip(y)?;
    region_check(&y_red, &ctx)?;
    let y_next = y_red.add(beta);
    region_check(&y_next, &ctx)?;

    let half = Float::with_val(p, 0.5f32);
    let one = Complex::one(p);
    let two_pi_i = Complex::new(Float::new(p), Float::with_val(p, Constant::Pi) * 2u32);
    let mut log_lhs = Complex::zero(p);
    let mut add_term = |n: i64| -> Result<()> {
        let base = y_red.add(&two_pi_i.mul_real(&Float::with_val(p, n as f64)));
        let x = base.div(beta)?;
        let factor = one.add(&beta.div(&base)?);
        let expo = x.add(&Complex::from_real(half.clone()));
        log_lhs = log_lhs.add(&expo.mul(&factor.ln()?)).sub(&one);
        Ok(())
    };
    add_term(0)?;
    for n in 1..=m_cut as i64 {
        add_term(n)?;
        add_term(-n)?;
    }
    let lhs = log_lhs.exp()?;

    let li2_y = li12_paper_branch(2, &y_red, &ctx)?.value;
    let li2_yb = li12_paper_branch(2, &y_next, &ctx)?.value;
    let num = li2_yb.sub(&li2_y).div(beta)?.exp()?;
    let s1 = one.sub(&y_red.neg().exp()?).sqrt()?;
    let s2 = one.sub(&y_next.neg().exp()?).sqrt()?;
    let rhs = num.div(&s1.mul(&s2))?;

    // |(x+1/2) log(1+1/x) - 1| <= 1/(4|x|^2) for |x| >= 2, so the omitted
    // factors' logs sum below |beta|^2/(4 pi^2 (2M-1)).
    let pi = Float::with_val(p, Constant::Pi);
    let tail_log = Float::with_val(p, beta.abs().square_ref())
        / (Float::with_val(p, pi.square_ref()) * Float::with_val(p, 4 * (2 * m_cut - 1) as u32));
    let scale = lhs.abs().max(&rhs.abs());
    let certified = Float::with_val(p, &tail_log * &scale) * 2u32;

    Ok(IdentityReport::new(lhs, rhs, certified))
}

/// Dedekind eta modular transformation:
/// (e^{-beta}; e^{-beta})_inf = sqrt(2 pi/beta) e^{beta/24 - pi^2/(6 beta)}
/// (e^{-4 pi^2/beta}; e^{-4 pi^2/beta})_inf.
pub fn dedekind_check(beta: &Complex) -> Result<IdentityReport> {
    let ctx = BranchContext::new(beta.clone())?;
    let p = beta.prec();
    let tol = pow2(p, -(p as i32) + 12);

    let lhs = oracle_log_qpoch(beta, beta, &tol)?.log_value.exp()?;

    let pi = Float::with_val(p, Constant::Pi);
    let two_pi = Complex::from_real(Float::with_val(p, &pi * 2u32));
    let pref = two_pi.div(beta)?.sqrt()?;
    let pi_sq = Complex::from_real(Float::with_val(p, pi.square_ref()));
    let expo = beta
        .div_real(&Float::with_val(p, 24u32))?
        .sub(&pi_sq.div(&beta.mul_real(&Float::with_val(p, 6u32)))?);
    let dual = pi_sq
        .mul_real(&Float::with_val(p, 4u32))
        .div(beta)?
        .neg()
        .exp()?;
    let qp = qpoch_product(&dual, &dual, &tol)?;
    let rhs = pref.mul(&expo.exp()?).mul(&qp);

    let _ = &ctx;
    let scale = lhs.abs().max(&rhs.abs()).max(&Float::with_val(p, 1u32));
    let certified = Float::with_val(p, &tol * &scale) * 8u32;
    Ok(IdentityReport::new(lhs, rhs, certified))
}

/// Jacobi theta modular transformation:
/// (e^{-(x+1)beta}; e^{-beta}) (e^{x beta}; e^{-beta})
/// = e^{-pi^2/(3 beta) - pi i (x + 1/2) + (x^2/2 + x/2 + 1/12) beta}
///   (e^{2 pi i x}; e^{-4 pi^2/beta}) (e^{-2 pi i x - 4 pi^2/beta}; e^{-4 pi^2/beta}).
pub fn theta_modular_check(x: &Complex, beta: &Complex) -> Result<IdentityReport> {
    let _ctx = BranchContext::new(beta.clone())?;
    let p = x.prec().max(beta.prec());
    let tol = pow2(p, -(p as i32) + 12);

    // x in Z makes e^{2 pi i x} = 1: both sides vanish through a zero factor.
    let round_x = Float::with_val(p, x.re.round_ref());
    let frac = Float::with_val(p, &x.re - &round_x).abs();
    if x.im.is_zero() && frac <= pow2(p, -(p as i32) + 8) {
        return Err(Error::Domain(
            "theta check undefined at integer x (zero factor)".into(),
        ));
    }

    let q1 = beta.neg().exp()?;
    let z_a = x
        .add(&Complex::one(p))
        .mul(beta)
        .neg()
        .exp()?;
    let z_b = x.mul(beta).exp()?;
    let lhs = qpoch_product(&z_a, &q1, &tol)?.mul(&qpoch_product(&z_b, &q1, &tol)?);

    let pi = Float::with_val(p, Constant::Pi);
    let pi_sq = Complex::from_real(Float::with_val(p, pi.square_ref()));
    let half = Float::with_val(p, 0.5f32);
    // exponent: -pi^2/(3 beta) - pi i (x + 1/2) + (x^2/2 + x/2 + 1/12) beta
    let mut expo = pi_sq
        .div(&beta.mul_real(&Float::with_val(p, 3u32)))?
        .neg();
    let i_pi = Complex::new(Float::new(p), pi.clone());
    expo = expo.sub(&i_pi.mul(&x.add(&Complex::from_real(half.clone()))));
    let poly = x
        .mul(x)
        .mul_real(&half)
        .add(&x.mul_real(&half))
        .add(&Complex::from_real(Float::with_val(p, 12u32).recip()));
    expo = expo.add(&poly.mul(beta));

    let q2 = pi_sq
        .mul_real(&Float::with_val(p, 4u32))
        .div(beta)?
        .neg()
        .exp()?;
    let two_pi_i_x = Complex::new(Float::new(p), Float::with_val(p, &pi * 2u32)).mul(x);
    let z_c = two_pi_i_x.exp()?;
    let z_d = two_pi_i_x.neg().exp()?.mul(&q2);
    let rhs = expo
        .exp()?
        .mul(&qpoch_product(&z_c, &q2, &tol)?)
        .mul(&qpoch_product(&z_d, &q2, &tol)?);

    let scale = lhs.abs().max(&rhs.abs()).max(&Float::with_val(p, 1u32));
    let certified = Float::with_val(p, &tol * &scale) * 16u32;
    Ok(IdentityReport::new(lhs, rhs, certified))
}

/// Product version of Artin's identity:
/// prod_{n=0}^{M} e^{-1}(1 + 1/(x+n))^{x+n+1/2} (tail-corrected) against
/// Gamma(x) e^x x^{1/2-x} / sqrt(2 pi).
pub fn artin_product_check(x: &Complex, m_cut: usize) -> Result<IdentityReport> {
    let p = x.prec();
    if x.im.is_zero() && x.re <= 0 {
        return Err(Error::Domain("artin product needs x off R_{<=0}".into()));
    }
    // log lhs = 1/(12x) + sum_{n=0}^{M} phi(x+n), the folded Artin series;
    // the partial products then converge at the cubic rate.
    let f_part = crate::loggamma::artin_f1(x, m_cut + 1)?;
    let head = x.recip()?.div_real(&Float::with_val(p, 12u32))?;
    let lhs = f_part.add(&head).exp()?;

    let lg = crate::loggamma::log_gamma(x)?;
    let half = Float::with_val(p, 0.5f32);
    let rhs_log = lg
        .add(x)
        .add(
            &Complex::from_real(half.clone())
                .sub(x)
                .mul(&x.ln()?),
        )
        .sub(&Complex::from_real(crate::arith::log_2pi(p) / 2u32));
    let rhs = rhs_log.exp()?;

    // |phi(x+n)| <= 1/(30 |x+n|^4) in the right half-plane; integral tail.
    let rex = Float::with_val(p, (x.re.clone()).max(&Float::new(p)));
    let base = Float::with_val(p, &rex + Float::with_val(p, m_cut as f64));
    let tail_log = (Float::with_val(p, base.pow(3u32)) * 90u32).recip();
    let scale = lhs.abs().max(&rhs.abs());
    let certified = Float::with_val(p, &tail_log * &scale) * 2u32;

    Ok(IdentityReport::new(lhs, rhs, certified))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::pi_raw;

    #[test]
    fn strip_reduction() {
        let p = 128;
        let y = Complex::with_val(p, 1.0, 7.0);
        let (r, w) = reduce_strip(&y).unwrap();
        assert_eq!(w, 1);
        let want = 7.0 - 2.0 * std::f64::consts::PI;
        assert!((r.im.to_f64() - want).abs() < 1e-12);
        assert_eq!(r.re.to_f64(), 1.0);

        let y = Complex::one(p);
        let (r, w) = reduce_strip(&y).unwrap();
        assert_eq!(w, 0);
        assert!(r.im.is_zero());

        // Boundary Im y = pi stays put.
        let y = Complex::new(Float::with_val(p, 1u32), pi_raw(p));
        let (r, w) = reduce_strip(&y).unwrap();
        assert_eq!(w, 0);
        assert!((r.im.to_f64() - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn oracle_vanishes_far_right() {
        let p = 160;
        let y = Complex::with_val(p, 50.0, 0.0);
        let beta = Complex::one(p);
        let tol = Float::with_val(p, 1e-30);
        let ev = oracle_log_qpoch(&y, &beta, &tol).unwrap();
        // sum_k e^{-50-k} = e^{-50}/(1 - e^{-1}) ~ 3.05e-22
        assert!(ev.log_value.abs() < Float::with_val(p, 4e-22));
        assert!(ev.log_value.abs() > Float::with_val(p, 1e-22));
    }

    #[test]
    fn oracle_matches_direct_product() {
        let p = 224;
        let y = Complex::one(p);
        let beta = Complex::one(p);
        let tol = Float::with_val(p, 1e-45);
        let ev = oracle_log_qpoch(&y, &beta, &tol).unwrap();
        let got = ev.log_value.exp().unwrap();

        let mut direct = Complex::one(p);
        for j in 0..100u32 {
            let f = Complex::one(p).sub(
                &Complex::with_val(p, -(1.0 + j as f64), 0.0).exp().unwrap(),
            );
            direct = direct.mul(&f);
        }
        assert!(got.sub(&direct).abs() < Float::with_val(p, 1e-40));
    }

    #[test]
    fn oracle_periodicity() {
        let p = 192;
        let beta = Complex::with_val(p, 0.5, 0.0);
        let tol = Float::with_val(p, 1e-40);
        let y = Complex::with_val(p, 0.7, 0.3);
        let two_pi_i = Complex::new(Float::new(p), pi_raw(p) * 2u32);
        let a = oracle_log_qpoch(&y, &beta, &tol).unwrap();
        let b = oracle_log_qpoch(&y.add(&two_pi_i), &beta, &tol).unwrap();
        assert!(a.log_value.sub(&b.log_value).abs() < pow2(p, -(p as i32) + 16));
    }

    #[test]
    fn oracle_rejects_cut_and_region() {
        let p = 128;
        let beta = Complex::with_val(p, 0.25, 0.0);
        let tol = Float::with_val(p, 1e-20);
        // On the cut (negative real with real beta).
        let y = Complex::with_val(p, -1.0, 0.0);
        assert!(matches!(
            oracle_log_qpoch(&y, &beta, &tol),
            Err(Error::Domain(_))
        ));
        // Below the region floor.
        let y = Complex::with_val(p, -6.0, 0.5);
        assert!(matches!(
            oracle_log_qpoch(&y, &beta, &tol),
            Err(Error::Domain(_))
        ));
        // Clear tolerance failure.
        let y = Complex::with_val(p, 1.0, 0.0);
        let tiny = pow2(p, -(p as i32) - 40);
        assert!(matches!(
            oracle_log_qpoch(&y, &beta, &tiny),
            Err(Error::Convergence(_))
        ));
    }

    #[test]
    fn oracle_tracked_zone_continuity() {
        // A left-half-plane y off the cut: value should continue smoothly
        // compared with a neighbouring point.
        let p = 224;
        let beta = Complex::with_val(p, 0.5, 0.0);
        let tol = Float::with_val(p, 1e-40);
        let y1 = Complex::with_val(p, -2.0, 1.0);
        let y2 = Complex::with_val(p, -2.0, 1.001);
        let a = oracle_log_qpoch(&y1, &beta, &tol).unwrap();
        let b = oracle_log_qpoch(&y2, &beta, &tol).unwrap();
        assert!(a.log_value.sub(&b.log_value).abs() < Float::with_val(p, 0.2));
        // And the exponential matches the direct (entire) product.
        let mut direct = Complex::one(p);
        let mut z = y1.clone();
        for _ in 0..400 {
            direct = direct.mul(&Complex::one(p).sub(&z.neg().exp().unwrap()));
            z = z.add(&beta);
        }
        assert!(a.log_value.exp().unwrap().sub(&direct).abs() < Float::with_val(p, 1e-30));
    }

    #[test]
    fn qpoch_product_basics() {
        let p = 192;
        let tol = Float::with_val(p, 1e-40);
        // z = 0 gives 1.
        let one = qpoch_product(&Complex::zero(p), &Complex::with_val(p, 0.5, 0.0), &tol).unwrap();
        assert!(one.sub(&Complex::one(p)).abs().is_zero());
        // q = 0 gives 1 - z.
        let v = qpoch_product(
            &Complex::with_val(p, 0.3, 0.0),
            &Complex::zero(p),
            &tol,
        )
        .unwrap();
        assert!((v.re.to_f64() - 0.7).abs() < 1e-15);
        // (1/2; 1/2)_inf, digits frozen from a 200-factor brute product.
        let half = Complex::with_val(p, 0.5, 0.0);
        let v = qpoch_product(&half, &half, &tol).unwrap();
        let want = Float::with_val(p, Float::parse("0.2887880950866024212788997219292307800889119").unwrap());
        assert!((v.re - want).abs() < Float::with_val(p, 1e-35));
        // |q| >= 1 rejected.
        assert!(matches!(
            qpoch_product(&half, &Complex::one(p), &tol),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn identity_rhs_matches_oracle_basic() {
        let p = 288;
        let y = Complex::one(p);
        let beta = Complex::with_val(p, 0.5, 0.0);
        let tol = Float::with_val(p, 1e-70);
        let oracle = oracle_log_qpoch(&y, &beta, &tol).unwrap();
        let rhs = identity_rhs(&y, &beta, 3, 50).unwrap();
        let gap = rhs.log_value.sub(&oracle.log_value).abs();
        let allow = Float::with_val(p, &rhs.tail_bound + &Float::with_val(p, 1e-60));
        assert!(gap <= allow, "gap = {gap}, tail = {}", rhs.tail_bound);

        // Higher N shrinks the residual.
        let rhs4 = identity_rhs(&y, &beta, 4, 200).unwrap();
        let gap4 = rhs4.log_value.sub(&oracle.log_value).abs();
        let rhs1 = identity_rhs(&y, &beta, 1, 200).unwrap();
        let gap1 = rhs1.log_value.sub(&oracle.log_value).abs();
        assert!(gap4 < gap1);
    }

    #[test]
    fn identity_rhs_real_inputs_stay_real() {
        let p = 256;
        let y = Complex::with_val(p, 0.8, 0.0);
        let beta = Complex::with_val(p, 0.25, 0.0);
        let rhs = identity_rhs(&y, &beta, 2, 60).unwrap();
        assert!(rhs.log_value.im.clone().abs() < pow2(p, -(p as i32) + 16));
    }

    #[test]
    fn pv_form_converges_like_one_over_m() {
        let p = 256;
        let y = Complex::one(p);
        let beta = Complex::with_val(p, 0.5, 0.0);
        let tol = Float::with_val(p, 1e-60);
        let oracle = oracle_log_qpoch(&y, &beta, &tol).unwrap();
        let a = identity_rhs_pv(&y, &beta, 500).unwrap();
        let b = identity_rhs_pv(&y, &beta, 1000).unwrap();
        let ga = a.log_value.sub(&oracle.log_value).abs();
        let gb = b.log_value.sub(&oracle.log_value).abs();
        assert!(ga < Float::with_val(p, 1e-3));
        let ratio = Float::with_val(p, &gb / &ga).to_f64();
        assert!(ratio < 0.8, "ratio = {ratio}");
        assert!(ratio > 0.05, "ratio = {ratio}");
        // Real in, real out.
        assert!(a.log_value.im.clone().abs() < pow2(p, -(p as i32) + 16));
    }

    #[test]
    fn dedekind_self_dual_point() {
        let p = 288;
        let beta = Complex::from_real(pi_raw(p) * 2u32);
        let rep = dedekind_check(&beta).unwrap();
        assert!(rep.residual < Float::with_val(p, 1e-74), "residual = {}", rep.residual);
    }

    #[test]
    fn dedekind_generic_points() {
        let p = 288;
        let rep = dedekind_check(&Complex::one(p)).unwrap();
        assert!(rep.residual < Float::with_val(p, 1e-70));
        // beta = e^{i pi/6}
        let ang = pi_raw(p) / 6u32;
        let (s, c) = ang.sin_cos(Float::new(p));
        let rep = dedekind_check(&Complex::new(c, s)).unwrap();
        assert!(rep.residual < Float::with_val(p, 1e-70));
    }

    #[test]
    fn theta_checks() {
        let p = 288;
        let rep = theta_modular_check(
            &Complex::with_val(p, 0.25, 0.0),
            &Complex::one(p),
        )
        .unwrap();
        assert!(rep.residual < Float::with_val(p, 1e-70), "residual = {}", rep.residual);

        let rep = theta_modular_check(
            &Complex::with_val(p, 1.0 / 3.0, 0.0),
            &Complex::with_val(p, 0.5, 0.0),
        )
        .unwrap();
        assert!(rep.residual < Float::with_val(p, 1e-70));

        assert!(matches!(
            theta_modular_check(&Complex::zero(p), &Complex::one(p)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn consequence_and_artin_products() {
        let p = 256;
        let rep = consequence_check(&Complex::one(p), &Complex::one(p), 10_000).unwrap();
        assert!(rep.residual < Float::with_val(p, 1e-6), "residual = {}", rep.residual);
        // Doubling M decreases the residual.
        let rep2 = consequence_check(
            &Complex::with_val(p, 2.0, 0.0),
            &Complex::with_val(p, 0.5, 0.0),
            2_000,
        )
        .unwrap();
        let rep1 = consequence_check(
            &Complex::with_val(p, 2.0, 0.0),
            &Complex::with_val(p, 0.5, 0.0),
            1_000,
        )
        .unwrap();
        assert!(rep2.residual < rep1.residual);
        // Real inputs: both sides real positive.
        assert!(rep1.lhs.im.clone().abs() < pow2(p, -(p as i32) + 24));
        assert!(rep1.lhs.re > 0 && rep1.rhs.re > 0);

        let rep = artin_product_check(&Complex::one(p), 100_000).unwrap();
        assert!(rep.residual < Float::with_val(p, 1e-8), "residual = {}", rep.residual);
        let rep = artin_product_check(&Complex::with_val(p, 0.5, 0.0), 100_000).unwrap();
        assert!(rep.residual < Float::with_val(p, 1e-8));
    }
}
