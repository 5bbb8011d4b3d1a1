//! The uniform asymptotic expansion of log (e^{-y}; e^{-beta})_inf as
//! beta -> 0 and the four scaling-regime series y = x beta^c, with exact
//! rational coefficients for c > 0 and numeric evaluation throughout.
//!
//! Exponents of beta live on the lattice generated by (1-c)(k-1) + c n, so
//! all bookkeeping is done in exact rational arithmetic; merging terms keys
//! on (beta exponent, atom signature).

use crate::arith::{
    check_finite, const_euler_gamma, log_2pi, pow2, BranchContext, Complex, Precision,
};
use crate::error::{Error, Result};
use crate::identity::{oracle_log_qpoch, reduce_strip, QPochEval};
use crate::identity::IdentityReport;
use crate::loggamma::log_gamma;
use crate::special::{
    bernoulli_number, li12_paper_branch, li_neg_large, li_neg_regularized, li_nonpos, zeta_int,
};
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complete, Float, Integer, Rational};
use serde::Serialize;

/// Which asymptotic series an [`Expansion`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeKind {
    Uniform,
    C0,
    CSmall,
    C1,
    CLarge,
}

impl RegimeKind {
    pub fn for_c(c: &Rational) -> Result<RegimeKind> {
        let zero = Rational::new();
        let one = Rational::from(1);
        if *c < zero {
            return Err(Error::Domain("scaling exponent c must be >= 0".into()));
        }
        Ok(if *c == zero {
            RegimeKind::C0
        } else if *c < one {
            RegimeKind::CSmall
        } else if *c == one {
            RegimeKind::C1
        } else {
            RegimeKind::CLarge
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            RegimeKind::Uniform => "uniform",
            RegimeKind::C0 => "c0",
            RegimeKind::CSmall => "c_small",
            RegimeKind::C1 => "c1",
            RegimeKind::CLarge => "c_large",
        }
    }
}

/// Multiplicative atoms of one expansion term, everything except the shared
/// power of beta. Even zeta values are rewritten into pi powers, so only odd
/// zeta arguments appear.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct AtomSignature {
    pub x_pow: i64,
    pub pi_squared: u32,
    /// 0 means absent; otherwise an odd integer >= 3.
    pub zeta_odd: u32,
    pub euler_gamma: bool,
    pub log_beta: bool,
    pub log_x: bool,
    pub log_2pi: bool,
    pub log_gamma_x: bool,
}

impl AtomSignature {
    fn of_x(x_pow: i64) -> Self {
        AtomSignature {
            x_pow,
            ..Default::default()
        }
    }

    /// Display precedence: plain powers first, then transcendental constants,
    /// then logarithms, matching how the printed expansions read.
    fn display_key(&self) -> (i64, u32, u32, u8, u8, u8, u8, u8) {
        let inv = |b: bool| if b { 0u8 } else { 1u8 };
        (
            self.x_pow,
            self.pi_squared,
            self.zeta_odd,
            inv(self.euler_gamma),
            inv(self.log_beta),
            inv(self.log_x),
            inv(self.log_2pi),
            inv(self.log_gamma_x),
        )
    }
}

/// One term of a regime expansion: an exact rational coefficient times a
/// monomial in the symbol set, at a fixed rational power of beta.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicTerm {
    pub coeff: Rational,
    pub beta_exp: Rational,
    pub sig: AtomSignature,
}

/// An ordered, merged list of symbolic terms up to a cutoff exponent.
#[derive(Debug, Clone)]
pub struct Expansion {
    pub regime: RegimeKind,
    pub c: Rational,
    pub cutoff_exp: Rational,
    pub terms: Vec<SymbolicTerm>,
    pub meta: String,
}

/// Accumulates terms with exact merging of identical signatures.
struct TermBag {
    map: std::collections::BTreeMap<(Rational, AtomSignature), Rational>,
}

impl TermBag {
    fn new() -> Self {
        TermBag {
            map: std::collections::BTreeMap::new(),
        }
    }

    fn push(&mut self, coeff: Rational, beta_exp: Rational, sig: AtomSignature) {
        if coeff == 0 {
            return;
        }
        let slot = self.map.entry((beta_exp, sig)).or_insert_with(Rational::new);
        *slot += coeff;
    }

    fn into_terms(self) -> Vec<SymbolicTerm> {
        let mut v: Vec<SymbolicTerm> = self
            .map
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|((beta_exp, sig), coeff)| SymbolicTerm {
                coeff,
                beta_exp,
                sig,
            })
            .collect();
        v.sort_by(|a, b| {
            a.beta_exp
                .cmp(&b.beta_exp)
                .then_with(|| a.sig.display_key().cmp(&b.sig.display_key()))
        });
        v
    }
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// Rational r with zeta(2j) = r * pi^{2j}.
fn zeta_even_rational(j: u32) -> Result<Rational> {
    let b = bernoulli_number(2 * j as usize)?;
    let pow4: Integer = Integer::from(2).pow(2 * j);
    let fact = Integer::factorial(2 * j).complete();
    let mut r = b * Rational::from((pow4, fact * 2u32));
    if j % 2 == 0 {
        r = -r;
    }
    Ok(r)
}

/// Exact coefficient table for the scaling regime y = x beta^c, collecting
/// every term with beta-exponent <= cutoff_exp.
///
/// For c = 0 the coefficients are transcendental in x (they involve
/// Li_{2-k}(e^{-x})), so no symbolic table is emitted; evaluation goes
/// through the dedicated numeric path in [`regime_eval`].
pub fn regime_coefficients(c: &Rational, cutoff_exp: &Rational) -> Result<Expansion> {
    let kind = RegimeKind::for_c(c)?;
    if *cutoff_exp < rat(-1, 1) {
        return Err(Error::Domain("cutoff exponent must be >= -1".into()));
    }
    let mut bag = TermBag::new();
    let meta;

    match kind {
        RegimeKind::C0 => {
            meta = "coefficients involve Li_{2-k}(e^{-x}); numeric evaluation only".to_string();
        }
        RegimeKind::CSmall => {
            meta = format!("series for y = x beta^{c}, 0 < c < 1");
            csmall_terms(&mut bag, c, cutoff_exp)?;
        }
        RegimeKind::C1 => {
            meta = "series for y = x beta".to_string();
            c1_terms(&mut bag, cutoff_exp)?;
        }
        RegimeKind::CLarge => {
            meta = format!("series for y = x beta^{c}, c > 1");
            clarge_terms(&mut bag, c, cutoff_exp)?;
        }
        RegimeKind::Uniform => unreachable!(),
    }

    Ok(Expansion {
        regime: kind,
        c: c.clone(),
        cutoff_exp: cutoff_exp.clone(),
        terms: bag.into_terms(),
        meta,
    })
}

fn push_if(bag: &mut TermBag, cutoff: &Rational, coeff: Rational, e: Rational, sig: AtomSignature) {
    if e <= *cutoff {
        bag.push(coeff, e, sig);
    }
}

fn csmall_terms(bag: &mut TermBag, c: &Rational, cutoff: &Rational) -> Result<()> {
    let one = Rational::from(1);
    let cm1 = (c - &one).complete();
    // -pi^2/6 beta^{-1}
    push_if(
        bag,
        cutoff,
        rat(-1, 6),
        rat(-1, 1),
        AtomSignature {
            pi_squared: 1,
            ..Default::default()
        },
    );
    // x (1 - log x - c log beta) beta^{c-1}
    push_if(bag, cutoff, one.clone(), cm1.clone(), AtomSignature::of_x(1));
    push_if(
        bag,
        cutoff,
        -one.clone(),
        cm1.clone(),
        AtomSignature {
            x_pow: 1,
            log_x: true,
            ..Default::default()
        },
    );
    push_if(
        bag,
        cutoff,
        -c.clone(),
        cm1,
        AtomSignature {
            x_pow: 1,
            log_beta: true,
            ..Default::default()
        },
    );
    // (c/2) log beta + (1/2) log x at beta^0
    push_if(
        bag,
        cutoff,
        c.clone() / 2u32,
        Rational::new(),
        AtomSignature {
            log_beta: true,
            ..Default::default()
        },
    );
    push_if(
        bag,
        cutoff,
        rat(1, 2),
        Rational::new(),
        AtomSignature {
            log_x: true,
            ..Default::default()
        },
    );
    // single sum: - B_{2k} / (2k (2k-1) x^{2k-1}) beta^{(1-c)(2k-1)}
    let omc = (&one - c).complete();
    let mut k = 1u32;
    loop {
        let e = omc.clone() * Rational::from(2 * k - 1);
        if e > *cutoff {
            break;
        }
        let b = bernoulli_number(2 * k as usize)?;
        let coeff = -b / Rational::from(2 * k * (2 * k - 1));
        bag.push(coeff, e, AtomSignature::of_x(-(2 * k as i64 - 1)));
        k += 1;
    }
    // double sum: - B_k B_n x^{n+1-k} / (k! n (n+1-k)!) beta^{(1-c)(k-1)+cn}
    double_sum_terms(bag, cutoff, |kk, nn| {
        Rational::from(&omc * Rational::from(kk as i64 - 1)) + Rational::from(c * Rational::from(nn))
    })?;
    Ok(())
}

fn c1_terms(bag: &mut TermBag, cutoff: &Rational) -> Result<()> {
    push_if(
        bag,
        cutoff,
        rat(-1, 6),
        rat(-1, 1),
        AtomSignature {
            pi_squared: 1,
            ..Default::default()
        },
    );
    // (1/2 - x) log beta
    push_if(
        bag,
        cutoff,
        rat(1, 2),
        Rational::new(),
        AtomSignature {
            log_beta: true,
            ..Default::default()
        },
    );
    push_if(
        bag,
        cutoff,
        rat(-1, 1),
        Rational::new(),
        AtomSignature {
            x_pow: 1,
            log_beta: true,
            ..Default::default()
        },
    );
    // - log Gamma(x) + (1/2) log 2 pi
    push_if(
        bag,
        cutoff,
        rat(-1, 1),
        Rational::new(),
        AtomSignature {
            log_gamma_x: true,
            ..Default::default()
        },
    );
    push_if(
        bag,
        cutoff,
        rat(1, 2),
        Rational::new(),
        AtomSignature {
            log_2pi: true,
            ..Default::default()
        },
    );
    // - sum_n B_n B_{n+1}(x) beta^n / (n (n+1)!), B_{n+1}(x) expanded.
    let mut n = 1i64;
    while Rational::from(n) <= *cutoff {
        let bn = bernoulli_number(n as usize)?;
        if bn != 0 {
            let denom = Rational::from(n) * Rational::from(Integer::factorial(n as u32 + 1).complete());
            for j in 0..=(n + 1) {
                let bj = bernoulli_number(j as usize)?;
                if bj == 0 {
                    continue;
                }
                let binom = Integer::from(n as u32 + 1).binomial(j as u32);
                let coeff = -(bn.clone() * bj * Rational::from(binom)) / denom.clone();
                bag.push(
                    coeff,
                    Rational::from(n),
                    AtomSignature::of_x(n + 1 - j),
                );
            }
        }
        n += 1;
    }
    Ok(())
}

fn clarge_terms(bag: &mut TermBag, c: &Rational, cutoff: &Rational) -> Result<()> {
    let one = Rational::from(1);
    let cm1 = (c - &one).complete();
    push_if(
        bag,
        cutoff,
        rat(-1, 6),
        rat(-1, 1),
        AtomSignature {
            pi_squared: 1,
            ..Default::default()
        },
    );
    // (c - 1/2) log beta + log x + (1/2) log 2 pi at beta^0
    push_if(
        bag,
        cutoff,
        Rational::from(c - rat(1, 2)),
        Rational::new(),
        AtomSignature {
            log_beta: true,
            ..Default::default()
        },
    );
    push_if(
        bag,
        cutoff,
        one.clone(),
        Rational::new(),
        AtomSignature {
            log_x: true,
            ..Default::default()
        },
    );
    push_if(
        bag,
        cutoff,
        rat(1, 2),
        Rational::new(),
        AtomSignature {
            log_2pi: true,
            ..Default::default()
        },
    );
    // x (gamma - log beta) beta^{c-1}
    push_if(
        bag,
        cutoff,
        one.clone(),
        cm1.clone(),
        AtomSignature {
            x_pow: 1,
            euler_gamma: true,
            ..Default::default()
        },
    );
    push_if(
        bag,
        cutoff,
        -one,
        cm1.clone(),
        AtomSignature {
            x_pow: 1,
            log_beta: true,
            ..Default::default()
        },
    );
    // single sum: - zeta(k) (-x)^k / k * beta^{(c-1)k}
    let mut k = 2u32;
    loop {
        let e = cm1.clone() * Rational::from(k);
        if e > *cutoff {
            break;
        }
        if k % 2 == 0 {
            let r = zeta_even_rational(k / 2)?;
            bag.push(
                -r / Rational::from(k),
                e,
                AtomSignature {
                    x_pow: k as i64,
                    pi_squared: k / 2,
                    ..Default::default()
                },
            );
        } else {
            bag.push(
                Rational::from((1u32, k)),
                e,
                AtomSignature {
                    x_pow: k as i64,
                    zeta_odd: k,
                    ..Default::default()
                },
            );
        }
        k += 1;
    }
    // double sum: exponent k - 1 + c (n + 1 - k)
    double_sum_terms(bag, cutoff, |kk, nn| {
        Rational::from(kk as i64 - 1) + Rational::from(c * Rational::from(nn + 1 - kk))
    })?;
    Ok(())
}

/// Shared enumeration of - B_k B_n x^{n+1-k} / (k! n (n+1-k)!) over the
/// lattice, with the exponent supplied by the regime.
fn double_sum_terms<F>(bag: &mut TermBag, cutoff: &Rational, exponent: F) -> Result<()>
where
    F: Fn(i64, i64) -> Rational,
{
    let mut n = 1i64;
    loop {
        // Smallest exponent this n can produce decides termination.
        let min_e = (0..=(n + 1))
            .map(|k| exponent(k, n))
            .min()
            .expect("nonempty");
        if min_e > *cutoff {
            // Exponents grow with n in both regimes.
            if n > 4 {
                break;
            }
            n += 1;
            continue;
        }
        let bn = bernoulli_number(n as usize)?;
        if bn != 0 {
            for k in 0..=(n + 1) {
                let e = exponent(k, n);
                if e > *cutoff {
                    continue;
                }
                let bk = bernoulli_number(k as usize)?;
                if bk == 0 {
                    continue;
                }
                let denom = Rational::from(Integer::factorial(k as u32).complete())
                    * Rational::from(n)
                    * Rational::from(Integer::factorial((n + 1 - k) as u32).complete());
                bag.push(-(bk * bn.clone()) / denom, e, AtomSignature::of_x(n + 1 - k));
            }
        }
        n += 1;
        if n > 200_000 {
            return Err(Error::Convergence("double sum enumeration too deep".into()));
        }
    }
    Ok(())
}

/// Numeric value of one atom signature at (x, beta).
fn eval_signature(
    sig: &AtomSignature,
    x: &Complex,
    log_beta: &Complex,
    log_x: &Complex,
    log_gamma_val: &Option<Complex>,
    prec: u32,
) -> Result<Complex> {
    let mut v = Complex::one(prec);
    if sig.x_pow != 0 {
        v = v.mul(&x.powi(sig.x_pow)?);
    }
    if sig.pi_squared > 0 {
        let pi = Float::with_val(prec, Constant::Pi);
        v = v.mul_real(&Float::with_val(prec, pi.pow(2 * sig.pi_squared)));
    }
    if sig.zeta_odd > 0 {
        let z = zeta_int(sig.zeta_odd, Precision::new(prec.max(64))?)?;
        v = v.mul_real(&Float::with_val(prec, z));
    }
    if sig.euler_gamma {
        let g = const_euler_gamma(Precision::new(prec.saturating_sub(crate::arith::GUARD_BITS).max(64))?)?;
        v = v.mul_real(&Float::with_val(prec, g));
    }
    if sig.log_beta {
        v = v.mul(log_beta);
    }
    if sig.log_x {
        v = v.mul(log_x);
    }
    if sig.log_2pi {
        v = v.mul_real(&log_2pi(prec));
    }
    if sig.log_gamma_x {
        v = v.mul(log_gamma_val.as_ref().ok_or_else(|| {
            Error::Domain("expansion needs log Gamma(x) but x is on the cut".into())
        })?);
    }
    Ok(v)
}

/// Numeric value of a block of terms sharing no particular structure;
/// used by [`regime_eval`] and the sweep driver.
pub fn eval_term_block(
    terms: &[SymbolicTerm],
    x: &Complex,
    beta: &Complex,
    ctx_pow: &BranchContext,
) -> Result<Complex> {
    let p = x.prec().max(beta.prec());
    let log_beta = beta.ln()?;
    let log_x = crate::arith::branched_log(x, ctx_pow)?;
    let needs_lg = terms.iter().any(|t| t.sig.log_gamma_x);
    let log_gamma_val = if needs_lg { Some(log_gamma(x)?) } else { None };

    let mut acc = Complex::zero(p);
    for t in terms {
        let atom = eval_signature(&t.sig, x, &log_beta, &log_x, &log_gamma_val, p)?;
        let coeff = Float::with_val(p, &t.coeff);
        let bpow = beta_pow(&t.beta_exp, &log_beta, p)?;
        acc = acc.add(&atom.mul_real(&coeff).mul(&bpow));
    }
    Ok(acc)
}

/// beta^e for rational e, through the principal logarithm.
pub fn beta_pow(e: &Rational, log_beta: &Complex, p: u32) -> Result<Complex> {
    if *e == 0 {
        return Ok(Complex::one(p));
    }
    let ef = Float::with_val(p, e);
    log_beta.mul_real(&ef).exp()
}

/// Evaluate a symbolic expansion at (x, beta), with branches per the scaling
/// corollary: log x and log Gamma(x) are real for x > 0 and analytic for
/// x off beta^{1-c} R_{<=0}.
///
/// The returned tail bound is the heuristic first-omitted-term magnitude
/// (the optimal-truncation scale), not a certified error.
pub fn regime_eval(exp: &Expansion, x: &Complex, beta: &Complex) -> Result<QPochEval> {
    let p = x.prec().max(beta.prec());
    let ctx_beta = BranchContext::new(beta.clone())?;

    if exp.regime == RegimeKind::C0 {
        return c0_eval(x, beta, &ctx_beta, &exp.cutoff_exp);
    }

    // Branch context carrying beta^{1-c}.
    let one = Rational::from(1);
    let omc = (&one - &exp.c).complete();
    let log_beta = beta.ln()?;
    let base = beta_pow(&omc, &log_beta, p)?;
    let ctx_pow = BranchContext::new(if omc == 0 { Complex::one(p) } else { base })?;
    if ctx_pow.on_cut(x) {
        return Err(Error::Domain(
            "x on the cut beta^{1-c} R_{<=0} for this regime".into(),
        ));
    }

    let value = eval_term_block(&exp.terms, x, beta, &ctx_pow)?;

    // First omitted lattice exponent supplies the heuristic remainder scale.
    let step = Rational::from((1u32, lattice_denominator(&exp.c)));
    let next_cut = (&exp.cutoff_exp + &step).complete();
    let wider = regime_coefficients(&exp.c, &next_cut)?;
    let beyond: Vec<SymbolicTerm> = wider
        .terms
        .into_iter()
        .filter(|t| t.beta_exp > exp.cutoff_exp)
        .collect();
    let tail = if beyond.is_empty() {
        Float::new(p)
    } else {
        eval_term_block(&beyond, x, beta, &ctx_pow)?.abs()
    };

    Ok(QPochEval {
        log_value: check_finite(value, "regime_eval")?,
        tail_bound: tail,
        terms_used: exp.terms.len(),
    })
}

/// Denominator of the beta-exponent lattice for scaling parameter c.
pub fn lattice_denominator(c: &Rational) -> u32 {
    let d = c.denom().to_u32().unwrap_or(1);
    d.max(1)
}

/// Fixed-y series: sum_k B_k Li_{2-k}(e^{-x}) (-beta)^{k-1} / k!, summed for
/// exponents k - 1 <= cutoff.
fn c0_eval(
    x: &Complex,
    beta: &Complex,
    ctx: &BranchContext,
    cutoff: &Rational,
) -> Result<QPochEval> {
    let p = x.prec().max(beta.prec());
    let (x_red, _) = reduce_strip(x)?;
    if ctx.on_cut(&x_red) {
        return Err(Error::Domain("x on the cut for the fixed-y series".into()));
    }
    let k_max_r = Rational::from(cutoff + Rational::from(1));
    let k_max = k_max_r.floor().numer().to_i32().unwrap_or(0).max(0) as usize;

    let mut acc = Complex::zero(p);
    let mut used = 0usize;
    for k in 0..=k_max {
        let t = c0_term(&x_red, beta, ctx, k)?;
        acc = acc.add(&t);
        used += 1;
    }
    // Heuristic scale: next nonzero term.
    let mut tail = Float::new(p);
    for k in (k_max + 1)..=(k_max + 3) {
        let t = c0_term(&x_red, beta, ctx, k)?;
        if !t.is_zero() {
            tail = t.abs();
            break;
        }
    }
    Ok(QPochEval {
        log_value: check_finite(acc, "c0 series")?,
        tail_bound: tail,
        terms_used: used,
    })
}

/// The k-th term of the fixed-y series, B_k Li_{2-k}(e^{-x}) (-beta)^{k-1}/k!.
pub fn c0_term(x: &Complex, beta: &Complex, ctx: &BranchContext, k: usize) -> Result<Complex> {
    let p = x.prec().max(beta.prec());
    if k > 1 && k % 2 == 1 {
        return Ok(Complex::zero(p));
    }
    let li = match k {
        0 => li12_paper_branch(2, x, ctx)?.value,
        1 => li12_paper_branch(1, x, ctx)?.value,
        _ => {
            let n = k - 2;
            if n <= 48 {
                let w = x.neg().exp()?;
                li_nonpos(-(n as i64), &w)?
            } else {
                li_neg_large(n, x)?
            }
        }
    };
    let b = bernoulli_number(k)?;
    if b == 0 {
        return Ok(Complex::zero(p));
    }
    let fact = Float::with_val(p, Float::factorial(k as u32));
    let coeff = Float::with_val(p, Float::with_val(p, b) / fact);
    let bpow = beta.neg().powi(k as i64 - 1)?;
    Ok(li.mul(&bpow).mul_real(&coeff))
}

/// Head of the uniform expansion: everything before the k-sum.
pub fn uniform_head(y: &Complex, beta: &Complex) -> Result<Complex> {
    let ctx = BranchContext::new(beta.clone())?;
    let p = y.prec().max(beta.prec());
    let li2 = li12_paper_branch(2, y, &ctx)?.value;
    let li1 = li12_paper_branch(1, y, &ctx)?.value;
    let u = y.div(beta)?;
    let log_u = u.ln()?; // principal: real for y/beta > 0, analytic off the cut
    let half = Float::with_val(p, 0.5f32);

    let mut acc = li2.div(beta)?.neg();
    acc = acc.sub(&li1.mul_real(&half)); // +(1/2) log(1 - e^{-y})
    acc = acc.add(&Complex::from_real(log_2pi(p) / 2u32));
    acc = acc.sub(&u);
    acc = acc.add(&u.sub(&Complex::from_real(half.clone())).mul(&log_u));
    acc = acc.sub(&log_gamma(&u)?);
    Ok(acc)
}

/// The k-th correction term of the uniform expansion (k >= 1):
/// -B_{2k} beta^{2k-1}/(2k)! (Li_{2-2k}(e^{-y}) - (2k-2)!/y^{2k-1}),
/// with the parenthesis evaluated in regularized (cancellation-free) form.
pub fn uniform_term(y: &Complex, beta: &Complex, k: usize) -> Result<Complex> {
    let p = y.prec().max(beta.prec());
    let reg = li_neg_regularized(2 * k - 2, y)?;
    let b = bernoulli_number(2 * k)?;
    let fact = Float::with_val(p, Float::factorial(2 * k as u32));
    let coeff = Float::with_val(p, Float::with_val(p, b) / fact);
    let bpow = beta.powi(2 * k as i64 - 1)?;
    Ok(reg.mul(&bpow).mul_real(&coeff).neg())
}

/// Uniform asymptotic expansion truncated at k = N, with the heuristic
/// first-omitted-term remainder scale.
pub fn uniform_expansion(y: &Complex, beta: &Complex, n_ord: u32) -> Result<QPochEval> {
    if n_ord < 1 {
        return Err(Error::Domain("uniform expansion needs N >= 1".into()));
    }
    let ctx = BranchContext::new(beta.clone())?;
    let (y_red, _) = reduce_strip(y)?;
    // Same region as the identity evaluators.
    crate::identity::region_check_pub(&y_red, &ctx)?;

    let mut acc = uniform_head(&y_red, beta)?;
    for k in 1..=n_ord as usize {
        acc = acc.add(&uniform_term(&y_red, beta, k)?);
    }
    let tail = uniform_term(&y_red, beta, n_ord as usize + 1)?.abs();
    Ok(QPochEval {
        log_value: check_finite(acc, "uniform expansion")?,
        tail_bound: tail,
        terms_used: n_ord as usize,
    })
}

/// The exact remainder of the convergent c = 1 series:
/// log (e^{-4 pi^2/beta}; e^{-4 pi^2/beta})_inf for integer x, and
/// log (-e^{-4 pi^2/beta}; e^{-4 pi^2/beta})_inf for half-integer x.
pub fn exact_remainder_c1(x: &Rational, beta: &Complex) -> Result<Complex> {
    let p = beta.prec();
    let two_x = Rational::from(x * Rational::from(2));
    if two_x.denom().to_u32() != Some(1) {
        return Err(Error::Domain(
            "exact remainder defined for integer or half-integer x only".into(),
        ));
    }
    let is_integer = x.denom().to_u32() == Some(1);
    if (is_integer && *x < 1) || (!is_integer && *x < Rational::from((1, 2))) {
        return Err(Error::Domain(
            "exact remainder needs x >= 1 (integer) or x >= 1/2 (half-integer)".into(),
        ));
    }
    let pi = Float::with_val(p, Constant::Pi);
    let a = Complex::from_real(Float::with_val(p, pi.square_ref()) * 4u32).div(beta)?;
    // Half-integer x flips the sign of z: -e^{-a} = e^{-(a - i pi)}.
    let y = if is_integer {
        a.clone()
    } else {
        a.add(&Complex::new(Float::new(p), pi.clone()))
    };
    let tol = pow2(p, -(p as i32) + 12);
    Ok(oracle_log_qpoch(&y, &a, &tol)?.log_value)
}

/// Check the closed form of the convergent c = 1 series at integer x >= 2:
/// sum_n B_n B_{n+1}(x) beta^n / (n (n+1)!) against
/// -beta/24 - log(beta^{x-1} (x-1)! (e^{-x beta}; e^{-beta})_inf / (e^{-beta}; e^{-beta})_inf).
pub fn conv_series_check(x: u32, beta: &Complex) -> Result<IdentityReport> {
    if x < 2 {
        return Err(Error::Domain("conv_series_check needs integer x >= 2".into()));
    }
    if !beta.im.is_zero() || !(beta.re > 0) {
        return Err(Error::Domain("conv_series_check needs real beta > 0".into()));
    }
    let p = beta.prec();
    let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
    let rho = Float::with_val(p, &beta.re * Float::with_val(p, x)) / &two_pi;
    if !(rho < 1) {
        return Err(Error::Convergence(
            "series diverges: need beta < 2 pi / x".into(),
        ));
    }
    // Term bound ~ 4 (x-1) rho^n with rho = (x-1) beta / 2 pi.
    let rho = Float::with_val(p, &beta.re * Float::with_val(p, x - 1)) / &two_pi;
    let tol = pow2(p, -(p as i32) + 24);
    let need = Float::with_val(p, &tol / Float::with_val(p, 4 * (x - 1))).ln()
        / Float::with_val(p, rho.ln_ref());
    let k_end = need.to_f64().ceil().max(4.0) as usize;

    let xc = Complex::with_val(p, x as f64, 0.0);
    let mut series = Complex::zero(p);
    for n in 1..=k_end {
        let bn = bernoulli_number(n)?;
        if bn == 0 {
            continue;
        }
        let bpoly = crate::special::bernoulli_poly(n + 1, &xc)?;
        let denom = Float::with_val(p, Float::factorial(n as u32 + 1))
            * Float::with_val(p, n as u32);
        let coeff = Float::with_val(p, Float::with_val(p, bn) / denom);
        series = series.add(&bpoly.mul(&beta.powi(n as i64)?).mul_real(&coeff));
    }

    let otol = pow2(p, -(p as i32) + 12);
    let o_xb = oracle_log_qpoch(&xc.mul(beta), beta, &otol)?.log_value;
    let o_b = oracle_log_qpoch(beta, beta, &otol)?.log_value;
    let fact = Float::with_val(p, Float::factorial(x - 1)).ln();
    let mut closed = beta.div_real(&Float::with_val(p, 24u32))?.neg();
    closed = closed.sub(
        &beta
            .ln()?
            .mul_real(&Float::with_val(p, x - 1))
            .add(&Complex::from_real(fact))
            .add(&o_xb)
            .sub(&o_b),
    );

    let tail = Float::with_val(p, 4 * (x - 1)) * Float::with_val(p, rho.clone().pow((k_end + 1) as u32))
        / (Float::with_val(p, 1u32) - &rho);
    let certified = tail + Float::with_val(p, &otol * 4u32);
    Ok(IdentityReport::new(series, closed, certified))
}

// --- text and JSON rendering ---------------------------------------------

impl SymbolicTerm {
    /// Renders like "-1/12*x^-1" or "3/2*log(beta)" or "1/3*zeta(3)*x^3".
    pub fn render(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        let s = &self.sig;
        if s.pi_squared > 0 {
            parts.push(format!("pi^{}", 2 * s.pi_squared));
        }
        if s.zeta_odd > 0 {
            parts.push(format!("zeta({})", s.zeta_odd));
        }
        if s.euler_gamma {
            parts.push("gamma".into());
        }
        if s.x_pow != 0 {
            parts.push(if s.x_pow == 1 {
                "x".into()
            } else {
                format!("x^{}", s.x_pow)
            });
        }
        if s.log_beta {
            parts.push("log(beta)".into());
        }
        if s.log_x {
            parts.push("log(x)".into());
        }
        if s.log_2pi {
            parts.push("log(2pi)".into());
        }
        if s.log_gamma_x {
            parts.push("log_gamma(x)".into());
        }
        let atoms = parts.join("*");
        let one = Rational::from(1);
        let neg_one = Rational::from(-1);
        if atoms.is_empty() {
            format!("{}", self.coeff)
        } else if self.coeff == one {
            atoms
        } else if self.coeff == neg_one {
            format!("-{atoms}")
        } else {
            format!("{}*{atoms}", self.coeff)
        }
    }
}

impl Expansion {
    /// Canonical text table, one line per realized beta exponent.
    pub fn render_table(&self) -> String {
        let mut out = format!(
            "# expansion regime={} c={} cutoff={}\n",
            self.regime.name(),
            self.c,
            self.cutoff_exp
        );
        if self.terms.is_empty() {
            out.push_str(&format!("# {}\n", self.meta));
            return out;
        }
        let mut i = 0usize;
        while i < self.terms.len() {
            let e = self.terms[i].beta_exp.clone();
            let mut line = String::new();
            while i < self.terms.len() && self.terms[i].beta_exp == e {
                let rendered = self.terms[i].render();
                if line.is_empty() {
                    line.push_str(&rendered);
                } else if let Some(stripped) = rendered.strip_prefix('-') {
                    line.push_str(" - ");
                    line.push_str(stripped);
                } else {
                    line.push_str(" + ");
                    line.push_str(&rendered);
                }
                i += 1;
            }
            out.push_str(&format!("beta^{}: {}\n", e, line));
        }
        out
    }

    /// JSON form with exact rationals as strings and stable field order.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct AtomDto {
            kind: &'static str,
            #[serde(skip_serializing_if = "Option::is_none")]
            value: Option<String>,
        }
        #[derive(Serialize)]
        struct TermDto {
            coeff: String,
            atoms: Vec<AtomDto>,
        }
        #[derive(Serialize)]
        struct ExpansionDto {
            regime: &'static str,
            c: String,
            cutoff: String,
            terms: Vec<TermDto>,
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut atoms = vec![AtomDto {
                    kind: "beta_exp",
                    value: Some(t.beta_exp.to_string()),
                }];
                let s = &t.sig;
                if s.x_pow != 0 {
                    atoms.push(AtomDto {
                        kind: "x_pow",
                        value: Some(s.x_pow.to_string()),
                    });
                }
                if s.pi_squared > 0 {
                    atoms.push(AtomDto {
                        kind: "pi_squared",
                        value: Some(s.pi_squared.to_string()),
                    });
                }
                if s.zeta_odd > 0 {
                    atoms.push(AtomDto {
                        kind: "zeta_odd",
                        value: Some(s.zeta_odd.to_string()),
                    });
                }
                for (flag, kind) in [
                    (s.euler_gamma, "euler_gamma"),
                    (s.log_beta, "log_beta"),
                    (s.log_x, "log_x"),
                    (s.log_2pi, "log_2pi"),
                    (s.log_gamma_x, "log_gamma_x"),
                ] {
                    if flag {
                        atoms.push(AtomDto { kind, value: None });
                    }
                }
                TermDto {
                    coeff: t.coeff.to_string(),
                    atoms,
                }
            })
            .collect();
        let dto = ExpansionDto {
            regime: self.regime.name(),
            c: self.c.to_string(),
            cutoff: self.cutoff_exp.to_string(),
            terms,
        };
        serde_json::to_string_pretty(&dto).expect("expansion serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find<'a>(
        exp: &'a Expansion,
        e: (i64, i64),
        pred: impl Fn(&AtomSignature) -> bool,
    ) -> Option<&'a SymbolicTerm> {
        let er = Rational::from(e);
        exp.terms.iter().find(|t| t.beta_exp == er && pred(&t.sig))
    }

    #[test]
    fn printed_c_half_table() {
        let exp = regime_coefficients(&rat(1, 2), &Rational::from(1)).unwrap();
        // beta^{1/2} coefficient: -(1/(12x) + x/4 + x^3/72)
        let t = find(&exp, (1, 2), |s| s.x_pow == -1).unwrap();
        assert_eq!(t.coeff, rat(-1, 12));
        let t = find(&exp, (1, 2), |s| s.x_pow == 1).unwrap();
        assert_eq!(t.coeff, rat(-1, 4));
        let t = find(&exp, (1, 2), |s| s.x_pow == 3).unwrap();
        assert_eq!(t.coeff, rat(-1, 72));
        // beta^1: 1/24 + x^2/48
        let t = find(&exp, (1, 1), |s| s.x_pow == 0).unwrap();
        assert_eq!(t.coeff, rat(1, 24));
        let t = find(&exp, (1, 1), |s| s.x_pow == 2).unwrap();
        assert_eq!(t.coeff, rat(1, 48));
        // beta^0: log beta / 4 + log x / 2 + x^2/4
        let t = find(&exp, (0, 1), |s| s.log_beta).unwrap();
        assert_eq!(t.coeff, rat(1, 4));
        let t = find(&exp, (0, 1), |s| s.log_x).unwrap();
        assert_eq!(t.coeff, rat(1, 2));
        let t = find(&exp, (0, 1), |s| s.x_pow == 2 && !s.log_x && !s.log_beta).unwrap();
        assert_eq!(t.coeff, rat(1, 4));
    }

    #[test]
    fn printed_c_two_table() {
        let exp = regime_coefficients(&Rational::from(2), &Rational::from(3)).unwrap();
        // beta^3: -x/144 + x^2/4 + zeta(3) x^3/3
        let t = find(&exp, (3, 1), |s| s.x_pow == 1).unwrap();
        assert_eq!(t.coeff, rat(-1, 144));
        let t = find(&exp, (3, 1), |s| s.x_pow == 2).unwrap();
        assert_eq!(t.coeff, rat(1, 4));
        let t = find(&exp, (3, 1), |s| s.x_pow == 3 && s.zeta_odd == 3).unwrap();
        assert_eq!(t.coeff, rat(1, 3));
        // beta^2: -x/4 - pi^2 x^2 / 12
        let t = find(&exp, (2, 1), |s| s.x_pow == 1).unwrap();
        assert_eq!(t.coeff, rat(-1, 4));
        let t = find(&exp, (2, 1), |s| s.x_pow == 2 && s.pi_squared == 1).unwrap();
        assert_eq!(t.coeff, rat(-1, 12));
        // beta^1: 1/24 + gamma x; the log beta piece is -x log beta.
        let t = find(&exp, (1, 1), |s| s.x_pow == 0).unwrap();
        assert_eq!(t.coeff, rat(1, 24));
        let t = find(&exp, (1, 1), |s| s.euler_gamma).unwrap();
        assert_eq!(t.coeff, Rational::from(1));
        let t = find(&exp, (1, 1), |s| s.log_beta).unwrap();
        assert_eq!(t.coeff, Rational::from(-1));
        // beta^0: 3/2 log beta + log x + 1/2 log 2pi
        let t = find(&exp, (0, 1), |s| s.log_beta && s.x_pow == 0).unwrap();
        assert_eq!(t.coeff, rat(3, 2));
        let t = find(&exp, (0, 1), |s| s.log_x).unwrap();
        assert_eq!(t.coeff, Rational::from(1));
        let t = find(&exp, (0, 1), |s| s.log_2pi).unwrap();
        assert_eq!(t.coeff, rat(1, 2));
    }

    #[test]
    fn c1_head_terms() {
        let exp = regime_coefficients(&Rational::from(1), &Rational::new()).unwrap();
        let t = find(&exp, (-1, 1), |s| s.pi_squared == 1).unwrap();
        assert_eq!(t.coeff, rat(-1, 6));
        let t = find(&exp, (0, 1), |s| s.log_beta && s.x_pow == 0).unwrap();
        assert_eq!(t.coeff, rat(1, 2));
        let t = find(&exp, (0, 1), |s| s.log_beta && s.x_pow == 1).unwrap();
        assert_eq!(t.coeff, Rational::from(-1));
        let t = find(&exp, (0, 1), |s| s.log_gamma_x).unwrap();
        assert_eq!(t.coeff, Rational::from(-1));
        let t = find(&exp, (0, 1), |s| s.log_2pi).unwrap();
        assert_eq!(t.coeff, rat(1, 2));
        // Nothing beyond beta^0 requested.
        assert!(exp.terms.iter().all(|t| t.beta_exp <= Rational::new()));
    }

    #[test]
    fn table_renders_deterministically() {
        let exp = regime_coefficients(&rat(1, 2), &Rational::from(1)).unwrap();
        let a = exp.render_table();
        let b = regime_coefficients(&rat(1, 2), &Rational::from(1))
            .unwrap()
            .render_table();
        assert_eq!(a, b);
        assert!(a.contains("beta^-1: -1/6*pi^2"));
        assert!(a.contains("beta^1: 1/24 + 1/48*x^2"));
    }

    #[test]
    fn c0_symbolic_is_flagged_numeric() {
        let exp = regime_coefficients(&Rational::new(), &Rational::from(5)).unwrap();
        assert!(exp.terms.is_empty());
        assert!(exp.meta.contains("numeric"));
    }

    #[test]
    fn invalid_inputs() {
        assert!(matches!(
            regime_coefficients(&rat(-1, 2), &Rational::from(1)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            regime_coefficients(&rat(1, 2), &rat(-3, 2)),
            Err(Error::Domain(_))
        ));
    }
}
