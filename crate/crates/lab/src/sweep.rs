//! Truncation-error sweeps: partial sums of an asymptotic series for
//! log (e^{-x beta^c}; e^{-beta})_inf at every realized beta-exponent, with
//! the absolute error measured against the summed-product oracle.

use qpoch_core::arith::{BranchContext, Complex, Precision};
use qpoch_core::error::{Error, Result};
use qpoch_core::expansions::{c0_term, lattice_denominator, uniform_head, uniform_term};
use qpoch_core::identity::oracle_log_qpoch;
use qpoch_core::special::{bernoulli_number, zeta_int};
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};
use std::collections::BTreeMap;

/// Which series the sweep truncates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepRegime {
    /// The uniform expansion, truncated in its Bernoulli k-sum.
    Uniform,
    /// Fixed-y series (c = 0).
    C0,
    /// 0 < c < 1.
    CSmall,
    /// c = 1.
    C1,
    /// c > 1.
    CLarge,
}

impl SweepRegime {
    pub fn name(&self) -> &'static str {
        match self {
            SweepRegime::Uniform => "uniform",
            SweepRegime::C0 => "c0",
            SweepRegime::CSmall => "c_small",
            SweepRegime::C1 => "c1",
            SweepRegime::CLarge => "c_large",
        }
    }

    fn check_c(&self, c: &Rational) -> Result<()> {
        let zero = Rational::new();
        let one = Rational::from(1);
        let ok = match self {
            SweepRegime::Uniform => *c >= zero,
            SweepRegime::C0 => *c == zero,
            SweepRegime::CSmall => *c > zero && *c < one,
            SweepRegime::C1 => *c == one,
            SweepRegime::CLarge => *c > one,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "scaling exponent c = {c} invalid for regime {}",
                self.name()
            )))
        }
    }
}

/// One point of an error curve.
#[derive(Debug, Clone)]
pub struct SweepRow {
    /// Largest beta-exponent used, as numerator over the exponent lattice.
    pub order: i64,
    pub beta_exp: Rational,
    pub partial: Complex,
    pub abs_error: Float,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub regime: SweepRegime,
    pub c: Rational,
    pub x: Float,
    pub beta: Float,
    pub max_order: i64,
    pub prec: Precision,
}

/// Run a sweep: build the term stream, group terms by exponent, take
/// cumulative sums in lattice order and measure each against the oracle.
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.regime.check_c(&cfg.c)?;
    if !(cfg.x.is_finite() && cfg.x > 0) || !(cfg.beta.is_finite() && cfg.beta > 0) {
        return Err(Error::Domain("sweeps take real x > 0 and beta > 0".into()));
    }
    let p = cfg.prec.working();
    let beta = Complex::from_real(Float::with_val(p, &cfg.beta));
    let x = Complex::from_real(Float::with_val(p, &cfg.x));
    // y = x beta^c
    let cf = Float::with_val(p, &cfg.c);
    let y = x.mul(
        &beta
            .ln()?
            .mul_real(&cf)
            .exp()?,
    );

    let tol = qpoch_core::arith::pow2(p, -(p as i32) + 16);
    let oracle = oracle_log_qpoch(&y, &beta, &tol)?.log_value;

    let q = match cfg.regime {
        SweepRegime::Uniform | SweepRegime::C0 | SweepRegime::C1 => 1,
        _ => lattice_denominator(&cfg.c),
    };

    // Buckets keyed by exponent numerator over the lattice.
    let mut buckets: BTreeMap<i64, Complex> = BTreeMap::new();
    match cfg.regime {
        SweepRegime::Uniform => uniform_stream(&y, &beta, cfg.max_order, &mut buckets)?,
        SweepRegime::C0 => c0_stream(&x, &beta, cfg.max_order, &mut buckets)?,
        SweepRegime::C1 => c1_stream(&cfg, p, &beta, cfg.max_order, &mut buckets)?,
        SweepRegime::CSmall | SweepRegime::CLarge => {
            scaling_stream(&cfg, p, &beta, q, &mut buckets)?
        }
    }

    let mut rows = Vec::with_capacity(buckets.len());
    let mut acc = Complex::zero(p);
    for (num, v) in buckets {
        acc = acc.add(&v);
        let err = acc.sub(&oracle).abs();
        rows.push(SweepRow {
            order: num,
            beta_exp: Rational::from((num, q as i64)),
            partial: acc.clone(),
            abs_error: err,
        });
    }
    Ok(rows)
}

fn bucket_add(buckets: &mut BTreeMap<i64, Complex>, key: i64, v: Complex) {
    match buckets.remove(&key) {
        Some(old) => {
            buckets.insert(key, old.add(&v));
        }
        None => {
            buckets.insert(key, v);
        }
    }
}

/// Uniform expansion: head at order 0, Bernoulli term k at order 2k-1.
fn uniform_stream(
    y: &Complex,
    beta: &Complex,
    max_order: i64,
    buckets: &mut BTreeMap<i64, Complex>,
) -> Result<()> {
    bucket_add(buckets, 0, uniform_head(y, beta)?);
    let mut k = 1usize;
    while (2 * k as i64 - 1) <= max_order {
        bucket_add(buckets, 2 * k as i64 - 1, uniform_term(y, beta, k)?);
        k += 1;
    }
    Ok(())
}

/// Fixed-y series: term k sits at exponent k - 1.
fn c0_stream(
    x: &Complex,
    beta: &Complex,
    max_order: i64,
    buckets: &mut BTreeMap<i64, Complex>,
) -> Result<()> {
    let ctx = BranchContext::new(beta.clone())?;
    let mut k = 0usize;
    while (k as i64 - 1) <= max_order {
        if k <= 1 || k % 2 == 0 {
            let t = c0_term(x, beta, &ctx, k)?;
            bucket_add(buckets, k as i64 - 1, t);
        }
        k += 1;
    }
    Ok(())
}

/// c = 1 series: head at exponents -1 and 0, then
/// -B_n B_{n+1}(x) beta^n / (n (n+1)!) at exponent n.
fn c1_stream(
    cfg: &SweepConfig,
    p: u32,
    beta: &Complex,
    max_order: i64,
    buckets: &mut BTreeMap<i64, Complex>,
) -> Result<()> {
    let x = Float::with_val(p, &cfg.x);
    let pi = Float::with_val(p, Constant::Pi);
    let ln_beta = Float::with_val(p, beta.re.ln_ref());

    // -pi^2/6 beta^{-1}
    let head_m1 = -(Float::with_val(p, pi.square_ref()) / 6u32) / Float::with_val(p, &beta.re);
    bucket_add(buckets, -1, Complex::from_real(head_m1));
    // (1/2 - x) log beta - log Gamma(x) + log(2 pi)/2
    let lg = qpoch_core::loggamma::log_gamma(&Complex::from_real(x.clone()))?;
    let mut head0 = Float::with_val(p, Float::with_val(p, 0.5f32) - &x) * &ln_beta;
    head0 -= &lg.re;
    head0 += Float::with_val(p, (Float::with_val(p, &pi * 2u32)).ln_ref()) / 2u32;
    bucket_add(buckets, 0, Complex::from_real(head0));

    if max_order < 1 {
        return Ok(());
    }
    let nmax = max_order as usize;
    // Bernoulli numbers and x powers as floats.
    let mut bf: Vec<Float> = Vec::with_capacity(nmax + 2);
    for m in 0..=(nmax + 1) {
        bf.push(Float::with_val(p, bernoulli_number(m)?));
    }
    let mut xpow: Vec<Float> = Vec::with_capacity(nmax + 2);
    xpow.push(Float::with_val(p, 1u32));
    for j in 1..=(nmax + 1) {
        xpow.push(Float::with_val(p, &xpow[j - 1] * &x));
    }
    // Pascal row, advanced to C(n+1, .) before each use.
    let mut row: Vec<Float> = vec![Float::with_val(p, 1u32)];
    let mut deg = 0usize;
    let mut beta_pow = Float::with_val(p, &beta.re); // beta^n
    let mut fact_np1 = Float::with_val(p, 2u32); // (n+1)! at n = 1
    for n in 1..=nmax {
        while deg < n + 1 {
            row.push(Float::with_val(p, 1u32));
            for j in (1..row.len() - 1).rev() {
                let s = Float::with_val(p, &row[j - 1] + &row[j]);
                row[j] = s;
            }
            deg += 1;
        }
        if n > 1 {
            beta_pow *= &beta.re;
            fact_np1 *= Float::with_val(p, (n + 1) as u32);
        }
        if bf[n].is_zero() {
            continue;
        }
        // B_{n+1}(x) = sum_j C(n+1,j) B_j x^{n+1-j}
        let mut bpoly = Float::new(p);
        for j in 0..=(n + 1) {
            if bf[j].is_zero() {
                continue;
            }
            bpoly += Float::with_val(p, &row[j] * &bf[j]) * &xpow[n + 1 - j];
        }
        let term = -Float::with_val(p, &bf[n] * &bpoly) * &beta_pow
            / (Float::with_val(p, n as u32) * &fact_np1);
        bucket_add(buckets, n as i64, Complex::from_real(Float::with_val(p, term)));
    }
    Ok(())
}

/// 0 < c < 1 and c > 1 regimes, evaluated as pure float term streams over
/// the exponent lattice Z/q.
fn scaling_stream(
    cfg: &SweepConfig,
    p: u32,
    beta: &Complex,
    q: u32,
    buckets: &mut BTreeMap<i64, Complex>,
) -> Result<()> {
    let x = Float::with_val(p, &cfg.x);
    let c = &cfg.c;
    let pi = Float::with_val(p, Constant::Pi);
    let ln_beta = Float::with_val(p, beta.re.ln_ref());
    let ln_x = Float::with_val(p, x.ln_ref());
    let cf = Float::with_val(p, c);
    let max_order = cfg.max_order;

    // exponent numerators (exact): e*q must be integral on the lattice
    let exp_num = |r: &Rational| -> i64 {
        let scaled = Rational::from(r * Rational::from(q));
        debug_assert_eq!(scaled.denom().to_u32(), Some(1));
        scaled.numer().to_i64().unwrap()
    };
    let beta_r = Float::with_val(p, &beta.re);
    let bpow = |e: &Rational| -> Float {
        let ef = Float::with_val(p, e);
        Float::with_val(p, Float::with_val(p, &ef * &ln_beta).exp_ref())
    };

    let one = Rational::from(1);
    let cm1 = Rational::from(c - &one);
    let omc = Rational::from(&one - c);

    // head: -pi^2/6 beta^{-1}
    let h = -(Float::with_val(p, pi.square_ref()) / 6u32) / &beta_r;
    bucket_add(buckets, -(q as i64), Complex::from_real(Float::with_val(p, h)));

    if *c < one {
        // x (1 - log x - c log beta) beta^{c-1}
        let inner = Float::with_val(p, 1u32) - &ln_x - Float::with_val(p, &cf * &ln_beta);
        let v = Float::with_val(p, &x * &inner) * bpow(&cm1);
        bucket_add(buckets, exp_num(&cm1), Complex::from_real(Float::with_val(p, v)));
        // (c/2) log beta + (1/2) log x
        let v = Float::with_val(p, &cf * &ln_beta) / 2u32 + Float::with_val(p, &ln_x / 2u32);
        bucket_add(buckets, 0, Complex::from_real(Float::with_val(p, v)));
    } else {
        // (c - 1/2) log beta + log x + log(2 pi)/2
        let mut v = Float::with_val(p, &cf - Float::with_val(p, 0.5f32)) * &ln_beta;
        v += &ln_x;
        v += Float::with_val(p, (Float::with_val(p, &pi * 2u32)).ln_ref()) / 2u32;
        bucket_add(buckets, 0, Complex::from_real(v));
        // x (gamma - log beta) beta^{c-1}
        let gamma = const_gamma(p)?;
        let v = Float::with_val(p, &x * Float::with_val(p, &gamma - &ln_beta)) * bpow(&cm1);
        bucket_add(buckets, exp_num(&cm1), Complex::from_real(v));
    }

    // single sum
    if *c < one {
        // - B_{2k} / (2k (2k-1) x^{2k-1}) beta^{(1-c)(2k-1)}
        let mut k = 1u32;
        loop {
            let e = Rational::from(&omc * Rational::from(2 * k - 1));
            let num = exp_num(&e);
            if num > max_order {
                break;
            }
            let b = Float::with_val(p, bernoulli_number(2 * k as usize)?);
            let den = Float::with_val(p, 2 * k * (2 * k - 1))
                * Float::with_val(p, x.clone().pow(2 * k - 1));
            let v = -(b / den) * bpow(&e);
            bucket_add(buckets, num, Complex::from_real(v));
            k += 1;
        }
    } else {
        // - zeta(k) (-x)^k / k beta^{(c-1)k}
        let mut k = 2u32;
        loop {
            let e = Rational::from(&cm1 * Rational::from(k));
            let num = exp_num(&e);
            if num > max_order {
                break;
            }
            let z = zeta_int(k, cfg.prec)?;
            let mut v = Float::with_val(p, &z * Float::with_val(p, x.clone().pow(k)))
                / Float::with_val(p, k);
            if k % 2 == 0 {
                v = -v;
            }
            let v = v * bpow(&e);
            bucket_add(buckets, num, Complex::from_real(v));
            k += 1;
        }
    }

    // double sum: - B_k B_n x^{n+1-k}/(k! n (n+1-k)!) at the regime exponent
    let exp_of = |kk: i64, nn: i64| -> Rational {
        if *c < one {
            Rational::from(&omc * Rational::from(kk - 1)) + Rational::from(c * Rational::from(nn))
        } else {
            Rational::from(kk - 1) + Rational::from(c * Rational::from(nn + 1 - kk))
        }
    };

    // Precompute float tables up to the largest n that can contribute.
    let n_cap: i64 = if *c < one {
        // exponent >= c*n - (1-c); n <= (max/q + 1 - c)/c
        let lim = (Rational::from((max_order, q as i64)) + &one - c) / c.clone();
        lim.floor().numer().to_i64().unwrap() + 2
    } else {
        // smallest exponent for given n is at k = n+1: exponent n
        max_order / q as i64 + 2
    };
    let n_cap = n_cap.max(2) as usize;
    let mut bf: Vec<Float> = Vec::with_capacity(n_cap + 2);
    for m in 0..=(n_cap + 1) {
        bf.push(Float::with_val(p, bernoulli_number(m)?));
    }
    let mut xpow: Vec<Float> = Vec::with_capacity(n_cap + 2);
    xpow.push(Float::with_val(p, 1u32));
    for j in 1..=(n_cap + 1) {
        xpow.push(Float::with_val(p, &xpow[j - 1] * &x));
    }
    let mut factinv: Vec<Float> = Vec::with_capacity(n_cap + 2);
    factinv.push(Float::with_val(p, 1u32));
    for j in 1..=(n_cap + 1) {
        factinv.push(Float::with_val(p, &factinv[j - 1] / Float::with_val(p, j as u32)));
    }

    for n in 1..=(n_cap as i64) {
        if bf[n as usize].is_zero() {
            continue;
        }
        for k in 0..=(n + 1) {
            if bf[k as usize].is_zero() {
                continue;
            }
            let e = exp_of(k, n);
            let num = exp_num(&e);
            if num > max_order {
                continue;
            }
            let v = -Float::with_val(p, &bf[k as usize] * &factinv[k as usize])
                * Float::with_val(p, &bf[n as usize] * &factinv[(n + 1 - k) as usize])
                * Float::with_val(p, &xpow[(n + 1 - k) as usize] / Float::with_val(p, n))
                * bpow(&e);
            bucket_add(buckets, num, Complex::from_real(v));
        }
    }
    Ok(())
}

fn const_gamma(p: u32) -> Result<Float> {
    let bits = p.clamp(64, 4300);
    Ok(Float::with_val(
        p,
        qpoch_core::arith::const_euler_gamma(Precision::new(bits)?)?,
    ))
}

/// Term magnitudes grouped per exponent (largest beta-exponent axis), used
/// by the divergence-witness checks. Same grouping the sweep uses.
pub fn term_group_magnitudes(cfg: &SweepConfig) -> Result<Vec<(i64, Float)>> {
    cfg.regime.check_c(&cfg.c)?;
    let p = cfg.prec.working();
    let beta = Complex::from_real(Float::with_val(p, &cfg.beta));
    let q = match cfg.regime {
        SweepRegime::Uniform | SweepRegime::C0 | SweepRegime::C1 => 1,
        _ => lattice_denominator(&cfg.c),
    };
    let mut buckets: BTreeMap<i64, Complex> = BTreeMap::new();
    match cfg.regime {
        SweepRegime::Uniform => {
            let x = Complex::from_real(Float::with_val(p, &cfg.x));
            let cf = Float::with_val(p, &cfg.c);
            let y = x.mul(&beta.ln()?.mul_real(&cf).exp()?);
            uniform_stream(&y, &beta, cfg.max_order, &mut buckets)?
        }
        SweepRegime::C0 => {
            let x = Complex::from_real(Float::with_val(p, &cfg.x));
            c0_stream(&x, &beta, cfg.max_order, &mut buckets)?
        }
        SweepRegime::C1 => c1_stream(cfg, p, &beta, cfg.max_order, &mut buckets)?,
        _ => scaling_stream(cfg, p, &beta, q, &mut buckets)?,
    }
    Ok(buckets
        .into_iter()
        .map(|(num, v)| (num, v.abs()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(regime: SweepRegime, c: (i64, i64), x: f64, beta: (i64, i64), max_order: i64, bits: u32) -> SweepConfig {
        let prec = Precision::new(bits).unwrap();
        let p = prec.working();
        SweepConfig {
            regime,
            c: Rational::from(c),
            x: Float::with_val(p, x),
            beta: Float::with_val(p, Rational::from(beta)),
            max_order,
            prec,
        }
    }

    #[test]
    fn c0_first_orders_decrease() {
        let rows = sweep(&cfg(SweepRegime::C0, (0, 1), 3.0, (1, 16), 5, 192)).unwrap();
        assert!(rows.len() >= 5);
        for w in rows.windows(2).take(4) {
            assert!(
                w[1].abs_error < w[0].abs_error,
                "error not decreasing: {} -> {}",
                w[0].abs_error,
                w[1].abs_error
            );
        }
        assert_eq!(rows[0].order, -1);
    }

    #[test]
    fn uniform_small_sweep_descends() {
        let rows = sweep(&cfg(SweepRegime::Uniform, (2, 1), 3.0, (1, 16), 9, 256)).unwrap();
        // orders 0,1,3,5,7,9
        assert_eq!(rows.len(), 6);
        assert!(rows[5].abs_error < rows[0].abs_error);
    }

    #[test]
    fn csmall_lattice_orders() {
        let rows = sweep(&cfg(SweepRegime::CSmall, (1, 2), 3.0, (1, 16), 4, 256)).unwrap();
        // exponents -1, -1/2, 0, 1/2, 1, 3/2, 2 -> numerators -2,-1,0,1,2,3,4
        let orders: Vec<i64> = rows.iter().map(|r| r.order).collect();
        assert_eq!(orders, vec![-2, -1, 0, 1, 2, 3, 4]);
        // The beta^{1/2} row must already be quite accurate.
        assert!(rows[3].abs_error < Float::with_val(288, 5e-2));
        assert!(rows[6].abs_error < rows[3].abs_error);
    }

    #[test]
    fn regime_mismatch_rejected() {
        assert!(sweep(&cfg(SweepRegime::CSmall, (2, 1), 3.0, (1, 16), 4, 128)).is_err());
        assert!(sweep(&cfg(SweepRegime::C1, (1, 2), 3.0, (1, 16), 4, 128)).is_err());
    }
}
