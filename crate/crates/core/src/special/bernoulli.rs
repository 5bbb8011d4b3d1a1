//! Exact Bernoulli numbers via the tangent-number recurrence, Bernoulli
//! polynomials, and the sine-series (Fourier) form of `B_n(x)`.

use crate::arith::Complex;
use crate::error::{Error, Result};
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use std::sync::Mutex;

/// Hard ceiling on the Bernoulli index; the tangent-number table is O(n^2)
/// big-integer work and anything past this is a caller bug.
const MAX_INDEX: usize = 40_000;

/// Growable table of even-index Bernoulli numbers.
///
/// `table[m]` holds `B_{2m}`. Entries are immutable once stored; the table is
/// recomputed wholesale on growth (the tangent recurrence is triangular), with
/// doubling so amortized cost stays quadratic in the largest index reached.
pub struct BernoulliCache {
    even: Mutex<Vec<Rational>>,
}

impl BernoulliCache {
    pub const fn new() -> Self {
        BernoulliCache {
            even: Mutex::new(Vec::new()),
        }
    }

    /// B_k, exact. Supports k up to at least 1500 (soft-capped at 40000).
    pub fn get(&self, k: usize) -> Result<Rational> {
        if k == 0 {
            return Ok(Rational::from(1));
        }
        if k == 1 {
            return Ok(Rational::from((-1, 2)));
        }
        if k % 2 == 1 {
            return Ok(Rational::new());
        }
        if k > MAX_INDEX {
            return Err(Error::Precision(format!(
                "Bernoulli index {k} beyond supported table size {MAX_INDEX}"
            )));
        }
        let m = k / 2;
        let mut tab = self.even.lock().unwrap();
        if m >= tab.len() {
            let target = (2 * tab.len()).max(m + 1).max(64);
            *tab = bernoulli_even_table(target - 1);
        }
        Ok(tab[m].clone())
    }
}

static CACHE: BernoulliCache = BernoulliCache::new();

/// Tangent numbers T_1..T_n by the integer triangle recurrence, then
/// B_{2m} = (-1)^{m-1} * 2m * T_m / (4^m (4^m - 1)).
fn bernoulli_even_table(mmax: usize) -> Vec<Rational> {
    let n = mmax.max(1);
    let mut t: Vec<Integer> = vec![Integer::new(); n + 1];
    t[1] = Integer::from(1);
    for k in 2..=n {
        t[k] = (&t[k - 1] * Integer::from(k - 1)).into();
    }
    for k in 2..=n {
        for j in k..=n {
            let a: Integer = (&t[j - 1] * Integer::from(j - k)).into();
            let b: Integer = (&t[j] * Integer::from(j - k + 2)).into();
            t[j] = a + b;
        }
    }
    let mut out = Vec::with_capacity(mmax + 1);
    out.push(Rational::from(1)); // B_0; slot unused by get() but keeps indexing direct
    for m in 1..=mmax {
        let four_m = Integer::from(4).pow(m as u32);
        let den: Integer = (&four_m * Integer::from(&four_m - 1u32)).into();
        let num: Integer = (&t[m] * Integer::from(2 * m)).into();
        let mut b = Rational::from((num, den));
        if m % 2 == 0 {
            b = -b;
        }
        out.push(b);
    }
    out
}

/// The k-th Bernoulli number, exact (B_1 = -1/2 convention).
pub fn bernoulli_number(k: usize) -> Result<Rational> {
    CACHE.get(k)
}

pub(crate) fn bernoulli_float(k: usize, prec: u32) -> Result<Float> {
    Ok(Float::with_val(prec, bernoulli_number(k)?))
}

/// Bernoulli polynomial B_n(x) = sum_k C(n,k) B_k x^{n-k}, with exact
/// coefficients evaluated at the working precision of `x`.
pub fn bernoulli_poly(n: usize, x: &Complex) -> Result<Complex> {
    let p = x.prec();
    // Horner over descending powers: coefficient of x^{n-k} is C(n,k) B_k.
    let mut acc = Complex::zero(p);
    for k in 0..=n {
        let coeff = Rational::from(Integer::from(n as u32).binomial(k as u32))
            * bernoulli_number(k)?;
        acc = acc.mul(x).add(&Complex::from_real(Float::with_val(p, coeff)));
    }
    Ok(acc)
}

/// Truncated Fourier expansion of B_n(x) for odd n >= 3 and x >= 0:
/// the floor sum plus K sine terms.
pub fn bernoulli_poly_fourier(n: usize, x: &Float, kterms: usize) -> Result<Float> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::Domain(format!(
            "Fourier form of B_n(x) needs odd n >= 3, got {n}"
        )));
    }
    if !(x.is_finite() && *x >= 0) {
        return Err(Error::Domain("Fourier form of B_n(x) needs x >= 0".into()));
    }
    if kterms < 1 {
        return Err(Error::Domain("need at least one sine term".into()));
    }
    let p = x.prec();
    let floor_x = x
        .to_integer_round(rug::float::Round::Down)
        .map(|(i, _)| i)
        .unwrap_or_default();

    let mut head = Float::new(p);
    let mut k = Integer::from(1);
    while k <= floor_x {
        let base = Float::with_val(p, x - Float::with_val(p, &k));
        head += base.pow((n - 1) as u32);
        k += 1;
    }
    head *= n as u32;

    let two_pi = Float::with_val(p, rug::float::Constant::Pi) * 2u32;
    let mut tail = Float::new(p);
    for j in 1..=kterms {
        let ang = Float::with_val(p, &two_pi * j as u32) * x;
        let s = Float::with_val(p, ang.sin_ref());
        let den = Float::with_val(p, &two_pi * j as u32).pow(n as u32);
        tail += s / den;
    }
    let mut fact = Float::with_val(p, Float::factorial(n as u32));
    if (n + 1) / 2 % 2 == 1 {
        fact = -fact;
    }
    let out = head + 2u32 * fact * tail;
    crate::arith::check_finite_real(out, "bernoulli_poly_fourier")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::pow2;

    #[test]
    fn small_bernoulli_values() {
        assert_eq!(bernoulli_number(0).unwrap(), Rational::from(1));
        assert_eq!(bernoulli_number(1).unwrap(), Rational::from((-1, 2)));
        assert_eq!(bernoulli_number(2).unwrap(), Rational::from((1, 6)));
        assert_eq!(bernoulli_number(7).unwrap(), Rational::new());
        assert_eq!(bernoulli_number(12).unwrap(), Rational::from((-691, 2730)));
    }

    #[test]
    fn matches_defining_recurrence() {
        // Independent oracle: sum_{j=0}^{n} C(n+1, j) B_j = 0 for n >= 1.
        for n in 1..=40usize {
            let mut s = Rational::new();
            for j in 0..=n {
                s += Rational::from(Integer::from((n + 1) as u32).binomial(j as u32))
                    * bernoulli_number(j).unwrap();
            }
            assert_eq!(s, Rational::new(), "recurrence fails at n={n}");
        }
    }

    #[test]
    fn odd_indices_vanish() {
        for j in 1..=50usize {
            assert_eq!(bernoulli_number(2 * j + 1).unwrap(), Rational::new());
        }
    }

    #[test]
    fn deep_table_reaches_1500() {
        let b = bernoulli_number(1500).unwrap();
        assert!(b != Rational::new());
        // Sign alternation: B_{2m} has sign (-1)^{m-1}; m = 750 is even, so negative.
        assert!(b < Rational::new());
    }

    #[test]
    fn poly_basics() {
        let x = Complex::with_val(128, 0.37, 0.0);
        let b0 = bernoulli_poly(0, &x).unwrap();
        assert!(b0.sub(&Complex::one(128)).abs().is_zero());
        // B_2(0) = B_2 = 1/6
        let zero = Complex::zero(128);
        let b2 = bernoulli_poly(2, &zero).unwrap();
        let want = Complex::from_real(Float::with_val(128, Rational::from((1, 6))));
        assert!(b2.sub(&want).abs() < pow2(128, -120));
    }

    #[test]
    fn fourier_agrees_with_polynomial() {
        // B_5(1/2) = 0; the sine terms vanish identically there.
        let half = Float::with_val(192, 0.5);
        let f = bernoulli_poly_fourier(5, &half, 1000).unwrap();
        assert!(f.clone().abs() < Float::with_val(192, 1e-3));

        // Generic point: B_5(3) vs the truncated Fourier form.
        let x = Float::with_val(192, 3.0);
        let f = bernoulli_poly_fourier(5, &x, 10_000).unwrap();
        let direct = bernoulli_poly(5, &Complex::from_real(x)).unwrap();
        let diff = (direct.re - f).abs();
        assert!(diff < Float::with_val(192, 1e-6), "diff = {diff}");
    }

    #[test]
    fn fourier_rejects_even_order() {
        let x = Float::with_val(96, 1.0);
        assert!(matches!(
            bernoulli_poly_fourier(4, &x, 10),
            Err(Error::Domain(_))
        ));
    }
}
