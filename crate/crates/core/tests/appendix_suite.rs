//! Classical-results suite: Bernoulli identities and asymptotics, the
//! Fourier form of Bernoulli polynomials, polylogarithm derivative relations
//! and the partial-fraction convergence rates.

use qpoch_core::arith::{pow2, Complex, Precision};
use qpoch_core::special::{
    bernoulli_number, bernoulli_poly, bernoulli_poly_fourier, li12_paper_branch, li_nonpos,
    parfrac_partial, zeta_int,
};
use qpoch_core::BranchContext;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

#[test]
fn odd_bernoulli_vanish_to_101() {
    for k in (3..=101usize).step_by(2) {
        assert_eq!(bernoulli_number(k).unwrap(), Rational::new(), "B_{k} != 0");
    }
}

#[test]
fn bernoulli_zeta_identity_exact_to_30() {
    // |B_2k| = 2 (2k)! zeta(2k) / (2 pi)^{2k}, checked at working precision.
    let p = 512u32;
    let prec = Precision::new(256).unwrap();
    let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
    for k in 1..=30u32 {
        let b = Float::with_val(p, bernoulli_number(2 * k as usize).unwrap()).abs();
        let z = Float::with_val(p, zeta_int(2 * k, prec).unwrap());
        let rhs = 2u32 * Float::with_val(p, Float::factorial(2 * k)) * z
            / Float::with_val(p, two_pi.clone().pow(2 * k));
        let rel = Float::with_val(p, &b - &rhs).abs() / &b;
        assert!(rel < pow2(p, -250), "k = {k}: rel = {rel}");
    }
}

#[test]
fn bernoulli_asymptotics_ratio_at_100() {
    // |B_200| (2 pi)^200 / (2 * 200!) = zeta(200) = 1 + 2^-200 + ...;
    // distance from 1 is under 1e-60.
    let p = 1024u32;
    let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
    let b = Float::with_val(p, bernoulli_number(200).unwrap()).abs();
    let ratio = b * Float::with_val(p, two_pi.pow(200u32))
        / (2u32 * Float::with_val(p, Float::factorial(200)));
    let gap = Float::with_val(p, &ratio - 1u32).abs();
    assert!(gap < Float::with_val(p, 1e-60), "gap = {gap}");
}

#[test]
fn fourier_form_matches_direct_polynomial() {
    // B_5(x) via the floor + sine series against the exact polynomial, with
    // the tail under 2 n! / (2 pi K)^{n-1} / (n-1)-ish; assert a safe bound.
    let p = 256u32;
    for xv in [0.25f64, 0.5, 1.75, 3.0, 4.5] {
        let x = Float::with_val(p, xv);
        let k_terms = 1000usize;
        let f = bernoulli_poly_fourier(5, &x, k_terms).unwrap();
        let d = bernoulli_poly(5, &Complex::from_real(x.clone())).unwrap();
        let gap = (d.re - f).abs();
        // tail <= 2 * 5! * sum_{k>K} (2 pi k)^{-5} <= 240/(2 pi K)^5 * K/4
        let bound = Float::with_val(p, 2.0 * 120.0)
            / Float::with_val(p, 2.0 * std::f64::consts::PI * k_terms as f64).pow(5u32)
            * Float::with_val(p, k_terms as f64 / 4.0 + 1.0);
        assert!(gap < bound.clone() * 10u32, "x = {xv}: gap = {gap}, bound = {bound}");
    }
}

#[test]
fn polylog_derivative_relation_by_finite_differences() {
    // d/dx Li_n(e^{-x}) = -Li_{n-1}(e^{-x}) for n = 1, 2 at 10 points with
    // Re x > 0, via central differences at h = 2^{-prec/3}.
    let prec = Precision::new(192).unwrap();
    let p = prec.working();
    let ctx = BranchContext::new(Complex::one(p)).unwrap();
    let h = pow2(p, -(prec.bits() as i32) / 3);
    let tol = Float::with_val(p, &h * &h) * 1000u32;
    let mut s = 0.3f64;
    let mut t = 0.11f64;
    for _ in 0..10 {
        s = (s + 0.6180339887498949).fract();
        t = (t + 0.7548776662466927).fract();
        let x = Complex::with_val(p, 0.3 + 2.0 * s, 2.0 * t - 1.0);
        let xp = x.add(&Complex::from_real(h.clone()));
        let xm = x.sub(&Complex::from_real(h.clone()));
        for n in [1u32, 2] {
            let fp = li12_paper_branch(n, &xp, &ctx).unwrap().value;
            let fm = li12_paper_branch(n, &xm, &ctx).unwrap().value;
            let deriv = fp.sub(&fm).div_real(&Float::with_val(p, &h * 2u32)).unwrap();
            let lower = if n == 2 {
                li12_paper_branch(1, &x, &ctx).unwrap().value
            } else {
                let w = x.neg().exp().unwrap();
                li_nonpos(0, &w).unwrap()
            };
            let rel = deriv.add(&lower).abs()
                / Float::with_val(p, lower.abs().max(&Float::with_val(p, 1u32)));
            assert!(rel < tol, "n = {n}: rel = {rel}");
        }
    }
}

#[test]
fn parfrac_rates_fit_m_to_minus_n() {
    // |partial(n, x, M) - Li_{-n}(e^{-x})/n!| ~ C M^{-n}: fitted log-log
    // slope within +-0.2 of -n, for n = 1, 2, 3.
    let p = 320u32;
    let x = Complex::with_val(p, 1.0, 0.0);
    let w = x.neg().exp().unwrap();
    let ms = [200usize, 400, 800, 1600, 3200];
    for n in 1..=3usize {
        let target = li_nonpos(-(n as i64), &w)
            .unwrap()
            .div_real(&Float::with_val(p, Float::factorial(n as u32)))
            .unwrap();
        let mut logs = Vec::new();
        for &m in &ms {
            let part = parfrac_partial(n, &x, m).unwrap();
            let err = part.sub(&target).abs();
            logs.push(((m as f64).ln(), err.to_f64().ln()));
        }
        // least-squares slope
        let nn = logs.len() as f64;
        let sx: f64 = logs.iter().map(|t| t.0).sum();
        let sy: f64 = logs.iter().map(|t| t.1).sum();
        let sxx: f64 = logs.iter().map(|t| t.0 * t.0).sum();
        let sxy: f64 = logs.iter().map(|t| t.0 * t.1).sum();
        let slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
        assert!(
            (slope + n as f64).abs() < 0.2,
            "n = {n}: fitted slope {slope}"
        );
    }
}

#[test]
fn parfrac_pv_value_and_rate() {
    // n = 0: principal value tends to coth(x/2)/2 at rate 1/M.
    let p = 256u32;
    let x = Complex::with_val(p, 1.0, 0.0);
    let half = Complex::with_val(p, 0.5, 0.0);
    let want = half.coth().unwrap().mul_real(&Float::with_val(p, 0.5f32));
    let e1 = parfrac_partial(0, &x, 2000).unwrap().sub(&want).abs();
    let e2 = parfrac_partial(0, &x, 4000).unwrap().sub(&want).abs();
    assert!(e1 < Float::with_val(p, 1e-3));
    let ratio = Float::with_val(p, &e2 / &e1).to_f64();
    assert!((0.35..0.65).contains(&ratio), "PV rate ratio {ratio}");
}

#[test]
fn eulerian_row_against_closed_form() {
    // Worpitzky-style check: sum_k <n,k> C(x+k, n) = x^n at a few integers.
    let n = 6usize;
    for xv in 1..=4i64 {
        let mut acc = Rational::new();
        for k in 0..n as i64 {
            let e = qpoch_core::special::eulerian(n, k);
            // C(x+k, n) with x+k possibly < n -> zero
            let top = xv + k;
            if top < n as i64 {
                continue;
            }
            let bin = Integer::from(top).binomial(n as u32);
            acc += Rational::from(e * bin);
        }
        assert_eq!(acc, Rational::from(Integer::from(xv).pow(n as u32)));
    }
}
