//! Stirling remainder: bound soundness on a sector sample and agreement with
//! Artin's series as an independent oracle.

use qpoch_core::arith::Complex;
use qpoch_core::loggamma::{artin_f1, stirling_fn};
use rug::Float;

/// Deterministic sample of points in the sector |arg x| <= 3 pi/4 with
/// 2 <= |x| <= 50, paired with orders N <= 8.
fn sector_samples(p: u32, count: usize) -> Vec<(Complex, u32)> {
    let mut out = Vec::with_capacity(count);
    // Low-discrepancy-ish walk over (radius, angle, order).
    let mut s = 0.5f64;
    let mut t = 0.137f64;
    for i in 0..count {
        s = (s + 0.6180339887498949).fract();
        t = (t + 0.7548776662466927).fract();
        let r = 2.0 + 48.0 * s;
        let ang = (2.0 * t - 1.0) * 0.75 * std::f64::consts::PI;
        let x = Complex::with_val(p, r * ang.cos(), r * ang.sin());
        out.push((x, (i % 9) as u32));
    }
    out
}

#[test]
fn bound_soundness_on_200_samples() {
    let p = 320;
    for (x, n) in sector_samples(p, 200) {
        let ev = stirling_fn(&x, n).unwrap();
        assert!(
            ev.value.abs() <= ev.tail_bound,
            "bound violated at x = {}+{}i, N = {n}: |f_N| = {}, bound = {}",
            x.re.to_f64(),
            x.im.to_f64(),
            ev.value.abs(),
            ev.tail_bound
        );
    }
}

#[test]
fn artin_agreement_on_20_samples() {
    // |arg x| <= pi/2, 2 <= |x| <= 50, f_1 against 1e5 Artin terms.
    let p = 256;
    let mut s = 0.21f64;
    let mut t = 0.77f64;
    let tol = Float::with_val(p, 1e-12);
    for _ in 0..20 {
        s = (s + 0.6180339887498949).fract();
        t = (t + 0.7548776662466927).fract();
        let r = 2.0 + 48.0 * s;
        let ang = (2.0 * t - 1.0) * 0.5 * std::f64::consts::PI;
        let x = Complex::with_val(p, r * ang.cos(), r * ang.sin());
        let f = stirling_fn(&x, 1).unwrap().value;
        let a = artin_f1(&x, 100_000).unwrap();
        let gap = f.sub(&a).abs();
        assert!(
            gap < tol,
            "artin oracle disagrees at x = {}+{}i: {gap}",
            x.re.to_f64(),
            x.im.to_f64()
        );
    }
}
