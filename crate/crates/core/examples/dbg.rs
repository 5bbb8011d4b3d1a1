use qpoch_core::arith::*;
use qpoch_core::expansions::*;
use qpoch_core::identity::*;
use rug::{Float, Rational};

fn main() {
    let prec = Precision::new(1280).unwrap();
    let p = prec.working();
    let beta = Complex::from_real(Float::with_val(p, 1u32) / 16u32);
    let x = Complex::with_val(p, 3.0, 0.0);
    let y = x.mul(&beta);

    // oracle
    let tol = pow2(p, -(p as i32) + 16);
    let oracle = oracle_log_qpoch(&y, &beta, &tol).unwrap().log_value;

    // c1 series limit: head + sum to convergence (use regime_eval at a deep cutoff)
    let exp = regime_coefficients(&Rational::from(1), &Rational::from(420)).unwrap();
    let series = regime_eval(&exp, &x, &beta).unwrap().log_value;

    let delta = oracle.sub(&series);
    let rem = exact_remainder_c1(&Rational::from(3), &beta).unwrap();
    println!("delta = {:e}", delta.re.to_f64());
    println!("rem   = {:e}", rem.re.to_f64());
    let gap = delta.sub(&rem).abs();
    println!("|delta - rem| = {:e}", gap.to_f64());
    println!("rem magnitude log10 = {}", rem.abs().to_f64().log10());
}
