//! `qpoch`: evaluate log (e^{-y}; e^{-beta})_inf, verify the exact
//! identities, print regime coefficient tables, and run truncation-error
//! sweeps with CSV/JSON output.

use clap::{Args, Parser, Subcommand, ValueEnum};
use qpoch_lab::estimate::estimate_optimal;
use qpoch_lab::output::{self, KvTable};
use qpoch_lab::sweep::{sweep, SweepConfig, SweepRegime};
use qpoch_core::arith::{pow2, Complex, Precision};
use qpoch_core::error::Error;
use qpoch_core::expansions::{regime_coefficients, regime_eval, uniform_expansion};
use qpoch_core::identity::{
    artin_product_check, consequence_check, dedekind_check, identity_rhs, identity_rhs_pv,
    oracle_log_qpoch, theta_modular_check, IdentityReport, QPochEval,
};
use rug::{Float, Rational};
use std::io::Write;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(name = "qpoch", version, about = "q-Pochhammer evaluation laboratory")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct Common {
    /// Working precision in bits (QPOCH_DEFAULT_PREC overrides the default).
    #[arg(long)]
    prec: Option<u32>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output path (stdout when absent).
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Oracle,
    Identity,
    Pv,
    Uniform,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Dedekind,
    Theta,
    Artin,
    Consequence,
    Identity,
    ConvSeries,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Uniform,
    C0,
    CSmall,
    C1,
    CLarge,
}

impl RegimeArg {
    fn to_sweep(self) -> SweepRegime {
        match self {
            RegimeArg::Uniform => SweepRegime::Uniform,
            RegimeArg::C0 => SweepRegime::C0,
            RegimeArg::CSmall => SweepRegime::CSmall,
            RegimeArg::C1 => SweepRegime::C1,
            RegimeArg::CLarge => SweepRegime::CLarge,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate log (e^{-y}; e^{-beta})_inf by the oracle or an identity.
    Eval {
        /// y as `a`, `a+bi` or `a-bi`.
        #[arg(long)]
        y: String,
        /// beta as `a`, `a+bi` or `a-bi`; requires Re beta > 0.
        #[arg(long)]
        beta: String,
        #[arg(long, value_enum, default_value_t = Method::Identity)]
        method: Method,
        /// Stirling order N (identity/uniform methods).
        #[arg(long, default_value_t = 4)]
        order: u32,
        /// Symmetric truncation M of the n-sum (identity/pv methods).
        #[arg(long, default_value_t = 200)]
        trunc: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Verify one of the exact identities and print the residual.
    Verify {
        #[arg(long, value_enum)]
        check: CheckKind,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        /// Product/sum truncation where the check takes one.
        #[arg(long, default_value_t = 10_000)]
        m: usize,
        /// Stirling order for the identity check.
        #[arg(long, default_value_t = 4)]
        order: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Print a regime coefficient table (symbolic) or evaluate it at (x, beta).
    Expand {
        /// Scaling exponent c as `p/q`.
        #[arg(long)]
        c: String,
        /// Largest beta exponent kept, as `p/q`.
        #[arg(long = "max-exp")]
        max_exp: String,
        /// Emit the symbolic table (default when no x/beta given).
        #[arg(long, default_value_t = false)]
        symbolic: bool,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Truncation-error sweep against the oracle.
    Sweep {
        #[arg(long, value_enum)]
        regime: RegimeArg,
        /// Scaling exponent c as `p/q` (forced to 0 for c0 and 1 for c1).
        #[arg(long)]
        c: Option<String>,
        #[arg(long)]
        x: String,
        #[arg(long)]
        beta: String,
        #[arg(long = "max-order")]
        max_order: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Heuristic optimal-truncation estimates N* and R*.
    Estimate {
        #[arg(long, value_enum)]
        regime: RegimeArg,
        #[arg(long)]
        c: Option<String>,
        #[arg(long)]
        x: String,
        #[arg(long)]
        beta: String,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_real(s: &str, p: u32) -> Result<Float, Error> {
    let inc = Float::parse(s).map_err(|e| Error::Domain(format!("bad number '{s}': {e}")))?;
    Ok(Float::with_val(p, inc))
}

/// Complex literals: `a`, `a+bi`, `a-bi` with decimal a, b.
fn parse_complex(s: &str, p: u32) -> Result<Complex, Error> {
    let t = s.trim();
    if let Some(body) = t.strip_suffix('i') {
        // split at the last +/- that is not an exponent sign or leading sign
        let chars: Vec<char> = body.chars().collect();
        let mut split = None;
        for i in (1..chars.len()).rev() {
            let c = chars[i];
            if (c == '+' || c == '-') && chars[i - 1] != 'e' && chars[i - 1] != 'E' {
                split = Some(i);
                break;
            }
        }
        let i = split.ok_or_else(|| {
            Error::Domain(format!("complex literal '{s}' needs the form a+bi or a-bi"))
        })?;
        let re: String = chars[..i].iter().collect();
        let sign = chars[i];
        let im_digits: String = chars[i + 1..].iter().collect();
        let im_str = if im_digits.is_empty() {
            "1".to_string()
        } else {
            im_digits
        };
        let re = parse_real(re.trim(), p)?;
        let mut im = parse_real(im_str.trim(), p)?;
        if sign == '-' {
            im = -im;
        }
        Ok(Complex::new(re, im))
    } else {
        Ok(Complex::from_real(parse_real(t, p)?))
    }
}

fn parse_rational(s: &str) -> Result<Rational, Error> {
    Rational::from_str(s.trim()).map_err(|e| Error::Domain(format!("bad rational '{s}': {e}")))
}

fn default_prec() -> u32 {
    std::env::var("QPOCH_DEFAULT_PREC")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(256)
}

fn emit(common: &Common, text: String) -> Result<(), Error> {
    match &common.out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::File::create(path)
            .and_then(|mut f| f.write_all(text.as_bytes()))
            .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display()))),
    }
}

fn eval_table(ev: &QPochEval, bits: u32, certified: bool) -> KvTable {
    let mut t = KvTable::new();
    t.push("log_re", output::fmt_real(&ev.log_value.re, bits));
    t.push("log_im", output::fmt_real(&ev.log_value.im, bits));
    t.push(
        if certified { "certified_tail" } else { "heuristic_tail" },
        output::fmt_real(&ev.tail_bound, bits),
    );
    t.push("terms_used", ev.terms_used.to_string());
    t
}

fn report_table(name: &str, rep: &IdentityReport, bits: u32) -> KvTable {
    let mut t = KvTable::new();
    t.push("check", name.into());
    t.push("residual", output::fmt_real(&rep.residual, bits));
    t.push("certified_tail", output::fmt_real(&rep.certified_tail, bits));
    t.push("lhs", output::fmt_complex(&rep.lhs, bits));
    t.push("rhs", output::fmt_complex(&rep.rhs, bits));
    t
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.cmd {
        Cmd::Eval {
            y,
            beta,
            method,
            order,
            trunc,
            common,
        } => {
            let bits = common.prec.unwrap_or_else(default_prec);
            let prec = Precision::new(bits)?;
            let p = prec.working();
            let yv = parse_complex(&y, p)?;
            let bv = parse_complex(&beta, p)?;
            let (ev, certified) = match method {
                Method::Oracle => {
                    let tol = pow2(p, -(bits as i32));
                    (oracle_log_qpoch(&yv, &bv, &tol)?, true)
                }
                Method::Identity => (identity_rhs(&yv, &bv, order.max(1), trunc)?, true),
                Method::Pv => (identity_rhs_pv(&yv, &bv, trunc)?, true),
                Method::Uniform => (uniform_expansion(&yv, &bv, order.max(1))?, false),
            };
            let t = eval_table(&ev, bits, certified);
            emit(&common, render_kv(&t, common.format))
        }
        Cmd::Verify {
            check,
            beta,
            x,
            y,
            m,
            order,
            common,
        } => {
            let bits = common.prec.unwrap_or_else(default_prec);
            let prec = Precision::new(bits)?;
            let p = prec.working();
            let need = |o: &Option<String>, what: &str| -> Result<Complex, Error> {
                o.as_deref()
                    .ok_or_else(|| Error::Domain(format!("--{what} required for this check")))
                    .and_then(|s| parse_complex(s, p))
            };
            let (name, rep) = match check {
                CheckKind::Dedekind => ("dedekind", dedekind_check(&need(&beta, "beta")?)?),
                CheckKind::Theta => (
                    "theta",
                    theta_modular_check(&need(&x, "x")?, &need(&beta, "beta")?)?,
                ),
                CheckKind::Artin => ("artin", artin_product_check(&need(&x, "x")?, m)?),
                CheckKind::Consequence => (
                    "consequence",
                    consequence_check(&need(&y, "y")?, &need(&beta, "beta")?, m)?,
                ),
                CheckKind::Identity => {
                    let yv = need(&y, "y")?;
                    let bv = need(&beta, "beta")?;
                    let tol = pow2(p, -(bits as i32));
                    let oracle = oracle_log_qpoch(&yv, &bv, &tol)?;
                    let rhs = identity_rhs(&yv, &bv, order.max(1), m)?;
                    let rep = IdentityReport {
                        residual: rhs.log_value.sub(&oracle.log_value).abs(),
                        certified_tail: Float::with_val(p, &rhs.tail_bound + &oracle.tail_bound),
                        lhs: oracle.log_value,
                        rhs: rhs.log_value,
                    };
                    ("identity", rep)
                }
                CheckKind::ConvSeries => {
                    let xv = need(&x, "x")?;
                    if !xv.im.is_zero() {
                        return Err(Error::Domain("conv-series takes integer x".into()));
                    }
                    let xi = xv.re.to_f64();
                    if xi.fract() != 0.0 || xi < 2.0 {
                        return Err(Error::Domain("conv-series takes integer x >= 2".into()));
                    }
                    (
                        "conv-series",
                        qpoch_core::expansions::conv_series_check(xi as u32, &need(&beta, "beta")?)?,
                    )
                }
            };
            let t = report_table(name, &rep, bits);
            emit(&common, render_kv(&t, common.format))
        }
        Cmd::Expand {
            c,
            max_exp,
            symbolic,
            x,
            beta,
            common,
        } => {
            let bits = common.prec.unwrap_or_else(default_prec);
            let prec = Precision::new(bits)?;
            let p = prec.working();
            let cr = parse_rational(&c)?;
            let cutoff = parse_rational(&max_exp)?;
            let exp = regime_coefficients(&cr, &cutoff)?;
            let numeric = x.is_some() && beta.is_some();
            if symbolic || !numeric {
                let text = match common.format {
                    Format::Csv => exp.render_table(),
                    Format::Json => {
                        let mut s = exp.to_json();
                        s.push('\n');
                        s
                    }
                };
                return emit(&common, text);
            }
            let xv = parse_complex(x.as_deref().unwrap(), p)?;
            let bv = parse_complex(beta.as_deref().unwrap(), p)?;
            let ev = regime_eval(&exp, &xv, &bv)?;
            let t = eval_table(&ev, bits, false);
            emit(&common, render_kv(&t, common.format))
        }
        Cmd::Sweep {
            regime,
            c,
            x,
            beta,
            max_order,
            common,
        } => {
            let bits = common.prec.unwrap_or_else(default_prec);
            let prec = Precision::new(bits)?;
            let p = prec.working();
            let regime = regime.to_sweep();
            let cr = resolve_c(regime, c.as_deref())?;
            let cfg = SweepConfig {
                regime,
                c: cr,
                x: parse_real(&x, p)?,
                beta: parse_real(&beta, p)?,
                max_order,
                prec,
            };
            let rows = sweep(&cfg)?;
            let text = match common.format {
                Format::Csv => output::sweep_csv(&cfg, &rows),
                Format::Json => output::sweep_json(&cfg, &rows),
            };
            emit(&common, text)
        }
        Cmd::Estimate {
            regime,
            c,
            x,
            beta,
            common,
        } => {
            let bits = common.prec.unwrap_or_else(default_prec);
            let prec = Precision::new(bits)?;
            let p = prec.working();
            let regime = regime.to_sweep();
            let cr = resolve_c(regime, c.as_deref())?;
            let est = estimate_optimal(regime, &cr, &parse_real(&x, p)?, &parse_real(&beta, p)?, prec)?;
            let t = output::estimate_table(&est, bits);
            emit(&common, render_kv(&t, common.format))
        }
    }
}

fn resolve_c(regime: SweepRegime, c: Option<&str>) -> Result<Rational, Error> {
    match (regime, c) {
        (SweepRegime::C0, None) => Ok(Rational::new()),
        (SweepRegime::C1, None) => Ok(Rational::from(1)),
        (_, Some(s)) => parse_rational(s),
        (SweepRegime::Uniform, None) => Err(Error::Domain(
            "--c required for the uniform regime (y = x beta^c)".into(),
        )),
        _ => Err(Error::Domain("--c required for this regime".into())),
    }
}

fn render_kv(t: &KvTable, f: Format) -> String {
    match f {
        Format::Csv => t.csv(),
        Format::Json => t.json(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap prints help/version through the error path with success status
            let kind = e.kind();
            let _ = e.print();
            return if kind == clap::error::ErrorKind::DisplayHelp
                || kind == clap::error::ErrorKind::DisplayVersion
            {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Domain(_) => ExitCode::from(2),
                Error::Precision(_) | Error::Convergence(_) | Error::NonFinite(_) => {
                    ExitCode::from(3)
                }
            }
        }
    }
}
