//! Arbitrary-precision real and complex arithmetic on top of MPFR floats,
//! fundamental constants, and the branched logarithm used throughout.
//!
//! Reals are [`rug::Float`] values; complex numbers are pairs of floats at a
//! shared precision. All kernels compute with guard bits above the requested
//! precision and raise [`Error::NonFinite`] rather than letting a NaN or
//! infinity escape.

use crate::error::{Error, Result};
use rug::float::Constant;
use rug::ops::CompleteRound;
use rug::Float;

/// Guard bits added on top of every requested precision. Roundoff is absorbed
/// here; rigor for truncations comes from explicit tail bounds, not interval
/// arithmetic.
pub const GUARD_BITS: u32 = 32;

/// Stored capacity of the Euler-constant literal, in bits.
pub const EULER_GAMMA_CAPACITY_BITS: u32 = 4352;

/// Binary working precision of a computation.
///
/// Every value produced within one operation shares a single precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    bits: u32,
}

impl Precision {
    /// Requested precision in bits; at least 64.
    pub fn new(bits: u32) -> Result<Self> {
        if bits < 64 {
            return Err(Error::Precision(format!(
                "precision must be at least 64 bits, got {bits}"
            )));
        }
        Ok(Precision { bits })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Precision actually used by the kernels (requested + guard bits).
    pub fn working(&self) -> u32 {
        self.bits + GUARD_BITS
    }
}

/// An arbitrary-precision complex value. Both parts carry the same precision.
#[derive(Debug, Clone, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

/// 2^exp at the given raw precision.
pub fn pow2(prec: u32, exp: i32) -> Float {
    Float::with_val(prec, Float::i_exp(1, exp))
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        debug_assert_eq!(re.prec(), im.prec());
        Complex { re, im }
    }

    pub fn from_real(re: Float) -> Self {
        let prec = re.prec();
        Complex {
            re,
            im: Float::new(prec),
        }
    }

    pub fn with_val(prec: u32, re: f64, im: f64) -> Self {
        Complex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn zero(prec: u32) -> Self {
        Complex::with_val(prec, 0.0, 0.0)
    }

    pub fn one(prec: u32) -> Self {
        Complex::with_val(prec, 1.0, 0.0)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// True when the imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), (-&self.im).complete(self.prec()))
    }

    pub fn neg(&self) -> Self {
        let p = self.prec();
        Complex::new((-&self.re).complete(p), (-&self.im).complete(p))
    }

    pub fn add(&self, other: &Complex) -> Self {
        let p = self.prec().max(other.prec());
        Complex::new(
            Float::with_val(p, &self.re + &other.re),
            Float::with_val(p, &self.im + &other.im),
        )
    }

    pub fn sub(&self, other: &Complex) -> Self {
        let p = self.prec().max(other.prec());
        Complex::new(
            Float::with_val(p, &self.re - &other.re),
            Float::with_val(p, &self.im - &other.im),
        )
    }

    pub fn mul(&self, other: &Complex) -> Self {
        let p = self.prec().max(other.prec());
        let re = Float::with_val(p, &self.re * &other.re) - Float::with_val(p, &self.im * &other.im);
        let im = Float::with_val(p, &self.re * &other.im) + Float::with_val(p, &self.im * &other.re);
        Complex::new(Float::with_val(p, re), Float::with_val(p, im))
    }

    pub fn mul_real(&self, s: &Float) -> Self {
        let p = self.prec().max(s.prec());
        Complex::new(
            Float::with_val(p, &self.re * s),
            Float::with_val(p, &self.im * s),
        )
    }

    pub fn div(&self, other: &Complex) -> Result<Self> {
        let p = self.prec().max(other.prec());
        let den = Float::with_val(p, other.re.square_ref())
            + Float::with_val(p, other.im.square_ref());
        let den = Float::with_val(p, den);
        if den.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        let re = Float::with_val(p, &self.re * &other.re) + Float::with_val(p, &self.im * &other.im);
        let im = Float::with_val(p, &self.im * &other.re) - Float::with_val(p, &self.re * &other.im);
        let out = Complex::new(
            Float::with_val(p, re / &den),
            Float::with_val(p, im / &den),
        );
        check_finite(out, "complex division")
    }

    pub fn div_real(&self, s: &Float) -> Result<Self> {
        if s.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        let p = self.prec().max(s.prec());
        let out = Complex::new(
            Float::with_val(p, &self.re / s),
            Float::with_val(p, &self.im / s),
        );
        check_finite(out, "division by real")
    }

    pub fn recip(&self) -> Result<Self> {
        Complex::one(self.prec()).div(self)
    }

    /// Modulus |z|.
    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    /// Principal argument in (-pi, pi].
    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    /// Complex exponential.
    pub fn exp(&self) -> Result<Self> {
        let p = self.prec();
        let er = Float::with_val(p, self.re.exp_ref());
        let (s, c) = Float::with_val(p, &self.im).sin_cos(Float::new(p));
        let out = Complex::new(Float::with_val(p, &er * &c), Float::with_val(p, &er * &s));
        check_finite(out, "complex exp")
    }

    /// Principal logarithm: imaginary part in (-pi, pi].
    pub fn ln(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("log of zero".into()));
        }
        let p = self.prec();
        let out = Complex::new(Float::with_val(p, self.abs().ln_ref()), self.arg());
        check_finite(out, "principal log")
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Result<Self> {
        let p = self.prec();
        if self.is_zero() {
            return Ok(Complex::zero(p));
        }
        let r = Float::with_val(p, self.abs().sqrt_ref());
        let half_arg = Float::with_val(p, self.arg() / 2u32);
        let (s, c) = half_arg.sin_cos(Float::new(p));
        let out = Complex::new(Float::with_val(p, &r * &c), Float::with_val(p, &r * &s));
        check_finite(out, "principal sqrt")
    }

    /// Principal power z^w = exp(w log z).
    pub fn pow(&self, w: &Complex) -> Result<Self> {
        self.ln()?.mul(w).exp()
    }

    /// Integer power by binary exponentiation.
    pub fn powi(&self, n: i64) -> Result<Self> {
        let p = self.prec();
        if n == 0 {
            return Ok(Complex::one(p));
        }
        let mut base = if n < 0 { self.recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Complex::one(p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        check_finite(acc, "integer power")
    }

    pub fn sin(&self) -> Result<Self> {
        // sin(a+bi) = sin a cosh b + i cos a sinh b
        let p = self.prec();
        let (sa, ca) = Float::with_val(p, &self.re).sin_cos(Float::new(p));
        let (shb, chb) = Float::with_val(p, &self.im).sinh_cosh(Float::new(p));
        let out = Complex::new(Float::with_val(p, &sa * &chb), Float::with_val(p, &ca * &shb));
        check_finite(out, "complex sin")
    }

    pub fn cos(&self) -> Result<Self> {
        let p = self.prec();
        let (sa, ca) = Float::with_val(p, &self.re).sin_cos(Float::new(p));
        let (shb, chb) = Float::with_val(p, &self.im).sinh_cosh(Float::new(p));
        let out = Complex::new(
            Float::with_val(p, &ca * &chb),
            -Float::with_val(p, &sa * &shb),
        );
        check_finite(out, "complex cos")
    }

    /// Hyperbolic cotangent. Errors at the poles z in i pi Z.
    pub fn coth(&self) -> Result<Self> {
        let p = self.prec();
        // sinh(a+bi) = sinh a cos b + i cosh a sin b
        let (sa, ca) = Float::with_val(p, &self.im).sin_cos(Float::new(p));
        let (sha, cha) = Float::with_val(p, &self.re).sinh_cosh(Float::new(p));
        let sinh = Complex::new(Float::with_val(p, &sha * &ca), Float::with_val(p, &cha * &sa));
        let cosh = Complex::new(Float::with_val(p, &cha * &ca), Float::with_val(p, &sha * &sa));
        let tol = pow2(p, -(p as i32) + 8);
        if sinh.abs() <= tol {
            return Err(Error::Domain(
                "coth evaluated at (or too near) a pole in i*pi*Z".into(),
            ));
        }
        cosh.div(&sinh)
    }
}

pub(crate) fn check_finite(z: Complex, what: &str) -> Result<Complex> {
    if z.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(format!("{what} produced a non-finite value")))
    }
}

pub(crate) fn check_finite_real(x: Float, what: &str) -> Result<Float> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite(format!("{what} produced a non-finite value")))
    }
}

/// pi at the requested precision.
pub fn const_pi(prec: Precision) -> Float {
    Float::with_val(prec.working(), Constant::Pi)
}

pub fn pi_raw(bits: u32) -> Float {
    Float::with_val(bits, Constant::Pi)
}

/// log(2 pi) at the given raw precision.
pub(crate) fn log_2pi(bits: u32) -> Float {
    let two_pi = Float::with_val(bits, Constant::Pi) * 2u32;
    Float::with_val(bits, two_pi.ln_ref())
}

/// Euler's constant, returned from a stored 4352-bit literal.
///
/// The literal is validated against an independent Euler-Maclaurin oracle in
/// the test suite. Requests beyond the stored capacity fail rather than
/// silently returning garbage digits.
pub fn const_euler_gamma(prec: Precision) -> Result<Float> {
    if prec.working() > EULER_GAMMA_CAPACITY_BITS {
        return Err(Error::Precision(format!(
            "euler gamma literal stores {} bits, {} requested",
            EULER_GAMMA_CAPACITY_BITS,
            prec.working()
        )));
    }
    let parsed = Float::parse(EULER_GAMMA_DIGITS)
        .expect("embedded euler gamma literal parses");
    Ok(Float::with_val(prec.working(), parsed))
}

/// Branch context: the pair (beta, cut convention) fixing the branches used
/// throughout. Cuts run along 2 pi i Z + beta R_{<=0}; values are real on the
/// positive ray.
#[derive(Debug, Clone)]
pub struct BranchContext {
    beta: Complex,
}

impl BranchContext {
    /// Requires Re beta > 0 (equivalently |arg beta| < pi/2) and beta != 0.
    pub fn new(beta: Complex) -> Result<Self> {
        if beta.is_zero() {
            return Err(Error::Domain("branch context requires beta != 0".into()));
        }
        if !beta.is_finite() {
            return Err(Error::NonFinite("branch context beta".into()));
        }
        if beta.re <= 0 {
            return Err(Error::Domain(
                "branch context requires |arg beta| < pi/2".into(),
            ));
        }
        Ok(BranchContext { beta })
    }

    pub fn beta(&self) -> &Complex {
        &self.beta
    }

    /// True when y lies on the cut beta*R_{<=0} within tolerance 2^(-prec+8).
    pub fn on_cut(&self, y: &Complex) -> bool {
        let u = match y.div(&self.beta) {
            Ok(u) => u,
            Err(_) => return true,
        };
        let p = u.prec();
        let tol = pow2(p, -(p as i32) + 8);
        let scale = Float::with_val(p, 1u32) + u.abs();
        let lim = Float::with_val(p, &tol * &scale);
        let im_abs = Float::with_val(p, u.im.abs_ref());
        im_abs <= lim && u.re <= lim
    }
}

/// Logarithm with cut along beta*R_{<=0}, realized as
/// log(y/beta) + log(beta) with principal logs.
///
/// Real for y/beta > 0 with beta > 0, and analytic for y off the cut.
pub fn branched_log(y: &Complex, ctx: &BranchContext) -> Result<Complex> {
    if ctx.on_cut(y) {
        return Err(Error::Domain(
            "branched_log argument on the cut beta*R_{<=0}".into(),
        ));
    }
    let u = y.div(ctx.beta())?;
    let out = u.ln()?.add(&ctx.beta().ln()?);
    check_finite(out, "branched log")
}

// 1311 decimal digits (~4355 bits) of Euler's constant.
const EULER_GAMMA_DIGITS: &str = concat!(
    "5.7721566490153286060651209008240243104215933593992359880576723488486772677766467093694706329174",
    "674951463144724980708248096050401448654283622417399764492353625350033374293733773767394279259525",
    "824709491600873520394816567085323315177661152862119950150798479374508570574002992135478614669402",
    "960432542151905877553526733139925401296742051375413954911168510280798423487758720503843109399736",
    "137255306088933126760017247953783675927135157722610273492913940798430103417771778088154957066107",
    "501016191663340152278935867965497252036212879226555953669628176388792726801324310104765059637039",
    "473949576389065729679296010090151251959509222435014093498712282479497471956469763185066761290638",
    "110518241974448678363808617494551698927923018773910729457815543160050021828440960537724342032854",
    "783670151773943987003023703395183286900015581939880427074115422278197165230110735658339673487176",
    "504919418123000406546931429992977795693031005030863034185698032310836916400258929708909854868257",
    "773642882539549258736295961332985747393023734388470703702844129201664178502487333790805627549984",
    "345907616431671031467107223700218107450444186647591348036690255324586254422253451813879124345735",
    "013612977822782881489459098638460062931694718871495875254923664935204732436410972682761608775950",
    "8809512620840454447799229915724829251625127842765965708321461030e-1",
);
