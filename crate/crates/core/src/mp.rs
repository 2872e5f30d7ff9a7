//! Working-precision arithmetic: the precision budget, a complex type over
//! MPFR floats, and decimal formatting for reports.

use std::fmt;

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

/// Target accuracy and working precision for a computation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrecisionBudget {
    /// Target relative error of the critical values.
    pub target_rel_err: f64,
    /// Working precision in bits.
    pub bits: u32,
    /// Bits reserved for accumulated rounding.
    pub guard_bits: u32,
}

impl Default for PrecisionBudget {
    fn default() -> Self {
        Self {
            target_rel_err: 1e-15,
            bits: 128,
            guard_bits: 16,
        }
    }
}

impl PrecisionBudget {
    pub fn new(target_rel_err: f64, bits: u32, guard_bits: u32) -> Result<Self> {
        let budget = Self {
            target_rel_err,
            bits,
            guard_bits,
        };
        budget.validate()?;
        Ok(budget)
    }

    pub fn with_bits(bits: u32) -> Result<Self> {
        Self::new(Self::default().target_rel_err, bits, Self::default().guard_bits)
    }

    /// The working precision must be able to realize the target.
    pub fn validate(&self) -> Result<()> {
        if !(self.target_rel_err > 0.0 && self.target_rel_err.is_finite()) {
            return Err(Error::InvalidBudget(format!(
                "target relative error must be positive, got {}",
                self.target_rel_err
            )));
        }
        if self.bits <= self.guard_bits {
            return Err(Error::InvalidBudget(format!(
                "precision {} bits does not exceed guard bits {}",
                self.bits, self.guard_bits
            )));
        }
        if self.target_rel_err < self.rounding_unit() {
            return Err(Error::InvalidBudget(format!(
                "target {:e} is below 2^-(bits-guard) = {:e}",
                self.target_rel_err,
                self.rounding_unit()
            )));
        }
        Ok(())
    }

    /// 2^-(bits - guard): the relative rounding level after guard bits are spent.
    pub fn rounding_unit(&self) -> f64 {
        2f64.powi(-((self.bits - self.guard_bits) as i32))
    }

    pub fn doubled(&self) -> Self {
        Self {
            bits: self.bits * 2,
            ..*self
        }
    }

    /// Significant decimal digits carried by the working precision.
    pub fn decimal_digits(&self) -> usize {
        (((self.bits - self.guard_bits) as f64) * std::f64::consts::LOG10_2).floor() as usize
    }
}

pub fn float(prec: u32, v: impl Into<f64>) -> Float {
    Float::with_val(prec, v.into())
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn two_pi(prec: u32) -> Float {
    pi(prec) * 2u32
}

/// A complex number over MPFR floats sharing one precision.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        Self { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self::new(Float::new(prec), Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::new(float(prec, 1.0), Float::new(prec))
    }

    pub fn i(prec: u32) -> Self {
        Self::new(Float::new(prec), float(prec, 1.0))
    }

    pub fn real(re: Float) -> Self {
        let prec = re.prec();
        Self::new(re, Float::new(prec))
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Self::new(float(prec, re), float(prec, im))
    }

    /// `r * exp(i * theta)`.
    pub fn from_polar(r: &Float, theta: &Float) -> Self {
        let (s, c) = theta.clone().sin_cos(Float::new(theta.prec()));
        Self::new(c * r, s * r)
    }

    /// `i^n` for any integer `n`, exact.
    pub fn i_pow(prec: u32, n: i64) -> Self {
        match n.rem_euclid(4) {
            0 => Self::from_f64(prec, 1.0, 0.0),
            1 => Self::from_f64(prec, 0.0, 1.0),
            2 => Self::from_f64(prec, -1.0, 0.0),
            _ => Self::from_f64(prec, 0.0, -1.0),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(
            Float::with_val(self.prec(), &self.re + &o.re),
            Float::with_val(self.prec(), &self.im + &o.im),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(
            Float::with_val(self.prec(), &self.re - &o.re),
            Float::with_val(self.prec(), &self.im - &o.im),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec();
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        Self::new(re, im)
    }

    pub fn scale(&self, s: &Float) -> Self {
        Self::new(
            Float::with_val(self.prec(), &self.re * s),
            Float::with_val(self.prec(), &self.im * s),
        )
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), Float::with_val(self.prec(), -&self.im))
    }

    pub fn neg(&self) -> Self {
        Self::new(
            Float::with_val(self.prec(), -&self.re),
            Float::with_val(self.prec(), -&self.im),
        )
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        let p = self.prec();
        Self::new(
            Float::with_val(p, &self.re / &d),
            Float::with_val(p, -&self.im) / &d,
        )
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.recip())
    }

    pub fn exp(&self) -> Self {
        let r = Float::with_val(self.prec(), self.re.exp_ref());
        Self::from_polar(&r, &self.im)
    }

    pub fn powi(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Argument in (-pi, pi].
    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64();
        if im < 0.0 {
            write!(f, "{re:.12e} - {:.12e}i", -im)
        } else {
            write!(f, "{re:.12e} + {im:.12e}i")
        }
    }
}

/// Evaluate `sum c_n z^n` by Horner's rule.
pub fn horner(coefficients: &[Complex], z: &Complex) -> Complex {
    let prec = z.prec();
    let mut acc = Complex::zero(prec);
    for c in coefficients.iter().rev() {
        acc = acc.mul(z).add(c);
    }
    acc
}

/// `n!` as a float at the given precision.
pub fn factorial(prec: u32, n: u32) -> Float {
    Float::with_val(prec, Float::factorial(n))
}

/// Format a float with exactly `digits` significant decimal digits.
///
/// Values with decimal exponent in [-5, 15) print positionally, others in
/// scientific notation. Output is deterministic for a given value and digit count.
pub fn format_sig(x: &Float, digits: usize) -> String {
    let digits = digits.max(1);
    if x.is_zero() {
        return if digits > 1 {
            format!("0.{}", "0".repeat(digits - 1))
        } else {
            "0".to_string()
        };
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // mantissa string "d.ddd" and exponent from MPFR's own rounding
    let s = x.to_string_radix(10, Some(digits));
    let (mant, exp) = match s.find('e') {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i64>().unwrap_or(0)),
        None => (s.as_str(), 0),
    };
    let negative = mant.starts_with('-');
    let mant = mant.trim_start_matches('-');
    let all_digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    // position of the decimal point in `mant`
    let point = mant.find('.').unwrap_or(mant.len()) as i64;
    let exp10 = exp + point - 1;
    let mut body = all_digits;
    body.truncate(digits);
    while body.len() < digits {
        body.push('0');
    }
    let sign = if negative { "-" } else { "" };
    if (-5..15).contains(&exp10) {
        if exp10 >= 0 {
            let int_len = (exp10 + 1) as usize;
            if int_len >= body.len() {
                format!("{sign}{}{}", body, "0".repeat(int_len - body.len()))
            } else {
                format!("{sign}{}.{}", &body[..int_len], &body[int_len..])
            }
        } else {
            format!("{sign}0.{}{}", "0".repeat((-exp10 - 1) as usize), body)
        }
    } else if body.len() > 1 {
        format!("{sign}{}.{}e{}", &body[..1], &body[1..], exp10)
    } else {
        format!("{sign}{}e{}", body, exp10)
    }
}

/// Parse a decimal string produced by [`format_sig`].
pub fn parse_decimal(prec: u32, s: &str) -> Option<Float> {
    Float::parse(s).ok().map(|p| Float::with_val(prec, p))
}

/// `base^e` for a float base and integer exponent.
pub fn powi(base: &Float, e: i32) -> Float {
    Float::with_val(base.prec(), base.pow(e))
}
