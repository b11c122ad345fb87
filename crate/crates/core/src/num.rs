//! Exact rationals extended by `±∞`, plus the float bridges used for logarithms.

use alloc::format;
use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// A value in `ℝ ∪ {−∞, +∞}` with an exact rational finite part.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtReal {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtReal::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Rational> for ExtReal {
    fn from(r: Rational) -> Self {
        ExtReal::Finite(r)
    }
}

impl From<i64> for ExtReal {
    fn from(v: i64) -> Self {
        ExtReal::Finite(int(v))
    }
}

impl ExtReal {
    pub fn zero() -> Self {
        ExtReal::Finite(Rational::zero())
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        ExtReal::Finite(ratio(num, den))
    }

    /// Exact image of a float; `NaN` is rejected.
    pub fn from_f64(x: f64) -> Self {
        if x == f64::INFINITY {
            ExtReal::PosInf
        } else if x == f64::NEG_INFINITY {
            ExtReal::NegInf
        } else {
            ExtReal::Finite(lift(x))
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtReal::Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtReal::NegInf => f64::NEG_INFINITY,
            ExtReal::PosInf => f64::INFINITY,
            ExtReal::Finite(r) => to_f64(r),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            ExtReal::NegInf => ExtReal::PosInf,
            ExtReal::PosInf => ExtReal::NegInf,
            ExtReal::Finite(r) => ExtReal::Finite(-r),
        }
    }

    /// Sum, undefined for `+∞ + (−∞)`.
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        use ExtReal::*;
        match (self, other) {
            (PosInf, NegInf) | (NegInf, PosInf) => None,
            (PosInf, _) | (_, PosInf) => Some(PosInf),
            (NegInf, _) | (_, NegInf) => Some(NegInf),
            (Finite(a), Finite(b)) => Some(Finite(a + b)),
        }
    }

    /// `p·x` with `0·(±∞) = 0`.
    pub fn times_index(&self, p: usize) -> Self {
        if p == 0 {
            return ExtReal::zero();
        }
        match self {
            ExtReal::Finite(r) => ExtReal::Finite(r * int(p as i64)),
            other => other.clone(),
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => f.write_str("-inf"),
            ExtReal::PosInf => f.write_str("inf"),
            ExtReal::Finite(r) => f.write_str(&format_rational(r)),
        }
    }
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rational value of a finite float.
pub fn lift(x: f64) -> Rational {
    assert!(x.is_finite(), "cannot lift a non-finite float");
    Rational::from_float(x).expect("finite float")
}

pub fn to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() && (v != 0.0 || r.is_zero()) {
            return v;
        }
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let l = ln_abs(r);
    sign * libm::exp(l)
}

/// `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return libm::log(x.to_f64().unwrap_or(f64::INFINITY).abs());
    }
    let shift = bits - 64;
    let top: BigInt = x.abs() >> (shift as usize);
    libm::log(top.to_f64().unwrap_or(0.0)) + shift as f64 * core::f64::consts::LN_2
}

fn ln_abs(r: &Rational) -> f64 {
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

/// Natural logarithm of a positive rational, robust for values far outside the `f64` range.
pub fn ln_rational(r: &Rational) -> f64 {
    assert!(r.is_positive(), "logarithm of a non-positive value");
    if let Some(v) = r.to_f64() {
        if v.is_normal() {
            return libm::log(v);
        }
    }
    ln_abs(r)
}

/// Rational image of `exp(x)`, keeping the binary exponent exact so large values do not overflow.
pub fn exp_to_rational(x: f64) -> Rational {
    if x.abs() < 700.0 {
        return lift(libm::exp(x));
    }
    let k = libm::floor(x / core::f64::consts::LN_2);
    let rest = x - k * core::f64::consts::LN_2;
    let mantissa = lift(libm::exp(rest));
    let k = k as i64;
    let two = BigInt::from(2);
    if k >= 0 {
        mantissa * Rational::from_integer(num_traits::pow(two, k as usize))
    } else {
        mantissa / Rational::from_integer(num_traits::pow(two, (-k) as usize))
    }
}

/// `exp` on the extended line with `exp(−∞) = 0`.
pub fn exp_ext(x: &ExtReal) -> ExtReal {
    match x {
        ExtReal::NegInf => ExtReal::zero(),
        ExtReal::PosInf => ExtReal::PosInf,
        ExtReal::Finite(r) if r.is_zero() => ExtReal::Finite(Rational::one()),
        ExtReal::Finite(r) => ExtReal::Finite(exp_to_rational(to_f64(r))),
    }
}

/// `log` on `[0, +∞]` with `log 0 = −∞`; the result is the exact image of the rounded float.
pub fn ln_ext(x: &ExtReal) -> ExtReal {
    match x {
        ExtReal::PosInf => ExtReal::PosInf,
        ExtReal::NegInf => panic!("logarithm of −∞"),
        ExtReal::Finite(r) if r.is_zero() => ExtReal::NegInf,
        ExtReal::Finite(r) if r.is_one() => ExtReal::zero(),
        ExtReal::Finite(r) => ExtReal::Finite(lift(ln_rational(r))),
    }
}

/// Error produced when a number literal cannot be read.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberSyntax(pub String);

impl fmt::Display for NumberSyntax {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid number literal `{}`", self.0)
    }
}

/// Reads `inf`, `-inf`, integers, `p/q` fractions and decimals with optional exponent, all exactly.
pub fn parse_ext(text: &str) -> Result<ExtReal, NumberSyntax> {
    let s = text.trim();
    let err = || NumberSyntax(text.to_string());
    match s.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" | "+infinity" => return Ok(ExtReal::PosInf),
        "-inf" | "-infinity" => return Ok(ExtReal::NegInf),
        _ => {}
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_decimal(n.trim()).ok_or_else(err)?;
        let d = parse_decimal(d.trim()).ok_or_else(err)?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(ExtReal::Finite(n / d));
    }
    parse_decimal(s).map(ExtReal::Finite).ok_or_else(err)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = match digits.split_once('.') {
        Some((w, f)) => (w, f),
        None => (digits, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut all = String::from(whole);
    all.push_str(frac);
    let magnitude = BigInt::parse_bytes(all.as_bytes(), 10)?;
    let value = BigInt::from_biguint(
        if negative { Sign::Minus } else { Sign::Plus },
        magnitude.magnitude().clone(),
    );
    let shift = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    Some(if shift >= 0 {
        Rational::from_integer(value * scale)
    } else {
        Rational::new(value, scale)
    })
}
