//! Working-precision configuration shared by every numeric routine.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

/// log2(10)
pub(crate) const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Decimal working precision.
///
/// `digits` is the accuracy a caller is promised; `guard_digits` extra digits
/// are carried internally to absorb rounding in long compositions. Rounding
/// is always to nearest. A context is immutable once built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
    guard_digits: u32,
}

impl PrecisionContext {
    pub const MIN_DIGITS: u32 = 30;
    pub const DEFAULT_GUARD: u32 = 10;

    pub fn new(digits: u32) -> Result<Self> {
        Self::with_guard(digits, Self::DEFAULT_GUARD)
    }

    pub fn with_guard(digits: u32, guard_digits: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::Config(format!(
                "working precision must be at least {} digits, got {digits}",
                Self::MIN_DIGITS
            )));
        }
        Ok(Self {
            digits,
            guard_digits,
        })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    pub fn working_digits(&self) -> u32 {
        self.digits + self.guard_digits
    }

    /// Mantissa bits used for every value created in this context.
    pub fn prec(&self) -> u32 {
        digits_to_bits(self.working_digits())
    }

    /// Same guard, `extra` more promised digits.
    pub fn with_extra_digits(&self, extra: u32) -> Self {
        Self {
            digits: self.digits + extra,
            guard_digits: self.guard_digits,
        }
    }

    /// Context with `factor` times the promised digits (rounded up).
    pub fn scaled(&self, factor: f64) -> Self {
        let digits = ((self.digits as f64) * factor).ceil() as u32;
        Self {
            digits: digits.max(Self::MIN_DIGITS),
            guard_digits: self.guard_digits,
        }
    }

    pub fn float<T>(&self, value: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.prec(), value)
    }

    pub fn zero(&self) -> Float {
        Float::new(self.prec())
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.prec(), Constant::Pi)
    }

    pub fn two_pi(&self) -> Float {
        self.pi() * 2u32
    }

    /// 10^(-digits): the accuracy promised to callers.
    pub fn epsilon(&self) -> Float {
        pow10(self.prec(), -(self.digits as i64))
    }

    /// 10^(guard - digits): the rounding floor used in pass/fail verdicts.
    pub fn rounding_floor(&self) -> Float {
        pow10(
            self.prec(),
            self.guard_digits as i64 - self.digits as i64,
        )
    }
}

pub(crate) fn digits_to_bits(digits: u32) -> u32 {
    ((digits as f64) * LOG2_10).ceil() as u32 + 8
}

/// 10^e at the given precision.
pub fn pow10(prec: u32, e: i64) -> Float {
    let ten = Float::with_val(prec, 10);
    if e >= 0 {
        ten.pow(e as u32)
    } else {
        let p = ten.pow((-e) as u32);
        Float::with_val(prec, 1) / p
    }
}

/// Decimal exponent estimate, log10|x|, for nonzero finite values.
pub fn log10_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().log10() + (e as f64) * std::f64::consts::LOG10_2
}

/// Significant-digit decimal rendering, e.g. `48.0004817163156054254463598444`.
pub fn to_sig_string(x: &Float, sig: usize) -> String {
    if x.is_zero() {
        return "0".to_owned();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = log10_abs(x).floor() as i64;
    let s = x.to_string_radix(10, Some(sig));
    // rug renders as d.ddde±X; rewrite in positional form when the exponent
    // is modest so tables read like the printed ones.
    if (-5..=sig as i64).contains(&mag) {
        positional(&s).unwrap_or(s)
    } else {
        s
    }
}

fn positional(s: &str) -> Option<String> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (mantissa, exp) = match body.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits: String = format!("{int_part}{frac_part}");
    let point = int_part.len() as i64 + exp;
    let out = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits)
    } else if point as usize >= digits.len() {
        format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
    } else {
        let (a, b) = digits.split_at(point as usize);
        format!("{a}.{b}")
    };
    Some(if neg { format!("-{out}") } else { out })
}
