//! Sign and base-10 log-magnitude scalars.
//!
//! Products of many small factors (decay ratios, reciprocal factorials)
//! leave the range of `f64` long before they stop being meaningful. A
//! [`LogScalar`] keeps the sign separately and the magnitude as `log10|x|`,
//! so multiplication is an addition and values like `1e-271` or `1e-600`
//! are represented without underflow.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul};

/// Smallest log10 magnitude that still converts to a normal `f64`.
pub const UNDERFLOW_LOG10: f64 = -307.0;

/// Largest log10 magnitude that still converts to a finite `f64`.
pub const OVERFLOW_LOG10: f64 = 308.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogScalar {
    sign: i8,
    log10: f64,
}

impl LogScalar {
    pub const ZERO: LogScalar = LogScalar {
        sign: 0,
        log10: f64::NEG_INFINITY,
    };

    pub const ONE: LogScalar = LogScalar { sign: 1, log10: 0.0 };

    /// Positive infinity; used as the "no bound available" sentinel.
    pub const INFINITY: LogScalar = LogScalar {
        sign: 1,
        log10: f64::INFINITY,
    };

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else if x.is_nan() {
            panic!("LogScalar::from_f64 called with NaN");
        } else {
            LogScalar {
                sign: if x > 0.0 { 1 } else { -1 },
                log10: x.abs().log10(),
            }
        }
    }

    /// Builds a scalar from a sign in {-1, 0, 1} and log10 of the magnitude.
    pub fn from_parts(sign: i8, log10: f64) -> Self {
        assert!((-1..=1).contains(&sign), "sign must be -1, 0 or 1");
        if sign == 0 || log10 == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            assert!(!log10.is_nan(), "log10 magnitude is NaN");
            LogScalar { sign, log10 }
        }
    }

    /// Positive value `exp(ln_value)`, from a natural-log magnitude.
    pub fn from_ln(ln_value: f64) -> Self {
        Self::from_parts(1, ln_value / std::f64::consts::LN_10)
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// log10 of the magnitude; `-inf` for zero.
    pub fn log10(&self) -> f64 {
        self.log10
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn is_finite(&self) -> bool {
        self.sign == 0 || self.log10.is_finite()
    }

    pub fn abs(self) -> Self {
        if self.sign == 0 {
            self
        } else {
            LogScalar { sign: 1, ..self }
        }
    }

    pub fn powi(self, k: i32) -> Self {
        if k == 0 {
            return Self::ONE;
        }
        if self.sign == 0 {
            return if k > 0 { Self::ZERO } else { Self::INFINITY };
        }
        let sign = if self.sign < 0 && k % 2 != 0 { -1 } else { 1 };
        LogScalar {
            sign,
            log10: self.log10 * k as f64,
        }
    }

    /// Plain `f64` value, or `None` when the magnitude is outside the normal
    /// range (below [`UNDERFLOW_LOG10`] or above [`OVERFLOW_LOG10`]).
    pub fn to_f64(&self) -> Option<f64> {
        if self.sign == 0 {
            return Some(0.0);
        }
        if self.log10 < UNDERFLOW_LOG10 || self.log10 > OVERFLOW_LOG10 {
            return None;
        }
        Some(self.sign as f64 * 10f64.powf(self.log10))
    }

    /// Plain value with underflow flushed to zero and overflow to infinity.
    pub fn to_f64_lossy(&self) -> f64 {
        match self.to_f64() {
            Some(v) => v,
            None if self.log10 < 0.0 => 0.0 * self.sign as f64,
            None => self.sign as f64 * f64::INFINITY,
        }
    }

    /// Mantissa in [1, 10) and decimal exponent, for display of values
    /// outside the `f64` range.
    pub fn mantissa_exponent(&self) -> Option<(f64, i64)> {
        if self.sign == 0 || !self.log10.is_finite() {
            return None;
        }
        let exp = self.log10.floor();
        let mut mant = 10f64.powf(self.log10 - exp);
        let mut exp = exp as i64;
        if mant >= 10.0 {
            mant /= 10.0;
            exp += 1;
        }
        Some((self.sign as f64 * mant, exp))
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Default for LogScalar {
    fn default() -> Self {
        Self::ZERO
    }
}

impl From<f64> for LogScalar {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl Mul for LogScalar {
    type Output = LogScalar;

    fn mul(self, rhs: Self) -> Self {
        if self.sign == 0 || rhs.sign == 0 {
            return Self::ZERO;
        }
        LogScalar {
            sign: self.sign * rhs.sign,
            log10: self.log10 + rhs.log10,
        }
    }
}

impl Mul<f64> for LogScalar {
    type Output = LogScalar;

    fn mul(self, rhs: f64) -> Self {
        self * LogScalar::from_f64(rhs)
    }
}

impl Div for LogScalar {
    type Output = LogScalar;

    fn div(self, rhs: Self) -> Self {
        assert!(rhs.sign != 0, "LogScalar division by zero");
        if self.sign == 0 {
            return Self::ZERO;
        }
        LogScalar {
            sign: self.sign * rhs.sign,
            log10: self.log10 - rhs.log10,
        }
    }
}

impl std::iter::Product for LogScalar {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ONE, |acc, x| acc * x)
    }
}

impl PartialOrd for LogScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        // Order by sign first, then by magnitude (reversed for negatives).
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Some(Ordering::Equal),
                1 => self.log10.partial_cmp(&other.log10),
                _ => other.log10.partial_cmp(&self.log10),
            },
            ord => Some(ord),
        }
    }
}

impl fmt::Display for LogScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == 0 {
            return write!(f, "0");
        }
        if self.log10 == f64::INFINITY {
            return write!(f, "{}inf", if self.sign < 0 { "-" } else { "" });
        }
        let (m, e) = self.mantissa_exponent().expect("finite nonzero");
        write!(f, "{m:.6}e{e}")
    }
}
