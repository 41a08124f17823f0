//! Signed real numbers stored as `(sign, ln|x|)`.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::Float;

/// A real number `sign * exp(ln_abs)` that neither overflows nor underflows
/// across the range of the banded transfer products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogScalar {
    sign: i8,
    ln_abs: f64,
}

impl LogScalar {
    pub const ZERO: LogScalar = LogScalar {
        sign: 0,
        ln_abs: f64::NEG_INFINITY,
    };
    pub const ONE: LogScalar = LogScalar {
        sign: 1,
        ln_abs: 0.0,
    };

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogScalar {
                sign: if x > 0.0 { 1 } else { -1 },
                ln_abs: x.abs().ln(),
            }
        }
    }

    /// Builds `sign * exp(ln_abs)`; a sign of zero yields zero.
    pub fn from_parts(sign: i8, ln_abs: f64) -> Self {
        if sign == 0 || ln_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogScalar {
                sign: sign.signum(),
                ln_abs,
            }
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Natural log of the magnitude; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        self.ln_abs
    }

    pub fn log10_abs(&self) -> f64 {
        self.ln_abs * core::f64::consts::LOG10_E
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Linear value; may be infinite or zero when out of `f64` range.
    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.ln_abs.exp()
        }
    }

    /// Linear value if it is finite and, unless the value is zero, nonzero.
    pub fn to_f64_checked(&self) -> Option<f64> {
        let x = self.to_f64();
        if x.is_finite() && (x != 0.0 || self.sign == 0) {
            Some(x)
        } else {
            None
        }
    }

    pub fn abs(&self) -> Self {
        LogScalar {
            sign: self.sign.abs(),
            ln_abs: self.ln_abs,
        }
    }

    pub fn sqrt(&self) -> Self {
        debug_assert!(self.sign >= 0);
        LogScalar {
            sign: self.sign,
            ln_abs: 0.5 * self.ln_abs,
        }
    }

    pub fn recip(&self) -> Self {
        LogScalar {
            sign: self.sign,
            ln_abs: -self.ln_abs,
        }
    }

    pub fn powi(&self, k: i32) -> Self {
        if k == 0 {
            return Self::ONE;
        }
        let sign = if k % 2 == 0 { self.sign.abs() } else { self.sign };
        LogScalar::from_parts(sign, self.ln_abs * f64::from(k))
    }

    pub fn scale(&self, x: f64) -> Self {
        *self * LogScalar::from_f64(x)
    }
}

impl Default for LogScalar {
    fn default() -> Self {
        Self::ZERO
    }
}

impl From<f64> for LogScalar {
    fn from(x: f64) -> Self {
        LogScalar::from_f64(x)
    }
}

impl Mul for LogScalar {
    type Output = LogScalar;
    fn mul(self, rhs: LogScalar) -> LogScalar {
        LogScalar::from_parts(self.sign * rhs.sign, self.ln_abs + rhs.ln_abs)
    }
}

impl Neg for LogScalar {
    type Output = LogScalar;
    fn neg(self) -> LogScalar {
        LogScalar {
            sign: -self.sign,
            ln_abs: self.ln_abs,
        }
    }
}

impl Add for LogScalar {
    type Output = LogScalar;
    fn add(self, rhs: LogScalar) -> LogScalar {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (big, small) = if self.ln_abs >= rhs.ln_abs {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let t = (small.ln_abs - big.ln_abs).exp();
        if big.sign == small.sign {
            LogScalar::from_parts(big.sign, big.ln_abs + t.ln_1p())
        } else if t == 1.0 {
            Self::ZERO
        } else {
            LogScalar::from_parts(big.sign, big.ln_abs + (-t).ln_1p())
        }
    }
}

impl Sub for LogScalar {
    type Output = LogScalar;
    fn sub(self, rhs: LogScalar) -> LogScalar {
        self + (-rhs)
    }
}

impl PartialOrd for LogScalar {
    fn partial_cmp(&self, other: &LogScalar) -> Option<Ordering> {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Some(Ordering::Equal),
                1 => self.ln_abs.partial_cmp(&other.ln_abs),
                _ => other.ln_abs.partial_cmp(&self.ln_abs),
            },
            o => Some(o),
        }
    }
}

impl fmt::Display for LogScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_f64_checked() {
            Some(x) => write!(f, "{x:e}"),
            None => {
                let s = if self.sign < 0 { "-" } else { "" };
                write!(f, "{s}10^{:.6}", self.log10_abs())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_is_additive_identity() {
        let x = LogScalar::from_f64(-3.5);
        assert_eq!(x + LogScalar::ZERO, x);
        assert_eq!((x - x).to_f64(), 0.0);
    }

    #[test]
    fn survives_beyond_f64_range() {
        let big = LogScalar::from_parts(1, 1000.0);
        let prod = big * big;
        assert!((prod.ln_abs() - 2000.0).abs() < 1e-12);
        assert!(prod.to_f64_checked().is_none());
        assert!(prod > big);
    }

    proptest! {
        #[test]
        fn arithmetic_matches_linear(a in -1e3f64..1e3, b in -1e3f64..1e3) {
            let (la, lb) = (LogScalar::from_f64(a), LogScalar::from_f64(b));
            let sum = (la + lb).to_f64();
            prop_assert!((sum - (a + b)).abs() <= 1e-12 * (a.abs() + b.abs()).max(1e-300));
            let prod = (la * lb).to_f64();
            prop_assert!((prod - a * b).abs() <= 1e-12 * (a * b).abs().max(1e-300));
            prop_assert_eq!(la.partial_cmp(&lb), a.partial_cmp(&b));
        }
    }
}
