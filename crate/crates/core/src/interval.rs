//! Outward-rounded interval arithmetic in natural-log space.
//!
//! Field constants involve powers of pi, Gamma values and exponentials that
//! overflow `f64` long before the desk-scale dimensions do, so every constant
//! and every bound right-hand side is carried as an interval `[lo, hi]`
//! enclosing its natural logarithm. All operations round outward: a bound
//! comparison that passes against `lo` can never be a rounding artifact.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Interval enclosing the natural log of a positive real.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogVal {
    pub lo: f64,
    pub hi: f64,
}

fn dn(x: f64) -> f64 {
    x.next_down()
}

fn up(x: f64) -> f64 {
    x.next_up()
}

/// Widens a nearest-rounded result by a couple of ulps on each side.
fn widen(x: f64) -> LogVal {
    LogVal {
        lo: dn(dn(x)),
        hi: up(up(x)),
    }
}

impl LogVal {
    /// The log of 1, exactly.
    pub const ZERO: LogVal = LogVal { lo: 0.0, hi: 0.0 };

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Log of a positive `u64`, outward rounded. Exact for 1.
    pub fn ln_u64(n: u64) -> LogVal {
        assert!(n > 0);
        if n == 1 {
            return LogVal::ZERO;
        }
        widen((n as f64).ln())
    }

    /// Log of a positive big integer, outward rounded.
    pub fn ln_biguint(n: &BigUint) -> LogVal {
        assert!(!n.is_zero());
        let bits = n.bits();
        if bits <= 52 {
            return LogVal::ln_u64(n.to_u64().expect("fits"));
        }
        // n lies in [m * 2^shift, (m + 1) * 2^shift) with m on 52 bits.
        let shift = bits - 52;
        let m = (n >> shift).to_u64().expect("52 bits");
        let ln2 = ln_2();
        let s = shift as f64; // exact: shift < 2^53
        let lo = dn(dn((m as f64).ln()) + dn(s * ln2.lo));
        let hi = up(up(((m + 1) as f64).ln()) + up(s * ln2.hi));
        LogVal { lo, hi }
    }

    pub fn ln_bigint_abs(n: &BigInt) -> LogVal {
        LogVal::ln_biguint(n.abs().magnitude())
    }

    /// Log of a positive rational, outward rounded. Exact for 1.
    pub fn ln_rational(r: &BigRational) -> LogVal {
        assert!(r.is_positive(), "log of a non-positive rational");
        if r.is_integer() && r.numer().magnitude().to_u64() == Some(1) {
            return LogVal::ZERO;
        }
        LogVal::ln_bigint_abs(r.numer()).sub(&LogVal::ln_bigint_abs(r.denom()))
    }

    /// Interval for an exact rational exponent (the value is `e^r`).
    pub fn exp_rational(r: &BigRational) -> LogVal {
        if r.is_zero() {
            return LogVal::ZERO;
        }
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        widen(n / d)
    }

    pub fn add(&self, other: &LogVal) -> LogVal {
        // adding an exact zero endpoint needs no outward rounding
        let lo = if self.lo == 0.0 {
            other.lo
        } else if other.lo == 0.0 {
            self.lo
        } else {
            dn(self.lo + other.lo)
        };
        let hi = if self.hi == 0.0 {
            other.hi
        } else if other.hi == 0.0 {
            self.hi
        } else {
            up(self.hi + other.hi)
        };
        LogVal { lo, hi }
    }

    pub fn sub(&self, other: &LogVal) -> LogVal {
        let lo = if other.hi == 0.0 {
            self.lo
        } else {
            dn(self.lo - other.hi)
        };
        let hi = if other.lo == 0.0 {
            self.hi
        } else {
            up(self.hi - other.lo)
        };
        LogVal { lo, hi }
    }

    /// Multiplies by an exact rational (any sign), outward rounded.
    pub fn scale(&self, r: &BigRational) -> LogVal {
        if r.is_zero() || (self.lo == 0.0 && self.hi == 0.0) {
            return LogVal::ZERO;
        }
        if r.is_one() {
            return *self;
        }
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        let rl = dn(n / d);
        let rh = up(n / d);
        let candidates = [
            self.lo * rl,
            self.lo * rh,
            self.hi * rl,
            self.hi * rh,
        ];
        let lo = candidates.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = candidates.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        LogVal {
            lo: dn(lo),
            hi: up(hi),
        }
    }

    pub fn scale_u64(&self, n: u64) -> LogVal {
        self.scale(&BigRational::from_integer(BigInt::from(n)))
    }

    pub fn neg(&self) -> LogVal {
        LogVal {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    /// Interval around an approximately computed value, widened outward.
    pub fn approx(x: f64, ulp_steps: u32) -> LogVal {
        let mut lo = x;
        let mut hi = x;
        for _ in 0..ulp_steps {
            lo = dn(lo);
            hi = up(hi);
        }
        LogVal { lo, hi }
    }
}

/// ln 2, outward rounded.
pub fn ln_2() -> LogVal {
    LogVal {
        lo: dn(std::f64::consts::LN_2),
        hi: up(std::f64::consts::LN_2),
    }
}

/// ln pi, outward rounded.
pub fn ln_pi() -> LogVal {
    widen(std::f64::consts::PI.ln())
}

/// ln of a positive square root of a rational: (1/2) ln r.
pub fn ln_sqrt_rational(r: &BigRational) -> LogVal {
    LogVal::ln_rational(r).scale(&BigRational::new(BigInt::from(1), BigInt::from(2)))
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use num_traits::One;

    #[test]
    fn ln_one_is_exactly_zero() {
        assert_eq!(LogVal::ln_u64(1), LogVal::ZERO);
        assert_eq!(
            LogVal::ln_rational(&BigRational::one()),
            LogVal::ZERO
        );
    }

    #[test]
    fn ln_encloses_known_values() {
        let l = LogVal::ln_u64(10);
        assert!(l.lo <= 2.302585092994046 && 2.302585092994045 <= l.hi);
        assert!(l.width() < 1e-12);
    }

    #[test]
    fn big_integer_log_is_enclosed() {
        // 2^200: ln = 200 ln 2
        let n = BigUint::one() << 200;
        let l = LogVal::ln_biguint(&n);
        let expect = 200.0 * std::f64::consts::LN_2;
        assert!(l.lo <= expect && expect <= l.hi);
        assert!(l.width() / expect.abs() < 1e-12);
    }

    #[test]
    fn scaling_by_zero_gives_exact_zero() {
        let l = LogVal::ln_u64(7);
        assert_eq!(l.scale(&BigRational::zero()), LogVal::ZERO);
    }
}
