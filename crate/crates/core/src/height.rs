//! Exact height values.
//!
//! Over `Q` a height is stored through its exact square (a nonnegative
//! rational), which keeps the Euclidean variant representable and makes every
//! comparison between heights of the same field an exact rational comparison.
//! Over `F_q(t)` heights are powers of `e`, stored as the integer exponent.
//! Comparisons never go through floating point; conversion to an outward
//! interval happens only at the bound-checking boundary.

use crate::interval::LogVal;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

#[derive(Clone, Debug, PartialEq)]
pub enum Height {
    /// Exact square of the height value (rational field).
    Sq(BigRational),
    /// Exponent k with value e^k (function field).
    Log(i64),
}

impl Height {
    pub fn one() -> Height {
        Height::Sq(BigRational::one())
    }

    pub fn one_ff() -> Height {
        Height::Log(0)
    }

    pub fn from_int(n: &BigInt) -> Height {
        let sq = BigRational::from_integer(n * n);
        Height::Sq(sq)
    }

    pub fn is_one(&self) -> bool {
        match self {
            Height::Sq(s) => s.is_one(),
            Height::Log(k) => *k == 0,
        }
    }

    pub fn sq(&self) -> Option<&BigRational> {
        match self {
            Height::Sq(s) => Some(s),
            Height::Log(_) => None,
        }
    }

    pub fn log_exponent(&self) -> Option<i64> {
        match self {
            Height::Sq(_) => None,
            Height::Log(k) => Some(*k),
        }
    }

    pub fn mul(&self, other: &Height) -> Height {
        match (self, other) {
            (Height::Sq(a), Height::Sq(b)) => Height::Sq(a * b),
            (Height::Log(a), Height::Log(b)) => Height::Log(a + b),
            _ => panic!("heights of different fields cannot be combined"),
        }
    }

    pub fn powu(&self, e: u32) -> Height {
        match self {
            Height::Sq(a) => {
                let mut acc = BigRational::one();
                for _ in 0..e {
                    acc *= a;
                }
                Height::Sq(acc)
            }
            Height::Log(k) => Height::Log(k * e as i64),
        }
    }

    /// Exact comparison; panics when the two heights live in different fields.
    pub fn cmp_exact(&self, other: &Height) -> Ordering {
        match (self, other) {
            (Height::Sq(a), Height::Sq(b)) => a.cmp(b),
            (Height::Log(a), Height::Log(b)) => a.cmp(b),
            _ => panic!("heights of different fields cannot be compared"),
        }
    }

    /// Outward interval for the natural log of the height.
    pub fn to_logval(&self) -> LogVal {
        match self {
            Height::Sq(s) => {
                assert!(!s.is_zero(), "height of a nonzero vector is positive");
                crate::interval::ln_sqrt_rational(s)
            }
            Height::Log(k) => {
                let v = *k as f64; // exact for desk-scale exponents
                LogVal { lo: v, hi: v }
            }
        }
    }

    /// Decimal rendering of the natural log, for certificates.
    pub fn log_decimal(&self) -> String {
        match self {
            Height::Sq(s) => {
                let lv = self.to_logval();
                let _ = s;
                format!("{:.12}", (lv.lo + lv.hi) / 2.0)
            }
            Height::Log(k) => format!("{k}"),
        }
    }

    /// The height value itself when it is an exact integer (max-norm heights
    /// of primitive integer vectors always are).
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            Height::Sq(s) => {
                if !s.is_integer() {
                    return None;
                }
                let n = s.numer();
                if n.is_negative() {
                    return None;
                }
                let r = n.sqrt();
                if &(&r * &r) == n {
                    Some(r)
                } else {
                    None
                }
            }
            Height::Log(_) => None,
        }
    }

    /// Checks `self <= bound` against the lower endpoint of the bound interval
    /// with a relative slack, so rounding can only make the check stricter.
    pub fn leq_bound(&self, bound: &LogVal, slack: f64) -> bool {
        let h = self.to_logval();
        h.hi <= bound.lo + slack * bound.lo.abs().max(1.0)
    }
}

/// Serialized form used inside certificates: exact data plus a decimal log.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize, PartialEq)]
pub struct HeightRepr {
    /// "sq" for rational heights (field `sq` holds the exact square) or
    /// "log" for function-field heights (field `k` holds the exponent).
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sq: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    /// Natural log as a decimal string (12 digits), informational only.
    pub log: String,
}

impl HeightRepr {
    pub fn of(h: &Height) -> HeightRepr {
        match h {
            Height::Sq(s) => HeightRepr {
                kind: "sq".into(),
                sq: Some(s.to_string()),
                k: None,
                log: h.log_decimal(),
            },
            Height::Log(k) => HeightRepr {
                kind: "log".into(),
                sq: None,
                k: Some(*k),
                log: h.log_decimal(),
            },
        }
    }

    pub fn to_height(&self) -> Option<Height> {
        match self.kind.as_str() {
            "sq" => {
                let s = self.sq.as_ref()?;
                let r: BigRational = s.parse().ok()?;
                Some(Height::Sq(r))
            }
            "log" => Some(Height::Log(self.k?)),
            _ => None,
        }
    }
}

impl PartialOrd for Height {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Height::Sq(a), Height::Sq(b)) => a.partial_cmp(b),
            (Height::Log(a), Height::Log(b)) => a.partial_cmp(b),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_extraction() {
        let h = Height::from_int(&BigInt::from(6));
        assert_eq!(h.as_integer(), Some(BigInt::from(6)));
        let root3 = Height::Sq(BigRational::from_integer(BigInt::from(3)));
        assert_eq!(root3.as_integer(), None);
    }

    #[test]
    fn product_and_power() {
        let a = Height::from_int(&BigInt::from(2));
        let b = Height::from_int(&BigInt::from(3));
        assert_eq!(a.mul(&b), Height::from_int(&BigInt::from(6)));
        assert_eq!(a.powu(3), Height::from_int(&BigInt::from(8)));
        assert_eq!(Height::Log(2).mul(&Height::Log(5)), Height::Log(7));
    }

    #[test]
    fn bound_check_uses_lower_endpoint() {
        let h = Height::from_int(&BigInt::from(2));
        let bound = LogVal::ln_u64(3);
        assert!(h.leq_bound(&bound, 1e-9));
        let tight = LogVal::ln_u64(2);
        // equality passes thanks to the relative slack
        assert!(h.leq_bound(&tight, 1e-9));
        let below = LogVal {
            lo: 0.5,
            hi: 0.5000001,
        };
        assert!(!h.leq_bound(&below, 1e-9));
    }
}
