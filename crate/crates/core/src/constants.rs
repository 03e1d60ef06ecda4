//! Field constants entering the explicit height bounds.
//!
//! All values are carried as outward-rounded intervals of their natural logs
//! (see [`crate::interval`]); the composite constant controlling the main
//! pipeline overflows `f64` in value space already for moderate dimensions.
//! Over `Q` and genus-zero function fields several of these constants are
//! exactly 1; the evaluation keeps the pi-exponent and the rational mantissa
//! symbolic long enough that those cases come out as the exact zero interval.
//!
//! Conventions: the ball constant at argument 0 is defined to be 1 (it only
//! ever appears with exponent 0 or for rank-0 degeneracies), and all constants
//! are non-decreasing in their argument, which the tests check.

use crate::field::{FieldDescriptor, FieldKind};
use crate::interval::{ln_2, ln_pi, LogVal};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::Mutex;

/// Evaluator for the field constants, memoized and safe for concurrent use.
#[derive(Debug)]
pub struct Constants {
    desc: FieldDescriptor,
    memo: Mutex<HashMap<MemoKey, LogVal>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum MemoKey {
    BallB(u64),
    SiegelC(u64),
    NonvanishA(u64),
    GenusE(u64),
    TMain(u64, u64),
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// Gamma(j/2 + 1) = m * pi^(s/2) with m rational and s in {0, 1}.
fn gamma_half_plus_one(j: u64) -> (BigRational, u32) {
    if j % 2 == 0 {
        let u = j / 2;
        (BigRational::from_integer(factorial(u)), 0)
    } else {
        let u = (j - 1) / 2;
        // Gamma(u + 3/2) = (2u+2)! / (4^(u+1) (u+1)!) * sqrt(pi)
        let num = factorial(2 * u + 2);
        let den = BigInt::from(4).pow(u as u32 + 1) * factorial(u + 1);
        (BigRational::new(num, den), 1)
    }
}

impl Constants {
    pub fn new(desc: FieldDescriptor) -> Constants {
        Constants {
            desc,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.desc
    }

    fn memoized(&self, key: MemoKey, f: impl FnOnce() -> LogVal) -> LogVal {
        if let Some(v) = self.memo.lock().unwrap().get(&key) {
            return *v;
        }
        let v = f();
        self.memo.lock().unwrap().insert(key, v);
        v
    }

    /// log of the field characteristic constant q (function field only).
    pub fn ln_q(&self) -> LogVal {
        match self.desc.kind {
            FieldKind::Rational => LogVal::ZERO,
            FieldKind::FunctionField { q } => LogVal::ln_u64(q),
        }
    }

    /// Ball constant (number fields): 2 |D|^(1/2d) prod r_v(j)^(d_v/d).
    /// Over Q this is 2 pi^(-1/2) Gamma(j/2+1)^(1/j); the value at j = 1 is
    /// exactly 1. Defined as 1 at j = 0.
    pub fn ball_b(&self, j: u64) -> LogVal {
        self.memoized(MemoKey::BallB(j), || {
            if !self.desc.is_rational() || j == 0 {
                return LogVal::ZERO;
            }
            let (m, s) = gamma_half_plus_one(j);
            // ln B = ln 2 + (1/j) ln m + (s/(2j) - 1/2) ln pi
            let pi_exp = rat(s as i64, 2 * j as i64) - rat(1, 2);
            let mut acc = if j == 1 {
                // fold Gamma's rational part into the mantissa so the exact
                // cancellation at j = 1 is visible: B = 2m * pi^pi_exp
                let mant = BigRational::from_integer(BigInt::from(2)) * m;
                if mant.is_one() && pi_exp.is_zero() {
                    return LogVal::ZERO;
                }
                LogVal::ln_rational(&mant)
            } else {
                ln_2().add(&LogVal::ln_rational(&m).scale(&rat(1, j as i64)))
            };
            if !pi_exp.is_zero() {
                acc = acc.add(&ln_pi().scale(&pi_exp));
            }
            acc
        })
    }

    /// Genus constant (function fields): e^(g l / d); exactly 1 at genus 0.
    pub fn genus_e(&self, l: u64) -> LogVal {
        self.memoized(MemoKey::GenusE(l), || {
            let g = self.desc.genus();
            let d = self.desc.degree();
            LogVal::exp_rational(&rat((g * l) as i64, d as i64))
        })
    }

    /// Siegel constant: ((2/pi)^(r2) |D|)^(l/2d) over a number field,
    /// exp((g - 1 + m) l / m) over a function field. Exactly 1 over Q and
    /// over genus-zero function fields.
    pub fn siegel_c(&self, l: u64) -> LogVal {
        self.memoized(MemoKey::SiegelC(l), || match self.desc.kind {
            FieldKind::Rational => {
                let r2 = self.desc.complex_pairs() as i64;
                let disc = self.desc.discriminant_abs();
                let mut inner = LogVal::ZERO;
                if r2 > 0 {
                    inner = inner.add(&ln_2().sub(&ln_pi()).scale(&rat(r2, 1)));
                }
                if disc != 1 {
                    inner = inner.add(&LogVal::ln_u64(disc));
                }
                inner.scale(&rat(l as i64, 2 * self.desc.degree() as i64))
            }
            FieldKind::FunctionField { .. } => {
                let g = self.desc.genus() as i64;
                let m = self.desc.effective_degree() as i64;
                LogVal::exp_rational(&(rat(g - 1 + m, m) * rat(l as i64, 1)))
            }
        })
    }

    /// Point-count term entering the nonvanishing constant over function
    /// fields.
    pub fn count_r(&self, j: u64) -> f64 {
        let q = self.desc.q().expect("function field") as f64;
        let n = q + 1.0;
        let h = self.desc.class_number() as f64;
        let base = (j as f64 - q + 2.0) * h * n.sqrt();
        (n - 1.0) / 2.0 * base.powf(1.0 / (n - 1.0)) + h * (n - 1.0) * n.sqrt()
    }

    /// Nonvanishing constant: over Q, 1 for j = 1 and j sqrt(2) for j >= 2;
    /// over F_q(t), 1 for j < q and e^(R(j)) otherwise.
    pub fn nonvanish_a(&self, j: u64) -> LogVal {
        self.memoized(MemoKey::NonvanishA(j), || {
            assert!(j >= 1, "constant defined for positive arguments");
            match self.desc.kind {
                FieldKind::Rational => {
                    if j < self.desc.roots_of_unity() {
                        return LogVal::ZERO;
                    }
                    // (j sqrt(2^(r1) |D|))^(1/d)
                    let r1 = self.desc.real_embeddings() as i64;
                    let mut acc = LogVal::ln_u64(j);
                    acc = acc.add(&ln_2().scale(&rat(r1, 2)));
                    let disc = self.desc.discriminant_abs();
                    if disc != 1 {
                        acc = acc.add(&LogVal::ln_u64(disc).scale(&rat(1, 2)));
                    }
                    acc.scale(&rat(1, self.desc.degree() as i64))
                }
                FieldKind::FunctionField { q } => {
                    if j < q {
                        return LogVal::ZERO;
                    }
                    LogVal::approx(self.count_r(j), 16)
                }
            }
        })
    }

    /// The composite constant of the main small-zero bound, in log space.
    pub fn t_main(&self, l: u64, j: u64) -> LogVal {
        self.memoized(MemoKey::TMain(l, j), || {
            let a3 = self.nonvanish_a(j + 2).scale_u64(3);
            let a2 = self.nonvanish_a(2 * j).scale_u64(2);
            match self.desc.kind {
                FieldKind::Rational => {
                    // 27 * 2^((21l-21)/2) * l^((27l+51)/2) * C^(9l+14)
                    //    * B(l-1)^max(l,9) * A(j+2)^3 * A(2j)^2 * |D|^(9/2d)
                    let mut acc = LogVal::ln_u64(27);
                    acc = acc.add(&ln_2().scale(&rat(21 * l as i64 - 21, 2)));
                    acc = acc.add(&LogVal::ln_u64(l).scale(&rat(27 * l as i64 + 51, 2)));
                    acc = acc.add(&self.siegel_c(l).scale_u64(9 * l + 14));
                    acc = acc.add(&self.ball_b(l - 1).scale_u64(l.max(9)));
                    acc = acc.add(&a3).add(&a2);
                    let disc = self.desc.discriminant_abs();
                    if disc != 1 {
                        acc = acc.add(
                            &LogVal::ln_u64(disc)
                                .scale(&rat(9, 2 * self.desc.degree() as i64)),
                        );
                    }
                    acc
                }
                FieldKind::FunctionField { .. } => {
                    let g = self.desc.genus();
                    let d = self.desc.degree();
                    let mut acc = self
                        .ln_q()
                        .scale(&rat((18 * l as i64 * l as i64 - 27 * l as i64 + 18) * g as i64, d as i64));
                    acc = acc.add(&self.siegel_c(l).scale_u64(9 * l + 15));
                    acc = acc.add(&self.genus_e(l).scale_u64(9 * l + 15));
                    acc.add(&a3).add(&a2)
                }
            }
        })
    }

    /// Constant of the isotropic-chain bound.
    pub fn chain_a(&self, l: u64, n: u64, m: u64) -> LogVal {
        let e = l as i64 - m as i64 - 1;
        let e = e.max(0) as u64;
        match self.desc.kind {
            FieldKind::Rational => {
                let mut acc = ln_2().scale_u64((2 * m + 1) * e);
                acc = acc.add(&self.ball_b(e).scale_u64(2 * e));
                acc.add(&LogVal::ln_u64(n).scale_u64(2))
            }
            FieldKind::FunctionField { .. } => {
                let g = self.desc.genus();
                let d = self.desc.degree();
                self.ln_q().scale(&rat((e * e * g) as i64, d as i64))
            }
        }
    }

    /// Composite constant of the maximal-chain bound: chain_a * t_main(l, M+1)^2.
    pub fn chain_t1(&self, l: u64, mdeg: u64, n: u64, m: u64) -> LogVal {
        self.chain_a(l, n, m)
            .add(&self.t_main(l, mdeg + 1).scale_u64(2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FqT, Rationals};
    use crate::field::Field;

    fn q_consts() -> Constants {
        Constants::new(Rationals.descriptor())
    }

    fn ff_consts(q: u64) -> Constants {
        Constants::new(FqT::new(q).unwrap().descriptor())
    }

    #[test]
    fn ball_constant_at_one_is_exactly_one() {
        let c = q_consts();
        assert_eq!(c.ball_b(1), LogVal::ZERO);
    }

    #[test]
    fn ball_constant_at_two() {
        // 2/sqrt(pi) = 1.1283791670955126
        let c = q_consts();
        let b = c.ball_b(2);
        let expect = 2.0 / std::f64::consts::PI.sqrt();
        assert!(b.lo.exp() <= expect && expect <= b.hi.exp());
        assert!(b.hi.exp() - b.lo.exp() < 1e-12);
    }

    #[test]
    fn siegel_constant_is_exactly_one() {
        let c = q_consts();
        for l in 1..=10 {
            assert_eq!(c.siegel_c(l), LogVal::ZERO);
        }
        let c = ff_consts(3);
        for l in 1..=10 {
            assert_eq!(c.siegel_c(l), LogVal::ZERO);
            assert_eq!(c.genus_e(l), LogVal::ZERO);
        }
    }

    #[test]
    fn nonvanish_constant_over_q() {
        let c = q_consts();
        assert_eq!(c.nonvanish_a(1), LogVal::ZERO);
        for j in 2u64..=20 {
            let a = c.nonvanish_a(j);
            let expect = j as f64 * 2f64.sqrt();
            assert!(a.lo.exp() <= expect * (1.0 + 1e-13));
            assert!(expect * (1.0 - 1e-13) <= a.hi.exp());
            assert!(a.hi.exp() - a.lo.exp() < 1e-12, "width too large at {j}");
        }
    }

    #[test]
    fn nonvanish_constant_over_ff() {
        let c = ff_consts(3);
        assert_eq!(c.nonvanish_a(1), LogVal::ZERO);
        assert_eq!(c.nonvanish_a(2), LogVal::ZERO);
        let a3 = c.nonvanish_a(3);
        // R(3) = 1.5 * (2*2)^(1/3) + 6
        let expect = 1.5 * 4f64.powf(1.0 / 3.0) + 6.0;
        assert!(a3.lo <= expect && expect <= a3.hi);
    }

    #[test]
    fn main_constant_finite_in_log_space() {
        for c in [q_consts(), ff_consts(3), ff_consts(5)] {
            for l in 1..=10u64 {
                for j in 1..=8u64 {
                    let t = c.t_main(l, j);
                    assert!(t.is_finite(), "t_main({l},{j}) not finite");
                }
            }
        }
    }

    #[test]
    fn constants_non_decreasing() {
        let c = q_consts();
        for j in 1..12u64 {
            assert!(c.ball_b(j).hi <= c.ball_b(j + 1).hi + 1e-12);
            assert!(c.nonvanish_a(j).lo <= c.nonvanish_a(j + 1).hi);
            assert!(c.siegel_c(j).lo <= c.siegel_c(j + 1).hi);
        }
        let c = ff_consts(5);
        for j in 1..12u64 {
            assert!(c.nonvanish_a(j).lo <= c.nonvanish_a(j + 1).hi);
        }
    }
}
