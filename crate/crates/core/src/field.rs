//! Exact arithmetic over the two supported global fields.
//!
//! [`Rationals`] is `Q` backed by arbitrary-precision reduced fractions;
//! [`FqT`] is the rational function field `F_q(t)` for an odd prime `q`,
//! carried as reduced ratios of polynomials with a monic denominator. All
//! higher layers are generic over the [`Field`] trait, which bundles the
//! arithmetic with the canonicalization and height hooks that depend on the
//! field's place structure.

use crate::height::Height;
use crate::interval::LogVal;
use crate::linalg::Matrix;
use crate::Error;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::hash::Hash;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldKind {
    Rational,
    FunctionField { q: u64 },
}

/// Numeric invariants of the field consumed by the constant evaluators.
///
/// For `Q`: degree 1, discriminant 1, one real embedding, two roots of unity.
/// For `F_q(t)`: genus 0, effective degree 1, `q + 1` points on the projective
/// line, class number 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldDescriptor {
    pub kind: FieldKind,
}

impl FieldDescriptor {
    pub fn is_rational(&self) -> bool {
        matches!(self.kind, FieldKind::Rational)
    }

    pub fn q(&self) -> Option<u64> {
        match self.kind {
            FieldKind::Rational => None,
            FieldKind::FunctionField { q } => Some(q),
        }
    }

    /// 1 over a number field, 0 over a function field.
    pub fn delta(&self) -> u32 {
        if self.is_rational() {
            1
        } else {
            0
        }
    }

    pub fn degree(&self) -> u64 {
        1
    }

    pub fn genus(&self) -> u64 {
        0
    }

    pub fn discriminant_abs(&self) -> u64 {
        1
    }

    pub fn real_embeddings(&self) -> u32 {
        1
    }

    pub fn complex_pairs(&self) -> u32 {
        0
    }

    pub fn roots_of_unity(&self) -> u64 {
        2
    }

    pub fn effective_degree(&self) -> u64 {
        1
    }

    /// Number of points of the underlying curve over the constant field.
    pub fn curve_points(&self) -> Option<u64> {
        self.q().map(|q| q + 1)
    }

    pub fn class_number(&self) -> u64 {
        1
    }
}

/// A global field with exact arithmetic.
///
/// Values are immutable after construction; the context object itself is
/// cheap to clone and carries everything needed to interpret an element
/// (for `F_q(t)` that is the characteristic `q`). Elements of different
/// contexts must not be mixed; all constructors in the crate build every
/// element of a computation from a single context.
pub trait Field: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + 'static;

    fn descriptor(&self) -> FieldDescriptor;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
    fn parse_elem(&self, s: &str) -> Result<Self::Elem, Error>;
    fn render_elem(&self, a: &Self::Elem) -> String;

    /// Canonical primitive representative of a nonzero vector: denominators
    /// cleared, content one, leading nonzero coordinate normalized (positive
    /// over `Q`, monic over `F_q(t)`). `None` for the zero vector.
    fn primitive_vector(&self, v: &[Self::Elem]) -> Option<Vec<Self::Elem>>;

    /// Max-norm height `H`. `H(0) = 1` by convention: heights are projective
    /// and nothing in the pipelines evaluates a height at the origin.
    fn height_max(&self, v: &[Self::Elem]) -> Height;

    /// Euclidean-at-infinity height variant; coincides with `H` over a
    /// function field, which has no archimedean places.
    fn height_euclid(&self, v: &[Self::Elem]) -> Height;

    /// Shell index of a nonzero vector: max-abs of the primitive
    /// representative over `Q`, max degree over `F_q(t)`.
    fn vector_shell(&self, v: &[Self::Elem]) -> u64;

    /// Height value of shell index `s` as an exact [`Height`].
    fn shell_height(&self, s: u64) -> Height;

    /// Largest shell whose height does not exceed `e^cap_log`.
    fn shell_cap(&self, cap_log: f64) -> u64;

    /// Zero test for v^T M v on the hot enumeration path. Semantically
    /// identical to testing the bilinear value directly; implementations may
    /// clear denominators once and work in machine integers.
    fn quad_zero_tester(
        &self,
        m: &Matrix<Self::Elem>,
    ) -> Box<dyn Fn(&[Self::Elem]) -> bool>
    where
        Self: Sized + 'static,
    {
        let k = self.clone();
        let m = m.clone();
        Box::new(move |v| {
            let n = v.len();
            let mut acc = k.zero();
            for i in 0..n {
                for j in 0..n {
                    acc = k.add(&acc, &k.mul(m.get(i, j), &k.mul(&v[i], &v[j])));
                }
            }
            k.is_zero(&acc)
        })
    }
}

// ---------------------------------------------------------------------------
// Q
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl Rationals {
    /// Primitive integer representative with content 1; sign of the first
    /// nonzero coordinate is positive.
    pub fn primitive_ints(&self, v: &[BigRational]) -> Option<Vec<BigInt>> {
        if v.iter().all(|x| x.is_zero()) {
            return None;
        }
        let mut l = BigInt::one();
        for x in v {
            l = l.lcm(x.denom());
        }
        let mut ints: Vec<BigInt> = v
            .iter()
            .map(|x| x.numer() * (&l / x.denom()))
            .collect();
        let mut g = BigInt::zero();
        for y in &ints {
            g = g.gcd(y);
        }
        if g.is_zero() {
            return None;
        }
        for y in ints.iter_mut() {
            *y = &*y / &g;
        }
        let flip = ints
            .iter()
            .find(|y| !y.is_zero())
            .map(|y| y.is_negative())
            .unwrap_or(false);
        if flip {
            for y in ints.iter_mut() {
                *y = -&*y;
            }
        }
        Some(ints)
    }
}

impl Field for Rationals {
    type Elem = BigRational;

    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            kind: FieldKind::Rational,
        }
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn parse_elem(&self, s: &str) -> Result<BigRational, Error> {
        let t = s.trim();
        t.parse::<BigRational>()
            .map_err(|e| Error::parse(format!("bad rational {t:?}: {e}")))
    }

    fn render_elem(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn primitive_vector(&self, v: &[BigRational]) -> Option<Vec<BigRational>> {
        self.primitive_ints(v)
            .map(|ys| ys.into_iter().map(BigRational::from_integer).collect())
    }

    fn height_max(&self, v: &[BigRational]) -> Height {
        match self.primitive_ints(v) {
            None => Height::one(),
            Some(ys) => {
                let m = ys
                    .iter()
                    .map(|y| y.abs())
                    .max()
                    .expect("nonempty");
                Height::from_int(&m)
            }
        }
    }

    fn height_euclid(&self, v: &[BigRational]) -> Height {
        match self.primitive_ints(v) {
            None => Height::one(),
            Some(ys) => {
                let s: BigInt = ys.iter().map(|y| y * y).sum();
                Height::Sq(BigRational::from_integer(s))
            }
        }
    }

    fn vector_shell(&self, v: &[BigRational]) -> u64 {
        let ys = self.primitive_ints(v).expect("nonzero vector");
        ys.iter()
            .map(|y| {
                let a = y.abs();
                u64::try_from(&a).expect("shell fits in u64")
            })
            .max()
            .unwrap()
    }

    fn shell_height(&self, s: u64) -> Height {
        Height::from_int(&BigInt::from(s.max(1)))
    }

    fn shell_cap(&self, cap_log: f64) -> u64 {
        if cap_log < 0.0 {
            return 0;
        }
        // floor(e^cap) with a hair of forgiveness so that caps derived from
        // exact integer heights include their own shell.
        let v = cap_log.exp() * (1.0 + 1e-12);
        if v >= u64::MAX as f64 {
            u64::MAX
        } else {
            v.floor() as u64
        }
    }

    fn quad_zero_tester(
        &self,
        m: &Matrix<BigRational>,
    ) -> Box<dyn Fn(&[BigRational]) -> bool> {
        // clear denominators once: v^T M v = 0 iff v^T (dM) v = 0
        let n = m.rows();
        let mut den = BigInt::one();
        for e in m.as_vector() {
            den = den.lcm(e.denom());
        }
        let ints: Vec<BigInt> = m
            .as_vector()
            .iter()
            .map(|e| e.numer() * (&den / e.denom()))
            .collect();
        let small: Option<Vec<i128>> = ints.iter().map(|x| x.to_i128()).collect();
        Box::new(move |v| {
            // enumerated points are primitive integer vectors; fall back to
            // exact big arithmetic otherwise or on overflow risk
            let vi: Option<Vec<i128>> = v
                .iter()
                .map(|x| {
                    if x.denom().is_one() {
                        x.numer().to_i128()
                    } else {
                        None
                    }
                })
                .collect();
            if let (Some(ms), Some(vs)) = (&small, vi) {
                let bound_ok = vs.iter().all(|x| x.abs() < (1i128 << 40))
                    && ms.iter().all(|x| x.abs() < (1i128 << 40));
                if bound_ok {
                    let mut acc: i128 = 0;
                    for i in 0..n {
                        if vs[i] == 0 {
                            continue;
                        }
                        for j in 0..n {
                            acc += ms[i * n + j] * vs[i] * vs[j];
                        }
                    }
                    return acc == 0;
                }
            }
            let mut racc = BigRational::zero();
            for i in 0..n {
                for j in 0..n {
                    racc += BigRational::from_integer(ints[i * n + j].clone())
                        * &v[i]
                        * &v[j];
                }
            }
            racc.is_zero()
        })
    }
}

// ---------------------------------------------------------------------------
// GF(q)[t]: dense polynomial helpers
// ---------------------------------------------------------------------------

/// Dense univariate polynomials over the prime field `GF(q)`, little-endian
/// coefficient vectors with no trailing zeros (the zero polynomial is empty).
pub mod fq {
    pub type Poly = Vec<u64>;

    pub fn trim(p: &mut Poly) {
        while p.last() == Some(&0) {
            p.pop();
        }
    }

    pub fn is_zero(p: &Poly) -> bool {
        p.is_empty()
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn deg(p: &Poly) -> i64 {
        p.len() as i64 - 1
    }

    pub fn constant(q: u64, c: u64) -> Poly {
        let c = c % q;
        if c == 0 {
            vec![]
        } else {
            vec![c]
        }
    }

    pub fn one() -> Poly {
        vec![1]
    }

    pub fn add(q: u64, a: &Poly, b: &Poly) -> Poly {
        let mut r = vec![0u64; a.len().max(b.len())];
        for (i, slot) in r.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *slot = (x + y) % q;
        }
        trim(&mut r);
        r
    }

    pub fn neg(q: u64, a: &Poly) -> Poly {
        a.iter().map(|&c| (q - c) % q).collect()
    }

    pub fn sub(q: u64, a: &Poly, b: &Poly) -> Poly {
        add(q, a, &neg(q, b))
    }

    pub fn mul(q: u64, a: &Poly, b: &Poly) -> Poly {
        if is_zero(a) || is_zero(b) {
            return vec![];
        }
        let mut r = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + x * y) % q;
            }
        }
        trim(&mut r);
        r
    }

    pub fn mul_scalar(q: u64, a: &Poly, c: u64) -> Poly {
        let c = c % q;
        if c == 0 {
            return vec![];
        }
        let mut r: Poly = a.iter().map(|&x| x * c % q).collect();
        trim(&mut r);
        r
    }

    pub fn pow_scalar(q: u64, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        base %= q;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % q;
            }
            base = base * base % q;
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero scalar mod the prime q.
    pub fn inv_scalar(q: u64, c: u64) -> u64 {
        debug_assert!(c % q != 0);
        pow_scalar(q, c, q - 2)
    }

    /// Euclidean division: a = quo * b + rem with deg rem < deg b.
    pub fn divrem(q: u64, a: &Poly, b: &Poly) -> (Poly, Poly) {
        assert!(!is_zero(b), "division by the zero polynomial");
        let mut rem = a.clone();
        if rem.len() < b.len() {
            return (vec![], rem);
        }
        let mut quo = vec![0u64; rem.len() - b.len() + 1];
        let lead_inv = inv_scalar(q, *b.last().unwrap());
        while !is_zero(&rem) && rem.len() >= b.len() {
            let k = rem.len() - b.len();
            let c = rem.last().unwrap() * lead_inv % q;
            quo[k] = c;
            for (i, &bc) in b.iter().enumerate() {
                let idx = i + k;
                rem[idx] = (rem[idx] + q - c * bc % q) % q;
            }
            trim(&mut rem);
        }
        trim(&mut quo);
        (quo, rem)
    }

    pub fn make_monic(q: u64, a: &Poly) -> Poly {
        if is_zero(a) {
            return vec![];
        }
        mul_scalar(q, a, inv_scalar(q, *a.last().unwrap()))
    }

    /// Monic gcd.
    pub fn gcd(q: u64, a: &Poly, b: &Poly) -> Poly {
        let mut x = a.clone();
        let mut y = b.clone();
        while !is_zero(&y) {
            let (_, r) = divrem(q, &x, &y);
            x = y;
            y = r;
        }
        make_monic(q, &x)
    }

    pub fn lcm(q: u64, a: &Poly, b: &Poly) -> Poly {
        if is_zero(a) || is_zero(b) {
            return vec![];
        }
        let g = gcd(q, a, b);
        let (quo, _) = divrem(q, a, &g);
        make_monic(q, &mul(q, &quo, b))
    }

    pub fn eval(q: u64, p: &Poly, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in p.iter().rev() {
            acc = (acc * x + c) % q;
        }
        acc
    }

    /// Decodes the n-th polynomial in enumeration order: base-q digits of
    /// `code`, little-endian. Orders constants first, then degree 1, etc.
    pub fn decode(q: u64, mut code: u64) -> Poly {
        let mut p = vec![];
        while code > 0 {
            p.push(code % q);
            code /= q;
        }
        p
    }

    /// Total order used everywhere points over `F_q(t)` are sorted: by degree,
    /// then coefficients from the top down. Agrees with [`decode`] order.
    pub fn cmp(a: &Poly, b: &Poly) -> std::cmp::Ordering {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.iter().rev().cmp(b.iter().rev()))
    }

    pub fn render(p: &Poly) -> String {
        if is_zero(p) {
            return "0".into();
        }
        let mut parts = vec![];
        for (i, &c) in p.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let part = match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "t".into(),
                (1, c) => format!("{c}*t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}*t^{i}"),
            };
            parts.push(part);
        }
        parts.join("+")
    }

    pub fn parse(q: u64, s: &str) -> Result<Poly, String> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err("empty polynomial".into());
        }
        let mut terms: Vec<(bool, String)> = vec![];
        let mut cur = String::new();
        let mut sign = false;
        for (i, ch) in compact.chars().enumerate() {
            match ch {
                '+' | '-' if i > 0 => {
                    terms.push((sign, std::mem::take(&mut cur)));
                    sign = ch == '-';
                }
                '-' => sign = true,
                '+' => {}
                _ => cur.push(ch),
            }
        }
        terms.push((sign, cur));
        let mut acc: Poly = vec![];
        for (neg_term, term) in terms {
            if term.is_empty() {
                return Err(format!("dangling sign in {s:?}"));
            }
            let (coeff_str, var_str) = match term.find('t') {
                None => (term.as_str(), ""),
                Some(k) => (&term[..k], &term[k..]),
            };
            let coeff_str = coeff_str.trim_end_matches('*');
            let mut coeff: u64 = if coeff_str.is_empty() {
                1
            } else {
                coeff_str
                    .parse::<u64>()
                    .map_err(|_| format!("bad coefficient {coeff_str:?} in {s:?}"))?
            };
            coeff %= q;
            let exp: usize = if var_str.is_empty() {
                0
            } else if var_str == "t" {
                1
            } else {
                let e = var_str
                    .strip_prefix("t^")
                    .ok_or_else(|| format!("bad term {term:?} in {s:?}"))?;
                e.parse::<usize>()
                    .map_err(|_| format!("bad exponent in {term:?}"))?
            };
            let c = if neg_term { (q - coeff) % q } else { coeff };
            let mut mono = vec![0u64; exp + 1];
            mono[exp] = c;
            trim(&mut mono);
            acc = add(q, &acc, &mono);
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// F_q(t)
// ---------------------------------------------------------------------------

/// Element of `F_q(t)`: reduced ratio of polynomials, denominator monic.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FfElem {
    pub num: fq::Poly,
    pub den: fq::Poly,
}

/// The rational function field `F_q(t)`, q an odd prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FqT {
    q: u64,
}

impl FqT {
    pub fn new(q: u64) -> Result<FqT, Error> {
        if q == 2 {
            return Err(Error::parse("characteristic 2 unsupported"));
        }
        if q < 3 || !is_prime(q) {
            return Err(Error::parse(format!(
                "q = {q} is not an odd prime; prime-power fields are unsupported"
            )));
        }
        Ok(FqT { q })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Builds the canonical reduced element num/den.
    pub fn elem(&self, num: fq::Poly, den: fq::Poly) -> FfElem {
        assert!(!fq::is_zero(&den), "zero denominator");
        if fq::is_zero(&num) {
            return FfElem {
                num: vec![],
                den: fq::one(),
            };
        }
        let g = fq::gcd(self.q, &num, &den);
        let (mut n, _) = fq::divrem(self.q, &num, &g);
        let (mut d, _) = fq::divrem(self.q, &den, &g);
        // make the denominator monic
        let lead = *d.last().unwrap();
        if lead != 1 {
            let li = fq::inv_scalar(self.q, lead);
            n = fq::mul_scalar(self.q, &n, li);
            d = fq::mul_scalar(self.q, &d, li);
        }
        FfElem { num: n, den: d }
    }

    pub fn from_poly(&self, p: fq::Poly) -> FfElem {
        self.elem(p, fq::one())
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for FqT {
    type Elem = FfElem;

    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            kind: FieldKind::FunctionField { q: self.q },
        }
    }

    fn zero(&self) -> FfElem {
        FfElem {
            num: vec![],
            den: fq::one(),
        }
    }

    fn one(&self) -> FfElem {
        FfElem {
            num: fq::one(),
            den: fq::one(),
        }
    }

    fn from_i64(&self, n: i64) -> FfElem {
        let q = self.q as i64;
        let c = n.rem_euclid(q) as u64;
        FfElem {
            num: fq::constant(self.q, c),
            den: fq::one(),
        }
    }

    fn is_zero(&self, a: &FfElem) -> bool {
        fq::is_zero(&a.num)
    }

    fn add(&self, a: &FfElem, b: &FfElem) -> FfElem {
        let q = self.q;
        let n = fq::add(
            q,
            &fq::mul(q, &a.num, &b.den),
            &fq::mul(q, &b.num, &a.den),
        );
        let d = fq::mul(q, &a.den, &b.den);
        self.elem(n, d)
    }

    fn sub(&self, a: &FfElem, b: &FfElem) -> FfElem {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &FfElem) -> FfElem {
        FfElem {
            num: fq::neg(self.q, &a.num),
            den: a.den.clone(),
        }
    }

    fn mul(&self, a: &FfElem, b: &FfElem) -> FfElem {
        let q = self.q;
        self.elem(fq::mul(q, &a.num, &b.num), fq::mul(q, &a.den, &b.den))
    }

    fn inv(&self, a: &FfElem) -> Option<FfElem> {
        if fq::is_zero(&a.num) {
            None
        } else {
            Some(self.elem(a.den.clone(), a.num.clone()))
        }
    }

    fn parse_elem(&self, s: &str) -> Result<FfElem, Error> {
        let t = s.trim();
        let strip = |x: &str| -> String {
            let x = x.trim();
            if x.starts_with('(') && x.ends_with(')') {
                x[1..x.len() - 1].trim().to_string()
            } else {
                x.to_string()
            }
        };
        let (num_s, den_s) = match split_top_level_slash(t) {
            Some((a, b)) => (strip(a), strip(b)),
            None => (strip(t), "1".to_string()),
        };
        let num = fq::parse(self.q, &num_s).map_err(Error::parse)?;
        let den = fq::parse(self.q, &den_s).map_err(Error::parse)?;
        if fq::is_zero(&den) {
            return Err(Error::parse(format!("zero denominator in {t:?}")));
        }
        Ok(self.elem(num, den))
    }

    fn render_elem(&self, a: &FfElem) -> String {
        if a.den == fq::one() {
            fq::render(&a.num)
        } else {
            format!("({})/({})", fq::render(&a.num), fq::render(&a.den))
        }
    }

    fn primitive_vector(&self, v: &[FfElem]) -> Option<Vec<FfElem>> {
        let q = self.q;
        if v.iter().all(|x| fq::is_zero(&x.num)) {
            return None;
        }
        let mut l = fq::one();
        for x in v {
            l = fq::lcm(q, &l, &x.den);
        }
        let mut polys: Vec<fq::Poly> = v
            .iter()
            .map(|x| {
                let (scale, _) = fq::divrem(q, &l, &x.den);
                fq::mul(q, &x.num, &scale)
            })
            .collect();
        let mut g: fq::Poly = vec![];
        for p in &polys {
            g = fq::gcd(q, &g, p);
        }
        for p in polys.iter_mut() {
            let (div, _) = fq::divrem(q, p, &g);
            *p = div;
        }
        // normalize: first nonzero coordinate monic
        let lead = polys
            .iter()
            .find(|p| !fq::is_zero(p))
            .map(|p| *p.last().unwrap())
            .unwrap();
        if lead != 1 {
            let li = fq::inv_scalar(q, lead);
            for p in polys.iter_mut() {
                *p = fq::mul_scalar(q, p, li);
            }
        }
        Some(
            polys
                .into_iter()
                .map(|p| FfElem {
                    num: p,
                    den: fq::one(),
                })
                .collect(),
        )
    }

    fn height_max(&self, v: &[FfElem]) -> Height {
        match self.primitive_vector(v) {
            None => Height::one_ff(),
            Some(ps) => {
                let k = ps.iter().map(|p| fq::deg(&p.num)).max().unwrap();
                Height::Log(k.max(0))
            }
        }
    }

    fn height_euclid(&self, v: &[FfElem]) -> Height {
        self.height_max(v)
    }

    fn vector_shell(&self, v: &[FfElem]) -> u64 {
        let ps = self.primitive_vector(v).expect("nonzero vector");
        ps.iter().map(|p| fq::deg(&p.num)).max().unwrap().max(0) as u64
    }

    fn shell_height(&self, s: u64) -> Height {
        Height::Log(s as i64)
    }

    fn shell_cap(&self, cap_log: f64) -> u64 {
        if cap_log < 0.0 {
            0
        } else {
            (cap_log * (1.0 + 1e-12) + 1e-12).floor() as u64
        }
    }
}

fn split_top_level_slash(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            '/' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

/// Parses a field constant description into a context. Used by the CLI and by
/// certificate embedding.
pub fn field_logval_q(desc: &FieldDescriptor) -> LogVal {
    match desc.kind {
        FieldKind::Rational => LogVal::ZERO,
        FieldKind::FunctionField { q } => LogVal::ln_u64(q),
    }
}
