//! Seeded random instance generation for the verification suites.
//!
//! The library's algorithms are fully deterministic; randomness exists only
//! here, driven by an explicit seed, so every suite run is reproducible.

use crate::field::{fq, Field, FqT, Rationals};
use crate::heights::Subspace;
use crate::linalg::Matrix;
use crate::polyalg::MultiPoly;
use crate::quadspace::QuadForm;
use crate::smallzeros::AvoidanceSystem;
use num_bigint::BigInt;
use num_rational::BigRational;

/// splitmix64: tiny, seedable, and good enough for test-corpus generation.
#[derive(Clone, Debug)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in 0..n.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        self.next_u64() % n
    }

    /// Uniform integer in -a..=a.
    pub fn int_sym(&mut self, a: u64) -> i64 {
        self.below(2 * a + 1) as i64 - a as i64
    }

    /// Uniform nonzero integer in -a..=a.
    pub fn int_sym_nonzero(&mut self, a: u64) -> i64 {
        loop {
            let v = self.int_sym(a);
            if v != 0 {
                return v;
            }
        }
    }
}

/// Random rational with numerator and denominator bounded in absolute value.
pub fn rational(rng: &mut Rng, max_num: u64, max_den: u64) -> BigRational {
    let num = rng.int_sym(max_num);
    let den = 1 + rng.below(max_den) as i64;
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_vector(rng: &mut Rng, n: usize, max_num: u64, max_den: u64) -> Vec<BigRational> {
    (0..n).map(|_| rational(rng, max_num, max_den)).collect()
}

pub fn nonzero_rational_vector(
    rng: &mut Rng,
    n: usize,
    max_num: u64,
    max_den: u64,
) -> Vec<BigRational> {
    loop {
        let v = rational_vector(rng, n, max_num, max_den);
        if v.iter().any(|x| !num_traits::Zero::is_zero(x)) {
            return v;
        }
    }
}

/// Random L-dimensional subspace of Q^N with small integer basis entries.
pub fn rational_subspace(rng: &mut Rng, n: usize, l: usize, range: u64) -> Subspace<Rationals> {
    let k = Rationals;
    loop {
        let vecs: Vec<Vec<BigRational>> = (0..l)
            .map(|_| (0..n).map(|_| k.from_i64(rng.int_sym(range))).collect())
            .collect();
        if let Ok(s) = Subspace::from_vectors(&k, n, &vecs) {
            if s.dim() == l {
                return s;
            }
        }
    }
}

/// Random nonzero symmetric form over Q with integer entries.
pub fn rational_form(rng: &mut Rng, n: usize, range: u64) -> QuadForm<Rationals> {
    let k = Rationals;
    loop {
        let mut m = Matrix::filled(n, n, k.from_i64(0));
        for i in 0..n {
            for j in i..n {
                let e = k.from_i64(rng.int_sym(range));
                m.set(i, j, e.clone());
                m.set(j, i, e);
            }
        }
        if let Ok(f) = QuadForm::new(&k, m) {
            return f;
        }
    }
}

/// Random nonzero homogeneous polynomial over Q.
pub fn rational_homogeneous_poly(
    rng: &mut Rng,
    nvars: usize,
    degree: u16,
    terms: usize,
    range: u64,
) -> MultiPoly<Rationals> {
    let k = Rationals;
    loop {
        let mut acc = vec![];
        for _ in 0..terms {
            // random exponent vector of the exact total degree
            let mut e = vec![0u16; nvars];
            for _ in 0..degree {
                let v = rng.below(nvars as u64) as usize;
                e[v] += 1;
            }
            acc.push((e, k.from_i64(rng.int_sym_nonzero(range))));
        }
        let p = MultiPoly::new(&k, nvars, acc);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Random avoidance system over Q: up to `max_families` families of one or
/// two homogeneous polynomials of degree at most `max_deg`.
pub fn rational_avoidance(
    rng: &mut Rng,
    nvars: usize,
    max_families: u64,
    max_deg: u16,
    range: u64,
) -> AvoidanceSystem<Rationals> {
    let j = 1 + rng.below(max_families);
    let fams = (0..j)
        .map(|_| {
            let count = 1 + rng.below(2);
            (0..count)
                .map(|_| {
                    let d = 1 + rng.below(max_deg as u64) as u16;
                    let terms = 1 + rng.below(3) as usize;
                    rational_homogeneous_poly(rng, nvars, d, terms, range)
                })
                .collect()
        })
        .collect();
    AvoidanceSystem::new(fams).expect("generated polynomials are homogeneous and nonzero")
}

/// Random polynomial over GF(q)[t] of degree at most `maxdeg`.
pub fn ff_poly(rng: &mut Rng, q: u64, maxdeg: usize) -> fq::Poly {
    let mut p: fq::Poly = (0..=maxdeg).map(|_| rng.below(q)).collect();
    fq::trim(&mut p);
    p
}

/// Random nonzero symmetric form over F_q(t) with polynomial entries of
/// degree at most `maxdeg`.
pub fn ff_form(rng: &mut Rng, k: &FqT, n: usize, maxdeg: usize) -> QuadForm<FqT> {
    loop {
        let mut m = Matrix::filled(n, n, k.zero());
        for i in 0..n {
            for j in i..n {
                let e = k.from_poly(ff_poly(rng, k.q(), maxdeg));
                m.set(i, j, e.clone());
                m.set(j, i, e);
            }
        }
        if let Ok(f) = QuadForm::new(k, m) {
            return f;
        }
    }
}

/// Random L-dimensional subspace of F_q(t)^N with polynomial entries.
pub fn ff_subspace(rng: &mut Rng, k: &FqT, n: usize, l: usize, maxdeg: usize) -> Subspace<FqT> {
    loop {
        let vecs: Vec<Vec<crate::field::FfElem>> = (0..l)
            .map(|_| {
                (0..n)
                    .map(|_| k.from_poly(ff_poly(rng, k.q(), maxdeg)))
                    .collect()
            })
            .collect();
        if let Ok(s) = Subspace::from_vectors(k, n, &vecs) {
            if s.dim() == l {
                return s;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rng_is_deterministic() {
        let mut a = Rng::new(42);
        let mut b = Rng::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn generators_respect_ranges() {
        let mut rng = Rng::new(7);
        for _ in 0..50 {
            let v = rational(&mut rng, 50, 50);
            assert!(v.numer().magnitude() <= &num_bigint::BigUint::from(50u64 * 50));
        }
        let s = rational_subspace(&mut rng, 4, 2, 3);
        assert_eq!(s.dim(), 2);
        let p = rational_homogeneous_poly(&mut rng, 3, 2, 3, 5);
        assert!(p.is_homogeneous() && !p.is_zero());
        assert_eq!(p.degree(), 2);
    }
}
