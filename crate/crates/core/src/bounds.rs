//! Evaluation of the explicit height bounds that certificates are checked
//! against.
//!
//! Each variant names the inequality it realizes; the evaluator returns an
//! outward-rounded interval for the natural log of the right-hand side.
//! A certified claim `h <= bound` compares the upper log of the exact height
//! against the lower endpoint of this interval (plus a configurable relative
//! slack), so no pass can be a rounding artifact.

use crate::constants::Constants;
use crate::field::FieldKind;
use crate::height::Height;
use crate::interval::{ln_2, LogVal};
use num_bigint::BigInt;
use num_rational::BigRational;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Debug)]
pub enum Bound {
    /// Each member of an independent family of zeros avoiding a variety
    /// union: T(L, M+1) H(F)^((9L+11)/2) HH(V)^(9L+12).
    IndependentZeros {
        l: u64,
        m_deg: u64,
        hf: Height,
        hv: Height,
    },
    /// A single zero avoiding a degree-D hypersurface:
    /// T(L, D) H(F)^((9L+11)/2) HH(V)^(9L+12).
    AvoidingZero {
        l: u64,
        deg: u64,
        hf: Height,
        hv: Height,
    },
    /// Top of a totally isotropic chain:
    /// T1(L,M,N,m) H(F)^(10L-m+11) HH(V)^(18L+25).
    ChainTop {
        l: u64,
        m_deg: u64,
        n: u64,
        m: u64,
        hf: Height,
        hv: Height,
    },
    /// Lower links of the chain (k < m):
    /// N^(dk/2) C(m) E(m)^(1-d) T(L,M+1) T1 H(F)^((29L+33-2m)/2) HH(V)^(27L+37).
    ChainLink {
        l: u64,
        m_deg: u64,
        n: u64,
        m: u64,
        k: u64,
        hf: Height,
        hv: Height,
    },
    /// Basis vectors outside a variety union:
    /// L^d E(L)^(1-d) A(M+1) C(L) HH(V).
    BasisOutside { l: u64, m_deg: u64, hv: Height },
    /// Small point of the radical off a hypersurface:
    /// (B(r)^r | q^(rg/d)) lambda A(D) C(lambda) H(F)^(r/2) HH(V).
    RadicalPoint {
        r: u64,
        lambda: u64,
        deg: u64,
        hf: Height,
        hv: Height,
    },
    /// Zero of a shape-constrained polynomial off a hypersurface:
    /// A(deg PQ)^(1+deg Q) A(2 deg P)^2 H(Q).
    QuadOffHypersurface {
        deg_q: u64,
        deg_p: u64,
        hq: Height,
    },
    /// First member of a hyperbolic pair in a plane.
    HyperbolicFirst { hf: Height, hh: Height },
    /// Second member of a hyperbolic pair.
    HyperbolicSecond { n: u64, hf: Height, hh: Height },
    /// Anisotropic point used to complete a hyperbolic pair:
    /// 2 E(2)^(1-d) A(2) C(2) HH(plane).
    HyperbolicAniso { hh: Height },
    /// Height of the radical: (B(r)^r | q^(rg/d)) HH(F)^(r/2) HH(V), with
    /// the Euclidean height of the form (the max-norm variant fails on
    /// rank-one forms such as (X + 3Y)^2: the radical (3, -1) has Euclidean
    /// height sqrt(10) against a max-norm bound of 3).
    RadicalHeight { r: u64, hf: Height, hv: Height },
    /// Nonsingular zero of a form on the full space K^L (number field):
    /// 2^(3(L-1)/2) L^((L-1)/2) |D|^(1/2d) B(L-1) H(F_A)^((L-1)/2).
    NonsingularZeroRestricted { l: u64, hfa: Height },
    /// Minimal totally isotropic subspace of given dimension (function
    /// field): q^((L-l)^2 g/d) H(F)^((L-l)/2) H(V).
    IsotropicSubspace {
        l: u64,
        ell: u64,
        hf: Height,
        hv: Height,
    },
    /// Product of basis heights of that subspace:
    /// q^((L^2-l+l^2) g/d) H(F)^((L-l)/2) H(V).
    IsotropicBasisProduct {
        l: u64,
        ell: u64,
        hf: Height,
        hv: Height,
    },
    /// Single isotropic vector from that basis (l-th root of the above).
    IsotropicVector {
        l: u64,
        ell: u64,
        hf: Height,
        hv: Height,
    },
    /// Nonsingular isotropic vector over a function field:
    /// q^((2L^2-3L+2) g/d) H(F)^((L-1)/2) H(V).
    NonsingularZeroFf { l: u64, hf: Height, hv: Height },
    /// Product of heights of a reduced basis: C(L) E(L)^(1-d) HH(V).
    SiegelProduct { l: u64, hv: Height },
    /// Product of heights of a pairwise orthogonal basis (function field):
    /// C(L)^((L^2+L-2)/4) H(F)^(L(L+1)/2) H(V)^L.
    OrthBasisProduct { l: u64, hf: Height, hv: Height },
    /// Nonvanishing point of a degree-D polynomial: A(D).
    Nonvanishing { deg: u64 },
    /// Orthogonal complement of a point inside V:
    /// N^(3d/2) H(F) H(x) HH(V).
    PointComplement {
        n: u64,
        hf: Height,
        hx: Height,
        hv: Height,
    },
    /// Maximal totally isotropic subspace of a codimension-one section:
    /// (2^(2m+1) B(L-m-1)^2 H(F))^(L-m-1) HH(U)   (number field)
    /// q^((L-m-1)^2 g/d) H(F)^(L-m-1) HH(U)       (function field).
    MaxIsotropicSub {
        l: u64,
        m: u64,
        hf: Height,
        hu: Height,
    },
    /// Span of a point with a subspace: N^(d/2) H(x) HH(W).
    SpanWithPoint { n: u64, hx: Height, hw: Height },
}

impl Bound {
    /// Stable name used in certificates.
    pub fn name(&self) -> &'static str {
        match self {
            Bound::IndependentZeros { .. } => "independent_zeros",
            Bound::AvoidingZero { .. } => "avoiding_zero",
            Bound::ChainTop { .. } => "chain_top",
            Bound::ChainLink { .. } => "chain_link",
            Bound::BasisOutside { .. } => "basis_outside",
            Bound::RadicalPoint { .. } => "radical_point",
            Bound::QuadOffHypersurface { .. } => "quad_off_hypersurface",
            Bound::HyperbolicFirst { .. } => "hyperbolic_first",
            Bound::HyperbolicSecond { .. } => "hyperbolic_second",
            Bound::HyperbolicAniso { .. } => "hyperbolic_aniso",
            Bound::RadicalHeight { .. } => "radical_height",
            Bound::NonsingularZeroRestricted { .. } => "nonsingular_zero_restricted",
            Bound::IsotropicSubspace { .. } => "isotropic_subspace",
            Bound::IsotropicBasisProduct { .. } => "isotropic_basis_product",
            Bound::IsotropicVector { .. } => "isotropic_vector",
            Bound::NonsingularZeroFf { .. } => "nonsingular_zero_ff",
            Bound::SiegelProduct { .. } => "siegel_product",
            Bound::OrthBasisProduct { .. } => "orth_basis_product",
            Bound::Nonvanishing { .. } => "nonvanishing",
            Bound::PointComplement { .. } => "point_complement",
            Bound::MaxIsotropicSub { .. } => "max_isotropic_sub",
            Bound::SpanWithPoint { .. } => "span_with_point",
        }
    }
}

/// Natural log of the right-hand side of the named inequality.
pub fn evaluate(c: &Constants, b: &Bound) -> LogVal {
    let delta = c.descriptor().delta();
    let is_q = delta == 1;
    let genus = c.descriptor().genus() as i64;
    let d = c.descriptor().degree() as i64;
    let lv = |h: &Height| h.to_logval();
    match b {
        Bound::IndependentZeros { l, m_deg, hf, hv } => c
            .t_main(*l, m_deg + 1)
            .add(&lv(hf).scale(&rat(9 * *l as i64 + 11, 2)))
            .add(&lv(hv).scale_u64(9 * l + 12)),
        Bound::AvoidingZero { l, deg, hf, hv } => c
            .t_main(*l, (*deg).max(1))
            .add(&lv(hf).scale(&rat(9 * *l as i64 + 11, 2)))
            .add(&lv(hv).scale_u64(9 * l + 12)),
        Bound::ChainTop {
            l,
            m_deg,
            n,
            m,
            hf,
            hv,
        } => {
            let exp_f = 10 * *l as i64 - *m as i64 + 11;
            c.chain_t1(*l, *m_deg, *n, *m)
                .add(&lv(hf).scale(&rat(exp_f, 1)))
                .add(&lv(hv).scale_u64(18 * l + 25))
        }
        Bound::ChainLink {
            l,
            m_deg,
            n,
            m,
            k,
            hf,
            hv,
        } => {
            let mut acc = c.chain_t1(*l, *m_deg, *n, *m);
            acc = acc.add(&c.t_main(*l, m_deg + 1));
            acc = acc.add(&c.siegel_c(*m));
            if is_q {
                acc = acc.add(&LogVal::ln_u64(*n).scale(&rat(*k as i64, 2)));
            } else {
                acc = acc.add(&c.genus_e(*m));
            }
            let exp_f = 29 * *l as i64 + 33 - 2 * *m as i64;
            acc.add(&lv(hf).scale(&rat(exp_f, 2)))
                .add(&lv(hv).scale_u64(27 * l + 37))
        }
        Bound::BasisOutside { l, m_deg, hv } => {
            let mut acc = c.nonvanish_a(m_deg + 1).add(&c.siegel_c(*l));
            if is_q {
                acc = acc.add(&LogVal::ln_u64(*l));
            } else {
                acc = acc.add(&c.genus_e(*l));
            }
            acc.add(&lv(hv))
        }
        Bound::RadicalPoint {
            r,
            lambda,
            deg,
            hf,
            hv,
        } => {
            let mut acc = if is_q {
                c.ball_b(*r).scale_u64(*r)
            } else {
                c.ln_q().scale(&rat(*r as i64 * genus, d))
            };
            acc = acc.add(&LogVal::ln_u64((*lambda).max(1)));
            acc = acc.add(&c.nonvanish_a((*deg).max(1)));
            acc = acc.add(&c.siegel_c((*lambda).max(1)));
            acc.add(&lv(hf).scale(&rat(*r as i64, 2))).add(&lv(hv))
        }
        Bound::QuadOffHypersurface { deg_q, deg_p, hq } => c
            .nonvanish_a((deg_p + deg_q).max(1))
            .scale_u64(1 + deg_q)
            .add(&c.nonvanish_a((2 * deg_p).max(1)).scale_u64(2))
            .add(&lv(hq)),
        Bound::HyperbolicFirst { hf, hh } => {
            let mut acc = if is_q {
                // 2 sqrt(2) B(1)^2
                ln_2().scale(&rat(3, 2)).add(&c.ball_b(1).scale_u64(2))
            } else {
                c.ln_q().scale(&rat(4 * genus, d))
            };
            acc = acc.add(&lv(hf).scale(&rat(1, 2)));
            acc.add(&lv(hh))
        }
        Bound::HyperbolicSecond { n, hf, hh } => {
            let g_k = hyperbolic_g(c);
            let mut acc = if is_q {
                // 24 sqrt(2) N^2 (B(1) G)^2
                LogVal::ln_u64(24)
                    .add(&ln_2().scale(&rat(1, 2)))
                    .add(&LogVal::ln_u64(*n).scale_u64(2))
                    .add(&c.ball_b(1).scale_u64(2))
                    .add(&g_k.scale_u64(2))
            } else {
                LogVal::ln_u64(4)
                    .add(&c.ln_q().scale(&rat(4 * genus, d)))
                    .add(&g_k.scale_u64(2))
            };
            acc = acc.add(&lv(hf).scale(&rat(3, 2)));
            acc.add(&lv(hh).scale_u64(3))
        }
        Bound::HyperbolicAniso { hh } => {
            let mut acc = ln_2().add(&c.nonvanish_a(2)).add(&c.siegel_c(2));
            if !is_q {
                acc = acc.add(&c.genus_e(2));
            }
            acc.add(&lv(hh))
        }
        Bound::RadicalHeight { r, hf, hv } => {
            let mut acc = if is_q {
                c.ball_b(*r).scale_u64(*r)
            } else {
                c.ln_q().scale(&rat(*r as i64 * genus, d))
            };
            acc = acc.add(&lv(hf).scale(&rat(*r as i64, 2)));
            acc.add(&lv(hv))
        }
        Bound::NonsingularZeroRestricted { l, hfa } => {
            let li = *l as i64;
            let mut acc = if is_q {
                ln_2()
                    .scale(&rat(3 * (li - 1), 2))
                    .add(&LogVal::ln_u64(*l).scale(&rat(li - 1, 2)))
                    .add(&c.ball_b(l - 1))
            } else {
                c.ln_q()
                    .scale(&rat((2 * li * li - 3 * li + 2) * genus, d))
            };
            acc = acc.add(&lv(hfa).scale(&rat(li - 1, 2)));
            acc
        }
        Bound::IsotropicSubspace { l, ell, hf, hv } => {
            let diff = *l as i64 - *ell as i64;
            c.ln_q()
                .scale(&rat(diff * diff * genus, d))
                .add(&lv(hf).scale(&rat(diff, 2)))
                .add(&lv(hv))
        }
        Bound::IsotropicBasisProduct { l, ell, hf, hv } => {
            let li = *l as i64;
            let ei = *ell as i64;
            c.ln_q()
                .scale(&rat((li * li - ei + ei * ei) * genus, d))
                .add(&lv(hf).scale(&rat(li - ei, 2)))
                .add(&lv(hv))
        }
        Bound::IsotropicVector { l, ell, hf, hv } => {
            let li = *l as i64;
            let ei = *ell as i64;
            c.ln_q()
                .scale(&rat((li * li - ei + ei * ei) * genus, d * ei))
                .add(&lv(hf).scale(&rat(li - ei, 2 * ei)))
                .add(&lv(hv).scale(&rat(1, ei)))
        }
        Bound::NonsingularZeroFf { l, hf, hv } => {
            let li = *l as i64;
            c.ln_q()
                .scale(&rat((2 * li * li - 3 * li + 2) * genus, d))
                .add(&lv(hf).scale(&rat(li - 1, 2)))
                .add(&lv(hv))
        }
        Bound::SiegelProduct { l, hv } => {
            let mut acc = c.siegel_c(*l);
            if !is_q {
                acc = acc.add(&c.genus_e(*l));
            }
            acc.add(&lv(hv))
        }
        Bound::OrthBasisProduct { l, hf, hv } => {
            let li = *l as i64;
            c.siegel_c(*l)
                .scale(&rat(li * li + li - 2, 4))
                .add(&lv(hf).scale(&rat(li * (li + 1), 2)))
                .add(&lv(hv).scale_u64(*l))
        }
        Bound::Nonvanishing { deg } => c.nonvanish_a((*deg).max(1)),
        Bound::PointComplement { n, hf, hx, hv } => {
            let mut acc = LogVal::ZERO;
            if is_q {
                acc = acc.add(&LogVal::ln_u64(*n).scale(&rat(3, 2)));
            }
            acc.add(&lv(hf)).add(&lv(hx)).add(&lv(hv))
        }
        Bound::MaxIsotropicSub { l, m, hf, hu } => {
            let e = (*l as i64 - *m as i64 - 1).max(0);
            let mut acc = if is_q {
                ln_2()
                    .scale(&rat((2 * *m as i64 + 1) * e, 1))
                    .add(&c.ball_b(e as u64).scale_u64(2 * e as u64))
            } else {
                c.ln_q().scale(&rat(e * e * genus, d))
            };
            acc = acc.add(&lv(hf).scale(&rat(e, 1)));
            acc.add(&lv(hu))
        }
        Bound::SpanWithPoint { n, hx, hw } => {
            let mut acc = LogVal::ZERO;
            if is_q {
                acc = acc.add(&LogVal::ln_u64(*n).scale(&rat(1, 2)));
            }
            acc.add(&lv(hx)).add(&lv(hw))
        }
    }
}

/// The constant pairing a hyperbolic plane's two bounds:
/// E(2)^(1-d) A(2) C(2).
fn hyperbolic_g(c: &Constants) -> LogVal {
    let mut acc = c.nonvanish_a(2).add(&c.siegel_c(2));
    if !matches!(c.descriptor().kind, FieldKind::Rational) {
        acc = acc.add(&c.genus_e(2));
    }
    acc
}
