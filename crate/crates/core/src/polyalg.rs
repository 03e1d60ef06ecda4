//! Sparse multivariate polynomials over a [`Field`], monomial orders,
//! single-divisor reduction, restriction to a subspace basis, and small
//! nonvanishing points.

use crate::constants::Constants;
use crate::enumerate::{Enumerable, Points, StreamCfg};
use crate::field::Field;
use crate::height::Height;
use crate::heights;
use crate::interval::LogVal;
use crate::linalg::{self, Matrix};
use crate::Error;
use std::cmp::Ordering;
use std::collections::BTreeMap;

pub type Exps = Vec<u16>;

fn total_deg(e: &[u16]) -> u32 {
    e.iter().map(|&x| x as u32).sum()
}

fn exp_add(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn exp_sub(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn exp_divides(d: &[u16], e: &[u16]) -> bool {
    d.iter().zip(e).all(|(x, y)| x <= y)
}

/// Lexicographic monomial order given by a variable priority permutation:
/// the first entry of `priority` is the most significant variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    priority: Vec<usize>,
}

impl MonomialOrder {
    pub fn lex(nvars: usize) -> MonomialOrder {
        MonomialOrder {
            priority: (0..nvars).collect(),
        }
    }

    /// Lex order with variables i then j most significant.
    pub fn lex_with_top(nvars: usize, i: usize, j: usize) -> MonomialOrder {
        let mut priority = vec![i, j];
        priority.extend((0..nvars).filter(|&v| v != i && v != j));
        MonomialOrder { priority }
    }

    pub fn cmp(&self, a: &[u16], b: &[u16]) -> Ordering {
        for &v in &self.priority {
            match a[v].cmp(&b[v]) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        Ordering::Equal
    }
}

/// Sparse multivariate polynomial; no zero coefficients are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly<K: Field> {
    nvars: usize,
    terms: BTreeMap<Exps, K::Elem>,
    degree: u32,
    homogeneous: bool,
}

impl<K: Field> MultiPoly<K> {
    pub fn new(
        k: &K,
        nvars: usize,
        terms: impl IntoIterator<Item = (Exps, K::Elem)>,
    ) -> MultiPoly<K> {
        let mut map: BTreeMap<Exps, K::Elem> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            let cur = match map.remove(&e) {
                Some(prev) => k.add(&prev, &c),
                None => c,
            };
            if !k.is_zero(&cur) {
                map.insert(e, cur);
            }
        }
        Self::from_map(nvars, map)
    }

    fn from_map(nvars: usize, map: BTreeMap<Exps, K::Elem>) -> MultiPoly<K> {
        let degree = map.keys().map(|e| total_deg(e)).max().unwrap_or(0);
        let homogeneous = map.keys().all(|e| total_deg(e) == degree);
        MultiPoly {
            nvars,
            terms: map,
            degree,
            homogeneous,
        }
    }

    pub fn zero(nvars: usize) -> MultiPoly<K> {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
            degree: 0,
            homogeneous: true,
        }
    }

    pub fn constant(k: &K, nvars: usize, c: K::Elem) -> MultiPoly<K> {
        MultiPoly::new(k, nvars, [(vec![0; nvars], c)])
    }

    pub fn monomial(k: &K, nvars: usize, exps: Exps, c: K::Elem) -> MultiPoly<K> {
        MultiPoly::new(k, nvars, [(exps, c)])
    }

    /// The variable X_(i+1) (zero-based index i).
    pub fn var(k: &K, nvars: usize, i: usize) -> MultiPoly<K> {
        let mut e = vec![0u16; nvars];
        e[i] = 1;
        MultiPoly::monomial(k, nvars, e, k.one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &K::Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u16]) -> Option<&K::Elem> {
        self.terms.get(e)
    }

    pub fn add(&self, k: &K, other: &MultiPoly<K>) -> MultiPoly<K> {
        assert_eq!(self.nvars, other.nvars);
        let mut map = self.terms.clone();
        for (e, c) in &other.terms {
            let cur = match map.remove(e) {
                Some(prev) => k.add(&prev, c),
                None => c.clone(),
            };
            if !k.is_zero(&cur) {
                map.insert(e.clone(), cur);
            }
        }
        Self::from_map(self.nvars, map)
    }

    pub fn neg(&self, k: &K) -> MultiPoly<K> {
        let map = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), k.neg(c)))
            .collect();
        Self::from_map(self.nvars, map)
    }

    pub fn sub(&self, k: &K, other: &MultiPoly<K>) -> MultiPoly<K> {
        self.add(k, &other.neg(k))
    }

    pub fn scale(&self, k: &K, c: &K::Elem) -> MultiPoly<K> {
        if k.is_zero(c) {
            return MultiPoly::zero(self.nvars);
        }
        let map = self
            .terms
            .iter()
            .map(|(e, x)| (e.clone(), k.mul(x, c)))
            .collect();
        Self::from_map(self.nvars, map)
    }

    pub fn mul(&self, k: &K, other: &MultiPoly<K>) -> MultiPoly<K> {
        assert_eq!(self.nvars, other.nvars);
        let mut map: BTreeMap<Exps, K::Elem> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = exp_add(ea, eb);
                let c = k.mul(ca, cb);
                let cur = match map.remove(&e) {
                    Some(prev) => k.add(&prev, &c),
                    None => c,
                };
                if !k.is_zero(&cur) {
                    map.insert(e, cur);
                }
            }
        }
        Self::from_map(self.nvars, map)
    }

    /// Multiplies by the monomial c * X^exps.
    pub fn mul_monomial(&self, k: &K, exps: &[u16], c: &K::Elem) -> MultiPoly<K> {
        if k.is_zero(c) {
            return MultiPoly::zero(self.nvars);
        }
        let map = self
            .terms
            .iter()
            .map(|(e, x)| (exp_add(e, exps), k.mul(x, c)))
            .collect();
        Self::from_map(self.nvars, map)
    }

    /// Exact evaluation with per-variable power tables.
    pub fn evaluate(&self, k: &K, z: &[K::Elem]) -> K::Elem {
        assert_eq!(z.len(), self.nvars, "dimension mismatch");
        let mut max_exp = vec![0u16; self.nvars];
        for e in self.terms.keys() {
            for (m, &x) in max_exp.iter_mut().zip(e) {
                *m = (*m).max(x);
            }
        }
        let powers: Vec<Vec<K::Elem>> = (0..self.nvars)
            .map(|i| {
                let mut p = Vec::with_capacity(max_exp[i] as usize + 1);
                p.push(k.one());
                for e in 1..=max_exp[i] as usize {
                    let prev = p[e - 1].clone();
                    p.push(k.mul(&prev, &z[i]));
                }
                p
            })
            .collect();
        let mut acc = k.zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    term = k.mul(&term, &powers[i][x as usize]);
                }
            }
            acc = k.add(&acc, &term);
        }
        acc
    }

    /// Leading (exps, coeff) under the given order.
    pub fn leading(&self, ord: &MonomialOrder) -> Option<(&Exps, &K::Elem)> {
        self.terms.iter().max_by(|(a, _), (b, _)| ord.cmp(a, b))
    }

    /// Coefficient vector in descending graded-lex order of monomials.
    pub fn coeff_vector(&self) -> Vec<K::Elem> {
        let mut keys: Vec<&Exps> = self.terms.keys().collect();
        keys.sort_by(|a, b| cmp_grlex_desc(a, b));
        keys.iter().map(|e| self.terms[*e].clone()).collect()
    }

    /// Canonically scaled copy: coefficients are a primitive vector and the
    /// graded-lex leading coefficient is normalized (positive over Q, monic
    /// numerator over F_q(t)).
    pub fn canonical(&self, k: &K) -> MultiPoly<K> {
        if self.is_zero() {
            return self.clone();
        }
        let mut keys: Vec<Exps> = self.terms.keys().cloned().collect();
        keys.sort_by(|a, b| cmp_grlex_desc(a, b));
        let coeffs: Vec<K::Elem> = keys.iter().map(|e| self.terms[e].clone()).collect();
        let prim = k.primitive_vector(&coeffs).expect("nonzero polynomial");
        let map = keys.into_iter().zip(prim).collect();
        Self::from_map(self.nvars, map)
    }
}

/// Descending graded-lex: higher total degree first, ties broken with the
/// earlier variable carrying the higher exponent first.
pub fn cmp_grlex_desc(a: &[u16], b: &[u16]) -> Ordering {
    total_deg(b).cmp(&total_deg(a)).then_with(|| {
        for (x, y) in a.iter().zip(b) {
            match y.cmp(x) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        Ordering::Equal
    })
}

/// Heights (H, h) of the coefficient vector. Errors on the zero polynomial.
pub fn poly_heights<K: Field>(k: &K, p: &MultiPoly<K>) -> Result<(Height, Height), Error> {
    if p.is_zero() {
        return Err(Error::precondition("height of the zero polynomial"));
    }
    let v = p.coeff_vector();
    Ok((heights::height_max(k, &v), heights::height_inhom(k, &v)))
}

/// Single-divisor reduction: returns (p1', r) with p1 = p1' + r p2 and no
/// monomial of p1' divisible by the leading monomial of p2. Terminates by
/// descent in the monomial order.
pub fn reduce_by_single<K: Field>(
    k: &K,
    p1: &MultiPoly<K>,
    p2: &MultiPoly<K>,
    ord: &MonomialOrder,
) -> (MultiPoly<K>, MultiPoly<K>) {
    assert!(!p2.is_zero(), "reduction by the zero polynomial");
    assert_eq!(p1.nvars(), p2.nvars());
    let (lm2, lc2) = {
        let (e, c) = p2.leading(ord).unwrap();
        (e.clone(), c.clone())
    };
    let mut p = p1.clone();
    let mut r = MultiPoly::zero(p1.nvars());
    loop {
        let target = p
            .terms
            .iter()
            .filter(|(e, _)| exp_divides(&lm2, e))
            .max_by(|(a, _), (b, _)| ord.cmp(a, b))
            .map(|(e, c)| (e.clone(), c.clone()));
        let Some((e, c)) = target else {
            break;
        };
        let q_exps = exp_sub(&e, &lm2);
        let q_coeff = k.div(&c, &lc2).expect("leading coefficient is nonzero");
        p = p.sub(k, &p2.mul_monomial(k, &q_exps, &q_coeff));
        r = r.add(k, &MultiPoly::monomial(k, p1.nvars(), q_exps, q_coeff));
    }
    (p, r)
}

/// Restriction of P to the column space of A: P_A(Y) = P(A Y) in cols(A)
/// variables. For nonzero homogeneous P with nonzero restriction the degree
/// is preserved; in general only deg P_A <= deg P holds.
pub fn restrict_to_basis<K: Field>(
    k: &K,
    p: &MultiPoly<K>,
    a: &Matrix<K::Elem>,
) -> Result<MultiPoly<K>, Error> {
    if a.rows() != p.nvars() {
        return Err(Error::dim("basis matrix rows must match variable count"));
    }
    let l = a.cols();
    if linalg::rank(k, a) != l {
        return Err(Error::precondition("rank-deficient basis matrix"));
    }
    // linear form for each original variable: X_i = sum_j a[i][j] Y_j
    let rows: Vec<MultiPoly<K>> = (0..p.nvars())
        .map(|i| {
            MultiPoly::new(
                k,
                l,
                (0..l).map(|j| {
                    let mut e = vec![0u16; l];
                    e[j] = 1;
                    (e, a.get(i, j).clone())
                }),
            )
        })
        .collect();
    let mut max_exp = vec![0u16; p.nvars()];
    for e in p.terms.keys() {
        for (m, &x) in max_exp.iter_mut().zip(e) {
            *m = (*m).max(x);
        }
    }
    // power tables of each linear form
    let powers: Vec<Vec<MultiPoly<K>>> = (0..p.nvars())
        .map(|i| {
            let mut tab = Vec::with_capacity(max_exp[i] as usize + 1);
            tab.push(MultiPoly::constant(k, l, k.one()));
            for e in 1..=max_exp[i] as usize {
                let prev = tab[e - 1].clone();
                tab.push(prev.mul(k, &rows[i]));
            }
            tab
        })
        .collect();
    let mut acc = MultiPoly::zero(l);
    for (e, c) in &p.terms {
        let mut term = MultiPoly::constant(k, l, c.clone());
        for (i, &x) in e.iter().enumerate() {
            if x > 0 {
                term = term.mul(k, &powers[i][x as usize]);
            }
        }
        acc = acc.add(k, &term);
    }
    Ok(acc)
}

/// Substitutes args[i] for variable i: returns P(args[0], ..., args[n-1]).
/// All argument polynomials must share a variable count.
pub fn compose<K: Field>(
    k: &K,
    p: &MultiPoly<K>,
    args: &[MultiPoly<K>],
) -> MultiPoly<K> {
    assert_eq!(args.len(), p.nvars());
    let out_vars = args
        .first()
        .map(|a| a.nvars())
        .unwrap_or(0);
    let mut max_exp = vec![0u16; p.nvars()];
    for (e, _) in p.terms() {
        for (m, &x) in max_exp.iter_mut().zip(e) {
            *m = (*m).max(x);
        }
    }
    let powers: Vec<Vec<MultiPoly<K>>> = (0..p.nvars())
        .map(|i| {
            let mut tab = Vec::with_capacity(max_exp[i] as usize + 1);
            tab.push(MultiPoly::constant(k, out_vars, k.one()));
            for e in 1..=max_exp[i] as usize {
                let prev = tab[e - 1].clone();
                tab.push(prev.mul(k, &args[i]));
            }
            tab
        })
        .collect();
    let mut acc = MultiPoly::zero(out_vars);
    for (e, c) in p.terms() {
        let mut term = MultiPoly::constant(k, out_vars, c.clone());
        for (i, &x) in e.iter().enumerate() {
            if x > 0 {
                term = term.mul(k, &powers[i][x as usize]);
            }
        }
        acc = acc.add(k, &term);
    }
    acc
}

/// Reindexes onto the variables listed in `keep`; every variable actually
/// present in the polynomial must appear in `keep`.
pub fn project_vars<K: Field>(
    k: &K,
    p: &MultiPoly<K>,
    keep: &[usize],
) -> Result<MultiPoly<K>, Error> {
    let mut terms = vec![];
    for (e, c) in p.terms() {
        let mut ne = vec![0u16; keep.len()];
        let mut seen: u32 = e.iter().map(|&x| x as u32).sum();
        for (slot, &v) in keep.iter().enumerate() {
            ne[slot] = e[v];
            seen -= e[v] as u32;
        }
        if seen != 0 {
            return Err(Error::dim(
                "polynomial uses a variable outside the projection set",
            ));
        }
        terms.push((ne, c.clone()));
    }
    Ok(MultiPoly::new(k, keep.len(), terms))
}

/// Inverse of [`project_vars`] on points: scatters the projected coordinates
/// back into a full-length vector, zero elsewhere.
pub fn scatter_point<K: Field>(
    k: &K,
    nvars: usize,
    keep: &[usize],
    point: &[K::Elem],
) -> Vec<K::Elem> {
    let mut z = vec![k.zero(); nvars];
    for (slot, &v) in keep.iter().enumerate() {
        z[v] = point[slot].clone();
    }
    z
}

/// Witness returned by [`nonvanishing_point`].
#[derive(Clone, Debug)]
pub struct NonvanishWitness<K: Field> {
    pub point: Vec<K::Elem>,
    pub value: K::Elem,
    pub height: Height,
    pub bound: LogVal,
}

/// Smallest point (nondecreasing inhomogeneous height, lexicographic
/// tie-break) where the nonzero polynomial does not vanish. Existence below
/// the bound is guaranteed; failure to find one below it is a library defect.
pub fn nonvanishing_point<K: Enumerable>(
    k: &K,
    consts: &Constants,
    p: &MultiPoly<K>,
    budget: u64,
) -> Result<NonvanishWitness<K>, Error> {
    if p.is_zero() {
        return Err(Error::precondition("nonvanishing point of the zero polynomial"));
    }
    let bound = crate::bounds::evaluate(
        consts,
        &crate::bounds::Bound::Nonvanishing {
            deg: p.degree() as u64,
        },
    );
    let cap = k.shell_cap(bound.hi).max(k.min_affine_shell()) + 1;
    for item in Points::affine(k, p.nvars(), StreamCfg::new(cap, budget)) {
        let (z, _) = item?;
        let v = p.evaluate(k, &z);
        if !k.is_zero(&v) {
            let height = heights::height_inhom(k, &z);
            return Ok(NonvanishWitness {
                point: z,
                value: v,
                height,
                bound,
            });
        }
    }
    Err(Error::defect(
        "no nonvanishing point below the guaranteed bound",
    ))
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

/// Renders "c*X1^2*X2 + ...", graded-lex descending. Coefficients that
/// contain arithmetic are parenthesized.
pub fn render_poly<K: Field>(k: &K, p: &MultiPoly<K>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut keys: Vec<&Exps> = p.terms.keys().collect();
    keys.sort_by(|a, b| cmp_grlex_desc(a, b));
    let mut parts = vec![];
    for e in keys {
        let c = &p.terms[e];
        let mut cs = k.render_elem(c);
        if cs.len() > 1 && (cs.contains('+') || cs.contains('/') || cs.contains('t'))
            || cs[1..].contains('-')
        {
            cs = format!("({cs})");
        }
        let vars: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > 0)
            .map(|(i, &x)| {
                if x == 1 {
                    format!("X{}", i + 1)
                } else {
                    format!("X{}^{}", i + 1, x)
                }
            })
            .collect();
        let part = if vars.is_empty() {
            cs
        } else if cs == "1" {
            vars.join("*")
        } else if cs == "-1" {
            format!("-{}", vars.join("*"))
        } else {
            format!("{}*{}", cs, vars.join("*"))
        };
        parts.push(part);
    }
    let mut out = String::new();
    for (i, part) in parts.iter().enumerate() {
        if i == 0 {
            out.push_str(part);
        } else if let Some(rest) = part.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(part);
        }
    }
    out
}

/// Parses the textual polynomial format: terms joined by +/-, each term a
/// '*'-separated product of an optional coefficient literal and variable
/// powers `Xi^e`. Function-field coefficients with internal arithmetic must
/// be parenthesized, e.g. "(t+1)*X1*X2".
pub fn parse_poly<K: Field>(k: &K, nvars: usize, s: &str) -> Result<MultiPoly<K>, Error> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::parse("empty polynomial"));
    }
    let mut terms: Vec<(bool, String)> = vec![];
    let mut depth = 0usize;
    let mut cur = String::new();
    let mut sign = false;
    let mut seen_any = false;
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            '+' | '-' if depth == 0 && seen_any && !cur.trim().is_empty() => {
                terms.push((sign, std::mem::take(&mut cur)));
                sign = ch == '-';
            }
            '-' if depth == 0 && cur.trim().is_empty() => {
                sign = !sign;
            }
            '+' if depth == 0 && cur.trim().is_empty() => {}
            _ => {
                if !ch.is_whitespace() {
                    seen_any = true;
                }
                cur.push(ch);
            }
        }
    }
    if !cur.trim().is_empty() {
        terms.push((sign, cur));
    }
    if terms.is_empty() {
        return Err(Error::parse(format!("no terms in polynomial {s:?}")));
    }
    let mut acc = MultiPoly::zero(nvars);
    for (neg, term) in terms {
        let factors = split_factors(&term);
        let mut coeff = k.one();
        let mut exps = vec![0u16; nvars];
        for f in factors {
            let f = f.trim();
            if f.is_empty() {
                return Err(Error::parse(format!("empty factor in {term:?}")));
            }
            if let Some(rest) = f.strip_prefix('X') {
                let (idx_s, exp_s) = match rest.find('^') {
                    Some(p) => (&rest[..p], &rest[p + 1..]),
                    None => (rest, "1"),
                };
                let idx: usize = idx_s
                    .parse()
                    .map_err(|_| Error::parse(format!("bad variable {f:?}")))?;
                if idx == 0 || idx > nvars {
                    return Err(Error::parse(format!(
                        "variable X{idx} out of range 1..={nvars}"
                    )));
                }
                let e: u16 = exp_s
                    .parse()
                    .map_err(|_| Error::parse(format!("bad exponent in {f:?}")))?;
                exps[idx - 1] += e;
            } else {
                let lit = f.trim();
                let lit = if lit.starts_with('(') && lit.ends_with(')') && balanced(lit) {
                    &lit[1..lit.len() - 1]
                } else {
                    lit
                };
                let c = k.parse_elem(lit)?;
                coeff = k.mul(&coeff, &c);
            }
        }
        if neg {
            coeff = k.neg(&coeff);
        }
        acc = acc.add(k, &MultiPoly::monomial(k, nvars, exps, coeff));
    }
    Ok(acc)
}

fn balanced(s: &str) -> bool {
    let mut depth = 0i64;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 && i + 1 != s.len() {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}

fn split_factors(term: &str) -> Vec<String> {
    let mut out = vec![];
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in term.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            '*' if depth == 0 => out.push(std::mem::take(&mut cur)),
            _ => cur.push(ch),
        }
    }
    out.push(cur);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FqT, Rationals};
    use num_bigint::BigInt;

    fn k() -> Rationals {
        Rationals
    }

    fn qp(nvars: usize, s: &str) -> MultiPoly<Rationals> {
        parse_poly(&k(), nvars, s).unwrap()
    }

    #[test]
    fn parse_render_roundtrip() {
        for s in [
            "X1*X2 - X3^2",
            "1/2*X1^3 + 3*X2^2 - 1",
            "X1",
            "-X1 + X2",
            "2",
        ] {
            let p = qp(3, s);
            let r = render_poly(&k(), &p);
            let p2 = qp(3, &r);
            assert_eq!(p, p2, "roundtrip {s} -> {r}");
        }
        let ff = FqT::new(3).unwrap();
        let p = parse_poly(&ff, 2, "(t+1)*X1^2 + (2t)*X1*X2 + 2*X2^2").unwrap();
        let r = render_poly(&ff, &p);
        let p2 = parse_poly(&ff, 2, &r).unwrap();
        assert_eq!(p, p2);
    }

    #[test]
    fn evaluate_examples() {
        let f = k();
        assert_eq!(
            qp(2, "X1*X2").evaluate(&f, &[f.from_i64(2), f.from_i64(3)]),
            f.from_i64(6)
        );
        assert_eq!(
            qp(2, "X1^2 - X2^2").evaluate(&f, &[f.from_i64(1), f.from_i64(1)]),
            f.from_i64(0)
        );
        assert_eq!(
            qp(1, "1/2*X1^3").evaluate(&f, &[f.from_i64(2)]),
            f.from_i64(4)
        );
    }

    #[test]
    fn reduction_examples() {
        let f = k();
        let ord = MonomialOrder::lex(3);
        // X1X2 reduced by X1X2 - X3^2 leaves X3^2 with quotient 1
        let p1 = qp(3, "X1*X2");
        let p2 = qp(3, "X1*X2 - X3^2");
        let (pr, r) = reduce_by_single(&f, &p1, &p2, &ord);
        assert_eq!(pr, qp(3, "X3^2"));
        assert_eq!(r, qp(3, "1"));
        // leading monomial divides nothing
        let p1 = qp(3, "X3");
        let (pr, r) = reduce_by_single(&f, &p1, &p2, &ord);
        assert_eq!(pr, qp(3, "X3"));
        assert!(r.is_zero());
        // two division steps
        let p1 = qp(3, "X1^2*X2^2");
        let p2 = qp(3, "X1*X2");
        let (pr, r) = reduce_by_single(&f, &p1, &p2, &ord);
        assert!(pr.is_zero());
        assert_eq!(r, qp(3, "X1*X2"));
    }

    #[test]
    fn reduction_exactness_randomized() {
        let f = k();
        let mut state = 0xdeadbeefu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for trial in 0..100 {
            let nvars = 2 + (next() % 2) as usize;
            let ord = MonomialOrder::lex(nvars);
            let mk = |next: &mut dyn FnMut() -> u64| {
                let nterms = 1 + next() % 4;
                MultiPoly::new(
                    &f,
                    nvars,
                    (0..nterms).map(|_| {
                        let e: Exps = (0..nvars).map(|_| (next() % 3) as u16).collect();
                        let c = f.from_i64((next() % 9) as i64 - 4);
                        (e, c)
                    }),
                )
            };
            let p1 = mk(&mut next);
            let mut p2 = mk(&mut next);
            if p2.is_zero() {
                p2 = qp(nvars, "X1");
            }
            let (pr, r) = reduce_by_single(&f, &p1, &p2, &ord);
            // exact identity
            let back = pr.add(&f, &r.mul(&f, &p2));
            assert_eq!(back, p1, "trial {trial}");
            // non-divisibility
            let (lm, _) = p2.leading(&ord).unwrap();
            for (e, _) in pr.terms() {
                assert!(!exp_divides(lm, e));
            }
        }
    }

    #[test]
    fn restriction_examples() {
        let f = k();
        // identity basis: restriction is the polynomial itself
        let p = qp(2, "X1^2 + X1*X2");
        let id = linalg::identity(&f, 2);
        assert_eq!(restrict_to_basis(&f, &p, &id).unwrap(), p);
        // P = X1 + X2 restricted to span{(1,2)}: 3Y
        let p = qp(2, "X1 + X2");
        let a = Matrix::from_cols(vec![vec![f.from_i64(1), f.from_i64(2)]]).unwrap();
        let r = restrict_to_basis(&f, &p, &a).unwrap();
        assert_eq!(r, parse_poly(&f, 1, "3*X1").unwrap());
        // X1^2 - X2^2 vanishes on the diagonal
        let p = qp(2, "X1^2 - X2^2");
        let a = Matrix::from_cols(vec![vec![f.from_i64(1), f.from_i64(1)]]).unwrap();
        assert!(restrict_to_basis(&f, &p, &a).unwrap().is_zero());
    }

    #[test]
    fn poly_height_examples() {
        let f = k();
        let (h, _) = poly_heights(&f, &qp(2, "X1")).unwrap();
        assert_eq!(h, Height::one());
        let (h, _) = poly_heights(&f, &qp(2, "1/2*X1^2 + 3*X2^2")).unwrap();
        assert_eq!(h, Height::from_int(&BigInt::from(6)));
        let (h, _) = poly_heights(&f, &qp(3, "X1*X2 - X3^2")).unwrap();
        assert_eq!(h, Height::one());
        assert!(poly_heights(&f, &MultiPoly::<Rationals>::zero(2)).is_err());
    }

    #[test]
    fn canonical_scaling() {
        let f = k();
        let p = qp(2, "2/3*X1^2 - 4/3*X2^2");
        let c = p.canonical(&f);
        assert_eq!(c, qp(2, "X1^2 - 2*X2^2"));
        // leading coefficient positive
        let p = qp(2, "-X1^2 + X2^2");
        assert_eq!(p.canonical(&f), qp(2, "X1^2 - X2^2"));
    }

    #[test]
    fn nonvanishing_point_contract() {
        let f = k();
        let consts = Constants::new(crate::field::Field::descriptor(&f));
        for s in ["X1", "X1^2 + X2^2", "X1^2*X2 - X1*X2^2"] {
            let p = qp(2, s);
            let w = nonvanishing_point(&f, &consts, &p, 100_000).unwrap();
            assert!(!f.is_zero(&w.value));
            assert_eq!(p.evaluate(&f, &w.point), w.value);
            assert!(w.height.leq_bound(&w.bound, 1e-9), "h(z) <= A(D) for {s}");
        }
    }
}
