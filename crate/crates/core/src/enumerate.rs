//! Deterministic exhaustive enumeration of points of bounded height.
//!
//! Points are produced in nondecreasing height, with lexicographic
//! tie-breaking inside a height shell, one canonical primitive representative
//! per projective point. Over `Q` a shell is the max-abs value of the
//! primitive integer vector; over `F_q(t)` it is the max degree of the
//! primitive polynomial vector (the height is `e^shell`). Affine streams
//! enumerate by the inhomogeneous height through the primitive representative
//! of the extended vector `(1, x)`.
//!
//! Every stream carries an explicit point budget; exhausting it is a distinct
//! outcome from completing the cap, reported as a resource error.

use crate::field::{fq, Field, FfElem, FqT, Rationals};
use crate::heights::Subspace;
use crate::linalg::{self, Matrix};
use crate::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Cap and budget for one enumeration.
#[derive(Clone, Copy, Debug)]
pub struct StreamCfg {
    /// Largest shell index to visit (inclusive).
    pub cap_shell: u64,
    /// Maximum number of points to yield before reporting exhaustion.
    pub budget: u64,
}

impl StreamCfg {
    pub fn new(cap_shell: u64, budget: u64) -> StreamCfg {
        StreamCfg { cap_shell, budget }
    }
}

/// Fields whose projective and affine points can be enumerated shell by
/// shell.
pub trait Enumerable: Field {
    fn min_projective_shell(&self) -> u64;
    fn min_affine_shell(&self) -> u64;
    /// Canonical primitive projective representatives of height-shell
    /// `shell`, lexicographically ordered.
    fn projective_shell_iter(
        &self,
        n: usize,
        shell: u64,
    ) -> Box<dyn Iterator<Item = Vec<Self::Elem>>>;
    /// Affine points whose inhomogeneous height has shell index `shell`,
    /// ordered by the primitive representative of the extended vector.
    fn affine_shell_iter(
        &self,
        n: usize,
        shell: u64,
    ) -> Box<dyn Iterator<Item = Vec<Self::Elem>>>;
    /// Total order on elements used for lexicographic tie-breaks.
    fn cmp_elem(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering;
}

pub fn cmp_points<K: Enumerable>(k: &K, a: &[K::Elem], b: &[K::Elem]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match k.cmp_elem(x, y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

// ---------------------------------------------------------------------------
// Q shells
// ---------------------------------------------------------------------------

/// Lexicographic odometer over [-b, b]^n (last coordinate fastest).
struct BoxOdometer {
    b: i64,
    cur: Vec<i64>,
    started: bool,
    done: bool,
}

impl BoxOdometer {
    fn new(n: usize, b: i64) -> BoxOdometer {
        BoxOdometer {
            b,
            cur: vec![-b; n],
            started: false,
            done: n == 0,
        }
    }
}

impl Iterator for BoxOdometer {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.cur.clone());
        }
        let mut i = self.cur.len();
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.cur[i] < self.b {
                self.cur[i] += 1;
                for j in i + 1..self.cur.len() {
                    self.cur[j] = -self.b;
                }
                return Some(self.cur.clone());
            }
        }
    }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Enumerable for Rationals {
    fn min_projective_shell(&self) -> u64 {
        1
    }

    fn min_affine_shell(&self) -> u64 {
        1
    }

    fn projective_shell_iter(
        &self,
        n: usize,
        shell: u64,
    ) -> Box<dyn Iterator<Item = Vec<BigRational>>> {
        let b = shell as i64;
        if b == 0 {
            return Box::new(std::iter::empty());
        }
        let it = BoxOdometer::new(n, b).filter_map(move |v| {
            if v.iter().map(|x| x.abs()).max() != Some(b) {
                return None;
            }
            let first = v.iter().find(|&&x| x != 0)?;
            if *first < 0 {
                return None;
            }
            let g = v.iter().fold(0i64, |acc, &x| gcd_i64(acc, x));
            if g != 1 {
                return None;
            }
            Some(
                v.iter()
                    .map(|&x| BigRational::from_integer(BigInt::from(x)))
                    .collect(),
            )
        });
        Box::new(it)
    }

    fn affine_shell_iter(
        &self,
        n: usize,
        shell: u64,
    ) -> Box<dyn Iterator<Item = Vec<BigRational>>> {
        let s = shell as i64;
        if s == 0 {
            return Box::new(std::iter::empty());
        }
        let it = (1..=s).flat_map(move |c| {
            BoxOdometer::new(n, s).filter_map(move |v| {
                let ma = v.iter().map(|x| x.abs()).max().unwrap_or(0);
                if ma.max(c) != s {
                    return None;
                }
                let g = v.iter().fold(c, |acc, &x| gcd_i64(acc, x));
                if g != 1 {
                    return None;
                }
                Some(
                    v.iter()
                        .map(|&x| {
                            BigRational::new(BigInt::from(x), BigInt::from(c))
                        })
                        .collect(),
                )
            })
        });
        Box::new(it)
    }

    fn cmp_elem(&self, a: &BigRational, b: &BigRational) -> Ordering {
        a.cmp(b)
    }
}

// ---------------------------------------------------------------------------
// F_q(t) shells
// ---------------------------------------------------------------------------

/// Odometer over polynomial code tuples (last coordinate fastest); the code
/// order on one coordinate equals the (degree, top coefficients) order.
struct CodeOdometer {
    count: u64,
    cur: Vec<u64>,
    started: bool,
    done: bool,
}

impl CodeOdometer {
    fn new(n: usize, count: u64) -> CodeOdometer {
        CodeOdometer {
            count,
            cur: vec![0; n],
            started: false,
            done: n == 0 || count == 0,
        }
    }
}

impl Iterator for CodeOdometer {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.cur.clone());
        }
        let mut i = self.cur.len();
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.cur[i] + 1 < self.count {
                self.cur[i] += 1;
                for j in i + 1..self.cur.len() {
                    self.cur[j] = 0;
                }
                return Some(self.cur.clone());
            }
        }
    }
}

fn pow_saturating(q: u64, e: u64) -> u64 {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(q);
    }
    acc
}

impl Enumerable for FqT {
    fn min_projective_shell(&self) -> u64 {
        0
    }

    fn min_affine_shell(&self) -> u64 {
        0
    }

    fn projective_shell_iter(
        &self,
        n: usize,
        shell: u64,
    ) -> Box<dyn Iterator<Item = Vec<FfElem>>> {
        let q = self.q();
        let count = pow_saturating(q, shell + 1);
        let k = shell as i64;
        let it = CodeOdometer::new(n, count).filter_map(move |codes| {
            let polys: Vec<fq::Poly> = codes.iter().map(|&c| fq::decode(q, c)).collect();
            let maxdeg = polys.iter().map(fq::deg).max().unwrap_or(-1);
            if maxdeg != k {
                return None;
            }
            let first = polys.iter().find(|p| !fq::is_zero(p))?;
            if *first.last().unwrap() != 1 {
                return None;
            }
            let mut g: fq::Poly = vec![];
            for p in &polys {
                g = fq::gcd(q, &g, p);
            }
            if fq::deg(&g) != 0 {
                return None;
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
        });
        Box::new(it)
    }

    fn affine_shell_iter(
        &self,
        n: usize,
        shell: u64,
    ) -> Box<dyn Iterator<Item = Vec<FfElem>>> {
        let q = self.q();
        let ff = *self;
        let k = shell as i64;
        let coord_count = pow_saturating(q, shell + 1);
        // monic denominators of degree 0..=shell, in (degree, code) order
        let dens = (0..=shell).flat_map(move |d| {
            (0..pow_saturating(q, d)).map(move |low| {
                let mut p = fq::decode(q, low);
                p.resize(d as usize + 1, 0);
                p[d as usize] = 1;
                p
            })
        });
        let it = dens.flat_map(move |den| {
            let den2 = den.clone();
            CodeOdometer::new(n, coord_count).filter_map(move |codes| {
                let polys: Vec<fq::Poly> =
                    codes.iter().map(|&c| fq::decode(q, c)).collect();
                let maxdeg = polys
                    .iter()
                    .map(fq::deg)
                    .max()
                    .unwrap_or(-1)
                    .max(fq::deg(&den2));
                if maxdeg != k {
                    return None;
                }
                let mut g = den2.clone();
                for p in &polys {
                    g = fq::gcd(q, &g, p);
                }
                if fq::deg(&g) != 0 {
                    return None;
                }
                Some(
                    polys
                        .into_iter()
                        .map(|p| ff.elem(p, den2.clone()))
                        .collect(),
                )
            })
        });
        Box::new(it)
    }

    fn cmp_elem(&self, a: &FfElem, b: &FfElem) -> Ordering {
        fq::cmp(&a.num, &b.num).then_with(|| fq::cmp(&a.den, &b.den))
    }
}

// ---------------------------------------------------------------------------
// Generic streams
// ---------------------------------------------------------------------------

/// Ambient stream: every projective (or affine) point with shell index up to
/// the cap, nondecreasing shells, lexicographic inside a shell.
pub struct Points<K: Enumerable> {
    k: K,
    n: usize,
    cfg: StreamCfg,
    affine: bool,
    shell: u64,
    inner: Option<Box<dyn Iterator<Item = Vec<K::Elem>>>>,
    yielded: u64,
    budget_hit: bool,
}

impl<K: Enumerable> Points<K> {
    pub fn projective(k: &K, n: usize, cfg: StreamCfg) -> Points<K> {
        let shell = k.min_projective_shell();
        Points {
            k: k.clone(),
            n,
            cfg,
            affine: false,
            shell,
            inner: None,
            yielded: 0,
            budget_hit: false,
        }
    }

    pub fn affine(k: &K, n: usize, cfg: StreamCfg) -> Points<K> {
        let shell = k.min_affine_shell();
        Points {
            k: k.clone(),
            n,
            cfg,
            affine: true,
            shell,
            inner: None,
            yielded: 0,
            budget_hit: false,
        }
    }
}

impl<K: Enumerable> Iterator for Points<K> {
    type Item = Result<(Vec<K::Elem>, u64), Error>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.budget_hit {
            return None;
        }
        loop {
            if self.shell > self.cfg.cap_shell {
                return None;
            }
            if self.inner.is_none() {
                self.inner = Some(if self.affine {
                    self.k.affine_shell_iter(self.n, self.shell)
                } else {
                    self.k.projective_shell_iter(self.n, self.shell)
                });
            }
            match self.inner.as_mut().unwrap().next() {
                Some(p) => {
                    if self.yielded >= self.cfg.budget {
                        self.budget_hit = true;
                        return Some(Err(Error::resource(format!(
                            "point budget {} exhausted at shell {}",
                            self.cfg.budget, self.shell
                        ))));
                    }
                    self.yielded += 1;
                    return Some(Ok((p, self.shell)));
                }
                None => {
                    self.inner = None;
                    self.shell += 1;
                }
            }
        }
    }
}

/// Projective points of a proper subspace, streamed in nondecreasing ambient
/// height. The basis is normalized so an invertible row subset becomes the
/// identity; a point's parameter vector is then its own coordinate subvector
/// up to scale, so the parameter height never exceeds the ambient height and
/// a height bucket is complete as soon as the parameter stream has passed
/// its shell.
pub struct SubspacePoints<K: Enumerable> {
    k: K,
    /// Basis with the identity on the chosen row subset (rational entries).
    normalized: Matrix<K::Elem>,
    inner: Points<K>,
    lookahead: Option<(Vec<K::Elem>, u64)>,
    buckets: BTreeMap<u64, Vec<Vec<K::Elem>>>,
    emit_shell: u64,
    emit: Vec<Vec<K::Elem>>,
    emit_idx: usize,
    emitted: u64,
    budget: u64,
    cap_shell: u64,
    inner_done: bool,
    failed: bool,
}

impl<K: Enumerable> SubspacePoints<K> {
    pub fn new(k: &K, space: &Subspace<K>, cfg: StreamCfg) -> Result<SubspacePoints<K>, Error> {
        let l = space.dim();
        if l == 0 {
            return Err(Error::precondition("cannot enumerate the zero subspace"));
        }
        let basis = space.basis().clone();
        let rows = linalg::independent_rows(k, &basis);
        let sq = basis.submatrix(&rows, &(0..l).collect::<Vec<_>>());
        let inv = linalg::inverse(k, &sq).expect("independent rows");
        let normalized = linalg::mat_mul(k, &basis, &inv);
        // parameter classes biject with ambient classes, with parameter
        // height at most the ambient height; a small factor absorbs classes
        // whose ambient height overshoots the cap
        let inner = Points::projective(
            k,
            l,
            StreamCfg::new(cfg.cap_shell, cfg.budget.saturating_mul(4)),
        );
        Ok(SubspacePoints {
            k: k.clone(),
            normalized,
            inner,
            lookahead: None,
            buckets: BTreeMap::new(),
            emit_shell: k.min_projective_shell(),
            emit: vec![],
            emit_idx: 0,
            emitted: 0,
            budget: cfg.budget,
            cap_shell: cfg.cap_shell,
            inner_done: false,
            failed: false,
        })
    }

    /// The target cap shell of this stream (in ambient height shells).
    fn cap(&self) -> u64 {
        self.cap_shell
    }

    fn pump_through(&mut self, t_shell: u64) -> Result<(), Error> {
        loop {
            if self.inner_done {
                return Ok(());
            }
            if let Some((_, s)) = &self.lookahead {
                if *s > t_shell {
                    return Ok(());
                }
                let (t, _) = self.lookahead.take().unwrap();
                let x = linalg::mat_vec(&self.k, &self.normalized, &t);
                let xp = self
                    .k
                    .primitive_vector(&x)
                    .expect("basis has full column rank");
                let shell = self.k.vector_shell(&xp);
                if shell <= self.cap() {
                    self.buckets.entry(shell).or_default().push(xp);
                }
            }
            match self.inner.next() {
                None => self.inner_done = true,
                Some(Err(e)) => {
                    self.failed = true;
                    return Err(e);
                }
                Some(Ok(item)) => self.lookahead = Some(item),
            }
        }
    }
}

impl<K: Enumerable> Iterator for SubspacePoints<K> {
    type Item = Result<(Vec<K::Elem>, u64), Error>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        loop {
            if self.emit_idx < self.emit.len() {
                if self.emitted >= self.budget {
                    self.failed = true;
                    return Some(Err(Error::resource(format!(
                        "point budget {} exhausted at shell {}",
                        self.budget, self.emit_shell
                    ))));
                }
                let p = self.emit[self.emit_idx].clone();
                self.emit_idx += 1;
                self.emitted += 1;
                return Some(Ok((p, self.emit_shell)));
            }
            if self.emit_idx > 0 || !self.emit.is_empty() {
                self.emit_shell += 1;
                self.emit = vec![];
                self.emit_idx = 0;
            }
            // find the next nonempty bucket
            loop {
                if self.emit_shell > self.cap() {
                    return None;
                }
                if let Err(e) = self.pump_through(self.emit_shell) {
                    return Some(Err(e));
                }
                if let Some(mut points) = self.buckets.remove(&self.emit_shell) {
                    let k = self.k.clone();
                    points.sort_by(|a, b| cmp_points(&k, a, b));
                    self.emit = points;
                    self.emit_idx = 0;
                    break;
                }
                self.emit_shell += 1;
            }
        }
    }
}

/// Greedy successive-minima basis of a subspace: stream points in
/// nondecreasing height and keep each one that is independent of those kept
/// so far. The result attains the successive minima of the max-norm height,
/// so its height product is minimal over all vector-space bases.
pub fn greedy_min_basis<K: Enumerable + 'static>(
    k: &K,
    space: &Subspace<K>,
    cfg: StreamCfg,
) -> Result<Vec<Vec<K::Elem>>, Error> {
    let l = space.dim();
    let mut acc: Vec<Vec<K::Elem>> = vec![];
    for item in subspace_points(k, space, cfg)? {
        let (p, _) = item?;
        acc.push(p);
        let m = Matrix::from_cols(acc.clone())?;
        if linalg::rank(k, &m) != acc.len() {
            acc.pop();
        }
        if acc.len() == l {
            return Ok(acc);
        }
    }
    Err(Error::resource(format!(
        "found only {} of {} independent vectors below the cap",
        acc.len(),
        l
    )))
}

/// Convenience: stream of projective points of a subspace, falling back to
/// the plain ambient stream when the subspace is everything.
pub fn subspace_points<K: Enumerable + 'static>(
    k: &K,
    space: &Subspace<K>,
    cfg: StreamCfg,
) -> Result<Box<dyn Iterator<Item = Result<(Vec<K::Elem>, u64), Error>>>, Error> {
    if space.dim() == space.ambient() {
        Ok(Box::new(Points::projective(k, space.ambient(), cfg)))
    } else {
        Ok(Box::new(SubspacePoints::new(k, space, cfg)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use num_traits::Zero;

    fn collect_ok<K: Enumerable>(
        it: impl Iterator<Item = Result<(Vec<K::Elem>, u64), Error>>,
        k: &K,
    ) -> Vec<Vec<String>> {
        it.map(|r| {
            let (p, _) = r.expect("no budget error");
            p.iter().map(|e| k.render_elem(e)).collect()
        })
        .collect()
    }

    #[test]
    fn projective_points_of_q2_shell_one() {
        let k = Rationals;
        let pts = collect_ok(Points::projective(&k, 2, StreamCfg::new(1, 1000)), &k);
        assert_eq!(
            pts,
            vec![
                vec!["0", "1"],
                vec!["1", "-1"],
                vec!["1", "0"],
                vec!["1", "1"]
            ]
        );
    }

    #[test]
    fn projective_line_over_f3_constants() {
        let k = FqT::new(3).unwrap();
        let pts = collect_ok(Points::projective(&k, 2, StreamCfg::new(0, 1000)), &k);
        assert_eq!(
            pts,
            vec![
                vec!["0", "1"],
                vec!["1", "0"],
                vec!["1", "1"],
                vec!["1", "2"]
            ]
        );
    }

    #[test]
    fn one_dimensional_cap_zero() {
        let k = Rationals;
        let pts = collect_ok(Points::projective(&k, 1, StreamCfg::new(1, 10)), &k);
        assert_eq!(pts, vec![vec!["1"]]);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let k = Rationals;
        let mut it = Points::projective(&k, 2, StreamCfg::new(5, 3));
        assert!(it.next().unwrap().is_ok());
        assert!(it.next().unwrap().is_ok());
        assert!(it.next().unwrap().is_ok());
        assert!(matches!(it.next(), Some(Err(Error::Resource(_)))));
        assert!(it.next().is_none());
    }

    #[test]
    fn enumeration_count_matches_combinatorial_recount() {
        // primitive sign-normalized vectors in Z^2 with max-abs <= B:
        // count = (sum over shells) and equals (1/2) * #(primitive in box \ 0)
        let k = Rationals;
        for cap in 1..=6u64 {
            let count = Points::projective(&k, 2, StreamCfg::new(cap, 100_000))
                .filter(|r| r.is_ok())
                .count() as i64;
            let b = cap as i64;
            let mut expect = 0i64;
            for x in -b..=b {
                for y in -b..=b {
                    if (x, y) != (0, 0) && gcd_i64(x, y) == 1 {
                        expect += 1;
                    }
                }
            }
            assert_eq!(count * 2, expect, "cap {cap}");
        }
    }

    #[test]
    fn affine_stream_visits_origin_first_shell() {
        let k = Rationals;
        let pts: Vec<_> = Points::affine(&k, 2, StreamCfg::new(1, 100))
            .map(|r| r.unwrap().0)
            .collect();
        // shell 1 contains the origin (representative (1, 0, 0))
        assert!(pts.iter().any(|p| p.iter().all(|x| x.is_zero())));
        // h of every yielded point is exactly 1
        for p in &pts {
            assert_eq!(
                crate::heights::height_inhom(&k, p),
                crate::height::Height::one()
            );
        }
    }

    #[test]
    fn subspace_stream_orders_by_ambient_height() {
        let k = Rationals;
        // line spanned by (1, 2) in Q^2
        let v = Subspace::from_vectors(
            &k,
            2,
            &[vec![k.from_i64(1), k.from_i64(2)]],
        )
        .unwrap();
        let pts: Vec<_> = SubspacePoints::new(&k, &v, StreamCfg::new(10, 1000))
            .unwrap()
            .map(|r| r.unwrap())
            .collect();
        // the only projective point is (1, 2) itself, at shell 2
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].1, 2);
        // plane x1 + x2 - x3 = 0 in Q^3: first points in height order
        let eqs = Matrix::from_rows(vec![vec![
            k.from_i64(1),
            k.from_i64(1),
            k.from_i64(-1),
        ]])
        .unwrap();
        let v = Subspace::from_equations(&k, &eqs).unwrap();
        let pts: Vec<_> = SubspacePoints::new(&k, &v, StreamCfg::new(3, 100_000))
            .unwrap()
            .map(|r| r.unwrap())
            .collect();
        let mut last = 0;
        for (p, s) in &pts {
            assert!(*s >= last);
            last = *s;
            assert_eq!(k.vector_shell(p), *s);
            // membership: x1 + x2 = x3
            let sum = k.add(&p[0], &p[1]);
            assert_eq!(sum, p[2]);
        }
        // (0,1,1) and (1,0,1) and (1,-1,0) are the shell-1 points
        assert_eq!(pts.iter().filter(|(_, s)| *s == 1).count(), 3);
    }

    #[test]
    fn ff_subspace_stream() {
        let k = FqT::new(3).unwrap();
        let t = k.from_poly(vec![0, 1]);
        let v = Subspace::from_vectors(&k, 2, &[vec![k.one(), t]]).unwrap();
        let pts: Vec<_> = SubspacePoints::new(&k, &v, StreamCfg::new(3, 10_000))
            .unwrap()
            .map(|r| r.unwrap())
            .collect();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].1, 1);
    }
}

