//! Structure theory of a quadratic space (V, F): radical, rank, orthogonal
//! complements, hyperbolic pairs, Witt decomposition, maximal totally
//! isotropic extensions and the quadric parametrization map.
//!
//! Isotropic vectors are found by exhaustive projective enumeration in
//! increasing height with lexicographic tie-breaking. Every search is capped;
//! the default cap is the explicit bound below which an isotropic vector is
//! guaranteed to exist when the space is isotropic, so completing a search
//! without a hit certifies anisotropy up to that height. Callers can override
//! the cap, in which case an empty search is reported as undetermined rather
//! than anisotropic.

use crate::bounds::{self, Bound};
use crate::constants::Constants;
use crate::enumerate::{greedy_min_basis, subspace_points, Enumerable, StreamCfg};
use crate::field::Field;
use crate::height::Height;
use crate::heights::{self, Subspace};
use crate::interval::LogVal;
use crate::linalg::{self, Matrix};
use crate::polyalg::MultiPoly;
use crate::Error;

/// A nonzero symmetric coefficient matrix with its cached height (the matrix
/// viewed as a vector in K^(N^2)).
#[derive(Clone, Debug)]
pub struct QuadForm<K: Field> {
    n: usize,
    mat: Matrix<K::Elem>,
    height: Height,
    height_euclid: Height,
}

impl<K: Field> QuadForm<K> {
    pub fn new(k: &K, mat: Matrix<K::Elem>) -> Result<Self, Error> {
        if mat.rows() != mat.cols() {
            return Err(Error::dim("coefficient matrix must be square"));
        }
        let n = mat.rows();
        for i in 0..n {
            for j in i + 1..n {
                if mat.get(i, j) != mat.get(j, i) {
                    return Err(Error::parse(format!(
                        "coefficient matrix not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let v = mat.as_vector();
        if v.iter().all(|e| k.is_zero(e)) {
            return Err(Error::precondition("zero quadratic form"));
        }
        let height = k.height_max(&v);
        let height_euclid = k.height_euclid(&v);
        Ok(QuadForm {
            n,
            mat,
            height,
            height_euclid,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Matrix<K::Elem> {
        &self.mat
    }

    pub fn height_max(&self) -> &Height {
        &self.height
    }

    /// Euclidean-at-infinity height of the coefficient vector; the radical
    /// height bound is stated through this variant.
    pub fn height_euclid(&self) -> &Height {
        &self.height_euclid
    }

    /// F(x, y) = x^T F y.
    pub fn bilinear(&self, k: &K, x: &[K::Elem], y: &[K::Elem]) -> K::Elem {
        assert_eq!(x.len(), self.n, "dimension mismatch");
        assert_eq!(y.len(), self.n, "dimension mismatch");
        let fy = linalg::mat_vec(k, &self.mat, y);
        linalg::dot(k, x, &fy)
    }

    /// F(x) = F(x, x).
    pub fn quad(&self, k: &K, x: &[K::Elem]) -> K::Elem {
        self.bilinear(k, x, x)
    }

    /// The vector F x.
    pub fn apply(&self, k: &K, x: &[K::Elem]) -> Vec<K::Elem> {
        linalg::mat_vec(k, &self.mat, x)
    }

    /// The quadratic polynomial sum f_ij X_i X_j.
    pub fn to_poly(&self, k: &K) -> MultiPoly<K> {
        poly_of_sym_matrix(k, &self.mat)
    }
}

/// Gram matrix B^T F B of the form on the columns of B.
pub fn gram<K: Field>(k: &K, form: &Matrix<K::Elem>, basis: &Matrix<K::Elem>) -> Matrix<K::Elem> {
    let fb = linalg::mat_mul(k, form, basis);
    linalg::mat_mul(k, &basis.transpose(), &fb)
}

/// Quadratic polynomial of a symmetric matrix in its own dimension.
pub fn poly_of_sym_matrix<K: Field>(k: &K, m: &Matrix<K::Elem>) -> MultiPoly<K> {
    let n = m.rows();
    let mut terms = vec![];
    for i in 0..n {
        for j in 0..n {
            let c = m.get(i, j).clone();
            if k.is_zero(&c) {
                continue;
            }
            let mut e = vec![0u16; n];
            e[i] += 1;
            e[j] += 1;
            terms.push((e, c));
        }
    }
    MultiPoly::new(k, n, terms)
}

/// Search controls for the isotropic-vector enumerations.
#[derive(Clone, Copy, Debug)]
pub struct SearchParams {
    /// Overrides the guaranteed-existence cap (natural log of the height).
    pub cap_log: Option<f64>,
    /// Maximum points yielded per enumeration.
    pub budget: u64,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            cap_log: None,
            budget: 2_000_000,
        }
    }
}

/// Witt decomposition data: radical basis, hyperbolic pairs and the
/// anisotropic part, all pairwise orthogonal. Anisotropy of the last part is
/// certified only up to the recorded search height.
#[derive(Clone, Debug)]
pub struct WittData<K: Field> {
    pub radical_basis: Vec<Vec<K::Elem>>,
    pub hyperbolic_pairs: Vec<(Vec<K::Elem>, Vec<K::Elem>)>,
    pub anisotropic_basis: Vec<Vec<K::Elem>>,
    /// Log-height up to which the anisotropic part was searched (present iff
    /// the anisotropic part is nonzero).
    pub anisotropy_cap_log: Option<f64>,
}

/// The quadratic space (V, F) with its cached structure data, computed
/// eagerly at construction and immutable afterwards.
#[derive(Clone, Debug)]
pub struct QuadSpace<K: Field> {
    space: Subspace<K>,
    form: QuadForm<K>,
    radical: Subspace<K>,
    rank: usize,
    witt: WittData<K>,
}

impl<K: Enumerable + 'static> QuadSpace<K> {
    pub fn new(
        k: &K,
        space: Subspace<K>,
        form: QuadForm<K>,
        params: &SearchParams,
    ) -> Result<Self, Error> {
        if form.n() != space.ambient() {
            return Err(Error::dim("form and subspace ambient dimensions differ"));
        }
        let radical = radical_of(k, &space, &form)?;
        let rank = space.dim() - radical.dim();
        let witt = witt_decompose_impl(k, &space, &form, &radical, params)?;
        Ok(QuadSpace {
            space,
            form,
            radical,
            rank,
            witt,
        })
    }

    pub fn space(&self) -> &Subspace<K> {
        &self.space
    }

    pub fn form(&self) -> &QuadForm<K> {
        &self.form
    }

    /// The radical of (V, F): singular points of V.
    pub fn radical(&self) -> &Subspace<K> {
        &self.radical
    }

    /// Dimension of the radical.
    pub fn lambda(&self) -> usize {
        self.radical.dim()
    }

    /// Rank of F on V: dim V - lambda.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn witt(&self) -> &WittData<K> {
        &self.witt
    }

    /// Witt index: number of hyperbolic planes split off.
    pub fn witt_index(&self) -> usize {
        self.witt.hyperbolic_pairs.len()
    }

    /// Dimension of every maximal totally isotropic subspace.
    pub fn max_isotropic_dim(&self) -> usize {
        self.witt_index() + self.lambda()
    }

    /// Does F have a nontrivial zero in V (up to the certification cap)?
    pub fn is_isotropic(&self) -> bool {
        self.max_isotropic_dim() > 0
    }

    /// Is x a nonsingular point of (V, F)?
    pub fn is_nonsingular(&self, k: &K, x: &[K::Elem]) -> bool {
        let fx = self.form.apply(k, x);
        self.space
            .basis()
            .col_vecs()
            .iter()
            .any(|b| !k.is_zero(&linalg::dot(k, b, &fx)))
    }
}

/// Radical of (V, F) computed as X ker(X^T F X).
pub fn radical_of<K: Field>(
    k: &K,
    space: &Subspace<K>,
    form: &QuadForm<K>,
) -> Result<Subspace<K>, Error> {
    let g = gram(k, form.matrix(), space.basis());
    let kernel = linalg::kernel_basis(k, &g);
    let vecs: Vec<Vec<K::Elem>> = kernel
        .iter()
        .map(|t| linalg::mat_vec(k, space.basis(), t))
        .collect();
    Subspace::from_vectors(k, space.ambient(), &vecs)
}

/// Orthogonal complement of U inside V: { x in V : F(x, u) = 0 for all u in
/// U }. When U is regular, V is the orthogonal direct sum of U and the
/// complement.
pub fn orth_complement_in<K: Field>(
    k: &K,
    u: &Subspace<K>,
    space: &Subspace<K>,
    form: &QuadForm<K>,
) -> Result<Subspace<K>, Error> {
    if !space.contains_subspace(k, u) {
        return Err(Error::precondition("U is not a subspace of V"));
    }
    // conditions on coordinates s of x = X s: (U^T F X) s = 0
    let fx = linalg::mat_mul(k, form.matrix(), space.basis());
    let cond = linalg::mat_mul(k, &u.basis().transpose(), &fx);
    let kernel = linalg::kernel_basis(k, &cond);
    let vecs: Vec<Vec<K::Elem>> = kernel
        .iter()
        .map(|s| linalg::mat_vec(k, space.basis(), s))
        .collect();
    let comp = Subspace::from_vectors(k, space.ambient(), &vecs)?;
    let u_gram = gram(k, form.matrix(), u.basis());
    if linalg::rank(k, &u_gram) == u.dim() {
        debug_assert_eq!(comp.dim() + u.dim(), space.dim());
        debug_assert_eq!(u.intersection(k, &comp)?.dim(), 0);
    }
    Ok(comp)
}

/// Guaranteed-existence cap (log of height) for an isotropic-vector search in
/// a subspace: transports the nonsingular-zero bound for the restricted form
/// through the subspace basis.
fn isotropic_cap_log<K: Field>(
    k: &K,
    consts: &Constants,
    sub: &Subspace<K>,
    form: &QuadForm<K>,
) -> f64 {
    let l = sub.dim() as u64;
    let g = gram(k, form.matrix(), sub.basis());
    let gv = g.as_vector();
    if gv.iter().all(|e| k.is_zero(e)) {
        // form vanishes identically: every point is isotropic
        return 0.0;
    }
    let hfa = k.height_max(&gv);
    let b = bounds::evaluate(consts, &Bound::NonsingularZeroRestricted { l, hfa });
    // ambient transport: h(A z) <= L^delta h(z) prod h(a_i)
    let mut cap = b.hi;
    if consts.descriptor().delta() == 1 {
        cap += (l as f64).ln();
    }
    for col in sub.basis().col_vecs() {
        cap += heights::height_inhom(k, &col).to_logval().hi;
    }
    cap + 1e-9
}

/// Minimal-height isotropic vector of the restriction of F to `sub`.
/// Returns Ok(None) when the search completed its cap without a hit, i.e.
/// the restriction is anisotropic up to the cap.
fn min_isotropic_in<K: Enumerable + 'static>(
    k: &K,
    consts: &Constants,
    sub: &Subspace<K>,
    form: &QuadForm<K>,
    params: &SearchParams,
) -> Result<(Option<Vec<K::Elem>>, f64), Error> {
    if sub.dim() == 0 {
        return Ok((None, 0.0));
    }
    let default_cap = isotropic_cap_log(k, consts, sub, form);
    let cap_log = params.cap_log.unwrap_or(default_cap);
    let cap_shell = k.shell_cap(cap_log);
    let cfg = StreamCfg::new(cap_shell, params.budget);
    let is_zero_at = k.quad_zero_tester(form.matrix());
    for item in subspace_points(k, sub, cfg)? {
        let (p, _) = item?;
        if is_zero_at(&p) {
            return Ok((Some(p), cap_log));
        }
    }
    if cap_log < default_cap {
        return Err(Error::resource(format!(
            "isotropic search cap {cap_log:.3} is below the guaranteed bound \
             {default_cap:.3}; result undetermined"
        )));
    }
    Ok((None, cap_log))
}

fn witt_decompose_impl<K: Enumerable + 'static>(
    k: &K,
    space: &Subspace<K>,
    form: &QuadForm<K>,
    radical: &Subspace<K>,
    params: &SearchParams,
) -> Result<WittData<K>, Error> {
    let consts = Constants::new(k.descriptor());
    let radical_basis = radical.basis_vectors();
    // regular part: a vector-space complement of the radical inside V
    let mut cur = complement_within(k, space, radical)?;
    let mut pairs = vec![];
    let mut anisotropy_cap_log = None;
    while cur.dim() > 0 {
        let (hit, cap_log) = min_isotropic_in(k, &consts, &cur, form, params)?;
        let Some(x) = hit else {
            anisotropy_cap_log = Some(cap_log);
            break;
        };
        // complete x to a hyperbolic pair: some basis vector u of the current
        // regular space has F(x, u) != 0 since x is nonsingular there
        let u = cur
            .basis_vectors()
            .into_iter()
            .find(|u| !k.is_zero(&form.bilinear(k, &x, u)))
            .expect("regular space has no singular points");
        let y = hyperbolic_partner(k, form, &x, &u);
        let plane = Subspace::from_vectors(k, space.ambient(), &[x.clone(), y.clone()])?;
        pairs.push((x, y));
        cur = orth_complement_in(k, &plane, &cur, form)?;
    }
    Ok(WittData {
        radical_basis,
        hyperbolic_pairs: pairs,
        anisotropic_basis: cur.basis_vectors(),
        anisotropy_cap_log: if cur.dim() > 0 { anisotropy_cap_log } else { None },
    })
}

/// y = F(u) x - 2 F(x, u) u: isotropic partner completing x to a hyperbolic
/// pair whenever F(x) = 0 and F(x, u) != 0.
pub fn hyperbolic_partner<K: Field>(
    k: &K,
    form: &QuadForm<K>,
    x: &[K::Elem],
    u: &[K::Elem],
) -> Vec<K::Elem> {
    let fu = form.quad(k, u);
    let fxu = form.bilinear(k, x, u);
    let two_fxu = k.add(&fxu, &fxu);
    let a = linalg::scale_vec(k, &fu, x);
    let b = linalg::scale_vec(k, &two_fxu, u);
    linalg::sub_vec(k, &a, &b)
}

/// Vector-space complement of `inner` within `outer`, chosen greedily from
/// the basis of `outer`.
pub fn complement_within<K: Field>(
    k: &K,
    outer: &Subspace<K>,
    inner: &Subspace<K>,
) -> Result<Subspace<K>, Error> {
    let mut acc = inner.basis_vectors();
    let mut comp = vec![];
    for v in outer.basis_vectors() {
        if acc.len() == outer.dim() {
            break;
        }
        acc.push(v.clone());
        let m = Matrix::from_cols(acc.clone())?;
        if linalg::rank(k, &m) == acc.len() {
            comp.push(v);
        } else {
            acc.pop();
        }
    }
    Subspace::from_vectors(k, outer.ambient(), &comp)
}

/// Certificate data for a constructed hyperbolic pair.
#[derive(Clone, Debug)]
pub struct HyperbolicPairCert {
    pub x_height: Height,
    pub x_bound: LogVal,
    pub y_height: Height,
    pub y_bound: LogVal,
}

/// Small-height hyperbolic pair of a regular 2-dimensional isotropic plane.
/// The first member is found by capped enumeration, the partner through a
/// nonvanishing point of the restricted form.
pub fn hyperbolic_pair<K: Enumerable + 'static>(
    k: &K,
    plane: &Subspace<K>,
    form: &QuadForm<K>,
    params: &SearchParams,
) -> Result<(Vec<K::Elem>, Vec<K::Elem>, HyperbolicPairCert), Error> {
    if plane.dim() != 2 {
        return Err(Error::precondition("hyperbolic plane must be 2-dimensional"));
    }
    let g = gram(k, form.matrix(), plane.basis());
    if linalg::rank(k, &g) != 2 {
        return Err(Error::precondition("plane is degenerate"));
    }
    let consts = Constants::new(k.descriptor());
    let hf = form.height_max().clone();
    let hh = plane.height_euclid().clone();
    let x_bound = bounds::evaluate(
        &consts,
        &Bound::HyperbolicFirst {
            hf: hf.clone(),
            hh: hh.clone(),
        },
    );
    let cap_shell = k.shell_cap(x_bound.hi + 1e-9);
    let cfg = StreamCfg::new(cap_shell, params.budget);
    let is_zero_at = k.quad_zero_tester(form.matrix());
    let mut x = None;
    for item in subspace_points(k, plane, cfg)? {
        let (p, _) = item?;
        if is_zero_at(&p) {
            x = Some(p);
            break;
        }
    }
    let Some(x) = x else {
        return Err(Error::precondition(
            "not a hyperbolic plane: no isotropic vector below the guaranteed bound",
        ));
    };
    // anisotropic point z of the plane via a nonvanishing point of the
    // restricted form
    let restricted = poly_of_sym_matrix(k, &g);
    let w = crate::polyalg::nonvanishing_point(k, &consts, &restricted, params.budget)?;
    let z = linalg::mat_vec(k, plane.basis(), &w.point);
    let fxz = form.bilinear(k, &x, &z);
    debug_assert!(!k.is_zero(&fxz), "regular plane forces F(x, z) != 0");
    let y = hyperbolic_partner(k, form, &x, &z);
    debug_assert!(k.is_zero(&form.quad(k, &y)));
    debug_assert!(!k.is_zero(&form.bilinear(k, &x, &y)));
    let y_bound = bounds::evaluate(
        &consts,
        &Bound::HyperbolicSecond {
            n: plane.ambient() as u64,
            hf,
            hh,
        },
    );
    let cert = HyperbolicPairCert {
        x_height: heights::height_inhom(k, &x),
        x_bound,
        y_height: heights::height_inhom(k, &y),
        y_bound,
    };
    Ok((x, y, cert))
}

/// Extends an isotropic x in V to a maximal totally isotropic subspace of
/// (V, F) by greedy minimal-height isotropic extension. The output always
/// contains the radical.
pub fn extend_to_max_isotropic<K: Enumerable + 'static>(
    k: &K,
    qs: &QuadSpace<K>,
    x: &[K::Elem],
    params: &SearchParams,
) -> Result<Subspace<K>, Error> {
    if x.iter().all(|e| k.is_zero(e)) {
        return Err(Error::precondition("zero vector cannot be extended"));
    }
    if !qs.space().contains(k, x) {
        return Err(Error::precondition("point not in the subspace"));
    }
    if !k.is_zero(&qs.form().quad(k, x)) {
        return Err(Error::precondition("point is not isotropic"));
    }
    let m = qs.max_isotropic_dim();
    let ambient = qs.space().ambient();
    let mut vecs = vec![x.to_vec()];
    vecs.extend(qs.radical().basis_vectors());
    let vecs = heights::independent_subset(k, ambient, &vecs);
    let mut w = Subspace::from_vectors(k, ambient, &vecs)?;
    while w.dim() < m {
        let z = isotropic_extension_of(k, qs.space(), qs.form(), &w, params)?;
        let mut vecs = w.basis_vectors();
        vecs.push(z);
        w = Subspace::from_vectors(k, ambient, &vecs)?;
    }
    let g = gram(k, qs.form().matrix(), w.basis());
    debug_assert!(g.as_vector().iter().all(|e| k.is_zero(e)));
    Ok(w)
}

/// One greedy extension step: a minimal-height isotropic vector orthogonal to
/// the totally isotropic W and independent of it. The complement section
/// splits into its radical (which contains W) and a regular part; the radical
/// is searched first, then the regular part under its guaranteed cap.
fn isotropic_extension_of<K: Enumerable + 'static>(
    k: &K,
    space: &Subspace<K>,
    form: &QuadForm<K>,
    w: &Subspace<K>,
    params: &SearchParams,
) -> Result<Vec<K::Elem>, Error> {
    let consts = Constants::new(k.descriptor());
    let u = orth_complement_in(k, w, space, form)?;
    let rad_u = radical_of(k, &u, form)?;
    if rad_u.dim() > w.dim() {
        // smallest point of rad(U) outside W
        let cap = bounds::evaluate(
            &consts,
            &Bound::SiegelProduct {
                l: rad_u.dim() as u64,
                hv: rad_u.height_euclid().clone(),
            },
        );
        let cfg = StreamCfg::new(k.shell_cap(cap.hi + 1e-9), params.budget);
        for item in subspace_points(k, &rad_u, cfg)? {
            let (p, _) = item?;
            if !w.contains(k, &p) {
                return Ok(p);
            }
        }
        return Err(Error::defect(
            "radical extension missing below the reduced-basis bound",
        ));
    }
    // isotropic vector of a regular complement of rad(U) inside U
    let c = complement_within(k, &u, &rad_u)?;
    let (hit, _) = min_isotropic_in(k, &consts, &c, form, params)?;
    hit.ok_or_else(|| {
        Error::defect(
            "no isotropic extension below the guaranteed bound while below maximal dimension",
        )
    })
}

/// The quadric reflection map z = F(t) x0 - 2 F(x0, t) t. For an isotropic
/// nonsingular base point this lands in the zero set of F; asserted exactly.
pub fn quadric_map<K: Enumerable + 'static>(
    k: &K,
    qs: &QuadSpace<K>,
    x0: &[K::Elem],
    t: &[K::Elem],
) -> Result<Vec<K::Elem>, Error> {
    if !k.is_zero(&qs.form().quad(k, x0)) {
        return Err(Error::precondition("base point is not isotropic"));
    }
    if !qs.is_nonsingular(k, x0) {
        return Err(Error::precondition("base point is singular"));
    }
    let ft = qs.form().quad(k, t);
    let fxt = qs.form().bilinear(k, x0, t);
    let two_fxt = k.add(&fxt, &fxt);
    let a = linalg::scale_vec(k, &ft, x0);
    let b = linalg::scale_vec(k, &two_fxt, t);
    let z = linalg::sub_vec(k, &a, &b);
    debug_assert!(k.is_zero(&qs.form().quad(k, &z)));
    Ok(z)
}

/// Greedy maximal totally isotropic subspace of (sub, F): starts from the
/// radical of the section and extends by minimal-height isotropic vectors.
pub fn max_isotropic_of<K: Enumerable + 'static>(
    k: &K,
    space: &Subspace<K>,
    form: &QuadForm<K>,
    params: &SearchParams,
) -> Result<Subspace<K>, Error> {
    let consts = Constants::new(k.descriptor());
    let mut w = radical_of(k, space, form)?;
    loop {
        let u = if w.dim() == 0 {
            space.clone()
        } else {
            orth_complement_in(k, &w, space, form)?
        };
        let rad_u = radical_of(k, &u, form)?;
        if rad_u.dim() > w.dim() {
            let cap = bounds::evaluate(
                &consts,
                &Bound::SiegelProduct {
                    l: rad_u.dim() as u64,
                    hv: rad_u.height_euclid().clone(),
                },
            );
            let cfg = StreamCfg::new(k.shell_cap(cap.hi + 1e-9), params.budget);
            let mut found = None;
            for item in subspace_points(k, &rad_u, cfg)? {
                let (p, _) = item?;
                if !w.contains(k, &p) {
                    found = Some(p);
                    break;
                }
            }
            let z = found.ok_or_else(|| {
                Error::defect("radical extension missing below the reduced-basis bound")
            })?;
            let mut vecs = w.basis_vectors();
            vecs.push(z);
            w = Subspace::from_vectors(k, space.ambient(), &vecs)?;
            continue;
        }
        let c = complement_within(k, &u, &rad_u)?;
        let (hit, _) = min_isotropic_in(k, &consts, &c, form, params)?;
        match hit {
            Some(z) => {
                let mut vecs = w.basis_vectors();
                vecs.push(z);
                w = Subspace::from_vectors(k, space.ambient(), &vecs)?;
            }
            None => break,
        }
    }
    Ok(w)
}

/// Reduced basis of a subspace with the minimal product of heights (greedy
/// successive minima).
pub fn reduced_basis<K: Enumerable + 'static>(
    k: &K,
    space: &Subspace<K>,
    params: &SearchParams,
) -> Result<Vec<Vec<K::Elem>>, Error> {
    if space.dim() == 0 {
        return Ok(vec![]);
    }
    let consts = Constants::new(k.descriptor());
    let bound = bounds::evaluate(
        &consts,
        &Bound::SiegelProduct {
            l: space.dim() as u64,
            hv: space.height_euclid().clone(),
        },
    );
    let cap = params.cap_log.unwrap_or(bound.hi + 1e-9);
    greedy_min_basis(k, space, StreamCfg::new(k.shell_cap(cap), params.budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, FqT, Rationals};
    use num_rational::BigRational;

    fn k() -> Rationals {
        Rationals
    }

    fn qm(rows: &[&[i64]]) -> Matrix<BigRational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| k().from_i64(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn qv(xs: &[i64]) -> Vec<BigRational> {
        xs.iter().map(|&x| k().from_i64(x)).collect()
    }

    fn form(rows: &[&[i64]]) -> QuadForm<Rationals> {
        QuadForm::new(&k(), qm(rows)).unwrap()
    }

    fn halves(rows: &[&[i64]]) -> QuadForm<Rationals> {
        // entries divided by 2, for writing cross-term forms like X1X2
        let f = k();
        let half = f.parse_elem("1/2").unwrap();
        let m = Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| f.mul(&f.from_i64(x), &half)).collect())
                .collect(),
        )
        .unwrap();
        QuadForm::new(&f, m).unwrap()
    }

    fn diag2(f: &Rationals, a: i64, b: i64) -> QuadForm<Rationals> {
        QuadForm::new(
            f,
            Matrix::from_rows(vec![
                vec![f.from_i64(a), f.from_i64(0)],
                vec![f.from_i64(0), f.from_i64(b)],
            ])
            .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn bilinear_examples() {
        let f = k();
        let d = form(&[&[1, 0], &[0, 1]]);
        assert_eq!(d.bilinear(&f, &qv(&[1, 0]), &qv(&[1, 0])), f.from_i64(1));
        // the form X1X2 has matrix [[0,1/2],[1/2,0]]
        let h = halves(&[&[0, 1], &[1, 0]]);
        assert_eq!(
            h.bilinear(&f, &qv(&[1, 0]), &qv(&[0, 1])),
            f.parse_elem("1/2").unwrap()
        );
        let d = diag2(&f, 1, -1);
        assert_eq!(d.quad(&f, &qv(&[1, 1])), f.from_i64(0));
    }

    #[test]
    fn non_symmetric_is_rejected() {
        let err = QuadForm::new(&k(), qm(&[&[0, 1], &[0, 0]])).unwrap_err();
        assert!(err.to_string().contains("(1, 2)"));
    }

    #[test]
    fn radical_examples() {
        let f = k();
        let params = SearchParams::default();
        // F = diag(1,1,0) on Q^3: radical is the third axis
        let qs = QuadSpace::new(
            &f,
            Subspace::full(&f, 3),
            form(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]]),
            &params,
        )
        .unwrap();
        assert_eq!(qs.lambda(), 1);
        assert!(qs.radical().contains(&f, &qv(&[0, 0, 1])));
        assert_eq!(qs.rank(), 2);
        // hyperbolic plane is regular
        let qs = QuadSpace::new(
            &f,
            Subspace::full(&f, 2),
            halves(&[&[0, 1], &[1, 0]]),
            &params,
        )
        .unwrap();
        assert_eq!(qs.lambda(), 0);
        // F vanishes identically on span{e2,e3} for F = diag(1,0,0)
        let v = Subspace::from_vectors(&f, 3, &[qv(&[0, 1, 0]), qv(&[0, 0, 1])]).unwrap();
        let qs = QuadSpace::new(
            &f,
            v.clone(),
            form(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, 0]]),
            &params,
        )
        .unwrap();
        assert!(qs.radical().same_space(&v));
        assert_eq!(qs.rank(), 0);
    }

    #[test]
    fn orth_complement_examples() {
        let f = k();
        let full3 = Subspace::full(&f, 3);
        let id3 = form(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let u = Subspace::from_vectors(&f, 3, &[qv(&[1, 0, 0])]).unwrap();
        let c = orth_complement_in(&f, &u, &full3, &id3).unwrap();
        assert_eq!(c.dim(), 2);
        assert!(c.contains(&f, &qv(&[0, 1, 0])));
        assert!(c.contains(&f, &qv(&[0, 0, 1])));
        // hyperbolic plane inside X1X2 + X3X4
        let h4 = halves(&[
            &[0, 1, 0, 0],
            &[1, 0, 0, 0],
            &[0, 0, 0, 1],
            &[0, 0, 1, 0],
        ]);
        let full4 = Subspace::full(&f, 4);
        let u = Subspace::from_vectors(&f, 4, &[qv(&[1, 0, 0, 0]), qv(&[0, 1, 0, 0])])
            .unwrap();
        let c = orth_complement_in(&f, &u, &full4, &h4).unwrap();
        assert!(c.contains(&f, &qv(&[0, 0, 1, 0])));
        assert!(c.contains(&f, &qv(&[0, 0, 0, 1])));
        assert_eq!(c.dim(), 2);
        // complement of the radical is everything
        let d = form(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]]);
        let qs = QuadSpace::new(&f, full3.clone(), d, &SearchParams::default()).unwrap();
        let c = orth_complement_in(&f, qs.radical(), &full3, qs.form()).unwrap();
        assert_eq!(c.dim(), 3);
    }

    #[test]
    fn witt_examples() {
        let f = k();
        let params = SearchParams::default();
        // X1X2 + X3^2: one hyperbolic plane, anisotropic line
        let m = halves(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 2]]);
        let qs = QuadSpace::new(&f, Subspace::full(&f, 3), m, &params).unwrap();
        assert_eq!(qs.lambda(), 0);
        assert_eq!(qs.witt_index(), 1);
        assert_eq!(qs.witt().anisotropic_basis.len(), 1);
        assert_eq!(qs.max_isotropic_dim(), 1);
        // X1X2 on Q^2
        let qs = QuadSpace::new(
            &f,
            Subspace::full(&f, 2),
            halves(&[&[0, 1], &[1, 0]]),
            &params,
        )
        .unwrap();
        assert_eq!((qs.lambda(), qs.witt_index()), (0, 1));
        assert!(qs.witt().anisotropic_basis.is_empty());
        // diag(1,1,0): radical + anisotropic plane over Q, certified to a cap
        let qs = QuadSpace::new(
            &f,
            Subspace::full(&f, 3),
            form(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]]),
            &params,
        )
        .unwrap();
        assert_eq!((qs.lambda(), qs.witt_index()), (1, 0));
        assert_eq!(qs.witt().anisotropic_basis.len(), 2);
        assert!(qs.witt().anisotropy_cap_log.is_some());
        // Witt identity and pair validity
        assert_eq!(
            qs.space().dim(),
            qs.lambda() + 2 * qs.witt_index() + qs.witt().anisotropic_basis.len()
        );
        for (x, y) in &qs.witt().hyperbolic_pairs {
            assert!(f.is_zero(&qs.form().quad(&f, x)));
            assert!(f.is_zero(&qs.form().quad(&f, y)));
            assert!(!f.is_zero(&qs.form().bilinear(&f, x, y)));
        }
    }

    #[test]
    fn undetermined_cap_is_distinct_from_anisotropic() {
        let f = k();
        // X1^2 + X2^2 - 7X3^2 has zeros, but none of tiny height... use a cap
        // override far below the guaranteed bound on an anisotropic form:
        // the constructor must report the undetermined state, not anisotropy
        let params = SearchParams {
            cap_log: Some(0.0),
            budget: 100_000,
        };
        let m = form(&[&[1, 0], &[0, 1]]);
        let r = QuadSpace::new(&f, Subspace::full(&f, 2), m, &params);
        assert!(matches!(r, Err(Error::Resource(_))));
    }

    #[test]
    fn hyperbolic_pair_examples() {
        let f = k();
        let params = SearchParams::default();
        let h = halves(&[&[0, 1], &[1, 0]]);
        let (x, y, cert) =
            hyperbolic_pair(&f, &Subspace::full(&f, 2), &h, &params).unwrap();
        assert!(f.is_zero(&h.quad(&f, &x)));
        assert!(f.is_zero(&h.quad(&f, &y)));
        assert!(!f.is_zero(&h.bilinear(&f, &x, &y)));
        assert!(cert.x_height.leq_bound(&cert.x_bound, 1e-9));
        assert!(cert.y_height.leq_bound(&cert.y_bound, 1e-9));
        // X1^2 - X2^2
        let d = diag2(&f, 1, -1);
        let (x, y, _) = hyperbolic_pair(&f, &Subspace::full(&f, 2), &d, &params).unwrap();
        assert!(f.is_zero(&d.quad(&f, &x)));
        assert!(f.is_zero(&d.quad(&f, &y)));
        assert!(!f.is_zero(&d.bilinear(&f, &x, &y)));
        // X1^2 + X2^2 is anisotropic over Q
        let d = diag2(&f, 1, 1);
        let err = hyperbolic_pair(&f, &Subspace::full(&f, 2), &d, &params).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn extend_to_max_isotropic_examples() {
        let f = k();
        let params = SearchParams::default();
        // X1X2: e1 is already maximal (m = 1)
        let qs = QuadSpace::new(
            &f,
            Subspace::full(&f, 2),
            halves(&[&[0, 1], &[1, 0]]),
            &params,
        )
        .unwrap();
        let w = extend_to_max_isotropic(&f, &qs, &qv(&[1, 0]), &params).unwrap();
        assert_eq!(w.dim(), 1);
        assert!(w.contains(&f, &qv(&[1, 0])));
        // X1X2 + X3X4: e1 extends to dimension 2
        let h4 = halves(&[
            &[0, 1, 0, 0],
            &[1, 0, 0, 0],
            &[0, 0, 0, 1],
            &[0, 0, 1, 0],
        ]);
        let qs = QuadSpace::new(&f, Subspace::full(&f, 4), h4, &params).unwrap();
        assert_eq!(qs.max_isotropic_dim(), 2);
        let w = extend_to_max_isotropic(&f, &qs, &qv(&[1, 0, 0, 0]), &params).unwrap();
        assert_eq!(w.dim(), 2);
        assert!(w.contains(&f, &qv(&[1, 0, 0, 0])));
        let g = gram(&f, qs.form().matrix(), w.basis());
        assert!(g.as_vector().iter().all(|e| f.is_zero(e)));
        // radical point: F = diag(1,1,0), x = e3, m = 1
        let d3 = form(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]]);
        let qs = QuadSpace::new(&f, Subspace::full(&f, 3), d3, &params).unwrap();
        let w = extend_to_max_isotropic(&f, &qs, &qv(&[0, 0, 1]), &params).unwrap();
        assert_eq!(w.dim(), 1);
        assert!(w.contains_subspace(&f, qs.radical()));
    }

    #[test]
    fn quadric_map_examples() {
        let f = k();
        let params = SearchParams::default();
        let qs = QuadSpace::new(
            &f,
            Subspace::full(&f, 2),
            halves(&[&[0, 1], &[1, 0]]),
            &params,
        )
        .unwrap();
        // x0 = e1, t = e2: z = -e2
        let z = quadric_map(&f, &qs, &qv(&[1, 0]), &qv(&[0, 1])).unwrap();
        assert_eq!(z, qv(&[0, -1]));
        // t = x0: both terms vanish
        let z = quadric_map(&f, &qs, &qv(&[1, 0]), &qv(&[1, 0])).unwrap();
        assert!(z.iter().all(|e| f.is_zero(e)));
        // t = (1,1): z = 1*e1 - 1*(1,1) = (0,-1)
        let z = quadric_map(&f, &qs, &qv(&[1, 0]), &qv(&[1, 1])).unwrap();
        assert_eq!(z, qv(&[0, -1]));
        // singular base point is rejected
        let d3 = form(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]]);
        let qs3 = QuadSpace::new(&f, Subspace::full(&f, 3), d3, &params).unwrap();
        assert!(quadric_map(&f, &qs3, &qv(&[0, 0, 1]), &qv(&[1, 0, 0])).is_err());
    }

    #[test]
    fn witt_over_function_field() {
        let f = FqT::new(3).unwrap();
        let params = SearchParams::default();
        // X1^2 + X2^2 over F_3(t): -1 is not a square mod 3, anisotropic
        let m = Matrix::from_rows(vec![
            vec![f.one(), f.zero()],
            vec![f.zero(), f.one()],
        ])
        .unwrap();
        let qs = QuadSpace::new(
            &f,
            Subspace::full(&f, 2),
            QuadForm::new(&f, m).unwrap(),
            &params,
        )
        .unwrap();
        assert_eq!(qs.witt_index(), 0);
        assert_eq!(qs.witt().anisotropic_basis.len(), 2);
        // X1^2 - X2^2 is hyperbolic
        let m = Matrix::from_rows(vec![
            vec![f.one(), f.zero()],
            vec![f.zero(), f.from_i64(-1)],
        ])
        .unwrap();
        let qs = QuadSpace::new(
            &f,
            Subspace::full(&f, 2),
            QuadForm::new(&f, m).unwrap(),
            &params,
        )
        .unwrap();
        assert_eq!(qs.witt_index(), 1);
    }

    #[test]
    fn reduced_basis_attains_small_product() {
        let f = k();
        let params = SearchParams::default();
        let v = Subspace::from_vectors(&f, 3, &[qv(&[1, 0, 1]), qv(&[0, 1, 1])]).unwrap();
        let basis = reduced_basis(&f, &v, &params).unwrap();
        assert_eq!(basis.len(), 2);
        // product of heights is at most HH(V) since the constant is 1 over Q
        let mut prod = crate::height::Height::one();
        for b in &basis {
            prod = prod.mul(&crate::heights::height_inhom(&f, b));
        }
        // HH(V)^2 = 3, so prod^2 <= 3 means prod = 1
        assert_eq!(prod, crate::height::Height::one());
    }
}
