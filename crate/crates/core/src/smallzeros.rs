//! The constructive small-zero pipelines: a zero of F avoiding a
//! hypersurface, linearly independent families of avoiding zeros, nested
//! totally isotropic flags, bases outside a variety union, reduced bases, and
//! pairwise orthogonal bases over function fields.
//!
//! Every operation returns a self-contained [`Certificate`] carrying the
//! output, the explicit bound it was checked against, and the intermediate
//! witnesses of the construction. Bound failures are never silently accepted:
//! where the theory guarantees success, a miss aborts with a library-defect
//! error carrying the witness trail.

use crate::bounds::{self, Bound};
use crate::certificate::{
    bound_record, render_subspace, render_vector, BoundParams, BoundRecord, Certificate,
    ChainWitness, Claim, FieldSpec, Outputs, PipelineWitness, PolyRepr, ProblemEmbed, Subject,
    Witnesses,
};
use crate::constants::Constants;
use crate::enumerate::{subspace_points, Enumerable, Points, StreamCfg};
use crate::field::Field;
use crate::height::{Height, HeightRepr};
use crate::heights::{self, Subspace};
use crate::interval::LogVal;
use crate::linalg::{self, Matrix};
use crate::polyalg::{
    self, nonvanishing_point, poly_heights, reduce_by_single, restrict_to_basis, MonomialOrder,
    MultiPoly,
};
use crate::quadspace::{
    extend_to_max_isotropic, gram, max_isotropic_of, orth_complement_in, poly_of_sym_matrix,
    radical_of, reduced_basis, QuadForm, QuadSpace, SearchParams,
};
use crate::Error;

/// Default relative slack for bound comparisons.
pub const DEFAULT_SLACK: f64 = 1e-9;

/// The collection S of finite sets of homogeneous polynomials, with the
/// cached degree sum of the per-family maxima.
#[derive(Clone, Debug)]
pub struct AvoidanceSystem<K: Field> {
    families: Vec<Vec<MultiPoly<K>>>,
    m_s: u64,
}

impl<K: Field> AvoidanceSystem<K> {
    pub fn new(families: Vec<Vec<MultiPoly<K>>>) -> Result<Self, Error> {
        for (i, fam) in families.iter().enumerate() {
            if fam.is_empty() {
                return Err(Error::parse(format!("avoidance family {} is empty", i + 1)));
            }
            for (j, p) in fam.iter().enumerate() {
                if p.is_zero() {
                    return Err(Error::parse(format!(
                        "polynomial {} of family {} is zero",
                        j + 1,
                        i + 1
                    )));
                }
                if !p.is_homogeneous() {
                    return Err(Error::parse(format!(
                        "polynomial {} of family {} is not homogeneous",
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        let m_s = families
            .iter()
            .map(|f| f.iter().map(|p| p.degree() as u64).max().unwrap_or(0))
            .sum();
        Ok(AvoidanceSystem { families, m_s })
    }

    pub fn empty() -> Self {
        AvoidanceSystem {
            families: vec![],
            m_s: 0,
        }
    }

    pub fn families(&self) -> &[Vec<MultiPoly<K>>] {
        &self.families
    }

    /// Sum over families of the maximal degree.
    pub fn degree_sum(&self) -> u64 {
        self.m_s
    }

    /// Is z outside the union of the family zero sets? (For each family some
    /// member must be nonzero at z.) Returns the witness indices.
    pub fn avoidance_witnesses(&self, k: &K, z: &[K::Elem]) -> Option<Vec<usize>> {
        let mut out = vec![];
        for fam in &self.families {
            let hit = fam.iter().position(|p| !k.is_zero(&p.evaluate(k, z)))?;
            out.push(hit);
        }
        Some(out)
    }

    pub fn to_repr(&self, k: &K) -> Vec<Vec<PolyRepr>> {
        self.families
            .iter()
            .map(|f| f.iter().map(|p| PolyRepr::of(k, p)).collect())
            .collect()
    }
}

/// Outcome of the vanishing test on the zero set.
pub enum VanishOutcome<K: Field> {
    Vanishes,
    /// A zero of F in V where the polynomial does not vanish.
    WitnessAt(Vec<K::Elem>),
}

/// Does P vanish on the entire zero set Z(V, F)? Sound and complete: for
/// rank at least 3 the projective quadric is irreducible and the reflection
/// parametrization through a nonsingular zero dominates it, so vanishing is
/// decided by composing P with the parametrization symbolically; for rank at
/// most 2 the zero set is a finite union of subspaces which are tested via
/// restriction.
pub fn vanishes_on_zeros<K: Enumerable + 'static>(
    k: &K,
    p: &MultiPoly<K>,
    qs: &QuadSpace<K>,
    params: &SearchParams,
) -> Result<VanishOutcome<K>, Error> {
    if !qs.is_isotropic() {
        return Err(Error::precondition(
            "the quadratic space has no nontrivial zero",
        ));
    }
    if p.is_zero() {
        return Ok(VanishOutcome::Vanishes);
    }
    let consts = Constants::new(k.descriptor());
    // constants never vanish
    if p.degree() == 0 {
        let z = first_zero_point(k, qs)?;
        return Ok(VanishOutcome::WitnessAt(z));
    }
    if qs.witt_index() == 0 {
        // zero set = radical
        return vanish_on_linear_components(k, p, &[qs.radical().clone()], &consts, params);
    }
    if qs.rank() >= 3 {
        // reflection parametrization through the first hyperbolic point
        let x0 = qs.witt().hyperbolic_pairs[0].0.clone();
        let x = qs.space().basis();
        let g = gram(k, qs.form().matrix(), x);
        let fx0 = qs.form().apply(k, &x0);
        let lin_coeffs: Vec<K::Elem> = (0..x.cols())
            .map(|j| linalg::dot(k, &x.col(j), &fx0))
            .collect();
        let l = x.cols();
        let qf_poly = poly_of_sym_matrix(k, &g); // F(X T) as a polynomial in T
        let lin_poly = MultiPoly::new(
            k,
            l,
            lin_coeffs.iter().enumerate().map(|(j, c)| {
                let mut e = vec![0u16; l];
                e[j] = 1;
                (e, c.clone())
            }),
        );
        // z_i(T) = F(XT) x0_i - 2 F(x0, XT) (XT)_i
        let two = k.add(&k.one(), &k.one());
        let args: Vec<MultiPoly<K>> = (0..qs.space().ambient())
            .map(|i| {
                let xt_i = MultiPoly::new(
                    k,
                    l,
                    (0..l).map(|j| {
                        let mut e = vec![0u16; l];
                        e[j] = 1;
                        (e, x.get(i, j).clone())
                    }),
                );
                let a = qf_poly.scale(k, &x0[i]);
                let b = lin_poly.mul(k, &xt_i).scale(k, &two);
                a.sub(k, &b)
            })
            .collect();
        let c = polyalg::compose(k, p, &args);
        if c.is_zero() {
            return Ok(VanishOutcome::Vanishes);
        }
        let w = nonvanishing_point(k, &consts, &c, params.budget)?;
        let t_ambient = linalg::mat_vec(k, x, &w.point);
        let z = crate::quadspace::quadric_map(k, qs, &x0, &t_ambient)?;
        debug_assert!(!k.is_zero(&p.evaluate(k, &z)));
        return Ok(VanishOutcome::WitnessAt(z));
    }
    // rank <= 2 with a hyperbolic plane: the zero set is the union of the two
    // translates of the radical along the hyperbolic pair
    let (hx, hy) = qs.witt().hyperbolic_pairs[0].clone();
    let ambient = qs.space().ambient();
    let mut comp_a = qs.radical().basis_vectors();
    comp_a.push(hx);
    let mut comp_b = qs.radical().basis_vectors();
    comp_b.push(hy);
    let comps = vec![
        Subspace::from_vectors(k, ambient, &comp_a)?,
        Subspace::from_vectors(k, ambient, &comp_b)?,
    ];
    vanish_on_linear_components(k, p, &comps, &consts, params)
}

fn first_zero_point<K: Enumerable + 'static>(
    _k: &K,
    qs: &QuadSpace<K>,
) -> Result<Vec<K::Elem>, Error> {
    if let Some(r) = qs.witt().radical_basis.first() {
        return Ok(r.clone());
    }
    Ok(qs.witt().hyperbolic_pairs[0].0.clone())
}

fn vanish_on_linear_components<K: Enumerable + 'static>(
    k: &K,
    p: &MultiPoly<K>,
    comps: &[Subspace<K>],
    consts: &Constants,
    params: &SearchParams,
) -> Result<VanishOutcome<K>, Error> {
    for comp in comps {
        if comp.dim() == 0 {
            continue;
        }
        let restricted = restrict_to_basis(k, p, comp.basis())?;
        if restricted.is_zero() {
            continue;
        }
        let w = nonvanishing_point(k, consts, &restricted, params.budget)?;
        let z = linalg::mat_vec(k, comp.basis(), &w.point);
        debug_assert!(!z.iter().all(|e| k.is_zero(e)));
        return Ok(VanishOutcome::WitnessAt(z));
    }
    Ok(VanishOutcome::Vanishes)
}

/// For each family, the first member that does not vanish on the zero set;
/// returns their product P (degree at most the family degree sum), the chosen
/// indices, and one witness zero per family.
pub fn avoidance_polynomial<K: Enumerable + 'static>(
    k: &K,
    s: &AvoidanceSystem<K>,
    qs: &QuadSpace<K>,
    params: &SearchParams,
) -> Result<(MultiPoly<K>, Vec<usize>, Vec<Vec<K::Elem>>), Error> {
    if !qs.is_isotropic() {
        return Err(Error::precondition(
            "the quadratic space has no nontrivial zero",
        ));
    }
    let n = qs.space().ambient();
    let mut product = MultiPoly::constant(k, n, k.one());
    let mut chosen = vec![];
    let mut witnesses = vec![];
    for (i, fam) in s.families().iter().enumerate() {
        let mut hit = None;
        for (j, p) in fam.iter().enumerate() {
            match vanishes_on_zeros(k, p, qs, params)? {
                VanishOutcome::Vanishes => continue,
                VanishOutcome::WitnessAt(z) => {
                    hit = Some((j, z));
                    break;
                }
            }
        }
        let Some((j, z)) = hit else {
            return Err(Error::precondition(format!(
                "every member of avoidance family {} vanishes on the zero set",
                i + 1
            )));
        };
        product = product.mul(k, &fam[j]);
        chosen.push(j);
        witnesses.push(z);
    }
    debug_assert!(product.degree() as u64 <= s.degree_sum());
    Ok((product, chosen, witnesses))
}

// ---------------------------------------------------------------------------
// Shaped quadratic solver
// ---------------------------------------------------------------------------

/// Decomposition Q = X_i X_j (c + Q1) + Q2 with c nonzero and Q1, Q2 free of
/// the variables i and j.
pub struct QuadShape<K: Field> {
    pub c: K::Elem,
    pub q1: MultiPoly<K>,
    pub q2: MultiPoly<K>,
}

pub fn quad_shape<K: Field>(
    k: &K,
    q: &MultiPoly<K>,
    i: usize,
    j: usize,
) -> Result<QuadShape<K>, Error> {
    assert!(i != j);
    let n = q.nvars();
    let mut c = k.zero();
    let mut q1_terms = vec![];
    let mut q2_terms = vec![];
    for (e, coeff) in q.terms() {
        let (ei, ej) = (e[i], e[j]);
        if ei >= 1 && ej >= 1 {
            if ei != 1 || ej != 1 {
                return Err(Error::precondition(format!(
                    "monomial with exponents ({ei}, {ej}) at the pivot variables breaks the required shape"
                )));
            }
            let mut rest = e.clone();
            rest[i] = 0;
            rest[j] = 0;
            if rest.iter().all(|&x| x == 0) {
                c = k.add(&c, coeff);
            } else {
                q1_terms.push((rest, coeff.clone()));
            }
        } else if ei >= 1 || ej >= 1 {
            return Err(Error::precondition(
                "monomial involves only one of the pivot variables",
            ));
        } else {
            q2_terms.push((e.clone(), coeff.clone()));
        }
    }
    if k.is_zero(&c) {
        return Err(Error::precondition(
            "the coefficient of the pivot product vanishes",
        ));
    }
    Ok(QuadShape {
        c,
        q1: MultiPoly::new(k, n, q1_terms),
        q2: MultiPoly::new(k, n, q2_terms),
    })
}

/// Output of the shaped-equation solver.
pub struct Quad1Output<K: Field> {
    pub z: Vec<K::Elem>,
    pub branch: &'static str,
    pub reduced: MultiPoly<K>,
    pub height: Height,
    pub bound: LogVal,
}

/// Zero of the shaped polynomial Q off the hypersurface P = 0, following the
/// constructive argument: reduce P by Q under a lex order with the pivot
/// variables on top, split the reduction by occurrences of the first pivot,
/// and solve along the rational curve where Q vanishes identically. Falls
/// back to capped enumeration when the reduction leaves mixed pivot
/// monomials (possible when Q1 is nonzero) or a constructed point misses the
/// bound.
pub fn quad1_zero<K: Enumerable + 'static>(
    k: &K,
    q: &MultiPoly<K>,
    p: &MultiPoly<K>,
    i: usize,
    j: usize,
    params: &SearchParams,
    slack: f64,
) -> Result<Quad1Output<K>, Error> {
    let n = q.nvars();
    if p.nvars() != n {
        return Err(Error::dim("variable counts differ"));
    }
    let shape = quad_shape(k, q, i, j)?;
    let consts = Constants::new(k.descriptor());
    let (hq, _) = poly_heights(k, q)?;
    let bound = bounds::evaluate(
        &consts,
        &Bound::QuadOffHypersurface {
            deg_q: q.degree() as u64,
            deg_p: p.degree() as u64,
            hq: hq.clone(),
        },
    );
    let ord = MonomialOrder::lex_with_top(n, i, j);
    let (p_red, _) = reduce_by_single(k, p, q, &ord);
    if p_red.is_zero() {
        return Err(Error::precondition(
            "the polynomial vanishes identically on the zero set of the shaped form",
        ));
    }
    let mixed = p_red.terms().any(|(e, _)| e[i] >= 1 && e[j] >= 1);
    let attempt = if mixed {
        // the single-divisor reduction cannot clear mixed pivot monomials
        // when Q1 is nonzero; the capped search below still decides
        None
    } else {
        construct_quad1(k, &consts, &shape, q, p, &p_red, i, j, params)?
    };
    if let Some((z, branch)) = attempt {
        let height = heights::height_inhom(k, &z);
        if height.leq_bound(&bound, slack) {
            return Ok(Quad1Output {
                z,
                branch,
                reduced: p_red,
                height,
                bound,
            });
        }
    }
    let cap = k.shell_cap(bound.hi + 1e-9).max(k.min_affine_shell());
    for item in Points::affine(k, n, StreamCfg::new(cap, params.budget)) {
        let (cand, _) = item?;
        if cand.iter().all(|e| k.is_zero(e)) {
            continue;
        }
        if k.is_zero(&q.evaluate(k, &cand)) && !k.is_zero(&p.evaluate(k, &cand)) {
            let height = heights::height_inhom(k, &cand);
            return Ok(Quad1Output {
                z: cand,
                branch: "enumeration",
                reduced: p_red,
                height,
                bound,
            });
        }
    }
    Err(Error::defect(
        "no zero off the hypersurface below the guaranteed bound",
    ))
}

#[allow(clippy::too_many_arguments)]
fn construct_quad1<K: Enumerable + 'static>(
    k: &K,
    consts: &Constants,
    shape: &QuadShape<K>,
    q: &MultiPoly<K>,
    p: &MultiPoly<K>,
    p_red: &MultiPoly<K>,
    i: usize,
    j: usize,
    params: &SearchParams,
) -> Result<Option<(Vec<K::Elem>, &'static str)>, Error> {
    let n = q.nvars();
    let rest: Vec<usize> = (0..n).filter(|&v| v != i && v != j).collect();
    let keep_no_i: Vec<usize> = (0..n).filter(|&v| v != i).collect();
    // split the reduced polynomial by occurrences of the first pivot
    let i_terms: Vec<(Vec<u16>, K::Elem)> = p_red
        .terms()
        .filter(|(e, _)| e[i] >= 1)
        .map(|(e, c)| (e.clone(), c.clone()))
        .collect();
    let g2 = MultiPoly::new(
        k,
        n,
        p_red
            .terms()
            .filter(|(e, _)| e[i] == 0)
            .map(|(e, c)| (e.clone(), c.clone())),
    );
    if i_terms.is_empty() {
        // the reduced polynomial is free of the first pivot: choose a point
        // where g2 * X_j * (c + Q1) does not vanish and solve for the pivot
        let c_plus_q1 = shape
            .q1
            .add(k, &MultiPoly::constant(k, n, shape.c.clone()));
        let xj = MultiPoly::var(k, n, j);
        let target = g2.mul(k, &xj).mul(k, &c_plus_q1);
        let projected = polyalg::project_vars(k, &target, &keep_no_i)?;
        let w = nonvanishing_point(k, consts, &projected, params.budget)?;
        let wf = polyalg::scatter_point(k, n, &keep_no_i, &w.point);
        let denom = k.mul(
            &wf[j],
            &c_plus_q1.evaluate(k, &wf),
        );
        let zi = k
            .div(&k.neg(&shape.q2.evaluate(k, &wf)), &denom)
            .expect("nonvanishing construction");
        let mut z = wf;
        z[i] = zi;
        debug_assert!(k.is_zero(&q.evaluate(k, &z)));
        debug_assert!(!k.is_zero(&p.evaluate(k, &z)));
        return Ok(Some((z, "pivot_free")));
    }
    // general branch: g1 collects the coefficient of the minimal pivot power
    let k_min = i_terms.iter().map(|(e, _)| e[i]).min().unwrap();
    let g1 = MultiPoly::new(
        k,
        n,
        i_terms.iter().map(|(e, c)| {
            let mut e = e.clone();
            e[i] -= k_min;
            (e, c.clone())
        }),
    );
    // r: pivot-free monomials of g1; nonzero by minimality of k_min
    let r = MultiPoly::new(
        k,
        n,
        g1.terms()
            .filter(|(e, _)| e[i] == 0)
            .map(|(e, c)| (e.clone(), c.clone())),
    );
    debug_assert!(!r.is_zero());
    let c_plus_q1 = shape
        .q1
        .add(k, &MultiPoly::constant(k, n, shape.c.clone()));
    let target = r.mul(k, &c_plus_q1);
    let projected = polyalg::project_vars(k, &target, &rest)?;
    let u_w = nonvanishing_point(k, consts, &projected, params.budget)?;
    let u = polyalg::scatter_point(k, n, &rest, &u_w.point);
    let c1 = c_plus_q1.evaluate(k, &u);
    let beta = k
        .div(&k.neg(&shape.q2.evaluate(k, &u)), &c1)
        .expect("nonvanishing of c + Q1");
    // univariate pieces in the pivots
    let g1u = univariate_at(k, &g1, i, &u);
    let g2u = univariate_at(k, &g2, j, &u);
    let d2 = g2u.len().saturating_sub(1);
    // pbar(X) = X^(k_min + d2) g1u(X) + sum_s g2u[s] beta^s X^(d2 - s)
    let mut pbar = vec![k.zero(); 1];
    let deg1 = k_min as usize + d2 + g1u.len().saturating_sub(1);
    pbar.resize(deg1 + 1, k.zero());
    for (s, coeff) in g1u.iter().enumerate() {
        let idx = k_min as usize + d2 + s;
        pbar[idx] = k.add(&pbar[idx], coeff);
    }
    let mut beta_pow = k.one();
    for (s, coeff) in g2u.iter().enumerate() {
        let idx = d2 - s;
        let term = k.mul(coeff, &beta_pow);
        pbar[idx] = k.add(&pbar[idx], &term);
        beta_pow = k.mul(&beta_pow, &beta);
    }
    while pbar.last().map(|e| k.is_zero(e)) == Some(true) {
        pbar.pop();
    }
    if pbar.is_empty() {
        return Ok(None);
    }
    // nonzero alpha with pbar(alpha) != 0, capped by the nonvanishing
    // constant at twice the degree of P
    let a_bound = consts.nonvanish_a((2 * p.degree() as u64).max(1));
    let cap = k.shell_cap(a_bound.hi + 1e-9).max(k.min_affine_shell());
    let mut alpha = None;
    for item in Points::affine(k, 1, StreamCfg::new(cap, params.budget)) {
        let (cand, _) = item?;
        if k.is_zero(&cand[0]) {
            continue;
        }
        let mut acc = k.zero();
        for coeff in pbar.iter().rev() {
            acc = k.add(&k.mul(&acc, &cand[0]), coeff);
        }
        if !k.is_zero(&acc) {
            alpha = Some(cand[0].clone());
            break;
        }
    }
    let Some(alpha) = alpha else {
        return Ok(None);
    };
    let mut z = u;
    z[i] = alpha.clone();
    z[j] = k.div(&beta, &alpha).expect("alpha nonzero");
    if !k.is_zero(&q.evaluate(k, &z)) || k.is_zero(&p.evaluate(k, &z)) {
        // the curve point can degenerate (for example the pivot-free part of
        // P reappearing); let the fallback search take over
        return Ok(None);
    }
    Ok(Some((z, "pivot_curve")))
}

/// Coefficients of P(..., X_v, ...) with all other variables evaluated at u,
/// as a dense univariate list (constant first). Every variable other than v
/// that occurs in p must have a value in u.
fn univariate_at<K: Field>(
    k: &K,
    p: &MultiPoly<K>,
    v: usize,
    u: &[K::Elem],
) -> Vec<K::Elem> {
    let deg = p
        .terms()
        .map(|(e, _)| e[v] as usize)
        .max()
        .unwrap_or(0);
    let mut out = vec![k.zero(); deg + 1];
    for (e, c) in p.terms() {
        let mut val = c.clone();
        for (var, &exp) in e.iter().enumerate() {
            if var == v || exp == 0 {
                continue;
            }
            let mut pw = k.one();
            for _ in 0..exp {
                pw = k.mul(&pw, &u[var]);
            }
            val = k.mul(&val, &pw);
        }
        let slot = e[v] as usize;
        out[slot] = k.add(&out[slot], &val);
    }
    while out.len() > 1 && out.last().map(|e| k.is_zero(e)) == Some(true) {
        out.pop();
    }
    if out.len() == 1 && k.is_zero(&out[0]) {
        return vec![];
    }
    out
}

// ---------------------------------------------------------------------------
// Certificate assembly
// ---------------------------------------------------------------------------

struct CertBuilder<'a, K: Field> {
    k: &'a K,
    kind: &'static str,
    problem: ProblemEmbed,
    outputs: Outputs,
    witnesses: Witnesses,
    bounds: Vec<BoundRecord>,
    claims: Vec<Claim>,
    slack: f64,
}

impl<'a, K: Field> CertBuilder<'a, K> {
    fn new(
        k: &'a K,
        kind: &'static str,
        form: Option<&QuadForm<K>>,
        space: &Subspace<K>,
        avoidance: Vec<Vec<PolyRepr>>,
        slack: f64,
    ) -> Self {
        let full = space.dim() == space.ambient();
        let problem = ProblemEmbed {
            field: FieldSpec::of_descriptor(&k.descriptor()),
            n: space.ambient(),
            form: form.map(|f| crate::certificate::render_matrix_rows(k, f.matrix())),
            space: if full {
                None
            } else {
                Some(render_subspace(k, space))
            },
            avoidance,
        };
        CertBuilder {
            k,
            kind,
            problem,
            outputs: Outputs::default(),
            witnesses: Witnesses::default(),
            bounds: vec![],
            claims: vec![Claim::HeightsMatch],
            slack,
        }
    }

    fn push_point(&mut self, z: &[K::Elem]) -> usize {
        let idx = self.outputs.points.len();
        self.outputs.points.push(render_vector(self.k, z));
        self.outputs
            .point_h
            .push(HeightRepr::of(&heights::height_inhom(self.k, z)));
        self.outputs
            .point_hmax
            .push(HeightRepr::of(&heights::height_max(self.k, z)));
        idx
    }

    fn push_subspace(&mut self, s: &Subspace<K>) -> usize {
        let idx = self.outputs.subspaces.len();
        self.outputs.subspaces.push(render_subspace(self.k, s));
        self.outputs
            .subspace_hh
            .push(HeightRepr::of(s.height_euclid()));
        idx
    }

    fn push_bound(
        &mut self,
        name: &str,
        subject: Subject,
        params: BoundParams,
        rhs: &LogVal,
        subject_height: &Height,
    ) -> usize {
        let idx = self.bounds.len();
        self.bounds.push(bound_record(
            name,
            subject,
            params,
            rhs,
            subject_height,
            self.slack,
        ));
        self.claims.push(Claim::HeightBound { bound: idx });
        idx
    }

    fn finish(self) -> Certificate {
        Certificate {
            kind: self.kind.into(),
            problem: self.problem,
            outputs: self.outputs,
            witnesses: self.witnesses,
            bounds: self.bounds,
            claims: self.claims,
            slack: self.slack,
        }
    }
}

fn hrepr(h: &Height) -> Option<HeightRepr> {
    Some(HeightRepr::of(h))
}

// ---------------------------------------------------------------------------
// Single avoiding zero (the constructive pipeline)
// ---------------------------------------------------------------------------

/// A zero of F in V off the hypersurface P = 0, of explicitly bounded height,
/// built by the constructive pipeline: radical shortcut, reduced basis,
/// restricted form, small hyperbolic pair, change of basis to the shaped
/// quadratic, and the shaped-equation solver.
///
/// P must be homogeneous and nonzero.
pub fn small_zero_avoiding<K: Enumerable + 'static>(
    k: &K,
    qs: &QuadSpace<K>,
    p: &MultiPoly<K>,
    params: &SearchParams,
    slack: f64,
) -> Result<Certificate, Error> {
    if p.is_zero() {
        return Err(Error::precondition("avoidance polynomial is zero"));
    }
    if !p.is_homogeneous() {
        return Err(Error::precondition("avoidance polynomial must be homogeneous"));
    }
    if !qs.is_isotropic() {
        return Err(Error::precondition(
            "no nontrivial zero below the certification cap",
        ));
    }
    if matches!(
        vanishes_on_zeros(k, p, qs, params)?,
        VanishOutcome::Vanishes
    ) {
        return Err(Error::precondition(
            "the polynomial vanishes on every zero of the form in V",
        ));
    }
    let consts = Constants::new(k.descriptor());
    let l = qs.space().dim() as u64;
    let hf = qs.form().height_max().clone();
    let hv = qs.space().height_euclid().clone();
    let deg = p.degree() as u64;
    let avoidance = vec![vec![PolyRepr::of(k, p)]];
    let mut cert = CertBuilder::new(k, "small_zero_avoiding", Some(qs.form()), qs.space(), avoidance, slack);
    let headline = bounds::evaluate(
        &consts,
        &Bound::AvoidingZero {
            l,
            deg,
            hf: hf.clone(),
            hv: hv.clone(),
        },
    );

    // radical branch: P not identically zero on the radical
    let mut witness = PipelineWitness::default();
    let z = if qs.lambda() > 0
        && !restrict_to_basis(k, p, qs.radical().basis())?.is_zero()
    {
        witness.branch = "radical".into();
        let hfe = qs.form().height_euclid().clone();
        let rad_bound = bounds::evaluate(
            &consts,
            &Bound::RadicalPoint {
                r: qs.rank() as u64,
                lambda: qs.lambda() as u64,
                deg,
                hf: hfe.clone(),
                hv: hv.clone(),
            },
        );
        let cfg = StreamCfg::new(k.shell_cap(rad_bound.hi + 1e-9), params.budget);
        let mut found = None;
        for item in subspace_points(k, qs.radical(), cfg)? {
            let (cand, _) = item?;
            if !k.is_zero(&p.evaluate(k, &cand)) {
                found = Some(cand);
                break;
            }
        }
        let z = found.ok_or_else(|| {
            Error::defect("no avoiding radical point below the guaranteed bound")
        })?;
        let zh = heights::height_inhom(k, &z);
        cert.push_bound(
            "radical_point",
            Subject::PointH { index: 0 },
            BoundParams {
                r: Some(qs.rank() as u64),
                lambda: Some(qs.lambda() as u64),
                deg: Some(deg),
                hf: hrepr(&hfe),
                hv: hrepr(&hv),
                ..Default::default()
            },
            &rad_bound,
            &zh,
        );
        z
    } else {
        if qs.witt_index() == 0 {
            return Err(Error::precondition(
                "every zero is singular and the polynomial vanishes on the radical",
            ));
        }
        witness.branch = "hyperbolic".into();
        // reduced basis of V and restrictions
        let a_cols = reduced_basis(k, qs.space(), params)?;
        let a_mat = Matrix::from_cols(a_cols.clone())?;
        let f_a = gram(k, qs.form().matrix(), &a_mat);
        let p_a = restrict_to_basis(k, p, &a_mat)?;
        let mut siegel_prod = Height::one_of(k);
        for col in &a_cols {
            siegel_prod = siegel_prod.mul(&heights::height_inhom(k, col));
        }
        let siegel_bound = bounds::evaluate(
            &consts,
            &Bound::SiegelProduct {
                l,
                hv: hv.clone(),
            },
        );
        cert.push_bound(
            "siegel_product",
            Subject::Witness {
                key: "siegel_product".into(),
            },
            BoundParams {
                l: Some(l),
                hv: hrepr(&hv),
                ..Default::default()
            },
            &siegel_bound,
            &siegel_prod,
        );
        witness.siegel_basis = Some(a_cols.iter().map(|c| render_vector(k, c)).collect());
        witness.f_restricted = Some(crate::certificate::render_matrix_rows(k, &f_a));
        // nonsingular zero of the restricted form on K^L
        let hfa = k.height_max(&f_a.as_vector());
        let ns_bound = bounds::evaluate(
            &consts,
            &Bound::NonsingularZeroRestricted {
                l,
                hfa: hfa.clone(),
            },
        );
        let lu = l as usize;
        let cfg = StreamCfg::new(k.shell_cap(ns_bound.hi + 1e-9), params.budget);
        let mut x = None;
        for item in Points::projective(k, lu, cfg) {
            let (cand, _) = item?;
            let fx = linalg::mat_vec(k, &f_a, &cand);
            if fx.iter().all(|e| k.is_zero(e)) {
                continue;
            }
            if k.is_zero(&linalg::dot(k, &cand, &fx)) {
                x = Some(cand);
                break;
            }
        }
        let x = x.ok_or_else(|| {
            Error::defect("no nonsingular zero of the restricted form below the bound")
        })?;
        cert.push_bound(
            "nonsingular_zero_restricted",
            Subject::Witness { key: "x".into() },
            BoundParams {
                l: Some(l),
                hfa: hrepr(&hfa),
                ..Default::default()
            },
            &ns_bound,
            &heights::height_inhom(k, &x),
        );
        witness.x = Some(render_vector(k, &x));
        // standard basis partner and the second pair member
        let fa_form = QuadForm::new(k, f_a.clone())?;
        let fx = fa_form.apply(k, &x);
        let u_index = fx
            .iter()
            .position(|e| !k.is_zero(e))
            .expect("nonsingular zero pairs with a standard vector");
        let mut u = vec![k.zero(); lu];
        u[u_index] = k.one();
        let y = crate::quadspace::hyperbolic_partner(k, &fa_form, &x, &u);
        witness.u_index = Some(u_index);
        witness.y = Some(render_vector(k, &y));
        // orthogonal complement of the pair and its reduced basis
        let mut cond_rows = vec![];
        cond_rows.push(linalg::mat_vec(k, &f_a, &x));
        cond_rows.push(linalg::mat_vec(k, &f_a, &u));
        let cond = Matrix::from_rows(cond_rows)?;
        let comp_kernel = linalg::kernel_basis(k, &cond);
        let u_space = Subspace::from_vectors(k, lu, &comp_kernel)?;
        let v_basis = if u_space.dim() > 0 {
            reduced_basis(k, &u_space, params)?
        } else {
            vec![]
        };
        // change of basis
        let mut b_cols = vec![x.clone(), y.clone()];
        b_cols.extend(v_basis.clone());
        let b_mat = Matrix::from_cols(b_cols)?;
        if linalg::rank(k, &b_mat) != lu {
            return Err(Error::defect("pipeline basis is singular"));
        }
        witness.b_matrix = Some(crate::certificate::render_matrix_rows(k, &b_mat));
        // shaped quadratic Q(Y) = F_A(B Y)
        let q_mat = gram(k, &f_a, &b_mat);
        debug_assert!(k.is_zero(q_mat.get(0, 0)));
        debug_assert!(k.is_zero(q_mat.get(1, 1)));
        debug_assert!(!k.is_zero(q_mat.get(0, 1)));
        for jj in 2..lu {
            debug_assert!(k.is_zero(q_mat.get(0, jj)));
            debug_assert!(k.is_zero(q_mat.get(1, jj)));
        }
        let q_poly = poly_of_sym_matrix(k, &q_mat);
        let g_poly = restrict_to_basis(k, &p_a, &b_mat)?;
        if g_poly.is_zero() {
            return Err(Error::precondition(
                "the polynomial vanishes identically on V",
            ));
        }
        let quad = quad1_zero(k, &q_poly, &g_poly, 0, 1, params, slack)?;
        let (hq, _) = poly_heights(k, &q_poly)?;
        cert.push_bound(
            "quad_off_hypersurface",
            Subject::Witness { key: "w".into() },
            BoundParams {
                deg_q: Some(q_poly.degree() as u64),
                deg_p: Some(g_poly.degree() as u64),
                hq: hrepr(&hq),
                ..Default::default()
            },
            &quad.bound,
            &quad.height,
        );
        witness.reduced_poly = Some(PolyRepr::of(k, &quad.reduced));
        witness.quad_branch = Some(quad.branch.into());
        witness.w = Some(render_vector(k, &quad.z));
        // back to ambient coordinates
        let bw = linalg::mat_vec(k, &b_mat, &quad.z);
        let z_ambient = linalg::mat_vec(k, &a_mat, &bw);
        k.primitive_vector(&z_ambient)
            .ok_or_else(|| Error::defect("pipeline produced the zero vector"))?
    };

    // final checks and headline bound
    debug_assert!(k.is_zero(&qs.form().quad(k, &z)));
    debug_assert!(!k.is_zero(&p.evaluate(k, &z)));
    let idx = cert.push_point(&z);
    debug_assert_eq!(idx, 0);
    let zh = heights::height_inhom(k, &z);
    cert.push_bound(
        "avoiding_zero",
        Subject::PointH { index: 0 },
        BoundParams {
            l: Some(l),
            deg: Some(deg),
            hf: hrepr(&hf),
            hv: hrepr(&hv),
            ..Default::default()
        },
        &headline,
        &zh,
    );
    cert.claims.push(Claim::FormZero { point: 0 });
    cert.claims.push(Claim::Membership { point: 0 });
    cert.claims.push(Claim::NonzeroPoint { point: 0 });
    cert.claims.push(Claim::Avoidance {
        point: 0,
        family: 0,
        witness_poly: 0,
    });
    cert.witnesses.pipeline.push(witness);
    let out = cert.finish();
    ensure_bounds_pass(&out)?;
    Ok(out)
}

/// Aborts with the witness trail when a guaranteed bound failed.
fn ensure_bounds_pass(cert: &Certificate) -> Result<(), Error> {
    for b in &cert.bounds {
        if !b.pass {
            return Err(Error::defect(format!(
                "bound {} failed: subject log {} vs [{}, {}] in certificate {}",
                b.name,
                b.subject_log,
                b.rhs_lo,
                b.rhs_hi,
                cert.to_json()
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Independent zeros and flags
// ---------------------------------------------------------------------------

/// A linear form vanishing on the given points but not identically on W,
/// of minimal height through the dual solution space.
pub fn separating_form<K: Enumerable + 'static>(
    k: &K,
    points: &[Vec<K::Elem>],
    w: &Subspace<K>,
    params: &SearchParams,
) -> Result<(Vec<K::Elem>, MultiPoly<K>), Error> {
    let n = w.ambient();
    let span = Subspace::from_vectors(k, n, &heights::independent_subset(k, n, points))?;
    if span.contains_subspace(k, w) {
        return Err(Error::precondition(
            "the subspace lies in the span of the points",
        ));
    }
    let rows: Vec<Vec<K::Elem>> = points.to_vec();
    let sol = if rows.is_empty() {
        Subspace::full(k, n)
    } else {
        Subspace::from_equations(k, &Matrix::from_rows(rows)?)?
    };
    let consts = Constants::new(k.descriptor());
    let cap = bounds::evaluate(
        &consts,
        &Bound::SiegelProduct {
            l: sol.dim() as u64,
            hv: sol.height_euclid().clone(),
        },
    );
    let cfg = StreamCfg::new(k.shell_cap(cap.hi + 1e-9), params.budget);
    for item in subspace_points(k, &sol, cfg)? {
        let (cand, _) = item?;
        let nonvanishing = w
            .basis()
            .col_vecs()
            .iter()
            .any(|b| !k.is_zero(&linalg::dot(k, &cand, b)));
        if nonvanishing {
            let poly = MultiPoly::new(
                k,
                n,
                cand.iter().enumerate().map(|(i, c)| {
                    let mut e = vec![0u16; n];
                    e[i] = 1;
                    (e, c.clone())
                }),
            );
            return Ok((cand, poly));
        }
    }
    Err(Error::defect(
        "no separating form below the reduced-basis bound",
    ))
}

struct IndependentData<K: Field> {
    points: Vec<Vec<K::Elem>>,
    chosen: Vec<Vec<usize>>,
    separating: Vec<MultiPoly<K>>,
    bound: LogVal,
}

/// The enumeration loop shared by the independent-zeros and flags pipelines:
/// minimal avoiding zero, maximal totally isotropic extension, separating
/// hyperplane, repeat. Heights are nondecreasing because each step resumes at
/// the previous height shell.
fn collect_independent_zeros<K: Enumerable + 'static>(
    k: &K,
    qs: &QuadSpace<K>,
    s: &AvoidanceSystem<K>,
    params: &SearchParams,
) -> Result<IndependentData<K>, Error> {
    let m = qs.max_isotropic_dim();
    if m == 0 {
        return Err(Error::precondition(
            "no nontrivial zero below the certification cap",
        ));
    }
    // precondition: some zero avoids the union (detects the offending family)
    let _ = avoidance_polynomial(k, s, qs, params)?;
    let consts = Constants::new(k.descriptor());
    let bound = bounds::evaluate(
        &consts,
        &Bound::IndependentZeros {
            l: qs.space().dim() as u64,
            m_deg: s.degree_sum(),
            hf: qs.form().height_max().clone(),
            hv: qs.space().height_euclid().clone(),
        },
    );
    let cap_shell = k.shell_cap(bound.hi + 1e-9);
    let mut points: Vec<Vec<K::Elem>> = vec![];
    let mut chosen = vec![];
    let mut separating: Vec<MultiPoly<K>> = vec![];
    let mut sep_vec: Option<Vec<K::Elem>> = None;
    let mut min_shell = k.min_projective_shell();
    let is_zero_at = k.quad_zero_tester(qs.form().matrix());
    for _n in 0..m {
        let cfg = StreamCfg::new(cap_shell, params.budget);
        let mut found = None;
        for item in subspace_points(k, qs.space(), cfg)? {
            let (cand, shell) = item?;
            if shell < min_shell {
                continue;
            }
            if !is_zero_at(&cand) {
                continue;
            }
            let Some(wit) = s.avoidance_witnesses(k, &cand) else {
                continue;
            };
            if let Some(l) = &sep_vec {
                if k.is_zero(&linalg::dot(k, l, &cand)) {
                    continue;
                }
            }
            found = Some((cand, wit, shell));
            break;
        }
        let Some((z, wit, shell)) = found else {
            return Err(Error::defect(
                "no avoiding zero below the guaranteed bound at this step",
            ));
        };
        min_shell = shell;
        points.push(z.clone());
        chosen.push(wit);
        if points.len() < m {
            let w_n = extend_to_max_isotropic(k, qs, &z, params)?;
            let (vec_l, poly_l) = separating_form(k, &points, &w_n, params)?;
            sep_vec = Some(vec_l);
            separating.push(poly_l);
        }
    }
    Ok(IndependentData {
        points,
        chosen,
        separating,
        bound,
    })
}

/// m linearly independent zeros of F in V outside the avoidance union, with
/// nondecreasing heights, each below the explicit bound.
pub fn independent_zeros<K: Enumerable + 'static>(
    k: &K,
    qs: &QuadSpace<K>,
    s: &AvoidanceSystem<K>,
    params: &SearchParams,
    slack: f64,
) -> Result<Certificate, Error> {
    let data = collect_independent_zeros(k, qs, s, params)?;
    let m = data.points.len();
    let mut cert = CertBuilder::new(
        k,
        "independent_zeros",
        Some(qs.form()),
        qs.space(),
        s.to_repr(k),
        slack,
    );
    let l = qs.space().dim() as u64;
    let hf = qs.form().height_max().clone();
    let hv = qs.space().height_euclid().clone();
    for (n, z) in data.points.iter().enumerate() {
        let idx = cert.push_point(z);
        cert.claims.push(Claim::FormZero { point: idx });
        cert.claims.push(Claim::Membership { point: idx });
        cert.claims.push(Claim::NonzeroPoint { point: idx });
        for (family, &witness_poly) in data.chosen[n].iter().enumerate() {
            cert.claims.push(Claim::Avoidance {
                point: idx,
                family,
                witness_poly,
            });
        }
        cert.push_bound(
            "independent_zeros",
            Subject::PointH { index: idx },
            BoundParams {
                l: Some(l),
                m_deg: Some(s.degree_sum()),
                hf: hrepr(&hf),
                hv: hrepr(&hv),
                ..Default::default()
            },
            &data.bound,
            &heights::height_inhom(k, z),
        );
        cert.witnesses.pipeline.push(PipelineWitness {
            branch: "enumeration".into(),
            chosen_polys: data.chosen[n].clone(),
            ..Default::default()
        });
    }
    cert.claims.push(Claim::LinearIndependence {
        points: (0..m).collect(),
        rank: m,
    });
    cert.claims.push(Claim::MonotoneHeights {
        points: (0..m).collect(),
    });
    cert.witnesses.separating_forms = data
        .separating
        .iter()
        .map(|p| PolyRepr::of(k, p))
        .collect();
    let out = cert.finish();
    ensure_bounds_pass(&out)?;
    Ok(out)
}

/// Nested chains of totally isotropic subspaces through each independent
/// zero, none contained in the avoidance union, with explicit height bounds.
pub fn isotropic_flags<K: Enumerable + 'static>(
    k: &K,
    qs: &QuadSpace<K>,
    s: &AvoidanceSystem<K>,
    params: &SearchParams,
    slack: f64,
) -> Result<Certificate, Error> {
    let data = collect_independent_zeros(k, qs, s, params)?;
    let m = data.points.len();
    let consts = Constants::new(k.descriptor());
    let mut cert = CertBuilder::new(
        k,
        "isotropic_flags",
        Some(qs.form()),
        qs.space(),
        s.to_repr(k),
        slack,
    );
    let l = qs.space().dim() as u64;
    let nn = qs.space().ambient() as u64;
    let hf = qs.form().height_max().clone();
    let hv = qs.space().height_euclid().clone();
    let m_deg = s.degree_sum();
    for (n, z) in data.points.iter().enumerate() {
        let idx = cert.push_point(z);
        cert.claims.push(Claim::FormZero { point: idx });
        cert.claims.push(Claim::Membership { point: idx });
        cert.claims.push(Claim::NonzeroPoint { point: idx });
        for (family, &witness_poly) in data.chosen[n].iter().enumerate() {
            cert.claims.push(Claim::Avoidance {
                point: idx,
                family,
                witness_poly,
            });
        }
        cert.push_bound(
            "independent_zeros",
            Subject::PointH { index: idx },
            BoundParams {
                l: Some(l),
                m_deg: Some(m_deg),
                hf: hrepr(&hf),
                hv: hrepr(&hv),
                ..Default::default()
            },
            &data.bound,
            &heights::height_inhom(k, z),
        );
        cert.witnesses.pipeline.push(PipelineWitness {
            branch: "enumeration".into(),
            chosen_polys: data.chosen[n].clone(),
            ..Default::default()
        });
    }
    // one chain per zero
    for (n, z) in data.points.iter().enumerate() {
        let hx = heights::height_max(k, z);
        let (w_top, w_prime) = if !qs.is_nonsingular(k, z) {
            // the point is in the radical; every maximal totally isotropic
            // subspace contains it
            let w = max_isotropic_of(k, qs.space(), qs.form(), params)?;
            (w, None)
        } else {
            let span_z = Subspace::from_vectors(k, qs.space().ambient(), &[z.clone()])?;
            let u_n = orth_complement_in(k, &span_z, qs.space(), qs.form())?;
            let hu = u_n.height_euclid().clone();
            let pc_bound = bounds::evaluate(
                &consts,
                &Bound::PointComplement {
                    n: nn,
                    hf: hf.clone(),
                    hx: hx.clone(),
                    hv: hv.clone(),
                },
            );
            cert.push_bound(
                "point_complement",
                Subject::Witness {
                    key: format!("u_complement_{n}"),
                },
                BoundParams {
                    n: Some(nn),
                    hf: hrepr(&hf),
                    hx: hrepr(&hx),
                    hv: hrepr(&hv),
                    ..Default::default()
                },
                &pc_bound,
                &hu,
            );
            let w_prime = max_isotropic_of(k, &u_n, qs.form(), params)?;
            let mi_bound = bounds::evaluate(
                &consts,
                &Bound::MaxIsotropicSub {
                    l,
                    m: m as u64,
                    hf: hf.clone(),
                    hu: hu.clone(),
                },
            );
            cert.push_bound(
                "max_isotropic_sub",
                Subject::Witness {
                    key: format!("w_prime_{n}"),
                },
                BoundParams {
                    l: Some(l),
                    m: Some(m as u64),
                    hf: hrepr(&hf),
                    hu: hrepr(&hu),
                    ..Default::default()
                },
                &mi_bound,
                w_prime.height_euclid(),
            );
            let mut vecs = vec![z.clone()];
            vecs.extend(w_prime.basis_vectors());
            let w_top = Subspace::from_vectors(
                k,
                qs.space().ambient(),
                &heights::independent_subset(k, qs.space().ambient(), &vecs),
            )?;
            let sw_bound = bounds::evaluate(
                &consts,
                &Bound::SpanWithPoint {
                    n: nn,
                    hx: hx.clone(),
                    hw: w_prime.height_euclid().clone(),
                },
            );
            cert.push_bound(
                "span_with_point",
                Subject::Witness {
                    key: format!("w_top_{n}"),
                },
                BoundParams {
                    n: Some(nn),
                    hx: hrepr(&hx),
                    hw: hrepr(w_prime.height_euclid()),
                    ..Default::default()
                },
                &sw_bound,
                w_top.height_euclid(),
            );
            (w_top, Some(w_prime))
        };
        if w_top.dim() != m {
            return Err(Error::defect(
                "maximal totally isotropic construction missed the expected dimension",
            ));
        }
        // reduced basis of the top, reordered so the base point leads
        let w_basis = reduced_basis(k, &w_top, params)?;
        let mut ordered = vec![z.clone()];
        ordered.extend(w_basis);
        let ordered = heights::independent_subset(k, qs.space().ambient(), &ordered);
        debug_assert_eq!(ordered.len(), m);
        let mut links = vec![];
        for kk in 1..=m {
            let w_k = Subspace::from_vectors(k, qs.space().ambient(), &ordered[..kk])?;
            let sidx = cert.push_subspace(&w_k);
            links.push(sidx);
            cert.claims.push(Claim::SubspaceDim {
                subspace: sidx,
                dim: kk,
            });
            cert.claims.push(Claim::GramZero { subspace: sidx });
            cert.claims.push(Claim::SubspaceContainsPoint {
                subspace: sidx,
                point: n,
            });
            for (family, &witness_poly) in data.chosen[n].iter().enumerate() {
                cert.claims.push(Claim::SubspaceNotInAvoidance {
                    subspace: sidx,
                    family,
                    witness_point: n,
                    witness_poly,
                });
            }
            if kk == m {
                let top_bound = bounds::evaluate(
                    &consts,
                    &Bound::ChainTop {
                        l,
                        m_deg,
                        n: nn,
                        m: m as u64,
                        hf: hf.clone(),
                        hv: hv.clone(),
                    },
                );
                cert.push_bound(
                    "chain_top",
                    Subject::SubspaceHH { index: sidx },
                    BoundParams {
                        l: Some(l),
                        m_deg: Some(m_deg),
                        n: Some(nn),
                        m: Some(m as u64),
                        hf: hrepr(&hf),
                        hv: hrepr(&hv),
                        ..Default::default()
                    },
                    &top_bound,
                    w_k.height_euclid(),
                );
            } else {
                let link_bound = bounds::evaluate(
                    &consts,
                    &Bound::ChainLink {
                        l,
                        m_deg,
                        n: nn,
                        m: m as u64,
                        k: kk as u64,
                        hf: hf.clone(),
                        hv: hv.clone(),
                    },
                );
                cert.push_bound(
                    "chain_link",
                    Subject::SubspaceHH { index: sidx },
                    BoundParams {
                        l: Some(l),
                        m_deg: Some(m_deg),
                        n: Some(nn),
                        m: Some(m as u64),
                        k: Some(kk as u64),
                        hf: hrepr(&hf),
                        hv: hrepr(&hv),
                        ..Default::default()
                    },
                    &link_bound,
                    w_k.height_euclid(),
                );
            }
        }
        cert.claims.push(Claim::Nested {
            chain: links.clone(),
        });
        cert.witnesses.chains.push(ChainWitness {
            base_point: n,
            links,
            w_prime: w_prime.map(|w| render_subspace(k, &w)),
        });
    }
    cert.claims.push(Claim::LinearIndependence {
        points: (0..m).collect(),
        rank: m,
    });
    cert.claims.push(Claim::MonotoneHeights {
        points: (0..m).collect(),
    });
    cert.witnesses.separating_forms = data
        .separating
        .iter()
        .map(|p| PolyRepr::of(k, p))
        .collect();
    let out = cert.finish();
    ensure_bounds_pass(&out)?;
    Ok(out)
}

// ---------------------------------------------------------------------------
// Bases: outside a variety union, reduced, pairwise orthogonal
// ---------------------------------------------------------------------------

/// A basis of V avoiding the variety union, heights nondecreasing, each
/// vector below the explicit bound.
pub fn basis_outside<K: Enumerable + 'static>(
    k: &K,
    space: &Subspace<K>,
    s: &AvoidanceSystem<K>,
    params: &SearchParams,
    slack: f64,
) -> Result<Certificate, Error> {
    let l = space.dim();
    if l == 0 {
        return Err(Error::precondition("the zero subspace has no basis"));
    }
    // precondition: V not inside any family's zero set
    for (i, fam) in s.families().iter().enumerate() {
        let all_vanish = fam
            .iter()
            .map(|p| restrict_to_basis(k, p, space.basis()))
            .collect::<Result<Vec<_>, _>>()?
            .iter()
            .all(|r| r.is_zero());
        if all_vanish {
            return Err(Error::precondition(format!(
                "V lies inside the zero set of avoidance family {}",
                i + 1
            )));
        }
    }
    let consts = Constants::new(k.descriptor());
    let bound = bounds::evaluate(
        &consts,
        &Bound::BasisOutside {
            l: l as u64,
            m_deg: s.degree_sum(),
            hv: space.height_euclid().clone(),
        },
    );
    let cap_shell = k.shell_cap(bound.hi + 1e-9);
    let mut points: Vec<Vec<K::Elem>> = vec![];
    let mut chosen: Vec<Vec<usize>> = vec![];
    let mut separating: Vec<MultiPoly<K>> = vec![];
    let mut sep_vec: Option<Vec<K::Elem>> = None;
    let mut min_shell = k.min_projective_shell();
    for _n in 0..l {
        let cfg = StreamCfg::new(cap_shell, params.budget);
        let mut found = None;
        for item in subspace_points(k, space, cfg)? {
            let (cand, shell) = item?;
            if shell < min_shell {
                continue;
            }
            let Some(wit) = s.avoidance_witnesses(k, &cand) else {
                continue;
            };
            if let Some(lf) = &sep_vec {
                if k.is_zero(&linalg::dot(k, lf, &cand)) {
                    continue;
                }
            }
            found = Some((cand, wit, shell));
            break;
        }
        let Some((z, wit, shell)) = found else {
            return Err(Error::defect(
                "no avoiding basis vector below the guaranteed bound",
            ));
        };
        min_shell = shell;
        points.push(z);
        chosen.push(wit);
        if points.len() < l {
            let (vec_l, poly_l) = separating_form(k, &points, space, params)?;
            sep_vec = Some(vec_l);
            separating.push(poly_l);
        }
    }
    let mut cert = CertBuilder::new(k, "basis_outside", None, space, s.to_repr(k), slack);
    for (n, z) in points.iter().enumerate() {
        let idx = cert.push_point(z);
        cert.claims.push(Claim::Membership { point: idx });
        cert.claims.push(Claim::NonzeroPoint { point: idx });
        for (family, &witness_poly) in chosen[n].iter().enumerate() {
            cert.claims.push(Claim::Avoidance {
                point: idx,
                family,
                witness_poly,
            });
        }
        cert.push_bound(
            "basis_outside",
            Subject::PointH { index: idx },
            BoundParams {
                l: Some(l as u64),
                m_deg: Some(s.degree_sum()),
                hv: hrepr(space.height_euclid()),
                ..Default::default()
            },
            &bound,
            &heights::height_inhom(k, z),
        );
    }
    cert.claims.push(Claim::SpansSpace {
        points: (0..l).collect(),
    });
    cert.claims.push(Claim::MonotoneHeights {
        points: (0..l).collect(),
    });
    cert.witnesses.separating_forms =
        separating.iter().map(|p| PolyRepr::of(k, p)).collect();
    let out = cert.finish();
    ensure_bounds_pass(&out)?;
    Ok(out)
}

/// Reduced (minimal height product) basis with its product bound.
pub fn siegel_basis<K: Enumerable + 'static>(
    k: &K,
    space: &Subspace<K>,
    params: &SearchParams,
    slack: f64,
) -> Result<Certificate, Error> {
    let l = space.dim();
    if l == 0 {
        return Err(Error::precondition("the zero subspace has no basis"));
    }
    let basis = reduced_basis(k, space, params)?;
    let consts = Constants::new(k.descriptor());
    let bound = bounds::evaluate(
        &consts,
        &Bound::SiegelProduct {
            l: l as u64,
            hv: space.height_euclid().clone(),
        },
    );
    let mut cert = CertBuilder::new(k, "siegel_basis", None, space, vec![], slack);
    let mut prod = Height::one_of(k);
    for z in &basis {
        let idx = cert.push_point(z);
        cert.claims.push(Claim::Membership { point: idx });
        cert.claims.push(Claim::NonzeroPoint { point: idx });
        prod = prod.mul(&heights::height_inhom(k, z));
    }
    cert.push_bound(
        "siegel_product",
        Subject::ProductPointH {
            indices: (0..l).collect(),
        },
        BoundParams {
            l: Some(l as u64),
            hv: hrepr(space.height_euclid()),
            ..Default::default()
        },
        &bound,
        &prod,
    );
    cert.claims.push(Claim::SpansSpace {
        points: (0..l).collect(),
    });
    let out = cert.finish();
    ensure_bounds_pass(&out)?;
    Ok(out)
}

/// Pairwise F-orthogonal basis of V over a function field, with the explicit
/// product bound. Greedy: radical blocks take a reduced basis, regular blocks
/// split off a minimal-height anisotropic vector.
pub fn orth_basis_ff<K: Enumerable + 'static>(
    k: &K,
    space: &Subspace<K>,
    form: &QuadForm<K>,
    params: &SearchParams,
    slack: f64,
) -> Result<Certificate, Error> {
    if k.descriptor().is_rational() {
        return Err(Error::precondition(
            "orthogonal basis construction is provided over function fields only",
        ));
    }
    let l = space.dim();
    if l == 0 {
        return Err(Error::precondition("the zero subspace has no basis"));
    }
    let consts = Constants::new(k.descriptor());
    let mut basis: Vec<Vec<K::Elem>> = vec![];
    let mut cur = space.clone();
    while cur.dim() > 0 {
        let rad = radical_of(k, &cur, form)?;
        if rad.dim() == cur.dim() {
            // the form vanishes identically here: any reduced basis is
            // orthogonal
            basis.extend(reduced_basis(k, &cur, params)?);
            break;
        }
        // minimal-height anisotropic vector of the current block
        let cap = bounds::evaluate(
            &consts,
            &Bound::SiegelProduct {
                l: cur.dim() as u64,
                hv: cur.height_euclid().clone(),
            },
        );
        let cfg = StreamCfg::new(k.shell_cap(cap.hi + 1e-9), params.budget);
        let mut x = None;
        for item in subspace_points(k, &cur, cfg)? {
            let (cand, _) = item?;
            if !k.is_zero(&form.quad(k, &cand)) {
                x = Some(cand);
                break;
            }
        }
        let x = x.ok_or_else(|| {
            Error::defect("no anisotropic vector below the reduced-basis bound")
        })?;
        let span_x = Subspace::from_vectors(k, cur.ambient(), &[x.clone()])?;
        let rest = orth_complement_in(k, &span_x, &cur, form)?;
        basis.push(x);
        cur = rest;
    }
    if basis.len() != l {
        return Err(Error::defect("orthogonal construction lost dimensions"));
    }
    let bound = bounds::evaluate(
        &consts,
        &Bound::OrthBasisProduct {
            l: l as u64,
            hf: form.height_max().clone(),
            hv: space.height_max().clone(),
        },
    );
    let mut cert = CertBuilder::new(k, "orth_basis_ff", Some(form), space, vec![], slack);
    let mut prod = Height::one_of(k);
    for z in &basis {
        let idx = cert.push_point(z);
        cert.claims.push(Claim::Membership { point: idx });
        cert.claims.push(Claim::NonzeroPoint { point: idx });
        prod = prod.mul(&heights::height_max(k, z));
    }
    cert.push_bound(
        "orth_basis_product",
        Subject::ProductPointHMax {
            indices: (0..l).collect(),
        },
        BoundParams {
            l: Some(l as u64),
            hf: hrepr(form.height_max()),
            hv: hrepr(space.height_max()),
            ..Default::default()
        },
        &bound,
        &prod,
    );
    cert.claims.push(Claim::PairwiseOrthogonal {
        points: (0..l).collect(),
    });
    cert.claims.push(Claim::SpansSpace {
        points: (0..l).collect(),
    });
    let out = cert.finish();
    ensure_bounds_pass(&out)?;
    Ok(out)
}
