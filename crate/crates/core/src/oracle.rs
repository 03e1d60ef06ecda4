//! Independent brute-force oracle: exhaustive enumeration of points of
//! bounded height, true minimal zeros and minimal totally isotropic
//! subspaces, and re-verification of certificates.
//!
//! The verifier re-derives every claim of a certificate from the embedded
//! problem and outputs alone: polynomial values are re-evaluated, heights are
//! recomputed exactly, and bound right-hand sides are re-evaluated from their
//! stored parameters (with the problem-derivable parameters cross-checked
//! against fresh values). A tampered point, height or bound therefore always
//! trips at least one claim.

use crate::bounds;
use crate::certificate::{
    parse_vector, problem_view, rebuild_bound, BoundRecord, Certificate, Claim, ProblemView,
    Subject,
};
use crate::constants::Constants;
use crate::enumerate::{subspace_points, Enumerable, StreamCfg};
use crate::field::Field;
use crate::height::Height;
use crate::heights::{self, Subspace};
use crate::linalg::{self, Matrix};
use crate::quadspace::{gram, QuadForm, QuadSpace};
use crate::smallzeros::AvoidanceSystem;
use crate::Error;
use serde::{Deserialize, Serialize};

/// Configuration of one oracle enumeration.
#[derive(Clone, Debug)]
pub struct EnumConfig<K: Field> {
    pub space: Subspace<K>,
    /// Height cap as a natural log.
    pub cap_log: f64,
    /// Maximum number of points the stream may yield.
    pub budget: u64,
    /// Keep only zeros of this form.
    pub form_filter: Option<QuadForm<K>>,
    /// Keep only points outside the avoidance union.
    pub avoid: Option<AvoidanceSystem<K>>,
}

/// Every projective point of the target space with height at or below the
/// cap, exactly once (canonical primitive representatives), in nondecreasing
/// height and lexicographic order, after the configured filters.
pub fn enumerate_points<K: Enumerable + 'static>(
    k: &K,
    cfg: &EnumConfig<K>,
) -> Result<impl Iterator<Item = Result<(Vec<K::Elem>, u64), Error>>, Error> {
    let stream_cfg = StreamCfg::new(k.shell_cap(cfg.cap_log), cfg.budget);
    let inner = subspace_points(k, &cfg.space, stream_cfg)?;
    let k2 = k.clone();
    let zero_test = cfg.form_filter.as_ref().map(|f| k.quad_zero_tester(f.matrix()));
    let avoid = cfg.avoid.clone();
    Ok(inner.filter(move |item| match item {
        Err(_) => true,
        Ok((p, _)) => {
            if let Some(t) = &zero_test {
                if !t(p) {
                    return false;
                }
            }
            if let Some(s) = &avoid {
                if s.avoidance_witnesses(&k2, p).is_none() {
                    return false;
                }
            }
            true
        }
    }))
}

/// The first enumerated zero of F in V outside the avoidance union, or None
/// when no such point exists below the cap.
pub fn minimal_zero<K: Enumerable + 'static>(
    k: &K,
    qs: &QuadSpace<K>,
    s: &AvoidanceSystem<K>,
    cap_log: f64,
    budget: u64,
) -> Result<Option<(Vec<K::Elem>, u64)>, Error> {
    let cfg = EnumConfig {
        space: qs.space().clone(),
        cap_log,
        budget,
        form_filter: Some(qs.form().clone()),
        avoid: Some(s.clone()),
    };
    for item in enumerate_points(k, &cfg)? {
        return Ok(Some(item?));
    }
    Ok(None)
}

/// Among all totally isotropic subspaces of dimension `ell` spanned by
/// enumerated isotropic points below the cap, one of minimal height (ties
/// broken by the lexicographically least Grassmann vector). None when no
/// such subspace is spanned below the cap.
///
/// Shells are consumed incrementally: a reduced basis of the minimal
/// subspace consists of vectors no taller than the subspace itself, so once
/// a candidate of height within the consumed shells is found it is globally
/// minimal and the search stops.
pub fn minimal_isotropic_subspace<K: Enumerable + 'static>(
    k: &K,
    qs: &QuadSpace<K>,
    ell: usize,
    cap_log: f64,
    budget: u64,
) -> Result<Option<Subspace<K>>, Error> {
    assert!(ell >= 1);
    let cfg = EnumConfig {
        space: qs.space().clone(),
        cap_log,
        budget,
        form_filter: Some(qs.form().clone()),
        avoid: None,
    };
    let mut zeros: Vec<Vec<K::Elem>> = vec![];
    let mut best: Option<Subspace<K>> = None;
    let mut stream = enumerate_points(k, &cfg)?;
    let mut pending: Option<(Vec<K::Elem>, u64)> = None;
    let mut shell = k.min_projective_shell();
    let cap_shell = k.shell_cap(cap_log);
    loop {
        // pull every zero of the current shell
        let mut exhausted = false;
        loop {
            let item = match pending.take() {
                Some(it) => Some(Ok(it)),
                None => stream.next(),
            };
            match item {
                None => {
                    exhausted = true;
                    break;
                }
                Some(Err(e)) => return Err(e),
                Some(Ok((p, s))) if s == shell => zeros.push(p),
                Some(Ok(other)) => {
                    pending = Some(other);
                    break;
                }
            }
        }
        search_isotropic_subsets(k, qs, &zeros, ell, &mut best)?;
        if !k.descriptor().is_rational() {
            // over a function field a reduced basis of the minimal subspace
            // has all vectors within its own height, so the candidate is
            // globally minimal once the consumed shells reach it
            if let Some(b) = &best {
                if k.vector_shell(b.plucker()) <= shell {
                    return Ok(best);
                }
            }
        }
        if exhausted || shell >= cap_shell {
            // only candidates within the cap count
            if let Some(b) = &best {
                if k.vector_shell(b.plucker()) > cap_shell {
                    return Ok(None);
                }
            }
            return Ok(best);
        }
        shell += 1;
    }
}

fn search_isotropic_subsets<K: Enumerable + 'static>(
    k: &K,
    qs: &QuadSpace<K>,
    zeros: &[Vec<K::Elem>],
    ell: usize,
    best: &mut Option<Subspace<K>>,
) -> Result<(), Error> {
    let mut stack: Vec<(Vec<Vec<K::Elem>>, usize)> = vec![(vec![], 0)];
    while let Some((chosen, start)) = stack.pop() {
        if chosen.len() == ell {
            let cand = Subspace::from_vectors(k, qs.space().ambient(), &chosen)?;
            let better = match &*best {
                None => true,
                Some(b) => match cand.height_max().cmp_exact(b.height_max()) {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Greater => false,
                    std::cmp::Ordering::Equal => {
                        crate::enumerate::cmp_points(k, cand.plucker(), b.plucker())
                            == std::cmp::Ordering::Less
                    }
                },
            };
            if better {
                *best = Some(cand);
            }
            continue;
        }
        for (i, z) in zeros.iter().enumerate().skip(start) {
            // extension must stay totally isotropic and independent
            if !chosen
                .iter()
                .all(|c| k.is_zero(&qs.form().bilinear(k, c, z)))
            {
                continue;
            }
            let mut next = chosen.clone();
            next.push(z.clone());
            let m = Matrix::from_cols(next.clone())?;
            if linalg::rank(k, &m) != next.len() {
                continue;
            }
            stack.push((next, i + 1));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Certificate verification
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClaimResult {
    pub description: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub kind: String,
    pub all_pass: bool,
    pub claims: Vec<ClaimResult>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Re-evaluates every claim of the certificate with fresh computations.
pub fn certify(cert: &Certificate) -> Report {
    let res = crate::certificate::with_field(
        &cert.problem.field,
        |k| Ok(certify_in(k, cert)),
        |k| Ok(certify_in(k, cert)),
    );
    match res {
        Ok(r) => r,
        Err(e) => Report {
            kind: cert.kind.clone(),
            all_pass: false,
            claims: vec![ClaimResult {
                description: "parse embedded problem".into(),
                pass: false,
                detail: Some(e.to_string()),
            }],
        },
    }
}

struct Ctx<K: Field> {
    view: ProblemView<K>,
    points: Vec<Vec<K::Elem>>,
    subspaces: Vec<Subspace<K>>,
}

fn certify_in<K: Enumerable + 'static>(k: &K, cert: &Certificate) -> Report {
    let mut claims = vec![];
    let ctx = match build_ctx(k, cert) {
        Ok(c) => c,
        Err(e) => {
            return Report {
                kind: cert.kind.clone(),
                all_pass: false,
                claims: vec![ClaimResult {
                    description: "parse embedded problem and outputs".into(),
                    pass: false,
                    detail: Some(e.to_string()),
                }],
            };
        }
    };
    for claim in &cert.claims {
        claims.push(check_claim(k, cert, &ctx, claim));
    }
    let all_pass = claims.iter().all(|c| c.pass);
    Report {
        kind: cert.kind.clone(),
        all_pass,
        claims,
    }
}

fn build_ctx<K: Enumerable + 'static>(k: &K, cert: &Certificate) -> Result<Ctx<K>, Error> {
    let view = problem_view(k, &cert.problem)?;
    let points: Result<Vec<Vec<K::Elem>>, Error> = cert
        .outputs
        .points
        .iter()
        .map(|p| parse_vector(k, p))
        .collect();
    let subspaces: Result<Vec<Subspace<K>>, Error> = cert
        .outputs
        .subspaces
        .iter()
        .map(|rows| {
            let vecs: Result<Vec<Vec<K::Elem>>, Error> =
                rows.iter().map(|r| parse_vector(k, r)).collect();
            Subspace::from_vectors(k, cert.problem.n, &vecs?)
        })
        .collect();
    Ok(Ctx {
        view,
        points: points?,
        subspaces: subspaces?,
    })
}

fn ok(description: String) -> ClaimResult {
    ClaimResult {
        description,
        pass: true,
        detail: None,
    }
}

fn fail(description: String, detail: impl Into<String>) -> ClaimResult {
    ClaimResult {
        description,
        pass: false,
        detail: Some(detail.into()),
    }
}

fn check_claim<K: Enumerable + 'static>(
    k: &K,
    cert: &Certificate,
    ctx: &Ctx<K>,
    claim: &Claim,
) -> ClaimResult {
    match claim {
        Claim::FormZero { point } => {
            let d = format!("F(point {point}) = 0");
            let Some(z) = ctx.points.get(*point) else {
                return fail(d, "point index out of range");
            };
            let Some(form) = &ctx.view.form else {
                return fail(d, "certificate has no form");
            };
            if k.is_zero(&form.quad(k, z)) {
                ok(d)
            } else {
                fail(d, "form does not vanish")
            }
        }
        Claim::Membership { point } => {
            let d = format!("point {point} lies in V");
            let Some(z) = ctx.points.get(*point) else {
                return fail(d, "point index out of range");
            };
            if ctx.view.space.contains(k, z) {
                ok(d)
            } else {
                fail(d, "not in the subspace")
            }
        }
        Claim::NonzeroPoint { point } => {
            let d = format!("point {point} is nonzero");
            match ctx.points.get(*point) {
                Some(z) if !z.iter().all(|e| k.is_zero(e)) => ok(d),
                Some(_) => fail(d, "zero vector"),
                None => fail(d, "point index out of range"),
            }
        }
        Claim::Avoidance {
            point,
            family,
            witness_poly,
        } => {
            let d = format!(
                "family {family} witness {witness_poly} nonzero at point {point}"
            );
            let Some(z) = ctx.points.get(*point) else {
                return fail(d, "point index out of range");
            };
            let Some(p) = ctx
                .view
                .avoidance
                .get(*family)
                .and_then(|f| f.get(*witness_poly))
            else {
                return fail(d, "witness polynomial out of range");
            };
            if k.is_zero(&p.evaluate(k, z)) {
                fail(d, "witness polynomial vanishes")
            } else {
                ok(d)
            }
        }
        Claim::LinearIndependence { points, rank } => {
            let d = format!("points {points:?} have rank {rank}");
            let vecs: Option<Vec<Vec<K::Elem>>> =
                points.iter().map(|&i| ctx.points.get(i).cloned()).collect();
            let Some(vecs) = vecs else {
                return fail(d, "point index out of range");
            };
            match Matrix::from_cols(vecs) {
                Ok(m) if linalg::rank(k, &m) == *rank => ok(d),
                Ok(m) => fail(d, format!("rank is {}", linalg::rank(k, &m))),
                Err(e) => fail(d, e.to_string()),
            }
        }
        Claim::MonotoneHeights { points } => {
            let d = format!("heights of points {points:?} are nondecreasing");
            let mut prev_h: Option<Height> = None;
            let mut prev_hm: Option<Height> = None;
            for &i in points {
                let Some(z) = ctx.points.get(i) else {
                    return fail(d, "point index out of range");
                };
                let h = heights::height_inhom(k, z);
                let hm = heights::height_max(k, z);
                if let Some(p) = &prev_h {
                    if h.cmp_exact(p) == std::cmp::Ordering::Less {
                        return fail(d, format!("h decreases at point {i}"));
                    }
                }
                if let Some(p) = &prev_hm {
                    if hm.cmp_exact(p) == std::cmp::Ordering::Less {
                        return fail(d, format!("H decreases at point {i}"));
                    }
                }
                prev_h = Some(h);
                prev_hm = Some(hm);
            }
            ok(d)
        }
        Claim::HeightBound { bound } => check_bound(k, cert, ctx, *bound),
        Claim::GramZero { subspace } => {
            let d = format!("subspace {subspace} is totally isotropic");
            let Some(s) = ctx.subspaces.get(*subspace) else {
                return fail(d, "subspace index out of range");
            };
            let Some(form) = &ctx.view.form else {
                return fail(d, "certificate has no form");
            };
            let g = gram(k, form.matrix(), s.basis());
            if g.as_vector().iter().all(|e| k.is_zero(e)) {
                ok(d)
            } else {
                fail(d, "Gram matrix has a nonzero entry")
            }
        }
        Claim::Nested { chain } => {
            let d = format!("chain {chain:?} is nested");
            for w in chain.windows(2) {
                let (Some(a), Some(b)) =
                    (ctx.subspaces.get(w[0]), ctx.subspaces.get(w[1]))
                else {
                    return fail(d, "subspace index out of range");
                };
                if !b.contains_subspace(k, a) || a.dim() + 1 != b.dim() {
                    return fail(d, format!("link {} not nested in {}", w[0], w[1]));
                }
            }
            ok(d)
        }
        Claim::SubspaceContainsPoint { subspace, point } => {
            let d = format!("subspace {subspace} contains point {point}");
            match (ctx.subspaces.get(*subspace), ctx.points.get(*point)) {
                (Some(s), Some(z)) if s.contains(k, z) => ok(d),
                (Some(_), Some(_)) => fail(d, "point not in subspace"),
                _ => fail(d, "index out of range"),
            }
        }
        Claim::SubspaceDim { subspace, dim } => {
            let d = format!("subspace {subspace} has dimension {dim}");
            match ctx.subspaces.get(*subspace) {
                Some(s) if s.dim() == *dim => ok(d),
                Some(s) => fail(d, format!("dimension is {}", s.dim())),
                None => fail(d, "subspace index out of range"),
            }
        }
        Claim::SubspaceNotInAvoidance {
            subspace,
            family,
            witness_point,
            witness_poly,
        } => {
            let d = format!(
                "subspace {subspace} escapes family {family} at point {witness_point}"
            );
            let (Some(s), Some(z)) = (
                ctx.subspaces.get(*subspace),
                ctx.points.get(*witness_point),
            ) else {
                return fail(d, "index out of range");
            };
            if !s.contains(k, z) {
                return fail(d, "witness point not in the subspace");
            }
            let Some(p) = ctx
                .view
                .avoidance
                .get(*family)
                .and_then(|f| f.get(*witness_poly))
            else {
                return fail(d, "witness polynomial out of range");
            };
            if k.is_zero(&p.evaluate(k, z)) {
                fail(d, "witness polynomial vanishes at the witness point")
            } else {
                ok(d)
            }
        }
        Claim::PairwiseOrthogonal { points } => {
            let d = format!("points {points:?} are pairwise orthogonal");
            let Some(form) = &ctx.view.form else {
                return fail(d, "certificate has no form");
            };
            for (a, &i) in points.iter().enumerate() {
                for &j in points.iter().skip(a + 1) {
                    let (Some(x), Some(y)) = (ctx.points.get(i), ctx.points.get(j))
                    else {
                        return fail(d, "point index out of range");
                    };
                    if !k.is_zero(&form.bilinear(k, x, y)) {
                        return fail(d, format!("F(x_{i}, x_{j}) != 0"));
                    }
                }
            }
            ok(d)
        }
        Claim::SpansSpace { points } => {
            let d = format!("points {points:?} form a basis of V");
            let vecs: Option<Vec<Vec<K::Elem>>> =
                points.iter().map(|&i| ctx.points.get(i).cloned()).collect();
            let Some(vecs) = vecs else {
                return fail(d, "point index out of range");
            };
            if vecs.iter().any(|v| !ctx.view.space.contains(k, v)) {
                return fail(d, "a vector is outside V");
            }
            match Matrix::from_cols(vecs) {
                Ok(m) if linalg::rank(k, &m) == ctx.view.space.dim() => ok(d),
                Ok(_) => fail(d, "vectors do not span V"),
                Err(e) => fail(d, e.to_string()),
            }
        }
        Claim::HeightsMatch => {
            let d = "stored heights equal recomputed heights".to_string();
            for (i, z) in ctx.points.iter().enumerate() {
                let h = heights::height_inhom(k, z);
                let hm = heights::height_max(k, z);
                let sh = cert.outputs.point_h.get(i).and_then(|r| r.to_height());
                let shm = cert.outputs.point_hmax.get(i).and_then(|r| r.to_height());
                if sh.as_ref() != Some(&h) || shm.as_ref() != Some(&hm) {
                    return fail(d, format!("heights of point {i} differ"));
                }
            }
            for (i, s) in ctx.subspaces.iter().enumerate() {
                let stored = cert
                    .outputs
                    .subspace_hh
                    .get(i)
                    .and_then(|r| r.to_height());
                if stored.as_ref() != Some(s.height_euclid()) {
                    return fail(d, format!("height of subspace {i} differs"));
                }
            }
            ok(d)
        }
    }
}

/// Recomputed subject height of a bound record.
fn subject_height<K: Enumerable + 'static>(
    k: &K,
    cert: &Certificate,
    ctx: &Ctx<K>,
    subject: &Subject,
) -> Result<Height, Error> {
    match subject {
        Subject::PointH { index } => {
            let z = ctx
                .points
                .get(*index)
                .ok_or_else(|| Error::parse("point index out of range"))?;
            Ok(heights::height_inhom(k, z))
        }
        Subject::SubspaceHH { index } => {
            let s = ctx
                .subspaces
                .get(*index)
                .ok_or_else(|| Error::parse("subspace index out of range"))?;
            Ok(s.height_euclid().clone())
        }
        Subject::ProductPointH { indices } => {
            let mut acc = Height::one_of(k);
            for &i in indices {
                let z = ctx
                    .points
                    .get(i)
                    .ok_or_else(|| Error::parse("point index out of range"))?;
                acc = acc.mul(&heights::height_inhom(k, z));
            }
            Ok(acc)
        }
        Subject::ProductPointHMax { indices } => {
            let mut acc = Height::one_of(k);
            for &i in indices {
                let z = ctx
                    .points
                    .get(i)
                    .ok_or_else(|| Error::parse("point index out of range"))?;
                acc = acc.mul(&heights::height_max(k, z));
            }
            Ok(acc)
        }
        Subject::Witness { key } => witness_height(k, cert, ctx, key),
    }
}

fn parse_poly_vector<K: Field>(
    k: &K,
    v: &Option<Vec<String>>,
    what: &str,
) -> Result<Vec<K::Elem>, Error> {
    let v = v
        .as_ref()
        .ok_or_else(|| Error::parse(format!("missing witness {what}")))?;
    parse_vector(k, v)
}

fn witness_height<K: Enumerable + 'static>(
    k: &K,
    cert: &Certificate,
    ctx: &Ctx<K>,
    key: &str,
) -> Result<Height, Error> {
    let w0 = cert.witnesses.pipeline.first();
    match key {
        "siegel_product" => {
            let w = w0.ok_or_else(|| Error::parse("missing pipeline witness"))?;
            let basis = w
                .siegel_basis
                .as_ref()
                .ok_or_else(|| Error::parse("missing reduced basis witness"))?;
            let mut acc = Height::one_of(k);
            for col in basis {
                let v = parse_vector(k, col)?;
                acc = acc.mul(&heights::height_inhom(k, &v));
            }
            Ok(acc)
        }
        "x" => {
            let w = w0.ok_or_else(|| Error::parse("missing pipeline witness"))?;
            let v = parse_poly_vector(k, &w.x, "x")?;
            Ok(heights::height_inhom(k, &v))
        }
        "w" => {
            let w = w0.ok_or_else(|| Error::parse("missing pipeline witness"))?;
            let v = parse_poly_vector(k, &w.w, "w")?;
            Ok(heights::height_inhom(k, &v))
        }
        _ => {
            if let Some(n) = key.strip_prefix("u_complement_") {
                let n: usize = n
                    .parse()
                    .map_err(|_| Error::parse("bad witness key"))?;
                let u = complement_of_point(k, ctx, n)?;
                return Ok(u.height_euclid().clone());
            }
            if let Some(n) = key.strip_prefix("w_prime_") {
                let n: usize = n
                    .parse()
                    .map_err(|_| Error::parse("bad witness key"))?;
                let chain = cert
                    .witnesses
                    .chains
                    .iter()
                    .find(|c| c.base_point == n)
                    .ok_or_else(|| Error::parse("missing chain witness"))?;
                let rows = chain
                    .w_prime
                    .as_ref()
                    .ok_or_else(|| Error::parse("missing orthogonal-section witness"))?;
                let vecs: Result<Vec<Vec<K::Elem>>, Error> =
                    rows.iter().map(|r| parse_vector(k, r)).collect();
                let s = Subspace::from_vectors(k, cert.problem.n, &vecs?)?;
                return Ok(s.height_euclid().clone());
            }
            if let Some(n) = key.strip_prefix("w_top_") {
                let n: usize = n
                    .parse()
                    .map_err(|_| Error::parse("bad witness key"))?;
                let chain = cert
                    .witnesses
                    .chains
                    .iter()
                    .find(|c| c.base_point == n)
                    .ok_or_else(|| Error::parse("missing chain witness"))?;
                let top = chain
                    .links
                    .last()
                    .and_then(|&i| ctx.subspaces.get(i))
                    .ok_or_else(|| Error::parse("missing chain top"))?;
                return Ok(top.height_euclid().clone());
            }
            Err(Error::parse(format!("unknown witness key {key:?}")))
        }
    }
}

/// The orthogonal complement of an output point inside V (used by the chain
/// bounds).
fn complement_of_point<K: Enumerable + 'static>(
    k: &K,
    ctx: &Ctx<K>,
    n: usize,
) -> Result<Subspace<K>, Error> {
    let z = ctx
        .points
        .get(n)
        .ok_or_else(|| Error::parse("point index out of range"))?;
    let form = ctx
        .view
        .form
        .as_ref()
        .ok_or_else(|| Error::parse("certificate has no form"))?;
    let span = Subspace::from_vectors(k, ctx.view.space.ambient(), &[z.clone()])?;
    crate::quadspace::orth_complement_in(k, &span, &ctx.view.space, form)
}

fn decimal_close(stored: &str, fresh: f64) -> bool {
    match stored.parse::<f64>() {
        Ok(v) => (v - fresh).abs() <= 1e-6 * fresh.abs().max(1.0),
        Err(_) => false,
    }
}

fn check_bound<K: Enumerable + 'static>(
    k: &K,
    cert: &Certificate,
    ctx: &Ctx<K>,
    index: usize,
) -> ClaimResult {
    let Some(rec) = cert.bounds.get(index) else {
        return fail(format!("bound {index}"), "bound index out of range");
    };
    let d = format!("bound {index} ({}) holds", rec.name);
    // cross-check the problem-derivable parameters stored in the record
    if let Err(e) = validate_params(k, cert, ctx, rec) {
        return fail(d, e.to_string());
    }
    let bound = match rebuild_bound(&rec.name, &rec.params) {
        Ok(b) => b,
        Err(e) => return fail(d, e.to_string()),
    };
    let consts = Constants::new(k.descriptor());
    let rhs = bounds::evaluate(&consts, &bound);
    if !decimal_close(&rec.rhs_lo, rhs.lo) || !decimal_close(&rec.rhs_hi, rhs.hi) {
        return fail(d, "stored bound interval differs from recomputation");
    }
    let subject = match subject_height(k, cert, ctx, &rec.subject) {
        Ok(h) => h,
        Err(e) => return fail(d, e.to_string()),
    };
    if !decimal_close(&rec.subject_log, subject.to_logval().hi) {
        return fail(d, "stored subject height differs from recomputation");
    }
    let pass = subject.leq_bound(&rhs, cert.slack);
    if !pass {
        return fail(d, "recomputed comparison fails");
    }
    if !rec.pass {
        return fail(d, "stored pass flag is false");
    }
    ok(d)
}

/// Cross-checks every stored height parameter that is derivable from the
/// embedded problem or the witnesses. An inflated parameter would loosen the
/// bound, so each one must match its fresh recomputation exactly.
fn validate_params<K: Enumerable + 'static>(
    k: &K,
    cert: &Certificate,
    ctx: &Ctx<K>,
    rec: &BoundRecord,
) -> Result<(), Error> {
    let mismatch = |what: &str| Error::parse(format!("stored {what} differs from recomputation"));
    if let Some(hf) = &rec.params.hf {
        let form = ctx
            .view
            .form
            .as_ref()
            .ok_or_else(|| Error::parse("bound stores hf but problem has no form"))?;
        // the radical bounds are stated through the Euclidean form height
        let expected = if rec.name.starts_with("radical") {
            form.height_euclid()
        } else {
            form.height_max()
        };
        if hf.to_height().as_ref() != Some(expected) {
            return Err(mismatch("H(F)"));
        }
    }
    if let Some(hv) = &rec.params.hv {
        if hv.to_height().as_ref() != Some(ctx.view.space.height_euclid()) {
            return Err(mismatch("subspace height"));
        }
    }
    let pipeline = cert.witnesses.pipeline.first();
    let restricted_matrix = || -> Result<Matrix<K::Elem>, Error> {
        let w = pipeline.ok_or_else(|| Error::parse("missing pipeline witness"))?;
        let rows = w
            .f_restricted
            .as_ref()
            .ok_or_else(|| Error::parse("missing restricted form witness"))?;
        crate::certificate::parse_matrix_rows(k, rows)
    };
    if let Some(hfa) = &rec.params.hfa {
        let fa = restricted_matrix()?;
        if hfa.to_height() != Some(k.height_max(&fa.as_vector())) {
            return Err(mismatch("restricted-form height"));
        }
    }
    if let Some(hq) = &rec.params.hq {
        let w = pipeline.ok_or_else(|| Error::parse("missing pipeline witness"))?;
        let fa = restricted_matrix()?;
        let rows = w
            .b_matrix
            .as_ref()
            .ok_or_else(|| Error::parse("missing change-of-basis witness"))?;
        let b = crate::certificate::parse_matrix_rows(k, rows)?;
        let q = gram(k, &fa, &b);
        let q_poly = crate::quadspace::poly_of_sym_matrix(k, &q);
        let (h, _) = crate::polyalg::poly_heights(k, &q_poly)?;
        if hq.to_height() != Some(h) {
            return Err(mismatch("shaped-form height"));
        }
    }
    // chain parameters are tied to the base point named in the subject key
    let chain_index = match &rec.subject {
        Subject::Witness { key } => key
            .rsplit('_')
            .next()
            .and_then(|s| s.parse::<usize>().ok()),
        _ => None,
    };
    if let Some(hx) = &rec.params.hx {
        let n = chain_index.ok_or_else(|| Error::parse("hx without a chain subject"))?;
        let z = ctx
            .points
            .get(n)
            .ok_or_else(|| Error::parse("chain base point out of range"))?;
        if hx.to_height() != Some(heights::height_max(k, z)) {
            return Err(mismatch("base point height"));
        }
    }
    if let Some(hu) = &rec.params.hu {
        let n = chain_index.ok_or_else(|| Error::parse("hu without a chain subject"))?;
        let u = complement_of_point(k, ctx, n)?;
        if hu.to_height().as_ref() != Some(u.height_euclid()) {
            return Err(mismatch("section height"));
        }
    }
    if let Some(hw) = &rec.params.hw {
        let n = chain_index.ok_or_else(|| Error::parse("hw without a chain subject"))?;
        let h = witness_height(k, cert, ctx, &format!("w_prime_{n}"))?;
        if hw.to_height() != Some(h) {
            return Err(mismatch("orthogonal-section height"));
        }
    }
    Ok(())
}

/// Convenience: parse, verify, and return the report for a certificate JSON.
pub fn certify_json(json: &str) -> Result<Report, Error> {
    let cert = Certificate::from_json(json)?;
    Ok(certify(&cert))
}
