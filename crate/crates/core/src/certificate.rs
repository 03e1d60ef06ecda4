//! Certificate data model and canonical JSON serialization.
//!
//! Certificates are self-contained: they embed the problem (field, form,
//! subspace, avoidance system), the outputs with their exact heights, the
//! intermediate witnesses of the construction, every height bound that was
//! checked (as `[lo, hi]` decimal log intervals), and a typed list of claims.
//! The oracle re-derives each claim from the embedded data alone, so a
//! tampered point, height or bound is always detectable.
//!
//! Exact scalars are serialized as strings ("num/den" over Q, polynomial
//! ratios in t over F_q(t)); log-heights as 12-digit decimal strings
//! (informational; the exact height travels alongside).

use crate::field::{Field, FieldDescriptor, FieldKind, FqT, Rationals};
use crate::height::{Height, HeightRepr};
use crate::heights::Subspace;
use crate::interval::LogVal;
use crate::linalg::Matrix;
use crate::polyalg::MultiPoly;
use crate::quadspace::QuadForm;
use crate::Error;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FieldSpec {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
}

impl FieldSpec {
    pub fn rational() -> FieldSpec {
        FieldSpec {
            kind: "Q".into(),
            q: None,
        }
    }

    pub fn function_field(q: u64) -> FieldSpec {
        FieldSpec {
            kind: "Fq_t".into(),
            q: Some(q),
        }
    }

    pub fn of_descriptor(d: &FieldDescriptor) -> FieldSpec {
        match d.kind {
            FieldKind::Rational => FieldSpec::rational(),
            FieldKind::FunctionField { q } => FieldSpec::function_field(q),
        }
    }

    pub fn validate(&self) -> Result<FieldKind, Error> {
        match self.kind.as_str() {
            "Q" => Ok(FieldKind::Rational),
            "Fq_t" => {
                let q = self
                    .q
                    .ok_or_else(|| Error::parse("field kind Fq_t requires q"))?;
                FqT::new(q)?;
                Ok(FieldKind::FunctionField { q })
            }
            other => Err(Error::parse(format!(
                "unknown field kind {other:?} (expected \"Q\" or \"Fq_t\")"
            ))),
        }
    }
}

/// Sparse polynomial: list of (exponents, coefficient string).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolyRepr {
    pub terms: Vec<MonoRepr>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MonoRepr {
    pub e: Vec<u16>,
    pub c: String,
}

impl PolyRepr {
    pub fn of<K: Field>(k: &K, p: &MultiPoly<K>) -> PolyRepr {
        let canon = p.canonical(k);
        let mut keys: Vec<_> = canon.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
        keys.sort_by(|(a, _), (b, _)| crate::polyalg::cmp_grlex_desc(a, b));
        PolyRepr {
            terms: keys
                .into_iter()
                .map(|(e, c)| MonoRepr {
                    e,
                    c: k.render_elem(&c),
                })
                .collect(),
        }
    }

    pub fn to_poly<K: Field>(&self, k: &K, nvars: usize) -> Result<MultiPoly<K>, Error> {
        let mut terms = vec![];
        for m in &self.terms {
            if m.e.len() != nvars {
                return Err(Error::parse(format!(
                    "exponent vector {:?} does not have {} entries",
                    m.e, nvars
                )));
            }
            terms.push((m.e.clone(), k.parse_elem(&m.c)?));
        }
        Ok(MultiPoly::new(k, nvars, terms))
    }
}

/// The embedded problem: everything needed to re-derive the claims.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProblemEmbed {
    pub field: FieldSpec,
    pub n: usize,
    /// Symmetric coefficient matrix (absent for operations without a form).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form: Option<Vec<Vec<String>>>,
    /// Basis vectors of V (rows); absent means V = K^N.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub space: Option<Vec<Vec<String>>>,
    /// Families of homogeneous polynomials.
    pub avoidance: Vec<Vec<PolyRepr>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, Default)]
pub struct Outputs {
    pub points: Vec<Vec<String>>,
    /// Exact inhomogeneous heights h of the points.
    pub point_h: Vec<HeightRepr>,
    /// Exact max-norm heights H of the points.
    pub point_hmax: Vec<HeightRepr>,
    /// Output subspaces as lists of basis vectors.
    pub subspaces: Vec<Vec<Vec<String>>>,
    /// Exact Euclidean heights of the subspaces.
    pub subspace_hh: Vec<HeightRepr>,
}

/// What a bound record constrains.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind")]
pub enum Subject {
    /// h of one output point.
    PointH { index: usize },
    /// Euclidean height of one output subspace.
    SubspaceHH { index: usize },
    /// Product of h over output points.
    ProductPointH { indices: Vec<usize> },
    /// Product of H over output points.
    ProductPointHMax { indices: Vec<usize> },
    /// Height stored in a named witness slot (re-derived by the verifier
    /// when the witness data allows it).
    Witness { key: String },
}

/// Parameters to rebuild the named bound. Only the fields the bound uses are
/// set; heights are stored exactly.
#[derive(Clone, Debug, Serialize, Deserialize, Default)]
pub struct BoundParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_deg: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deg: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deg_q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deg_p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hf: Option<HeightRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hv: Option<HeightRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hh: Option<HeightRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hq: Option<HeightRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hfa: Option<HeightRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hx: Option<HeightRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hu: Option<HeightRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hw: Option<HeightRepr>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundRecord {
    pub name: String,
    pub subject: Subject,
    pub params: BoundParams,
    /// Decimal strings of the outward interval for the log of the bound.
    pub rhs_lo: String,
    pub rhs_hi: String,
    /// Decimal of the upper log of the exact subject height.
    pub subject_log: String,
    pub pass: bool,
}

/// Pipeline witnesses for one constructed point.
#[derive(Clone, Debug, Serialize, Deserialize, Default)]
pub struct PipelineWitness {
    /// "radical" or "hyperbolic".
    pub branch: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub siegel_basis: Option<Vec<Vec<String>>>,
    /// Restricted form F_A in the Siegel coordinates.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_restricted: Option<Vec<Vec<String>>>,
    /// Nonsingular zero of the restricted form (restricted coordinates).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<String>>,
    /// Index of the standard basis vector pairing with x.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<String>>,
    /// Change of basis (columns x, y, v_1..v_{L-2}).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_matrix: Option<Vec<Vec<String>>>,
    /// Reduced avoidance polynomial after division by the shaped form.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced_poly: Option<PolyRepr>,
    /// Which construction branch solved the shaped equation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quad_branch: Option<String>,
    /// Solution in restricted coordinates.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<String>>,
    /// Chosen polynomial index per avoidance family (for the product).
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub chosen_polys: Vec<usize>,
}

/// Witness layout of one isotropic flag chain.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainWitness {
    /// Index of the base point x_n in outputs.points.
    pub base_point: usize,
    /// Indices into outputs.subspaces: the chain W^1 subset ... subset W^m.
    pub links: Vec<usize>,
    /// Maximal totally isotropic part of the section orthogonal to the base
    /// point, when the base point is nonsingular.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w_prime: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, Default)]
pub struct Witnesses {
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub pipeline: Vec<PipelineWitness>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub separating_forms: Vec<PolyRepr>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub chains: Vec<ChainWitness>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

/// Claims re-derived independently by the verifier.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind")]
pub enum Claim {
    /// F(points[point]) = 0.
    FormZero { point: usize },
    /// points[point] lies in V.
    Membership { point: usize },
    /// points[point] is not the zero vector.
    NonzeroPoint { point: usize },
    /// The named polynomial of the family does not vanish at the point.
    Avoidance {
        point: usize,
        family: usize,
        witness_poly: usize,
    },
    /// The listed points have the given rank.
    LinearIndependence { points: Vec<usize>, rank: usize },
    /// Heights of the listed points are nondecreasing (both H and h).
    MonotoneHeights { points: Vec<usize> },
    /// bounds[bound] passes and its stored data is consistent.
    HeightBound { bound: usize },
    /// The Gram matrix of the subspace vanishes identically.
    GramZero { subspace: usize },
    /// subspaces[chain] are nested by inclusion in the given order.
    Nested { chain: Vec<usize> },
    /// The subspace contains the point.
    SubspaceContainsPoint { subspace: usize, point: usize },
    /// The subspace has the given dimension.
    SubspaceDim { subspace: usize, dim: usize },
    /// The subspace is not inside the zero set of the family: the witness
    /// point lies in the subspace and the witness polynomial does not vanish
    /// on it.
    SubspaceNotInAvoidance {
        subspace: usize,
        family: usize,
        witness_point: usize,
        witness_poly: usize,
    },
    /// All pairwise values F(x_i, x_j), i != j, vanish.
    PairwiseOrthogonal { points: Vec<usize> },
    /// The listed points lie in V and span it.
    SpansSpace { points: Vec<usize> },
    /// Stored exact heights of outputs equal freshly computed ones.
    HeightsMatch,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    /// Operation that produced this certificate.
    pub kind: String,
    pub problem: ProblemEmbed,
    pub outputs: Outputs,
    pub witnesses: Witnesses,
    pub bounds: Vec<BoundRecord>,
    pub claims: Vec<Claim>,
    /// Relative slack applied to bound comparisons.
    pub slack: f64,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Certificate, Error> {
        serde_json::from_str(s).map_err(|e| Error::parse(format!("bad certificate: {e}")))
    }
}

// ---------------------------------------------------------------------------
// Conversion helpers between reprs and exact objects
// ---------------------------------------------------------------------------

pub fn render_vector<K: Field>(k: &K, v: &[K::Elem]) -> Vec<String> {
    v.iter().map(|e| k.render_elem(e)).collect()
}

pub fn parse_vector<K: Field>(k: &K, v: &[String]) -> Result<Vec<K::Elem>, Error> {
    v.iter().map(|s| k.parse_elem(s)).collect()
}

pub fn render_matrix_rows<K: Field>(k: &K, m: &Matrix<K::Elem>) -> Vec<Vec<String>> {
    m.row_vecs().iter().map(|r| render_vector(k, r)).collect()
}

pub fn parse_matrix_rows<K: Field>(
    k: &K,
    rows: &[Vec<String>],
) -> Result<Matrix<K::Elem>, Error> {
    let parsed: Result<Vec<Vec<K::Elem>>, Error> =
        rows.iter().map(|r| parse_vector(k, r)).collect();
    Matrix::from_rows(parsed?)
}

pub fn render_subspace<K: Field>(k: &K, s: &Subspace<K>) -> Vec<Vec<String>> {
    s.basis_vectors()
        .iter()
        .map(|v| render_vector(k, v))
        .collect()
}

pub fn logval_decimal(v: &LogVal) -> (String, String) {
    (format!("{:.12}", v.lo), format!("{:.12}", v.hi))
}

/// Assembles a bound record, evaluating pass with the given slack.
pub fn bound_record(
    name: &str,
    subject: Subject,
    params: BoundParams,
    rhs: &LogVal,
    subject_height: &Height,
    slack: f64,
) -> BoundRecord {
    let (rhs_lo, rhs_hi) = logval_decimal(rhs);
    let pass = subject_height.leq_bound(rhs, slack);
    BoundRecord {
        name: name.into(),
        subject,
        params,
        rhs_lo,
        rhs_hi,
        subject_log: format!("{:.12}", subject_height.to_logval().hi),
        pass,
    }
}

/// Reconstructs the problem's exact objects from the embed, generic over the
/// scalar field.
pub struct ProblemView<K: Field> {
    pub form: Option<QuadForm<K>>,
    pub space: Subspace<K>,
    pub avoidance: Vec<Vec<MultiPoly<K>>>,
}

pub fn problem_view<K: Field>(k: &K, embed: &ProblemEmbed) -> Result<ProblemView<K>, Error> {
    let n = embed.n;
    let form = match &embed.form {
        None => None,
        Some(rows) => {
            let m = parse_matrix_rows(k, rows)?;
            Some(QuadForm::new(k, m)?)
        }
    };
    let space = match &embed.space {
        None => Subspace::full(k, n),
        Some(rows) => {
            let vecs: Result<Vec<Vec<K::Elem>>, Error> =
                rows.iter().map(|r| parse_vector(k, r)).collect();
            Subspace::from_vectors(k, n, &vecs?)?
        }
    };
    let mut avoidance = vec![];
    for fam in &embed.avoidance {
        let polys: Result<Vec<MultiPoly<K>>, Error> =
            fam.iter().map(|p| p.to_poly(k, n)).collect();
        avoidance.push(polys?);
    }
    Ok(ProblemView {
        form,
        space,
        avoidance,
    })
}

/// Rebuilds the bound enum from a record's name and parameters.
pub fn rebuild_bound(name: &str, p: &BoundParams) -> Result<crate::bounds::Bound, Error> {
    use crate::bounds::Bound;
    let h = |o: &Option<HeightRepr>, what: &str| -> Result<Height, Error> {
        o.as_ref()
            .and_then(|r| r.to_height())
            .ok_or_else(|| Error::parse(format!("bound {name} missing height {what}")))
    };
    let u = |o: &Option<u64>, what: &str| -> Result<u64, Error> {
        o.ok_or_else(|| Error::parse(format!("bound {name} missing {what}")))
    };
    Ok(match name {
        "independent_zeros" => Bound::IndependentZeros {
            l: u(&p.l, "l")?,
            m_deg: u(&p.m_deg, "m_deg")?,
            hf: h(&p.hf, "hf")?,
            hv: h(&p.hv, "hv")?,
        },
        "avoiding_zero" => Bound::AvoidingZero {
            l: u(&p.l, "l")?,
            deg: u(&p.deg, "deg")?,
            hf: h(&p.hf, "hf")?,
            hv: h(&p.hv, "hv")?,
        },
        "chain_top" => Bound::ChainTop {
            l: u(&p.l, "l")?,
            m_deg: u(&p.m_deg, "m_deg")?,
            n: u(&p.n, "n")?,
            m: u(&p.m, "m")?,
            hf: h(&p.hf, "hf")?,
            hv: h(&p.hv, "hv")?,
        },
        "chain_link" => Bound::ChainLink {
            l: u(&p.l, "l")?,
            m_deg: u(&p.m_deg, "m_deg")?,
            n: u(&p.n, "n")?,
            m: u(&p.m, "m")?,
            k: u(&p.k, "k")?,
            hf: h(&p.hf, "hf")?,
            hv: h(&p.hv, "hv")?,
        },
        "basis_outside" => Bound::BasisOutside {
            l: u(&p.l, "l")?,
            m_deg: u(&p.m_deg, "m_deg")?,
            hv: h(&p.hv, "hv")?,
        },
        "radical_point" => Bound::RadicalPoint {
            r: u(&p.r, "r")?,
            lambda: u(&p.lambda, "lambda")?,
            deg: u(&p.deg, "deg")?,
            hf: h(&p.hf, "hf")?,
            hv: h(&p.hv, "hv")?,
        },
        "quad_off_hypersurface" => Bound::QuadOffHypersurface {
            deg_q: u(&p.deg_q, "deg_q")?,
            deg_p: u(&p.deg_p, "deg_p")?,
            hq: h(&p.hq, "hq")?,
        },
        "hyperbolic_first" => Bound::HyperbolicFirst {
            hf: h(&p.hf, "hf")?,
            hh: h(&p.hh, "hh")?,
        },
        "hyperbolic_second" => Bound::HyperbolicSecond {
            n: u(&p.n, "n")?,
            hf: h(&p.hf, "hf")?,
            hh: h(&p.hh, "hh")?,
        },
        "hyperbolic_aniso" => Bound::HyperbolicAniso {
            hh: h(&p.hh, "hh")?,
        },
        "radical_height" => Bound::RadicalHeight {
            r: u(&p.r, "r")?,
            hf: h(&p.hf, "hf")?,
            hv: h(&p.hv, "hv")?,
        },
        "nonsingular_zero_restricted" => Bound::NonsingularZeroRestricted {
            l: u(&p.l, "l")?,
            hfa: h(&p.hfa, "hfa")?,
        },
        "isotropic_subspace" => Bound::IsotropicSubspace {
            l: u(&p.l, "l")?,
            ell: u(&p.ell, "ell")?,
            hf: h(&p.hf, "hf")?,
            hv: h(&p.hv, "hv")?,
        },
        "isotropic_basis_product" => Bound::IsotropicBasisProduct {
            l: u(&p.l, "l")?,
            ell: u(&p.ell, "ell")?,
            hf: h(&p.hf, "hf")?,
            hv: h(&p.hv, "hv")?,
        },
        "isotropic_vector" => Bound::IsotropicVector {
            l: u(&p.l, "l")?,
            ell: u(&p.ell, "ell")?,
            hf: h(&p.hf, "hf")?,
            hv: h(&p.hv, "hv")?,
        },
        "nonsingular_zero_ff" => Bound::NonsingularZeroFf {
            l: u(&p.l, "l")?,
            hf: h(&p.hf, "hf")?,
            hv: h(&p.hv, "hv")?,
        },
        "siegel_product" => Bound::SiegelProduct {
            l: u(&p.l, "l")?,
            hv: h(&p.hv, "hv")?,
        },
        "orth_basis_product" => Bound::OrthBasisProduct {
            l: u(&p.l, "l")?,
            hf: h(&p.hf, "hf")?,
            hv: h(&p.hv, "hv")?,
        },
        "nonvanishing" => Bound::Nonvanishing {
            deg: u(&p.deg, "deg")?,
        },
        "point_complement" => Bound::PointComplement {
            n: u(&p.n, "n")?,
            hf: h(&p.hf, "hf")?,
            hx: h(&p.hx, "hx")?,
            hv: h(&p.hv, "hv")?,
        },
        "max_isotropic_sub" => Bound::MaxIsotropicSub {
            l: u(&p.l, "l")?,
            m: u(&p.m, "m")?,
            hf: h(&p.hf, "hf")?,
            hu: h(&p.hu, "hu")?,
        },
        "span_with_point" => Bound::SpanWithPoint {
            n: u(&p.n, "n")?,
            hx: h(&p.hx, "hx")?,
            hw: h(&p.hw, "hw")?,
        },
        other => return Err(Error::parse(format!("unknown bound name {other:?}"))),
    })
}

/// Runs `f` with the concrete field matching the spec.
pub fn with_field<T>(
    spec: &FieldSpec,
    f_q: impl FnOnce(&Rationals) -> Result<T, Error>,
    f_ff: impl FnOnce(&FqT) -> Result<T, Error>,
) -> Result<T, Error> {
    match spec.validate()? {
        FieldKind::Rational => f_q(&Rationals),
        FieldKind::FunctionField { q } => f_ff(&FqT::new(q)?),
    }
}
