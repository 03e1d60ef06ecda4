//! Command-line front end: parse a problem file, run one of the pipelines,
//! emit a certificate (JSON) and verify it, or re-verify an existing
//! certificate.
//!
//! Exit codes: 0 all certified, 1 schema or usage error, 2 precondition
//! violated, 3 resource budget exhausted, 4 bound-certificate failure (a
//! library defect).

use anyhow::Context;
use clap::{Parser, Subcommand};
use qzeros_core::bounds::{self, Bound};
use qzeros_core::certificate::{Certificate, FieldSpec, PolyRepr};
use qzeros_core::constants::Constants;
use qzeros_core::field::{Field, FqT, Rationals};
use qzeros_core::height::Height;
use qzeros_core::heights::Subspace;
use qzeros_core::linalg::Matrix;
use qzeros_core::oracle;
use qzeros_core::polyalg::MultiPoly;
use qzeros_core::quadspace::{QuadForm, QuadSpace, SearchParams};
use qzeros_core::smallzeros::{self, AvoidanceSystem};
use qzeros_core::Error;
use serde::Deserialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qzeros",
    about = "Construct and certify small-height zeros of quadratic forms over Q and F_q(t)",
    version
)]
struct Cli {
    /// Height cap override for the isotropic searches (natural log).
    #[arg(long, global = true)]
    cap: Option<f64>,
    /// Maximum number of points per enumeration.
    #[arg(long, global = true, default_value_t = 2_000_000)]
    budget: u64,
    /// Relative slack for bound comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    slack: f64,
    /// Seed recorded for corpus tooling; the pipelines themselves are
    /// deterministic and ignore it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the main artifact here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format (only canonical JSON is supported).
    #[arg(long, global = true, default_value = "json")]
    format: String,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Zero of F in V avoiding the union of varieties (single certificate).
    Solve { problem: PathBuf },
    /// Maximal family of linearly independent avoiding zeros.
    Zeros { problem: PathBuf },
    /// Nested totally isotropic chains through each zero.
    Flags { problem: PathBuf },
    /// Basis of V outside the union of varieties.
    BasisOutside { problem: PathBuf },
    /// Reduced basis with the explicit product bound.
    Siegel { problem: PathBuf },
    /// Witt decomposition summary.
    Witt { problem: PathBuf },
    /// Table of the field constants for the given shape parameters.
    Constants {
        problem: PathBuf,
        #[arg(long, default_value_t = 3)]
        l: u64,
        #[arg(long, default_value_t = 4)]
        j: u64,
        #[arg(long, default_value_t = 1)]
        m: u64,
    },
    /// Re-verify an existing certificate file.
    OracleVerify { certificate: PathBuf },
    /// Pairwise orthogonal basis over a function field.
    FfOrth { problem: PathBuf },
}

/// On-disk problem schema.
#[derive(Deserialize)]
struct ProblemFile {
    field: FieldSpec,
    n: usize,
    /// Symmetric coefficient matrix, row-major scalar strings.
    #[serde(default)]
    f: Option<Vec<Vec<String>>>,
    /// Basis vectors of V (defaults to the full space).
    #[serde(default)]
    v: Option<Vec<Vec<String>>>,
    /// Families of homogeneous polynomials; each polynomial is either a
    /// string ("X1*X2 - X3^2") or a sparse list of monomials.
    #[serde(default)]
    s: Vec<Vec<PolyInput>>,
    #[serde(default)]
    options: Options,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PolyInput {
    Text(String),
    Sparse(PolyRepr),
}

#[derive(Deserialize, Default)]
struct Options {
    cap: Option<f64>,
    budget: Option<u64>,
    slack: Option<f64>,
}

struct Problem<K: Field> {
    form: Option<QuadForm<K>>,
    space: Subspace<K>,
    avoidance: AvoidanceSystem<K>,
}

fn parse_problem<K: Field>(k: &K, pf: &ProblemFile) -> Result<Problem<K>, Error> {
    if pf.n < 1 {
        return Err(Error::parse("ambient dimension must be positive"));
    }
    let form = match &pf.f {
        None => None,
        Some(rows) => {
            if rows.len() != pf.n || rows.iter().any(|r| r.len() != pf.n) {
                return Err(Error::parse(format!(
                    "coefficient matrix must be {0} x {0}",
                    pf.n
                )));
            }
            let parsed: Result<Vec<Vec<K::Elem>>, Error> = rows
                .iter()
                .map(|r| r.iter().map(|s| k.parse_elem(s)).collect())
                .collect();
            Some(QuadForm::new(k, Matrix::from_rows(parsed?)?)?)
        }
    };
    let space = match &pf.v {
        None => Subspace::full(k, pf.n),
        Some(rows) => {
            let parsed: Result<Vec<Vec<K::Elem>>, Error> = rows
                .iter()
                .map(|r| {
                    if r.len() != pf.n {
                        return Err(Error::parse(format!(
                            "basis vector has {} entries, expected {}",
                            r.len(),
                            pf.n
                        )));
                    }
                    r.iter().map(|s| k.parse_elem(s)).collect()
                })
                .collect();
            Subspace::from_vectors(k, pf.n, &parsed?)?
        }
    };
    let mut families = vec![];
    for fam in &pf.s {
        let mut polys: Vec<MultiPoly<K>> = vec![];
        for p in fam {
            let poly = match p {
                PolyInput::Text(t) => qzeros_core::polyalg::parse_poly(k, pf.n, t)?,
                PolyInput::Sparse(repr) => repr.to_poly(k, pf.n)?,
            };
            polys.push(poly);
        }
        families.push(polys);
    }
    Ok(Problem {
        form,
        space,
        avoidance: AvoidanceSystem::new(families)?,
    })
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Dimension(_) => 1,
        Error::Precondition(_) => 2,
        Error::Resource(_) => 3,
        Error::Defect(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            if let Some(core) = err.downcast_ref::<Error>() {
                eprintln!("error: {core}");
                ExitCode::from(exit_code_for(core))
            } else {
                eprintln!("error: {err:#}");
                ExitCode::from(1)
            }
        }
    }
}

fn emit(cli: &Cli, content: &str) -> anyhow::Result<()> {
    match &cli.out {
        Some(path) => {
            std::fs::write(path, content).with_context(|| format!("writing {path:?}"))?
        }
        None => println!("{content}"),
    }
    Ok(())
}

fn load_problem(path: &PathBuf) -> anyhow::Result<ProblemFile> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {path:?}"))?;
    let pf: ProblemFile = serde_json::from_str(&text)
        .map_err(|e| Error::parse(format!("problem schema: {e}")))?;
    if cfg!(debug_assertions) {
        // schema sanity only; parsing proper happens per field
    }
    Ok(pf)
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    if cli.format != "json" {
        return Err(Error::parse("only --format json is supported").into());
    }
    match &cli.command {
        Cmd::OracleVerify { certificate } => {
            let text = std::fs::read_to_string(certificate)
                .with_context(|| format!("reading {certificate:?}"))?;
            let cert = Certificate::from_json(&text)?;
            let report = oracle::certify(&cert);
            emit(cli, &report.to_json())?;
            if report.all_pass {
                Ok(())
            } else {
                Err(Error::precondition("verification failed; see report").into())
            }
        }
        Cmd::Solve { problem }
        | Cmd::Zeros { problem }
        | Cmd::Flags { problem }
        | Cmd::BasisOutside { problem }
        | Cmd::Siegel { problem }
        | Cmd::Witt { problem }
        | Cmd::FfOrth { problem }
        | Cmd::Constants { problem, .. } => {
            let pf = load_problem(problem)?;
            let params = SearchParams {
                cap_log: cli.cap.or(pf.options.cap),
                budget: pf.options.budget.unwrap_or(cli.budget),
            };
            let slack = pf.options.slack.unwrap_or(cli.slack);
            match pf.field.validate()? {
                qzeros_core::field::FieldKind::Rational => {
                    run_in_field(cli, &Rationals, &pf, params, slack)
                }
                qzeros_core::field::FieldKind::FunctionField { q } => {
                    run_in_field(cli, &FqT::new(q)?, &pf, params, slack)
                }
            }
        }
    }
}

fn require_form<K: Field>(p: &Problem<K>) -> Result<&QuadForm<K>, Error> {
    p.form
        .as_ref()
        .ok_or_else(|| Error::parse("this command requires the coefficient matrix \"f\""))
}

fn run_in_field<K: qzeros_core::enumerate::Enumerable + 'static>(
    cli: &Cli,
    k: &K,
    pf: &ProblemFile,
    params: SearchParams,
    slack: f64,
) -> anyhow::Result<()> {
    let problem = parse_problem(k, pf)?;
    let certify_and_emit = |cert: Certificate| -> anyhow::Result<()> {
        let report = oracle::certify(&cert);
        emit(cli, &cert.to_json())?;
        if report.all_pass {
            Ok(())
        } else {
            eprintln!("{}", report.to_json());
            Err(Error::defect("freshly produced certificate failed verification").into())
        }
    };
    match &cli.command {
        Cmd::Solve { .. } => {
            let form = require_form(&problem)?;
            let qs = QuadSpace::new(k, problem.space.clone(), form.clone(), &params)?;
            let (p, _, _) =
                smallzeros::avoidance_polynomial(k, &problem.avoidance, &qs, &params)?;
            let cert = smallzeros::small_zero_avoiding(k, &qs, &p, &params, slack)?;
            certify_and_emit(cert)
        }
        Cmd::Zeros { .. } => {
            let form = require_form(&problem)?;
            let qs = QuadSpace::new(k, problem.space.clone(), form.clone(), &params)?;
            let cert =
                smallzeros::independent_zeros(k, &qs, &problem.avoidance, &params, slack)?;
            certify_and_emit(cert)
        }
        Cmd::Flags { .. } => {
            let form = require_form(&problem)?;
            let qs = QuadSpace::new(k, problem.space.clone(), form.clone(), &params)?;
            let cert =
                smallzeros::isotropic_flags(k, &qs, &problem.avoidance, &params, slack)?;
            certify_and_emit(cert)
        }
        Cmd::BasisOutside { .. } => {
            let cert = smallzeros::basis_outside(
                k,
                &problem.space,
                &problem.avoidance,
                &params,
                slack,
            )?;
            certify_and_emit(cert)
        }
        Cmd::Siegel { .. } => {
            let cert = smallzeros::siegel_basis(k, &problem.space, &params, slack)?;
            certify_and_emit(cert)
        }
        Cmd::FfOrth { .. } => {
            let form = require_form(&problem)?;
            let cert =
                smallzeros::orth_basis_ff(k, &problem.space, form, &params, slack)?;
            certify_and_emit(cert)
        }
        Cmd::Witt { .. } => {
            let form = require_form(&problem)?;
            let qs = QuadSpace::new(k, problem.space.clone(), form.clone(), &params)?;
            let summary = witt_summary(k, &qs);
            emit(cli, &serde_json::to_string_pretty(&summary)?)?;
            Ok(())
        }
        Cmd::Constants { l, j, m, .. } => {
            let table = constants_table(k, *l, *j, *m, pf.n as u64);
            emit(cli, &serde_json::to_string_pretty(&table)?)?;
            Ok(())
        }
        Cmd::OracleVerify { .. } => unreachable!("handled by the caller"),
    }
}

fn witt_summary<K: qzeros_core::enumerate::Enumerable + 'static>(
    k: &K,
    qs: &QuadSpace<K>,
) -> serde_json::Value {
    let render_vecs = |vs: &[Vec<K::Elem>]| -> Vec<Vec<String>> {
        vs.iter()
            .map(|v| v.iter().map(|e| k.render_elem(e)).collect())
            .collect()
    };
    let w = qs.witt();
    serde_json::json!({
        "dim": qs.space().dim(),
        "lambda": qs.lambda(),
        "rank": qs.rank(),
        "witt_index": qs.witt_index(),
        "max_isotropic_dim": qs.max_isotropic_dim(),
        "radical_basis": render_vecs(&w.radical_basis),
        "hyperbolic_pairs": w.hyperbolic_pairs.iter().map(|(x, y)| {
            serde_json::json!({
                "x": x.iter().map(|e| k.render_elem(e)).collect::<Vec<_>>(),
                "y": y.iter().map(|e| k.render_elem(e)).collect::<Vec<_>>(),
            })
        }).collect::<Vec<_>>(),
        "anisotropic_basis": render_vecs(&w.anisotropic_basis),
        "anisotropy_certified_up_to_log_height": w.anisotropy_cap_log,
    })
}

fn constants_table<K: Field>(k: &K, l: u64, j: u64, m: u64, n: u64) -> serde_json::Value {
    let c = Constants::new(k.descriptor());
    let pair = |v: qzeros_core::interval::LogVal| {
        serde_json::json!({
            "log_lo": format!("{:.12}", v.lo),
            "log_hi": format!("{:.12}", v.hi),
            "value_approx": format!("{:.6e}", ((v.lo + v.hi) / 2.0).exp()),
        })
    };
    let mut ball = serde_json::Map::new();
    if k.descriptor().is_rational() {
        for jj in 1..=l.max(2) {
            ball.insert(format!("{jj}"), pair(c.ball_b(jj)));
        }
    }
    let mut nonvanish = serde_json::Map::new();
    for jj in 1..=j.max(1) {
        nonvanish.insert(format!("{jj}"), pair(c.nonvanish_a(jj)));
    }
    let example_bound = bounds::evaluate(
        &c,
        &Bound::IndependentZeros {
            l,
            m_deg: j,
            hf: Height::one_of(k),
            hv: Height::one_of(k),
        },
    );
    serde_json::json!({
        "field": FieldSpec::of_descriptor(&k.descriptor()),
        "params": { "l": l, "j": j, "m": m, "n": n },
        "siegel_c": pair(c.siegel_c(l)),
        "genus_e": pair(c.genus_e(l)),
        "ball_b": ball,
        "nonvanish_a": nonvanish,
        "t_main": pair(c.t_main(l, j)),
        "chain_t1": pair(c.chain_t1(l, j, n.max(2), m)),
        "unit_height_zero_bound": pair(example_bound),
    })
}
