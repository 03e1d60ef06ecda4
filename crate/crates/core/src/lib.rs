//! Exact construction and certification of small-height zeros of quadratic
//! forms over the global fields `Q` and `F_q(t)`.
//!
//! The library builds, in exact arithmetic, nontrivial zeros of a quadratic
//! form inside a subspace `V` of `K^N` that avoid a finite union of varieties,
//! together with linearly independent collections of such zeros and nested
//! flags of totally isotropic subspaces. Every output is wrapped in a
//! certificate carrying the explicit height bound it was checked against and
//! all intermediate witnesses, and an independent brute-force oracle re-checks
//! every claim.
//!
//! All algebra is generic over the scalar field through the [`field::Field`]
//! trait; the two backends are arbitrary-precision rationals
//! ([`field::Rationals`]) and rational functions over a prime field
//! ([`field::FqT`]). Heights are kept exact (squares of rationals, or integer
//! exponents of `e` in the function-field case) and bound comparisons go
//! through outward-rounded interval arithmetic, so a certified "pass" can
//! never be an artifact of floating-point rounding.

pub mod bounds;
pub mod certificate;
pub mod constants;
pub mod corpus;
pub mod enumerate;
pub mod field;
pub mod height;
pub mod heights;
pub mod interval;
pub mod linalg;
pub mod oracle;
pub mod polyalg;
pub mod quadspace;
pub mod smallzeros;

mod error;

pub use error::Error;

/// Scalar of the rational field `Q`.
pub type QScalar = num_rational::BigRational;
/// Scalar of a rational function field `F_q(t)`.
pub type FfScalar = field::FfElem;
/// Matrix over `Q`.
pub type QMatrix = linalg::Matrix<QScalar>;
/// Matrix over `F_q(t)`.
pub type FfMatrix = linalg::Matrix<FfScalar>;
/// Subspace of `Q^N`.
pub type QSubspace = heights::Subspace<field::Rationals>;
/// Subspace of `F_q(t)^N`.
pub type FfSubspace = heights::Subspace<field::FqT>;
/// Sparse multivariate polynomial over `Q`.
pub type QPoly = polyalg::MultiPoly<field::Rationals>;
/// Sparse multivariate polynomial over `F_q(t)`.
pub type FfPoly = polyalg::MultiPoly<field::FqT>;

pub type Result<T> = std::result::Result<T, Error>;
