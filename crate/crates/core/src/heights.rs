//! Height functions on vectors, matrices, subspaces and polynomials.
//!
//! `H` is the projective max-norm height; the calligraphic variant uses the
//! Euclidean norm at the archimedean place of `Q` and coincides with `H` over
//! `F_q(t)`; the inhomogeneous height is `h(x) = H(1, x)`. Subspace heights
//! are heights of the primitive Grassmann (Pluecker) coordinate vector of a
//! basis matrix, which the product formula makes independent of the basis;
//! computing them from a matrix of defining equations instead gives the same
//! value (Brill-Gordan duality), which the test suite checks exactly.

use crate::field::Field;
use crate::height::Height;
use crate::linalg::{self, Matrix};
use crate::Error;

/// Max-norm height H of a vector. H(0) = 1 by convention.
pub fn height_max<K: Field>(k: &K, v: &[K::Elem]) -> Height {
    k.height_max(v)
}

/// Euclidean-at-infinity height of a vector.
pub fn height_euclid<K: Field>(k: &K, v: &[K::Elem]) -> Height {
    k.height_euclid(v)
}

/// Inhomogeneous height h(x) = H(1, x).
pub fn height_inhom<K: Field>(k: &K, v: &[K::Elem]) -> Height {
    let mut ext = Vec::with_capacity(v.len() + 1);
    ext.push(k.one());
    ext.extend_from_slice(v);
    k.height_max(&ext)
}

/// Heights (H, Euclidean) of the Grassmann coordinate vector of the column
/// space of a full-column-rank matrix.
pub fn grassmann_heights<K: Field>(
    k: &K,
    m: &Matrix<K::Elem>,
) -> Result<(Height, Height), Error> {
    let l = m.cols();
    if l == 0 {
        return Ok((Height::one_of(k), Height::one_of(k)));
    }
    if linalg::rank(k, m) != l {
        return Err(Error::precondition("rank-deficient basis matrix"));
    }
    let minors = linalg::all_minors(k, m, l)?;
    Ok((k.height_max(&minors), k.height_euclid(&minors)))
}

impl Height {
    /// The multiplicative unit height in the flavor matching the field.
    pub fn one_of<K: Field>(k: &K) -> Height {
        if k.descriptor().is_rational() {
            Height::one()
        } else {
            Height::one_ff()
        }
    }
}

/// An L-dimensional subspace of K^N with its cached primitive Grassmann
/// coordinates and heights. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Subspace<K: Field> {
    ambient: usize,
    basis: Matrix<K::Elem>,
    plucker: Vec<K::Elem>,
    h_max: Height,
    h_euclid: Height,
}

impl<K: Field> Subspace<K> {
    /// Builds a subspace from a basis matrix (columns are basis vectors).
    pub fn from_basis(k: &K, basis: Matrix<K::Elem>) -> Result<Self, Error> {
        let n = basis.rows();
        let l = basis.cols();
        if l > n {
            return Err(Error::dim("more basis vectors than ambient dimension"));
        }
        if l == 0 {
            return Ok(Subspace {
                ambient: n,
                basis,
                plucker: vec![k.one()],
                h_max: Height::one_of(k),
                h_euclid: Height::one_of(k),
            });
        }
        if linalg::rank(k, &basis) != l {
            return Err(Error::precondition("rank-deficient basis matrix"));
        }
        let minors = linalg::all_minors(k, &basis, l)?;
        let plucker = k
            .primitive_vector(&minors)
            .expect("full-rank matrix has a nonzero minor");
        let h_max = k.height_max(&plucker);
        let h_euclid = k.height_euclid(&plucker);
        Ok(Subspace {
            ambient: n,
            basis,
            plucker,
            h_max,
            h_euclid,
        })
    }

    /// Builds a subspace from column vectors.
    pub fn from_vectors(k: &K, ambient: usize, vecs: &[Vec<K::Elem>]) -> Result<Self, Error> {
        if vecs.iter().any(|v| v.len() != ambient) {
            return Err(Error::dim("vector length differs from ambient dimension"));
        }
        if vecs.is_empty() {
            return Subspace::from_basis(k, Matrix::filled(ambient, 0, k.zero()));
        }
        Subspace::from_basis(k, Matrix::from_cols(vecs.to_vec())?)
    }

    /// The full space K^N.
    pub fn full(k: &K, n: usize) -> Self {
        Subspace::from_basis(k, linalg::identity(k, n)).expect("identity basis")
    }

    /// Builds the solution space of A x = 0 from the equation matrix A.
    pub fn from_equations(k: &K, a: &Matrix<K::Elem>) -> Result<Self, Error> {
        let kernel = linalg::kernel_basis(k, a);
        Subspace::from_vectors(k, a.cols(), &kernel)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<K::Elem> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<K::Elem>> {
        self.basis.col_vecs()
    }

    pub fn plucker(&self) -> &[K::Elem] {
        &self.plucker
    }

    pub fn height_max(&self) -> &Height {
        &self.h_max
    }

    pub fn height_euclid(&self) -> &Height {
        &self.h_euclid
    }

    /// Coordinates of v in this basis, if v lies in the subspace.
    pub fn coords_of(&self, k: &K, v: &[K::Elem]) -> Option<Vec<K::Elem>> {
        linalg::solve(k, &self.basis, v)
    }

    pub fn contains(&self, k: &K, v: &[K::Elem]) -> bool {
        self.coords_of(k, v).is_some()
    }

    pub fn contains_subspace(&self, k: &K, other: &Subspace<K>) -> bool {
        (0..other.dim()).all(|j| self.contains(k, &other.basis.col(j)))
    }

    /// Equality as subspaces. The sign-normalized primitive Grassmann vector
    /// is a complete invariant.
    pub fn same_space(&self, other: &Subspace<K>) -> bool {
        self.ambient == other.ambient
            && self.dim() == other.dim()
            && self.plucker == other.plucker
    }

    /// Matrix of defining equations: rows span the annihilator, so the
    /// subspace is exactly the solution set of (rows) x = 0.
    pub fn equations(&self, k: &K) -> Matrix<K::Elem> {
        let rows = linalg::kernel_basis(k, &self.basis.transpose());
        if rows.is_empty() {
            return Matrix::filled(0, self.ambient, k.zero());
        }
        Matrix::from_rows(rows).expect("kernel vectors have equal length")
    }

    pub fn intersection(&self, k: &K, other: &Subspace<K>) -> Result<Subspace<K>, Error> {
        if self.ambient != other.ambient {
            return Err(Error::dim("ambient dimensions differ"));
        }
        // kernel of [A | -B] gives pairs (s, t) with A s = B t
        let la = self.dim();
        let lb = other.dim();
        let mut rows = vec![];
        for i in 0..self.ambient {
            let mut row = Vec::with_capacity(la + lb);
            for j in 0..la {
                row.push(self.basis.get(i, j).clone());
            }
            for j in 0..lb {
                row.push(k.neg(other.basis.get(i, j)));
            }
            rows.push(row);
        }
        let m = Matrix::from_rows(rows)?;
        let kernel = linalg::kernel_basis(k, &m);
        let vecs: Vec<Vec<K::Elem>> = kernel
            .iter()
            .map(|st| linalg::mat_vec(k, &self.basis, &st[..la]))
            .collect();
        let im = independent_subset(k, self.ambient, &vecs);
        Subspace::from_vectors(k, self.ambient, &im)
    }

    pub fn sum(&self, k: &K, other: &Subspace<K>) -> Result<Subspace<K>, Error> {
        if self.ambient != other.ambient {
            return Err(Error::dim("ambient dimensions differ"));
        }
        let mut vecs = self.basis.col_vecs();
        vecs.extend(other.basis.col_vecs());
        let im = independent_subset(k, self.ambient, &vecs);
        Subspace::from_vectors(k, self.ambient, &im)
    }
}

/// Greedy maximal linearly independent subset, preserving input order.
pub fn independent_subset<K: Field>(
    k: &K,
    ambient: usize,
    vecs: &[Vec<K::Elem>],
) -> Vec<Vec<K::Elem>> {
    let mut acc: Vec<Vec<K::Elem>> = vec![];
    for v in vecs {
        if v.iter().all(|e| k.is_zero(e)) {
            continue;
        }
        if acc.len() == ambient {
            break;
        }
        acc.push(v.clone());
        let m = Matrix::from_cols(acc.clone()).expect("rectangular");
        if linalg::rank(k, &m) != acc.len() {
            acc.pop();
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FqT, Rationals};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn k() -> Rationals {
        Rationals
    }

    fn qv(xs: &[&str]) -> Vec<BigRational> {
        xs.iter().map(|s| k().parse_elem(s).unwrap()).collect()
    }

    #[test]
    fn vector_height_examples() {
        let f = k();
        assert_eq!(height_max(&f, &qv(&["0", "1", "0"])), Height::one());
        assert_eq!(
            height_max(&f, &qv(&["1/2", "3"])),
            Height::from_int(&BigInt::from(6))
        );
        assert_eq!(height_inhom(&f, &qv(&["0", "0"])), Height::one());
        assert_eq!(
            height_inhom(&f, &qv(&["1/2", "3"])),
            Height::from_int(&BigInt::from(6))
        );
        assert_eq!(
            height_inhom(&f, &qv(&["2", "3"])),
            Height::from_int(&BigInt::from(3))
        );
        // Euclidean variant: (1,1,1) has squared height 3
        assert_eq!(
            height_euclid(&f, &qv(&["1", "1", "1"])),
            Height::Sq(BigRational::from_integer(BigInt::from(3)))
        );
        assert_eq!(height_euclid(&f, &qv(&["0", "1", "0"])), Height::one());
    }

    #[test]
    fn ff_vector_heights() {
        let f = FqT::new(3).unwrap();
        let one = f.one();
        let t = f.from_poly(vec![0, 1]);
        let inv_t = f.elem(vec![1], vec![0, 1]);
        assert_eq!(height_max(&f, &[inv_t, one.clone()]), Height::Log(1));
        assert_eq!(height_max(&f, &[t.clone(), one.clone()]), Height::Log(1));
        assert_eq!(height_euclid(&f, &[t, one]), Height::Log(1));
    }

    #[test]
    fn coordinate_subspace_has_height_one() {
        let f = k();
        let s = Subspace::from_vectors(&f, 3, &[qv(&["1", "0", "0"]), qv(&["0", "1", "0"])])
            .unwrap();
        assert_eq!(*s.height_max(), Height::one());
        assert_eq!(*s.height_euclid(), Height::one());
    }

    #[test]
    fn plucker_and_duality() {
        let f = k();
        let s = Subspace::from_vectors(&f, 3, &[qv(&["1", "0", "1"]), qv(&["0", "1", "1"])])
            .unwrap();
        // minors in row-set order {1,2},{1,3},{2,3}
        assert_eq!(s.plucker(), &qv(&["1", "1", "-1"])[..]);
        assert_eq!(*s.height_max(), Height::one());
        assert_eq!(
            *s.height_euclid(),
            Height::Sq(BigRational::from_integer(BigInt::from(3)))
        );
        // same subspace from its defining equation x1 + x2 - x3 = 0
        let eqs = Matrix::from_rows(vec![qv(&["1", "1", "-1"])]).unwrap();
        let s2 = Subspace::from_equations(&f, &eqs).unwrap();
        assert!(s.same_space(&s2));
        assert_eq!(s.height_max(), s2.height_max());
        assert_eq!(s.height_euclid(), s2.height_euclid());
        // duality: heights computed from the equation matrix transpose match
        let a = s.equations(&f);
        let (h, he) = grassmann_heights(&f, &a.transpose()).unwrap();
        assert_eq!(&h, s.height_max());
        assert_eq!(&he, s.height_euclid());
    }

    #[test]
    fn rank_deficient_basis_is_rejected() {
        let f = k();
        assert!(
            Subspace::from_vectors(&f, 2, &[qv(&["1", "2"]), qv(&["2", "4"])]).is_err()
        );
    }

    #[test]
    fn intersection_and_sum() {
        let f = k();
        let a = Subspace::from_vectors(&f, 3, &[qv(&["1", "0", "0"]), qv(&["0", "1", "0"])])
            .unwrap();
        let b = Subspace::from_vectors(&f, 3, &[qv(&["0", "1", "0"]), qv(&["0", "0", "1"])])
            .unwrap();
        let i = a.intersection(&f, &b).unwrap();
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&f, &qv(&["0", "1", "0"])));
        let s = a.sum(&f, &b).unwrap();
        assert_eq!(s.dim(), 3);
    }
}
