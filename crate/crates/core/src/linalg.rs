//! Exact linear algebra over a [`Field`]: fraction-free elimination, kernels,
//! minors, determinants and linear solves.
//!
//! Rows are rescaled to primitive representatives before elimination, which
//! keeps the intermediate entries integral (or polynomial) and bounds the
//! coefficient swell the way Bareiss-style pivoting does, while the results
//! stay exact over the field.

use crate::field::Field;
use crate::Error;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Matrix<E>, Error> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::dim("ragged rows"));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_cols(cols: Vec<Vec<E>>) -> Result<Matrix<E>, Error> {
        Matrix::from_rows(cols).map(|m| m.transpose())
    }

    pub fn filled(rows: usize, cols: usize, e: E) -> Matrix<E> {
        Matrix {
            rows,
            cols,
            data: vec![e; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: E) {
        self.data[i * self.cols + j] = e;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<E>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Matrix<E> {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Flattens row-major into a vector (used for matrix heights).
    pub fn as_vector(&self) -> Vec<E> {
        self.data.clone()
    }

    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Matrix<E> {
        let mut data = Vec::with_capacity(row_idx.len() * col_idx.len());
        for &i in row_idx {
            for &j in col_idx {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: row_idx.len(),
            cols: col_idx.len(),
            data,
        }
    }
}

pub fn identity<K: Field>(k: &K, n: usize) -> Matrix<K::Elem> {
    let mut m = Matrix::filled(n, n, k.zero());
    for i in 0..n {
        m.set(i, i, k.one());
    }
    m
}

pub fn mat_mul<K: Field>(k: &K, a: &Matrix<K::Elem>, b: &Matrix<K::Elem>) -> Matrix<K::Elem> {
    assert_eq!(a.cols, b.rows, "inner dimensions must agree");
    let mut out = Matrix::filled(a.rows, b.cols, k.zero());
    for i in 0..a.rows {
        for j in 0..b.cols {
            let mut acc = k.zero();
            for l in 0..a.cols {
                acc = k.add(&acc, &k.mul(a.get(i, l), b.get(l, j)));
            }
            out.set(i, j, acc);
        }
    }
    out
}

pub fn mat_vec<K: Field>(k: &K, a: &Matrix<K::Elem>, v: &[K::Elem]) -> Vec<K::Elem> {
    assert_eq!(a.cols, v.len(), "dimension mismatch");
    (0..a.rows)
        .map(|i| {
            let mut acc = k.zero();
            for j in 0..a.cols {
                acc = k.add(&acc, &k.mul(a.get(i, j), &v[j]));
            }
            acc
        })
        .collect()
}

pub fn scale_vec<K: Field>(k: &K, c: &K::Elem, v: &[K::Elem]) -> Vec<K::Elem> {
    v.iter().map(|x| k.mul(c, x)).collect()
}

pub fn add_vec<K: Field>(k: &K, a: &[K::Elem], b: &[K::Elem]) -> Vec<K::Elem> {
    a.iter().zip(b).map(|(x, y)| k.add(x, y)).collect()
}

pub fn sub_vec<K: Field>(k: &K, a: &[K::Elem], b: &[K::Elem]) -> Vec<K::Elem> {
    a.iter().zip(b).map(|(x, y)| k.sub(x, y)).collect()
}

pub fn dot<K: Field>(k: &K, a: &[K::Elem], b: &[K::Elem]) -> K::Elem {
    assert_eq!(a.len(), b.len());
    let mut acc = k.zero();
    for (x, y) in a.iter().zip(b) {
        acc = k.add(&acc, &k.mul(x, y));
    }
    acc
}

/// Row echelon form. Returns (echelon rows, pivot column of each used row).
fn echelon<K: Field>(k: &K, m: &Matrix<K::Elem>) -> (Vec<Vec<K::Elem>>, Vec<usize>) {
    let mut rows: Vec<Vec<K::Elem>> = (0..m.rows)
        .map(|i| {
            let r = m.row(i).to_vec();
            k.primitive_vector(&r).unwrap_or(r)
        })
        .collect();
    let mut pivots = vec![];
    let mut next_row = 0usize;
    for col in 0..m.cols {
        let Some(p) = (next_row..rows.len()).find(|&i| !k.is_zero(&rows[i][col])) else {
            continue;
        };
        rows.swap(next_row, p);
        for i in next_row + 1..rows.len() {
            if k.is_zero(&rows[i][col]) {
                continue;
            }
            let factor = k.div(&rows[i][col], &rows[next_row][col]).expect("pivot");
            let scaled = scale_vec(k, &factor, &rows[next_row]);
            let diff = sub_vec(k, &rows[i], &scaled);
            rows[i] = k.primitive_vector(&diff).unwrap_or(diff);
        }
        pivots.push(col);
        next_row += 1;
        if next_row == rows.len() {
            break;
        }
    }
    rows.truncate(pivots.len());
    (rows, pivots)
}

/// Exact rank.
pub fn rank<K: Field>(k: &K, m: &Matrix<K::Elem>) -> usize {
    echelon(k, m).1.len()
}

/// Basis of the right kernel { x : Mx = 0 }, primitive vectors, one per free
/// column in increasing column order. Empty iff M has full column rank.
pub fn kernel_basis<K: Field>(k: &K, m: &Matrix<K::Elem>) -> Vec<Vec<K::Elem>> {
    let (rows, pivots) = echelon(k, m);
    let n = m.cols;
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis = vec![];
    for &f in &free {
        let mut x = vec![k.zero(); n];
        x[f] = k.one();
        // back-substitute pivot variables from the bottom up
        for (ri, &pc) in pivots.iter().enumerate().rev() {
            let mut acc = k.zero();
            for c in pc + 1..n {
                acc = k.add(&acc, &k.mul(&rows[ri][c], &x[c]));
            }
            let val = k.div(&k.neg(&acc), &rows[ri][pc]).expect("pivot");
            x[pc] = val;
        }
        let x = k.primitive_vector(&x).expect("kernel vector is nonzero");
        basis.push(x);
    }
    basis
}

/// Fraction-free determinant (Bareiss).
pub fn det<K: Field>(k: &K, m: &Matrix<K::Elem>) -> K::Elem {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return k.one();
    }
    let mut a: Vec<Vec<K::Elem>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut sign_flip = false;
    let mut prev = k.one();
    for pc in 0..n - 1 {
        if k.is_zero(&a[pc][pc]) {
            let Some(p) = (pc + 1..n).find(|&i| !k.is_zero(&a[i][pc])) else {
                return k.zero();
            };
            a.swap(pc, p);
            sign_flip = !sign_flip;
        }
        for i in pc + 1..n {
            for j in pc + 1..n {
                let t = k.sub(
                    &k.mul(&a[pc][pc], &a[i][j]),
                    &k.mul(&a[i][pc], &a[pc][j]),
                );
                a[i][j] = k.div(&t, &prev).expect("exact division");
            }
            a[i][pc] = k.zero();
        }
        prev = a[pc][pc].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign_flip {
        k.neg(&d)
    } else {
        d
    }
}

/// All k x k minors in lexicographic order of row index sets, then column
/// index sets.
pub fn all_minors<K: Field>(
    k: &K,
    m: &Matrix<K::Elem>,
    size: usize,
) -> Result<Vec<K::Elem>, Error> {
    if size == 0 || size > m.rows.min(m.cols) {
        return Err(Error::dim(format!(
            "minor size {size} out of range for {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let row_sets = combinations(m.rows, size);
    let col_sets = combinations(m.cols, size);
    let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
    for rs in &row_sets {
        for cs in &col_sets {
            out.push(det(k, &m.submatrix(rs, cs)));
        }
    }
    Ok(out)
}

/// All k-subsets of {0..n-1} in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    if k > n {
        return out;
    }
    if k == 0 {
        out.push(vec![]);
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k as isize - 1;
        while i >= 0 && cur[i as usize] == n - k + i as usize {
            i -= 1;
        }
        if i < 0 {
            return out;
        }
        let i = i as usize;
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// One solution of Mx = b, or None when inconsistent.
pub fn solve<K: Field>(
    k: &K,
    m: &Matrix<K::Elem>,
    b: &[K::Elem],
) -> Option<Vec<K::Elem>> {
    assert_eq!(m.rows, b.len());
    let mut aug_rows: Vec<Vec<K::Elem>> = (0..m.rows)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let n = m.cols;
    let mut pivots: Vec<usize> = vec![];
    let mut next_row = 0usize;
    for col in 0..n {
        let Some(p) = (next_row..aug_rows.len()).find(|&i| !k.is_zero(&aug_rows[i][col]))
        else {
            continue;
        };
        aug_rows.swap(next_row, p);
        for i in 0..aug_rows.len() {
            if i == next_row || k.is_zero(&aug_rows[i][col]) {
                continue;
            }
            let factor = k.div(&aug_rows[i][col], &aug_rows[next_row][col]).unwrap();
            let scaled = scale_vec(k, &factor, &aug_rows[next_row]);
            aug_rows[i] = sub_vec(k, &aug_rows[i], &scaled);
        }
        pivots.push(col);
        next_row += 1;
        if next_row == aug_rows.len() {
            break;
        }
    }
    // inconsistent iff a nonzero last entry in an otherwise-zero row
    for row in aug_rows.iter().skip(pivots.len()) {
        if !k.is_zero(&row[n]) && row[..n].iter().all(|e| k.is_zero(e)) {
            return None;
        }
    }
    let mut x = vec![k.zero(); n];
    for (ri, &pc) in pivots.iter().enumerate() {
        if aug_rows[ri][..n].iter().all(|e| k.is_zero(e)) {
            continue;
        }
        x[pc] = k.div(&aug_rows[ri][n], &aug_rows[ri][pc]).unwrap();
    }
    // free variables are zero; verify the candidate
    let check = mat_vec(k, m, &x);
    if check.iter().zip(b).all(|(u, v)| u == v) {
        Some(x)
    } else {
        None
    }
}

/// Inverse of a square matrix, if invertible.
pub fn inverse<K: Field>(k: &K, m: &Matrix<K::Elem>) -> Option<Matrix<K::Elem>> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut aug: Vec<Vec<K::Elem>> = (0..n)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            for j in 0..n {
                r.push(if i == j { k.one() } else { k.zero() });
            }
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !k.is_zero(&aug[i][col]))?;
        aug.swap(col, p);
        let inv_p = k.inv(&aug[col][col]).unwrap();
        aug[col] = scale_vec(k, &inv_p, &aug[col]);
        for i in 0..n {
            if i == col || k.is_zero(&aug[i][col]) {
                continue;
            }
            let factor = aug[i][col].clone();
            let scaled = scale_vec(k, &factor, &aug[col]);
            aug[i] = sub_vec(k, &aug[i], &scaled);
        }
    }
    let rows = aug.into_iter().map(|r| r[n..].to_vec()).collect();
    Some(Matrix::from_rows(rows).unwrap())
}

/// Indices of a maximal set of linearly independent rows, in increasing order.
pub fn independent_rows<K: Field>(k: &K, m: &Matrix<K::Elem>) -> Vec<usize> {
    let mut chosen: Vec<usize> = vec![];
    let mut acc: Vec<Vec<K::Elem>> = vec![];
    let target = rank(k, m);
    for i in 0..m.rows {
        if chosen.len() == target {
            break;
        }
        acc.push(m.row(i).to_vec());
        let cand = Matrix::from_rows(acc.clone()).unwrap();
        if rank(k, &cand) == acc.len() {
            chosen.push(i);
        } else {
            acc.pop();
        }
    }
    chosen
}

/// Is `v` in the column space of `m`?
pub fn in_column_space<K: Field>(k: &K, m: &Matrix<K::Elem>, v: &[K::Elem]) -> bool {
    solve(k, m, v).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FqT, Rationals};
    use num_rational::BigRational;

    fn qm(rows: &[&[i64]]) -> Matrix<BigRational> {
        let k = Rationals;
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| k.from_i64(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn kernel_of_full_rank_is_empty() {
        let k = Rationals;
        assert!(kernel_basis(&k, &qm(&[&[1, 0], &[0, 1]])).is_empty());
    }

    #[test]
    fn kernel_one_dimensional() {
        let k = Rationals;
        let b = kernel_basis(&k, &qm(&[&[1, 1]]));
        assert_eq!(b.len(), 1);
        assert_eq!(b[0], vec![k.from_i64(1), k.from_i64(-1)]);
    }

    #[test]
    fn kernel_of_two_by_three() {
        let k = Rationals;
        let b = kernel_basis(&k, &qm(&[&[1, 1, 0], &[0, 1, 1]]));
        assert_eq!(b.len(), 1);
        assert_eq!(
            b[0],
            vec![k.from_i64(1), k.from_i64(-1), k.from_i64(1)]
        );
    }

    #[test]
    fn minors_order_and_values() {
        let k = Rationals;
        let m = qm(&[&[1, 0], &[0, 1], &[1, 1]]);
        let minors = all_minors(&k, &m, 2).unwrap();
        assert_eq!(
            minors,
            vec![k.from_i64(1), k.from_i64(1), k.from_i64(-1)]
        );
        let m = qm(&[&[2, 4]]);
        assert_eq!(
            all_minors(&k, &m, 1).unwrap(),
            vec![k.from_i64(2), k.from_i64(4)]
        );
        let m = qm(&[&[1, 0], &[0, 1]]);
        assert_eq!(all_minors(&k, &m, 2).unwrap(), vec![k.from_i64(1)]);
        assert!(all_minors(&k, &m, 3).is_err());
    }

    #[test]
    fn rank_examples() {
        let k = Rationals;
        assert_eq!(rank(&k, &qm(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&k, &qm(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(rank(&k, &qm(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn rank_plus_kernel_dims() {
        // deterministic pseudo-random matrices over Q
        let k = Rationals;
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..30 {
            let r = (next() % 4 + 1) as usize;
            let c = (next() % 4 + 1) as usize;
            let rows: Vec<Vec<BigRational>> = (0..r)
                .map(|_| {
                    (0..c)
                        .map(|_| k.from_i64((next() % 7) as i64 - 3))
                        .collect()
                })
                .collect();
            let m = Matrix::from_rows(rows).unwrap();
            assert_eq!(rank(&k, &m) + kernel_basis(&k, &m).len(), c);
        }
    }

    #[test]
    fn determinant_over_function_field() {
        let k = FqT::new(3).unwrap();
        let t = k.from_poly(vec![0, 1]);
        let one = k.one();
        let m = Matrix::from_rows(vec![
            vec![t.clone(), one.clone()],
            vec![one.clone(), t.clone()],
        ])
        .unwrap();
        // t^2 - 1 = t^2 + 2 over F_3
        let d = det(&k, &m);
        assert_eq!(d, k.from_poly(vec![2, 0, 1]));
    }

    #[test]
    fn solve_and_inverse() {
        let k = Rationals;
        let m = qm(&[&[2, 1], &[1, 3]]);
        let b = vec![k.from_i64(3), k.from_i64(4)];
        let x = solve(&k, &m, &b).unwrap();
        assert_eq!(mat_vec(&k, &m, &x), b);
        let mi = inverse(&k, &m).unwrap();
        assert_eq!(mat_mul(&k, &m, &mi), identity(&k, 2));
        // inconsistent system
        let m2 = qm(&[&[1, 1], &[2, 2]]);
        let b2 = vec![k.from_i64(1), k.from_i64(3)];
        assert!(solve(&k, &m2, &b2).is_none());
    }
}
