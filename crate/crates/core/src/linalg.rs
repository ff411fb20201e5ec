//! Dense exact linear algebra over a [`Field`].
//!
//! Pivoting is deterministic: columns are scanned left to right and the first
//! row (from the current one down) with a nonzero entry becomes the pivot row.
//! Nullspace vectors set one free variable to one and the others to zero, and
//! [`solve`] sets all free variables to zero, so every output is reproducible.

use crate::field::Field;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    /// Builds a matrix from row vectors; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<E>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        Matrix {
            rows: n,
            cols,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<E>]) -> Self {
        Matrix::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn map<T: Clone>(&self, f: impl FnMut(&E) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<E: Clone> Matrix<E> {
    pub fn zeros<F: Field<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, f.zero())
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { f.one() } else { f.zero() })
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.data.iter().all(|x| f.is_zero(x))
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        out
    }

    pub fn mul_vec<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| dot(f, self.row(i), v))
            .collect()
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        self.add(f, &other.scale(f, &f.neg(&f.one())))
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        self.map(|x| f.mul(c, x))
    }

    /// Entries flattened row by row; used to treat matrices as vectors.
    pub fn flatten(&self) -> Vec<E> {
        self.data.clone()
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }
}

pub fn dot<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    let mut acc = f.zero();
    for (x, y) in a.iter().zip(b) {
        if !f.is_zero(x) && !f.is_zero(y) {
            acc = f.add(&acc, &f.mul(x, y));
        }
    }
    acc
}

pub fn is_zero_vec<F: Field>(f: &F, v: &[F::Elem]) -> bool {
    v.iter().all(|x| f.is_zero(x))
}

/// `acc += c * v`.
pub fn axpy<F: Field>(f: &F, acc: &mut [F::Elem], c: &F::Elem, v: &[F::Elem]) {
    if f.is_zero(c) {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !f.is_zero(x) {
            *a = f.add(a, &f.mul(c, x));
        }
    }
}

pub fn scale_vec<F: Field>(f: &F, c: &F::Elem, v: &[F::Elem]) -> Vec<F::Elem> {
    v.iter().map(|x| f.mul(c, x)).collect()
}

pub fn add_vec<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

pub fn sub_vec<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
}

/// Result of [`row_echelon`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon<E> {
    pub reduced: Matrix<E>,
    pub pivots: Vec<usize>,
}

impl<E> Echelon<E> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Gauss–Jordan elimination in place; returns the pivot columns.
pub fn rref_in_place<F: Field>(f: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(m.get(i, c))) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
        for j in c..cols {
            let v = f.mul(m.get(r, j), &inv);
            m.set(r, j, v);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = m.get(i, c).clone();
            if f.is_zero(&factor) {
                continue;
            }
            for j in c..cols {
                let pv = m.get(r, j);
                if f.is_zero(pv) {
                    continue;
                }
                let v = f.sub(m.get(i, j), &f.mul(&factor, pv));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn row_echelon<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Echelon<F::Elem> {
    let mut reduced = m.clone();
    let pivots = rref_in_place(f, &mut reduced);
    Echelon { reduced, pivots }
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    row_echelon(f, m).rank()
}

/// A basis of `{v : M v = 0}`, one vector per free column in increasing order.
pub fn nullspace<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let ech = row_echelon(f, m);
    let cols = m.cols;
    let mut is_pivot = vec![false; cols];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![f.zero(); cols];
        v[free] = f.one();
        for (i, &p) in ech.pivots.iter().enumerate() {
            v[p] = f.neg(ech.reduced.get(i, free));
        }
        basis.push(v);
    }
    basis
}

/// One solution of `M x = b` with free variables zero, or `None`.
pub fn solve<F: Field>(f: &F, m: &Matrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    assert_eq!(m.rows, b.len(), "right-hand side has wrong length");
    let aug = Matrix::from_fn(m.rows, m.cols + 1, |i, j| {
        if j < m.cols {
            m.get(i, j).clone()
        } else {
            b[i].clone()
        }
    });
    let ech = row_echelon(f, &aug);
    if ech.pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![f.zero(); m.cols];
    for (i, &p) in ech.pivots.iter().enumerate() {
        x[p] = ech.reduced.get(i, m.cols).clone();
    }
    Some(x)
}

pub fn determinant<F: Field>(f: &F, m: &Matrix<F::Elem>) -> F::Elem {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    let mut a = m.clone();
    let mut det = f.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !f.is_zero(a.get(i, c))) else {
            return f.zero();
        };
        if p != c {
            a.swap_rows(p, c);
            det = f.neg(&det);
        }
        let pivot = a.get(c, c).clone();
        det = f.mul(&det, &pivot);
        let inv = f.inv(&pivot).expect("nonzero pivot");
        for i in c + 1..n {
            let factor = f.mul(a.get(i, c), &inv);
            if f.is_zero(&factor) {
                continue;
            }
            for j in c..n {
                let v = f.sub(a.get(i, j), &f.mul(&factor, a.get(c, j)));
                a.set(i, j, v);
            }
        }
    }
    det
}

pub fn inverse<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    let n = m.rows;
    assert_eq!(n, m.cols);
    let aug = m.hstack(&Matrix::identity(f, n));
    let ech = row_echelon(f, &aug);
    if ech.pivots.len() < n || ech.pivots[n - 1] != n - 1 {
        return None;
    }
    let cols: Vec<usize> = (n..2 * n).collect();
    let rows: Vec<usize> = (0..n).collect();
    Some(ech.reduced.submatrix(&rows, &cols))
}

/// A subspace of `k^n`, stored as the rows of its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace<E> {
    ambient: usize,
    basis: Vec<Vec<E>>,
    pivots: Vec<usize>,
}

impl<E: Clone> Subspace<E> {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full<F: Field<Elem = E>>(f: &F, ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                (0..ambient)
                    .map(|j| if i == j { f.one() } else { f.zero() })
                    .collect()
            })
            .collect();
        Subspace {
            ambient,
            basis,
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span<F, I>(f: &F, ambient: usize, vectors: I) -> Self
    where
        F: Field<Elem = E>,
        I: IntoIterator<Item = Vec<E>>,
    {
        let rows: Vec<Vec<E>> = vectors.into_iter().collect();
        if rows.is_empty() {
            return Subspace::zero(ambient);
        }
        let mut m = Matrix::from_rows(ambient, rows);
        let pivots = rref_in_place(f, &mut m);
        let basis = (0..pivots.len()).map(|i| m.row(i).to_vec()).collect();
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// The reduced echelon basis, ordered by pivot column.
    pub fn basis(&self) -> &[Vec<E>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its projection along the echelon basis; zero iff `v` lies in
    /// the subspace.
    pub fn reduce<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if !f.is_zero(&r[p]) {
                let c = f.neg(&r[p]);
                axpy(f, &mut r, &c, row);
            }
        }
        r
    }

    pub fn contains<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> bool {
        is_zero_vec(f, &self.reduce(f, v))
    }

    /// Coefficients of `v` in the echelon basis, if `v` is in the subspace.
    pub fn coordinates<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Option<Vec<E>> {
        self.contains(f, v)
            .then(|| self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Adds `v` to the spanning set; returns whether the dimension grew.
    pub fn insert<F: Field<Elem = E>>(&mut self, f: &F, v: &[E]) -> bool {
        let mut r = self.reduce(f, v);
        let Some(p) = r.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&r[p]).expect("nonzero");
        r = scale_vec(f, &inv, &r);
        for row in &mut self.basis {
            if !f.is_zero(&row[p]) {
                let c = f.neg(&row[p]);
                axpy(f, row, &c, &r);
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.basis.insert(pos, r);
        true
    }

    pub fn is_subspace_of<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> bool {
        self.dim() <= other.dim() && self.basis.iter().all(|v| other.contains(f, v))
    }

    pub fn same_as<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(f, other)
    }

    pub fn sum<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let mut s = self.clone();
        for v in &other.basis {
            s.insert(f, v);
        }
        s
    }

    pub fn intersection<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.ambient);
        }
        // a . U = b . V  <=>  [U^T | -V^T] (a, b) = 0
        let du = self.dim();
        let m = Matrix::from_fn(self.ambient, du + other.dim(), |i, j| {
            if j < du {
                self.basis[j][i].clone()
            } else {
                f.neg(&other.basis[j - du][i])
            }
        });
        let vectors = nullspace(f, &m).into_iter().map(|coef| {
            let mut v = vec![f.zero(); self.ambient];
            for (c, u) in coef[..du].iter().zip(&self.basis) {
                axpy(f, &mut v, c, u);
            }
            v
        });
        Subspace::span(f, self.ambient, vectors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use num_rational::BigRational;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    fn mat(rows: &[&[u64]]) -> Matrix<u64> {
        Matrix::from_rows(rows[0].len(), rows.iter().map(|r| r.to_vec()).collect())
    }

    #[test]
    fn ranks() {
        let f = f5();
        assert_eq!(rank(&f, &Matrix::identity(&f, 3)), 3);
        assert_eq!(rank(&f, &Matrix::zeros(&f, 2, 4)), 0);
        assert_eq!(rank(&f, &mat(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn nullspace_examples() {
        let f = f5();
        assert!(nullspace(&f, &Matrix::identity(&f, 4)).is_empty());
        assert_eq!(nullspace(&f, &Matrix::zeros(&f, 2, 3)).len(), 3);
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(nullspace(&f2, &mat(&[&[1, 1]])), vec![vec![1, 1]]);
    }

    #[test]
    fn solve_examples() {
        let f = f5();
        assert_eq!(solve(&f, &mat(&[&[2]]), &[3]), Some(vec![4]));
        assert_eq!(solve(&f, &Matrix::zeros(&f, 1, 2), &[1]), None);
        assert_eq!(
            solve(&f, &Matrix::identity(&f, 3), &[1, 2, 3]),
            Some(vec![1, 2, 3])
        );
        // free variables are zero
        assert_eq!(solve(&f, &mat(&[&[1, 1]]), &[3]), Some(vec![3, 0]));
    }

    #[test]
    fn determinant_and_inverse() {
        let f = f5();
        let m = mat(&[&[1, 2], &[3, 4]]);
        assert_eq!(determinant(&f, &m), f.from_i64(-2));
        let inv = inverse(&f, &m).unwrap();
        assert_eq!(m.mul(&f, &inv), Matrix::identity(&f, 2));
        assert!(inverse(&f, &mat(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn rationals_echelon() {
        let q = Rationals;
        let r = |n: i64| BigRational::from_integer(n.into());
        let m = Matrix::from_rows(2, vec![vec![r(2), r(1)], vec![r(4), r(3)]]);
        assert_eq!(rank(&q, &m), 2);
        let x = solve(&q, &m, &[r(1), r(0)]).unwrap();
        assert_eq!(m.mul_vec(&q, &x), vec![r(1), r(0)]);
    }

    #[test]
    fn subspace_operations() {
        let f = f5();
        let u = Subspace::span(&f, 3, vec![vec![1, 0, 0], vec![0, 1, 0]]);
        let v = Subspace::span(&f, 3, vec![vec![0, 1, 0], vec![0, 0, 1]]);
        let i = u.intersection(&f, &v);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&f, &[0, 3, 0]));
        assert_eq!(u.sum(&f, &v).dim(), 3);
        let mut w = Subspace::zero(3);
        assert!(w.insert(&f, &[0, 2, 4]));
        assert!(!w.insert(&f, &[0, 1, 2]));
        assert!(w.insert(&f, &[1, 1, 1]));
        assert!(w.same_as(&f, &Subspace::span(&f, 3, vec![vec![1, 0, 4], vec![0, 1, 2]])));
    }
}
