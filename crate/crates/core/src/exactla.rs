//! Exact linear algebra over a [`Field`].
//!
//! Matrices are small and numerous, so the workhorse is a dense row-major
//! [`Matrix`]. Row reduction switches to a sparse row elimination once either
//! dimension reaches [`DENSE_LIMIT`]; both paths perform the same sequence of
//! row operations, so they return identical results.

use serde::{Deserialize, Serialize};

use crate::field::Field;

pub const DENSE_LIMIT: usize = 64;

pub type Vector<E> = Vec<E>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn zeros<F: Field<Elem = E>>(rows: usize, cols: usize, f: &F) -> Self {
        Matrix { rows, cols, data: vec![f.zero(); rows * cols] }
    }

    pub fn identity<F: Field<Elem = E>>(n: usize, f: &F) -> Self {
        let mut m = Self::zeros(n, n, f);
        for i in 0..n {
            m.data[i * n + i] = f.one();
        }
        m
    }

    /// Builds from row vectors; `cols` is needed when there are no rows.
    pub fn from_rows(cols: usize, rows: Vec<Vec<E>>) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r);
        }
        Matrix { rows: nrows, cols, data }
    }

    /// Builds from column vectors; `rows` is needed when there are no columns.
    pub fn from_columns(rows: usize, columns: &[Vec<E>]) -> Self {
        let cols = columns.len();
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in columns {
                assert_eq!(c.len(), rows, "ragged column");
                data.push(c[r].clone());
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_i64<F: Field<Elem = E>>(rows: &[&[i64]], f: &F) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            cols,
            rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<E> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<E>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Matrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.rows);
        for r in 0..self.rows {
            for &c in idx {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix { rows: self.rows, cols: idx.len(), data }
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Matrix { rows: self.rows, cols, data }
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.data.iter().all(|x| f.is_zero(x))
    }

    pub fn nonzero_count<F: Field<Elem = E>>(&self, f: &F) -> usize {
        self.data.iter().filter(|x| !f.is_zero(x)).count()
    }

    pub fn mul<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols, f);
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
                    let idx = i * other.cols + j;
                    out.data[idx] = f.mul_add(&out.data[idx], a, b);
                }
            }
        }
        out
    }

    pub fn apply<F: Field<Elem = E>>(&self, v: &[E], f: &F) -> Vec<E> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in apply");
        let mut out = vec![f.zero(); self.rows];
        for (c, x) in v.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let a = self.get(r, c);
                if !f.is_zero(a) {
                    *o = f.mul_add(o, a, x);
                }
            }
        }
        out
    }

    pub fn add<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale<F: Field<Elem = E>>(&self, s: &E, f: &F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| f.mul(a, s)).collect(),
        }
    }

    pub fn map<G, F2: Fn(&E) -> G>(&self, g: F2) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(g).collect() }
    }

    pub fn to_sparse<F: Field<Elem = E>>(&self, f: &F) -> SparseMatrix<E> {
        let mut entries = Vec::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let x = self.get(r, c);
                if !f.is_zero(x) {
                    entries.push((r, c, x.clone()));
                }
            }
        }
        SparseMatrix { rows: self.rows, cols: self.cols, entries }
    }
}

/// Canonical triplet form: row-major sorted, no duplicates, no zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SparseMatrix<E> {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, E)>,
}

impl<E: Clone> SparseMatrix<E> {
    /// Sums duplicates and drops zeros.
    pub fn from_triplets<F: Field<Elem = E>>(
        rows: usize,
        cols: usize,
        mut triplets: Vec<(usize, usize, E)>,
        f: &F,
    ) -> Self {
        triplets.sort_by_key(|t| (t.0, t.1));
        let mut entries: Vec<(usize, usize, E)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r},{c}) outside {rows}x{cols}");
            match entries.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 = f.add(&last.2, &v),
                _ => entries.push((r, c, v)),
            }
        }
        entries.retain(|e| !f.is_zero(&e.2));
        SparseMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[(usize, usize, E)] {
        &self.entries
    }

    pub fn to_dense<F: Field<Elem = E>>(&self, f: &F) -> Matrix<E> {
        let mut m = Matrix::zeros(self.rows, self.cols, f);
        for (r, c, v) in &self.entries {
            m.set(*r, *c, v.clone());
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref<E> {
    pub reduced: Matrix<E>,
    pub pivots: Vec<usize>,
    /// Invertible with `transform * M = reduced`.
    pub transform: Matrix<E>,
}

impl<E> Rref<E> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Reduced row echelon form with transform. Pivot rule: first nonzero column,
/// first nonzero row within it.
pub fn rref<F: Field>(m: &Matrix<F::Elem>, f: &F) -> Rref<F::Elem> {
    let (reduced, pivots, transform) = eliminate(m, f, true);
    Rref { reduced, pivots, transform: transform.expect("transform requested") }
}

/// Sparse-in, sparse-out variant of [`rref`].
pub fn rref_sparse<F: Field>(
    m: &SparseMatrix<F::Elem>,
    f: &F,
) -> (SparseMatrix<F::Elem>, Vec<usize>, SparseMatrix<F::Elem>) {
    let rows = sparse_rows(m);
    let (r, pivots, t) = eliminate_sparse(rows, m.rows, m.cols, f, true);
    let t = t.expect("transform requested");
    (rows_to_sparse(r, m.rows, m.cols), pivots, rows_to_sparse(t, m.rows, m.rows))
}

fn eliminate<F: Field>(
    m: &Matrix<F::Elem>,
    f: &F,
    with_transform: bool,
) -> (Matrix<F::Elem>, Vec<usize>, Option<Matrix<F::Elem>>) {
    if m.rows >= DENSE_LIMIT || m.cols >= DENSE_LIMIT {
        let rows = sparse_rows(&m.to_sparse(f));
        let (r, pivots, t) = eliminate_sparse(rows, m.rows, m.cols, f, with_transform);
        let reduced = rows_to_sparse(r, m.rows, m.cols).to_dense(f);
        let transform = t.map(|t| rows_to_sparse(t, m.rows, m.rows).to_dense(f));
        (reduced, pivots, transform)
    } else {
        eliminate_dense(m, f, with_transform)
    }
}

/// The dense path. Kept public so tests can pin it against the sparse one.
pub fn eliminate_dense<F: Field>(
    m: &Matrix<F::Elem>,
    f: &F,
    with_transform: bool,
) -> (Matrix<F::Elem>, Vec<usize>, Option<Matrix<F::Elem>>) {
    let (rows, cols) = (m.rows, m.cols);
    let mut r = m.clone();
    let mut t = with_transform.then(|| Matrix::identity(rows, f));
    let mut pivots = Vec::new();
    let mut pr = 0;
    for c in 0..cols {
        if pr == rows {
            break;
        }
        let Some(src) = (pr..rows).find(|&i| !f.is_zero(r.get(i, c))) else {
            continue;
        };
        if src != pr {
            swap_rows(&mut r, src, pr);
            if let Some(t) = t.as_mut() {
                swap_rows(t, src, pr);
            }
        }
        let inv = f.inv(r.get(pr, c));
        scale_row(&mut r, pr, &inv, f);
        if let Some(t) = t.as_mut() {
            scale_row(t, pr, &inv, f);
        }
        let prow: Vec<F::Elem> = r.row(pr).to_vec();
        let trow: Option<Vec<F::Elem>> = t.as_ref().map(|t| t.row(pr).to_vec());
        for i in 0..rows {
            if i == pr {
                continue;
            }
            let factor = r.get(i, c).clone();
            if f.is_zero(&factor) {
                continue;
            }
            let neg = f.neg(&factor);
            axpy_row(&mut r, i, &neg, &prow, c, f);
            if let (Some(t), Some(trow)) = (t.as_mut(), trow.as_ref()) {
                axpy_row(t, i, &neg, trow, 0, f);
            }
        }
        pivots.push(c);
        pr += 1;
    }
    (r, pivots, t)
}

fn swap_rows<E>(m: &mut Matrix<E>, a: usize, b: usize) {
    for c in 0..m.cols {
        m.data.swap(a * m.cols + c, b * m.cols + c);
    }
}

fn scale_row<F: Field>(m: &mut Matrix<F::Elem>, r: usize, s: &F::Elem, f: &F) {
    if f.is_one(s) {
        return;
    }
    for c in 0..m.cols {
        let idx = r * m.cols + c;
        m.data[idx] = f.mul(&m.data[idx], s);
    }
}

/// row_r += a * src, touching columns from `start` on.
fn axpy_row<F: Field>(
    m: &mut Matrix<F::Elem>,
    r: usize,
    a: &F::Elem,
    src: &[F::Elem],
    start: usize,
    f: &F,
) {
    for (c, s) in src.iter().enumerate().skip(start) {
        if f.is_zero(s) {
            continue;
        }
        let idx = r * m.cols + c;
        m.data[idx] = f.mul_add(&m.data[idx], a, s);
    }
}

type SparseRow<E> = Vec<(usize, E)>;

fn sparse_rows<E: Clone>(m: &SparseMatrix<E>) -> Vec<SparseRow<E>> {
    let mut rows = vec![Vec::new(); m.rows];
    for (r, c, v) in &m.entries {
        rows[*r].push((*c, v.clone()));
    }
    rows
}

fn rows_to_sparse<E>(rows: Vec<SparseRow<E>>, nrows: usize, ncols: usize) -> SparseMatrix<E> {
    let entries = rows
        .into_iter()
        .enumerate()
        .flat_map(|(r, row)| row.into_iter().map(move |(c, v)| (r, c, v)))
        .collect();
    SparseMatrix { rows: nrows, cols: ncols, entries }
}

fn sparse_get<E>(row: &SparseRow<E>, c: usize) -> Option<&E> {
    row.binary_search_by_key(&c, |e| e.0).ok().map(|i| &row[i].1)
}

/// a + s*b for sorted sparse rows.
fn sparse_axpy<F: Field>(a: &SparseRow<F::Elem>, s: &F::Elem, b: &SparseRow<F::Elem>, f: &F) -> SparseRow<F::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, f.mul(s, &b[j].1)));
            j += 1;
        } else {
            let v = f.mul_add(&a[i].1, s, &b[j].1);
            if !f.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// The sparse path; identical row operations to [`eliminate_dense`].
#[allow(clippy::type_complexity)]
pub fn eliminate_sparse<F: Field>(
    mut r: Vec<SparseRow<F::Elem>>,
    nrows: usize,
    ncols: usize,
    f: &F,
    with_transform: bool,
) -> (Vec<SparseRow<F::Elem>>, Vec<usize>, Option<Vec<SparseRow<F::Elem>>>) {
    let mut t: Option<Vec<SparseRow<F::Elem>>> =
        with_transform.then(|| (0..nrows).map(|i| vec![(i, f.one())]).collect());
    let mut pivots = Vec::new();
    let mut pr = 0;
    for c in 0..ncols {
        if pr == nrows {
            break;
        }
        // rows below pr have no entries left of c
        let Some(src) = (pr..nrows).find(|&i| r[i].first().is_some_and(|e| e.0 == c)) else {
            continue;
        };
        r.swap(src, pr);
        if let Some(t) = t.as_mut() {
            t.swap(src, pr);
        }
        let inv = f.inv(&r[pr][0].1);
        if !f.is_one(&inv) {
            for e in r[pr].iter_mut() {
                e.1 = f.mul(&e.1, &inv);
            }
            if let Some(t) = t.as_mut() {
                for e in t[pr].iter_mut() {
                    e.1 = f.mul(&e.1, &inv);
                }
            }
        }
        let prow = r[pr].clone();
        let trow = t.as_ref().map(|t| t[pr].clone());
        for i in 0..nrows {
            if i == pr {
                continue;
            }
            let Some(factor) = sparse_get(&r[i], c) else { continue };
            let neg = f.neg(factor);
            r[i] = sparse_axpy(&r[i], &neg, &prow, f);
            if let (Some(t), Some(trow)) = (t.as_mut(), trow.as_ref()) {
                t[i] = sparse_axpy(&t[i], &neg, trow, f);
            }
        }
        pivots.push(c);
        pr += 1;
    }
    (r, pivots, t)
}

pub fn rank<F: Field>(m: &Matrix<F::Elem>, f: &F) -> usize {
    eliminate(m, f, false).1.len()
}

/// Pivot columns of the RREF, i.e. the lexicographically first maximal
/// independent set of columns.
pub fn pivot_columns<F: Field>(m: &Matrix<F::Elem>, f: &F) -> Vec<usize> {
    eliminate(m, f, false).1
}

fn kernel_from_rref<F: Field>(r: &Matrix<F::Elem>, pivots: &[usize], f: &F) -> Vec<Vector<F::Elem>> {
    let mut is_pivot = vec![false; r.cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..r.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![f.zero(); r.cols];
            v[free] = f.one();
            for (k, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(r.get(k, free));
            }
            v
        })
        .collect()
}

/// Standard RREF free-variable basis of the null space.
pub fn kernel_basis<F: Field>(m: &Matrix<F::Elem>, f: &F) -> Vec<Vector<F::Elem>> {
    let (r, pivots, _) = eliminate(m, f, false);
    kernel_from_rref(&r, &pivots, f)
}

/// Particular solution of `m x = b` with all free variables zero, or `None`
/// when the system is inconsistent.
pub fn solve<F: Field>(m: &Matrix<F::Elem>, b: &[F::Elem], f: &F) -> Option<Vector<F::Elem>> {
    assert_eq!(m.rows, b.len(), "right-hand side length");
    let aug = m.hstack(&Matrix::from_columns(m.rows, &[b.to_vec()]));
    let (r, pivots, _) = eliminate(&aug, f, false);
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![f.zero(); m.cols];
    for (k, &p) in pivots.iter().enumerate() {
        x[p] = r.get(k, m.cols).clone();
    }
    Some(x)
}

/// Solves `m X = B` column by column with one elimination; `None` if any
/// column is inconsistent.
pub fn solve_columns<F: Field>(
    m: &Matrix<F::Elem>,
    rhs: &Matrix<F::Elem>,
    f: &F,
) -> Option<Matrix<F::Elem>> {
    assert_eq!(m.rows, rhs.rows);
    let aug = m.hstack(rhs);
    let (r, pivots, _) = eliminate(&aug, f, false);
    let rank = pivots.iter().take_while(|&&p| p < m.cols).count();
    if rank < pivots.len() {
        return None;
    }
    let mut x = Matrix::zeros(m.cols, rhs.cols, f);
    for (k, &p) in pivots.iter().enumerate() {
        for j in 0..rhs.cols {
            x.set(p, j, r.get(k, m.cols + j).clone());
        }
    }
    Some(x)
}

pub fn inverse<F: Field>(m: &Matrix<F::Elem>, f: &F) -> Option<Matrix<F::Elem>> {
    if m.rows != m.cols {
        return None;
    }
    let r = rref(m, f);
    (r.rank() == m.rows).then_some(r.transform)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitData<E> {
    pub kernel: Vec<Vector<E>>,
    /// Standard basis vectors at the pivot columns.
    pub complement: Vec<Vector<E>>,
    pub pivots: Vec<usize>,
    /// `d` applied to each complement vector.
    pub image: Vec<Vector<E>>,
    /// `coordinates[k]` expresses `d(complement[k])` in the `image` basis.
    pub coordinates: Matrix<E>,
}

pub fn split<F: Field>(m: &Matrix<F::Elem>, f: &F) -> SplitData<F::Elem> {
    let (r, pivots, _) = eliminate(m, f, false);
    let kernel = kernel_from_rref(&r, &pivots, f);
    let complement = pivots
        .iter()
        .map(|&p| {
            let mut v = vec![f.zero(); m.cols];
            v[p] = f.one();
            v
        })
        .collect();
    let image = pivots.iter().map(|&p| m.column(p)).collect();
    let coordinates = Matrix::identity(pivots.len(), f);
    SplitData { kernel, complement, pivots, image, coordinates }
}

pub fn vec_is_zero<F: Field>(v: &[F::Elem], f: &F) -> bool {
    v.iter().all(|x| f.is_zero(x))
}

pub fn vec_add<F: Field>(a: &[F::Elem], b: &[F::Elem], f: &F) -> Vector<F::Elem> {
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

pub fn vec_scale<F: Field>(a: &[F::Elem], s: &F::Elem, f: &F) -> Vector<F::Elem> {
    a.iter().map(|x| f.mul(x, s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn rref_examples() {
        let q = Rationals;
        let m = Matrix::from_i64(&[&[1, 2], &[2, 4]], &q);
        let r = rref(&m, &q);
        assert_eq!(r.reduced, Matrix::from_i64(&[&[1, 2], &[0, 0]], &q));
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.transform.mul(&m, &q), r.reduced);

        let f2 = PrimeField::new(2).unwrap();
        let id = Matrix::<u64>::identity(3, &f2);
        let r = rref(&id, &f2);
        assert_eq!(r.reduced, id);
        assert_eq!(r.pivots, vec![0, 1, 2]);

        let two = Matrix::from_i64(&[&[2]], &f2);
        let r = rref(&two, &f2);
        assert_eq!(r.reduced, Matrix::from_i64(&[&[0]], &f2));
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn empty_shapes() {
        let q = Rationals;
        for (r, c) in [(0, 3), (3, 0), (0, 0)] {
            let m = Matrix::zeros(r, c, &q);
            let out = rref(&m, &q);
            assert!(out.pivots.is_empty());
            assert_eq!(kernel_basis(&m, &q).len(), c);
        }
    }

    #[test]
    fn kernel_and_solve_examples() {
        let q = Rationals;
        let m = Matrix::from_i64(&[&[1, 1]], &q);
        assert_eq!(kernel_basis(&m, &q), vec![vec![q.from_i64(-1), q.from_i64(1)]]);
        let m = Matrix::from_i64(&[&[1, 0], &[0, 0]], &q);
        assert_eq!(solve(&m, &[q.from_i64(3), q.from_i64(1)], &q), None);
        let m = Matrix::from_i64(&[&[1, 1]], &q);
        assert_eq!(solve(&m, &[q.from_i64(5)], &q), Some(vec![q.from_i64(5), q.from_i64(0)]));
    }

    #[test]
    fn split_examples() {
        let q = Rationals;
        let z = Matrix::zeros(2, 3, &q);
        let s = split(&z, &q);
        assert!(s.complement.is_empty());
        assert_eq!(s.kernel.len(), 3);

        let id = Matrix::identity(3, &q);
        let s = split(&id, &q);
        assert!(s.kernel.is_empty());
        assert_eq!(s.complement.len(), 3);

        let m = Matrix::from_i64(&[&[1, 1], &[0, 0]], &q);
        let s = split(&m, &q);
        assert_eq!(s.kernel, vec![vec![q.from_i64(-1), q.from_i64(1)]]);
        assert_eq!(s.complement, vec![vec![q.from_i64(1), q.from_i64(0)]]);
        assert_eq!(s.image, vec![vec![q.from_i64(1), q.from_i64(0)]]);
    }

    #[test]
    fn sparse_triplets_canonical() {
        let q = Rationals;
        let m = SparseMatrix::from_triplets(
            2,
            2,
            vec![(1, 0, q.from_i64(2)), (0, 1, q.from_i64(1)), (1, 0, q.from_i64(-2))],
            &q,
        );
        assert_eq!(m.entries(), &[(0, 1, q.from_i64(1))]);
    }

    #[test]
    fn inverse_roundtrip() {
        let q = Rationals;
        let m = Matrix::from_i64(&[&[2, 1], &[1, 1]], &q);
        let inv = inverse(&m, &q).unwrap();
        assert_eq!(inv.mul(&m, &q), Matrix::identity(2, &q));
        assert!(inverse(&Matrix::from_i64(&[&[1, 1], &[1, 1]], &q), &q).is_none());
    }
}
