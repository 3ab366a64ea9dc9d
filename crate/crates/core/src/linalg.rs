//! Dense exact linear algebra over any [`Field`].

use std::ops::{Index, IndexMut};

use crate::field::Field;

/// A dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn zeros<F: Field<Elt = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![f.zero(); rows * cols] }
    }

    pub fn identity<F: Field<Elt = E>>(f: &F, n: usize) -> Self {
        let mut m = Self::zeros(f, n, n);
        for i in 0..n {
            m[(i, i)] = f.one();
        }
        m
    }

    /// Builds a matrix from rows, each of length `cols`.
    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(columns: &[Vec<E>], rows: usize) -> Self {
        let cols = columns.len();
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in columns {
                data.push(c[r].clone());
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &E> {
        self.data.iter()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    /// Copies the block with top-left corner `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in r0..r0 + rows {
            data.extend_from_slice(&self.data[i * self.cols + c0..i * self.cols + c0 + cols]);
        }
        Matrix { rows, cols, data }
    }

    /// Writes `m` into the block with top-left corner `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, m: &Matrix<E>) {
        for i in 0..m.rows {
            for j in 0..m.cols {
                self[(r0 + i, c0 + j)] = m[(i, j)].clone();
            }
        }
    }

    pub fn map<G>(&self, mut g: impl FnMut(&E) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(&mut g).collect() }
    }
}

impl<E> Index<(usize, usize)> for Matrix<E> {
    type Output = E;

    fn index(&self, (i, j): (usize, usize)) -> &E {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<E> IndexMut<(usize, usize)> for Matrix<E> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

pub fn is_zero<F: Field>(f: &F, a: &Matrix<F::Elt>) -> bool {
    a.data.iter().all(|x| f.is_zero(x))
}

pub fn mul<F: Field>(f: &F, a: &Matrix<F::Elt>, b: &Matrix<F::Elt>) -> Matrix<F::Elt> {
    assert_eq!(a.cols, b.rows, "shape mismatch in product");
    let mut out = Matrix::zeros(f, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = &a[(i, k)];
            if f.is_zero(x) {
                continue;
            }
            for j in 0..b.cols {
                let y = &b[(k, j)];
                if !f.is_zero(y) {
                    out[(i, j)] = f.add(&out[(i, j)], &f.mul(x, y));
                }
            }
        }
    }
    out
}

pub fn add<F: Field>(f: &F, a: &Matrix<F::Elt>, b: &Matrix<F::Elt>) -> Matrix<F::Elt> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols), "shape mismatch in sum");
    let data = a.data.iter().zip(&b.data).map(|(x, y)| f.add(x, y)).collect();
    Matrix { rows: a.rows, cols: a.cols, data }
}

pub fn sub<F: Field>(f: &F, a: &Matrix<F::Elt>, b: &Matrix<F::Elt>) -> Matrix<F::Elt> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols), "shape mismatch in difference");
    let data = a.data.iter().zip(&b.data).map(|(x, y)| f.sub(x, y)).collect();
    Matrix { rows: a.rows, cols: a.cols, data }
}

pub fn scale<F: Field>(f: &F, c: &F::Elt, a: &Matrix<F::Elt>) -> Matrix<F::Elt> {
    a.map(|x| f.mul(c, x))
}

pub fn mat_vec<F: Field>(f: &F, a: &Matrix<F::Elt>, v: &[F::Elt]) -> Vec<F::Elt> {
    assert_eq!(a.cols, v.len());
    (0..a.rows)
        .map(|i| {
            a.row(i).iter().zip(v).fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
        })
        .collect()
}

/// Concatenates matrices with `rows` rows side by side.
pub fn hstack<F: Field>(f: &F, rows: usize, parts: &[Matrix<F::Elt>]) -> Matrix<F::Elt> {
    let cols = parts.iter().map(|m| m.cols).sum();
    let mut out = Matrix::zeros(f, rows, cols);
    let mut c0 = 0;
    for m in parts {
        assert_eq!(m.rows, rows);
        out.set_block(0, c0, m);
        c0 += m.cols;
    }
    out
}

/// Stacks matrices with `cols` columns vertically.
pub fn vstack<F: Field>(f: &F, cols: usize, parts: &[Matrix<F::Elt>]) -> Matrix<F::Elt> {
    let rows = parts.iter().map(|m| m.rows).sum();
    let mut out = Matrix::zeros(f, rows, cols);
    let mut r0 = 0;
    for m in parts {
        assert_eq!(m.cols, cols);
        out.set_block(r0, 0, m);
        r0 += m.rows;
    }
    out
}

/// Reduced row echelon form and the pivot columns.
pub fn rref<F: Field>(f: &F, a: &Matrix<F::Elt>) -> (Matrix<F::Elt>, Vec<usize>) {
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !f.is_zero(&m[(i, c)])) else {
            continue;
        };
        if p != r {
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, r * m.cols + j);
            }
        }
        let inv = f.inv(&m[(r, c)]).expect("pivot is nonzero");
        for j in c..m.cols {
            m[(r, j)] = f.mul(&inv, &m[(r, j)]);
        }
        for i in 0..m.rows {
            if i == r || f.is_zero(&m[(i, c)]) {
                continue;
            }
            let factor = m[(i, c)].clone();
            for j in c..m.cols {
                if !f.is_zero(&m[(r, j)]) {
                    let t = f.mul(&factor, &m[(r, j)]);
                    m[(i, j)] = f.sub(&m[(i, j)], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank<F: Field>(f: &F, a: &Matrix<F::Elt>) -> usize {
    rref(f, a).1.len()
}

/// Basis of `{x : a x = 0}`, one vector per free column in increasing order.
pub fn kernel<F: Field>(f: &F, a: &Matrix<F::Elt>) -> Vec<Vec<F::Elt>> {
    let (r, pivots) = rref(f, a);
    let mut is_pivot = vec![false; a.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..a.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![f.zero(); a.cols];
        v[free] = f.one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = f.neg(&r[(row, free)]);
        }
        basis.push(v);
    }
    basis
}

/// Basis of `{y : y a = 0}` as row vectors.
pub fn left_kernel<F: Field>(f: &F, a: &Matrix<F::Elt>) -> Vec<Vec<F::Elt>> {
    kernel(f, &a.transpose())
}

/// Some `x` with `a x = b`, or `None` if the system is inconsistent.
pub fn solve<F: Field>(f: &F, a: &Matrix<F::Elt>, b: &Matrix<F::Elt>) -> Option<Matrix<F::Elt>> {
    assert_eq!(a.rows, b.rows);
    let aug = hstack(f, a.rows, &[a.clone(), b.clone()]);
    let (r, pivots) = rref(f, &aug);
    if pivots.iter().any(|&p| p >= a.cols) {
        return None;
    }
    let mut x = Matrix::zeros(f, a.cols, b.cols);
    for (row, &p) in pivots.iter().enumerate() {
        for j in 0..b.cols {
            x[(p, j)] = r[(row, a.cols + j)].clone();
        }
    }
    Some(x)
}

/// Some `y` with `y a = b`, or `None`.
pub fn solve_left<F: Field>(f: &F, a: &Matrix<F::Elt>, b: &Matrix<F::Elt>) -> Option<Matrix<F::Elt>> {
    solve(f, &a.transpose(), &b.transpose()).map(|y| y.transpose())
}

pub fn inverse<F: Field>(f: &F, a: &Matrix<F::Elt>) -> Option<Matrix<F::Elt>> {
    if a.rows != a.cols || rank(f, a) != a.rows {
        return None;
    }
    solve(f, a, &Matrix::identity(f, a.rows))
}

/// `x` with `x a = 1`, for `a` of full column rank.
pub fn left_inverse<F: Field>(f: &F, a: &Matrix<F::Elt>) -> Option<Matrix<F::Elt>> {
    if rank(f, a) != a.cols {
        return None;
    }
    solve_left(f, a, &Matrix::identity(f, a.cols))
}

pub fn is_invertible<F: Field>(f: &F, a: &Matrix<F::Elt>) -> bool {
    a.rows == a.cols && rank(f, a) == a.rows
}
