//! Integer lattices: primitive vectors, Hermite normal form and saturation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::{Field, Rationals};
use crate::linalg::{self, Matrix};

pub type IVec = Vec<BigInt>;

/// Divides by the gcd of the entries, keeping the direction.
pub fn primitive(v: &[BigInt]) -> IVec {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Clears denominators and divides out the content.
pub fn primitive_rational(v: &[BigRational]) -> IVec {
    let l = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: IVec = v.iter().map(|c| (c * &l).to_integer()).collect();
    primitive(&ints)
}

pub fn to_rational(m: &[IVec], cols: usize) -> Matrix<BigRational> {
    Matrix::from_rows(
        m.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect(),
        cols,
    )
}

pub fn rank(rows: &[IVec], cols: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    linalg::rank(&Rationals, &to_rational(rows, cols))
}

/// Primitive integer basis of the rational kernel `{x : rows · x = 0}`.
pub fn rational_kernel(rows: &[IVec], cols: usize) -> Vec<IVec> {
    if rows.is_empty() {
        return identity(cols);
    }
    linalg::kernel(&Rationals, &to_rational(rows, cols))
        .into_iter()
        .map(|v| primitive_rational(&v))
        .collect()
}

pub fn identity(n: usize) -> Vec<IVec> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn row_axpy(rows: &mut [IVec], target: usize, factor: &BigInt, source: usize) {
    if factor.is_zero() {
        return;
    }
    let src = rows[source].clone();
    for (t, s) in rows[target].iter_mut().zip(src) {
        *t -= factor * s;
    }
}

/// Integer row echelon form by unimodular row operations, mirrored on `track`.
/// Returns the number of nonzero rows, which come first.
fn echelon(rows: &mut [IVec], cols: usize, mut track: Option<&mut [IVec]>) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        loop {
            let pick = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()));
            let Some(p) = pick else { break };
            rows.swap(r, p);
            if let Some(t) = track.as_deref_mut() {
                t.swap(r, p);
            }
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                row_axpy(rows, i, &q, r);
                if let Some(t) = track.as_deref_mut() {
                    row_axpy(t, i, &q, r);
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if (r..rows.len()).any(|i| !rows[i][c].is_zero()) {
            r += 1;
        }
    }
    r
}

/// Row Hermite normal form of the lattice spanned by `rows`, zero rows dropped.
///
/// Pivots are positive and entries above a pivot lie in `[0, pivot)`.
pub fn hnf(rows: &[IVec], cols: usize) -> Vec<IVec> {
    let mut m = rows.to_vec();
    let r = echelon(&mut m, cols, None);
    m.truncate(r);
    let mut pivot_col = 0;
    for i in 0..r {
        while m[i][pivot_col].is_zero() {
            pivot_col += 1;
        }
        if m[i][pivot_col].is_negative() {
            for x in m[i].iter_mut() {
                *x = -&*x;
            }
        }
        for k in 0..i {
            let q = m[k][pivot_col].div_floor(&m[i][pivot_col]);
            row_axpy(&mut m, k, &q, i);
        }
        pivot_col += 1;
    }
    m
}

/// Basis of the integer kernel `{x ∈ ℤ^cols : rows · x = 0}`.
pub fn integer_kernel(rows: &[IVec], cols: usize) -> Vec<IVec> {
    let mut t: Vec<IVec> = (0..cols).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
    let mut u = identity(cols);
    let width = rows.len();
    let r = echelon(&mut t, width, Some(&mut u));
    u.split_off(r)
}

/// `span_ℚ(rows) ∩ ℤ^cols` in Hermite normal form.
pub fn saturate(rows: &[IVec], cols: usize) -> Vec<IVec> {
    let nonzero: Vec<IVec> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    if nonzero.is_empty() {
        return Vec::new();
    }
    let complement = rational_kernel(&nonzero, cols);
    let basis = if complement.is_empty() { identity(cols) } else { integer_kernel(&complement, cols) };
    hnf(&basis, cols)
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthogonal projection of `v` onto the complement of `span(basis)`,
/// scaled to a primitive integer vector.
pub fn project_out(v: &[BigInt], basis: &[IVec]) -> IVec {
    if basis.is_empty() {
        return primitive(v);
    }
    let n = v.len();
    let q = Rationals;
    let b = to_rational(basis, n);
    let gram = linalg::mul(&q, &b, &b.transpose());
    let vb: Vec<BigRational> = basis.iter().map(|r| BigRational::from_integer(dot(r, v))).collect();
    let rhs = Matrix::from_columns(&[vb], basis.len());
    let coeffs = linalg::solve(&q, &gram, &rhs).expect("Gram matrix of a basis is invertible");
    let mut out: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    for (k, row) in basis.iter().enumerate() {
        let c = &coeffs[(k, 0)];
        for (o, x) in out.iter_mut().zip(row) {
            *o = q.sub(o, &(c * BigRational::from_integer(x.clone())));
        }
    }
    primitive_rational(&out)
}

/// Determinant of a square integer matrix (fraction-free elimination).
pub fn det(rows: &[IVec]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<IVec> = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

pub fn ivec(v: &[i64]) -> IVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
