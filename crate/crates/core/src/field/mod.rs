//! Scalars: the finite-field tower `κ = F_p ⊂ κ(d) ⊂ κ(L)` and the rationals.
//!
//! Every element of the tower lives in one ambient field `F_{p^L}`; the
//! subfield `κ(d)` is the fixed field of the `d`-th power of Frobenius.
//! The rationals play the role of a tower of height one and are only used
//! for symmetric Cartan data.

mod galois;
mod rational;

use std::fmt::Debug;
use std::hash::Hash;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

pub use galois::{Gf, GaloisField};
pub use rational::Rationals;

/// A commutative field with explicit context.
pub trait Field: Clone + Debug + Send + Sync {
    type Elt: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elt;
    fn one(&self) -> Self::Elt;
    fn from_i64(&self, v: i64) -> Self::Elt;
    fn add(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn neg(&self, a: &Self::Elt) -> Self::Elt;
    fn mul(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn inv(&self, a: &Self::Elt) -> Option<Self::Elt>;
    fn is_zero(&self, a: &Self::Elt) -> bool;

    fn sub(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elt) -> bool {
        *a == self.one()
    }
}

/// A tower of subfields `κ(d)`, `d | L`, inside one ambient field.
///
/// "Coordinates" always mean coordinates over the prime field `κ`; they are
/// returned as elements of `Self::Elt` lying in `κ`.
pub trait Tower: Field {
    /// `Some(p)` for a finite tower, `None` for the rationals.
    fn characteristic(&self) -> Option<u64>;
    /// The degree `L` of the ambient field over `κ`.
    fn degree(&self) -> usize;
    /// `x ↦ x^{p^k}`; the identity in characteristic zero.
    fn frobenius(&self, x: &Self::Elt, k: usize) -> Self::Elt;
    /// A fixed element generating `κ(d)` over every smaller subfield.
    fn generator(&self, d: usize) -> Result<Self::Elt>;
    /// Coordinates in the ambient power basis (length `L`).
    fn ambient_coords(&self, x: &Self::Elt) -> Vec<Self::Elt>;
    /// Coordinates of `x ∈ κ(d)` in [`Tower::subfield_basis`]`(d)`.
    fn subfield_coords(&self, d: usize, x: &Self::Elt) -> Result<Vec<Self::Elt>>;
    /// Number of elements of `κ(d)`, if finite and representable.
    fn subfield_order(&self, d: usize) -> Option<u128>;
    /// All elements of `κ(d)`, when finite.
    fn subfield_elements(&self, d: usize) -> Option<Vec<Self::Elt>>;
    /// A random element of `κ(d)`.
    fn random_in(&self, d: usize, rng: &mut dyn RngCore) -> Self::Elt;
    fn elt_to_json(&self, x: &Self::Elt) -> serde_json::Value;
    fn elt_from_json(&self, v: &serde_json::Value) -> Result<Self::Elt>;

    /// The power basis `1, u, …, u^{d−1}` of `κ(d)` over `κ`.
    fn subfield_basis(&self, d: usize) -> Result<Vec<Self::Elt>> {
        let u = self.generator(d)?;
        let mut out = Vec::with_capacity(d);
        let mut acc = self.one();
        for _ in 0..d {
            out.push(acc.clone());
            acc = self.mul(&acc, &u);
        }
        Ok(out)
    }

    fn contains(&self, d: usize, x: &Self::Elt) -> bool {
        self.frobenius(x, d) == *x
    }
}

fn check_divides(t: &impl Tower, d: usize, e: usize) -> Result<()> {
    let l = t.degree();
    if d == 0 || e == 0 || !e.is_multiple_of(d) || !l.is_multiple_of(e) {
        return Err(Error::Field(format!("degrees must satisfy {d} | {e} | {l}")));
    }
    Ok(())
}

/// `tr_{κ(e)/κ(d)}(x) = Σ_{m < e/d} x^{p^{dm}}`.
pub fn trace<T: Tower>(t: &T, d: usize, e: usize, x: &T::Elt) -> Result<T::Elt> {
    check_divides(t, d, e)?;
    if !t.contains(e, x) {
        return Err(Error::Field(format!("{x:?} does not lie in κ({e})")));
    }
    let mut acc = t.zero();
    for m in 0..e / d {
        acc = t.add(&acc, &t.frobenius(x, d * m));
    }
    Ok(acc)
}

/// `tr_{κ(e)/κ(d)}` without the membership and divisibility checks.
pub(crate) fn trace_unchecked<T: Tower>(t: &T, d: usize, e: usize, x: &T::Elt) -> T::Elt {
    let mut acc = t.zero();
    for m in 0..e / d {
        acc = t.add(&acc, &t.frobenius(x, d * m));
    }
    acc
}

/// Gram matrix `G[a][b] = tr_{κ(d)}(b_a b_b)` of the trace form.
fn trace_gram<T: Tower>(t: &T, d: usize, e: usize, basis: &[T::Elt]) -> Result<Matrix<T::Elt>> {
    let n = basis.len();
    let mut g = Matrix::zeros(t, n, n);
    for a in 0..n {
        for b in 0..n {
            g[(a, b)] = trace(t, d, e, &t.mul(&basis[a], &basis[b]))?;
        }
    }
    Ok(g)
}

/// The basis dual to `basis` (a `κ(d)`-basis of `κ(e)`) under the trace pairing.
pub fn dual_basis<T: Tower>(t: &T, d: usize, e: usize, basis: &[T::Elt]) -> Result<Vec<T::Elt>> {
    check_divides(t, d, e)?;
    if basis.len() != e / d {
        return Err(Error::Field(format!(
            "a κ({d})-basis of κ({e}) has {} elements, got {}",
            e / d,
            basis.len()
        )));
    }
    let g = trace_gram(t, d, e, basis)?;
    let ginv = linalg::inverse(t, &g).ok_or_else(|| Error::Field("not a basis".into()))?;
    let n = basis.len();
    let dual: Vec<T::Elt> = (0..n)
        .map(|a| {
            (0..n).fold(t.zero(), |acc, c| {
                t.add(&acc, &t.mul(&ginv[(a, c)], &basis[c]))
            })
        })
        .collect();
    for a in 0..n {
        for b in 0..n {
            let v = trace(t, d, e, &t.mul(&dual[a], &basis[b]))?;
            let want = if a == b { t.one() } else { t.zero() };
            if v != want {
                return Err(Error::Field("trace-dual check failed".into()));
            }
        }
    }
    Ok(dual)
}

/// Power basis `1, u, …, u^{d_ij/d_j − 1}` of `κ(d_ij)` over `κ(d_j)`, where
/// `u` generates `κ(d_i)`; every element lies in `κ(d_i)`.
pub fn species_basis<T: Tower>(t: &T, d_i: usize, d_j: usize) -> Result<Vec<T::Elt>> {
    let d_ij = num_integer::lcm(d_i, d_j);
    check_divides(t, d_j, d_ij)?;
    let u = t.generator(d_i)?;
    let mut out = Vec::new();
    let mut acc = t.one();
    for _ in 0..d_ij / d_j {
        out.push(acc.clone());
        acc = t.mul(&acc, &u);
    }
    // Independence over κ(d_j) is equivalent to a nonsingular trace form.
    let g = trace_gram(t, d_j, d_ij, &out)?;
    if linalg::rank(t, &g) != out.len() {
        return Err(Error::Field(format!(
            "powers of the κ({d_i}) generator are dependent over κ({d_j})"
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_of_one_in_f9() {
        let f = GaloisField::new(3, 2).unwrap();
        let one = f.one();
        assert_eq!(trace(&f, 1, 2, &one).unwrap(), f.from_i64(2));
        assert_eq!(trace(&f, 1, 2, &f.zero()).unwrap(), f.zero());
        let u = f.generator(2).unwrap();
        assert_eq!(trace(&f, 2, 2, &u).unwrap(), u);
    }

    #[test]
    fn trace_rejects_bad_degrees() {
        let f = GaloisField::new(3, 2).unwrap();
        assert!(trace(&f, 2, 1, &f.one()).is_err());
        assert!(trace(&f, 1, 3, &f.one()).is_err());
    }

    #[test]
    fn trace_is_linear_and_surjective() {
        let f = GaloisField::new(2, 4).unwrap();
        for d in [1usize, 2, 4] {
            let all = f.subfield_elements(4).unwrap();
            let image: std::collections::HashSet<_> =
                all.iter().map(|x| trace(&f, d, 4, x).unwrap()).collect();
            assert_eq!(image.len() as u128, f.subfield_order(d).unwrap());
            for x in all.iter().take(7) {
                for y in all.iter().skip(3).take(5) {
                    let lhs = trace(&f, d, 4, &f.add(x, y)).unwrap();
                    let rhs = f.add(&trace(&f, d, 4, x).unwrap(), &trace(&f, d, 4, y).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
            let c = f.generator(d).unwrap();
            let x = f.generator(4).unwrap();
            assert_eq!(
                trace(&f, d, 4, &f.mul(&c, &x)).unwrap(),
                f.mul(&c, &trace(&f, d, 4, &x).unwrap())
            );
        }
    }

    #[test]
    fn dual_basis_of_power_basis() {
        let f = GaloisField::new(3, 2).unwrap();
        let b = f.subfield_basis(2).unwrap();
        let dual = dual_basis(&f, 1, 2, &b).unwrap();
        let sum = (0..2).fold(f.zero(), |acc, k| f.add(&acc, &f.mul(&dual[k], &b[k])));
        assert!(f.is_one(&sum));
        let back = dual_basis(&f, 1, 2, &dual).unwrap();
        assert_eq!(back, b);
        assert_eq!(dual_basis(&f, 2, 2, &[f.one()]).unwrap(), vec![f.one()]);
    }

    #[test]
    fn dual_basis_rejects_dependent_sets() {
        let f = GaloisField::new(3, 2).unwrap();
        let two = f.from_i64(2);
        assert!(dual_basis(&f, 1, 2, &[f.one(), two]).is_err());
    }

    #[test]
    fn species_bases_for_b2() {
        let f = GaloisField::new(3, 2).unwrap();
        assert_eq!(species_basis(&f, 1, 2).unwrap(), vec![f.one()]);
        let b = species_basis(&f, 2, 1).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[1], f.generator(2).unwrap());
        assert_eq!(species_basis(&Rationals, 1, 1).unwrap().len(), 1);
    }

    #[test]
    fn dual_bases_sum_to_one_for_mixed_degrees() {
        let f = GaloisField::new(2, 6).unwrap();
        for (di, dj) in [(2usize, 3usize), (3, 2), (6, 2), (1, 6), (2, 6)] {
            let d_ij = num_integer::lcm(di, dj);
            let b = species_basis(&f, di, dj).unwrap();
            let dual = dual_basis(&f, dj, d_ij, &b).unwrap();
            let sum = b.iter().zip(&dual).fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)));
            assert!(f.is_one(&sum), "pair ({di},{dj})");
            assert!(b.iter().all(|x| f.contains(di, x)));
        }
    }
}
