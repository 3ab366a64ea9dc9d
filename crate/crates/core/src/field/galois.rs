use std::fmt;
use std::sync::Arc;

use rand::{Rng, RngCore};

use super::{Field, Tower};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Largest ambient field order for which exp/log tables are built.
const MAX_ORDER: u64 = 1 << 22;

/// An element of `F_{p^L}`, encoded as `Σ c_k p^k` where `c_k` is the
/// coefficient of `t^k` in the power basis.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gf(pub u32);

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf({})", self.0)
    }
}

#[derive(Debug)]
struct Inner {
    p: u32,
    degree: usize,
    order: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    /// For each `d | L`: left inverse of the power-basis matrix of `κ(d)`.
    coords: Vec<Option<Matrix<Gf>>>,
}

/// The field `F_{p^L}` with its subfield tower.
///
/// The modulus is the smallest monic irreducible polynomial of degree `L`
/// when polynomials are ordered by their coefficient vectors read from the
/// top degree down.
#[derive(Clone)]
pub struct GaloisField(Arc<Inner>);

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.degree)
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| !p.is_multiple_of(k))
}

/// Polynomial helpers over F_p, coefficients stored low degree first.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let c = r[r.len() - 1];
        if c != 0 {
            let f = (c as u64 * lead_inv as u64 % p as u64) as u32;
            let shift = r.len() - 1 - dm;
            for (k, &mk) in m.iter().enumerate() {
                let sub = (f as u64 * mk as u64 % p as u64) as u32;
                r[shift + k] = (r[shift + k] + p - sub) % p;
            }
        }
        r.pop();
    }
    r
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    out
}

fn mod_inv(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn digits(mut x: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(x % p);
        x /= p;
    }
    out
}

fn encode(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for dd in 1..=deg / 2 {
        let count = (p as u64).pow(dd as u32);
        for code in 0..count {
            let mut f = digits(code as u32, p, dd);
            f.push(1);
            if poly_rem(m, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl GaloisField {
    /// Builds `F_{p^L}`. Fails if `p` is not prime or `p^L` is too large.
    pub fn new(p: u64, degree: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Field(format!("{p} is not prime")));
        }
        if degree == 0 {
            return Err(Error::Field("degree must be positive".into()));
        }
        let order = (p as u128).checked_pow(degree as u32).filter(|&q| q <= MAX_ORDER as u128);
        let Some(order) = order else {
            return Err(Error::Field(format!("field of order {p}^{degree} is too large")));
        };
        let p = p as u32;
        let order = order as u32;

        let modulus = if degree == 1 {
            vec![0, 1]
        } else {
            (0..order)
                .map(|code| {
                    let mut m = digits(code, p, degree);
                    m.push(1);
                    m
                })
                .find(|m| is_irreducible(m, p))
                .expect("an irreducible polynomial of every degree exists")
        };

        let mul_poly = |a: u32, b: u32| -> u32 {
            let prod = poly_mul(&digits(a, p, degree), &digits(b, p, degree), p);
            let mut r = poly_rem(&prod, &modulus, p);
            r.resize(degree, 0);
            encode(&r, p)
        };

        let mut exp = Vec::new();
        for g in 1..order {
            exp.clear();
            let mut acc = 1u32;
            loop {
                exp.push(acc);
                acc = mul_poly(acc, g);
                if acc == 1 {
                    break;
                }
            }
            if exp.len() as u32 == order - 1 {
                break;
            }
        }
        let mut log = vec![0u32; order as usize];
        for (k, &v) in exp.iter().enumerate() {
            log[v as usize] = k as u32;
        }

        let mut field = GaloisField(Arc::new(Inner {
            p,
            degree,
            order,
            modulus,
            exp,
            log,
            coords: Vec::new(),
        }));
        let mut coords = vec![None; degree + 1];
        for (d, slot) in coords.iter_mut().enumerate().skip(1) {
            if !degree.is_multiple_of(d) {
                continue;
            }
            let basis = field.subfield_basis(d)?;
            let mut b = Matrix::zeros(&field, degree, d);
            for (col, x) in basis.iter().enumerate() {
                for (row, c) in field.ambient_coords(x).into_iter().enumerate() {
                    b[(row, col)] = c;
                }
            }
            let left = linalg::left_inverse(&field, &b)
                .ok_or_else(|| Error::Field(format!("power basis of κ({d}) is singular")))?;
            *slot = Some(left);
        }
        Arc::get_mut(&mut field.0).expect("unshared during construction").coords = coords;
        Ok(field)
    }

    pub fn prime(&self) -> u32 {
        self.0.p
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    /// Coefficients of the ambient modulus, low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    fn add_raw(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        if self.0.degree == 1 {
            return (a + b) % p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.0.degree {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    fn neg_raw(&self, a: u32) -> u32 {
        let p = self.0.p;
        let mut a = a;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.0.degree {
            out += ((p - a % p) % p) * place;
            a /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    fn pow_elt(&self, x: Gf, e: u64) -> Gf {
        if x.0 == 0 {
            return if e == 0 { Gf(1) } else { Gf(0) };
        }
        let n = (self.0.order - 1) as u64;
        let l = self.0.log[x.0 as usize] as u64;
        Gf(self.0.exp[((l * (e % n)) % n) as usize])
    }
}

impl Field for GaloisField {
    type Elt = Gf;

    fn zero(&self) -> Gf {
        Gf(0)
    }

    fn one(&self) -> Gf {
        Gf(1)
    }

    fn from_i64(&self, v: i64) -> Gf {
        Gf(v.rem_euclid(self.0.p as i64) as u32)
    }

    fn add(&self, a: &Gf, b: &Gf) -> Gf {
        Gf(self.add_raw(a.0, b.0))
    }

    fn neg(&self, a: &Gf) -> Gf {
        Gf(self.neg_raw(a.0))
    }

    fn mul(&self, a: &Gf, b: &Gf) -> Gf {
        if a.0 == 0 || b.0 == 0 {
            return Gf(0);
        }
        let n = self.0.order - 1;
        let s = (self.0.log[a.0 as usize] as u64 + self.0.log[b.0 as usize] as u64) % n as u64;
        Gf(self.0.exp[s as usize])
    }

    fn inv(&self, a: &Gf) -> Option<Gf> {
        if a.0 == 0 {
            return None;
        }
        let n = self.0.order - 1;
        let l = self.0.log[a.0 as usize];
        Some(Gf(self.0.exp[((n - l) % n) as usize]))
    }

    fn is_zero(&self, a: &Gf) -> bool {
        a.0 == 0
    }
}

impl Tower for GaloisField {
    fn characteristic(&self) -> Option<u64> {
        Some(self.0.p as u64)
    }

    fn degree(&self) -> usize {
        self.0.degree
    }

    fn frobenius(&self, x: &Gf, k: usize) -> Gf {
        let e = (self.0.p as u64).pow((k % self.0.degree) as u32);
        self.pow_elt(*x, e)
    }

    fn generator(&self, d: usize) -> Result<Gf> {
        if d == 0 || !self.0.degree.is_multiple_of(d) {
            return Err(Error::Field(format!("{d} does not divide {}", self.0.degree)));
        }
        let q = self.0.order as u64 - 1;
        let sub = (self.0.p as u64).pow(d as u32) - 1;
        Ok(Gf(self.0.exp[(q / sub) as usize % self.0.exp.len()]))
    }

    fn ambient_coords(&self, x: &Gf) -> Vec<Gf> {
        digits(x.0, self.0.p, self.0.degree).into_iter().map(Gf).collect()
    }

    fn subfield_coords(&self, d: usize, x: &Gf) -> Result<Vec<Gf>> {
        let left = self
            .0
            .coords
            .get(d)
            .and_then(Option::as_ref)
            .ok_or_else(|| Error::Field(format!("κ({d}) is not a subfield")))?;
        if !self.contains(d, x) {
            return Err(Error::Field(format!("{x:?} does not lie in κ({d})")));
        }
        let v = self.ambient_coords(x);
        Ok(linalg::mat_vec(self, left, &v))
    }

    fn subfield_order(&self, d: usize) -> Option<u128> {
        (self.0.p as u128).checked_pow(d as u32)
    }

    fn subfield_elements(&self, d: usize) -> Option<Vec<Gf>> {
        let g = self.generator(d).ok()?;
        let n = (self.0.p as u64).pow(d as u32) - 1;
        let mut out = vec![Gf(0)];
        let mut acc = Gf(1);
        for _ in 0..n {
            out.push(acc);
            acc = self.mul(&acc, &g);
        }
        Some(out)
    }

    fn random_in(&self, d: usize, rng: &mut dyn RngCore) -> Gf {
        let size = (self.0.p as u64).pow(d as u32);
        let k = rng.gen_range(0..size);
        if k == 0 {
            return Gf(0);
        }
        let g = self.generator(d).expect("random_in called with a valid subfield degree");
        self.pow_elt(g, k - 1)
    }

    fn elt_to_json(&self, x: &Gf) -> serde_json::Value {
        serde_json::Value::from(digits(x.0, self.0.p, self.0.degree))
    }

    fn elt_from_json(&self, v: &serde_json::Value) -> Result<Gf> {
        let bad = || Error::InvalidInput(format!("field element {v} is not a list of {} digits mod {}", self.0.degree, self.0.p));
        let arr = v.as_array().ok_or_else(bad)?;
        if arr.len() != self.0.degree {
            return Err(bad());
        }
        let mut ds = Vec::with_capacity(arr.len());
        for c in arr {
            let c = c.as_u64().filter(|&c| c < self.0.p as u64).ok_or_else(bad)?;
            ds.push(c as u32);
        }
        Ok(Gf(encode(&ds, self.0.p)))
    }
}
