//! Symmetrizable Cartan data, roots, weights and simple reflections.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integer vector in the simple-root basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root(Vec<i64>);

impl Root {
    pub fn new(coords: Vec<i64>) -> Self {
        Root(coords)
    }

    /// The simple root `α_i` (0-based `i`) in rank `n`.
    pub fn simple(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Root(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// All coordinates nonnegative and at least one positive.
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && !self.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.neg().is_positive()
    }

    /// The index `i` if this is the simple root `α_i`.
    pub fn simple_index(&self) -> Option<usize> {
        let mut found = None;
        for (i, &c) in self.0.iter().enumerate() {
            match c {
                0 => {}
                1 if found.is_none() => found = Some(i),
                _ => return None,
            }
        }
        found
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn gcd(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &c| g.gcd(&c))
    }

    pub fn to_bigint(&self) -> Vec<BigInt> {
        self.0.iter().map(|&c| BigInt::from(c)).collect()
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Root({self})")
    }
}

impl FromStr for Root {
    type Err = Error;

    /// Parses comma-separated coordinates such as `"2,1"`.
    fn from_str(s: &str) -> Result<Self> {
        let coords: std::result::Result<Vec<i64>, _> =
            s.split(',').map(|t| t.trim().parse::<i64>()).collect();
        match coords {
            Ok(c) if !c.is_empty() => Ok(Root(c)),
            _ => Err(Error::InvalidInput(format!("cannot parse root {s:?}"))),
        }
    }
}

impl Serialize for Root {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Root {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A rational vector in the fundamental-weight basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Weight(Vec<BigRational>);

impl Weight {
    pub fn new(coords: Vec<BigRational>) -> Self {
        Weight(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Weight(coords.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    /// `⟨θ, x⟩`, the dot product of coordinate vectors.
    pub fn pair(&self, x: &Root) -> BigRational {
        self.0
            .iter()
            .zip(x.coords())
            .fold(BigRational::zero(), |acc, (a, &b)| acc + a * BigRational::from_integer(b.into()))
    }

    /// The primitive integer vector on the same ray (zero stays zero).
    pub fn primitive(&self) -> Vec<BigInt> {
        let lcm = self.0.iter().fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * &lcm).to_integer()).collect();
        crate::lattice::primitive(&ints)
    }
}

/// The raw JSON layout of a Cartan datum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CartanFile {
    #[serde(default)]
    pub name: String,
    #[serde(rename = "A")]
    pub a: Vec<Vec<i64>>,
    #[serde(default)]
    pub d: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
}

/// A validated symmetrizable crystallographic Cartan matrix.
///
/// Vertices are 0-based in the API and 1-based in every text format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    name: String,
    a: Vec<Vec<i64>>,
    d: Vec<u64>,
    l: u64,
    prime: Option<u64>,
}

impl CartanData {
    /// Validates `a` and the symmetrizer `d`.
    pub fn new(a: Vec<Vec<i64>>, d: Vec<u64>, prime: Option<u64>) -> Result<Self> {
        let n = a.len();
        let bad = |msg: String| Err(Error::InvalidCartan(msg));
        if n == 0 {
            return bad("empty matrix".into());
        }
        if let Some(i) = a.iter().position(|r| r.len() != n) {
            return bad(format!("row {} has length {}, expected {n}", i + 1, a[i].len()));
        }
        if d.len() != n {
            return bad(format!("symmetrizer has {} entries, expected {n}", d.len()));
        }
        if let Some(i) = d.iter().position(|&x| x == 0) {
            return bad(format!("d_{} must be positive", i + 1));
        }
        for i in 0..n {
            if a[i][i] != 2 {
                return bad(format!("diagonal: A[{0}][{0}] = {1}, expected 2", i + 1, a[i][i]));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if a[i][j] > 0 {
                    return bad(format!("sign: A[{}][{}] = {} is positive", i + 1, j + 1, a[i][j]));
                }
                if d[i] as i64 * a[i][j] != d[j] as i64 * a[j][i] {
                    return bad(format!(
                        "symmetrizability: d_{i1}·A[{i1}][{j1}] = {} but d_{j1}·A[{j1}][{i1}] = {}",
                        d[i] as i64 * a[i][j],
                        d[j] as i64 * a[j][i],
                        i1 = i + 1,
                        j1 = j + 1
                    ));
                }
                let dij = d[i].lcm(&d[j]) as i64;
                if (d[i] as i64 * a[i][j]) % dij != 0 {
                    return bad(format!(
                        "integrality: d_{i1}·A[{i1}][{j1}] = {} is not divisible by lcm(d_{i1}, d_{j1}) = {dij}",
                        d[i] as i64 * a[i][j],
                        i1 = i + 1,
                        j1 = j + 1
                    ));
                }
            }
        }
        if prime.is_none() && d.iter().any(|&x| x != 1) {
            return bad("rational backend requires every d_i = 1; supply a prime".into());
        }
        let l = d.iter().fold(1u64, |acc, x| acc.lcm(x));
        Ok(CartanData { name: String::new(), a, d, l, prime })
    }

    /// A symmetric datum (`d = 1`) with no prime.
    pub fn symmetric(a: Vec<Vec<i64>>) -> Result<Self> {
        let n = a.len();
        Self::new(a, vec![1; n], None)
    }

    pub fn from_file(file: CartanFile) -> Result<Self> {
        let n = file.a.len();
        let d = if file.d.is_empty() { vec![1; n] } else { file.d };
        Ok(Self::new(file.a, d, file.prime)?.with_name(file.name))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CartanFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("Cartan JSON: {e}")))?;
        Self::from_file(file)
    }

    pub fn to_file(&self) -> CartanFile {
        CartanFile { name: self.name.clone(), a: self.a.clone(), d: self.d.clone(), prime: self.prime }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_prime(mut self, prime: Option<u64>) -> Result<Self> {
        if prime.is_none() && self.d.iter().any(|&x| x != 1) {
            return Err(Error::InvalidCartan("rational backend requires every d_i = 1".into()));
        }
        self.prime = prime;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn symmetrizer(&self) -> &[u64] {
        &self.d
    }

    pub fn d(&self, i: usize) -> usize {
        self.d[i] as usize
    }

    /// `L = lcm(d_1, …, d_n)`.
    pub fn field_degree(&self) -> usize {
        self.l as usize
    }

    pub fn prime(&self) -> Option<u64> {
        self.prime
    }

    /// `d_ij = lcm(d_i, d_j)`.
    pub fn d_pair(&self, i: usize, j: usize) -> usize {
        self.d(i).lcm(&self.d(j))
    }

    /// Number of arrows `q = −d_i A_ij / d_ij` between `i` and `j`.
    pub fn arrow_count(&self, i: usize, j: usize) -> usize {
        if i == j {
            return 0;
        }
        (-(self.d[i] as i64) * self.a[i][j]) as usize / self.d_pair(i, j)
    }

    /// Vertices joined to `i`, in increasing order.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.rank()).filter(|&j| j != i && self.a[i][j] < 0).collect()
    }

    pub fn simple_root(&self, i: usize) -> Root {
        Root::simple(self.rank(), i)
    }

    /// `(x, y) = Σ x_i d_i A_ij y_j`.
    pub fn bilinear(&self, x: &Root, y: &Root) -> i64 {
        let n = self.rank();
        let mut s = 0i64;
        for i in 0..n {
            if x.0[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += x.0[i] * self.d[i] as i64 * self.a[i][j] * y.0[j];
            }
        }
        s
    }

    /// `(α_i^∨, x) = Σ_j A_ij x_j`.
    pub fn coroot_pairing(&self, i: usize, x: &Root) -> i64 {
        self.a[i].iter().zip(&x.0).map(|(a, b)| a * b).sum()
    }

    /// `s_i(x) = x − (α_i^∨, x) α_i`.
    pub fn reflect_root(&self, i: usize, x: &Root) -> Root {
        let c = self.coroot_pairing(i, x);
        let mut v = x.0.clone();
        v[i] = v[i].checked_sub(c).expect("root coordinate overflow");
        Root(v)
    }

    /// `(s_i θ)_k = θ_k − θ_i A_ik`.
    pub fn reflect_weight(&self, i: usize, theta: &Weight) -> Weight {
        let ti = theta.0[i].clone();
        Weight(
            theta
                .0
                .iter()
                .enumerate()
                .map(|(k, t)| t - &ti * BigRational::from_integer(self.a[i][k].into()))
                .collect(),
        )
    }

    /// The same action on integer weight vectors.
    pub fn reflect_weight_int(&self, i: usize, theta: &[BigInt]) -> Vec<BigInt> {
        let ti = theta[i].clone();
        theta.iter().enumerate().map(|(k, t)| t - &ti * self.a[i][k]).collect()
    }

    /// The same action on integer root-space vectors.
    pub fn reflect_root_int(&self, i: usize, x: &[BigInt]) -> Vec<BigInt> {
        let c: BigInt = self.a[i].iter().zip(x).map(|(a, b)| b * *a).sum();
        let mut v = x.to_vec();
        v[i] -= c;
        v
    }

    /// `d_β = (β, β)/2` for a real root `β`.
    pub fn d_beta(&self, beta: &Root) -> Result<usize> {
        let q = self.bilinear(beta, beta);
        if q <= 0 || q % 2 != 0 || !self.d.contains(&((q / 2) as u64)) {
            return Err(Error::NotPositiveRealRoot(beta.to_string()));
        }
        Ok((q / 2) as usize)
    }

    /// `d_β` as a vertex degree (`(β, β)/2`) for any vector with positive norm.
    pub fn half_norm(&self, beta: &Root) -> i64 {
        self.bilinear(beta, beta) / 2
    }

    pub fn parse_root(&self, s: &str) -> Result<Root> {
        let r: Root = s.parse()?;
        if r.rank() != self.rank() {
            return Err(Error::InvalidInput(format!(
                "root {s:?} has {} coordinates, rank is {}",
                r.rank(),
                self.rank()
            )));
        }
        Ok(r)
    }

    /// True if the integer vector `theta` pairs nonnegatively with `x`.
    pub fn pairing_int(theta: &[BigInt], x: &[BigInt]) -> BigInt {
        theta.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

/// Bundled examples, keyed by name.
pub mod bundled {
    use super::CartanData;

    pub const A2: &str = include_str!("../data/a2.json");
    pub const A3: &str = include_str!("../data/a3.json");
    pub const B2: &str = include_str!("../data/b2.json");
    pub const D4: &str = include_str!("../data/d4.json");
    pub const RANK4: &str = include_str!("../data/rank4-dependence.json");
    pub const RANK6: &str = include_str!("../data/rank6.json");

    pub const NAMES: [&str; 6] = ["a2", "a3", "b2", "d4", "rank4-dependence", "rank6"];

    pub fn source(name: &str) -> Option<&'static str> {
        Some(match name {
            "a2" => A2,
            "a3" => A3,
            "b2" => B2,
            "d4" => D4,
            "rank4-dependence" => RANK4,
            "rank6" => RANK6,
            _ => return None,
        })
    }

    /// Loads a bundled datum; panics only if the bundled file is malformed.
    pub fn load(name: &str) -> Option<CartanData> {
        source(name).map(|s| CartanData::from_json(s).expect("bundled Cartan file is valid"))
    }

    /// The rank-4 datum with off-diagonal entries `−x, −y, −z` on the edges
    /// `1–4`, `2–4`, `3–4`.
    pub fn rank4_family(x: i64, y: i64, z: i64) -> crate::error::Result<CartanData> {
        CartanData::symmetric(vec![
            vec![2, 0, 0, -x],
            vec![0, 2, 0, -y],
            vec![0, 0, 2, -z],
            vec![-x, -y, -z, 2],
        ])
        .map(|c| c.with_name(format!("rank4-dependence({x},{y},{z})")))
    }
}

/// Sign of a big integer as `-1`, `0`, `1`.
pub(crate) fn signum(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b2() -> CartanData {
        CartanData::new(vec![vec![2, -2], vec![-1, 2]], vec![1, 2], Some(3)).unwrap()
    }

    #[test]
    fn validation() {
        assert!(CartanData::new(vec![vec![2, 0], vec![0, 2]], vec![1, 1], None).is_ok());
        let err = CartanData::new(vec![vec![2, -1], vec![-2, 2]], vec![1, 2], Some(3)).unwrap_err();
        assert!(err.to_string().contains("symmetrizability"), "{err}");
        let err = CartanData::new(vec![vec![3, 0], vec![0, 2]], vec![1, 1], None).unwrap_err();
        assert!(err.to_string().contains("diagonal"));
        let err = CartanData::new(vec![vec![2, 1], vec![1, 2]], vec![1, 1], None).unwrap_err();
        assert!(err.to_string().contains("sign"));
        let err = CartanData::new(vec![vec![2, -2], vec![-1, 2]], vec![1, 2], None).unwrap_err();
        assert!(err.to_string().contains("rational backend"));
        // Symmetrizability already forces d_i A_ij to be a multiple of lcm(d_i, d_j).
        let c = CartanData::new(vec![vec![2, -3], vec![-2, 2]], vec![2, 3], Some(2)).unwrap();
        assert_eq!(c.arrow_count(0, 1), 1);
    }

    #[test]
    fn b2_form_and_reflections() {
        let c = b2();
        let a1 = c.simple_root(0);
        let a2 = c.simple_root(1);
        assert_eq!(c.bilinear(&a1, &a1), 2);
        assert_eq!(c.bilinear(&a2, &a2), 4);
        assert_eq!(c.bilinear(&a1, &a2), -2);
        assert_eq!(c.reflect_root(0, &a2), Root::new(vec![2, 1]));
        assert_eq!(c.reflect_root(1, &a1), Root::new(vec![1, 1]));
        assert_eq!(c.reflect_root(0, &a1), a1.neg());
        assert_eq!(c.coroot_pairing(0, &a2), -2);
        assert_eq!(c.coroot_pairing(1, &Root::new(vec![1, 1])), 1);
        assert_eq!(c.arrow_count(0, 1), 1);
        assert_eq!(c.arrow_count(1, 0), 1);
    }

    #[test]
    fn d_beta_matches_orbit() {
        let c = b2();
        // α1 + α2 = s2 α1 lies in the orbit of α1; 2α1 + α2 = s1 α2 in that of α2.
        assert_eq!(c.d_beta(&Root::new(vec![1, 1])).unwrap(), 1);
        assert_eq!(c.d_beta(&Root::new(vec![2, 1])).unwrap(), 2);
        assert_eq!(c.d_beta(&Root::new(vec![0, 1])).unwrap(), 2);
        let kron = CartanData::symmetric(vec![vec![2, -2], vec![-2, 2]]).unwrap();
        assert!(kron.d_beta(&Root::new(vec![1, 1])).is_err());
    }

    #[test]
    fn weight_reflection_of_fundamental_weight() {
        let c = b2();
        let w = c.reflect_weight(0, &Weight::from_ints(&[1, 0]));
        assert_eq!(w, Weight::from_ints(&[-1, 2]));
    }

    #[test]
    fn root_parsing() {
        assert_eq!("2,1".parse::<Root>().unwrap(), Root::new(vec![2, 1]));
        assert!("2,x".parse::<Root>().is_err());
        assert!(b2().parse_root("1,1,1").is_err());
        assert_eq!(Root::new(vec![0, 0, 1]).simple_index(), Some(2));
        assert_eq!(Root::new(vec![0, 2]).simple_index(), None);
    }

    #[test]
    fn bundled_files_validate() {
        for name in bundled::NAMES {
            assert!(bundled::load(name).is_some(), "{name}");
        }
        assert!(bundled::rank4_family(3, 2, 2).is_ok());
    }

    fn data() -> Vec<CartanData> {
        let mut v: Vec<CartanData> = bundled::NAMES.iter().map(|n| bundled::load(n).unwrap()).collect();
        v.push(CartanData::new(vec![vec![2, -1], vec![-3, 2]], vec![3, 1], Some(2)).unwrap());
        v
    }

    proptest! {
        #[test]
        fn reflections_are_involutive_isometries(
            which in 0usize..7,
            xs in proptest::collection::vec(-5i64..=5, 6),
            ys in proptest::collection::vec(-5i64..=5, 6),
            ts in proptest::collection::vec(-5i64..=5, 6),
            i in 0usize..6,
        ) {
            let c = &data()[which];
            let n = c.rank();
            let i = i % n;
            let x = Root::new(xs[..n].to_vec());
            let y = Root::new(ys[..n].to_vec());
            let t = Weight::from_ints(&ts[..n]);
            prop_assert_eq!(c.reflect_root(i, &c.reflect_root(i, &x)), x.clone());
            prop_assert_eq!(c.reflect_weight(i, &c.reflect_weight(i, &t)), t.clone());
            prop_assert_eq!(c.bilinear(&x, &y), c.bilinear(&y, &x));
            prop_assert_eq!(c.bilinear(&c.reflect_root(i, &x), &c.reflect_root(i, &y)), c.bilinear(&x, &y));
            prop_assert_eq!(c.reflect_weight(i, &t).pair(&c.reflect_root(i, &x)), t.pair(&x));
        }
    }
}
