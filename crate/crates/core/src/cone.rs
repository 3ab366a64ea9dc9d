//! Exact polyhedral cones in weight space.
//!
//! A cone is given by inequality normals `ν` (meaning `⟨x, ν⟩ ≥ 0`) and
//! equality normals, both integer vectors in root coordinates. The generator
//! description (lineality basis plus extreme rays) is computed on demand by
//! the double description method and cached.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::cartan::{signum, CartanData, Root};
use crate::error::{Error, Result};
use crate::lattice::{self, dot, primitive, IVec};

/// Generators of a cone in canonical form.
///
/// The lineality basis is the Hermite normal form of its saturated lattice;
/// rays are primitive, orthogonal to the lineality space, and sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VRep {
    pub lineality: Vec<IVec>,
    pub rays: Vec<IVec>,
}

impl VRep {
    pub fn dim(&self, n: usize) -> usize {
        let mut all = self.lineality.clone();
        all.extend(self.rays.iter().cloned());
        lattice::rank(&all, n)
    }
}

/// Constraints in canonical form: saturated equality lattice plus facet normals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HRep {
    pub equalities: Vec<IVec>,
    pub inequalities: Vec<IVec>,
}

/// Working state of the double description method.
struct Dd {
    n: usize,
    lineality: Vec<IVec>,
    rays: Vec<IVec>,
    constraints: Vec<IVec>,
}

fn zero_set(ray: &[BigInt], constraints: &[IVec]) -> Vec<u64> {
    let mut bits = vec![0u64; constraints.len().div_ceil(64)];
    for (k, c) in constraints.iter().enumerate() {
        if dot(ray, c).is_zero() {
            bits[k / 64] |= 1 << (k % 64);
        }
    }
    bits
}

fn intersect_bits(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn combine(a: &BigInt, x: &[BigInt], b: &BigInt, y: &[BigInt]) -> IVec {
    primitive(&x.iter().zip(y).map(|(u, v)| a * u - b * v).collect::<Vec<_>>())
}

impl Dd {
    fn full(n: usize) -> Self {
        Dd { n, lineality: lattice::identity(n), rays: Vec::new(), constraints: Vec::new() }
    }

    fn add(&mut self, nu: &IVec, equality: bool) {
        let pivot = self.lineality.iter().position(|l| !dot(l, nu).is_zero());
        if let Some(k) = pivot {
            let mut l0 = self.lineality.remove(k);
            let mut a = dot(&l0, nu);
            if a.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
                a = -a;
            }
            for l in self.lineality.iter_mut() {
                let b = dot(l, nu);
                if !b.is_zero() {
                    *l = combine(&a, l, &b, &l0);
                }
            }
            for r in self.rays.iter_mut() {
                let b = dot(r, nu);
                if !b.is_zero() {
                    *r = combine(&a, r, &b, &l0);
                }
            }
            if !equality {
                self.rays.push(primitive(&l0));
            }
        } else {
            let values: Vec<BigInt> = self.rays.iter().map(|r| dot(r, nu)).collect();
            let zs: Vec<Vec<u64>> = self.rays.iter().map(|r| zero_set(r, &self.constraints)).collect();
            let mut next = Vec::new();
            let (mut pos, mut neg) = (Vec::new(), Vec::new());
            for (k, v) in values.iter().enumerate() {
                match signum(v) {
                    0 => next.push(self.rays[k].clone()),
                    1 => {
                        pos.push(k);
                        if !equality {
                            next.push(self.rays[k].clone());
                        }
                    }
                    _ => neg.push(k),
                }
            }
            for &p in &pos {
                for &q in &neg {
                    let common = intersect_bits(&zs[p], &zs[q]);
                    let adjacent = (0..self.rays.len())
                        .filter(|&r| r != p && r != q)
                        .all(|r| !is_subset(&common, &zs[r]));
                    if adjacent {
                        // ⟨p,ν⟩ q − ⟨q,ν⟩ p lies on ν^⊥ with positive weights.
                        next.push(combine(&values[p], &self.rays[q], &values[q], &self.rays[p]));
                    }
                }
            }
            self.rays = next;
        }
        if !equality {
            self.constraints.push(nu.clone());
        }
    }

    fn canonical(self) -> VRep {
        canonical_vrep(self.n, &self.lineality, &self.rays)
    }
}

fn canonical_vrep(n: usize, lineality: &[IVec], rays: &[IVec]) -> VRep {
    let lin = lattice::saturate(lineality, n);
    let mut out: Vec<IVec> = rays
        .iter()
        .map(|r| lattice::project_out(r, &lin))
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    out.sort();
    out.dedup();
    VRep { lineality: lin, rays: out }
}

fn normalize(v: &[IVec]) -> Vec<IVec> {
    let mut out: Vec<IVec> = v.iter().filter(|r| r.iter().any(|x| !x.is_zero())).map(|r| primitive(r)).collect();
    out.sort();
    out.dedup();
    out
}

/// Generators of the cone cut out by the given constraints.
pub fn double_description(n: usize, equalities: &[IVec], inequalities: &[IVec]) -> VRep {
    let mut dd = Dd::full(n);
    for e in equalities {
        dd.add(e, true);
    }
    for i in inequalities {
        dd.add(i, false);
    }
    dd.canonical()
}

/// Canonical constraints of the cone generated by `lineality` and `rays`.
pub fn facet_enumeration(n: usize, lineality: &[IVec], rays: &[IVec]) -> HRep {
    let dual = double_description(n, &normalize(lineality), &normalize(rays));
    HRep { equalities: dual.lineality, inequalities: dual.rays }
}

/// An exact rational polyhedral cone.
#[derive(Clone)]
pub struct Cone {
    n: usize,
    equalities: Vec<IVec>,
    inequalities: Vec<IVec>,
    vrep: OnceLock<VRep>,
}

impl Cone {
    pub fn new(n: usize, equalities: Vec<IVec>, inequalities: Vec<IVec>) -> Result<Self> {
        if let Some(v) = equalities.iter().chain(&inequalities).find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch(format!("normal of length {} in rank {n}", v.len())));
        }
        Ok(Cone { n, equalities: normalize(&equalities), inequalities: normalize(&inequalities), vrep: OnceLock::new() })
    }

    /// The whole weight space.
    pub fn full(n: usize) -> Self {
        Cone { n, equalities: Vec::new(), inequalities: Vec::new(), vrep: OnceLock::new() }
    }

    /// `β^⊥ = {x : ⟨x, β⟩ = 0}`.
    pub fn hyperplane(beta: &Root) -> Result<Self> {
        if beta.is_zero() {
            return Err(Error::InvalidInput("hyperplane of the zero vector".into()));
        }
        Cone::new(beta.rank(), vec![beta.to_bigint()], Vec::new())
    }

    /// The cone generated by a lineality space and rays.
    pub fn from_generators(n: usize, lineality: Vec<IVec>, rays: Vec<IVec>) -> Result<Self> {
        if let Some(v) = lineality.iter().chain(&rays).find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch(format!("generator of length {} in rank {n}", v.len())));
        }
        let h = facet_enumeration(n, &lineality, &rays);
        Ok(Cone { n, equalities: h.equalities, inequalities: h.inequalities, vrep: OnceLock::new() })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// The constraints as supplied (normalized, possibly redundant).
    pub fn equalities(&self) -> &[IVec] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[IVec] {
        &self.inequalities
    }

    pub fn vrep(&self) -> &VRep {
        self.vrep.get_or_init(|| double_description(self.n, &self.equalities, &self.inequalities))
    }

    pub fn rays(&self) -> &[IVec] {
        &self.vrep().rays
    }

    pub fn lineality(&self) -> &[IVec] {
        &self.vrep().lineality
    }

    pub fn dim(&self) -> usize {
        self.vrep().dim(self.n)
    }

    /// Irredundant constraints derived from the generators.
    pub fn facets(&self) -> HRep {
        let v = self.vrep();
        facet_enumeration(self.n, &v.lineality, &v.rays)
    }

    pub fn contains(&self, theta: &[BigInt]) -> bool {
        self.equalities.iter().all(|e| dot(theta, e).is_zero())
            && self.inequalities.iter().all(|i| !dot(theta, i).is_negative())
    }

    /// Containment of cones, checked on generators.
    pub fn is_subset_of(&self, other: &Cone) -> bool {
        let v = self.vrep();
        v.rays.iter().all(|r| other.contains(r))
            && v.lineality.iter().all(|l| {
                let m: IVec = l.iter().map(|x| -x).collect();
                other.contains(l) && other.contains(&m)
            })
    }

    fn with_constraint(&self, nu: IVec, equality: bool) -> Cone {
        let nu = primitive(&nu);
        let mut eqs = self.equalities.clone();
        let mut ineqs = self.inequalities.clone();
        if equality {
            eqs.push(nu.clone());
        } else {
            ineqs.push(nu.clone());
        }
        let cone = Cone { n: self.n, equalities: normalize(&eqs), inequalities: normalize(&ineqs), vrep: OnceLock::new() };
        if let Some(v) = self.vrep.get() {
            let mut dd = Dd { n: self.n, lineality: v.lineality.clone(), rays: v.rays.clone(), constraints: self.inequalities.clone() };
            if nu.iter().any(|x| !x.is_zero()) {
                dd.add(&nu, equality);
            }
            let _ = cone.vrep.set(dd.canonical());
        }
        cone
    }

    /// `K ∩ {⟨x, ν⟩ ≥ 0}`.
    pub fn with_inequality(&self, nu: IVec) -> Cone {
        self.with_constraint(nu, false)
    }

    /// `K ∩ {⟨x, ν⟩ = 0}`.
    pub fn with_equality(&self, nu: IVec) -> Cone {
        self.with_constraint(nu, true)
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        let mut eqs = self.equalities.clone();
        eqs.extend(other.equalities.iter().cloned());
        let mut ineqs = self.inequalities.clone();
        ineqs.extend(other.inequalities.iter().cloned());
        Cone { n: self.n, equalities: normalize(&eqs), inequalities: normalize(&ineqs), vrep: OnceLock::new() }
    }

    /// The image `s_i K`.
    pub fn reflect(&self, c: &CartanData, i: usize) -> Cone {
        let map = |v: &Vec<IVec>| -> Vec<IVec> { v.iter().map(|x| c.reflect_root_int(i, x)).collect() };
        let cone = Cone { n: self.n, equalities: normalize(&map(&self.equalities)), inequalities: normalize(&map(&self.inequalities)), vrep: OnceLock::new() };
        if let Some(v) = self.vrep.get() {
            let lin: Vec<IVec> = v.lineality.iter().map(|x| c.reflect_weight_int(i, x)).collect();
            let rays: Vec<IVec> = v.rays.iter().map(|x| c.reflect_weight_int(i, x)).collect();
            let _ = cone.vrep.set(canonical_vrep(self.n, &lin, &rays));
        }
        cone
    }

    /// `σ_i^±(K) = s_i(K ∩ {±⟨x, α_i⟩ ≥ 0})`.
    pub fn sigma(&self, c: &CartanData, i: usize, sign: Sign) -> Cone {
        let mut nu = vec![BigInt::zero(); self.n];
        nu[i] = BigInt::from(sign.as_i64());
        self.with_inequality(nu).reflect(c, i)
    }

    pub fn to_json(&self) -> Value {
        let h = self.facets();
        let v = self.vrep();
        json!({
            "equalities": ints_json(&h.equalities),
            "inequalities": ints_json(&h.inequalities),
            "rays": ints_json(&v.rays),
            "lineality": ints_json(&v.lineality),
            "dim": self.dim(),
        })
    }

    /// Reads the constraint part of a cone JSON record.
    pub fn from_json(n: usize, v: &Value) -> Result<Cone> {
        let eqs = ints_from_json(v.get("equalities"))?;
        let ineqs = ints_from_json(v.get("inequalities"))?;
        Cone::new(n, eqs, ineqs)
    }
}

/// Which half-space `σ_i` keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

fn int_json(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => Value::from(v),
        Err(_) => Value::from(x.to_string()),
    }
}

pub(crate) fn ints_json(rows: &[IVec]) -> Value {
    Value::Array(rows.iter().map(|r| Value::Array(r.iter().map(int_json).collect())).collect())
}

fn ints_from_json(v: Option<&Value>) -> Result<Vec<IVec>> {
    let Some(v) = v else { return Ok(Vec::new()) };
    let bad = || Error::InvalidInput(format!("expected a list of integer vectors, got {v}"));
    let rows = v.as_array().ok_or_else(bad)?;
    rows.iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|x| match x {
                    Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(bad),
                    Value::String(s) => s.parse::<BigInt>().map_err(|_| bad()),
                    _ => Err(bad()),
                })
                .collect()
        })
        .collect()
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.vrep() == other.vrep()
    }
}

impl Eq for Cone {}

impl Hash for Cone {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.vrep().hash(state);
    }
}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cone {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.vrep()).cmp(&(other.n, other.vrep()))
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.vrep();
        let show = |rows: &[IVec]| -> String {
            rows.iter()
                .map(|r| format!("({})", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(f, "Cone(dim {}; rays {}; lineality {})", self.dim(), show(&v.rays), show(&v.lineality))
    }
}
