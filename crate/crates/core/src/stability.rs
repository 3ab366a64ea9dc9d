//! Stability domains: the σ-recursion, a submodule oracle, and the
//! shard-module classification.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cartan::{CartanData, Root};
use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::field::{Field, Tower};
use crate::reflection::{apply_signed_word, bricks_of_dimension};
use crate::roots::SignedWord;
use crate::shards::shards_direct;
use crate::species::{Species, SpeciesModule};

/// Largest `κ`-space size the oracle will enumerate.
pub const DEFAULT_ORACLE_BOUND: u128 = 1 << 16;

/// `σ^{±_r}_{i_r} ⋯ σ^{±_1}_{i_1}(α_j^⊥)`, without building the module.
pub fn stab_of_word(c: &CartanData, w: &SignedWord) -> Result<Cone> {
    w.expression(c)?;
    let mut cone = Cone::hyperplane(&c.simple_root(w.seed()))?;
    for &(i, sign) in w.steps() {
        cone = cone.sigma(c, i, sign);
    }
    Ok(cone)
}

/// `Stab` of the brick named by `w`; fails if the signed product is undefined.
pub fn stab_recursive<F: Tower>(s: &Species<F>, w: &SignedWord) -> Result<Cone> {
    apply_signed_word(s, w)?;
    stab_of_word(s.cartan(), w)
}

/// A subspace in reduced echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Echelon<E> {
    rows: Vec<(usize, Vec<E>)>,
}

impl<E: Clone + PartialEq> Echelon<E> {
    fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    fn reduce<F: Field<Elt = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !f.is_zero(&v[*p]) {
                let c = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x = f.sub(x, &f.mul(&c, r));
                }
            }
        }
        v
    }

    /// Adds `v`; returns whether the span grew.
    fn insert<F: Field<Elt = E>>(&mut self, f: &F, v: &[E]) -> bool {
        let r = self.reduce(f, v);
        let Some(p) = r.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&r[p]).expect("nonzero pivot");
        let r: Vec<E> = r.iter().map(|x| f.mul(&inv, x)).collect();
        for (_, row) in &mut self.rows {
            if !f.is_zero(&row[p]) {
                let c = row[p].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
        }
        self.rows.push((p, r));
        self.rows.sort_by_key(|(p, _)| *p);
        true
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// Per-vertex subspaces of the `κ`-representation.
type Graded<E> = Vec<Echelon<E>>;

/// Dimension vectors of all submodules of `M`.
///
/// Every submodule is a sum of cyclic submodules generated by homogeneous
/// vectors, so it suffices to close those under sums.
pub fn submodule_dim_vectors<F: Tower>(s: &Species<F>, m: &SpeciesModule<F::Elt>, bound: u128) -> Result<BTreeSet<Root>> {
    let f = s.field();
    let kr = s.kappa_rep(m);
    let total: usize = kr.dims.iter().sum();
    let (Some(q), Some(kappa)) = (f.subfield_order(1), f.subfield_elements(1)) else {
        return Err(Error::OracleOutOfRange("the submodule oracle needs a finite field".into()));
    };
    if q.checked_pow(total as u32).is_none_or(|size| size > bound) {
        return Err(Error::OracleOutOfRange(format!("κ-space of size {q}^{total} exceeds {bound}")));
    }
    let n = s.rank();
    let empty: Graded<F::Elt> = kr.dims.iter().map(|_| Echelon::new()).collect();

    let cyclic = |i: usize, v: Vec<F::Elt>| -> Graded<F::Elt> {
        let mut sub = empty.clone();
        sub[i].insert(f, &v);
        let mut queue = vec![(i, v)];
        while let Some((i, v)) = queue.pop() {
            let mut images = vec![(i, crate::linalg::mat_vec(f, &kr.gens[i], &v))];
            for (j, src, psi) in &kr.arrows {
                if *src == i {
                    images.push((*j, crate::linalg::mat_vec(f, psi, &v)));
                }
            }
            for (j, w) in images {
                if sub[j].insert(f, &w) {
                    queue.push((j, w));
                }
            }
        }
        sub
    };

    let mut cyclics: HashSet<Graded<F::Elt>> = HashSet::new();
    for i in 0..n {
        let d = kr.dims[i];
        // Projective points: first nonzero coordinate equal to one.
        for lead in 0..d {
            let tail = d - lead - 1;
            let mut idx = vec![0usize; tail];
            loop {
                let mut v = vec![f.zero(); d];
                v[lead] = f.one();
                for (t, &k) in idx.iter().enumerate() {
                    v[lead + 1 + t] = kappa[k].clone();
                }
                cyclics.insert(cyclic(i, v));
                let mut t = 0;
                while t < tail && idx[t] == kappa.len() - 1 {
                    idx[t] = 0;
                    t += 1;
                }
                if t == tail {
                    break;
                }
                idx[t] += 1;
            }
        }
    }
    let cyclics: Vec<Graded<F::Elt>> = cyclics.into_iter().collect();
    let mut seen: HashSet<Graded<F::Elt>> = HashSet::new();
    seen.insert(empty.clone());
    let mut frontier = vec![empty];
    while let Some(x) = frontier.pop() {
        for c in &cyclics {
            let mut sum = x.clone();
            for (a, b) in sum.iter_mut().zip(c) {
                for (_, row) in &b.rows {
                    a.insert(f, row);
                }
            }
            if seen.insert(sum.clone()) {
                frontier.push(sum);
            }
        }
    }
    Ok(seen
        .iter()
        .map(|g| Root::new((0..n).map(|i| (g[i].dim() / s.cartan().d(i)) as i64).collect()))
        .collect())
}

/// `{θ : ⟨θ, dim M⟩ = 0, ⟨θ, dim N⟩ ≥ 0 for every submodule N}`.
pub fn stab_oracle<F: Tower>(s: &Species<F>, m: &SpeciesModule<F::Elt>, bound: u128) -> Result<Cone> {
    let dims = submodule_dim_vectors(s, m, bound)?;
    let n = s.rank();
    if m.is_zero() {
        return Ok(Cone::full(n));
    }
    let ineqs: Vec<Vec<BigInt>> = dims.iter().filter(|r| !r.is_zero()).map(Root::to_bigint).collect();
    Cone::new(n, vec![m.dim_vector().to_bigint()], ineqs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabMethod {
    Recursive,
    Oracle,
}

#[derive(Clone, Debug)]
pub struct StabResult {
    pub word: SignedWord,
    pub dim: Root,
    pub cone: Cone,
    pub method: StabMethod,
    pub is_shard_module: bool,
}

impl StabResult {
    pub fn new(word: SignedWord, dim: Root, cone: Cone, method: StabMethod) -> Self {
        let is_shard_module = cone.dim() + 1 == dim.rank();
        StabResult { word, dim, cone, method, is_shard_module }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "word": self.word.to_string(),
            "dims": self.dim.to_string(),
            "method": self.method,
            "is_shard_module": self.is_shard_module,
            "cone": self.cone.to_json(),
        })
    }
}

/// `Stab` of every brick of dimension `β`, via the recursion.
pub fn classify_shard_modules<F: Tower>(s: &Species<F>, beta: &Root) -> Result<Vec<StabResult>> {
    let search = bricks_of_dimension(s, beta)?;
    search
        .bricks
        .par_iter()
        .map(|b| {
            let cone = stab_of_word(s.cartan(), &b.word)?;
            Ok(StabResult::new(b.word.clone(), b.module.dim_vector(), cone, StabMethod::Recursive))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BijectionReport {
    pub root: String,
    pub bricks: usize,
    pub shard_modules: usize,
    pub shards: usize,
    pub holds: bool,
}

/// Whether `Stab` maps shard modules of dimension `β` bijectively onto the shards of `β`.
pub fn bijection_check<F: Tower>(s: &Species<F>, beta: &Root) -> Result<BijectionReport> {
    let results = classify_shard_modules(s, beta)?;
    let mut stabs: Vec<Cone> = results.iter().filter(|r| r.is_shard_module).map(|r| r.cone.clone()).collect();
    let mut shards: Vec<Cone> = shards_direct(s.cartan(), beta)?.into_iter().map(|sh| sh.cone).collect();
    stabs.sort();
    shards.sort();
    Ok(BijectionReport {
        root: beta.to_string(),
        bricks: results.len(),
        shard_modules: stabs.len(),
        shards: shards.len(),
        holds: stabs == shards,
    })
}
