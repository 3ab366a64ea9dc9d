//! Shards of a root hyperplane, by direct region enumeration and by the
//! σ-recursion along a positive expression.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cartan::{CartanData, Root};
use crate::cone::{Cone, Sign};
use crate::error::Result;
use crate::lattice::IVec;
use crate::rank_two::cutting_systems;
use crate::roots::{positive_expression, PositiveExpression, SignedWord};

/// A codimension-one cone inside `β^⊥`.
#[derive(Clone, Debug)]
pub struct Shard {
    pub normal: Root,
    pub cone: Cone,
    /// The sign word producing this shard, for recursively found shards.
    pub provenance: Option<SignedWord>,
}

impl Shard {
    pub fn to_json(&self) -> Value {
        json!({
            "normal": self.normal.to_string(),
            "cone": self.cone.to_json(),
            "provenance": self.provenance.as_ref().map(|w| w.to_string()),
        })
    }
}

/// Normals (inside `β^⊥`) of the hyperplanes `R^⊥` for the subsystems cutting `β^⊥`.
pub fn shard_arrangement(c: &CartanData, expr: &PositiveExpression) -> Vec<IVec> {
    cutting_systems(c, expr).iter().map(|r| r.witness().1.to_bigint()).collect()
}

fn sorted(mut shards: Vec<Shard>) -> Vec<Shard> {
    shards.sort_by(|a, b| a.cone.cmp(&b.cone));
    shards
}

/// Closed regions of `start` cut by the hyperplanes `ν^⊥`, keeping only
/// regions of the same dimension as `start`.
pub fn arrangement_regions(start: Cone, normals: &[IVec]) -> Vec<Cone> {
    let d = start.dim();
    let mut cells = vec![start];
    for nu in normals {
        let neg: IVec = nu.iter().map(|x| -x).collect();
        let next: Vec<Cone> = cells
            .par_iter()
            .flat_map_iter(|cell| {
                let _ = cell.vrep();
                [cell.with_inequality(nu.clone()), cell.with_inequality(neg.clone())]
            })
            .filter(|k| k.dim() == d)
            .collect();
        let mut seen = HashSet::new();
        cells = next.into_iter().filter(|k| seen.insert(k.clone())).collect();
    }
    cells.sort();
    cells
}

/// Closed regions of `β^⊥` cut by the shard arrangement.
pub fn shards_direct(c: &CartanData, beta: &Root) -> Result<Vec<Shard>> {
    let expr = positive_expression(c, beta)?;
    let normals = shard_arrangement(c, &expr);
    Ok(arrangement_regions(Cone::hyperplane(beta)?, &normals)
        .into_iter()
        .map(|cone| Shard { normal: beta.clone(), cone, provenance: None })
        .collect())
}

/// Result of the σ-recursion.
#[derive(Clone, Debug)]
pub struct RecursiveShards {
    pub shards: Vec<Shard>,
    /// `2^r` for an expression of length `r`.
    pub sign_vectors: u64,
    /// Sign vectors whose cone has dimension below `n − 1`.
    pub degenerate: u64,
}

/// `σ_{i_r}^{±} ⋯ σ_{i_1}^{±}(α_j^⊥)` over all sign vectors, keeping the
/// codimension-one results.
pub fn shards_recursive(c: &CartanData, expr: &PositiveExpression) -> RecursiveShards {
    let n = c.rank();
    let r = expr.len();
    let start = Cone::hyperplane(&c.simple_root(expr.seed())).expect("simple roots are nonzero");
    // cone → (number of sign prefixes reaching it, first such prefix)
    let mut level: Vec<(Cone, u64, Vec<Sign>)> = vec![(start, 1, Vec::new())];
    let mut degenerate = 0u64;
    for (k, &i) in expr.steps().iter().enumerate() {
        let children: Vec<(Cone, u64, Vec<Sign>)> = level
            .par_iter()
            .flat_map_iter(|(cone, mult, prefix)| {
                let _ = cone.vrep();
                [Sign::Plus, Sign::Minus].map(|s| {
                    let mut p = prefix.clone();
                    p.push(s);
                    (cone.sigma(c, i, s), *mult, p)
                })
            })
            .collect();
        let mut merged: HashMap<Cone, (u64, Vec<Sign>)> = HashMap::new();
        let mut order = Vec::new();
        for (cone, mult, prefix) in children {
            if cone.dim() < n - 1 {
                degenerate += mult << (r - k - 1);
                continue;
            }
            match merged.get_mut(&cone) {
                Some(e) => {
                    e.0 += mult;
                    if prefix < e.1 {
                        e.1 = prefix;
                    }
                }
                None => {
                    order.push(cone.clone());
                    merged.insert(cone, (mult, prefix));
                }
            }
        }
        level = order
            .into_iter()
            .map(|cone| {
                let (m, p) = merged.remove(&cone).expect("present");
                (cone, m, p)
            })
            .collect();
    }
    let shards = level
        .into_iter()
        .map(|(cone, _, signs)| Shard {
            normal: expr.root().clone(),
            cone,
            provenance: Some(SignedWord::from_expression(expr, &signs)),
        })
        .collect();
    RecursiveShards { shards: sorted(shards), sign_vectors: 1u64 << r, degenerate }
}

/// True if both methods give the same set of cones.
pub fn methods_agree(direct: &[Shard], recursive: &[Shard]) -> bool {
    direct.len() == recursive.len() && direct.iter().zip(recursive).all(|(a, b)| a.cone == b.cone)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::bundled;
    use crate::roots::positive_roots_up_to_depth;

    fn r(v: &[i64]) -> Root {
        Root::new(v.to_vec())
    }

    #[test]
    fn b2_six_shards() {
        let c = bundled::load("b2").unwrap();
        let counts: Vec<usize> = [[1, 0], [0, 1], [1, 1], [2, 1]]
            .iter()
            .map(|b| shards_direct(&c, &r(b)).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 2]);
        let e = positive_expression(&c, &r(&[1, 1])).unwrap();
        let rec = shards_recursive(&c, &e);
        assert_eq!(rec.shards.len(), 2);
        assert_eq!(rec.degenerate, 0);
    }

    #[test]
    fn d4_counts() {
        let c = bundled::load("d4").unwrap();
        assert_eq!(shards_direct(&c, &r(&[1, 1, 1, 1])).unwrap().len(), 8);
        assert_eq!(shards_direct(&c, &r(&[2, 1, 1, 1])).unwrap().len(), 14);
        let reference = PositiveExpression::new(&c, 0, vec![3, 2, 1, 0]).unwrap();
        let rec = shards_recursive(&c, &reference);
        assert_eq!((rec.shards.len(), rec.sign_vectors, rec.degenerate), (14, 16, 2));
        let greedy = positive_expression(&c, &r(&[2, 1, 1, 1])).unwrap();
        assert_eq!(shards_recursive(&c, &greedy).degenerate, 2);
    }

    #[test]
    fn simple_root_is_one_shard() {
        let c = bundled::load("a3").unwrap();
        let s = shards_direct(&c, &c.simple_root(1)).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].cone, Cone::hyperplane(&c.simple_root(1)).unwrap());
    }

    #[test]
    fn methods_agree_on_small_data() {
        let mut data: Vec<CartanData> = ["a2", "a3", "b2", "d4"].iter().map(|n| bundled::load(n).unwrap()).collect();
        for (x, y, z) in [(2, 2, 2), (2, 2, 3), (3, 2, 2)] {
            data.push(bundled::rank4_family(x, y, z).unwrap());
        }
        for c in &data {
            let depth = if c.rank() == 4 && c.name().starts_with("rank4") { 3 } else { 4 };
            for (beta, d) in positive_roots_up_to_depth(c, depth) {
                let direct = shards_direct(c, &beta).unwrap();
                let rec = shards_recursive(c, &positive_expression(c, &beta).unwrap());
                assert!(methods_agree(&direct, &rec.shards), "{} {beta}", c.name());
                assert!(!direct.is_empty() && direct.len() as u64 <= 1 << d);
                let h = Cone::hyperplane(&beta).unwrap();
                assert!(direct.iter().all(|s| s.cone.is_subset_of(&h)));
            }
        }
    }
}
