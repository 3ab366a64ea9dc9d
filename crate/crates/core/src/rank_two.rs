//! Rank-two subsystems through a root and the ones that cut its hyperplane.

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use crate::cartan::{CartanData, Root};
use crate::lattice::{self, IVec};
use crate::roots::PositiveExpression;

/// A rank-two subsystem, identified by the plane it spans.
#[derive(Clone, Debug)]
pub struct RankTwoSystem {
    span_basis: Vec<IVec>,
    witness: (Root, Root),
}

impl RankTwoSystem {
    /// The subsystem in the plane spanned by two roots; `None` if parallel.
    pub fn spanned_by(a: &Root, b: &Root) -> Option<Self> {
        let n = a.rank();
        let rows = vec![a.to_bigint(), b.to_bigint()];
        let basis = lattice::saturate(&rows, n);
        (basis.len() == 2).then(|| RankTwoSystem { span_basis: basis, witness: (a.clone(), b.clone()) })
    }

    /// Hermite normal form of the saturated plane lattice.
    pub fn span_basis(&self) -> &[IVec] {
        &self.span_basis
    }

    pub fn witness(&self) -> (&Root, &Root) {
        (&self.witness.0, &self.witness.1)
    }

    pub fn contains(&self, v: &Root) -> bool {
        let mut rows = self.span_basis.clone();
        rows.push(v.to_bigint());
        lattice::rank(&rows, v.rank()) == 2
    }

    /// The image `s_i R`.
    pub fn reflect(&self, c: &CartanData, i: usize) -> Self {
        let a = c.reflect_root(i, &self.witness.0);
        let b = c.reflect_root(i, &self.witness.1);
        Self::spanned_by(&a, &b).expect("reflections preserve rank")
    }
}

impl PartialEq for RankTwoSystem {
    fn eq(&self, other: &Self) -> bool {
        self.span_basis == other.span_basis
    }
}

impl Eq for RankTwoSystem {}

impl Hash for RankTwoSystem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.span_basis.hash(state);
    }
}

impl PartialOrd for RankTwoSystem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RankTwoSystem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.span_basis.cmp(&other.span_basis)
    }
}

/// The subsystems `span(β, δ_k)` cutting `β^⊥`, sorted and deduplicated.
pub fn cutting_systems(c: &CartanData, expr: &PositiveExpression) -> Vec<RankTwoSystem> {
    let beta = expr.root();
    let mut out: Vec<RankTwoSystem> = expr
        .deltas(c)
        .iter()
        .map(|d| RankTwoSystem::spanned_by(beta, d).expect("δ_k is not parallel to β"))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// At most `depth(β)` subsystems cut `β^⊥`.
pub fn cutting_count_bound_check(c: &CartanData, expr: &PositiveExpression) -> bool {
    cutting_systems(c, expr).len() <= expr.len()
}

/// Checks `cut(s_i β′) = s_i·cut(β′) ∪ {span(α_i, β′)}` where `i` is the last
/// step of `expr` and `β′` the root before it.
pub fn cutting_recursion_holds(c: &CartanData, expr: &PositiveExpression) -> bool {
    let Some((&i, rest)) = expr.steps().split_last() else {
        return true;
    };
    let prev = PositiveExpression::new(c, expr.seed(), rest.to_vec()).expect("prefix of a positive expression");
    let mut expected: Vec<RankTwoSystem> =
        cutting_systems(c, &prev).iter().map(|r| r.reflect(c, i)).collect();
    expected.push(RankTwoSystem::spanned_by(&c.simple_root(i), prev.root()).expect("cover is not parallel"));
    expected.sort();
    expected.dedup();
    expected == cutting_systems(c, expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::bundled;
    use crate::roots::{inversion_involution, positive_expression, positive_roots_up_to_depth};

    fn r(v: &[i64]) -> Root {
        Root::new(v.to_vec())
    }

    #[test]
    fn b2_has_one_cutting_plane() {
        let c = bundled::load("b2").unwrap();
        let e = positive_expression(&c, &r(&[1, 1])).unwrap();
        let cuts = cutting_systems(&c, &e);
        assert_eq!(cuts.len(), 1);
        assert_eq!(cuts[0].span_basis(), &lattice::identity(2)[..]);
        assert!(cutting_systems(&c, &positive_expression(&c, &r(&[0, 1])).unwrap()).is_empty());
        assert!(cutting_count_bound_check(&c, &positive_expression(&c, &r(&[2, 1])).unwrap()));
    }

    #[test]
    fn d4_central_root_is_cut_three_times() {
        let c = bundled::load("d4").unwrap();
        let beta = r(&[1, 1, 1, 1]);
        let cuts = cutting_systems(&c, &positive_expression(&c, &beta).unwrap());
        assert_eq!(cuts.len(), 3);
        for i in 1..4 {
            let ai = c.simple_root(i);
            let expected = RankTwoSystem::spanned_by(&ai, &beta).unwrap();
            assert!(cuts.contains(&expected));
            assert!(expected.contains(&beta.sub(&ai)));
        }
    }

    #[test]
    fn independent_of_expression() {
        let c = bundled::load("d4").unwrap();
        let beta = r(&[2, 1, 1, 1]);
        let reference = cutting_systems(&c, &positive_expression(&c, &beta).unwrap());
        for e in crate::roots::all_positive_expressions(&c, &beta, 10).unwrap() {
            assert_eq!(cutting_systems(&c, &e), reference);
        }
    }

    #[test]
    fn equality_is_by_plane() {
        let a = RankTwoSystem::spanned_by(&r(&[1, 0, 0]), &r(&[0, 1, 0])).unwrap();
        let b = RankTwoSystem::spanned_by(&r(&[1, 1, 0]), &r(&[2, 1, 0])).unwrap();
        assert_eq!(a, b);
        assert!(RankTwoSystem::spanned_by(&r(&[1, 1]), &r(&[2, 2])).is_none());
    }

    #[test]
    fn recursion_and_bound_on_test_data() {
        let mut data: Vec<CartanData> = ["b2", "a3", "d4"].iter().map(|n| bundled::load(n).unwrap()).collect();
        for (x, y, z) in [(2, 2, 2), (2, 2, 3), (3, 2, 2)] {
            data.push(bundled::rank4_family(x, y, z).unwrap());
        }
        for c in &data {
            for (beta, _) in positive_roots_up_to_depth(c, 5) {
                let e = positive_expression(c, &beta).unwrap();
                assert!(cutting_count_bound_check(c, &e));
                assert!(cutting_recursion_holds(c, &e), "{} {beta}", c.name());
                let cuts = cutting_systems(c, &e);
                assert!(e.deltas(c).iter().all(|d| cuts.iter().any(|s| s.contains(d))));
                for delta in e.deltas(c) {
                    // β = (δ + (−tδ)) / (β^∨, δ) with both summands positive roots.
                    let partner = inversion_involution(c, &beta, &delta).unwrap();
                    assert_ne!(partner, beta);
                    assert!(2 * c.bilinear(&beta, &delta) > 0);
                }
            }
        }
    }
}
