use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shard_forge::cartan::bundled;
use shard_forge::field::{Field, GaloisField};
use shard_forge::linalg::Matrix;
use shard_forge::reflection::{bricks_along, bricks_of_dimension, sigma_minus, sigma_plus};
use shard_forge::roots::{all_positive_expressions, positive_roots_up_to_depth};
use shard_forge::shards::{shards_direct, shards_recursive};
use shard_forge::species::{euler_trials, random_module, Species};
use shard_forge::stability::stab_of_word;
use shard_forge::{CartanData, Cone, Root};

fn finite(name: &str) -> Species<GaloisField> {
    Species::finite(&bundled::load(name).unwrap()).unwrap()
}

#[test]
fn d4_shards_tile_the_hyperplane() {
    let c = bundled::load("d4").unwrap();
    let beta: Root = "2,1,1,1".parse().unwrap();
    let shards = shards_direct(&c, &beta).unwrap();
    for (a, sa) in shards.iter().enumerate() {
        for sb in &shards[a + 1..] {
            assert!(sa.cone.intersect(&sb.cone).dim() < 3);
        }
    }
    let hyper = Cone::hyperplane(&beta).unwrap();
    let basis = hyper.lineality().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        use rand::Rng;
        let coeffs: Vec<i64> = (0..basis.len()).map(|_| rng.gen_range(-20..=20)).collect();
        let p: Vec<BigInt> = (0..4)
            .map(|k| basis.iter().zip(&coeffs).map(|(b, &x)| &b[k] * BigInt::from(x)).sum())
            .collect();
        assert!(shards.iter().any(|s| s.cone.contains(&p)));
    }
}

#[test]
fn stab_lies_in_the_hyperplane() {
    for name in ["b2", "a3", "d4"] {
        let s = finite(name);
        for (beta, _) in positive_roots_up_to_depth(s.cartan(), 4) {
            for b in bricks_of_dimension(&s, &beta).unwrap().bricks {
                let cone = stab_of_word(s.cartan(), &b.word).unwrap();
                assert!(cone.is_subset_of(&Cone::hyperplane(&beta).unwrap()));
                assert_eq!(s.hom_space(&b.module, &b.module).dim(), s.cartan().d_beta(&beta).unwrap());
            }
        }
    }
}

#[test]
fn sign_vector_counts_across_expressions() {
    let s = finite("d4");
    let beta: Root = "2,1,1,1".parse().unwrap();
    let exprs = all_positive_expressions(s.cartan(), &beta, 100).unwrap();
    assert_eq!(exprs.len(), 12);
    let mut counts = Vec::new();
    for e in &exprs {
        let search = bricks_along(&s, e).unwrap();
        assert_eq!(search.bricks.len(), 14, "{e}");
        let rec = shards_recursive(s.cartan(), e);
        assert_eq!(rec.shards.len(), 14);
        counts.push((search.well_defined, rec.degenerate));
    }
    // Every sign vector with a codimension-one cone gives a distinct brick, so
    // well-defined products and nondegenerate sign vectors coincide.
    assert!(counts.iter().all(|&(w, d)| w + d == 16), "{counts:?}");
}

#[test]
fn brick_counts_do_not_depend_on_the_prime() {
    let base = bundled::load("b2").unwrap();
    for p in [2, 3, 5, 7] {
        let s = Species::finite(&base.clone().with_prime(Some(p)).unwrap()).unwrap();
        let counts: Vec<usize> = ["1,0", "0,1", "1,1", "2,1"]
            .iter()
            .map(|r| bricks_of_dimension(&s, &r.parse().unwrap()).unwrap().bricks.len())
            .collect();
        assert_eq!(counts, [1, 1, 2, 2], "p = {p}");
    }
    let d4 = bundled::load("d4").unwrap();
    for p in [2, 5] {
        let s = Species::finite(&d4.clone().with_prime(Some(p)).unwrap()).unwrap();
        assert_eq!(bricks_of_dimension(&s, &"2,1,1,1".parse().unwrap()).unwrap().bricks.len(), 14, "p = {p}");
    }
}

#[test]
fn rational_and_finite_backends_agree_on_integral_modules() {
    let c = bundled::load("a3").unwrap().with_prime(Some(5)).unwrap();
    let fp = Species::finite(&c).unwrap();
    let q = Species::rational(&c.clone().with_prime(None).unwrap()).unwrap();
    let build = |entries: [(usize, usize, i64); 3]| {
        let mut a = fp.zero_module(vec![1, 1, 1]);
        let mut b = q.zero_module(vec![1, 1, 1]);
        for (j, i, v) in entries {
            a.set_map(j, i, Matrix::from_rows(vec![vec![fp.field().from_i64(v)]], 1));
            b.set_map(j, i, Matrix::from_rows(vec![vec![q.field().from_i64(v)]], 1));
        }
        (a, b)
    };
    let (m1, n1) = build([(1, 0, 1), (2, 1, 2), (0, 1, 0)]);
    let (m2, n2) = build([(0, 1, 1), (1, 2, 3), (2, 1, 0)]);
    assert_eq!(fp.hom_ext_dims(&m1, &m2), q.hom_ext_dims(&n1, &n2));
    assert_eq!(fp.hom_ext_dims(&m1, &m1), q.hom_ext_dims(&n1, &n1));
}

fn mixed() -> Vec<CartanData> {
    vec![
        bundled::load("b2").unwrap(),
        CartanData::new(vec![vec![2, -3], vec![-1, 2]], vec![1, 3], Some(2)).unwrap(),
        CartanData::new(vec![vec![2, -1, 0], vec![-2, 2, -1], vec![0, -1, 2]], vec![2, 1, 1], Some(3)).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn euler_identity_holds(which in 0usize..3, seed in any::<u64>()) {
        let s = Species::finite(&mixed()[which]).unwrap();
        let report = euler_trials(&s, 3, seed, 2);
        prop_assert!(report.failures.is_empty(), "{:?}", report.failures);
    }

    #[test]
    fn reflection_round_trips(which in 0usize..3, seed in any::<u64>()) {
        let s = Species::finite(&mixed()[which]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_module(&s, &mut rng, 2);
        for i in 0..s.rank() {
            if let Ok(r) = sigma_plus(&s, &m, i) {
                prop_assert!(s.check_preprojective(&r));
                prop_assert!(s.is_isomorphic(&sigma_minus(&s, &r, i).unwrap(), &m).value);
            }
            if let Ok(r) = sigma_minus(&s, &m, i) {
                prop_assert!(s.is_isomorphic(&sigma_plus(&s, &r, i).unwrap(), &m).value);
            }
        }
    }
}
