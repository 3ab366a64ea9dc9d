//! Bundled demonstrations: each returns JSON plus a one-paragraph summary.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::cartan::{bundled, CartanData, Root};
use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::{det, IVec};
use crate::reflection::{apply_signed_word, bricks_of_dimension};
use crate::roots::{inversions, positive_expression, PositiveExpression, SignedWord};
use crate::shards::{arrangement_regions, methods_agree, shards_direct, shards_recursive};
use crate::species::Species;
use crate::stability::{bijection_check, stab_recursive, StabMethod, StabResult};

pub const NAMES: [&str; 4] = ["b2-six-shards", "d4-fourteen", "rank6-counterexample", "cartan-dependence"];

/// The signed word of the bundled rank-6 brick.
pub const RANK6_WORD: &str = "S6 ; 5+ 4+ 2+ 1- 4- 5- 3+ 4+ 2+ 1-";

/// The reduced word `s1 s2 s4 s1 s3 s4 s2 s3`, 0-based.
pub const DEPENDENCE_WORD: [usize; 8] = [0, 1, 3, 0, 2, 3, 1, 2];

#[derive(Clone, Debug)]
pub struct Demo {
    pub name: &'static str,
    pub json: Value,
    pub summary: String,
    /// Whether every check inside the demo passed.
    pub ok: bool,
}

pub fn run(name: &str) -> Result<Demo> {
    match name {
        "b2-six-shards" => b2_six_shards(),
        "d4-fourteen" => d4_fourteen(),
        "rank6-counterexample" => rank6_counterexample(),
        "cartan-dependence" => {
            let a = cartan_dependence(3, 2, 2)?;
            let b = cartan_dependence(2, 2, 3)?;
            let opposite = a.cross_ratio.as_ref().zip(b.cross_ratio.as_ref()).is_some_and(|(p, q)| p.signum() == -q.signum());
            let ok = a.determinant_matches && b.determinant_matches && opposite;
            Ok(Demo {
                name: "cartan-dependence",
                summary: format!(
                    "(3,2,2): det {} cross ratio {}; (2,2,3): det {} cross ratio {}; opposite signs: {opposite}",
                    a.determinant,
                    show(&a.cross_ratio),
                    b.determinant,
                    show(&b.cross_ratio)
                ),
                json: json!({ "cases": [a.to_json(), b.to_json()], "opposite_signs": opposite }),
                ok,
            })
        }
        _ => Err(Error::InvalidInput(format!("unknown demo {name:?}; expected one of {}", NAMES.join(", ")))),
    }
}

fn show(x: &Option<BigRational>) -> String {
    x.as_ref().map_or_else(|| "undefined".into(), ToString::to_string)
}

fn b2_six_shards() -> Result<Demo> {
    let c = bundled::load("b2").expect("bundled");
    let s = Species::finite(&c)?;
    let mut rows = Vec::new();
    let mut ok = true;
    let mut total = 0;
    for root in ["1,0", "0,1", "1,1", "2,1"] {
        let beta = c.parse_root(root)?;
        let direct = shards_direct(&c, &beta)?;
        let rec = shards_recursive(&c, &positive_expression(&c, &beta)?);
        let bricks = bricks_of_dimension(&s, &beta)?.bricks.len();
        let bij = bijection_check(&s, &beta)?;
        let agree = methods_agree(&direct, &rec.shards);
        ok &= agree && bij.holds && bricks == direct.len();
        total += direct.len();
        rows.push(json!({
            "root": root,
            "shards": direct.len(),
            "methods_agree": agree,
            "bricks": bricks,
            "bijection": bij.holds,
            "cones": direct.iter().map(|sh| sh.cone.to_json()).collect::<Vec<_>>(),
        }));
    }
    ok &= total == 6;
    Ok(Demo {
        name: "b2-six-shards",
        summary: format!("B2: {total} shards over the four positive roots; bricks and shard modules match"),
        json: json!({ "roots": rows, "total_shards": total }),
        ok,
    })
}

/// The expression `s1 s2 s3 s4 α1` for `2α1 + α2 + α3 + α4` in D4.
pub fn d4_reference_expression(c: &CartanData) -> Result<PositiveExpression> {
    PositiveExpression::new(c, 0, vec![3, 2, 1, 0])
}

fn d4_fourteen() -> Result<Demo> {
    let c = bundled::load("d4").expect("bundled");
    let s = Species::finite(&c)?;
    let small = c.parse_root("1,1,1,1")?;
    let big = c.parse_root("2,1,1,1")?;
    let n_small = shards_direct(&c, &small)?.len();
    let direct = shards_direct(&c, &big)?;
    let expr = d4_reference_expression(&c)?;
    let rec = shards_recursive(&c, &expr);
    let greedy = positive_expression(&c, &big)?;
    let rec_greedy = shards_recursive(&c, &greedy);
    let bij = bijection_check(&s, &big)?;
    let ok = n_small == 8
        && direct.len() == 14
        && methods_agree(&direct, &rec.shards)
        && rec.sign_vectors == 16
        && rec.degenerate == 2
        && bij.holds;
    Ok(Demo {
        name: "d4-fourteen",
        summary: format!(
            "D4: {n_small} shards of 1,1,1,1 and {} of 2,1,1,1; {} of {} sign vectors degenerate along {expr}; {} shard modules",
            direct.len(),
            rec.degenerate,
            rec.sign_vectors,
            bij.shard_modules
        ),
        json: json!({
            "shards_1111": n_small,
            "shards_2111": direct.len(),
            "expression": expr.to_string(),
            "sign_vectors": rec.sign_vectors,
            "degenerate": rec.degenerate,
            "greedy_expression": greedy.to_string(),
            "greedy_degenerate": rec_greedy.degenerate,
            "shard_modules": bij.shard_modules,
            "bijection": bij.holds,
            "shards": rec.shards.iter().map(|sh| sh.to_json()).collect::<Vec<_>>(),
        }),
        ok,
    })
}

fn rank6_counterexample() -> Result<Demo> {
    let c = bundled::load("rank6").expect("bundled");
    let s = Species::finite(&c)?;
    let w: SignedWord = RANK6_WORD.parse()?;
    let m = apply_signed_word(&s, &w)?;
    let brick = s.is_brick(&m);
    let (h0, h1, _) = s.hom_ext_dims(&m, &m);
    let cone = stab_recursive(&s, &w)?;
    let result = StabResult::new(w.clone(), m.dim_vector(), cone, StabMethod::Recursive);
    let expected: Vec<IVec> = [[0, 0, -1, 0, 1, 0], [0, 0, 1, -1, 1, 0]]
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let rays_match = result.cone == Cone::from_generators(6, Vec::new(), expected)?;
    let ok = m.dims() == [3, 3, 2, 4, 2, 1] && brick.value && h1 == 0 && rays_match && !result.is_shard_module;
    Ok(Demo {
        name: "rank6-counterexample",
        summary: format!(
            "rank 6: {w} has dims {}, brick {}, h1 {h1}, Stab of dimension {} (shard module: {})",
            m.dim_vector(),
            brick.value,
            result.cone.dim(),
            result.is_shard_module
        ),
        json: json!({
            "word": w.to_string(),
            "dims": m.dim_vector().to_string(),
            "is_brick": brick,
            "end_dim": h0,
            "ext1_dim": h1,
            "stab": result.to_json(),
            "rays_match": rays_match,
        }),
        ok,
    })
}

/// The rank-4 example showing that shards depend on the Cartan matrix.
#[derive(Clone, Debug)]
pub struct CartanDependence {
    pub x: i64,
    pub y: i64,
    pub z: i64,
    pub roots: Vec<Root>,
    pub determinant: BigInt,
    /// `y(x+z)(x−z)`.
    pub expected_determinant: BigInt,
    pub determinant_matches: bool,
    /// `D(1,2,3,5) D(1,2,7,8) / (D(1,2,3,8) D(1,2,5,7))`, `None` if the denominator vanishes.
    pub cross_ratio: Option<BigRational>,
    /// The closed form `y(x+z)(x−z) / ((z²−1) x² y²)`.
    pub stated_cross_ratio: BigRational,
    pub matches_stated: bool,
    /// `(x²−z²) / ((z²−1) x²)`.
    pub corrected_cross_ratio: BigRational,
    pub matches_corrected: bool,
    /// Full-dimensional regions of the arrangement `{γ_k^⊥}`.
    pub regions: usize,
}

impl CartanDependence {
    pub fn to_json(&self) -> Value {
        json!({
            "x": self.x,
            "y": self.y,
            "z": self.z,
            "roots": self.roots.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "determinant": self.determinant.to_string(),
            "expected_determinant": self.expected_determinant.to_string(),
            "determinant_matches": self.determinant_matches,
            "cross_ratio": self.cross_ratio.as_ref().map(ToString::to_string),
            "stated_cross_ratio": self.stated_cross_ratio.to_string(),
            "matches_stated": self.matches_stated,
            "corrected_cross_ratio": self.corrected_cross_ratio.to_string(),
            "matches_corrected": self.matches_corrected,
            "regions": self.regions,
        })
    }
}

pub fn cartan_dependence(x: i64, y: i64, z: i64) -> Result<CartanDependence> {
    if x < 2 || y < 2 || z < 2 {
        return Err(Error::InvalidInput(format!("x, y, z must be at least 2, got ({x},{y},{z})")));
    }
    let c = bundled::rank4_family(x, y, z)?;
    let roots = inversions(&c, &DEPENDENCE_WORD)?;
    let g: Vec<IVec> = roots.iter().map(Root::to_bigint).collect();
    let d = |a: usize, b: usize, p: usize, q: usize| det(&[g[a - 1].clone(), g[b - 1].clone(), g[p - 1].clone(), g[q - 1].clone()]);
    let determinant = d(1, 2, 7, 8);
    let (bx, by, bz) = (BigInt::from(x), BigInt::from(y), BigInt::from(z));
    let expected_determinant = &by * (&bx + &bz) * (&bx - &bz);
    let num = d(1, 2, 3, 5) * &determinant;
    let den = d(1, 2, 3, 8) * d(1, 2, 5, 7);
    let cross_ratio = (!den.is_zero()).then(|| BigRational::new(num, den));
    let z2m1 = &bz * &bz - 1;
    let stated_cross_ratio = BigRational::new(expected_determinant.clone(), &z2m1 * &bx * &bx * &by * &by);
    let corrected_cross_ratio = BigRational::new(&bx * &bx - &bz * &bz, &z2m1 * &bx * &bx);
    let regions = arrangement_regions(Cone::full(4), &g).len();
    Ok(CartanDependence {
        x,
        y,
        z,
        determinant_matches: determinant == expected_determinant,
        matches_stated: cross_ratio.as_ref() == Some(&stated_cross_ratio),
        matches_corrected: cross_ratio.as_ref() == Some(&corrected_cross_ratio),
        roots,
        determinant,
        expected_determinant,
        cross_ratio,
        stated_cross_ratio,
        corrected_cross_ratio,
        regions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inversions_match_closed_forms() {
        for (x, y, z) in [(2, 2, 2), (3, 2, 2), (2, 3, 4), (4, 2, 3)] {
            let r = cartan_dependence(x, y, z).unwrap();
            let expected = [
                [1, 0, 0, 0],
                [0, 1, 0, 0],
                [x, y, 0, 1],
                [-1 + x * x, x * y, 0, x],
                [x * z, y * z, 1, z],
                [-2 * x + x * x * x + x * z * z, -y + x * x * y + y * z * z, z, -1 + x * x + z * z],
                [-x * y + x * x * x * y + x * y * z * z, -1 + x * x * y * y + y * y * z * z, y * z, x * x * y + y * z * z],
                [-3 * x * z + x * x * x * z + x * z * z * z, -2 * y * z + x * x * y * z + y * z * z * z, -1 + z * z, -2 * z + x * x * z + z * z * z],
            ];
            for (g, e) in r.roots.iter().zip(expected) {
                assert_eq!(g.coords(), &e);
            }
        }
    }

    #[test]
    fn determinant_and_cross_ratio() {
        let r = cartan_dependence(2, 2, 2).unwrap();
        assert!(r.determinant.is_zero());
        let r = cartan_dependence(3, 2, 2).unwrap();
        assert_eq!(r.determinant, BigInt::from(10));
        assert_eq!(r.stated_cross_ratio, BigRational::new(5.into(), 54.into()));
        assert_eq!(r.cross_ratio, Some(BigRational::new(5.into(), 27.into())));
        assert!(r.matches_corrected && !r.matches_stated);
        assert!(cartan_dependence(1, 2, 2).is_err());
    }

    #[test]
    fn demos_pass() {
        for name in NAMES {
            let d = run(name).unwrap();
            assert!(d.ok, "{name}: {}", d.summary);
        }
        assert!(run("nope").is_err());
    }
}
