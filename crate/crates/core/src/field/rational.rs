use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, RngCore};

use super::{Field, Tower};
use crate::error::{Error, Result};

/// The rational numbers, viewed as a tower of height one.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elt = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

fn only_degree_one(d: usize) -> Result<()> {
    if d == 1 {
        Ok(())
    } else {
        Err(Error::Field(format!("the rational backend has no subfield of degree {d}")))
    }
}

impl Tower for Rationals {
    fn characteristic(&self) -> Option<u64> {
        None
    }

    fn degree(&self) -> usize {
        1
    }

    fn frobenius(&self, x: &BigRational, _k: usize) -> BigRational {
        x.clone()
    }

    fn generator(&self, d: usize) -> Result<BigRational> {
        only_degree_one(d)?;
        Ok(BigRational::one())
    }

    fn ambient_coords(&self, x: &BigRational) -> Vec<BigRational> {
        vec![x.clone()]
    }

    fn subfield_coords(&self, d: usize, x: &BigRational) -> Result<Vec<BigRational>> {
        only_degree_one(d)?;
        Ok(vec![x.clone()])
    }

    fn subfield_order(&self, _d: usize) -> Option<u128> {
        None
    }

    fn subfield_elements(&self, _d: usize) -> Option<Vec<BigRational>> {
        None
    }

    fn random_in(&self, _d: usize, rng: &mut dyn RngCore) -> BigRational {
        self.from_i64(rng.gen_range(-9..=9))
    }

    fn elt_to_json(&self, x: &BigRational) -> serde_json::Value {
        serde_json::json!([x.to_string()])
    }

    fn elt_from_json(&self, v: &serde_json::Value) -> Result<BigRational> {
        let bad = || Error::InvalidInput(format!("rational element {v} must be [\"p/q\"] or [int]"));
        let arr = v.as_array().filter(|a| a.len() == 1).ok_or_else(bad)?;
        match &arr[0] {
            serde_json::Value::Number(n) => Ok(self.from_i64(n.as_i64().ok_or_else(bad)?)),
            serde_json::Value::String(s) => {
                let r: BigRational = s.parse().map_err(|_| bad())?;
                if r.denom().is_negative() {
                    return Err(bad());
                }
                Ok(r)
            }
            _ => Err(bad()),
        }
    }
}
