use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::{Coeff, Field, FieldSpec};
use crate::error::{Error, Result};

/// The rational numbers with arbitrary-precision numerators and denominators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
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

    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }

    fn from_coeff(&self, c: &Coeff) -> Result<BigRational> {
        match c.0.as_slice() {
            [] => Ok(BigRational::zero()),
            [a] => Ok(a.clone()),
            _ => Err(Error::CoefficientNotInField(c.to_string())),
        }
    }

    fn to_coeff(&self, a: &BigRational) -> Coeff {
        Coeff::constant(a.clone())
    }

    fn size(&self) -> Option<u64> {
        None
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn element(&self, index: u64) -> BigRational {
        let k = index.div_ceil(2) as i64;
        let v = if index % 2 == 1 { k } else { -k };
        BigRational::from_integer(BigInt::from(v))
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        BigRational::from_integer(BigInt::from(rng.random_range(-9i64..=9)))
    }

    fn render(&self, a: &BigRational) -> String {
        if a.is_negative() {
            format!("-{}", -a)
        } else {
            a.to_string()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_two_thirds() {
        let q = Rationals;
        let a = BigRational::new(2.into(), 3.into());
        assert_eq!(q.inv(&a).unwrap(), BigRational::new(3.into(), 2.into()));
        assert_eq!(q.render(&q.neg(&a)), "-2/3");
    }

    #[test]
    fn enumeration_zigzags() {
        let q = Rationals;
        let v: Vec<String> = (0..5).map(|i| q.render(&q.element(i))).collect();
        assert_eq!(v, ["0", "1", "-1", "2", "-2"]);
    }
}
