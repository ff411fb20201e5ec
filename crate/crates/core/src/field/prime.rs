use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::Rng;

use super::{is_prime, rational_mod_p, Coeff, Field, FieldSpec};
use crate::error::{Error, Result};

/// The prime field `F_p`, elements stored as residues in `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Largest supported characteristic; keeps products of residues in `u64`.
    pub const MAX_P: u64 = 1 << 31;

    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrimeModulus(p));
        }
        if p >= Self::MAX_P {
            return Err(Error::UnsupportedField(format!(
                "characteristic {p} exceeds 2^31"
            )));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "{a} not invertible mod {p}");
    t0.rem_euclid(p as i128) as u64
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime { p: self.p }
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| inv_mod(*a, self.p))
    }

    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn from_bigint(&self, n: &BigInt) -> u64 {
        let r = n.mod_floor(&BigInt::from(self.p));
        u64::try_from(r).expect("residue fits")
    }

    fn from_coeff(&self, c: &Coeff) -> Result<u64> {
        match c.0.as_slice() {
            [] => Ok(0),
            [a] => rational_mod_p(a, self.p),
            _ => Err(Error::CoefficientNotInField(c.to_string())),
        }
    }

    fn to_coeff(&self, a: &u64) -> Coeff {
        Coeff::constant(BigRational::from_integer(BigInt::from(*a)))
    }

    fn size(&self) -> Option<u64> {
        Some(self.p)
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn element(&self, index: u64) -> u64 {
        index % self.p
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.random_range(0..self.p)
    }

    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_mod_five() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.mul(&3, &2), 1);
        assert_eq!(f.inv(&2), Some(3));
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.neg(&1), 4);
        assert_eq!(f.sub(&1, &3), 3);
        assert_eq!(f.from_i64(-1), 4);
    }

    #[test]
    fn rejects_composites() {
        assert_eq!(PrimeField::new(9), Err(Error::NonPrimeModulus(9)));
        assert_eq!(PrimeField::new(1), Err(Error::NonPrimeModulus(1)));
    }

    #[test]
    fn inverse_table() {
        let f = PrimeField::new(101).unwrap();
        for a in 1..101 {
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
        }
    }
}
