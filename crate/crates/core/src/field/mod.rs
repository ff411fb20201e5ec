//! Exact scalar fields.
//!
//! Three kinds of coefficient field are supported: prime fields `F_p`,
//! small extension fields `GF(p^n) = F_p[a]/(modulus)` with `n <= 4`, and the
//! rationals. Every other part of the crate is generic over [`Field`], so the
//! field is fixed at the type level once an algebra has been built; runtime
//! selection from a [`FieldSpec`] goes through [`with_field`].

use std::fmt::{self, Debug};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

mod extension;
pub mod poly;
mod prime;
mod rational;

pub use extension::ExtensionField;
pub use prime::PrimeField;
pub use rational::Rationals;

/// Description of a coefficient field, as written in an algebra file.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldSpec {
    Prime {
        p: u64,
    },
    /// `modulus` lists the coefficients of a monic polynomial from the
    /// constant term up; `generator` is the symbol naming its root.
    Extension {
        p: u64,
        modulus: Vec<u64>,
        generator: String,
    },
    Rationals,
}

impl FieldSpec {
    pub fn generator(&self) -> Option<&str> {
        match self {
            FieldSpec::Extension { generator, .. } => Some(generator),
            _ => None,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime { p } => write!(f, "GF({p})"),
            FieldSpec::Extension {
                p,
                modulus,
                generator,
            } => {
                let n = modulus.len() - 1;
                write!(f, "GF({p}^{n}; {})", render_int_poly(modulus, generator))
            }
            FieldSpec::Rationals => write!(f, "QQ"),
        }
    }
}

fn render_int_poly(coeffs: &[u64], var: &str) -> String {
    let mut terms = Vec::new();
    for (k, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        terms.push(match (c, k) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}*{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// A scalar written in an input file: a polynomial in the field generator
/// with rational coefficients, constant term first. For prime fields and the
/// rationals only the constant term may be nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Coeff(pub Vec<BigRational>);

impl Coeff {
    pub fn zero() -> Self {
        Coeff(Vec::new())
    }

    pub fn constant(c: BigRational) -> Self {
        Coeff(vec![c]).normalized()
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn generator() -> Self {
        Coeff(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    fn normalized(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        let n = self.0.len().max(other.0.len());
        let zero = BigRational::zero();
        Coeff(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&zero) + other.0.get(i).unwrap_or(&zero))
                .collect(),
        )
        .normalized()
    }

    pub fn neg(&self) -> Coeff {
        Coeff(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        if self.is_zero() || other.is_zero() {
            return Coeff::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Coeff(out).normalized()
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => c.to_string(),
                1 => format!("({c})*g"),
                _ => format!("({c})*g^{k}"),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Exact field arithmetic. Elements are plain values; the field handle carries
/// whatever parameters (characteristic, modulus) the operations need.
pub trait Field: Clone + Debug + Send + Sync + 'static {
    type Elem: Clone + Eq + Hash + Debug + Send + Sync;

    fn spec(&self) -> FieldSpec;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` exactly when `a` is zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    fn from_coeff(&self, c: &Coeff) -> Result<Self::Elem>;
    fn to_coeff(&self, a: &Self::Elem) -> Coeff;

    /// Number of elements, `None` for infinite fields.
    fn size(&self) -> Option<u64>;
    /// `0` for the rationals.
    fn characteristic(&self) -> u64;
    /// Enumerates the field: `element(0) == zero`, `element(1) == one`, and
    /// for finite fields indices `0..size` hit every element exactly once.
    /// The rationals enumerate the integers `0, 1, -1, 2, -2, ...`.
    fn element(&self, index: u64) -> Self::Elem;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    /// Canonical text form, parseable back by the expression parser.
    fn render(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }

    fn pow(&self, a: &Self::Elem, mut e: u128) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// All nonzero elements with first element one, used to enumerate
    /// projective points. Finite fields only.
    fn elements(&self) -> Vec<Self::Elem> {
        let q = self.size().expect("finite field");
        (0..q).map(|i| self.element(i)).collect()
    }
}

/// Runs a generic computation for whichever field a [`FieldSpec`] describes.
pub trait FieldVisitor {
    type Output;
    fn visit<F: Field>(self, field: F) -> Self::Output;
}

pub fn with_field<V: FieldVisitor>(spec: &FieldSpec, visitor: V) -> Result<V::Output> {
    Ok(match spec {
        FieldSpec::Prime { p } => visitor.visit(PrimeField::new(*p)?),
        FieldSpec::Extension {
            p,
            modulus,
            generator,
        } => visitor.visit(ExtensionField::new(*p, modulus.clone(), generator.clone())?),
        FieldSpec::Rationals => visitor.visit(Rationals),
    })
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Reduces a rational into `F_p`; fails if `p` divides the denominator.
pub(crate) fn rational_mod_p(c: &BigRational, p: u64) -> Result<u64> {
    let pb = BigInt::from(p);
    let num = mod_floor(c.numer(), &pb);
    let den = mod_floor(c.denom(), &pb);
    if den == 0 {
        return Err(Error::CoefficientNotInField(c.to_string()));
    }
    Ok(num * prime::inv_mod(den, p) % p)
}

fn mod_floor(a: &BigInt, m: &BigInt) -> u64 {
    use num_integer::Integer;
    let r = a.mod_floor(m);
    u64::try_from(r).expect("residue fits in u64")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_detection() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn spec_display() {
        let spec = FieldSpec::Extension {
            p: 3,
            modulus: vec![1, 0, 1],
            generator: "a".into(),
        };
        assert_eq!(spec.to_string(), "GF(3^2; a^2 + 1)");
        assert_eq!(FieldSpec::Prime { p: 5 }.to_string(), "GF(5)");
    }

    #[test]
    fn rational_reduction() {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(rational_mod_p(&half, 5).unwrap(), 3);
        assert!(rational_mod_p(&half, 2).is_err());
        let neg = BigRational::from_integer(BigInt::from(-1));
        assert_eq!(rational_mod_p(&neg, 7).unwrap(), 6);
    }
}
