use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;

use super::{is_prime, rational_mod_p, render_int_poly, Coeff, Field, FieldSpec};
use crate::error::{Error, Result};

const MAX_DEGREE: usize = 4;

/// `GF(p^n) = F_p[a]/(modulus)` for `2 <= n <= 4`.
///
/// An element is encoded as the integer `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`
/// of its coefficient vector, which doubles as its enumeration index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtensionField {
    p: u64,
    modulus: Vec<u64>,
    generator: String,
    order: u64,
}

impl ExtensionField {
    pub fn new(p: u64, modulus: Vec<u64>, generator: impl Into<String>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrimeModulus(p));
        }
        let generator = generator.into();
        let n = modulus.len().saturating_sub(1);
        if !(2..=MAX_DEGREE).contains(&n) {
            return Err(Error::InvalidModulus(format!(
                "extension degree must be between 2 and {MAX_DEGREE}, got {n}"
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidModulus(
                "coefficients must be reduced mod p".into(),
            ));
        }
        if modulus[n] != 1 {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        let order = (p as u128).pow(n as u32);
        if order > u32::MAX as u128 {
            return Err(Error::UnsupportedField(format!(
                "GF({p}^{n}) has more than 2^32 elements"
            )));
        }
        if !is_irreducible_small(&modulus, p) {
            return Err(Error::ReducibleModulus(render_int_poly(&modulus, &generator)));
        }
        Ok(ExtensionField {
            p,
            modulus,
            generator,
            order: order as u64,
        })
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn generator_name(&self) -> &str {
        &self.generator
    }

    fn decode(&self, mut a: u64) -> [u64; MAX_DEGREE] {
        let mut c = [0u64; MAX_DEGREE];
        for slot in c.iter_mut().take(self.degree()) {
            *slot = a % self.p;
            a /= self.p;
        }
        c
    }

    fn encode(&self, c: &[u64]) -> u64 {
        c[..self.degree()]
            .iter()
            .rev()
            .fold(0u64, |acc, &x| acc * self.p + x)
    }
}

/// Irreducibility for degree <= 4: no roots, and for degree 4 no monic
/// quadratic factor.
fn is_irreducible_small(modulus: &[u64], p: u64) -> bool {
    let n = modulus.len() - 1;
    let eval = |x: u64| {
        modulus
            .iter()
            .rev()
            .fold(0u64, |acc, &c| (acc * x + c) % p)
    };
    if (0..p).any(|x| eval(x) == 0) {
        return false;
    }
    if n == 4 {
        for b in 0..p {
            for c in 0..p {
                if divides_quadratic(modulus, b, c, p) {
                    return false;
                }
            }
        }
    }
    true
}

fn divides_quadratic(poly: &[u64], b: u64, c: u64, p: u64) -> bool {
    // long division by x^2 + b x + c
    let mut r: Vec<u64> = poly.to_vec();
    for k in (2..r.len()).rev() {
        let lead = r[k];
        if lead == 0 {
            continue;
        }
        r[k] = 0;
        r[k - 1] = (r[k - 1] + p - lead * b % p) % p;
        r[k - 2] = (r[k - 2] + p - lead * c % p) % p;
    }
    r[0] == 0 && r[1] == 0
}

impl Field for ExtensionField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Extension {
            p: self.p,
            modulus: self.modulus.clone(),
            generator: self.generator.clone(),
        }
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let (x, y) = (self.decode(*a), self.decode(*b));
        let s: Vec<u64> = (0..self.degree()).map(|i| (x[i] + y[i]) % self.p).collect();
        self.encode(&s)
    }

    fn neg(&self, a: &u64) -> u64 {
        let x = self.decode(*a);
        let s: Vec<u64> = (0..self.degree())
            .map(|i| (self.p - x[i]) % self.p)
            .collect();
        self.encode(&s)
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        let n = self.degree();
        let (x, y) = (self.decode(*a), self.decode(*b));
        let mut prod = [0u64; 2 * MAX_DEGREE - 1];
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % self.p;
            }
        }
        for k in (n..2 * n - 1).rev() {
            let lead = prod[k];
            if lead == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..n {
                let sub = lead * self.modulus[i] % self.p;
                prod[k - n + i] = (prod[k - n + i] + self.p - sub) % self.p;
            }
        }
        self.encode(&prod)
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| self.pow(a, self.order as u128 - 2))
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn from_bigint(&self, n: &BigInt) -> u64 {
        let r = n.mod_floor(&BigInt::from(self.p));
        u64::try_from(r).expect("residue fits")
    }

    fn from_coeff(&self, c: &Coeff) -> Result<u64> {
        // Horner in the generator keeps higher powers reduced.
        let gen = self.p; // the generator has coefficient vector (0, 1, 0, ..)
        let mut acc = 0u64;
        for r in c.0.iter().rev() {
            acc = self.mul(&acc, &gen);
            acc = self.add(&acc, &rational_mod_p(r, self.p)?);
        }
        Ok(acc)
    }

    fn to_coeff(&self, a: &u64) -> Coeff {
        use num_rational::BigRational;
        let c = self.decode(*a);
        let mut out = Coeff(
            c[..self.degree()]
                .iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect(),
        );
        while out.0.last().is_some_and(|x| *x == BigRational::from_integer(0.into())) {
            out.0.pop();
        }
        out
    }

    fn size(&self) -> Option<u64> {
        Some(self.order)
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn element(&self, index: u64) -> u64 {
        index % self.order
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.random_range(0..self.order)
    }

    fn render(&self, a: &u64) -> String {
        let c = self.decode(*a);
        render_int_poly(&c[..self.degree()], &self.generator)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf9() -> ExtensionField {
        ExtensionField::new(3, vec![1, 0, 1], "a").unwrap()
    }

    #[test]
    fn square_of_generator_is_minus_one() {
        let f = gf9();
        let a = f.from_coeff(&Coeff::generator()).unwrap();
        assert_eq!(f.mul(&a, &a), f.from_i64(-1));
        assert_eq!(f.from_i64(-1), 2);
    }

    #[test]
    fn enumeration_is_complete() {
        let f = gf9();
        let mut all: Vec<u64> = (0..9).map(|i| f.element(i)).collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 9);
        for x in &all {
            if *x != 0 {
                assert_eq!(f.mul(x, &f.inv(x).unwrap()), 1);
            }
        }
    }

    #[test]
    fn rejects_reducible_moduli() {
        // x^2 + 2 = (x+1)(x+2) over F_3
        assert!(matches!(
            ExtensionField::new(3, vec![2, 0, 1], "a"),
            Err(Error::ReducibleModulus(_))
        ));
        // (x^2+1)^2 over F_3 has no roots but a quadratic factor
        assert!(matches!(
            ExtensionField::new(3, vec![1, 0, 2, 0, 1], "a"),
            Err(Error::ReducibleModulus(_))
        ));
        assert!(matches!(
            ExtensionField::new(4, vec![1, 1, 1], "a"),
            Err(Error::NonPrimeModulus(4))
        ));
        assert!(ExtensionField::new(2, vec![1, 1, 0, 0, 1], "a").is_ok());
    }

    #[test]
    fn render_uses_generator() {
        let f = gf9();
        let a = f.from_coeff(&Coeff::generator()).unwrap();
        assert_eq!(f.render(&f.add(&a, &1)), "a + 1");
        assert_eq!(f.render(&f.mul(&a, &2)), "2*a");
    }
}
