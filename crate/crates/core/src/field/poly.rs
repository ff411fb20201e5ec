//! Dense univariate polynomials over a [`Field`], characteristic polynomials,
//! and factorization into irreducibles.
//!
//! Over finite fields factorization is complete (square-free decomposition,
//! distinct-degree splitting, Cantor–Zassenhaus). Over the rationals only
//! linear factors are extracted; a cofactor of degree 2 or 3 without rational
//! roots is irreducible, anything larger is reported as undecided.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use super::Field;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Coefficients from the constant term up, with no trailing zeros. The zero
/// polynomial is the empty vector.
pub type Poly<E> = Vec<E>;

pub fn trim<F: Field>(f: &F, mut a: Poly<F::Elem>) -> Poly<F::Elem> {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
    a
}

pub fn degree<E>(a: &[E]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn is_one<F: Field>(f: &F, a: &[F::Elem]) -> bool {
    a.len() == 1 && f.is_one(&a[0])
}

pub fn add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    let n = a.len().max(b.len());
    let z = f.zero();
    trim(
        f,
        (0..n)
            .map(|i| f.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect(),
    )
}

pub fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    let nb: Vec<_> = b.iter().map(|c| f.neg(c)).collect();
    add(f, a, &nb)
}

pub fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Poly<F::Elem>, Poly<F::Elem>) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = f.inv(&b[db]).expect("nonzero leading coefficient");
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![f.zero(); r.len() - db];
    for k in (db..r.len()).rev() {
        let c = f.mul(&r[k], &lead_inv);
        if f.is_zero(&c) {
            continue;
        }
        q[k - db] = c.clone();
        for (i, bi) in b.iter().enumerate() {
            let idx = k - db + i;
            r[idx] = f.sub(&r[idx], &f.mul(&c, bi));
        }
    }
    r.truncate(db);
    (trim(f, q), trim(f, r))
}

pub fn rem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    divrem(f, a, b).1
}

pub fn monic<F: Field>(f: &F, a: &[F::Elem]) -> Poly<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(lead) => {
            let inv = f.inv(lead).expect("nonzero");
            a.iter().map(|c| f.mul(c, &inv)).collect()
        }
    }
}

/// Monic greatest common divisor.
pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

pub fn derivative<F: Field>(f: &F, a: &[F::Elem]) -> Poly<F::Elem> {
    trim(
        f,
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| f.mul(c, &f.from_i64(k as i64)))
            .collect(),
    )
}

pub fn eval<F: Field>(f: &F, a: &[F::Elem], x: &F::Elem) -> F::Elem {
    a.iter()
        .rev()
        .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

/// `base^e mod m`.
pub fn powmod<F: Field>(f: &F, base: &[F::Elem], mut e: u128, m: &[F::Elem]) -> Poly<F::Elem> {
    let mut acc = rem(f, &[f.one()], m);
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(f, &mul(f, &acc, &b), m);
        }
        b = rem(f, &mul(f, &b, &b), m);
        e >>= 1;
    }
    acc
}

/// `g(A)` for a square matrix `A`, by Horner's rule.
pub fn eval_matrix<F: Field>(f: &F, g: &[F::Elem], a: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let n = a.rows();
    let mut acc = Matrix::zeros(f, n, n);
    for c in g.iter().rev() {
        acc = acc.mul(f, a);
        for i in 0..n {
            let v = f.add(acc.get(i, i), c);
            acc.set(i, i, v);
        }
    }
    acc
}

/// Characteristic polynomial `det(t I - A)` via reduction to upper Hessenberg
/// form; valid in every characteristic.
pub fn charpoly<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Poly<F::Elem> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "characteristic polynomial of a non-square matrix");
    let mut h = a.clone();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| !f.is_zero(h.get(i, m - 1))) else {
            continue;
        };
        if i != m {
            h.swap_rows(i, m);
            for r in 0..n {
                let (x, y) = (h.get(r, i).clone(), h.get(r, m).clone());
                h.set(r, i, y);
                h.set(r, m, x);
            }
        }
        let t_inv = f.inv(h.get(m, m - 1)).expect("nonzero");
        for i in m + 1..n {
            let u = f.mul(h.get(i, m - 1), &t_inv);
            if f.is_zero(&u) {
                continue;
            }
            for j in 0..n {
                let v = f.sub(h.get(i, j), &f.mul(&u, h.get(m, j)));
                h.set(i, j, v);
            }
            for r in 0..n {
                let v = f.add(h.get(r, m), &f.mul(&u, h.get(r, i)));
                h.set(r, m, v);
            }
        }
    }
    // p_k = (t - h_kk) p_{k-1} - sum_{i<k} h_ik (h_{i+1,i} ... h_{k,k-1}) p_{i-1}
    let mut ps: Vec<Poly<F::Elem>> = vec![vec![f.one()]];
    for k in 0..n {
        let mut next = mul(f, &[f.neg(h.get(k, k)), f.one()], &ps[k]);
        let mut t = f.one();
        for i in (0..k).rev() {
            t = f.mul(&t, h.get(i + 1, i));
            let c = f.mul(h.get(i, k), &t);
            if !f.is_zero(&c) {
                let scaled: Vec<_> = ps[i].iter().map(|x| f.mul(x, &c)).collect();
                next = sub(f, &next, &scaled);
            }
        }
        ps.push(next);
    }
    ps.pop().expect("at least the constant polynomial")
}

/// Irreducible monic factors with multiplicities, sorted by degree (then by
/// coefficients for reproducibility). `a` must be nonzero.
pub fn factor<F: Field, R: Rng + ?Sized>(
    f: &F,
    a: &[F::Elem],
    rng: &mut R,
) -> Result<Vec<(Poly<F::Elem>, usize)>> {
    let a = monic(f, &trim(f, a.to_vec()));
    assert!(!a.is_empty(), "factoring the zero polynomial");
    let mut out = match f.size() {
        Some(q) => factor_finite(f, &a, q, rng),
        None => factor_rational(f, &a)?,
    };
    out.sort_by_key(|(g, _)| (g.len(), format!("{g:?}")));
    Ok(out)
}

fn factor_finite<F: Field, R: Rng + ?Sized>(
    f: &F,
    a: &[F::Elem],
    q: u64,
    rng: &mut R,
) -> Vec<(Poly<F::Elem>, usize)> {
    let mut out = Vec::new();
    for (sq, mult) in squarefree(f, a, q) {
        for (g, d) in distinct_degree(f, &sq, q) {
            for h in equal_degree(f, &g, d, q, rng) {
                out.push((h, mult));
            }
        }
    }
    out
}

/// Square-free decomposition over `GF(q)`: pairs `(g, m)` with `g` square-free
/// and `a = prod g^m`.
fn squarefree<F: Field>(f: &F, a: &[F::Elem], q: u64) -> Vec<(Poly<F::Elem>, usize)> {
    let p = f.characteristic() as usize;
    let mut out = Vec::new();
    if degree(a).unwrap_or(0) == 0 {
        return out;
    }
    let mut c = gcd(f, a, &derivative(f, a));
    let mut w = divrem(f, a, &c).0;
    let mut i = 1;
    while !is_one(f, &w) {
        let y = gcd(f, &w, &c);
        let fac = divrem(f, &w, &y).0;
        if !is_one(f, &fac) {
            out.push((fac, i));
        }
        w = y;
        c = divrem(f, &c, &w).0;
        i += 1;
    }
    if !is_one(f, &c) {
        // c is a p-th power: c(t) = r(t)^p with r's coefficients the p-th
        // roots, i.e. the (q/p)-th powers, of c's.
        let root_exp = (q / p as u64) as u128;
        let r: Vec<_> = c
            .iter()
            .step_by(p)
            .map(|x| f.pow(x, root_exp))
            .collect();
        for (g, m) in squarefree(f, &trim(f, r), q) {
            out.push((g, m * p));
        }
    }
    out
}

/// Splits a square-free monic polynomial into products of irreducibles of
/// equal degree `d`.
fn distinct_degree<F: Field>(f: &F, a: &[F::Elem], q: u64) -> Vec<(Poly<F::Elem>, usize)> {
    let mut out = Vec::new();
    let mut rest = a.to_vec();
    let x = vec![f.zero(), f.one()];
    let mut xq = x.clone();
    let mut d = 1;
    while degree(&rest).unwrap_or(0) >= 2 * d {
        xq = powmod(f, &xq, q as u128, &rest);
        let g = gcd(f, &rest, &sub(f, &xq, &x));
        if !is_one(f, &g) {
            rest = divrem(f, &rest, &g).0;
            xq = rem(f, &xq, &rest);
            out.push((g, d));
        }
        d += 1;
    }
    if degree(&rest).unwrap_or(0) > 0 {
        let deg = rest.len() - 1;
        out.push((rest, deg));
    }
    out
}

/// Cantor–Zassenhaus splitting of a product of distinct irreducibles of
/// degree `d`.
fn equal_degree<F: Field, R: Rng + ?Sized>(
    f: &F,
    a: &[F::Elem],
    d: usize,
    q: u64,
    rng: &mut R,
) -> Vec<Poly<F::Elem>> {
    let n = a.len() - 1;
    if n == d {
        return vec![a.to_vec()];
    }
    loop {
        let h: Poly<F::Elem> = trim(f, (0..n).map(|_| f.random(rng)).collect());
        if degree(&h).unwrap_or(0) == 0 {
            continue;
        }
        let g = gcd(f, a, &h);
        let candidate = if !is_one(f, &g) {
            g
        } else if q % 2 == 1 {
            // h^{(q^d - 1)/2} = (h^{1 + q + ... + q^{d-1}})^{(q-1)/2}
            let mut s = vec![f.one()];
            let mut hq = h.clone();
            for _ in 0..d {
                s = rem(f, &mul(f, &s, &hq), a);
                hq = powmod(f, &hq, q as u128, a);
            }
            let u = powmod(f, &s, ((q - 1) / 2) as u128, a);
            gcd(f, a, &sub(f, &u, &[f.one()]))
        } else {
            // absolute trace to F_2: h + h^2 + h^4 + ... over k*d squarings
            let k = q.trailing_zeros() as usize;
            let mut t = h.clone();
            let mut acc = h.clone();
            for _ in 1..k * d {
                t = rem(f, &mul(f, &t, &t), a);
                acc = add(f, &acc, &t);
            }
            gcd(f, a, &acc)
        };
        let dc = degree(&candidate).unwrap_or(0);
        if dc > 0 && dc < n {
            let other = divrem(f, a, &candidate).0;
            let mut out = equal_degree(f, &candidate, d, q, rng);
            out.extend(equal_degree(f, &monic(f, &other), d, q, rng));
            return out;
        }
    }
}

/// Largest absolute value whose divisors are enumerated by trial division.
const MAX_TRIAL: u64 = 1_000_000_000_000;

fn factor_rational<F: Field>(f: &F, a: &[F::Elem]) -> Result<Vec<(Poly<F::Elem>, usize)>> {
    let mut rest = a.to_vec();
    let mut out: Vec<(Poly<F::Elem>, usize)> = Vec::new();
    loop {
        let Some(root) = rational_root(f, &rest)? else {
            break;
        };
        let lin = vec![f.neg(&root), f.one()];
        let mut m = 0;
        loop {
            let (qt, r) = divrem(f, &rest, &lin);
            if !r.is_empty() {
                break;
            }
            rest = qt;
            m += 1;
        }
        out.push((lin, m));
    }
    match degree(&rest).unwrap_or(0) {
        0 => {}
        2 | 3 => out.push((rest, 1)),
        d => {
            return Err(Error::UndecidedAtBudget(format!(
                "rational factorization of a degree-{d} factor without rational roots"
            )))
        }
    }
    Ok(out)
}

fn rational_root<F: Field>(f: &F, a: &[F::Elem]) -> Result<Option<F::Elem>> {
    if degree(a).unwrap_or(0) == 0 {
        return Ok(None);
    }
    if f.is_zero(&a[0]) {
        return Ok(Some(f.zero()));
    }
    // clear denominators
    let coeffs: Vec<BigRational> = a
        .iter()
        .map(|c| f.to_coeff(c).0.first().cloned().unwrap_or_else(BigRational::zero))
        .collect();
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let (c0, cn) = (ints[0].abs(), ints[ints.len() - 1].abs());
    let (Some(c0), Some(cn)) = (c0.to_u64().filter(|&v| v <= MAX_TRIAL), cn.to_u64().filter(|&v| v <= MAX_TRIAL)) else {
        return Err(Error::UndecidedAtBudget(
            "coefficients too large for the rational root test".into(),
        ));
    };
    for num in divisors(c0) {
        for den in divisors(cn) {
            for sign in [1i64, -1] {
                let r = BigRational::new(BigInt::from(num) * sign, BigInt::from(den));
                let v = f.from_coeff(&super::Coeff::constant(r))?;
                if f.is_zero(&eval(f, a, &v)) {
                    return Ok(Some(v));
                }
            }
        }
    }
    Ok(None)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ExtensionField, PrimeField, Rationals};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn expand<F: Field>(f: &F, factors: &[(Poly<F::Elem>, usize)]) -> Poly<F::Elem> {
        let mut acc = vec![f.one()];
        for (g, m) in factors {
            for _ in 0..*m {
                acc = mul(f, &acc, g);
            }
        }
        acc
    }

    #[test]
    fn charpoly_of_companion() {
        let f = PrimeField::new(7).unwrap();
        // companion of t^3 - 2t + 5
        let a = Matrix::from_rows(3, vec![vec![0, 0, 2], vec![1, 0, 2], vec![0, 1, 0]]);
        assert_eq!(charpoly(&f, &a), vec![5, 5, 0, 1]);
        let z = Matrix::zeros(&f, 2, 2);
        assert_eq!(charpoly(&f, &z), vec![0, 0, 1]);
    }

    #[test]
    fn charpoly_is_annihilating() {
        let f = PrimeField::new(5).unwrap();
        let a = Matrix::from_rows(3, vec![vec![1, 2, 3], vec![4, 0, 1], vec![2, 2, 2]]);
        let c = charpoly(&f, &a);
        assert!(eval_matrix(&f, &c, &a).is_zero(&f));
    }

    #[test]
    fn factors_over_f2() {
        let f = PrimeField::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // (t+1)^2 (t^2+t+1) t
        let a = expand(&f, &[(vec![1, 1], 2), (vec![1, 1, 1], 1), (vec![0, 1], 1)]);
        let fac = factor(&f, &a, &mut rng).unwrap();
        assert_eq!(fac, vec![(vec![0, 1], 1), (vec![1, 1], 2), (vec![1, 1, 1], 1)]);
    }

    #[test]
    fn factors_pth_powers() {
        let f = PrimeField::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        // (t^2+1)^3 (t+2)^4
        let a = expand(&f, &[(vec![1, 0, 1], 3), (vec![2, 1], 4)]);
        let fac = factor(&f, &a, &mut rng).unwrap();
        assert_eq!(fac, vec![(vec![2, 1], 4), (vec![1, 0, 1], 3)]);
        assert_eq!(expand(&f, &fac), a);
    }

    #[test]
    fn splits_equal_degree_products() {
        let f = PrimeField::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // (t^2+2)(t^2+3): both irreducible mod 5
        let a = mul(&f, &[2, 0, 1], &[3, 0, 1]);
        let fac = factor(&f, &a, &mut rng).unwrap();
        assert_eq!(fac.len(), 2);
        assert_eq!(expand(&f, &fac), a);
    }

    #[test]
    fn factors_over_gf4() {
        let f = ExtensionField::new(2, vec![1, 1, 1], "a").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        // t^2 + t + 1 splits over GF(4) as (t + a)(t + a + 1)
        let fac = factor(&f, &[1, 1, 1], &mut rng).unwrap();
        assert_eq!(fac.len(), 2);
        assert!(fac.iter().all(|(g, m)| g.len() == 2 && *m == 1));
    }

    #[test]
    fn rational_roots_and_limits() {
        let q = Rationals;
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        // (t - 1/2)^2 (t^2 + 1)
        let a = mul(&q, &mul(&q, &[r(-1, 2), r(1, 1)], &[r(-1, 2), r(1, 1)]), &[r(1, 1), r(0, 1), r(1, 1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let fac = factor(&q, &a, &mut rng).unwrap();
        assert_eq!(fac[0], (vec![r(-1, 2), r(1, 1)], 2));
        assert_eq!(fac[1].0.len(), 3);
        // (t^2+1)(t^2+2) has no rational roots and degree 4
        let b = mul(&q, &[r(1, 1), r(0, 1), r(1, 1)], &[r(2, 1), r(0, 1), r(1, 1)]);
        assert!(factor(&q, &b, &mut rng).unwrap_err().is_undecided());
    }
}
