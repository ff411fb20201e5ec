//! Composition series of a matrix algebra acting on `k^d`, and its Jacobson
//! radical.
//!
//! The algebra is given by a k-basis of matrices (not merely generators), so
//! a random linear combination is a uniformly random algebra element. Each
//! section is split with the Holt–Rees variant of the MeatAxe: factor the
//! characteristic polynomial of a random element, spin a kernel vector of
//! `g(a)` for an irreducible factor `g`, and fall back to the transposed
//! action; Norton's criterion certifies irreducibility when
//! `dim ker g(a) = deg g`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::poly;
use crate::field::Field;
use crate::linalg::{self, Matrix, Subspace};

/// Attempts (random elements) per section before giving up.
const ATTEMPTS: usize = 64;

/// Closure of `{v}` under the matrices (which include the identity).
pub fn spin<F: Field>(f: &F, mats: &[Matrix<F::Elem>], v: &[F::Elem]) -> Subspace<F::Elem> {
    let mut space = Subspace::zero(v.len());
    let mut queue = Vec::new();
    if space.insert(f, v) {
        queue.push(v.to_vec());
    }
    while let Some(u) = queue.pop() {
        for a in mats {
            let w = a.mul_vec(f, &u);
            if space.insert(f, &w) {
                queue.push(w);
            }
        }
    }
    space
}

enum Split<E> {
    Proper(Subspace<E>),
    Simple,
}

fn random_element<F: Field, R: Rng + ?Sized>(f: &F, mats: &[Matrix<F::Elem>], rng: &mut R) -> Matrix<F::Elem> {
    let n = mats[0].rows();
    let mut acc = Matrix::zeros(f, n, n);
    for m in mats {
        acc = acc.add(f, &m.scale(f, &f.random(rng)));
    }
    acc
}

fn split<F: Field, R: Rng + ?Sized>(f: &F, mats: &[Matrix<F::Elem>], rng: &mut R) -> Result<Split<F::Elem>> {
    let s = mats[0].rows();
    if s <= 1 {
        return Ok(Split::Simple);
    }
    let transposed: Vec<Matrix<F::Elem>> = mats.iter().map(Matrix::transpose).collect();
    for _ in 0..ATTEMPTS {
        let a = random_element(f, mats, rng);
        let cp = poly::charpoly(f, &a);
        for (g, _) in poly::factor(f, &cp, rng)? {
            let ga = poly::eval_matrix(f, &g, &a);
            let kernel = linalg::nullspace(f, &ga);
            let v = &kernel[0];
            let w = spin(f, mats, v);
            if w.dim() < s {
                return Ok(Split::Proper(w));
            }
            let kt = linalg::nullspace(f, &ga.transpose());
            let wt = spin(f, &transposed, &kt[0]);
            if wt.dim() < s {
                // the annihilator of a submodule for the transposed action
                let rows = Matrix::from_rows(s, wt.basis().to_vec());
                let ann = Subspace::span(f, s, linalg::nullspace(f, &rows));
                return Ok(Split::Proper(ann));
            }
            if kernel.len() == g.len() - 1 {
                return Ok(Split::Simple);
            }
        }
    }
    Err(Error::UndecidedAtBudget(format!(
        "no splitting or certifying element found in {ATTEMPTS} attempts on a {s}-dimensional section"
    )))
}

/// Matrices of the induced action on `upper / lower`, in the basis given by
/// the returned complement vectors.
fn section<F: Field>(
    f: &F,
    mats: &[Matrix<F::Elem>],
    lower: &Subspace<F::Elem>,
    upper: &Subspace<F::Elem>,
) -> (Vec<Vec<F::Elem>>, Vec<Matrix<F::Elem>>) {
    let d = upper.ambient();
    let mut span = lower.clone();
    let mut complement = Vec::new();
    for v in upper.basis() {
        if span.insert(f, v) {
            complement.push(v.clone());
        }
    }
    let s = complement.len();
    let mut cols = lower.basis().to_vec();
    cols.extend(complement.iter().cloned());
    let b = Matrix::from_columns(d, &cols);
    let off = lower.dim();
    let induced = mats
        .iter()
        .map(|a| {
            let columns: Vec<Vec<F::Elem>> = complement
                .iter()
                .map(|c| {
                    let y = linalg::solve(f, &b, &a.mul_vec(f, c)).expect("upper is invariant");
                    y[off..].to_vec()
                })
                .collect();
            Matrix::from_columns(s, &columns)
        })
        .collect();
    (complement, induced)
}

fn refine<F: Field, R: Rng + ?Sized>(
    f: &F,
    mats: &[Matrix<F::Elem>],
    lower: Subspace<F::Elem>,
    upper: Subspace<F::Elem>,
    rng: &mut R,
    out: &mut Vec<Subspace<F::Elem>>,
) -> Result<()> {
    if upper.dim() == lower.dim() {
        return Ok(());
    }
    let (complement, induced) = section(f, mats, &lower, &upper);
    match split(f, &induced, rng)? {
        Split::Simple => {
            out.push(upper);
            Ok(())
        }
        Split::Proper(w) => {
            let mut middle = lower.clone();
            for coords in w.basis() {
                let mut v = vec![f.zero(); upper.ambient()];
                for (c, basis_vec) in coords.iter().zip(&complement) {
                    linalg::axpy(f, &mut v, c, basis_vec);
                }
                middle.insert(f, &v);
            }
            refine(f, mats, lower, middle.clone(), rng, out)?;
            refine(f, mats, middle, upper, rng, out)
        }
    }
}

/// A composition series `0 = V_0 ⊂ V_1 ⊂ ... ⊂ V_t = k^d` for the algebra
/// spanned by `mats` (which must contain the identity in its span).
pub fn composition_series<F: Field, R: Rng + ?Sized>(
    f: &F,
    mats: &[Matrix<F::Elem>],
    d: usize,
    rng: &mut R,
) -> Result<Vec<Subspace<F::Elem>>> {
    let mut out = vec![Subspace::zero(d)];
    if d == 0 {
        return Ok(out);
    }
    refine(f, mats, Subspace::zero(d), Subspace::full(f, d), rng, &mut out)?;
    Ok(out)
}

/// Coefficient vectors (over the basis `mats`) of the elements that map each
/// `V_i` into `V_{i-1}`: the Jacobson radical.
pub fn radical<F: Field>(f: &F, mats: &[Matrix<F::Elem>], series: &[Subspace<F::Elem>]) -> Vec<Vec<F::Elem>> {
    let r = mats.len();
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for pair in series.windows(2) {
        let (lower, upper) = (&pair[0], &pair[1]);
        for v in upper.basis() {
            let images: Vec<Vec<F::Elem>> = mats.iter().map(|a| lower.reduce(f, &a.mul_vec(f, v))).collect();
            let d = v.len();
            for i in 0..d {
                rows.push((0..r).map(|k| images[k][i].clone()).collect());
            }
        }
    }
    if rows.is_empty() {
        return (0..r)
            .map(|k| (0..r).map(|j| if j == k { f.one() } else { f.zero() }).collect())
            .collect();
    }
    linalg::nullspace(f, &Matrix::from_rows(r, rows))
}
