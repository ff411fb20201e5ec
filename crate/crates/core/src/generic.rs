//! Random quadratic algebras with `e` generators and `(e² - e + 2)/2`
//! relations, and how often they carry exact zero divisors.
//!
//! Points of the Grassmannian are sampled by drawing uniformly random
//! `n × m` matrices and rejecting rank-deficient ones; the rows, read in the
//! degree-two monomial basis, are the relations.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{monomials, AlgebraHandle, Element, GradedAlgebra};
use crate::error::{Error, Result};
use crate::ezd::{self, check_hilbert_e_e1, is_conca_generator, is_exact_pair, maximal_minors};
use crate::field::Field;
use crate::linalg::{self, Matrix};
use crate::parser::{PolyExpr, PresentationSource, DEFAULT_DEGREE_CAP};

/// Random linear forms tried before falling back to a scan.
pub const DEFAULT_RANDOM_FORMS: usize = 20;

/// `(n, m)`: relation count and `dim S_2` for `e` generators.
pub fn quadric_counts(e: usize) -> (usize, usize) {
    ((e * e - e + 2) / 2, e * (e + 1) / 2)
}

fn variables(e: usize) -> Vec<String> {
    (1..=e).map(|i| format!("x{i}")).collect()
}

/// The presentation whose relations are the rows of `rows` in the
/// degree-two monomial basis (`x1^2, x1*x2, ...`).
pub fn presentation_from_rows<F: Field>(field: &F, e: usize, rows: &[Vec<F::Elem>]) -> PresentationSource {
    let mons = monomials(e, 2);
    let relations = rows
        .iter()
        .map(|row| {
            let terms: BTreeMap<Vec<u32>, _> = row
                .iter()
                .zip(&mons)
                .filter(|(c, _)| !field.is_zero(c))
                .map(|(c, mono)| (mono.clone(), field.to_coeff(c)))
                .collect();
            PolyExpr { terms }
        })
        .collect();
    PresentationSource {
        field: field.spec(),
        variables: variables(e),
        relations,
        degree_cap: DEFAULT_DEGREE_CAP,
    }
}

/// A uniformly random point of the Grassmannian of `n`-dimensional
/// subspaces of quadrics, returned as its relation matrix.
pub fn sample_relation_matrix<F: Field, R: Rng + ?Sized>(e: usize, field: &F, rng: &mut R) -> Result<Vec<Vec<F::Elem>>> {
    if field.size().is_none() {
        return Err(Error::InfiniteField);
    }
    if e < 2 {
        return Err(Error::PreconditionFailed("need at least two variables".into()));
    }
    let (n, m) = quadric_counts(e);
    loop {
        let rows: Vec<Vec<F::Elem>> = (0..n).map(|_| (0..m).map(|_| field.random(rng)).collect()).collect();
        if linalg::rank(field, &Matrix::from_rows(m, rows.clone())) == n {
            return Ok(rows);
        }
    }
}

pub fn sample_quadratic_algebra<F: Field, R: Rng + ?Sized>(e: usize, field: &F, rng: &mut R) -> Result<PresentationSource> {
    let rows = sample_relation_matrix(e, field, rng)?;
    Ok(presentation_from_rows(field, e, &rows))
}

#[derive(Clone, Debug)]
pub enum LinearFormVerdict<F: Field> {
    /// `ℓ'` from the signed minors of `Ξ_ℓ`; `(ℓ', ℓ)` is an exact pair.
    EzdWith(Element<F>),
    Degenerate,
}

impl<F: Field> LinearFormVerdict<F> {
    pub fn partner(&self) -> Option<&Element<F>> {
        match self {
            LinearFormVerdict::EzdWith(w) => Some(w),
            LinearFormVerdict::Degenerate => None,
        }
    }
}

/// The `m × (m+1)` matrix `[x_1 ℓ | … | x_e ℓ | basis of I_2]` in the
/// coordinates of `S_2`.
pub fn xi_ell<F: Field>(ell: &Element<F>) -> Result<Matrix<F::Elem>> {
    let alg = ell.algebra();
    let f = alg.field();
    let e = alg.e();
    let mons = alg.ambient_monomials(2);
    let lin = ell.linear_part();
    if !ell.component(0).is_zero() || !ell.component(2).is_zero() {
        return Err(Error::NotLinearForm);
    }
    let m = mons.len();
    let mut cols = Vec::with_capacity(m + 1);
    for i in 0..e {
        let mut col = vec![f.zero(); m];
        for (j, c) in lin.iter().enumerate() {
            let mut mono = vec![0u32; e];
            mono[i] += 1;
            mono[j] += 1;
            let pos = mons.iter().position(|x| *x == mono).expect("degree-two monomial");
            col[pos] = f.add(&col[pos], c);
        }
        cols.push(col);
    }
    cols.extend(alg.ideal_component(2));
    if cols.len() != m + 1 {
        return Err(Error::WrongHilbertSeries { found: alg.hilbert() });
    }
    Ok(Matrix::from_columns(m, &cols))
}

/// `ℓ' = Σ (-1)^{i-1} ν_i x_i` with `ν_i` the minor of `Ξ_ℓ` omitting column
/// `i`; a nonzero `ℓ'` annihilates `ℓ` and is kept only if the pair is exact.
pub fn linear_form_ezd_test<F: Field>(ell: &Element<F>) -> Result<LinearFormVerdict<F>> {
    let alg = ell.algebra();
    check_hilbert_e_e1(alg)?;
    let f = alg.field();
    let xi = xi_ell(ell)?;
    let nu = maximal_minors(f, &xi);
    let mut coords = alg.zero_coords();
    for (k, i) in alg.degree_range(1).enumerate() {
        coords[i] = if k % 2 == 0 { nu[k].clone() } else { f.neg(&nu[k]) };
    }
    let partner = alg.element(coords)?;
    if partner.is_zero() {
        return Ok(LinearFormVerdict::Degenerate);
    }
    if !partner.multiply(ell)?.is_zero() {
        return Err(Error::Internal("signed minors do not annihilate the form".into()));
    }
    Ok(if is_exact_pair(&partner, ell)? {
        LinearFormVerdict::EzdWith(partner)
    } else {
        LinearFormVerdict::Degenerate
    })
}

#[derive(Clone, Copy, Debug)]
pub struct DensityOptions {
    pub random_forms: usize,
    /// Most linear forms (up to scalars) scanned when random forms fail.
    pub scan_budget: u64,
    pub keep_log: bool,
}

impl Default for DensityOptions {
    fn default() -> Self {
        DensityOptions {
            random_forms: DEFAULT_RANDOM_FORMS,
            scan_budget: ezd::DEFAULT_SCAN_BUDGET,
            keep_log: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    /// `None` when the algebra is not artinian within the degree cap.
    pub hilbert: Option<Vec<usize>>,
    pub hilbert_ok: bool,
    pub ezd_ok: bool,
    pub conca_ok: bool,
    /// The ezd question exceeded the scan budget.
    pub undecided: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleReport {
    pub e: usize,
    pub field: String,
    pub trials: u64,
    pub seed: u64,
    pub total: u64,
    pub hilbert_ok: u64,
    pub ezd_ok: u64,
    pub conca_ok: u64,
    pub undecided: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log: Option<Vec<TrialRecord>>,
}

fn random_linear_form<F: Field, R: Rng + ?Sized>(alg: &Arc<GradedAlgebra<F>>, rng: &mut R) -> Result<Element<F>> {
    let f = alg.field();
    let mut v = alg.zero_coords();
    for i in alg.degree_range(1) {
        v[i] = f.random(rng);
    }
    alg.element(v)
}

/// Classifies one algebra: Hilbert series, ezd existence (random forms,
/// then a scan over linear forms up to scalars), Conca generator existence.
pub fn classify_algebra<F: Field, R: Rng + ?Sized>(trial: u64, built: Result<Arc<GradedAlgebra<F>>>, rng: &mut R, opts: &DensityOptions) -> Result<TrialRecord> {
    let mut rec = TrialRecord {
        trial,
        hilbert: None,
        hilbert_ok: false,
        ezd_ok: false,
        conca_ok: false,
        undecided: false,
    };
    let alg = match built {
        Ok(a) => a,
        Err(Error::NotArtinianWithinCap { .. }) => return Ok(rec),
        Err(other) => return Err(other),
    };
    rec.hilbert = Some(alg.hilbert());
    if check_hilbert_e_e1(&alg).is_err() {
        return Ok(rec);
    }
    rec.hilbert_ok = true;
    for _ in 0..opts.random_forms {
        let ell = random_linear_form(&alg, rng)?;
        if ell.is_zero() {
            continue;
        }
        if linear_form_ezd_test(&ell)?.partner().is_some() {
            rec.ezd_ok = true;
            break;
        }
    }
    let q = alg.field().size().ok_or(Error::InfiniteField)?;
    let e = alg.e();
    let count: u128 = (0..e).map(|k| (q as u128).pow(k as u32)).sum();
    if count > opts.scan_budget as u128 {
        rec.undecided = !rec.ezd_ok;
        return Ok(rec);
    }
    let forms: Vec<Element<F>> = ezd::projective_points(q, e)
        .map(|p| ezd::linear_form(&alg, &p))
        .collect::<Result<_>>()?;
    rec.conca_ok = forms
        .par_iter()
        .map(is_conca_generator)
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .any(|b| b);
    if !rec.ezd_ok {
        rec.ezd_ok = rec.conca_ok
            || forms
                .par_iter()
                .map(|x| ezd::is_exact_zero_divisor(x).map(|v| v.is_exact()))
                .collect::<Result<Vec<bool>>>()?
                .into_iter()
                .any(|b| b);
    }
    Ok(rec)
}

fn assemble(e: usize, field: String, seed: u64, records: Vec<TrialRecord>, keep_log: bool) -> SampleReport {
    let count = |p: fn(&TrialRecord) -> bool| records.iter().filter(|r| p(r)).count() as u64;
    SampleReport {
        e,
        field,
        trials: records.len() as u64,
        seed,
        total: records.len() as u64,
        hilbert_ok: count(|r| r.hilbert_ok),
        ezd_ok: count(|r| r.ezd_ok),
        conca_ok: count(|r| r.conca_ok),
        undecided: count(|r| r.undecided),
        log: keep_log.then_some(records),
    }
}

/// Trial `i` draws from the ChaCha stream `i` of `seed`, so reports do not
/// depend on scheduling.
pub fn density_report<F: Field>(e: usize, field: &F, trials: u64, seed: u64, opts: &DensityOptions) -> Result<SampleReport> {
    if trials == 0 {
        return Err(Error::PreconditionFailed("need at least one trial".into()));
    }
    let records = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            let src = sample_quadratic_algebra(e, field, &mut rng)?;
            classify_algebra(t, GradedAlgebra::build(field.clone(), &src), &mut rng, opts)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(e, field.spec().to_string(), seed, records, opts.keep_log))
}

/// Row-reduced `n × m` matrices of rank `n`: one per point of the
/// Grassmannian.
pub fn grassmannian_points<F: Field>(field: &F, n: usize, m: usize) -> Result<Vec<Vec<Vec<F::Elem>>>> {
    let elems = field.elements();
    if elems.is_empty() {
        return Err(Error::InfiniteField);
    }
    let mut out = Vec::new();
    let mut pivots = Vec::new();
    fn choose(start: usize, left: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for c in start..=m - left {
            cur.push(c);
            choose(c + 1, left - 1, m, cur, out);
            cur.pop();
        }
    }
    choose(0, n, m, &mut Vec::new(), &mut pivots);
    for piv in pivots {
        // free slots: (row, col) with col > pivot of the row and not a pivot column
        let free: Vec<(usize, usize)> = (0..n)
            .flat_map(|r| (piv[r] + 1..m).filter(|c| !piv.contains(c)).map(move |c| (r, c)))
            .collect();
        let q = elems.len() as u64;
        let total = q.checked_pow(free.len() as u32).ok_or(Error::BudgetExceeded {
            needed: u128::MAX,
            budget: u64::MAX,
        })?;
        for mut idx in 0..total {
            let mut rows = vec![vec![field.zero(); m]; n];
            for (r, &p) in piv.iter().enumerate() {
                rows[r][p] = field.one();
            }
            for &(r, c) in &free {
                rows[r][c] = elems[(idx % q) as usize].clone();
                idx /= q;
            }
            out.push(rows);
        }
    }
    Ok(out)
}

/// Classifies every point of the Grassmannian (finite fields only).
pub fn exhaustive_report<F: Field>(e: usize, field: &F, opts: &DensityOptions) -> Result<SampleReport> {
    let (n, m) = quadric_counts(e);
    let points = grassmannian_points(field, n, m)?;
    let records = points
        .par_iter()
        .enumerate()
        .map(|(i, rows)| {
            let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
            let src = presentation_from_rows(field, e, rows);
            classify_algebra(i as u64, GradedAlgebra::build(field.clone(), &src), &mut rng, opts)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(e, field.spec().to_string(), 0, records, opts.keep_log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::parser::parse_presentation;

    #[test]
    fn counts() {
        assert_eq!(quadric_counts(2), (2, 3));
        assert_eq!(quadric_counts(3), (4, 6));
        assert_eq!(quadric_counts(4), (7, 10));
    }

    #[test]
    fn samples_have_full_rank() {
        let f = PrimeField::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for e in 2..=4 {
            let src = sample_quadratic_algebra(e, &f, &mut rng).unwrap();
            let (n, _) = quadric_counts(e);
            assert_eq!(src.relations.len(), n);
            assert!(src.relations.iter().all(|r| r.terms.keys().all(|k| k.iter().sum::<u32>() == 2)));
        }
        assert!(matches!(
            sample_quadratic_algebra(3, &crate::field::Rationals, &mut rng),
            Err(Error::InfiniteField)
        ));
    }

    #[test]
    fn linear_form_test_on_conca_example() {
        let src = parse_presentation("field = GF(7)\nvars = x1 x2 x3\nrelations = x1^2, x2^2, x2*x3, x3^2").unwrap();
        let a = GradedAlgebra::build(PrimeField::new(7).unwrap(), &src).unwrap();
        let x1 = a.parse_element("x1").unwrap();
        let w = linear_form_ezd_test(&x1).unwrap().partner().cloned().unwrap();
        // an associate of x1
        assert!(w.linear_part()[1..].iter().all(|c| *c == 0));
        assert!(is_exact_pair(&w, &x1).unwrap());
        assert!(linear_form_ezd_test(&a.zero()).unwrap().partner().is_none());
        assert!(matches!(linear_form_ezd_test(&a.parse_element("x1*x2").unwrap()), Err(Error::NotLinearForm)));
    }

    #[test]
    fn grassmannian_sizes() {
        let f = PrimeField::new(2).unwrap();
        assert_eq!(grassmannian_points(&f, 2, 3).unwrap().len(), 7);
        let g = PrimeField::new(3).unwrap();
        // [4 choose 2]_3 = 130
        assert_eq!(grassmannian_points(&g, 2, 4).unwrap().len(), 130);
    }
}
