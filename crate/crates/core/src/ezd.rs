//! Exact zero divisors: certificates, the multiplication matrix `Ξ_x`, the
//! minor construction of a partner, Conca generators and exhaustive scans.
//!
//! An element `x` is an exact zero divisor when `ann(x) = (w)` and
//! `ann(w) = (x)` for some `w`; the pair `(w, x)` is then an exact pair.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{AlgebraHandle, Element, GradedAlgebra, IdealView};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, Matrix};

pub const DEFAULT_SCAN_BUDGET: u64 = 1_000_000;
const MAX_WITNESSES: usize = 8;

/// A verified exact pair with the data that witnesses it.
#[derive(Clone, Debug)]
pub struct ExactPairCertificate<F: Field> {
    pub w: Element<F>,
    pub x: Element<F>,
    pub ann_x: IdealView<F>,
    pub ann_w: IdealView<F>,
    /// `ℓ((x))` and `ℓ((w))`.
    pub length_x: usize,
    pub length_w: usize,
    /// `R -w-> R -x-> R -w-> R` is exact (two rank identities).
    pub sequence_exact: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NotEzdReason {
    /// `ann(x)` needs more than one generator.
    AnnNotCyclic,
    /// `ann(x) = (w)` but `ann(w) != (x)`.
    PartnerFailsBack,
}

#[derive(Clone, Debug)]
pub enum EzdVerdict<F: Field> {
    Exact(Box<ExactPairCertificate<F>>),
    NotExact(NotEzdReason),
}

impl<F: Field> EzdVerdict<F> {
    pub fn is_exact(&self) -> bool {
        matches!(self, EzdVerdict::Exact(_))
    }

    pub fn certificate(&self) -> Option<&ExactPairCertificate<F>> {
        match self {
            EzdVerdict::Exact(c) => Some(c),
            EzdVerdict::NotExact(_) => None,
        }
    }
}

/// Multiplication by `x` as a map `m/m^2 -> m^2`, an `h_2 × h_1` matrix.
#[derive(Clone, Debug)]
pub struct XiMatrix<F: Field> {
    pub x: Element<F>,
    pub matrix: Matrix<F::Elem>,
    pub rank: usize,
}

fn require_short<F: Field>(alg: &GradedAlgebra<F>) -> Result<()> {
    if alg.is_short() {
        Ok(())
    } else {
        Err(Error::NotShort)
    }
}

/// Column `j` holds the degree-two coordinates of `x · x_j`.
pub fn xi_matrix<F: Field>(x: &Element<F>) -> Result<XiMatrix<F>> {
    let alg = x.algebra();
    require_short(alg)?;
    if !x.in_m() {
        return Err(Error::NotInMaxIdeal);
    }
    let f = alg.field();
    let (r1, r2) = (alg.degree_range(1), alg.degree_range(2));
    let cols: Vec<Vec<F::Elem>> = r1
        .map(|j| alg.mul_coords(x.coords(), &alg.unit_coords(j))[r2.clone()].to_vec())
        .collect();
    let matrix = Matrix::from_columns(r2.len(), &cols);
    let rank = linalg::rank(f, &matrix);
    Ok(XiMatrix {
        x: x.clone(),
        matrix,
        rank,
    })
}

fn check_nonzero_nonunit<F: Field>(x: &Element<F>) -> Result<()> {
    if x.is_zero() {
        Err(Error::ZeroElement)
    } else if x.is_unit() {
        Err(Error::UnitElement)
    } else {
        Ok(())
    }
}

/// Decides whether `x` is an exact zero divisor. The partner is the first
/// echelon basis vector of `ann(x)` outside `m·ann(x)`.
pub fn is_exact_zero_divisor<F: Field>(x: &Element<F>) -> Result<EzdVerdict<F>> {
    check_nonzero_nonunit(x)?;
    let ann_x = x.annihilator();
    let m_ann = ann_x.times_m();
    if ann_x.dim() != m_ann.dim() + 1 {
        return Ok(EzdVerdict::NotExact(NotEzdReason::AnnNotCyclic));
    }
    let w = ann_x
        .basis()
        .into_iter()
        .find(|v| !m_ann.contains(v).expect("same algebra"))
        .expect("a cyclic ideal has a generator in its echelon basis");
    let ann_w = w.annihilator();
    let px = x.principal_ideal();
    if !ann_w.same_as(&px) {
        return Ok(EzdVerdict::NotExact(NotEzdReason::PartnerFailsBack));
    }
    Ok(EzdVerdict::Exact(Box::new(certify(w, x.clone(), ann_x, ann_w, px.dim()))))
}

fn certify<F: Field>(
    w: Element<F>,
    x: Element<F>,
    ann_x: IdealView<F>,
    ann_w: IdealView<F>,
    length_x: usize,
) -> ExactPairCertificate<F> {
    let alg = x.algebra();
    let f = alg.field();
    let rank_w = linalg::rank(f, &w.multiplication_operator());
    let rank_x = linalg::rank(f, &x.multiplication_operator());
    let n = alg.dim();
    let products_vanish = (&w * &x).is_zero();
    let sequence_exact = products_vanish && n - rank_x == rank_w && n - rank_w == rank_x;
    ExactPairCertificate {
        length_w: rank_w,
        w,
        x,
        ann_x,
        ann_w,
        length_x,
        sequence_exact,
    }
}

/// `ann(x) = (w)` and `ann(w) = (x)`, with both elements nonzero non-units.
pub fn is_exact_pair<F: Field>(w: &Element<F>, x: &Element<F>) -> Result<bool> {
    w.same_algebra(x)?;
    if w.is_zero() || x.is_zero() || w.is_unit() || x.is_unit() {
        return Ok(false);
    }
    Ok(x.annihilator().same_as(&w.principal_ideal()) && w.annihilator().same_as(&x.principal_ideal()))
}

/// Certificate for a pair already known (or claimed) to be exact.
pub fn certify_pair<F: Field>(w: &Element<F>, x: &Element<F>) -> Result<Option<ExactPairCertificate<F>>> {
    if !is_exact_pair(w, x)? {
        return Ok(None);
    }
    let len = x.principal_ideal().dim();
    Ok(Some(certify(w.clone(), x.clone(), x.annihilator(), w.annihilator(), len)))
}

/// Signed maximal minors: entry `j` is the determinant of `Ξ` with column
/// `j` removed. For `Ξ` of size `(e-1) × e` the vector
/// `(minor_0, -minor_1, minor_2, ...)` spans its kernel when `Ξ` has full rank.
pub fn maximal_minors<F: Field>(f: &F, xi: &Matrix<F::Elem>) -> Vec<F::Elem> {
    let (r, c) = (xi.rows(), xi.cols());
    assert_eq!(r + 1, c, "maximal minors need an (e-1) x e matrix");
    let rows: Vec<usize> = (0..r).collect();
    (0..c)
        .map(|j| {
            let cols: Vec<usize> = (0..c).filter(|&k| k != j).collect();
            linalg::determinant(f, &xi.submatrix(&rows, &cols))
        })
        .collect()
}

/// Outcome of the minor construction.
#[derive(Clone, Debug)]
pub enum MinorsOutcome<F: Field> {
    Pair {
        w: Element<F>,
        minors_x: Vec<F::Elem>,
        minors_w: Vec<F::Elem>,
    },
    Degenerate {
        minors_x: Vec<F::Elem>,
        minors_w: Vec<F::Elem>,
    },
}

pub(crate) fn check_hilbert_e_e1<F: Field>(alg: &GradedAlgebra<F>) -> Result<usize> {
    let h = alg.hilbert();
    match h.as_slice() {
        [1, e, f] if *e >= 2 && *f + 1 == *e => Ok(*e),
        _ => Err(Error::WrongHilbertSeries { found: h }),
    }
}

/// `w = Σ (-1)^j μ_j(x) x_j` from the maximal minors of `Ξ_x`; then the
/// minors of `Ξ_w` decide whether the pair is exact. A non-degenerate outcome
/// is re-checked with [`is_exact_pair`].
pub fn partner_via_minors<F: Field>(x: &Element<F>) -> Result<MinorsOutcome<F>> {
    let alg = x.algebra();
    check_hilbert_e_e1(alg)?;
    require_short(alg)?;
    if !x.in_m() {
        return Err(Error::NotInMaxIdeal);
    }
    let f = alg.field();
    let minors_x = maximal_minors(f, &xi_matrix(x)?.matrix);
    let mut w = alg.zero();
    for (j, mu) in minors_x.iter().enumerate() {
        let c = if j % 2 == 0 { mu.clone() } else { f.neg(mu) };
        w = w.add_scaled(&c, &alg.generator(j))?;
    }
    let minors_w = maximal_minors(f, &xi_matrix(&w)?.matrix);
    let all_zero = |v: &[F::Elem]| v.iter().all(|c| f.is_zero(c));
    if all_zero(&minors_x) || all_zero(&minors_w) {
        return Ok(MinorsOutcome::Degenerate { minors_x, minors_w });
    }
    if !is_exact_pair(&w, x)? {
        return Err(Error::Internal(format!(
            "nonvanishing minors but ({w}, {x}) is not an exact pair"
        )));
    }
    Ok(MinorsOutcome::Pair {
        w,
        minors_x,
        minors_w,
    })
}

/// `x^2 = 0` and `x m = m^2`.
pub fn is_conca_generator<F: Field>(x: &Element<F>) -> Result<bool> {
    let alg = x.algebra();
    require_short(alg)?;
    if !x.in_m() || !(x * x).is_zero() {
        return Ok(false);
    }
    let xi = xi_matrix(x)?;
    Ok(xi.rank == alg.degree_range(2).len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanMode {
    /// Every element of `m`.
    AllOfM,
    /// One normalized linear form per point of `P(m/m^2)`.
    ProjectiveLines,
}

#[derive(Clone, Debug)]
pub struct ScanReport<F: Field> {
    pub mode: ScanMode,
    pub examined: u64,
    /// Examined elements outside `m^2`.
    pub outside_m2: u64,
    pub ezd_count: u64,
    pub ezd_outside_m2: u64,
    pub conca_count: u64,
    /// The first few exact zero divisors with their partners, in scan order.
    pub witnesses: Vec<(Element<F>, Element<F>)>,
}

fn field_size<F: Field>(f: &F) -> Result<u64> {
    f.size().ok_or(Error::InfiniteField)
}

fn checked_count(q: u64, n: usize, budget: u64) -> Result<u64> {
    let needed = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(needed as u64)
}

/// Coordinates with base-`q` digits of `index` in the given positions.
fn digits_to_coords<F: Field>(alg: &GradedAlgebra<F>, q: u64, mut index: u64, positions: std::ops::Range<usize>) -> Vec<F::Elem> {
    let f = alg.field();
    let mut v = alg.zero_coords();
    for i in positions {
        v[i] = f.element(index % q);
        index /= q;
    }
    v
}

/// Normalized representatives of the points of `P^{n-1}(F_q)`, by index.
pub(crate) fn projective_points(q: u64, n: usize) -> impl Iterator<Item = Vec<u64>> {
    // the first nonzero coordinate is 1; enumerate by its position
    (0..n).rev().flat_map(move |lead| {
        let tail = n - lead - 1;
        let count = q.pow(tail as u32);
        (0..count).map(move |mut idx| {
            let mut v = vec![0u64; n];
            v[lead] = 1;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = idx % q;
                idx /= q;
            }
            v
        })
    })
}

fn projective_count(q: u64, n: usize) -> u128 {
    (0..n).map(|k| (q as u128).pow(k as u32)).sum()
}

struct Tally<F: Field> {
    examined: u64,
    outside_m2: u64,
    ezd: u64,
    ezd_outside: u64,
    conca: u64,
    witnesses: Vec<(Element<F>, Element<F>)>,
}

impl<F: Field> Default for Tally<F> {
    fn default() -> Self {
        Tally {
            examined: 0,
            outside_m2: 0,
            ezd: 0,
            ezd_outside: 0,
            conca: 0,
            witnesses: Vec::new(),
        }
    }
}

impl<F: Field> Tally<F> {
    fn merge(mut self, other: Tally<F>) -> Tally<F> {
        self.examined += other.examined;
        self.outside_m2 += other.outside_m2;
        self.ezd += other.ezd;
        self.ezd_outside += other.ezd_outside;
        self.conca += other.conca;
        self.witnesses.extend(other.witnesses);
        self.witnesses.truncate(MAX_WITNESSES);
        self
    }

    fn record(&mut self, x: Element<F>) -> Result<()> {
        self.examined += 1;
        if x.is_zero() {
            return Ok(());
        }
        let linear = x.linear_part().iter().any(|c| !x.algebra().field().is_zero(c));
        if linear {
            self.outside_m2 += 1;
        }
        if let EzdVerdict::Exact(cert) = is_exact_zero_divisor(&x)? {
            self.ezd += 1;
            if linear {
                self.ezd_outside += 1;
            }
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push((x.clone(), cert.w.clone()));
            }
        }
        if x.algebra().is_short() && is_conca_generator(&x)? {
            self.conca += 1;
        }
        Ok(())
    }
}

const CHUNK: u64 = 4096;

/// Exhaustive scan over a finite field; work is split into fixed chunks
/// whose tallies are merged in order, so the report is deterministic.
pub fn scan_ezd<F: Field>(alg: &Arc<GradedAlgebra<F>>, mode: ScanMode, budget: u64) -> Result<ScanReport<F>> {
    let f = alg.field();
    let q = field_size(f)?;
    let tally = match mode {
        ScanMode::AllOfM => {
            let total = checked_count(q, alg.dim() - 1, budget)?;
            let chunks = total.div_ceil(CHUNK);
            let parts: Vec<Result<Tally<F>>> = (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let mut t = Tally::default();
                    for idx in c * CHUNK..((c + 1) * CHUNK).min(total) {
                        let coords = digits_to_coords(alg, q, idx, 1..alg.dim());
                        t.record(alg.element(coords)?)?;
                    }
                    Ok(t)
                })
                .collect();
            let mut acc = Tally::default();
            for p in parts {
                acc = acc.merge(p?);
            }
            acc
        }
        ScanMode::ProjectiveLines => {
            let e = alg.e();
            let needed = projective_count(q, e);
            if needed > budget as u128 {
                return Err(Error::BudgetExceeded { needed, budget });
            }
            let points: Vec<Vec<u64>> = projective_points(q, e).collect();
            let parts: Vec<Result<Tally<F>>> = points
                .par_chunks(CHUNK as usize)
                .map(|chunk| {
                    let mut t = Tally::default();
                    for pt in chunk {
                        t.record(linear_form(alg, pt)?)?;
                    }
                    Ok(t)
                })
                .collect();
            let mut acc = Tally::default();
            for p in parts {
                acc = acc.merge(p?);
            }
            acc
        }
    };
    Ok(ScanReport {
        mode,
        examined: tally.examined,
        outside_m2: tally.outside_m2,
        ezd_count: tally.ezd,
        ezd_outside_m2: tally.ezd_outside,
        conca_count: tally.conca,
        witnesses: tally.witnesses,
    })
}

/// The linear form with the given field-element indices as coordinates.
pub(crate) fn linear_form<F: Field>(alg: &Arc<GradedAlgebra<F>>, indices: &[u64]) -> Result<Element<F>> {
    let f = alg.field();
    let mut v = alg.zero_coords();
    for (k, i) in alg.degree_range(1).enumerate() {
        v[i] = f.element(indices[k]);
    }
    alg.element(v)
}

/// Half-width of the integer box swept over the rationals.
pub const RATIONAL_SWEEP_BOUND: u64 = 3;

/// Some `z ∈ m \ m^2` with `z m ⊊ m^2` (`rank Ξ_z < h_2`). Finite fields are
/// scanned projectively; over the rationals an integer box is swept, which
/// is incomplete.
pub fn find_weak_annihilated<F: Field>(alg: &Arc<GradedAlgebra<F>>) -> Result<Option<Element<F>>> {
    require_short(alg)?;
    let (e, f) = (alg.e(), alg.degree_range(2).len());
    if f < 2 || f + 1 > e {
        return Err(Error::PreconditionFailed(format!(
            "need 2 <= dim m^2 <= e - 1, have dim m^2 = {f}, e = {e}"
        )));
    }
    let fld = alg.field();
    let points: Box<dyn Iterator<Item = Vec<u64>>> = match fld.size() {
        Some(q) => Box::new(projective_points(q, e)),
        // integers -B..B through the zigzag enumeration, first nonzero = 1
        None => Box::new(
            projective_points(2 * RATIONAL_SWEEP_BOUND + 1, e)
                .filter(|p| p.iter().find(|&&c| c != 0) == Some(&1)),
        ),
    };
    for pt in points {
        let z = linear_form(alg, &pt)?;
        if xi_matrix(&z)?.rank < f {
            return Ok(Some(z));
        }
    }
    Ok(None)
}
