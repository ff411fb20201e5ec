//! Upper-bidiagonal presentations `Θ_n(w,x,y,z)` and the families of
//! indecomposable totally reflexive modules built from them.

use std::ops::RangeInclusive;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{AlgebraHandle, Element, GradedAlgebra};
use crate::error::{Error, Result};
use crate::ezd::{self, check_hilbert_e_e1, is_exact_pair};
use crate::field::Field;
use crate::linalg::{Matrix, Subspace};
use crate::module::{verify_totally_acyclic_periodic, PresentedModule, SearchOptions};

/// Syzygy degrees inspected for constant Betti numbers.
pub const BETTI_WINDOW: usize = 6;

/// `w I^o + x I^e + y J^o + z J^e`: `w, x` alternate on the diagonal and
/// `y, z` on the superdiagonal.
pub fn theta<F: Field>(n: usize, w: &Element<F>, x: &Element<F>, y: &Element<F>, z: &Element<F>) -> Result<Matrix<Element<F>>> {
    for other in [x, y, z] {
        w.same_algebra(other)?;
    }
    if n == 0 {
        return Err(Error::PreconditionFailed("n must be positive".into()));
    }
    let zero = w.algebra().zero();
    Ok(Matrix::from_fn(n, n, |i, j| {
        let even = i % 2 == 1; // rows are numbered from 1 in the construction
        if j == i {
            if even { x.clone() } else { w.clone() }
        } else if j == i + 1 {
            if even { z.clone() } else { y.clone() }
        } else {
            zero.clone()
        }
    }))
}

/// `M_n(w, x, y, z)`.
pub fn family_module<F: Field>(n: usize, w: &Element<F>, x: &Element<F>, y: &Element<F>, z: &Element<F>) -> Result<PresentedModule<F>> {
    PresentedModule::new(w.algebra(), &theta(n, w, x, y, z)?)
}

/// One named hypothesis and whether it holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub name: String,
    pub holds: bool,
}

fn clause(name: impl Into<String>, holds: bool) -> Clause {
    Clause { name: name.into(), holds }
}

fn failures(clauses: &[Clause]) -> Vec<String> {
    clauses.iter().filter(|c| !c.holds).map(|c| c.name.clone()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "violations", rename_all = "snake_case")]
pub enum Bt1Verdict {
    /// `w, x, y` linearly independent modulo `m^2`.
    CaseA,
    /// `w ∈ (x) + m^2` and `y, z ∉ (x) + m^2`.
    CaseB,
    Fail(Vec<String>),
}

#[derive(Clone, Debug, Serialize)]
pub struct Bt1Report {
    pub clauses: Vec<Clause>,
    pub verdict: Bt1Verdict,
}

fn outside_m2<F: Field>(v: &Element<F>) -> bool {
    v.in_m() && v.linear_part().iter().any(|c| !v.algebra().field().is_zero(c))
}

/// `v ∈ (gens) + m^2`.
fn in_mod_m2<F: Field>(v: &Element<F>, gens: &[&Element<F>]) -> Result<bool> {
    let gens: Vec<Element<F>> = gens.iter().map(|g| (*g).clone()).collect();
    v.algebra().span_membership_mod(v, &gens, 2)
}

fn independent<F: Field>(xs: &[&Element<F>]) -> Result<bool> {
    let xs: Vec<Element<F>> = xs.iter().map(|g| (*g).clone()).collect();
    xs[0].algebra().lin_indep_mod_m2(&xs)
}

fn base_clauses<F: Field>(named: &[(&str, &Element<F>)], w: &Element<F>, x: &Element<F>) -> Result<Vec<Clause>> {
    let mut out: Vec<Clause> = named
        .iter()
        .map(|(n, v)| clause(format!("{n} in m \\ m^2"), outside_m2(v)))
        .collect();
    out.push(clause("(w, x) is an exact pair", is_exact_pair(w, x)?));
    Ok(out)
}

/// Evaluates every hypothesis under which the first family is well behaved.
pub fn check_bt1_hypotheses<F: Field>(w: &Element<F>, x: &Element<F>, y: &Element<F>, z: &Element<F>) -> Result<Bt1Report> {
    for other in [x, y, z] {
        w.same_algebra(other)?;
    }
    let mut clauses = base_clauses(&[("w", w), ("x", x), ("y", y), ("z", z)], w, x)?;
    clauses.push(clause("yz = 0", y.multiply(z)?.is_zero()));
    let case_a = independent(&[w, x, y])?;
    let w_in = in_mod_m2(w, &[x])?;
    let y_out = !in_mod_m2(y, &[x])?;
    let z_out = !in_mod_m2(z, &[x])?;
    let base_ok = clauses.iter().all(|c| c.holds);
    clauses.push(clause("(a) w, x, y linearly independent mod m^2", case_a));
    clauses.push(clause("(b) w in (x) + m^2", w_in));
    clauses.push(clause("(b) y not in (x) + m^2", y_out));
    clauses.push(clause("(b) z not in (x) + m^2", z_out));
    let verdict = if !base_ok {
        Bt1Verdict::Fail(failures(&clauses))
    } else if case_a {
        Bt1Verdict::CaseA
    } else if w_in && y_out && z_out {
        Bt1Verdict::CaseB
    } else {
        Bt1Verdict::Fail(failures(&clauses))
    };
    Ok(Bt1Report { clauses, verdict })
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyMember {
    /// `n` for size families, the rendered `λ` for parameter families.
    pub label: String,
    pub presentation: Vec<Vec<String>>,
    pub length: usize,
    pub min_generators: usize,
    pub betti: Vec<usize>,
    pub indecomposable: bool,
    pub totally_acyclic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub hypotheses: Vec<Clause>,
    pub case: String,
    pub members: Vec<FamilyMember>,
    /// Pairwise isomorphism verdicts, for parameter families.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isomorphisms: Option<Vec<Vec<bool>>>,
}

fn render_matrix<F: Field>(m: &Matrix<Element<F>>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).render()).collect()).collect()
}

/// Builds `M_n(w,x,y,z)` and certifies it: the periodic complex with the
/// partner `Θ_n(x,w,-y,-z)`, Betti numbers, and indecomposability.
fn certify_member<F: Field>(label: String, n: usize, w: &Element<F>, x: &Element<F>, y: &Element<F>, z: &Element<F>, opts: &SearchOptions) -> Result<(FamilyMember, PresentedModule<F>)> {
    let t = theta(n, w, x, y, z)?;
    let partner = theta(n, x, w, &y.neg(), &z.neg())?;
    let m = PresentedModule::new(w.algebra(), &t)?;
    let totally_acyclic = verify_totally_acyclic_periodic(&t, &partner)?.passed();
    let member = FamilyMember {
        label,
        presentation: render_matrix(&t),
        length: m.length(),
        min_generators: m.min_generators(),
        betti: m.betti(BETTI_WINDOW)?,
        indecomposable: m.is_indecomposable(opts)?.indecomposable,
        totally_acyclic,
    };
    Ok((member, m))
}

/// The modules `M_n(w,x,y,z)` for `n` in the range, after validating the
/// hypotheses of the first family.
pub fn build_family<F: Field>(w: &Element<F>, x: &Element<F>, y: &Element<F>, z: &Element<F>, ns: RangeInclusive<usize>, opts: &SearchOptions) -> Result<FamilyReport> {
    let report = check_bt1_hypotheses(w, x, y, z)?;
    let case = match &report.verdict {
        Bt1Verdict::CaseA => "a",
        Bt1Verdict::CaseB => "b",
        Bt1Verdict::Fail(v) => return Err(Error::HypothesesFail(v.clone())),
    };
    if *ns.start() == 0 {
        return Err(Error::PreconditionFailed("n must be positive".into()));
    }
    let ns: Vec<usize> = ns.collect();
    let members = ns
        .par_iter()
        .map(|&n| certify_member(n.to_string(), n, w, x, y, z, opts).map(|(m, _)| m))
        .collect::<Result<Vec<_>>>()?;
    Ok(FamilyReport {
        hypotheses: report.clauses,
        case: case.into(),
        members,
        isomorphisms: None,
    })
}

/// Some `z ∈ ann(y) \ m^2` outside `(x) + m^2`, preferring one outside
/// `(x, y) + m^2`.
pub fn find_z_for_y<F: Field>(w: &Element<F>, x: &Element<F>, y: &Element<F>) -> Result<Option<Element<F>>> {
    w.same_algebra(x)?;
    w.same_algebra(y)?;
    let alg = w.algebra();
    check_hilbert_e_e1(alg)?;
    if alg.e() < 3 {
        return Err(Error::PreconditionFailed("embedding dimension must be at least 3".into()));
    }
    if !is_exact_pair(w, x)? {
        return Err(Error::PreconditionFailed("(w, x) is not an exact pair".into()));
    }
    if !y.in_m() {
        return Err(Error::PreconditionFailed("y is a unit".into()));
    }
    if in_mod_m2(y, &[w, x])? {
        return Err(Error::PreconditionFailed("y lies in (w, x) + m^2".into()));
    }
    let f = alg.field();
    let lin = linear_parts(&y.annihilator().basis());
    let e = alg.e();
    let excluded_xy = Subspace::span(f, e, [x.linear_part(), y.linear_part()]);
    let excluded_x = Subspace::span(f, e, [x.linear_part()]);
    let pick = |excl: &Subspace<F::Elem>| lin.basis().iter().find(|v| !excl.contains(f, v)).cloned();
    Ok(match pick(&excluded_xy).or_else(|| pick(&excluded_x)) {
        Some(v) => Some(linear_element(alg, &v)?),
        None => None,
    })
}

fn linear_parts<F: Field>(elems: &[Element<F>]) -> Subspace<F::Elem> {
    let alg = elems.first().map(|e| e.algebra().clone());
    match alg {
        None => Subspace::zero(0),
        Some(a) => Subspace::span(a.field(), a.e(), elems.iter().map(Element::linear_part)),
    }
}

fn linear_element<F: Field>(alg: &Arc<GradedAlgebra<F>>, lin: &[F::Elem]) -> Result<Element<F>> {
    let mut v = alg.zero_coords();
    for (k, i) in alg.degree_range(1).enumerate() {
        v[i] = lin[k].clone();
    }
    alg.element(v)
}

/// Which of the four admissible variants of the parameter-family data holds.
#[derive(Clone, Debug, Serialize)]
pub struct Bt2Report {
    pub clauses: Vec<Clause>,
    /// `a`, `b`, `c` or `d`.
    pub variant: Option<char>,
}

pub fn check_bt2_hypotheses<F: Field>(n: usize, w: &Element<F>, x: &Element<F>, y: &Element<F>, yp: &Element<F>, z: &Element<F>) -> Result<Bt2Report> {
    for other in [x, y, yp, z] {
        w.same_algebra(other)?;
    }
    let mut clauses = base_clauses(&[("w", w), ("x", x), ("y", y), ("y'", yp), ("z", z)], w, x)?;
    let base_ok = clauses.iter().all(|c| c.holds);
    let all4 = independent(&[w, x, y, yp])?;
    let xyy = independent(&[x, y, yp])?;
    let w_in = in_mod_m2(w, &[x])?;
    let variant = if n == 2 {
        clauses.push(clause("(a) w, x, y, y' linearly independent mod m^2", all4));
        clauses.push(clause("(b) x, y, y' linearly independent mod m^2", xyy));
        clauses.push(clause("(b) w in (x) + m^2", w_in));
        match (all4, xyy && w_in) {
            (true, _) => Some('a'),
            (false, true) => Some('b'),
            _ => None,
        }
    } else if n >= 3 {
        let z_w = !in_mod_m2(z, &[w])?;
        let z_x = !in_mod_m2(z, &[x])?;
        let ann = y.multiply(z)?.is_zero() && yp.multiply(z)?.is_zero();
        clauses.push(clause("(c) w, x, y, y' linearly independent mod m^2", all4));
        clauses.push(clause("(c) z not in (w) + m^2", z_w));
        clauses.push(clause("(d) x, y, y' linearly independent mod m^2", xyy));
        clauses.push(clause("(d) w in (x) + m^2", w_in));
        clauses.push(clause("z not in (x) + m^2", z_x));
        clauses.push(clause("(y, y') in ann(z)", ann));
        if all4 && z_w && z_x && ann {
            Some('c')
        } else if xyy && w_in && z_x && ann {
            Some('d')
        } else {
            None
        }
    } else {
        clauses.push(clause("n >= 2", false));
        None
    };
    Ok(Bt2Report {
        clauses,
        variant: if base_ok { variant } else { None },
    })
}

/// The family `M_n(w, x, λy + y', z)` over the given `λ`, pairwise compared.
pub fn bt2_family<F: Field>(n: usize, w: &Element<F>, x: &Element<F>, y: &Element<F>, yp: &Element<F>, z: &Element<F>, lambdas: &[Element<F>], opts: &SearchOptions) -> Result<FamilyReport> {
    let report = check_bt2_hypotheses(n, w, x, y, yp, z)?;
    let Some(variant) = report.variant else {
        return Err(Error::HypothesesFail(failures(&report.clauses)));
    };
    for l in lambdas {
        w.same_algebra(l)?;
    }
    let mut lift = Vec::new();
    for (i, a) in lambdas.iter().enumerate() {
        for b in &lambdas[i + 1..] {
            if a.try_sub(b)?.in_m() {
                lift.push(format!("lambdas {} and {} differ by an element of m", a.render(), b.render()));
            }
        }
    }
    if !lift.is_empty() {
        return Err(Error::HypothesesFail(lift));
    }
    let built = lambdas
        .par_iter()
        .map(|l| {
            let yl = l.multiply(y)?.try_add(yp)?;
            certify_member(l.render(), n, w, x, &yl, z, opts)
        })
        .collect::<Result<Vec<_>>>()?;
    let count = built.len();
    let pairs: Vec<(usize, usize)> = (0..count).flat_map(|i| (i + 1..count).map(move |j| (i, j))).collect();
    let verdicts = pairs
        .par_iter()
        .map(|&(i, j)| built[i].1.is_isomorphic(&built[j].1, opts).map(|v| v.isomorphic))
        .collect::<Result<Vec<bool>>>()?;
    let mut iso = vec![vec![false; count]; count];
    for (i, row) in iso.iter_mut().enumerate() {
        row[i] = true;
    }
    for (&(i, j), &v) in pairs.iter().zip(&verdicts) {
        iso[i][j] = v;
        iso[j][i] = v;
    }
    Ok(FamilyReport {
        hypotheses: report.clauses,
        case: variant.to_string(),
        members: built.into_iter().map(|(m, _)| m).collect(),
        isomorphisms: Some(iso),
    })
}

/// Data `(y, y', z)` for the parameter family with `n >= 3`: `z` with
/// `z m ⊊ m^2`, then a pair in `ann(z)` satisfying variant (c) or (d).
pub fn find_bt2_data<F: Field>(w: &Element<F>, x: &Element<F>) -> Result<(Element<F>, Element<F>, Element<F>)> {
    w.same_algebra(x)?;
    let alg = w.algebra();
    check_hilbert_e_e1(alg)?;
    if alg.e() < 3 {
        return Err(Error::PreconditionFailed("embedding dimension must be at least 3".into()));
    }
    if !is_exact_pair(w, x)? {
        return Err(Error::PreconditionFailed("(w, x) is not an exact pair".into()));
    }
    let z = ezd::find_weak_annihilated(alg)?
        .ok_or_else(|| Error::SearchExhausted("no z with z m a proper subspace of m^2 in the searched set".into()))?;
    let f = alg.field();
    let lin = linear_parts(&z.annihilator().basis());
    let basis = lin.basis().to_vec();
    let dim = basis.len();
    let points: Vec<Vec<u64>> = match f.size() {
        Some(q) => ezd::projective_points(q, dim).collect(),
        None => ezd::projective_points(2 * ezd::RATIONAL_SWEEP_BOUND + 1, dim)
            .filter(|p| p.iter().find(|&&c| c != 0) == Some(&1))
            .collect(),
    };
    let combine = |p: &[u64]| -> Result<Element<F>> {
        let mut v = vec![f.zero(); alg.e()];
        for (c, b) in p.iter().zip(&basis) {
            crate::linalg::axpy(f, &mut v, &f.element(*c), b);
        }
        linear_element(alg, &v)
    };
    let candidates: Vec<Element<F>> = points.iter().map(|p| combine(p)).collect::<Result<_>>()?;
    let mut tried = 0u64;
    for y in &candidates {
        if in_mod_m2(y, &[w, x])? {
            continue;
        }
        for yp in &candidates {
            tried += 1;
            if check_bt2_hypotheses(3, w, x, y, yp, &z)?.variant.is_some() {
                return Ok((y.clone(), yp.clone(), z));
            }
        }
    }
    Err(Error::SearchExhausted(format!(
        "z = {}: none of {tried} pairs in ann(z) satisfies the hypotheses",
        z.render()
    )))
}

/// Whether `M_2(w,x,y)` and `M_2(w',x',y')` are non-isomorphic.
pub fn n2_pair_distinct<F: Field>(first: [&Element<F>; 3], second: [&Element<F>; 3], opts: &SearchOptions) -> Result<bool> {
    let mut mods = Vec::new();
    for [w, x, y] in [first, second] {
        if !is_exact_pair(w, x)? {
            return Err(Error::PreconditionFailed(format!("({}, {}) is not an exact pair", w.render(), x.render())));
        }
        mods.push(family_module(2, w, x, y, y)?);
    }
    Ok(!mods[0].is_isomorphic(&mods[1], opts)?.isomorphic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::parser::parse_presentation;

    fn ex72(p: u64, e: usize) -> Arc<GradedAlgebra<PrimeField>> {
        let vars: Vec<String> = (1..=e).map(|i| format!("x{i}")).collect();
        let mut rels = vec!["x1^2".to_string()];
        for i in 2..=e {
            for j in i..=e {
                rels.push(format!("x{i}*x{j}"));
            }
        }
        let text = format!("field = GF({p})\nvars = {}\nrelations = {}", vars.join(" "), rels.join(", "));
        GradedAlgebra::build(PrimeField::new(p).unwrap(), &parse_presentation(&text).unwrap()).unwrap()
    }

    #[test]
    fn theta_shapes() {
        let a = ex72(5, 3);
        let [w, x, y, z] = ["x1", "x1+x2", "x3", "x2"].map(|s| a.parse_element(s).unwrap());
        let t1 = theta(1, &w, &x, &y, &z).unwrap();
        assert_eq!((t1.rows(), t1.get(0, 0)), (1, &w));
        let t2 = theta(2, &w, &x, &y, &z).unwrap();
        assert_eq!(t2.row_vecs(), vec![vec![w.clone(), y.clone()], vec![a.zero(), x.clone()]]);
        let t5 = theta(5, &w, &x, &y, &z).unwrap();
        let diag: Vec<_> = (0..5).map(|i| t5.get(i, i).clone()).collect();
        let sup: Vec<_> = (0..4).map(|i| t5.get(i, i + 1).clone()).collect();
        assert_eq!(diag, [&w, &x, &w, &x, &w].map(Clone::clone));
        assert_eq!(sup, [&y, &z, &y, &z].map(Clone::clone));
        assert!((0..5).all(|i| (0..5).all(|j| j == i || j == i + 1 || t5.get(i, j).is_zero())));
        assert!(theta(0, &w, &x, &y, &z).is_err());
    }

    #[test]
    fn bt1_verdicts() {
        let a = ex72(5, 3);
        let [x1, x2, x3] = ["x1", "x2", "x3"].map(|s| a.parse_element(s).unwrap());
        assert_eq!(check_bt1_hypotheses(&x1, &x1, &x2, &x3).unwrap().verdict, Bt1Verdict::CaseB);
        let bad = check_bt1_hypotheses(&x2, &x3, &x2, &x3).unwrap();
        match bad.verdict {
            Bt1Verdict::Fail(v) => assert!(v.contains(&"(w, x) is an exact pair".to_string())),
            other => panic!("{other:?}"),
        }
        // w = x1 - x2, x = x1 + x2 are independent: case (a) with y = x3, z = x2
        let w = a.parse_element("x1 - x2").unwrap();
        let x = a.parse_element("x1 + x2").unwrap();
        assert_eq!(check_bt1_hypotheses(&w, &x, &x3, &x2).unwrap().verdict, Bt1Verdict::CaseA);
    }

    #[test]
    fn small_family() {
        let a = ex72(5, 3);
        let [x1, x2, x3] = ["x1", "x2", "x3"].map(|s| a.parse_element(s).unwrap());
        let rep = build_family(&x1, &x1, &x2, &x3, 1..=3, &SearchOptions::default()).unwrap();
        assert_eq!(rep.case, "b");
        for (n, m) in (1..).zip(&rep.members) {
            assert_eq!(m.length, 3 * n);
            assert_eq!(m.betti, vec![n; BETTI_WINDOW + 1]);
            assert!(m.indecomposable && m.totally_acyclic);
        }
        assert!(matches!(
            build_family(&x2, &x3, &x2, &x3, 1..=2, &SearchOptions::default()),
            Err(Error::HypothesesFail(_))
        ));
    }

    #[test]
    fn z_search() {
        let a = ex72(5, 3);
        let [x1, x2, x3] = ["x1", "x2", "x3"].map(|s| a.parse_element(s).unwrap());
        assert_eq!(find_z_for_y(&x1, &x1, &x2).unwrap(), Some(x3));
        assert!(matches!(find_z_for_y(&x1, &x1, &a.one()), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn bt2_data_and_lift_condition() {
        let a = ex72(5, 4);
        let x1 = a.parse_element("x1").unwrap();
        let (y, yp, z) = find_bt2_data(&x1, &x1).unwrap();
        let rep = check_bt2_hypotheses(3, &x1, &x1, &y, &yp, &z).unwrap();
        assert_eq!(rep.variant, Some('d'));
        let one = a.one();
        let close = a.parse_element("1 + x2").unwrap();
        let err = bt2_family(3, &x1, &x1, &y, &yp, &z, &[one, close], &SearchOptions::default()).unwrap_err();
        assert!(matches!(err, Error::HypothesesFail(_)));
    }
}
