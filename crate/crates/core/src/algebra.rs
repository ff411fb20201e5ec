//! Standard graded artinian algebras `k[x_1..x_n]/I` with `I` homogeneous.
//!
//! Each graded component is computed by linear algebra: the degree-`d` part
//! of `I` is spanned by the variable multiples of the degree-`d-1` part
//! together with the relations of degree `d`. Within a degree, monomials are
//! ordered lexicographically with `x_1 > x_2 > ...`; the ideal is put in
//! reduced echelon form with the *smallest* monomial as pivot, so the basis of
//! `R_d` consists of the largest monomials not eliminated. For the ring
//! `k[s,t,u,v]/(s^2, sv, t^2, tv, u^2, uv, v^2 - st - su)` this gives the basis
//! `st, su, tu` of `R_2`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, axpy, is_zero_vec, Matrix, Subspace};
use crate::parser::{self, PolyExpr, PresentationSource};

type Sparse<E> = Vec<(usize, E)>;

/// One graded piece: the monomials of `S_d` and their normal forms in `R`.
#[derive(Clone, Debug)]
struct Component<E> {
    monomials: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    /// Normal form of each monomial as a sparse vector over the global basis.
    normal_forms: Vec<Sparse<E>>,
    /// Echelon basis of `I_d`, in monomial coordinates.
    ideal: Vec<Vec<E>>,
}

#[derive(Clone, Debug)]
pub struct GradedAlgebra<F: Field> {
    field: F,
    vars: Vec<String>,
    degree_cap: usize,
    components: Vec<Component<F::Elem>>,
    basis: Vec<Vec<u32>>,
    offsets: Vec<usize>,
    table: Vec<Sparse<F::Elem>>,
}

/// Monomials of degree `d` in `n` variables, lexicographically decreasing.
pub fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a);
            rec(n, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

fn monomial_name(vars: &[String], m: &[u32]) -> String {
    let parts: Vec<String> = m
        .iter()
        .zip(vars)
        .filter(|(e, _)| **e > 0)
        .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl<F: Field> GradedAlgebra<F> {
    /// Builds the algebra; `field` must be the field named in `src`.
    pub fn build(field: F, src: &PresentationSource) -> Result<Arc<Self>> {
        if field.spec() != src.field {
            return Err(Error::UnsupportedField(format!(
                "presentation is over {} but the field handle is {}",
                src.field,
                field.spec()
            )));
        }
        parser::check_variables(&src.variables)?;
        let n = src.variables.len();
        let mut rels: HashMap<u32, Vec<Vec<(Vec<u32>, F::Elem)>>> = HashMap::new();
        for r in &src.relations {
            let terms = parser::poly_coefficients(&field, r)?;
            if let Some((m, _)) = terms.first() {
                rels.entry(m.iter().sum()).or_default().push(terms);
            }
        }
        if rels.contains_key(&0) {
            return Err(Error::PreconditionFailed(
                "relations generate the unit ideal".into(),
            ));
        }

        let mut components: Vec<Component<F::Elem>> = Vec::new();
        let mut basis: Vec<Vec<u32>> = Vec::new();
        let mut offsets = vec![0usize];
        let mut d = 0u32;
        loop {
            let mons = monomials(n, d);
            let index: HashMap<Vec<u32>, usize> =
                mons.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            let len = mons.len();
            // Column c of the working space is monomial len-1-c, so echelon
            // pivots land on the smallest monomials.
            let rev = |i: usize| len - 1 - i;
            let mut gens: Vec<Vec<F::Elem>> = Vec::new();
            if d > 0 {
                let prev = &components[d as usize - 1];
                for row in &prev.ideal {
                    for k in 0..n {
                        let mut v = vec![field.zero(); len];
                        for (i, c) in row.iter().enumerate() {
                            if field.is_zero(c) {
                                continue;
                            }
                            let mut m = prev.monomials[i].clone();
                            m[k] += 1;
                            v[rev(index[&m])] = c.clone();
                        }
                        gens.push(v);
                    }
                }
            }
            for terms in rels.get(&d).into_iter().flatten() {
                let mut v = vec![field.zero(); len];
                for (m, c) in terms {
                    let j = rev(index[m]);
                    v[j] = field.add(&v[j], c);
                }
                gens.push(v);
            }
            let ideal = Subspace::span(&field, len, gens);
            let dim = len - ideal.dim();
            if dim == 0 {
                break;
            }
            if d as usize > src.degree_cap {
                return Err(Error::NotArtinianWithinCap {
                    cap: src.degree_cap,
                    dim: offsets[d as usize] - offsets[d as usize - 1],
                });
            }

            let mut is_pivot = vec![false; len];
            for &p in ideal.pivots() {
                is_pivot[p] = true;
            }
            // basis monomials in increasing monomial index = decreasing column
            let start = basis.len();
            let mut local: HashMap<usize, usize> = HashMap::new();
            for i in 0..len {
                if !is_pivot[rev(i)] {
                    local.insert(rev(i), start + local.len());
                    basis.push(mons[i].clone());
                }
            }
            let mut normal_forms: Vec<Sparse<F::Elem>> = vec![Vec::new(); len];
            for i in 0..len {
                let c = rev(i);
                if let Some(&g) = local.get(&c) {
                    normal_forms[i] = vec![(g, field.one())];
                }
            }
            for (row, &p) in ideal.basis().iter().zip(ideal.pivots()) {
                let mut nf: Sparse<F::Elem> = Vec::new();
                for (c, v) in row.iter().enumerate() {
                    if c != p && !field.is_zero(v) {
                        nf.push((local[&c], field.neg(v)));
                    }
                }
                nf.sort_by_key(|(g, _)| *g);
                normal_forms[rev(p)] = nf;
            }
            let ideal_rows = ideal
                .basis()
                .iter()
                .map(|row| (0..len).map(|i| row[rev(i)].clone()).collect())
                .collect();
            components.push(Component {
                monomials: mons,
                index,
                normal_forms,
                ideal: ideal_rows,
            });
            offsets.push(basis.len());
            d += 1;
        }
        // the first vanishing component, kept for its ideal (used by callers
        // that need I_{top+1}, e.g. the quadric matrix of a generic algebra)
        let dim = basis.len();
        let top = components.len() - 1;
        let mut alg = GradedAlgebra {
            field,
            vars: src.variables.clone(),
            degree_cap: src.degree_cap,
            components,
            basis,
            offsets,
            table: Vec::new(),
        };
        let mut table = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let (a, b) = (&alg.basis[i], &alg.basis[j]);
                let deg = (a.iter().sum::<u32>() + b.iter().sum::<u32>()) as usize;
                if deg > top {
                    table.push(Vec::new());
                    continue;
                }
                let m: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let comp = &alg.components[deg];
                table.push(comp.normal_forms[comp.index[&m]].clone());
            }
        }
        alg.table = table;
        alg.check_structure()?;
        Ok(Arc::new(alg))
    }

    fn check_structure(&self) -> Result<()> {
        let f = &self.field;
        let n = self.dim();
        let unit = |i: usize| {
            let mut v = vec![f.zero(); n];
            v[i] = f.one();
            v
        };
        for i in 0..n {
            for j in 0..n {
                if self.table[i * n + j] != self.table[j * n + i] {
                    return Err(Error::AssocCheckFailed("commutativity"));
                }
            }
        }
        // Exhaustive on small algebras, otherwise with a degree-one factor
        // (which generates, so associativity follows by induction).
        let firsts: Vec<usize> = if n * n * n <= 200_000 {
            (0..n).collect()
        } else {
            self.degree_range(1).collect()
        };
        for &i in &firsts {
            let bi = unit(i);
            for j in 0..n {
                let bij = self.mul_coords(&bi, &unit(j));
                for k in 0..n {
                    let bk = unit(k);
                    let left = self.mul_coords(&bij, &bk);
                    let right = self.mul_coords(&bi, &self.mul_coords(&unit(j), &bk));
                    if left != right {
                        return Err(Error::AssocCheckFailed("associativity"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    /// `dim_k R`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Embedding dimension `dim_k m/m^2`.
    pub fn e(&self) -> usize {
        self.hilbert().get(1).copied().unwrap_or(0)
    }

    pub fn top_degree(&self) -> usize {
        self.offsets.len() - 2
    }

    pub fn hilbert(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Global basis indices of `R_d` (empty beyond the top degree).
    pub fn degree_range(&self, d: usize) -> std::ops::Range<usize> {
        if d + 1 < self.offsets.len() {
            self.offsets[d]..self.offsets[d + 1]
        } else {
            self.dim()..self.dim()
        }
    }

    pub fn degree_of(&self, index: usize) -> usize {
        self.basis[index].iter().sum::<u32>() as usize
    }

    pub fn basis_monomial(&self, index: usize) -> &[u32] {
        &self.basis[index]
    }

    pub fn basis_names(&self) -> Vec<String> {
        self.basis.iter().map(|m| monomial_name(&self.vars, m)).collect()
    }

    /// Monomials of `S_d` in the canonical order (`d <= top + 1`).
    pub fn ambient_monomials(&self, d: usize) -> Vec<Vec<u32>> {
        monomials(self.vars.len(), d as u32)
    }

    /// An echelon basis of the degree-`d` component of the defining ideal, in
    /// the coordinates of [`Self::ambient_monomials`]. Available for
    /// `d <= top_degree`; see [`Self::ideal_component_full`] beyond.
    pub fn ideal_component(&self, d: usize) -> Vec<Vec<F::Elem>> {
        if d < self.components.len() {
            self.components[d].ideal.clone()
        } else {
            let len = monomials(self.vars.len(), d as u32).len();
            Subspace::full(&self.field, len).basis().to_vec()
        }
    }

    pub fn is_short(&self) -> bool {
        self.top_degree() <= 2
    }

    /// Product of coordinate vectors through the structure constants.
    pub fn mul_coords(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let n = self.dim();
        let mut out = vec![f.zero(); n];
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if f.is_zero(y) {
                    continue;
                }
                let xy = f.mul(x, y);
                for (k, c) in &self.table[i * n + j] {
                    out[*k] = f.add(&out[*k], &f.mul(&xy, c));
                }
            }
        }
        out
    }

    /// Matrix of `r -> x r` on coordinates: column `j` is `x * b_j`.
    pub fn multiplication_matrix(&self, x: &[F::Elem]) -> Matrix<F::Elem> {
        let f = &self.field;
        let n = self.dim();
        let mut m = Matrix::zeros(f, n, n);
        for (i, xi) in x.iter().enumerate() {
            if f.is_zero(xi) {
                continue;
            }
            for j in 0..n {
                for (k, c) in &self.table[i * n + j] {
                    let v = f.add(m.get(*k, j), &f.mul(xi, c));
                    m.set(*k, j, v);
                }
            }
        }
        m
    }

    pub fn zero_coords(&self) -> Vec<F::Elem> {
        vec![self.field.zero(); self.dim()]
    }

    pub fn unit_coords(&self, i: usize) -> Vec<F::Elem> {
        let mut v = self.zero_coords();
        v[i] = self.field.one();
        v
    }

    /// Normal form of a polynomial given by exponent vectors.
    pub fn poly_coords(&self, poly: &PolyExpr) -> Result<Vec<F::Elem>> {
        let f = &self.field;
        let mut v = self.zero_coords();
        for (m, c) in &poly.terms {
            let d = m.iter().sum::<u32>() as usize;
            if d > self.top_degree() {
                continue;
            }
            let c = f.from_coeff(c)?;
            if f.is_zero(&c) {
                continue;
            }
            let comp = &self.components[d];
            for (k, a) in &comp.normal_forms[comp.index[m]] {
                v[*k] = f.add(&v[*k], &f.mul(&c, a));
            }
        }
        Ok(v)
    }

    /// Canonical printer: basis order, explicit coefficients.
    pub fn render_coords(&self, x: &[F::Elem]) -> String {
        let f = &self.field;
        let mut out = String::new();
        for (i, c) in x.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let mut coef = f.render(c);
            let negative = coef.starts_with('-') && is_plain_number(&coef[1..]);
            if negative {
                coef.remove(0);
            } else if !is_plain_number(&coef) {
                coef = format!("({coef})");
            }
            let term = if i == 0 {
                coef
            } else {
                format!("{coef}*{}", monomial_name(&self.vars, &self.basis[i]))
            };
            match (out.is_empty(), negative) {
                (true, false) => out.push_str(&term),
                (true, true) => {
                    out.push('-');
                    out.push_str(&term);
                }
                (false, false) => {
                    out.push_str(" + ");
                    out.push_str(&term);
                }
                (false, true) => {
                    out.push_str(" - ");
                    out.push_str(&term);
                }
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }

    fn closure(&self, mut space: Subspace<F::Elem>, mut queue: Vec<Vec<F::Elem>>) -> Subspace<F::Elem> {
        let f = &self.field;
        let gens: Vec<Vec<F::Elem>> = self.degree_range(1).map(|i| self.unit_coords(i)).collect();
        while let Some(v) = queue.pop() {
            for g in &gens {
                let w = self.mul_coords(g, &v);
                if space.insert(f, &w) {
                    queue.push(w);
                }
            }
        }
        space
    }

    /// The k-span of `gens` closed under multiplication.
    pub fn ideal_span(&self, gens: &[Vec<F::Elem>]) -> Subspace<F::Elem> {
        let f = &self.field;
        let mut space = Subspace::zero(self.dim());
        let mut queue = Vec::new();
        for g in gens {
            if space.insert(f, g) {
                queue.push(g.clone());
            }
        }
        self.closure(space, queue)
    }

    /// Span of the basis elements of degree at least `d`, i.e. `m^d`.
    pub fn power_space(&self, d: usize) -> Subspace<F::Elem> {
        let start = self.offsets.get(d).copied().unwrap_or(self.dim()).min(self.dim());
        Subspace::span(
            &self.field,
            self.dim(),
            (start..self.dim()).map(|i| self.unit_coords(i)),
        )
    }

    /// Coordinates of the degree-one part of `x`.
    pub fn linear_part(&self, x: &[F::Elem]) -> Vec<F::Elem> {
        x[self.degree_range(1)].to_vec()
    }

    /// Inverse of a unit.
    pub fn inverse_coords(&self, x: &[F::Elem]) -> Option<Vec<F::Elem>> {
        if self.field.is_zero(&x[0]) {
            return None;
        }
        linalg::solve(&self.field, &self.multiplication_matrix(x), &self.unit_coords(0))
    }
}

fn is_plain_number(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_digit() || c == '/')
}

/// Element constructors that need a shared handle to the algebra.
pub trait AlgebraHandle<F: Field> {
    fn element(&self, coords: Vec<F::Elem>) -> Result<Element<F>>;
    fn zero(&self) -> Element<F>;
    fn one(&self) -> Element<F>;
    fn basis_element(&self, i: usize) -> Element<F>;
    /// The `k`-th degree-one basis element.
    fn generator(&self, k: usize) -> Element<F>;
    fn generators(&self) -> Vec<Element<F>>;
    fn parse_element(&self, text: &str) -> Result<Element<F>>;
    fn parse_matrix(&self, text: &str) -> Result<Matrix<Element<F>>>;
    fn ideal(&self, space: Subspace<F::Elem>) -> Result<IdealView<F>>;
    fn ideal_generated(&self, gens: &[Element<F>]) -> Result<IdealView<F>>;
    fn maximal_ideal_power(&self, d: usize) -> IdealView<F>;
    fn socle(&self) -> IdealView<F>;
    fn is_gorenstein(&self) -> bool;
    /// `x ∈ (generators) + m^d`.
    fn span_membership_mod(&self, x: &Element<F>, generators: &[Element<F>], d: usize) -> Result<bool>;
    fn lin_indep_mod_m2(&self, xs: &[Element<F>]) -> Result<bool>;
}

impl<F: Field> AlgebraHandle<F> for Arc<GradedAlgebra<F>> {
    fn element(&self, coords: Vec<F::Elem>) -> Result<Element<F>> {
        if coords.len() != self.dim() {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Element {
            alg: self.clone(),
            coords,
        })
    }

    fn zero(&self) -> Element<F> {
        Element {
            alg: self.clone(),
            coords: self.zero_coords(),
        }
    }

    fn one(&self) -> Element<F> {
        self.basis_element(0)
    }

    fn basis_element(&self, i: usize) -> Element<F> {
        Element {
            alg: self.clone(),
            coords: self.unit_coords(i),
        }
    }

    fn generator(&self, k: usize) -> Element<F> {
        self.basis_element(self.degree_range(1).start + k)
    }

    fn generators(&self) -> Vec<Element<F>> {
        self.degree_range(1).map(|i| self.basis_element(i)).collect()
    }

    fn parse_element(&self, text: &str) -> Result<Element<F>> {
        let gen_name = self.field.spec().generator().map(str::to_owned);
        let poly = parser::parse_poly(text, &self.vars, gen_name.as_deref())?;
        let coords = self.poly_coords(&poly)?;
        self.element(coords)
    }

    fn parse_matrix(&self, text: &str) -> Result<Matrix<Element<F>>> {
        let gen_name = self.field.spec().generator().map(str::to_owned);
        let rows = parser::parse_poly_matrix(text, &self.vars, gen_name.as_deref())?;
        let cols = rows.first().map_or(0, Vec::len);
        let mut out = Vec::with_capacity(rows.len());
        for row in rows {
            let mut r = Vec::with_capacity(cols);
            for p in row {
                r.push(self.element(self.poly_coords(&p)?)?);
            }
            out.push(r);
        }
        Ok(Matrix::from_rows(cols, out))
    }

    fn ideal(&self, space: Subspace<F::Elem>) -> Result<IdealView<F>> {
        IdealView::new(self.clone(), space)
    }

    fn ideal_generated(&self, gens: &[Element<F>]) -> Result<IdealView<F>> {
        let mut coords = Vec::with_capacity(gens.len());
        for g in gens {
            g.check(self)?;
            coords.push(g.coords.clone());
        }
        self.ideal(self.ideal_span(&coords))
    }

    fn maximal_ideal_power(&self, d: usize) -> IdealView<F> {
        IdealView::new(self.clone(), self.power_space(d)).expect("m^d is an ideal")
    }

    fn socle(&self) -> IdealView<F> {
        let f = &self.field;
        let n = self.dim();
        let mut space = Subspace::full(f, n);
        for i in self.degree_range(1) {
            let ann = Subspace::span(
                f,
                n,
                linalg::nullspace(f, &self.multiplication_matrix(&self.unit_coords(i))),
            );
            space = space.intersection(f, &ann);
        }
        IdealView::new(self.clone(), space).expect("the socle is an ideal")
    }

    fn is_gorenstein(&self) -> bool {
        self.socle().dim() == 1
    }

    fn span_membership_mod(&self, x: &Element<F>, generators: &[Element<F>], d: usize) -> Result<bool> {
        x.check(self)?;
        let mut gens: Vec<Vec<F::Elem>> = Vec::new();
        for g in generators {
            g.check(self)?;
            gens.push(g.coords.clone());
        }
        gens.extend(self.power_space(d).basis().iter().cloned());
        Ok(self.ideal_span(&gens).contains(&self.field, &x.coords))
    }

    fn lin_indep_mod_m2(&self, xs: &[Element<F>]) -> Result<bool> {
        let mut space = Subspace::zero(self.e());
        for x in xs {
            x.check(self)?;
            if !space.insert(&self.field, &self.linear_part(&x.coords)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// An element of a [`GradedAlgebra`], as coordinates over its graded basis.
#[derive(Clone)]
pub struct Element<F: Field> {
    alg: Arc<GradedAlgebra<F>>,
    coords: Vec<F::Elem>,
}

impl<F: Field> PartialEq for Element<F> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.alg, &other.alg) && self.coords == other.coords
    }
}

impl<F: Field> Eq for Element<F> {}

impl<F: Field> std::hash::Hash for Element<F> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl<F: Field> fmt::Debug for Element<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({})", self.alg.render_coords(&self.coords))
    }
}

impl<F: Field> fmt::Display for Element<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.alg.render_coords(&self.coords))
    }
}

impl<F: Field> Element<F> {
    pub fn algebra(&self) -> &Arc<GradedAlgebra<F>> {
        &self.alg
    }

    pub fn coords(&self) -> &[F::Elem] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<F::Elem> {
        self.coords
    }

    fn check(&self, alg: &Arc<GradedAlgebra<F>>) -> Result<()> {
        if Arc::ptr_eq(&self.alg, alg) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn same_algebra(&self, other: &Element<F>) -> Result<()> {
        other.check(&self.alg)
    }

    fn with(&self, coords: Vec<F::Elem>) -> Element<F> {
        Element {
            alg: self.alg.clone(),
            coords,
        }
    }

    pub fn multiply(&self, other: &Element<F>) -> Result<Element<F>> {
        self.same_algebra(other)?;
        Ok(self.with(self.alg.mul_coords(&self.coords, &other.coords)))
    }

    pub fn try_add(&self, other: &Element<F>) -> Result<Element<F>> {
        self.same_algebra(other)?;
        Ok(self.with(linalg::add_vec(self.alg.field(), &self.coords, &other.coords)))
    }

    pub fn try_sub(&self, other: &Element<F>) -> Result<Element<F>> {
        self.same_algebra(other)?;
        Ok(self.with(linalg::sub_vec(self.alg.field(), &self.coords, &other.coords)))
    }

    pub fn neg(&self) -> Element<F> {
        let f = self.alg.field();
        self.with(self.coords.iter().map(|c| f.neg(c)).collect())
    }

    pub fn scale(&self, c: &F::Elem) -> Element<F> {
        self.with(linalg::scale_vec(self.alg.field(), c, &self.coords))
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &F::Elem, other: &Element<F>) -> Result<Element<F>> {
        self.same_algebra(other)?;
        let mut v = self.coords.clone();
        axpy(self.alg.field(), &mut v, c, &other.coords);
        Ok(self.with(v))
    }

    pub fn pow(&self, e: u32) -> Element<F> {
        let mut acc = self.alg.one();
        for _ in 0..e {
            acc = self.with(self.alg.mul_coords(&acc.coords, &self.coords));
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(self.alg.field(), &self.coords)
    }

    /// Whether the element lies in the maximal ideal.
    pub fn in_m(&self) -> bool {
        self.alg.field().is_zero(&self.coords[0])
    }

    pub fn is_unit(&self) -> bool {
        !self.in_m()
    }

    pub fn inverse(&self) -> Option<Element<F>> {
        self.alg.inverse_coords(&self.coords).map(|c| self.with(c))
    }

    /// Degree-one coordinates, i.e. the image in `m/m^2` for `self ∈ m`.
    pub fn linear_part(&self) -> Vec<F::Elem> {
        self.alg.linear_part(&self.coords)
    }

    /// Homogeneous component of degree `d`.
    pub fn component(&self, d: usize) -> Element<F> {
        let f = self.alg.field();
        let r = self.alg.degree_range(d);
        self.with(
            self.coords
                .iter()
                .enumerate()
                .map(|(i, c)| if r.contains(&i) { c.clone() } else { f.zero() })
                .collect(),
        )
    }

    pub fn multiplication_operator(&self) -> Matrix<F::Elem> {
        self.alg.multiplication_matrix(&self.coords)
    }

    pub fn annihilator(&self) -> IdealView<F> {
        let f = self.alg.field();
        let space = Subspace::span(
            f,
            self.alg.dim(),
            linalg::nullspace(f, &self.multiplication_operator()),
        );
        IdealView::new(self.alg.clone(), space).expect("annihilators are ideals")
    }

    pub fn principal_ideal(&self) -> IdealView<F> {
        let f = self.alg.field();
        let m = self.multiplication_operator();
        let space = Subspace::span(f, self.alg.dim(), (0..m.cols()).map(|j| m.column(j)));
        IdealView::new(self.alg.clone(), space).expect("principal ideals are ideals")
    }

    pub fn render(&self) -> String {
        self.alg.render_coords(&self.coords)
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl<F: Field> std::ops::$tr<&Element<F>> for &Element<F> {
            type Output = Element<F>;
            /// Panics if the operands belong to different algebras.
            fn $method(self, rhs: &Element<F>) -> Element<F> {
                self.$inner(rhs).expect("operands from different algebras")
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, multiply);

impl<F: Field> std::ops::Neg for &Element<F> {
    type Output = Element<F>;
    fn neg(self) -> Element<F> {
        Element::neg(self)
    }
}

/// A k-subspace of the algebra that is closed under multiplication.
#[derive(Clone, Debug)]
pub struct IdealView<F: Field> {
    alg: Arc<GradedAlgebra<F>>,
    space: Subspace<F::Elem>,
}

impl<F: Field> IdealView<F> {
    /// Verifies closure under the degree-one generators.
    pub fn new(alg: Arc<GradedAlgebra<F>>, space: Subspace<F::Elem>) -> Result<Self> {
        let f = alg.field();
        for v in space.basis() {
            for i in alg.degree_range(1) {
                if !space.contains(f, &alg.mul_coords(&alg.unit_coords(i), v)) {
                    return Err(Error::Internal("subspace is not an ideal".into()));
                }
            }
        }
        Ok(IdealView { alg, space })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Alias of [`Self::dim`]: the length of the ideal as an R-module.
    pub fn length(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &Subspace<F::Elem> {
        &self.space
    }

    pub fn basis(&self) -> Vec<Element<F>> {
        self.space
            .basis()
            .iter()
            .map(|v| Element {
                alg: self.alg.clone(),
                coords: v.clone(),
            })
            .collect()
    }

    pub fn contains(&self, x: &Element<F>) -> Result<bool> {
        x.check(&self.alg)?;
        Ok(self.space.contains(self.alg.field(), &x.coords))
    }

    pub fn same_as(&self, other: &IdealView<F>) -> bool {
        Arc::ptr_eq(&self.alg, &other.alg) && self.space.same_as(self.alg.field(), &other.space)
    }

    pub fn is_subideal_of(&self, other: &IdealView<F>) -> bool {
        Arc::ptr_eq(&self.alg, &other.alg) && self.space.is_subspace_of(self.alg.field(), &other.space)
    }

    /// `m · I`.
    pub fn times_m(&self) -> IdealView<F> {
        let mut gens = Vec::new();
        for v in self.space.basis() {
            for i in self.alg.degree_range(1) {
                gens.push(self.alg.mul_coords(&self.alg.unit_coords(i), v));
            }
        }
        let space = Subspace::span(self.alg.field(), self.alg.dim(), gens);
        IdealView::new(self.alg.clone(), space).expect("m I is an ideal")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::parser::parse_presentation;

    pub(crate) const RING8: &str =
        "vars = s t u v\nrelations = s^2, s*v, t^2, t*v, u^2, u*v, v^2 - s*t - s*u";

    fn ring8(p: u64) -> Arc<GradedAlgebra<PrimeField>> {
        let src = parse_presentation(&format!("field = GF({p})\n{RING8}")).unwrap();
        GradedAlgebra::build(PrimeField::new(p).unwrap(), &src).unwrap()
    }

    fn build_p(p: u64, body: &str) -> Arc<GradedAlgebra<PrimeField>> {
        let src = parse_presentation(&format!("field = GF({p})\n{body}")).unwrap();
        GradedAlgebra::build(PrimeField::new(p).unwrap(), &src).unwrap()
    }

    #[test]
    fn monomial_order() {
        let m = monomials(3, 2);
        assert_eq!(
            m,
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![1, 0, 1],
                vec![0, 2, 0],
                vec![0, 1, 1],
                vec![0, 0, 2]
            ]
        );
    }

    #[test]
    fn ring8_structure() {
        let a = ring8(5);
        assert_eq!(a.hilbert(), vec![1, 4, 3]);
        assert_eq!(a.top_degree(), 2);
        assert_eq!(a.basis_names(), ["1", "s", "t", "u", "v", "s*t", "s*u", "t*u"]);
        let x = a.parse_element("s+t+2*u-v").unwrap();
        assert_eq!(x.coords(), &[0, 1, 1, 2, 4, 0, 0, 0]);
        assert!(a.parse_element("s*s").unwrap().is_zero());
        assert!(a.parse_element("0").unwrap().is_zero());
        let v2 = a.parse_element("v^2").unwrap();
        assert_eq!(v2, a.parse_element("s*t + s*u").unwrap());
        assert!(a.maximal_ideal_power(3).dim() == 0);
        let soc = a.socle();
        assert_eq!(soc.dim(), 3);
        assert!(soc.same_as(&a.maximal_ideal_power(2)));
        assert!(!a.is_gorenstein());
        assert!(a.is_short());
    }

    #[test]
    fn exact_pair_product_vanishes() {
        let a = ring8(5);
        let x = a.parse_element("s+t+2*u-v").unwrap();
        let w = a.parse_element("3*s+t-2*u+4*v").unwrap();
        assert!((&x * &w).is_zero());
        assert_eq!(&x * &a.one(), x);
        let st = &a.parse_element("s").unwrap() * &a.parse_element("t").unwrap();
        assert_eq!(st, a.basis_element(5));
    }

    #[test]
    fn products_follow_the_bilinear_formula() {
        // xx' = (ab'+ba'+dd') st + (ac'+ca'+dd') su + (bc'+cb') tu
        let a = ring8(7);
        let (p, q) = ([1u64, 2, 3, 4], [5u64, 6, 0, 2]);
        let x = a.element(vec![0, p[0], p[1], p[2], p[3], 0, 0, 0]).unwrap();
        let y = a.element(vec![0, q[0], q[1], q[2], q[3], 0, 0, 0]).unwrap();
        let prod = &x * &y;
        let st = (p[0] * q[1] + p[1] * q[0] + p[3] * q[3]) % 7;
        let su = (p[0] * q[2] + p[2] * q[0] + p[3] * q[3]) % 7;
        let tu = (p[1] * q[2] + p[2] * q[1]) % 7;
        assert_eq!(&prod.coords()[5..], &[st, su, tu]);
    }

    #[test]
    fn example_seven_two_structure() {
        let a = build_p(2, "vars = x1 x2 x3\nrelations = x1^2, x2^2, x2*x3, x3^2");
        assert_eq!(a.hilbert(), vec![1, 3, 2]);
        let x1 = a.generator(0);
        assert_eq!(linalg::rank(a.field(), &x1.multiplication_operator()), 3);
        let ann = x1.annihilator();
        assert_eq!(ann.dim(), 3);
        assert!(ann.same_as(&x1.principal_ideal()));
        let x2 = a.generator(1);
        assert!(!a.span_membership_mod(&x2, &[x1.clone()], 2).unwrap());
        assert!(a.span_membership_mod(&x1, &[x1.clone()], 2).unwrap());
    }

    #[test]
    fn small_rings() {
        let a = build_p(3, "vars = x\nrelations = x^3");
        assert_eq!(a.hilbert(), vec![1, 1, 1]);
        assert!(a.is_gorenstein() && a.is_short());
        let b = build_p(3, "vars = x y\nrelations = x^2, y^2");
        let soc = b.socle();
        assert_eq!(soc.dim(), 1);
        assert!(soc.contains(&b.parse_element("x*y").unwrap()).unwrap());
        assert!(b.is_gorenstein());
        let c = ring8(2);
        assert!(c.lin_indep_mod_m2(&c.generators()).unwrap());
    }

    #[test]
    fn annihilator_of_units_and_zero() {
        let a = ring8(3);
        assert_eq!(a.one().annihilator().dim(), 0);
        assert_eq!(a.zero().annihilator().dim(), a.dim());
        let u = a.parse_element("1 + s").unwrap();
        let inv = u.inverse().unwrap();
        assert_eq!(&u * &inv, a.one());
    }

    #[test]
    fn not_artinian_within_cap() {
        let src = parse_presentation("field = GF(2)\nvars = x y\nrelations = x^2\ndegree_cap = 4").unwrap();
        let e = GradedAlgebra::build(PrimeField::new(2).unwrap(), &src).unwrap_err();
        assert!(matches!(e, Error::NotArtinianWithinCap { cap: 4, .. }));
        let src = parse_presentation("field = GF(2)\nvars = x\nrelations = x^5\ndegree_cap = 4").unwrap();
        let a = GradedAlgebra::build(PrimeField::new(2).unwrap(), &src).unwrap();
        assert_eq!(a.top_degree(), 4);
    }

    #[test]
    fn rendering_round_trips() {
        let a = ring8(5);
        let x = a.parse_element("s+t+2*u-v + 3*s*t").unwrap();
        assert_eq!(x.render(), "1*s + 1*t + 2*u + 4*v + 3*s*t");
        assert_eq!(a.parse_element(&x.render()).unwrap(), x);
        let src = parse_presentation("field = QQ\nvars = x y\nrelations = x^2, y^2").unwrap();
        let q = GradedAlgebra::build(Rationals, &src).unwrap();
        let y = q.parse_element("-2/3*x + y - x*y/2").unwrap();
        assert_eq!(y.render(), "-2/3*x + 1*y - 1/2*x*y");
        assert_eq!(q.parse_element(&y.render()).unwrap(), y);
    }

    #[test]
    fn mismatched_algebras() {
        let a = ring8(5);
        let b = ring8(5);
        assert_eq!(a.one().multiply(&b.one()).unwrap_err(), Error::AlgebraMismatch);
    }
}
