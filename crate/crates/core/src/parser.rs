//! Text formats: algebra presentations, polynomial expressions, matrices.
//!
//! An algebra file is a sequence of `key = value` statements:
//!
//! ```text
//! # a short ring with Hilbert series 1 + 4t + 3t^2
//! field = GF(5)
//! vars = s t u v
//! relations = s^2, s*v, t^2, t*v, u^2, u*v, v^2 - s*t - s*u
//! degree_cap = 6
//! ```
//!
//! `field` is `GF(p)`, `GF(p^n; modulus)` or `QQ`. The modulus is a monic
//! polynomial in an indeterminate of the user's choosing; that name then
//! denotes the field generator inside expressions, e.g. `(1-a)*s + a*t`.
//! Expressions support `+ - * / ^` and parentheses; `/` only by nonzero
//! rational constants. `#` starts a comment that runs to the end of the line.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::field::{with_field, Coeff, Field, FieldSpec, FieldVisitor};

pub const DEFAULT_DEGREE_CAP: usize = 6;
const MAX_EXPONENT: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at line {line}, column {column}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("relation {index} is not homogeneous")]
    NonHomogeneousRelation { index: usize },
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("invalid field: {0}")]
    InvalidField(String),
}

impl ParseError {
    fn at(kind: ParseErrorKind, pos: Pos) -> Self {
        ParseError {
            kind,
            line: pos.line,
            column: pos.column,
        }
    }
}

fn syntax(msg: impl Into<String>, pos: Pos) -> ParseError {
    ParseError::at(ParseErrorKind::Syntax(msg.into()), pos)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Semi,
    Eq,
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Eq => write!(f, "`=`"),
            Tok::Newline => write!(f, "end of line"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        if c == '\n' {
            chars.next();
            out.push((Tok::Newline, pos));
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                chars.next();
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                chars.next();
                column += 1;
            }
            out.push((Tok::Int(s.parse().expect("digits")), pos));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '_') {
                s.push(d);
                chars.next();
                column += 1;
            }
            out.push((Tok::Ident(s), pos));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '=' => Tok::Eq,
            other => return Err(syntax(format!("unexpected character `{other}`"), pos)),
        };
        chars.next();
        column += 1;
        out.push((tok, pos));
    }
    out.push((Tok::Eof, Pos { line, column }));
    Ok(out)
}

/// A polynomial with coefficients in the (not yet reduced) coefficient ring:
/// a map from exponent vectors to [`Coeff`]s, zero terms omitted.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PolyExpr {
    pub terms: BTreeMap<Vec<u32>, Coeff>,
}

impl PolyExpr {
    fn constant(c: Coeff, nvars: usize) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        PolyExpr { terms }
    }

    fn variable(k: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, Coeff::integer(1));
        PolyExpr { terms }
    }

    fn add(mut self, other: PolyExpr) -> Self {
        for (m, c) in other.terms {
            let sum = match self.terms.remove(&m) {
                Some(old) => old.add(&c),
                None => c,
            };
            if !sum.is_zero() {
                self.terms.insert(m, sum);
            }
        }
        self
    }

    fn neg(self) -> Self {
        PolyExpr {
            terms: self.terms.into_iter().map(|(m, c)| (m, c.neg())).collect(),
        }
    }

    fn mul(&self, other: &PolyExpr) -> Self {
        let mut out = PolyExpr::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Vec<u32> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                let mut single = BTreeMap::new();
                single.insert(m, c1.mul(c2));
                out = out.add(PolyExpr { terms: single });
            }
        }
        out
    }

    /// The constant coefficient if the expression has no other terms.
    fn as_constant(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degrees of the terms present.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|m| m.iter().sum()).collect();
        d.sort();
        d.dedup();
        d
    }

    /// Drops terms whose coefficient vanishes in the field.
    fn normalize_in(mut self, spec: &FieldSpec) -> Result<Self, crate::error::Error> {
        let mut kept = BTreeMap::new();
        for (m, c) in std::mem::take(&mut self.terms) {
            if !coeff_vanishes(spec, &c)? {
                kept.insert(m, c);
            }
        }
        Ok(PolyExpr { terms: kept })
    }
}

struct VanishVisitor<'a>(&'a Coeff);

impl FieldVisitor for VanishVisitor<'_> {
    type Output = crate::error::Result<bool>;
    fn visit<F: Field>(self, field: F) -> Self::Output {
        Ok(field.is_zero(&field.from_coeff(self.0)?))
    }
}

fn coeff_vanishes(spec: &FieldSpec, c: &Coeff) -> crate::error::Result<bool> {
    with_field(spec, VanishVisitor(c))?
}

/// Parsed contents of an algebra file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationSource {
    pub field: FieldSpec,
    pub variables: Vec<String>,
    pub relations: Vec<PolyExpr>,
    pub degree_cap: usize,
}

struct Parser<'a> {
    toks: &'a [(Tok, Pos)],
    i: usize,
    /// Ring variables, in declaration order.
    vars: &'a [String],
    /// Name of the field generator, if any.
    generator: Option<&'a str>,
    skip_newlines: bool,
}

impl<'a> Parser<'a> {
    fn new(toks: &'a [(Tok, Pos)], vars: &'a [String], generator: Option<&'a str>) -> Self {
        Parser {
            toks,
            i: 0,
            vars,
            generator,
            skip_newlines: true,
        }
    }

    fn skip_nl(&mut self) {
        if self.skip_newlines {
            while self.toks[self.i].0 == Tok::Newline {
                self.i += 1;
            }
        }
    }

    fn peek(&mut self) -> &(Tok, Pos) {
        self.skip_nl();
        &self.toks[self.i]
    }

    fn next(&mut self) -> (Tok, Pos) {
        self.skip_nl();
        let t = self.toks[self.i].clone();
        if t.0 != Tok::Eof {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Pos, ParseError> {
        let (t, pos) = self.next();
        if t == want {
            Ok(pos)
        } else {
            Err(syntax(format!("expected {want}, found {t}"), pos))
        }
    }

    fn at_statement_start(&mut self) -> bool {
        self.skip_nl();
        matches!(self.toks[self.i].0, Tok::Ident(_))
            && self.toks.get(self.i + 1).is_some_and(|t| t.0 == Tok::Eq)
    }

    fn expr(&mut self) -> Result<PolyExpr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().0 {
                Tok::Plus => {
                    self.next();
                    acc = acc.add(self.term()?);
                }
                Tok::Minus => {
                    self.next();
                    acc = acc.add(self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<PolyExpr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().0 {
                Tok::Star => {
                    self.next();
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Slash => {
                    let (_, pos) = self.next();
                    let d = self.unary()?;
                    let inv = rational_inverse(&d)
                        .ok_or_else(|| syntax("division only by nonzero rational constants", pos))?;
                    acc = acc.mul(&PolyExpr::constant(inv, self.vars.len()));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<PolyExpr, ParseError> {
        match self.peek().0 {
            Tok::Minus => {
                self.next();
                Ok(self.unary()?.neg())
            }
            Tok::Plus => {
                self.next();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<PolyExpr, ParseError> {
        let base = self.atom()?;
        if self.peek().0 != Tok::Caret {
            return Ok(base);
        }
        self.next();
        let (t, pos) = self.next();
        let Tok::Int(n) = t else {
            return Err(syntax(format!("expected exponent, found {t}"), pos));
        };
        let n = n
            .to_u64()
            .filter(|&n| n <= MAX_EXPONENT)
            .ok_or_else(|| syntax(format!("exponent larger than {MAX_EXPONENT}"), pos))?;
        let mut acc = PolyExpr::constant(Coeff::integer(1), self.vars.len());
        for _ in 0..n {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<PolyExpr, ParseError> {
        let (t, pos) = self.next();
        let nvars = self.vars.len();
        match t {
            Tok::Int(n) => Ok(PolyExpr::constant(
                Coeff::constant(BigRational::from_integer(n)),
                nvars,
            )),
            Tok::Ident(name) => {
                if let Some(k) = self.vars.iter().position(|v| *v == name) {
                    Ok(PolyExpr::variable(k, nvars))
                } else if self.generator == Some(name.as_str()) {
                    Ok(PolyExpr::constant(Coeff::generator(), nvars))
                } else {
                    Err(ParseError::at(ParseErrorKind::UnknownVariable(name), pos))
                }
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            other => Err(syntax(format!("expected a term, found {other}"), pos)),
        }
    }
}

fn rational_inverse(d: &PolyExpr) -> Option<Coeff> {
    let c = d.as_constant()?;
    match c.0.as_slice() {
        [r] if !r.is_zero() => Some(Coeff::constant(r.recip())),
        _ => None,
    }
}

/// Parses an algebra-definition file.
pub fn parse_presentation(text: &str) -> Result<PresentationSource, crate::error::Error> {
    let toks = tokenize(text)?;
    let mut field: Option<(FieldSpec, Pos)> = None;
    let mut vars: Option<Vec<String>> = None;
    let mut relation_toks: Option<(usize, Pos)> = None;
    let mut degree_cap = DEFAULT_DEGREE_CAP;

    let none: [String; 0] = [];
    let mut p = Parser::new(&toks, &none, None);
    loop {
        let (t, pos) = p.next();
        let key = match t {
            Tok::Eof => break,
            Tok::Ident(k) => k,
            other => return Err(syntax(format!("expected a `key = value` line, found {other}"), pos).into()),
        };
        p.expect(Tok::Eq)?;
        match key.as_str() {
            "field" => {
                let spec = parse_field(&mut p)?;
                field = Some((spec, pos));
            }
            "vars" => {
                let mut names: Vec<String> = Vec::new();
                while !p.at_statement_start() {
                    let (t, vpos) = p.next();
                    match t {
                        Tok::Ident(name) => {
                            if names.contains(&name) {
                                return Err(ParseError::at(
                                    ParseErrorKind::DuplicateVariable(name),
                                    vpos,
                                )
                                .into());
                            }
                            names.push(name);
                        }
                        Tok::Comma => {}
                        Tok::Eof => break,
                        other => {
                            return Err(syntax(format!("expected a variable name, found {other}"), vpos).into())
                        }
                    }
                }
                if names.is_empty() {
                    return Err(syntax("`vars` lists no variables", pos).into());
                }
                vars = Some(names);
            }
            "relations" => {
                // Parsed once the variables are known; skip ahead for now.
                relation_toks = Some((p.i, pos));
                skip_to_statement(&mut p);
            }
            "degree_cap" => {
                let (t, cpos) = p.next();
                match t {
                    Tok::Int(n) => {
                        degree_cap = n
                            .to_usize()
                            .filter(|&n| (1..=64).contains(&n))
                            .ok_or_else(|| syntax("degree_cap must be between 1 and 64", cpos))?;
                    }
                    other => return Err(syntax(format!("expected an integer, found {other}"), cpos).into()),
                }
                if !p.at_statement_start() && p.peek().0 != Tok::Eof {
                    let (t, pos) = p.next();
                    return Err(syntax(format!("unexpected {t}"), pos).into());
                }
            }
            other => return Err(syntax(format!("unknown key `{other}`"), pos).into()),
        }
    }

    let end = toks.last().expect("eof").1;
    let (field, _) = field.ok_or_else(|| syntax("missing `field = ...`", end))?;
    let vars = vars.ok_or_else(|| syntax("missing `vars = ...`", end))?;
    let (rel_start, rel_pos) = relation_toks.ok_or_else(|| syntax("missing `relations = ...`", end))?;
    let generator = field.generator();
    if let Some(g) = generator {
        if vars.iter().any(|v| v == g) {
            return Err(ParseError::at(
                ParseErrorKind::InvalidField(format!(
                    "field generator `{g}` clashes with a ring variable"
                )),
                rel_pos,
            )
            .into());
        }
    }

    let mut rp = Parser::new(&toks, &vars, generator);
    rp.i = rel_start;
    let mut relations = Vec::new();
    loop {
        let start = rp.peek().1;
        let rel = rp.expr()?.normalize_in(&field)?;
        if rel.degrees().len() > 1 {
            return Err(ParseError::at(
                ParseErrorKind::NonHomogeneousRelation {
                    index: relations.len() + 1,
                },
                start,
            )
            .into());
        }
        relations.push(rel);
        if rp.peek().0 == Tok::Comma {
            rp.next();
            continue;
        }
        if rp.at_statement_start() || rp.peek().0 == Tok::Eof {
            break;
        }
        let (t, pos) = rp.next();
        return Err(syntax(format!("expected `,` or a new statement, found {t}"), pos).into());
    }

    Ok(PresentationSource {
        field,
        variables: vars,
        relations,
        degree_cap,
    })
}

fn skip_to_statement(p: &mut Parser<'_>) {
    while !p.at_statement_start() && p.peek().0 != Tok::Eof {
        p.next();
    }
}

/// Parses a standalone field description such as `GF(101)`,
/// `GF(3^2; a^2 + 1)` or `QQ`.
pub fn parse_field_spec(text: &str) -> Result<FieldSpec, crate::error::Error> {
    let toks = tokenize(text)?;
    let none: [String; 0] = [];
    let mut p = Parser::new(&toks, &none, None);
    let spec = parse_field(&mut p)?;
    let (t, pos) = p.next();
    if t != Tok::Eof {
        return Err(syntax(format!("unexpected {t}"), pos).into());
    }
    Ok(spec)
}

fn parse_field(p: &mut Parser<'_>) -> Result<FieldSpec, crate::error::Error> {
    let (t, pos) = p.next();
    let name = match t {
        Tok::Ident(n) => n,
        other => return Err(syntax(format!("expected a field, found {other}"), pos).into()),
    };
    match name.as_str() {
        "QQ" => Ok(FieldSpec::Rationals),
        "GF" => {
            p.expect(Tok::LParen)?;
            let (t, ppos) = p.next();
            let Tok::Int(pb) = t else {
                return Err(syntax(format!("expected a prime, found {t}"), ppos).into());
            };
            let prime = pb
                .to_u64()
                .ok_or_else(|| syntax("characteristic too large", ppos))?;
            if p.peek().0 == Tok::RParen {
                p.next();
                crate::field::PrimeField::new(prime)?;
                return Ok(FieldSpec::Prime { p: prime });
            }
            p.expect(Tok::Caret)?;
            let (t, npos) = p.next();
            let Tok::Int(nb) = t else {
                return Err(syntax(format!("expected an extension degree, found {t}"), npos).into());
            };
            let n = nb.to_usize().ok_or_else(|| syntax("degree too large", npos))?;
            p.expect(Tok::Semi)?;
            let (generator, modulus) = parse_modulus(p, prime)?;
            p.expect(Tok::RParen)?;
            if modulus.len() != n + 1 {
                return Err(crate::error::Error::InvalidModulus(format!(
                    "GF({prime}^{n}) needs a modulus of degree {n}, got degree {}",
                    modulus.len().saturating_sub(1)
                )));
            }
            crate::field::ExtensionField::new(prime, modulus.clone(), generator.clone())?;
            Ok(FieldSpec::Extension {
                p: prime,
                modulus,
                generator,
            })
        }
        other => Err(ParseError::at(
            ParseErrorKind::InvalidField(format!("unknown field `{other}`")),
            pos,
        )
        .into()),
    }
}

/// Parses the modulus polynomial; its single indeterminate names the
/// generator. Returns coefficients reduced mod `p`, constant term first.
fn parse_modulus(p: &mut Parser<'_>, prime: u64) -> Result<(String, Vec<u64>), crate::error::Error> {
    let start = p.i;
    let mut name: Option<String> = None;
    let mut depth = 0usize;
    loop {
        let (t, pos) = p.peek().clone();
        match t {
            Tok::Ident(n) => match &name {
                Some(old) if *old != n => {
                    return Err(syntax("modulus must be a polynomial in one indeterminate", pos).into())
                }
                _ => name = Some(n),
            },
            Tok::LParen => depth += 1,
            Tok::RParen if depth == 0 => break,
            Tok::RParen => depth -= 1,
            Tok::Eof => return Err(syntax("unterminated field specification", pos).into()),
            _ => {}
        }
        p.next();
    }
    let end_pos = p.peek().1;
    let name = name.ok_or_else(|| syntax("modulus has no indeterminate", end_pos))?;
    let vars = [name.clone()];
    let mut mp = Parser::new(p.toks, &vars, None);
    mp.i = start;
    let poly = mp.expr()?;
    if mp.i != p.i {
        let (t, pos) = mp.next();
        return Err(syntax(format!("unexpected {t} in modulus"), pos).into());
    }
    let deg = poly.terms.keys().map(|m| m[0]).max().unwrap_or(0) as usize;
    let mut coeffs = vec![0u64; deg + 1];
    for (m, c) in &poly.terms {
        let r = match c.0.as_slice() {
            [] => 0,
            [r] => crate::field::rational_mod_p(r, prime)?,
            _ => unreachable!("no generator inside the modulus"),
        };
        coeffs[m[0] as usize] = r;
    }
    while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
        coeffs.pop();
    }
    Ok((name, coeffs))
}

/// Parses an expression over the given ring variables (and optional field
/// generator) into a [`PolyExpr`].
pub fn parse_poly(
    text: &str,
    vars: &[String],
    generator: Option<&str>,
) -> Result<PolyExpr, ParseError> {
    let toks = tokenize(text)?;
    parse_poly_tokens(&toks, vars, generator)
}

fn parse_poly_tokens(
    toks: &[(Tok, Pos)],
    vars: &[String],
    generator: Option<&str>,
) -> Result<PolyExpr, ParseError> {
    let mut p = Parser::new(toks, vars, generator);
    if p.peek().0 == Tok::Eof {
        return Err(syntax("empty expression", p.peek().1));
    }
    let e = p.expr()?;
    let (t, pos) = p.next();
    if t != Tok::Eof {
        return Err(syntax(format!("unexpected {t}"), pos));
    }
    Ok(e)
}

/// Splits matrix text into rows (`;` or newline) and entries (`,`) and parses
/// each entry. Ragged rows are reported before any entry is parsed.
pub fn parse_poly_matrix(
    text: &str,
    vars: &[String],
    generator: Option<&str>,
) -> Result<Vec<Vec<PolyExpr>>, ParseError> {
    let toks = tokenize(text)?;
    let eof = toks.last().expect("eof").clone();
    let mut rows: Vec<Vec<Vec<(Tok, Pos)>>> = Vec::new();
    let mut row_pos: Vec<Pos> = Vec::new();
    let mut cur_row: Vec<Vec<(Tok, Pos)>> = vec![Vec::new()];
    let mut cur_pos: Option<Pos> = None;
    let mut depth = 0usize;
    let flush = |cur_row: &mut Vec<Vec<(Tok, Pos)>>,
                 rows: &mut Vec<Vec<Vec<(Tok, Pos)>>>,
                 row_pos: &mut Vec<Pos>,
                 cur_pos: &mut Option<Pos>| {
        let row = std::mem::replace(cur_row, vec![Vec::new()]);
        if row.len() == 1 && row[0].is_empty() {
            return; // blank line
        }
        rows.push(row);
        row_pos.push(cur_pos.take().expect("nonempty row has a position"));
    };
    for (t, pos) in &toks {
        match t {
            Tok::LParen => depth += 1,
            Tok::RParen => depth = depth.saturating_sub(1),
            _ => {}
        }
        match t {
            Tok::Eof => break,
            Tok::Semi | Tok::Newline if depth == 0 => {
                if *t == Tok::Semi && cur_pos.is_none() {
                    return Err(syntax("empty row", *pos));
                }
                flush(&mut cur_row, &mut rows, &mut row_pos, &mut cur_pos);
            }
            Tok::Newline => {}
            Tok::Comma if depth == 0 => {
                cur_pos.get_or_insert(*pos);
                cur_row.push(Vec::new());
            }
            _ => {
                cur_pos.get_or_insert(*pos);
                cur_row.last_mut().expect("row").push((t.clone(), *pos));
            }
        }
    }
    flush(&mut cur_row, &mut rows, &mut row_pos, &mut cur_pos);

    if let Some(first) = rows.first() {
        let expected = first.len();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != expected {
                return Err(ParseError::at(
                    ParseErrorKind::RaggedRows {
                        row: r + 1,
                        expected,
                        found: row.len(),
                    },
                    row_pos[r],
                ));
            }
        }
    }
    let mut out = Vec::with_capacity(rows.len());
    for (r, row) in rows.into_iter().enumerate() {
        let mut parsed = Vec::with_capacity(row.len());
        for mut entry in row {
            if entry.is_empty() {
                return Err(syntax("empty matrix entry", row_pos[r]));
            }
            let end = entry.last().expect("nonempty").1;
            entry.push((Tok::Eof, end));
            parsed.push(parse_poly_tokens(&entry, vars, generator)?);
        }
        out.push(parsed);
    }
    let _ = eof;
    Ok(out)
}

/// Reduces an exponent-vector polynomial's coefficients into a concrete field.
pub fn poly_coefficients<F: Field>(
    field: &F,
    poly: &PolyExpr,
) -> crate::error::Result<Vec<(Vec<u32>, F::Elem)>> {
    let mut out = Vec::new();
    for (m, c) in &poly.terms {
        let v = field.from_coeff(c)?;
        if !field.is_zero(&v) {
            out.push((m.clone(), v));
        }
    }
    Ok(out)
}

/// Checks that variable names are distinct; used by generated presentations.
pub fn check_variables(vars: &[String]) -> Result<(), ParseError> {
    let mut seen = HashSet::new();
    for v in vars {
        if !seen.insert(v) {
            return Err(ParseError::at(
                ParseErrorKind::DuplicateVariable(v.clone()),
                Pos { line: 1, column: 1 },
            ));
        }
    }
    Ok(())
}
