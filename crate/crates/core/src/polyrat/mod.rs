//! Polynomials and rational functions over `F_{q^d}`.
//!
//! [`Poly`] is sparse and multivariate; it carries the user-facing text
//! grammar and the Frobenius-twist constructions. Univariate algebra
//! (gcd, factoring, Artin–Schreier reduction) runs on the dense
//! [`UniPoly`].
//!
//! Text grammar: sums of products of factors, each factor one of an integer,
//! `g`, a variable (`t` when univariate, `t1 … tn` otherwise) or a
//! parenthesised expression, optionally raised to `^e`. Canonical output
//! uses `coef*t1^e1*...*tn^en` terms joined by `+`, compound coefficients
//! parenthesised.

mod asreduce;
mod factor;
mod ratfunc;
mod uni;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub use asreduce::{as_reduce, ASLocalData, WildPoint};
pub use factor::{
    factorize, factorize_uni, factorize_with_seed, is_irreducible, perfect_power_test,
    perfect_power_uni, roots_in_field, squarefree_decomp, squarefree_decomp_uni, SqfDecomp,
};
pub use ratfunc::{trace_rational, RatFunc};
pub use uni::UniPoly;

use crate::error::{Error, Result};
use crate::ffield::{Fe, Field};

pub(crate) fn format_term(field: &Field, a: Fe, mono: &str) -> String {
    if mono.is_empty() {
        return field.format(a);
    }
    if a == Fe::ONE {
        return mono.to_string();
    }
    let s = field.format(a);
    if s.contains('+') {
        format!("({s})*{mono}")
    } else {
        format!("{s}*{mono}")
    }
}

/// Sparse polynomial in `n ≥ 1` variables; no zero coefficients stored.
#[derive(Clone)]
pub struct Poly {
    field: Arc<Field>,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Fe>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.nvars == other.nvars && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}; n={}]({})", self.field.id(), self.nvars, self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (e, &a) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    let v = self.var_name(i);
                    if x == 1 {
                        v
                    } else {
                        format!("{v}^{x}")
                    }
                })
                .collect();
            parts.push(format_term(&self.field, a, &mono.join("*")));
        }
        f.write_str(&parts.join("+"))
    }
}

impl Poly {
    pub fn zero(field: &Arc<Field>, nvars: usize) -> Self {
        assert!(nvars >= 1, "at least one variable");
        Poly {
            field: Arc::clone(field),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Arc<Field>, nvars: usize, a: Fe) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(vec![0; nvars], a);
        p
    }

    pub fn one(field: &Arc<Field>, nvars: usize) -> Self {
        Self::constant(field, nvars, Fe::ONE)
    }

    /// The variable `t_{i+1}`.
    pub fn var(field: &Arc<Field>, nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(field, nvars);
        p.add_term(e, Fe::ONE);
        p
    }

    pub fn from_terms(
        field: &Arc<Field>,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Fe)>,
    ) -> Self {
        let mut p = Self::zero(field, nvars);
        for (e, a) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(e, a);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, a: Fe) {
        if a.is_zero() {
            return;
        }
        let f = &self.field;
        let entry = self.terms.entry(e).or_insert(Fe::ZERO);
        *entry = f.add(*entry, a);
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn parse(field: &Arc<Field>, nvars: usize, s: &str) -> Result<Self> {
        Parser::new(field, nvars, s).parse()
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Fe> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Fe> {
        match self.terms.len() {
            0 => Some(Fe::ZERO),
            1 => {
                let (e, &a) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then_some(a)
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u64).sum())
            .max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    fn var_name(&self, i: usize) -> String {
        if self.nvars == 1 {
            "t".into()
        } else {
            format!("t{}", i + 1)
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if *self.field != *other.field {
            return Err(Error::FieldMismatch {
                expected: self.field.id(),
                found: other.field.id(),
            });
        }
        if self.nvars != other.nvars {
            return Err(Error::VariableMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other).expect("compatible polynomials");
        let mut r = self.clone();
        for (e, &a) in &other.terms {
            r.add_term(e.clone(), a);
        }
        r
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Poly {
            field: Arc::clone(f),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, &a)| (e.clone(), f.neg(a))).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Fe) -> Self {
        let f = &self.field;
        Self::from_terms(
            f,
            self.nvars,
            self.terms.iter().map(|(e, &a)| (e.clone(), f.mul(a, c))),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other).expect("compatible polynomials");
        let f = &self.field;
        let mut acc: BTreeMap<Vec<u32>, Fe> = BTreeMap::new();
        for (e1, &a) in &self.terms {
            for (e2, &b) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                let v = acc.entry(e).or_insert(Fe::ZERO);
                *v = f.add(*v, f.mul(a, b));
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Poly {
            field: Arc::clone(f),
            nvars: self.nvars,
            terms: acc,
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut r = Self::one(&self.field, self.nvars);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    /// Evaluation at a point of the coefficient field.
    pub fn eval(&self, x: &[Fe]) -> Fe {
        assert_eq!(x.len(), self.nvars);
        let f = &self.field;
        self.terms.iter().fold(Fe::ZERO, |acc, (e, &a)| {
            let m = e
                .iter()
                .zip(x)
                .fold(a, |m, (&k, &xi)| f.mul(m, f.pow(xi, k as u64)));
            f.add(acc, m)
        })
    }

    /// Applies a coefficient map into another field.
    pub fn map_coeffs(&self, target: &Arc<Field>, phi: impl Fn(Fe) -> Fe) -> Self {
        Self::from_terms(
            target,
            self.nvars,
            self.terms.iter().map(|(e, &a)| (e.clone(), phi(a))),
        )
    }

    /// Substitutes `t_j ↦ t_j^k` in every variable.
    pub fn inflate(&self, k: u32) -> Self {
        Poly {
            field: Arc::clone(&self.field),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, &a)| (e.iter().map(|&x| x * k).collect(), a))
                .collect(),
        }
    }

    /// Whether every coefficient lies in the subfield of degree `sub_k`
    /// over `F_p` (fixed by `a ↦ a^{p^{sub_k}}`).
    pub fn is_over_subfield(&self, sub_k: u32) -> bool {
        self.terms
            .values()
            .all(|&a| self.field.frobenius(a, sub_k) == a)
    }

    pub fn to_uni(&self) -> Result<UniPoly> {
        if self.nvars != 1 {
            return Err(Error::NotUnivariate(self.nvars));
        }
        let deg = self.degree_in(0).unwrap_or(0) as usize;
        let mut c = vec![Fe::ZERO; deg + 1];
        for (e, &a) in &self.terms {
            c[e[0] as usize] = a;
        }
        Ok(UniPoly::new(Arc::clone(&self.field), c))
    }

    pub fn from_uni(u: &UniPoly) -> Self {
        Self::from_terms(
            u.field(),
            1,
            u.coeffs()
                .iter()
                .enumerate()
                .map(|(i, &a)| (vec![i as u32], a)),
        )
    }
}

/// `σ^i` applied to the coefficients (`σ = ` the `q`-power Frobenius,
/// `q = p^{q_exp}`); negative `i` is taken modulo `d`.
pub fn sigma_act(f: &Poly, i: i64, q_exp: u32, d: u32) -> Poly {
    let e = i.rem_euclid(d as i64) as u32;
    let field = f.field();
    f.map_coeffs(field, |a| field.frobenius(a, q_exp * e))
}

/// `Π_{i<d} f(t_1^{q^i}, …, t_n^{q^i})`.
pub fn norm_product(f: &Poly, q_exp: u32, d: u32) -> Poly {
    let q = f.field().characteristic().pow(q_exp);
    let mut acc = Poly::one(f.field(), f.nvars());
    let mut k = 1u32;
    for _ in 0..d {
        acc = acc.mul(&f.inflate(k));
        k = k.checked_mul(q).unwrap_or(k);
    }
    acc
}

struct Parser<'a> {
    field: &'a Arc<Field>,
    nvars: usize,
    s: Vec<u8>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(field: &'a Arc<Field>, nvars: usize, s: &str) -> Self {
        Parser {
            field,
            nvars,
            s: s.bytes().filter(|b| !b.is_ascii_whitespace()).collect(),
            pos: 0,
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "{msg} at position {} in `{}`",
            self.pos,
            String::from_utf8_lossy(&self.s)
        ))
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<Poly> {
        if self.s.is_empty() {
            return Err(self.err("empty polynomial"));
        }
        let p = self.expr()?;
        if self.pos != self.s.len() {
            return Err(self.err("unexpected character"));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = Poly::zero(self.field, self.nvars);
        let mut first = true;
        loop {
            let neg = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => break,
            };
            first = false;
            let t = self.term()?;
            acc = if neg { acc.sub(&t) } else { acc.add(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("number out of range"))
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                e
            }
            Some(b) if b.is_ascii_digit() => {
                let v = self.number()?;
                let p = self.field.characteristic() as u64;
                Poly::constant(self.field, self.nvars, self.field.from_int((v % p) as i64))
            }
            Some(b'g') => {
                self.pos += 1;
                let g = self
                    .field
                    .poly_generator()
                    .ok_or_else(|| self.err("`g` used in a prime field"))?;
                Poly::constant(self.field, self.nvars, g)
            }
            Some(b't') => {
                self.pos += 1;
                let idx = if self.peek().is_some_and(|b| b.is_ascii_digit()) {
                    let i = self.number()? as usize;
                    if i == 0 || i > self.nvars {
                        return Err(self.err("variable index out of range"));
                    }
                    i - 1
                } else if self.nvars == 1 {
                    0
                } else {
                    return Err(self.err("bare `t` in a multivariate polynomial"));
                };
                Poly::var(self.field, self.nvars, idx)
            }
            _ => return Err(self.err("expected a factor")),
        };
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.number()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }
}
