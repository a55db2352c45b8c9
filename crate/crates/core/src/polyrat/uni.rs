//! Dense univariate polynomials over a finite field.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::ffield::{Fe, Field};

/// Coefficients ascending, no trailing zeros; the zero polynomial is empty.
#[derive(Clone)]
pub struct UniPoly {
    field: Arc<Field>,
    c: Vec<Fe>,
}

impl PartialEq for UniPoly {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.c == other.c
    }
}

impl Eq for UniPoly {}

impl std::hash::Hash for UniPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.id().hash(state);
        self.c.hash(state);
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly[{}]({})", self.field.id(), self.format_var("t"))
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_var("t"))
    }
}

impl UniPoly {
    pub fn new(field: Arc<Field>, mut c: Vec<Fe>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UniPoly { field, c }
    }

    pub fn zero(field: &Arc<Field>) -> Self {
        UniPoly {
            field: Arc::clone(field),
            c: Vec::new(),
        }
    }

    pub fn constant(field: &Arc<Field>, a: Fe) -> Self {
        Self::new(Arc::clone(field), vec![a])
    }

    pub fn one(field: &Arc<Field>) -> Self {
        Self::constant(field, Fe::ONE)
    }

    /// `a·t^e`.
    pub fn monomial(field: &Arc<Field>, a: Fe, e: usize) -> Self {
        let mut c = vec![Fe::ZERO; e + 1];
        c[e] = a;
        Self::new(Arc::clone(field), c)
    }

    pub fn x(field: &Arc<Field>) -> Self {
        Self::monomial(field, Fe::ONE, 1)
    }

    /// `t - a`.
    pub fn linear(field: &Arc<Field>, a: Fe) -> Self {
        Self::new(Arc::clone(field), vec![field.neg(a), Fe::ONE])
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.c.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with `-1` for the zero polynomial.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [Fe::ONE]
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn lead(&self) -> Fe {
        self.c.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == Fe::ONE
    }

    fn same_field(&self, other: &Self) {
        debug_assert!(*self.field == *other.field, "polynomials over different fields");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        let f = &self.field;
        let n = self.c.len().max(other.c.len());
        let c = (0..n)
            .map(|i| f.add(self.coeff(i), other.coeff(i)))
            .collect();
        Self::new(Arc::clone(f), c)
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Self::new(Arc::clone(f), self.c.iter().map(|&a| f.neg(a)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, a: Fe) -> Self {
        let f = &self.field;
        Self::new(Arc::clone(f), self.c.iter().map(|&x| f.mul(x, a)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_field(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        let f = &self.field;
        let mut c = vec![Fe::ZERO; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Self::new(Arc::clone(f), c)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut r = Self::one(&self.field);
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

    /// Euclidean division. Panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        self.same_field(d);
        assert!(!d.is_zero(), "division by the zero polynomial");
        let f = &self.field;
        let dn = d.c.len() - 1;
        if self.c.len() <= dn {
            return (Self::zero(f), self.clone());
        }
        let inv = f.inv(d.lead()).expect("nonzero leading coefficient");
        let mut r = self.c.clone();
        let mut q = vec![Fe::ZERO; r.len() - dn];
        for i in (0..q.len()).rev() {
            let c = f.mul(r[i + dn], inv);
            q[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &dj) in d.c.iter().enumerate() {
                r[i + j] = f.sub(r[i + j], f.mul(c, dj));
            }
        }
        r.truncate(dn);
        (Self::new(Arc::clone(f), q), Self::new(Arc::clone(f), r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Quotient of a division known to be exact.
    pub fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.rem(self).is_zero()
    }

    /// `(lead, self / lead)`; the zero polynomial maps to `(0, 0)`.
    pub fn monic(&self) -> (Fe, Self) {
        let a = self.lead();
        match self.field.inv(a) {
            None => (Fe::ZERO, self.clone()),
            Some(ai) => (a, self.scale(ai)),
        }
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic().1
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.scale(a, i as i64))
            .collect();
        Self::new(Arc::clone(f), c)
    }

    pub fn eval(&self, x: Fe) -> Fe {
        let f = &self.field;
        self.c
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &a| f.add(f.mul(acc, x), a))
    }

    pub fn mulmod(&self, other: &Self, m: &Self) -> Self {
        self.mul(other).rem(m)
    }

    /// `self^e mod m`.
    pub fn powmod(&self, mut e: u64, m: &Self) -> Self {
        let mut r = Self::one(&self.field).rem(m);
        let mut b = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mulmod(&b, m);
            }
            e >>= 1;
            if e > 0 {
                b = b.mulmod(&b, m);
            }
        }
        r
    }

    /// Coefficient-wise `a ↦ a^{p^i}`.
    pub fn frobenius_coeffs(&self, i: u32) -> Self {
        let f = &self.field;
        Self::new(
            Arc::clone(f),
            self.c.iter().map(|&a| f.frobenius(a, i)).collect(),
        )
    }

    /// The `h` with `h^p = self`, if every exponent is divisible by `p`.
    pub fn pth_root(&self) -> Option<Self> {
        let f = &self.field;
        let p = f.characteristic() as usize;
        if self.c.iter().enumerate().any(|(i, a)| i % p != 0 && !a.is_zero()) {
            return None;
        }
        let c = self.c.iter().step_by(p).map(|&a| f.pth_root(a)).collect();
        Some(Self::new(Arc::clone(f), c))
    }

    /// Maps coefficients into another field.
    pub fn map_coeffs(&self, target: &Arc<Field>, phi: impl Fn(Fe) -> Fe) -> Self {
        Self::new(Arc::clone(target), self.c.iter().map(|&a| phi(a)).collect())
    }

    /// Taylor shift: coefficients of `self(a + u)` in `u`.
    pub fn shift(&self, a: Fe) -> Self {
        let f = &self.field;
        let mut c = self.c.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                c[j] = f.add(c[j], f.mul(a, c[j + 1]));
            }
        }
        Self::new(Arc::clone(f), c)
    }

    /// Enumeration order: degree first, then coefficients from the top
    /// down by field index.
    pub fn enum_cmp(&self, other: &Self) -> Ordering {
        self.c
            .len()
            .cmp(&other.c.len())
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }

    pub fn format_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            parts.push(super::format_term(&self.field, a, &mono));
        }
        parts.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::build_field;

    fn p(f: &Arc<Field>, c: &[u32]) -> UniPoly {
        UniPoly::new(Arc::clone(f), c.iter().map(|&x| Fe(x)).collect())
    }

    #[test]
    fn division_identity() {
        let f = build_field(3, 2).unwrap();
        let a = p(&f, &[1, 4, 0, 7, 2, 5]);
        let b = p(&f, &[3, 0, 8]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.deg() < b.deg());
    }

    #[test]
    fn gcd_is_monic_common_divisor() {
        let f = build_field(5, 1).unwrap();
        let g = p(&f, &[2, 1]);
        let a = g.mul(&p(&f, &[1, 1, 1]));
        let b = g.mul(&p(&f, &[3, 0, 1]));
        let d = a.gcd(&b);
        assert!(d.is_monic());
        assert!(d.divides(&a) && d.divides(&b));
        assert_eq!(d, g);
    }

    #[test]
    fn shift_matches_evaluation() {
        let f = build_field(2, 3).unwrap();
        let a = p(&f, &[3, 5, 0, 1, 6]);
        for s in f.elements() {
            let sh = a.shift(s);
            for u in f.elements() {
                assert_eq!(sh.eval(u), a.eval(f.add(s, u)));
            }
        }
    }

    #[test]
    fn pth_root_inverts_power() {
        let f = build_field(3, 2).unwrap();
        let a = p(&f, &[2, 5, 1]);
        assert_eq!(a.pow(3).pth_root().unwrap(), a);
        assert!(a.pth_root().is_none());
    }
}
