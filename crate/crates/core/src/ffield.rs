//! Finite fields `F_{p^k}` for desk-scale enumeration.
//!
//! Elements are stored as their coefficient vector `(a_0, …, a_{k-1})` over
//! `Z/p` packed into the integer `Σ a_i p^i`. Integer order on that index is
//! the lexicographic order on `(a_{k-1}, …, a_0)`, which is the element
//! enumeration order used by every deterministic choice in the crate
//! (moduli, generators, embeddings, factor ordering).
//!
//! Multiplication goes through exp/log tables of a multiplicative generator,
//! so every field is capped in size (see [`DEFAULT_FIELD_CAP`]).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Largest field cardinality that will be constructed.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 20;

/// A field element: packed coefficient vector over `Z/p`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }
}

/// Identifies a field up to the canonical construction: `F_{p^k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldId {
    pub p: u32,
    pub k: u32,
}

impl fmt::Display for FieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.k)
    }
}

impl FieldId {
    /// Parses the `p^k` descriptor syntax (a bare `p` means `k = 1`).
    pub fn parse(s: &str) -> Result<FieldId> {
        let s = s.trim();
        let (p, k) = match s.split_once('^') {
            Some((p, k)) => (p.trim(), k.trim()),
            None => (s, "1"),
        };
        let p: u32 = p
            .parse()
            .map_err(|_| Error::Parse(format!("bad characteristic in `{s}`")))?;
        let k: u32 = k
            .parse()
            .map_err(|_| Error::Parse(format!("bad degree in `{s}`")))?;
        Ok(FieldId { p, k })
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub struct Field {
    id: FieldId,
    size: u32,
    /// Monic modulus `a_0, …, a_k`; `None` for the prime field.
    modulus: Option<Vec<u32>>,
    pow_p: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    generator: Fe,
    order_primes: Vec<u64>,
    trace_basis: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("id", &self.id)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for Field {}

// ---------------------------------------------------------------------------
// Arithmetic in F_p[x] used only during construction.

fn digits(mut idx: u32, p: u32, k: u32) -> Vec<u32> {
    let mut v = Vec::with_capacity(k as usize);
    for _ in 0..k {
        v.push(idx % p);
        idx /= p;
    }
    v
}

fn undigits(v: &[u32], p: u32) -> u32 {
    v.iter().rev().fold(0, |acc, &a| acc * p + a)
}

fn ptrim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn pmod(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    ptrim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let c = r[r.len() - 1] * lead_inv % p;
        let shift = r.len() - 1 - dm;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
        }
        ptrim(&mut r);
    }
    r
}

fn pmul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] += x as u64 * y as u64;
        }
    }
    let mut r: Vec<u32> = r.into_iter().map(|c| (c % p as u64) as u32).collect();
    ptrim(&mut r);
    r
}

fn pgcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    ptrim(&mut a);
    ptrim(&mut b);
    while !b.is_empty() {
        let r = pmod(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a as u64, p as u64 - 2, p as u64) as u32
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// `x^(p^i) mod f` by repeated p-th powering.
fn x_pow_p_iter(f: &[u32], p: u32, i: u32) -> Vec<u32> {
    let mut cur = pmod(&[0, 1], f, p);
    for _ in 0..i {
        let mut r = vec![1u32];
        let mut base = cur.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                r = pmod(&pmul(&r, &base, p), f, p);
            }
            base = pmod(&pmul(&base, &base, p), f, p);
            e >>= 1;
        }
        cur = r;
    }
    cur
}

/// Irreducibility over F_p of a monic polynomial of degree k ≥ 2, by
/// `gcd(f, x^{p^i} - x) = 1` for `1 ≤ i ≤ k/2`.
fn is_irreducible_fp(f: &[u32], p: u32) -> bool {
    let k = f.len() as u32 - 1;
    if f[0] == 0 {
        return k == 1;
    }
    for i in 1..=k / 2 {
        let mut h = x_pow_p_iter(f, p, i);
        if h.len() < 2 {
            h.resize(2, 0);
        }
        h[1] = (h[1] + p - 1) % p;
        ptrim(&mut h);
        let g = pgcd(f, &h, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree k over F_p, in the
/// order of the tuple `(a_{k-1}, …, a_0)`.
fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    let count = (p as u64).pow(k);
    for idx in 0..count {
        let mut f = digits(idx as u32, p, k);
        f.push(1);
        if is_irreducible_fp(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.id.p;
        match &self.modulus {
            None => ((a as u64 * b as u64) % p as u64) as u32,
            Some(m) => {
                let k = self.id.k;
                let prod = pmul(&digits(a, p, k), &digits(b, p, k), p);
                let mut r = pmod(&prod, m, p);
                r.resize(k as usize, 0);
                undigits(&r, p)
            }
        }
    }

    fn slow_pow(&self, a: u32, mut e: u64) -> u32 {
        let mut r = 1u32;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.slow_mul(r, b);
            }
            b = self.slow_mul(b, b);
            e >>= 1;
        }
        r
    }

    fn construct(p: u32, k: u32) -> Field {
        let size = (p as u64).pow(k) as u32;
        let modulus = if k == 1 {
            None
        } else {
            Some(smallest_irreducible(p, k))
        };
        let pow_p: Vec<u32> = (0..=k).map(|i| (p as u64).pow(i) as u32).collect();
        let order = size as u64 - 1;
        let order_primes = prime_factors(order);
        let mut field = Field {
            id: FieldId { p, k },
            size,
            modulus,
            pow_p,
            exp: Vec::new(),
            log: Vec::new(),
            generator: Fe::ONE,
            order_primes,
            trace_basis: Vec::new(),
        };
        // generator: first element (enumeration order) of full order
        let gen = if size == 2 {
            1
        } else {
            (2..size)
                .find(|&c| {
                    field
                        .order_primes
                        .iter()
                        .all(|&r| field.slow_pow(c, order / r) != 1)
                })
                .expect("multiplicative group is cyclic")
        };
        field.generator = Fe(gen);
        let n = order as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; size as usize];
        let mut cur = 1u32;
        for i in 0..n {
            exp[i] = cur;
            exp[i + n] = cur;
            log[cur as usize] = i as u32;
            cur = field.slow_mul(cur, gen);
        }
        field.exp = exp;
        field.log = log;
        field.trace_basis = (0..k)
            .map(|i| {
                let xi = Fe(field.pow_p[i as usize]);
                let mut acc = Fe::ZERO;
                let mut y = xi;
                for _ in 0..k {
                    acc = field.add(acc, y);
                    y = field.pow(y, p as u64);
                }
                debug_assert!(acc.0 < p);
                acc.0
            })
            .collect();
        field
    }

    pub fn id(&self) -> FieldId {
        self.id
    }

    pub fn characteristic(&self) -> u32 {
        self.id.p
    }

    pub fn degree(&self) -> u32 {
        self.id.k
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// Order of the multiplicative group.
    pub fn order(&self) -> u64 {
        self.size as u64 - 1
    }

    /// Modulus coefficients `a_0, …, a_k` (monic), absent for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    /// The class of `x` in `F_p[x]/(modulus)`, written `g` in text syntax.
    pub fn poly_generator(&self) -> Option<Fe> {
        (self.id.k > 1).then_some(Fe(self.id.p))
    }

    /// The multiplicative generator fixed by the enumeration-order scan.
    pub fn generator(&self) -> Fe {
        self.generator
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.size).map(Fe)
    }

    pub fn coeffs(&self, x: Fe) -> Vec<u32> {
        digits(x.0, self.id.p, self.id.k)
    }

    /// Packs a coefficient vector (reduced mod p, and mod the modulus when
    /// longer than k).
    pub fn from_coeffs(&self, c: &[i64]) -> Fe {
        let p = self.id.p as i64;
        let g = self.poly_generator();
        let mut acc = Fe::ZERO;
        let mut gp = Fe::ONE;
        for (i, &ci) in c.iter().enumerate() {
            if i > 0 {
                gp = match g {
                    Some(g) => self.mul(gp, g),
                    None => gp,
                };
            }
            let ci = ci.rem_euclid(p) as u32;
            if ci != 0 {
                if i > 0 && g.is_none() {
                    // prime field: the symbol g is meaningless, treat as 0
                    continue;
                }
                acc = self.add(acc, self.mul(Fe(ci), gp));
            }
        }
        acc
    }

    pub fn from_int(&self, c: i64) -> Fe {
        Fe(c.rem_euclid(self.id.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.id.p;
        if p == 2 {
            return Fe(a.0 ^ b.0);
        }
        if self.id.k == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= p { s - p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut r = 0;
        let mut place = 1;
        while x > 0 || y > 0 {
            let s = x % p + y % p;
            r += if s >= p { s - p } else { s } * place;
            x /= p;
            y /= p;
            place *= p;
        }
        Fe(r)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        let p = self.id.p;
        if p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut r = 0;
        let mut place = 1;
        while x > 0 {
            let d = x % p;
            if d != 0 {
                r += (p - d) * place;
            }
            x /= p;
            place *= p;
        }
        Fe(r)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    /// Multiplies by an integer scalar.
    pub fn scale(&self, a: Fe, c: i64) -> Fe {
        self.mul(a, self.from_int(c))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let i = self.log[a.0 as usize] + self.log[b.0 as usize];
        Fe(self.exp[i as usize])
    }

    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.is_zero() {
            return None;
        }
        let n = self.order() as u32;
        let l = self.log[a.0 as usize];
        Some(Fe(self.exp[((n - l) % n) as usize]))
    }

    /// `a / b`; panics on division by zero.
    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b).expect("division by zero in finite field"))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let n = self.order();
        let l = self.log[a.0 as usize] as u64;
        Fe(self.exp[((l * (e % n)) % n) as usize])
    }

    /// `a^{p^i}` (the i-th power of absolute Frobenius).
    pub fn frobenius(&self, a: Fe, i: u32) -> Fe {
        if a.is_zero() {
            return a;
        }
        let n = self.order();
        let mut e = 1u64;
        for _ in 0..(i % self.id.k) {
            e = e * self.id.p as u64 % n.max(1);
        }
        self.pow(a, e)
    }

    /// `a^{1/p}`, computed as `a^{p^{k-1}}`.
    pub fn pth_root(&self, a: Fe) -> Fe {
        self.frobenius(a, self.id.k - 1)
    }

    /// Discrete log with respect to the fixed generator (table lookup).
    #[inline]
    pub fn log(&self, a: Fe) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize])
    }

    #[inline]
    pub fn exp(&self, i: u64) -> Fe {
        Fe(self.exp[(i % self.order()) as usize])
    }

    /// Absolute trace `Tr_{F_{p^k}/F_p}(a)` as an integer in `[0, p)`.
    #[inline]
    pub fn abs_trace(&self, a: Fe) -> u32 {
        let p = self.id.p;
        let mut x = a.0;
        let mut acc = 0u32;
        for &t in &self.trace_basis {
            acc += (x % p) * t;
            x /= p;
        }
        acc % p
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Fe) -> Option<u64> {
        let l = self.log(a)? as u64;
        let n = self.order();
        Some(n / gcd(l, n))
    }

    pub fn is_generator(&self, a: Fe) -> bool {
        !a.is_zero()
            && self
                .order_primes
                .iter()
                .all(|&r| self.pow(a, self.order() / r) != Fe::ONE)
    }

    /// Discrete logarithm by baby-step giant-step: returns `e` in
    /// `[0, |F|-1)` with `gen^e = x`.
    pub fn dlog(&self, x: Fe, gen: Fe) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::ZeroLog);
        }
        if !self.is_generator(gen) {
            return Err(Error::NotGenerator);
        }
        let n = self.order();
        let m = (n as f64).sqrt().ceil() as u64;
        let mut baby: HashMap<Fe, u64> = HashMap::with_capacity(m as usize);
        let mut cur = Fe::ONE;
        for j in 0..m {
            baby.entry(cur).or_insert(j);
            cur = self.mul(cur, gen);
        }
        let giant = self.inv(self.pow(gen, m)).expect("generator is nonzero");
        let mut y = x;
        for i in 0..=m {
            if let Some(&j) = baby.get(&y) {
                return Ok((i * m + j) % n);
            }
            y = self.mul(y, giant);
        }
        unreachable!("generator spans the multiplicative group")
    }

    /// Renders in `g`-notation, highest power first: `g^2+g+1`, `2*g`, `0`.
    pub fn format(&self, x: Fe) -> String {
        let c = self.coeffs(x);
        let mut parts = Vec::new();
        for (i, &a) in c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            };
            parts.push(match (a, i) {
                (_, 0) => a.to_string(),
                (1, _) => mono,
                _ => format!("{a}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }

    /// Parses `g`-notation: integer-coefficient polynomial in `g`, reduced
    /// mod p and the modulus. `g` is rejected in a prime field.
    pub fn parse(&self, s: &str) -> Result<Fe> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty element".into()));
        }
        let mut acc = Fe::ZERO;
        for (sign, term) in split_signed_terms(&s)? {
            let v = self.parse_term(term)?;
            acc = if sign < 0 {
                self.sub(acc, v)
            } else {
                self.add(acc, v)
            };
        }
        Ok(acc)
    }

    fn parse_term(&self, t: &str) -> Result<Fe> {
        let bad = || Error::Parse(format!("bad element term `{t}`"));
        let (coef, rest) = match t.find('g') {
            None => return t.parse::<i64>().map(|c| self.from_int(c)).map_err(|_| bad()),
            Some(0) => (1i64, t),
            Some(pos) => {
                let c = t[..pos].trim_end_matches('*');
                (c.parse::<i64>().map_err(|_| bad())?, &t[pos..])
            }
        };
        let g = self
            .poly_generator()
            .ok_or_else(|| Error::Parse(format!("`g` used in prime field F_{}", self.id.p)))?;
        let e = match rest.strip_prefix('g').ok_or_else(bad)? {
            "" => 1u64,
            r => r
                .strip_prefix('^')
                .and_then(|x| x.parse::<u64>().ok())
                .ok_or_else(bad)?,
        };
        Ok(self.mul(self.from_int(coef), self.pow(g, e)))
    }

    /// Checked constructor for a public [`Element`].
    pub fn element(self: &Arc<Self>, x: Fe) -> Element {
        Element {
            field: Arc::clone(self),
            value: x,
        }
    }
}

/// Splits `a+b-c` into signed terms at parenthesis depth 0.
pub(crate) fn split_signed_terms(s: &str) -> Result<Vec<(i32, &str)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut sign = 1;
    let mut start = 0;
    let mut depth = 0i32;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 => {
                if i == start {
                    if i != 0 {
                        return Err(Error::Parse(format!("empty term in `{s}`")));
                    }
                } else {
                    out.push((sign, &s[start..i]));
                }
                sign = if b == b'-' { -1 } else { 1 };
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parentheses in `{s}`")));
    }
    if start >= s.len() {
        return Err(Error::Parse(format!("trailing sign in `{s}`")));
    }
    out.push((sign, &s[start..]));
    Ok(out)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// An element together with its field, for the checked public operations.
#[derive(Clone)]
pub struct Element {
    pub field: Arc<Field>,
    pub value: Fe,
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in F_{}", self.field.format(self.value), self.field.id())
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.field.id() == other.field.id() && self.value == other.value
    }
}

impl Eq for Element {}

// ---------------------------------------------------------------------------
// Construction caches.

fn field_cache() -> &'static Mutex<HashMap<FieldId, Arc<Field>>> {
    static CACHE: OnceLock<Mutex<HashMap<FieldId, Arc<Field>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds (or fetches from the cache) `F_{p^k}` with the default cap.
pub fn build_field(p: u32, k: u32) -> Result<Arc<Field>> {
    build_field_with_cap(p, k, DEFAULT_FIELD_CAP)
}

pub fn build_field_with_cap(p: u32, k: u32, cap: u64) -> Result<Arc<Field>> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if k == 0 {
        return Err(Error::ZeroDegree);
    }
    let size = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(Error::FieldTooLarge { size, cap });
    }
    let id = FieldId { p, k };
    if let Some(f) = field_cache().lock().unwrap().get(&id) {
        return Ok(Arc::clone(f));
    }
    let f = Arc::new(Field::construct(p, k));
    let mut cache = field_cache().lock().unwrap();
    Ok(Arc::clone(cache.entry(id).or_insert(f)))
}

/// A ring embedding `F_{p^a} → F_{p^b}`, tabulated on all source elements.
pub struct Embedding {
    source: Arc<Field>,
    target: Arc<Field>,
    generator_image: Fe,
    table: Vec<Fe>,
    inverse: HashMap<Fe, Fe>,
}

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Embedding(F_{} -> F_{}, g -> {})",
            self.source.id(),
            self.target.id(),
            self.target.format(self.generator_image)
        )
    }
}

impl Embedding {
    pub fn source(&self) -> &Arc<Field> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Field> {
        &self.target
    }

    /// Image of the source's polynomial generator `g` (of 1 for prime fields).
    pub fn generator_image(&self) -> Fe {
        self.generator_image
    }

    #[inline]
    pub fn apply(&self, x: Fe) -> Fe {
        self.table[x.0 as usize]
    }

    pub fn preimage(&self, y: Fe) -> Option<Fe> {
        self.inverse.get(&y).copied()
    }

    fn from_image(source: Arc<Field>, target: Arc<Field>, beta: Fe) -> Embedding {
        let k = source.degree();
        let table: Vec<Fe> = source
            .elements()
            .map(|x| {
                let c = source.coeffs(x);
                let mut acc = Fe::ZERO;
                for i in (0..k as usize).rev() {
                    acc = target.add(target.mul(acc, beta), Fe(c[i]));
                }
                acc
            })
            .collect();
        let inverse = table
            .iter()
            .enumerate()
            .map(|(i, &y)| (y, Fe(i as u32)))
            .collect();
        Embedding {
            source,
            target,
            generator_image: beta,
            table,
            inverse,
        }
    }
}

fn embed_cache() -> &'static Mutex<HashMap<(FieldId, FieldId), Arc<Embedding>>> {
    static CACHE: OnceLock<Mutex<HashMap<(FieldId, FieldId), Arc<Embedding>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The fixed embedding `sub → sup`.
///
/// The image of `g` is the first root of `sub`'s modulus (in `sup`'s
/// enumeration order) whose induced map agrees with the fixed embeddings of
/// all maximal proper subfields of `sub`; this makes the embeddings
/// transitive along towers.
pub fn embed(sub: &Arc<Field>, sup: &Arc<Field>) -> Result<Arc<Embedding>> {
    let (a, b) = (sub.id(), sup.id());
    if a.p != b.p {
        return Err(Error::CharacteristicMismatch(a.p, b.p));
    }
    if b.k % a.k != 0 {
        return Err(Error::DegreeNotDividing { sub: a.k, sup: b.k });
    }
    if let Some(e) = embed_cache().lock().unwrap().get(&(a, b)) {
        return Ok(Arc::clone(e));
    }
    let e = if a.k == 1 {
        Arc::new(Embedding::from_image(
            Arc::clone(sub),
            Arc::clone(sup),
            Fe::ONE,
        ))
    } else {
        let modulus = sub.modulus().expect("non-prime field has a modulus");
        // constraints from maximal proper subfields F ⊂ sub of degree > 1
        let mut constraints = Vec::new();
        for l in prime_factors(a.k as u64) {
            let kf = a.k / l as u32;
            if kf > 1 {
                let f = build_field(a.p, kf)?;
                let into_sub = embed(&f, sub)?;
                let into_sup = embed(&f, sup)?;
                let gf = f.poly_generator().expect("degree > 1");
                constraints.push((sub.coeffs(into_sub.apply(gf)), into_sup.apply(gf)));
            }
        }
        let eval = |c: &[u32], x: Fe| -> Fe {
            c.iter()
                .rev()
                .fold(Fe::ZERO, |acc, &ci| sup.add(sup.mul(acc, x), Fe(ci)))
        };
        let beta = sup
            .elements()
            .find(|&x| {
                eval(modulus, x).is_zero() && constraints.iter().all(|(c, want)| eval(c, x) == *want)
            })
            .expect("subfield of a finite field embeds");
        Arc::new(Embedding::from_image(Arc::clone(sub), Arc::clone(sup), beta))
    };
    let mut cache = embed_cache().lock().unwrap();
    Ok(Arc::clone(cache.entry((a, b)).or_insert(e)))
}

/// Relative trace and norm of `x ∈ sup` down to `sub`:
/// `Σ x^{q^i}` and `Π x^{q^i}` for `i < [sup:sub]`, with `q = |sub|`.
pub fn rel_trace_norm(x: &Element, sub: &Arc<Field>) -> Result<(Element, Element)> {
    let sup = &x.field;
    let emb = embed(sub, sup)?;
    let (tr, nm) = rel_trace_norm_raw(sup, x.value, sub.degree());
    let back = |y: Fe| {
        emb.preimage(y)
            .expect("Frobenius-fixed element lies in the subfield")
    };
    Ok((sub.element(back(tr)), sub.element(back(nm))))
}

/// Trace and norm to the subfield of degree `sub_k` over F_p, computed in
/// the big field.
pub fn rel_trace_norm_raw(sup: &Field, x: Fe, sub_k: u32) -> (Fe, Fe) {
    let d = sup.degree() / sub_k;
    let mut tr = Fe::ZERO;
    let mut nm = Fe::ONE;
    let mut y = x;
    for _ in 0..d {
        tr = sup.add(tr, y);
        nm = sup.mul(nm, y);
        y = sup.frobenius(y, sub_k);
    }
    (tr, nm)
}
