//! Exact arithmetic in `Z[ζ_N]`.
//!
//! A value is stored in canonical form: the unique representative of degree
//! `< φ(N)` modulo the cyclotomic polynomial `Φ_N`. Since `1, ζ, …, ζ^{φ-1}`
//! is an integral basis, two values are equal exactly when their canonical
//! coefficient vectors are.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Largest cyclotomic order the crate will build `Φ_N` for.
pub const MAX_CYCLOTOMIC_ORDER: u32 = 1 << 22;

fn divisors(n: u32) -> Vec<u32> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn mobius(mut n: u32) -> i32 {
    let mut mu = 1;
    let mut p = 2u32;
    while (p as u64) * (p as u64) <= n as u64 {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// `Φ_N` (dense, ascending, monic), via `Φ_N = Π_{d | N} (x^d - 1)^{μ(N/d)}`.
///
/// Equivalent to the recursive division `(x^N - 1) / Π_{d | N, d < N} Φ_d`
/// (checked in tests) but linear in `N` per factor.
pub fn cyclotomic_poly(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return Arc::clone(p);
    }
    assert!(
        (1..=MAX_CYCLOTOMIC_ORDER).contains(&n),
        "cyclotomic order {n} out of range"
    );
    let divs = divisors(n);
    let mut poly = vec![1i64];
    // multiply first, then divide: every intermediate quotient is exact
    for &d in &divs {
        if mobius(n / d) == 1 {
            let d = d as usize;
            let mut r = vec![0i64; poly.len() + d];
            for (i, &c) in poly.iter().enumerate() {
                r[i] -= c;
                r[i + d] += c;
            }
            poly = r;
        }
    }
    for &d in &divs {
        if mobius(n / d) == -1 {
            let d = d as usize;
            // poly = q·(x^d - 1)  ⇒  q[i] = q[i-d] - poly[i]
            let mut q = vec![0i64; poly.len() - d];
            for i in 0..q.len() {
                let prev = if i >= d { q[i - d] } else { 0 };
                q[i] = prev - poly[i];
            }
            poly = q;
        }
    }
    let phi = Arc::new(poly);
    cache.lock().unwrap().insert(n, Arc::clone(&phi));
    phi
}

/// An exact element of `Z[ζ_N]` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycValue {
    order: u32,
    coeffs: Vec<i64>,
}

/// A nonnegative real approximation with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Approx {
    pub value: f64,
    pub err: f64,
}

impl CycValue {
    pub fn zero(order: u32) -> Self {
        let deg = cyclotomic_poly(order).len() - 1;
        CycValue {
            order,
            coeffs: vec![0; deg],
        }
    }

    pub fn from_int(order: u32, c: i64) -> Self {
        Self::from_terms(order, &[(0, c)])
    }

    pub fn one(order: u32) -> Self {
        Self::from_int(order, 1)
    }

    /// `ζ_N^r`.
    pub fn root(order: u32, r: u64) -> Self {
        Self::from_terms(order, &[(r, 1)])
    }

    /// Canonical form of `Σ c ζ_N^r` over the given terms.
    pub fn from_terms(order: u32, terms: &[(u64, i64)]) -> Self {
        let mut hist = vec![0i64; order as usize];
        for &(r, c) in terms {
            hist[(r % order as u64) as usize] += c;
        }
        Self::from_histogram(order, hist)
    }

    /// Canonical form of `Σ_r hist[r] ζ_N^r` (`hist.len() == N`).
    pub fn from_histogram(order: u32, mut hist: Vec<i64>) -> Self {
        assert_eq!(hist.len(), order as usize);
        let phi = cyclotomic_poly(order);
        let deg = phi.len() - 1;
        let nz: Vec<(usize, i64)> = phi[..deg]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, c))
            .collect();
        for i in (deg..hist.len()).rev() {
            let c = hist[i];
            if c != 0 {
                let shift = i - deg;
                for &(j, pj) in &nz {
                    hist[shift + j] -= c * pj;
                }
                hist[i] = 0;
            }
        }
        hist.truncate(deg);
        CycValue {
            order,
            coeffs: hist,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Canonical coefficients of `1, ζ, …, ζ^{φ(N)-1}`.
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Nonzero canonical terms `(exponent, coefficient)`, ascending.
    pub fn terms(&self) -> Vec<(u32, i64)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i as u32, c))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The value as an ordinary integer, if it is one.
    pub fn as_integer(&self) -> Option<i64> {
        if self.coeffs.iter().skip(1).all(|&c| c == 0) {
            Some(self.coeffs.first().copied().unwrap_or(0))
        } else {
            None
        }
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.order, other.order, "cyclotomic order mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        CycValue {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn scale(&self, c: i64) -> Self {
        CycValue {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let n = self.order as usize;
        let mut hist = vec![0i64; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                hist[(i + j) % n] += a * b;
            }
        }
        Self::from_histogram(self.order, hist)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut r = Self::one(self.order);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }

    /// Complex conjugate, via `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let n = self.order as u64;
        let terms: Vec<(u64, i64)> = self
            .terms()
            .into_iter()
            .map(|(r, c)| ((n - r as u64) % n, c))
            .collect();
        Self::from_terms(self.order, &terms)
    }

    /// Exact division by an integer, if every canonical coefficient is
    /// divisible (the basis is integral, so this is exact divisibility in
    /// `Z[ζ_N]`).
    pub fn div_exact(&self, k: i64) -> Option<Self> {
        if k == 0 || self.coeffs.iter().any(|c| c % k != 0) {
            return None;
        }
        Some(CycValue {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c / k).collect(),
        })
    }

    pub fn l1_norm(&self) -> i64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Evaluation at `ζ_N = e^{2πi/N}` with its certified error bound
    /// `(Σ|c_r|)·ε·N`.
    pub fn to_complex(&self) -> (Complex64, f64) {
        let n = self.order as f64;
        let mut z = Complex64::new(0.0, 0.0);
        for (r, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                let th = TAU * r as f64 / n;
                z += Complex64::new(th.cos(), th.sin()) * c as f64;
            }
        }
        let err = self.l1_norm() as f64 * f64::EPSILON * n.max(1.0);
        (z, err)
    }

    /// `|v|` with certified error bound.
    pub fn abs(&self) -> Approx {
        let (z, err) = self.to_complex();
        Approx {
            value: z.norm(),
            err,
        }
    }

    /// Compares `|v|` with `c·√q` (c ≥ 0). Numerically ambiguous cases are
    /// settled exactly: `|v|² = v·v̄` is compared with `c²q` for equality
    /// in `Z[ζ_N]`.
    pub fn cmp_abs_with_sqrt(&self, c: i64, q: u64) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let a = self.abs();
        let bound = c as f64 * (q as f64).sqrt();
        let slack = a.err + bound * f64::EPSILON * 4.0;
        if a.value < bound - slack {
            return Ordering::Less;
        }
        if a.value > bound + slack {
            return Ordering::Greater;
        }
        let sq = self.mul(&self.conj());
        let target = CycValue::from_int(self.order, c * c * q as i64);
        if sq == target {
            return Ordering::Equal;
        }
        // not equal: the sign of |v|² − c²q from its evaluation
        let (z, err) = sq.sub(&target).to_complex();
        if z.re.abs() > err {
            if z.re < 0.0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else {
            // a nonzero algebraic integer smaller than the rounding error
            // of its own evaluation; the float comparison stands
            a.value.partial_cmp(&bound).unwrap_or(Ordering::Equal)
        }
    }

    /// `r:c` pairs (sorted by exponent) used in serialized reports.
    pub fn to_pairs_string(&self) -> Vec<String> {
        self.terms()
            .into_iter()
            .map(|(r, c)| format!("{r}:{c}"))
            .collect()
    }
}

impl fmt::Debug for CycValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycValue(N={}, {:?})", self.order, self.to_pairs_string())
    }
}

impl fmt::Display for CycValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = terms
            .into_iter()
            .map(|(r, c)| match r {
                0 => format!("{c}"),
                _ => format!("{c}*z{}^{r}", self.order),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct CycValueRepr {
    order: u32,
    terms: Vec<String>,
}

impl Serialize for CycValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycValueRepr {
            order: self.order,
            terms: self.to_pairs_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = CycValueRepr::deserialize(d)?;
        let mut terms = Vec::new();
        for t in &repr.terms {
            let (r, c) = t
                .split_once(':')
                .ok_or_else(|| D::Error::custom(format!("bad term `{t}`")))?;
            let r: u64 = r.parse().map_err(D::Error::custom)?;
            let c: i64 = c.parse().map_err(D::Error::custom)?;
            terms.push((r, c));
        }
        Ok(CycValue::from_terms(repr.order, &terms))
    }
}

/// Canonical form of `Σ c ζ_N^r`.
pub fn cyc_canonical(order: u32, terms: &[(u64, i64)]) -> CycValue {
    CycValue::from_terms(order, terms)
}

/// Exponent histogram: the commutative monoid that sums of roots of unity
/// accumulate into before canonicalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Accumulator {
    order: u32,
    hist: Vec<i64>,
    count: u64,
}

impl Accumulator {
    pub fn new(order: u32) -> Self {
        Accumulator {
            order,
            hist: vec![0; order as usize],
            count: 0,
        }
    }

    #[inline]
    pub fn push_root(&mut self, r: u32) {
        self.hist[r as usize] += 1;
        self.count += 1;
    }

    /// Records a zero summand (counts toward the domain size only).
    #[inline]
    pub fn push_zero(&mut self) {
        self.count += 1;
    }

    pub fn merge(mut self, other: &Accumulator) -> Self {
        assert_eq!(self.order, other.order);
        for (a, b) in self.hist.iter_mut().zip(&other.hist) {
            *a += b;
        }
        self.count += other.count;
        self
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn histogram(&self) -> &[i64] {
        &self.hist
    }

    /// Whether all nonzero summands were the same root of unity.
    pub fn single_root(&self) -> bool {
        self.hist.iter().filter(|&&c| c != 0).count() <= 1
    }

    pub fn finish(&self) -> CycValue {
        CycValue::from_histogram(self.order, self.hist.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(*cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        // first cyclotomic polynomial with a coefficient outside {-1,0,1}
        assert!(cyclotomic_poly(105).contains(&-2));
    }

    fn recursive_division(n: u32) -> Vec<i64> {
        let mut num = vec![0i64; n as usize + 1];
        num[0] = -1;
        num[n as usize] = 1;
        for d in 1..n {
            if n.is_multiple_of(d) {
                let den = recursive_division(d);
                let dn = den.len() - 1;
                let mut q = vec![0i64; num.len() - dn];
                for i in (0..q.len()).rev() {
                    let c = num[i + dn];
                    q[i] = c;
                    for (j, &dj) in den.iter().enumerate() {
                        num[i + j] -= c * dj;
                    }
                }
                assert!(num.iter().all(|&c| c == 0));
                num = q;
            }
        }
        num
    }

    #[test]
    fn matches_recursive_division() {
        for n in 1..=60u32 {
            assert_eq!(*cyclotomic_poly(n), recursive_division(n), "N={n}");
        }
        assert_eq!(*cyclotomic_poly(105), recursive_division(105));
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(
            cyc_canonical(3, &[(1, 1), (2, 1)]),
            CycValue::from_int(3, -1)
        );
        assert!(cyc_canonical(4, &[(0, 1), (2, 1)]).is_zero());
        assert_eq!(cyc_canonical(6, &[(3, 2)]), CycValue::from_int(6, -2));
    }

    #[test]
    fn canonical_is_idempotent() {
        for n in [1u32, 2, 3, 8, 12, 30, 62] {
            for r in 0..n as u64 {
                let v = CycValue::from_terms(n, &[(r, 3), ((r * 7 + 1) % n as u64, -2)]);
                let terms: Vec<(u64, i64)> =
                    v.terms().into_iter().map(|(r, c)| (r as u64, c)).collect();
                assert_eq!(CycValue::from_terms(n, &terms), v);
            }
        }
    }

    #[test]
    fn abs_examples() {
        let a = cyc_canonical(3, &[(1, 1), (2, 1)]).abs();
        assert!((a.value - 1.0).abs() <= a.err + 1e-15);
        assert_eq!(CycValue::zero(7).abs().value, 0.0);
        let b = cyc_canonical(3, &[(0, 1), (1, 2)]).abs();
        assert!((b.value - 3f64.sqrt()).abs() < 1e-12);
        assert!(b.err < 1e-12);
    }

    #[test]
    fn sum_of_all_roots_vanishes() {
        for n in 2..40u32 {
            let terms: Vec<(u64, i64)> = (0..n as u64).map(|r| (r, 1)).collect();
            assert!(CycValue::from_terms(n, &terms).is_zero(), "N={n}");
        }
    }

    #[test]
    fn conjugation_and_norms() {
        let n = 12;
        let z = CycValue::root(n, 1);
        assert_eq!(z.mul(&z.conj()), CycValue::one(n));
        let g = cyc_canonical(3, &[(0, 1), (1, 2)]);
        assert_eq!(g.mul(&g.conj()), CycValue::from_int(3, 3));
        assert_eq!(g.cmp_abs_with_sqrt(1, 3), std::cmp::Ordering::Equal);
        assert_eq!(g.cmp_abs_with_sqrt(1, 2), std::cmp::Ordering::Greater);
        assert_eq!(g.cmp_abs_with_sqrt(1, 4), std::cmp::Ordering::Less);
    }

    #[test]
    fn serde_roundtrip() {
        let v = cyc_canonical(15, &[(1, 2), (7, -1), (11, 5)]);
        let s = serde_json::to_string(&v).unwrap();
        let w: CycValue = serde_json::from_str(&s).unwrap();
        assert_eq!(v, w);
    }
}
