//! Squarefree decomposition and Cantor–Zassenhaus factoring.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Poly, UniPoly};
use crate::error::{Error, Result};
use crate::ffield::{prime_factors, Fe, Field};

/// `f = unit · Π part^mult`, parts monic, squarefree, pairwise coprime,
/// sorted by multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqfDecomp {
    pub unit: Fe,
    pub parts: Vec<(UniPoly, u32)>,
}

impl SqfDecomp {
    pub fn radical(&self, field: &Arc<Field>) -> UniPoly {
        self.parts
            .iter()
            .fold(UniPoly::one(field), |acc, (p, _)| acc.mul(p))
    }

    pub fn radical_degree(&self) -> usize {
        self.parts.iter().map(|(p, _)| p.deg() as usize).sum()
    }

    pub fn reconstruct(&self, field: &Arc<Field>) -> UniPoly {
        self.parts
            .iter()
            .fold(UniPoly::constant(field, self.unit), |acc, (p, m)| {
                acc.mul(&p.pow(*m as u64))
            })
    }
}

/// Monic squarefree parts with multiplicities, multiplicities distinct.
fn sqf_monic(f: &UniPoly) -> Vec<(UniPoly, u32)> {
    let field = f.field();
    let p = field.characteristic();
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c);
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y);
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        c = c.div_exact(&y);
        w = y;
    }
    // what remains carries only multiplicities divisible by p
    if !c.is_one() {
        let root = c.pth_root().expect("remaining cofactor is a p-th power");
        for (g, m) in sqf_monic(&root) {
            out.push((g, m * p));
        }
    }
    out.sort_by_key(|a| a.1);
    out
}

pub fn squarefree_decomp_uni(f: &UniPoly) -> Result<SqfDecomp> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (unit, m) = f.monic();
    Ok(SqfDecomp {
        unit,
        parts: sqf_monic(&m),
    })
}

pub fn squarefree_decomp(f: &Poly) -> Result<SqfDecomp> {
    squarefree_decomp_uni(&f.to_uni()?)
}

/// `x^{Q^k} mod m`, `Q = |F|`, by iterated `Q`-th powers.
fn frob_power_of_x(m: &UniPoly, k: usize) -> UniPoly {
    let q = m.field().size() as u64;
    let mut h = UniPoly::x(m.field()).rem(m);
    for _ in 0..k {
        h = h.powmod(q, m);
    }
    h
}

/// Rabin's irreducibility test.
pub fn is_irreducible(f: &UniPoly) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let m = f.monic().1;
    let x = UniPoly::x(m.field());
    if frob_power_of_x(&m, n) != x.rem(&m) {
        return false;
    }
    prime_factors(n as u64).into_iter().all(|l| {
        let h = frob_power_of_x(&m, n / l as usize);
        h.sub(&x).gcd(&m).is_one()
    })
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn ddf(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let field = f.field();
    let q = field.size() as u64;
    let x = UniPoly::x(field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest);
    let mut i = 0usize;
    while rest.deg() >= 2 * (i as i64 + 1) {
        i += 1;
        h = h.powmod(q, &rest);
        let g = h.sub(&x).gcd(&rest);
        if !g.is_one() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
            out.push((g, i));
        }
    }
    if rest.deg() > 0 {
        let r = rest.deg() as usize;
        out.push((rest, r));
    }
    out
}

/// Splits `f` (monic, product of distinct irreducibles of degree `r`).
fn edf(f: &UniPoly, r: usize, rng: &mut ChaCha8Rng, out: &mut Vec<UniPoly>) {
    let n = f.deg() as usize;
    if n == r {
        out.push(f.clone());
        return;
    }
    let field = f.field();
    let size = field.size();
    let p = field.characteristic();
    let q = size as u64;
    loop {
        let a = UniPoly::new(
            Arc::clone(field),
            (0..n).map(|_| Fe(rng.gen_range(0..size))).collect(),
        );
        if a.is_constant() {
            continue;
        }
        let b = if p == 2 {
            // absolute trace of F_{Q^r} ⊗ components: Σ_{j < k·r} a^{2^j}
            let steps = field.degree() as usize * r;
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..steps {
                t = t.mulmod(&t, f);
                acc = acc.add(&t);
            }
            acc
        } else {
            // a^{(Q^r - 1)/2} = (Π_{i<r} a^{Q^i})^{(Q-1)/2}
            let mut t = a.rem(f);
            let mut prod = t.clone();
            for _ in 1..r {
                t = t.powmod(q, f);
                prod = prod.mulmod(&t, f);
            }
            prod.powmod((q - 1) / 2, f).sub(&UniPoly::one(field))
        };
        let d = b.gcd(f);
        if d.deg() > 0 && d.deg() < f.deg() {
            let e = f.div_exact(&d);
            edf(&d, r, rng, out);
            edf(&e, r, rng, out);
            return;
        }
    }
}

fn factor_squarefree(f: &UniPoly, rng: &mut ChaCha8Rng) -> Vec<UniPoly> {
    let mut out = Vec::new();
    for (g, r) in ddf(f) {
        edf(&g, r, rng, &mut out);
    }
    out
}

/// Monic irreducible factors with multiplicities, sorted by
/// (degree, enumeration order). The unit is dropped.
pub fn factorize_with_seed(f: &UniPoly, seed: u64) -> Result<Vec<(UniPoly, u32)>> {
    let sqf = squarefree_decomp_uni(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (part, m) in &sqf.parts {
        for g in factor_squarefree(part, &mut rng) {
            out.push((g, *m));
        }
    }
    out.sort_by(|a, b| a.0.enum_cmp(&b.0));
    Ok(out)
}

pub fn factorize_uni(f: &UniPoly) -> Result<Vec<(UniPoly, u32)>> {
    factorize_with_seed(f, 0)
}

pub fn factorize(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    Ok(factorize_uni(&f.to_uni()?)?
        .into_iter()
        .map(|(g, m)| (Poly::from_uni(&g), m))
        .collect())
}

/// Distinct roots of `f` in its coefficient field, ascending.
pub fn roots_in_field(f: &UniPoly) -> Vec<Fe> {
    if f.is_zero() {
        return Vec::new();
    }
    let field = f.field();
    let m = f.monic().1;
    let sq = squarefree_decomp_uni(&m)
        .map(|s| s.radical(field))
        .unwrap_or_else(|_| UniPoly::one(field));
    // the part that splits into linear factors: gcd(x^Q - x, f)
    let x = UniPoly::x(field);
    if sq.is_constant() {
        return Vec::new();
    }
    let lin = frob_power_of_x(&sq, 1).sub(&x.rem(&sq)).gcd(&sq);
    if lin.is_constant() {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut out = Vec::new();
    edf(&lin, 1, &mut rng, &mut out);
    let mut roots: Vec<Fe> = out.iter().map(|l| field.neg(l.coeff(0))).collect();
    roots.sort();
    roots
}

/// Whether `f = h^e` over the algebraic closure.
pub fn perfect_power_uni(f: &UniPoly, e: u32) -> Result<bool> {
    if e == 0 {
        return Err(Error::ZeroExponent);
    }
    let sqf = squarefree_decomp_uni(f)?;
    Ok(sqf.parts.iter().all(|(_, m)| m % e == 0))
}

pub fn perfect_power_test(f: &Poly, e: u32) -> Result<bool> {
    perfect_power_uni(&f.to_uni()?, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::build_field;

    fn parse(field: &Arc<Field>, s: &str) -> UniPoly {
        Poly::parse(field, 1, s).unwrap().to_uni().unwrap()
    }

    #[test]
    fn squarefree_examples() {
        let f2 = build_field(2, 1).unwrap();
        let s = squarefree_decomp_uni(&parse(&f2, "t^2*(t+1)^3")).unwrap();
        assert_eq!(
            s.parts,
            vec![(parse(&f2, "t"), 2), (parse(&f2, "t+1"), 3)]
        );
        assert_eq!(s.radical_degree(), 2);
        let s = squarefree_decomp_uni(&parse(&f2, "t^2+1")).unwrap();
        assert_eq!(s.parts, vec![(parse(&f2, "t+1"), 2)]);
        assert_eq!(s.radical_degree(), 1);
        let f3 = build_field(3, 1).unwrap();
        let s = squarefree_decomp_uni(&parse(&f3, "t^3")).unwrap();
        assert_eq!(s.parts, vec![(parse(&f3, "t"), 3)]);
        assert!(matches!(
            squarefree_decomp_uni(&UniPoly::zero(&f3)),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn factor_examples() {
        let f2 = build_field(2, 1).unwrap();
        assert_eq!(
            factorize_uni(&parse(&f2, "t^2+t")).unwrap(),
            vec![(parse(&f2, "t"), 1), (parse(&f2, "t+1"), 1)]
        );
        assert_eq!(
            factorize_uni(&parse(&f2, "t^2+t+1")).unwrap(),
            vec![(parse(&f2, "t^2+t+1"), 1)]
        );
        let f4 = build_field(2, 2).unwrap();
        assert_eq!(
            factorize_uni(&parse(&f4, "t^3+g*t^2+g*t+g^2")).unwrap(),
            vec![(parse(&f4, "t+g"), 1), (parse(&f4, "t+g^2"), 2)]
        );
    }

    #[test]
    fn factoring_is_seed_independent() {
        let f = build_field(3, 2).unwrap();
        let a = parse(&f, "(t^2+g)*(t^3+t+g^5)*(t+1)^2*(t^2+2)");
        let base = factorize_with_seed(&a, 0).unwrap();
        for seed in 1..6 {
            assert_eq!(factorize_with_seed(&a, seed).unwrap(), base);
        }
    }

    #[test]
    fn perfect_power_examples() {
        let f4 = build_field(2, 2).unwrap();
        assert!(perfect_power_uni(&parse(&f4, "t^3"), 3).unwrap());
        assert!(!perfect_power_uni(&parse(&f4, "(t+g)*(t+g^2)^2"), 3).unwrap());
        let f2 = build_field(2, 1).unwrap();
        assert!(perfect_power_uni(&parse(&f2, "t^2+1"), 2).unwrap());
        assert!(matches!(
            perfect_power_uni(&parse(&f2, "t"), 0),
            Err(Error::ZeroExponent)
        ));
    }

    #[test]
    fn roots_examples() {
        let f4 = build_field(2, 2).unwrap();
        let g = f4.generator();
        let r = roots_in_field(&parse(&f4, "t^3+g*t^2+g*t+g^2"));
        let mut want = vec![g, f4.mul(g, g)];
        want.sort();
        assert_eq!(r, want);
        let f2 = build_field(2, 1).unwrap();
        assert!(roots_in_field(&parse(&f2, "t^2+t+1")).is_empty());
    }
}
