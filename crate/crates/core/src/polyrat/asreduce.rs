//! Artin–Schreier reduction of a univariate rational function.
//!
//! Locally at a pole `x` (uniformiser `u = t - x`) a term `a·u^{-mp}` is
//! replaced by `a^{1/p}·u^{-m}`, i.e. `r^p - r` is subtracted for
//! `r = a^{1/p} u^{-m}`; processing from the top order down leaves a
//! principal part with every exponent prime to `p`. Its order is the Swan
//! conductor at `x`. The polynomial part is treated the same way at `∞`.

use std::sync::Arc;

use super::{factorize_uni, roots_in_field, RatFunc, UniPoly};
use crate::error::Result;
use crate::ffield::{build_field, embed, Fe, Field};

/// A Galois orbit (over the coefficient field) of wild poles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WildPoint {
    /// Monic irreducible polynomial whose roots form the orbit.
    pub factor: UniPoly,
    pub orbit_size: u32,
    /// Reduced pole order, the Swan conductor at each point of the orbit.
    pub swan: u32,
}

/// Local data at the wild points. Depends only on the class of `f` modulo
/// `{r^p - r + c}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ASLocalData {
    /// Finite poles with nonzero reduced order, in factor enumeration order.
    pub points: Vec<WildPoint>,
    pub swan_infinity: u32,
    /// Reduced polynomial part with its constant term dropped.
    pub reduced_poly_part: UniPoly,
    pub trivial: bool,
}

impl ASLocalData {
    /// Swan at the orbit of `factor` (0 when tame there).
    pub fn swan_at(&self, factor: &UniPoly) -> u32 {
        self.points
            .iter()
            .find(|w| w.factor == *factor)
            .map_or(0, |w| w.swan)
    }

    /// `Σ sw_x` over all geometric points, `∞` included.
    pub fn swan_total(&self) -> u64 {
        self.points
            .iter()
            .map(|w| w.orbit_size as u64 * w.swan as u64)
            .sum::<u64>()
            + self.swan_infinity as u64
    }
}

/// In-place reduction of `a[m]` (coefficient of `u^{-m}` or `t^m`, `m ≥ 1`).
fn reduce_orders(field: &Field, a: &mut [Fe]) -> u32 {
    let p = field.characteristic() as usize;
    for m in (1..a.len()).rev() {
        if m % p == 0 && !a[m].is_zero() {
            let r = field.pth_root(a[m]);
            a[m / p] = field.add(a[m / p], r);
            a[m] = Fe::ZERO;
        }
    }
    (1..a.len()).rev().find(|&m| !a[m].is_zero()).unwrap_or(0) as u32
}

/// Swan conductor at the roots of `factor` (monic irreducible dividing the
/// denominator of `num/den` with multiplicity `e`).
fn local_swan(num: &UniPoly, den: &UniPoly, factor: &UniPoly, e: u32) -> Result<u32> {
    let k = num.field();
    let r = factor.deg() as u32;
    let big: Arc<Field> = build_field(k.characteristic(), k.degree() * r)?;
    let emb = embed(k, &big)?;
    let lift = |u: &UniPoly| u.map_coeffs(&big, |a| emb.apply(a));
    let x0 = roots_in_field(&lift(factor))[0];
    let lin = UniPoly::linear(&big, x0);
    let mut h = lift(den);
    for _ in 0..e {
        h = h.div_exact(&lin);
    }
    let n_ser = lift(num).shift(x0);
    let h_ser = h.shift(x0);
    let h0_inv = big.inv(h_ser.coeff(0)).expect("pole multiplicity is exact");
    let e = e as usize;
    let mut s = vec![Fe::ZERO; e];
    for j in 0..e {
        let mut acc = n_ser.coeff(j);
        for i in 1..=j {
            acc = big.sub(acc, big.mul(h_ser.coeff(i), s[j - i]));
        }
        s[j] = big.mul(acc, h0_inv);
    }
    // coefficient of u^{-m} is s[e - m]
    let mut a = vec![Fe::ZERO; e + 1];
    for m in 1..=e {
        a[m] = s[e - m];
    }
    Ok(reduce_orders(&big, &mut a))
}

pub fn as_reduce(f: &RatFunc) -> Result<ASLocalData> {
    let num = f.num_uni()?;
    let den = f.den_uni()?;
    let field = Arc::clone(num.field());
    let (poly_part, _) = num.divrem(&den);
    let mut c = poly_part.coeffs().to_vec();
    if c.is_empty() {
        c.push(Fe::ZERO);
    }
    let swan_infinity = reduce_orders(&field, &mut c);
    c[0] = Fe::ZERO;
    let reduced_poly_part = UniPoly::new(Arc::clone(&field), c);
    let mut points = Vec::new();
    if !den.is_constant() {
        for (factor, e) in factorize_uni(&den)? {
            let swan = local_swan(&num, &den, &factor, e)?;
            if swan > 0 {
                let orbit_size = factor.deg() as u32;
                points.push(WildPoint {
                    factor,
                    orbit_size,
                    swan,
                });
            }
        }
    }
    let trivial = points.is_empty() && swan_infinity == 0;
    Ok(ASLocalData {
        points,
        swan_infinity,
        reduced_poly_part,
        trivial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyrat::Poly;

    fn rf(field: &Arc<Field>, n: &str, d: &str) -> RatFunc {
        RatFunc::parse(field, 1, n, Some(d)).unwrap()
    }

    #[test]
    fn examples() {
        let f2 = build_field(2, 1).unwrap();
        let a = as_reduce(&rf(&f2, "t^2", "1")).unwrap();
        assert_eq!(a.swan_infinity, 1);
        assert_eq!(
            a.reduced_poly_part,
            Poly::parse(&f2, 1, "t").unwrap().to_uni().unwrap()
        );
        assert!(!a.trivial);
        assert!(as_reduce(&rf(&f2, "t^2+t", "1")).unwrap().trivial);
        let f3 = build_field(3, 1).unwrap();
        let b = as_reduce(&rf(&f3, "1", "t")).unwrap();
        assert_eq!(b.points.len(), 1);
        assert_eq!(b.points[0].swan, 1);
        assert!(!b.trivial);
    }

    #[test]
    fn pole_order_divisible_by_p() {
        // 1/t^2 + 1/t = (1/t)^2 - (1/t) + 2/t over F_2 reduces to order 1;
        // 1/t^2 + 1/t alone is ℘(1/t), trivial
        let f2 = build_field(2, 1).unwrap();
        assert!(as_reduce(&rf(&f2, "t+1", "t^2")).unwrap().trivial);
        let a = as_reduce(&rf(&f2, "1", "t^2")).unwrap();
        assert_eq!(a.points[0].swan, 1);
    }

    #[test]
    fn conjugate_poles() {
        let f2 = build_field(2, 1).unwrap();
        let a = as_reduce(&rf(&f2, "1", "t^2+t+1")).unwrap();
        assert_eq!(a.points.len(), 1);
        assert_eq!(a.points[0].orbit_size, 2);
        assert_eq!(a.points[0].swan, 1);
        assert_eq!(a.swan_total(), 2);
        // (t^2+t+1)^{-2} = ℘((t^2+t+1)^{-1}) + (t^2+t+1)^{-1}
        let b = as_reduce(&rf(&f2, "1", "(t^2+t+1)^2")).unwrap();
        assert_eq!(b.points[0].swan, 1);
    }
}
