//! L-polynomial recovery from complete sums, and the purity check on its
//! inverse roots.

use num_complex::Complex64;
use serde::Serialize;

use super::oracle::OracleTarget;
use super::{complete_sum, complete_sum_pullback};
use crate::chars::{cyc_order, CycValue};
use crate::error::{Error, Result};
use crate::sheaf::SheafSpec;

pub const PURITY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Purity {
    /// Every inverse root has `|α| = √Q`.
    Pure,
    /// All `|α| ≤ √Q`, some strictly smaller.
    Mixed,
    /// Some `|α| > √Q`.
    Violated,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InverseRoot {
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    /// Inclusion radius around the computed root.
    pub err: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LPolyFit {
    pub betti: u64,
    /// `P(t) = Σ_k c_k t^k`, `c_0 = 1`.
    pub coeffs: Vec<CycValue>,
    pub roots: Vec<InverseRoot>,
    pub sqrt_q: f64,
    pub purity: Purity,
    /// `-S_m - (predicted power sum)` at `m = B+1, B+2`.
    pub residuals: Vec<CycValue>,
}

impl LPolyFit {
    pub fn residuals_vanish(&self) -> bool {
        self.residuals.iter().all(CycValue::is_zero)
    }

    pub fn within_weight(&self) -> bool {
        self.purity != Purity::Violated
    }
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `e_1..e_B` from power sums `p_1..p_B` by Newton's identities.
fn elementary(power: &[CycValue], b: usize, order: u32) -> Result<Vec<CycValue>> {
    let mut e = vec![CycValue::one(order)];
    for k in 1..=b {
        let mut acc = CycValue::zero(order);
        for i in 1..=k {
            acc = acc.add(&e[k - i].mul(&power[i - 1]).scale(sign(i - 1)));
        }
        let ek = acc.div_exact(k as i64).ok_or_else(|| {
            Error::NewtonInconsistent(format!("k·e_k is not divisible by k = {k}"))
        })?;
        e.push(ek);
    }
    Ok(e)
}

/// `Σ_{j=1}^{B} (-1)^{j+1} e_j p_{m-j}` for `m > B`.
fn predict(e: &[CycValue], power: &[CycValue], m: usize, order: u32) -> CycValue {
    let b = e.len() - 1;
    let mut acc = CycValue::zero(order);
    for j in 1..=b {
        acc = acc.add(&e[j].mul(&power[m - j - 1]).scale(sign(j + 1)));
    }
    acc
}

/// Simultaneous Aberth–Ehrlich iteration on a monic polynomial
/// (`c[k]` is the coefficient of `x^k`).
fn aberth(c: &[Complex64]) -> Vec<(Complex64, f64)> {
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let eval = |x: Complex64| {
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for &a in c.iter().rev() {
            dv = dv * x + v;
            v = v * x + a;
        }
        (v, dv)
    };
    let radius = c[..n]
        .iter()
        .map(|a| a.norm())
        .fold(0.0f64, f64::max)
        .max(1e-3)
        + 1.0;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius * 0.5, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (v, dv) = eval(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    // Gershgorin-type radius: n·|p(z_i)| / |Π_{j≠i}(z_i - z_j)|
    z.iter()
        .enumerate()
        .map(|(i, &zi)| {
            let (v, _) = eval(zi);
            let den: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| zi - z[j])
                .product();
            let r = if den.norm() > 0.0 {
                n as f64 * v.norm() / den.norm()
            } else {
                f64::INFINITY
            };
            (zi, r)
        })
        .collect()
}

/// Fits the L-polynomial of degree `betti` from `S_1..S_{B+2}` on `X_1`.
pub fn lpoly_fit(s: &SheafSpec, target: OracleTarget, betti: u64) -> Result<LPolyFit> {
    let b = betti as usize;
    let order = cyc_order(s.field());
    let mut power = Vec::with_capacity(b + 2);
    for m in 1..=(b + 2) as u32 {
        let sm = match target {
            OracleTarget::Direct => complete_sum(s, m)?,
            OracleTarget::Pullback => complete_sum_pullback(s, m)?,
        };
        power.push(sm.value.neg());
    }
    let e = elementary(&power, b, order)?;
    let residuals = (b + 1..=b + 2)
        .map(|m| power[m - 1].sub(&predict(&e, &power, m, order)))
        .collect();
    let coeffs: Vec<CycValue> = e
        .iter()
        .enumerate()
        .map(|(k, ek)| ek.scale(sign(k)))
        .collect();
    // inverse roots are the roots of Σ_k (-1)^k e_k x^{B-k}
    let monic: Vec<Complex64> = (0..=b).map(|i| coeffs[b - i].to_complex().0).collect();
    let sqrt_q = (s.field().size() as f64).sqrt();
    let roots: Vec<InverseRoot> = aberth(&monic)
        .into_iter()
        .map(|(z, err)| InverseRoot {
            re: z.re,
            im: z.im,
            abs: z.norm(),
            err,
        })
        .collect();
    let purity = if roots.iter().any(|r| r.abs > sqrt_q + PURITY_TOL) {
        Purity::Violated
    } else if roots.iter().all(|r| (r.abs - sqrt_q).abs() <= PURITY_TOL) {
        Purity::Pure
    } else {
        Purity::Mixed
    };
    Ok(LPolyFit {
        betti,
        coeffs,
        roots,
        sqrt_q,
        purity,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::spec;
    use super::*;

    #[test]
    fn worked_examples() {
        let s = spec(r#"{"p":2,"q_exp":1,"d":2,"kummer":[{"k_idx":1,"poly":"t*(t+1)"}]}"#);
        let fit = lpoly_fit(&s, OracleTarget::Direct, 1).unwrap();
        assert_eq!(fit.coeffs[1].as_integer(), Some(2));
        assert!((fit.roots[0].re + 2.0).abs() < 1e-12 && fit.roots[0].im.abs() < 1e-12);
        assert_eq!(fit.purity, Purity::Pure);
        assert!(fit.residuals_vanish());

        let s = spec(r#"{"p":3,"q_exp":1,"d":1,"as":{"b":"1","num":"t^2"}}"#);
        let fit = lpoly_fit(&s, OracleTarget::Direct, 1).unwrap();
        // α = -(1 + 2ζ_3) with ζ_3 = ζ_6^2
        let n = cyc_order(s.field());
        let alpha = CycValue::from_terms(n, &[(0, -1), (2, -2)]);
        assert_eq!(fit.coeffs[1], alpha.neg());
        assert!((fit.roots[0].abs - 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(fit.purity, Purity::Pure);
        assert!(fit.residuals_vanish());
    }

    #[test]
    fn betti_zero() {
        let s = spec(r#"{"p":2,"q_exp":1,"d":2,"kummer":[{"k_idx":1,"poly":"t+g"}],"exclude":"t+g"}"#);
        let fit = lpoly_fit(&s, OracleTarget::Direct, 0).unwrap();
        assert_eq!(fit.coeffs.len(), 1);
        assert!(fit.roots.is_empty());
        assert!(fit.residuals_vanish());
    }

    #[test]
    fn wrong_betti_is_detected() {
        let s = spec(r#"{"p":3,"q_exp":1,"d":1,"as":{"b":"1","num":"t^4"}}"#);
        // sw_∞ = 4, B = 3
        assert!(lpoly_fit(&s, OracleTarget::Direct, 3).unwrap().residuals_vanish());
        let under = lpoly_fit(&s, OracleTarget::Direct, 2);
        assert!(under.map_or(true, |f| !f.residuals_vanish()));
    }

    #[test]
    fn aberth_finds_known_roots() {
        // (x - 1)(x + 2)(x - i)
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let roots = [one, -2.0 * one, i];
        let mut c = vec![one];
        for r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (k, a) in c.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            c = next;
        }
        let found = aberth(&c);
        for r in roots {
            assert!(found.iter().any(|(z, e)| (z - r).norm() < 1e-12 && *e < 1e-9));
        }
    }
}
