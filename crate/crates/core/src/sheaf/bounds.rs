//! Swan conductors, Euler characteristics and the explicit bounds.

use serde::Serialize;

use super::hyp::{
    check_hypothesis_44, check_hypothesis_45, l1_geometrically_nontrivial,
    pullback_geometrically_nontrivial, radical_degree, Hyp44,
};
use super::{transfer_pullback, SheafSpec};
use crate::chars::CycValue;
use crate::error::{Error, Result};
use crate::polyrat::{as_reduce, factorize_uni, ASLocalData, RatFunc, UniPoly};

/// One Galois orbit of missing points (`factor = None` is `∞`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SwanPoint {
    pub label: String,
    #[serde(skip)]
    pub factor: Option<UniPoly>,
    pub orbit_size: u32,
    pub sigma_fixed: bool,
    /// Exact Swan conductor of the transferred data, `None` when `E` does
    /// not descend to `F_q`.
    pub tran_exact: Option<u32>,
    /// `Σ_i -v_x(σ^{-i} f)`, or `-v_x(f)` at σ-fixed points.
    pub tran_bound: Option<u32>,
    /// Exact Swan conductor of the data on `X_1`.
    pub l1_exact: u32,
    /// `-v_x(f)` (0 when `f` has no pole at `x`).
    pub l1_bound: u32,
}

impl SwanPoint {
    pub fn tame(&self) -> bool {
        self.tran_exact.unwrap_or(0) == 0 && self.l1_exact == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SwanTable {
    pub points: Vec<SwanPoint>,
}

impl SwanTable {
    /// `#(X̄ - X)` over the algebraic closure.
    pub fn missing_count(&self) -> u64 {
        self.points.iter().map(|p| p.orbit_size as u64).sum()
    }

    pub fn l1_total(&self) -> u64 {
        self.points
            .iter()
            .map(|p| p.orbit_size as u64 * p.l1_exact as u64)
            .sum()
    }

    pub fn tran_total(&self) -> Option<u64> {
        self.points
            .iter()
            .map(|p| p.tran_exact.map(|s| p.orbit_size as u64 * s as u64))
            .sum()
    }

    /// Points where an exact value exceeds its bound.
    pub fn violations(&self) -> Vec<&SwanPoint> {
        self.points
            .iter()
            .filter(|p| {
                p.l1_exact > p.l1_bound
                    || matches!((p.tran_exact, p.tran_bound), (Some(e), Some(b)) if e > b)
            })
            .collect()
    }
}

/// Multiplicity of the irreducible `factor` in `h`.
fn multiplicity(h: &UniPoly, factor: &UniPoly) -> u32 {
    let mut h = h.clone();
    let mut m = 0;
    while !h.is_zero() && factor.divides(&h) {
        h = h.div_exact(factor);
        m += 1;
    }
    m
}

/// `-v_x(f)` at the orbit of `factor` (`None` = `∞`), clamped at 0.
fn pole_order(f: &RatFunc, factor: Option<&UniPoly>) -> Result<u32> {
    Ok(match factor {
        None => f.degree().unwrap_or(0).max(0) as u32,
        Some(p) => multiplicity(&f.den_uni()?, p),
    })
}

fn swan_from(data: &ASLocalData, factor: Option<&UniPoly>) -> u32 {
    match factor {
        None => data.swan_infinity,
        Some(p) => data.swan_at(p),
    }
}

pub fn swan_table(s: &SheafSpec) -> Result<SwanTable> {
    s.require_univariate()?;
    let field = s.field();
    let q_exp = s.q_exp();
    let d = s.d();
    let descended = s.exclusion_descends();
    let mut orbits: Vec<Option<UniPoly>> = vec![None];
    for (h, _) in factorize_uni(&s.exclude().to_uni()?)? {
        orbits.push(Some(h));
    }
    let twisted = s.as_twisted();
    let l1_data = twisted.as_ref().map(as_reduce).transpose()?;
    let tran_data = match (&transfer_pullback(s).as_trace, descended) {
        (Some(tr), true) => Some(as_reduce(tr)?),
        _ => None,
    };
    let conjugates: Vec<RatFunc> = match &twisted {
        Some(f) => (0..d).map(|i| f.sigma_act(-(i as i64), q_exp, d)).collect(),
        None => Vec::new(),
    };
    let mut points = Vec::new();
    for orbit in orbits {
        let (label, orbit_size, sigma_fixed) = match &orbit {
            None => ("inf".to_string(), 1, true),
            Some(h) => {
                let fixed = h.deg() == 1 && {
                    let a = field.neg(h.coeff(0));
                    field.frobenius(a, q_exp) == a
                };
                (h.format_var("t"), h.deg() as u32, fixed)
            }
        };
        let l1_exact = l1_data.as_ref().map_or(0, |a| swan_from(a, orbit.as_ref()));
        let l1_bound = match &twisted {
            Some(f) => pole_order(f, orbit.as_ref())?,
            None => 0,
        };
        let (tran_exact, tran_bound) = if descended {
            let exact = tran_data.as_ref().map_or(0, |a| swan_from(a, orbit.as_ref()));
            let bound = if sigma_fixed {
                l1_bound
            } else {
                let mut b = 0;
                for c in &conjugates {
                    b += pole_order(c, orbit.as_ref())?;
                }
                b
            };
            (Some(exact), Some(bound))
        } else {
            (None, None)
        };
        points.push(SwanPoint {
            label,
            factor: orbit,
            orbit_size,
            sigma_fixed,
            tran_exact,
            tran_bound,
            l1_exact,
            l1_bound,
        });
    }
    Ok(SwanTable { points })
}

/// `dim H^1_c = 2g - 2 + #(X̄ - X) + Σ sw_x` for geometrically nontrivial
/// rank-1 data.
pub fn gos_betti(genus: u64, missing: u64, swan_sum: u64) -> Result<u64> {
    let b = 2 * genus as i64 - 2 + missing as i64 + swan_sum as i64;
    if b < 0 {
        Err(Error::NegativeBetti(b))
    } else {
        Ok(b as u64)
    }
}

/// `coef·√radicand`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bound {
    pub coef: i64,
    pub radicand: u64,
    pub sqrt: String,
    pub value: f64,
}

impl Bound {
    /// Negative coefficients give no bound.
    fn new(coef: i64, radicand: u64) -> Option<Bound> {
        (coef >= 0).then(|| Bound {
            coef,
            radicand,
            sqrt: format!("√{radicand}"),
            value: coef as f64 * (radicand as f64).sqrt(),
        })
    }

    /// `|v| ≤ coef·√radicand`, decided exactly at ties.
    pub fn admits(&self, v: &CycValue) -> bool {
        v.cmp_abs_with_sqrt(self.coef, self.radicand) != std::cmp::Ordering::Greater
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub p: u32,
    pub q: u64,
    pub d: u32,
    pub genus: u64,
    pub missing_points: u64,
    pub radical_degrees: Vec<usize>,
    pub d1: usize,
    pub d2: i64,
    pub d3: usize,
    pub d4: usize,
    pub coprime: bool,
    pub hyp44: Hyp44,
    pub hyp45: Option<bool>,
    pub exclusion_descends: bool,
    /// Exact decisions (factorization / AS reduction of the combined data).
    pub l1_nontrivial: bool,
    pub tran_nontrivial: bool,
    pub swan_l1_total: u64,
    pub swan_tran_total: Option<u64>,
    /// Complete sums of the data on `X_1(F_{q^d})`.
    pub prop41: Option<Bound>,
    pub thm42: Option<Bound>,
    pub remark43: Option<Bound>,
    pub thm44: Option<Bound>,
    pub thm45: Option<Bound>,
    /// `dim H^1_c(X_1, L_1)`, when `L_1` is geometrically nontrivial.
    pub gos_betti: Option<u64>,
    /// `dim H^1_c` of the transferred data, when it is nontrivial.
    pub tran_betti: Option<u64>,
    pub swan: SwanTable,
}

impl BoundReport {
    /// The bound an incomplete sum is tested against: the explicit one for
    /// the spec's shape, else the generic Swan one.
    pub fn headline(&self) -> Option<&Bound> {
        if self.hyp45.is_some() {
            self.thm45.as_ref()
        } else if self.hyp44.applicable {
            self.thm44.as_ref()
        } else {
            self.thm42.as_ref()
        }
    }

    /// The hypotheses under which [`Self::headline`] is asserted.
    pub fn headline_hypothesis(&self) -> bool {
        if let Some(h) = self.hyp45 {
            h
        } else if self.hyp44.applicable {
            self.hyp44.holds
        } else {
            self.tran_nontrivial
        }
    }
}

pub fn bound_report(s: &SheafSpec) -> Result<BoundReport> {
    s.require_univariate()?;
    let field = s.field();
    let q = s.q();
    let d = s.d() as i64;
    let swan = swan_table(s)?;
    let missing = swan.missing_count();
    let fs: Vec<UniPoly> = s
        .kummer()
        .iter()
        .map(|k| k.f.to_uni())
        .collect::<Result<_>>()?;
    let radical_degrees = fs.iter().map(radical_degree).collect::<Result<Vec<_>>>()?;
    let prod = fs.iter().fold(UniPoly::one(field), |a, f| a.mul(f));
    let d1 = radical_degree(&prod)?;
    let (d2, d3, d4) = match s.as_factor() {
        None => (0, 0, 0),
        Some(a) => {
            let den = a.f.den_uni()?;
            let d2 = a.f.degree().unwrap_or(0).max(0);
            let mut coprime_part = den.clone();
            loop {
                let g = coprime_part.gcd(&prod);
                if g.deg() <= 0 {
                    break;
                }
                coprime_part = coprime_part.div_exact(&g);
            }
            (d2, den.deg() as usize, radical_degree(&coprime_part)?)
        }
    };
    let hyp44 = check_hypothesis_44(s)?;
    let coprime = fs
        .iter()
        .enumerate()
        .all(|(i, a)| fs[i + 1..].iter().all(|b| a.gcd(b).deg() == 0));
    let hyp45 = match s.as_factor() {
        Some(_) => Some(check_hypothesis_45(s)?.holds),
        None => None,
    };
    let descended = s.exclusion_descends();
    let l1_nontrivial = l1_geometrically_nontrivial(s)?;
    let tran_nontrivial = descended && pullback_geometrically_nontrivial(s)?;
    let swan_l1_total = swan.l1_total();
    let swan_tran_total = swan.tran_total();
    let base = missing as i64 - 2;
    let big_q = field.size() as u64;

    let prop41 = Bound::new(base + swan_l1_total as i64, big_q);
    let (thm42, remark43) = if descended {
        let thm42 = Bound::new(base + d * swan_l1_total as i64, q);
        let refined: i64 = swan
            .points
            .iter()
            .map(|p| {
                let w = p.orbit_size as i64 * p.l1_exact as i64;
                if p.sigma_fixed {
                    w
                } else {
                    d * w
                }
            })
            .sum();
        (thm42, Bound::new(base + refined, q))
    } else {
        (None, None)
    };
    let thm44 = if s.as_factor().is_none() && !s.kummer().is_empty() {
        Bound::new(d * radical_degrees.iter().sum::<usize>() as i64 - 1, q)
    } else {
        None
    };
    let thm45 = if s.as_factor().is_some() {
        Bound::new(d * (d1 + d3 + d4) as i64 + d2 - 1, q)
    } else {
        None
    };
    let gos = if l1_nontrivial {
        Some(gos_betti(0, missing, swan_l1_total)?)
    } else {
        None
    };
    let tran_betti = match (tran_nontrivial, swan_tran_total) {
        (true, Some(t)) => Some(gos_betti(0, missing, t)?),
        _ => None,
    };
    Ok(BoundReport {
        p: s.p(),
        q,
        d: s.d(),
        genus: 0,
        missing_points: missing,
        radical_degrees,
        d1,
        d2,
        d3,
        d4,
        coprime,
        hyp44,
        hyp45,
        exclusion_descends: descended,
        l1_nontrivial,
        tran_nontrivial,
        swan_l1_total,
        swan_tran_total,
        prop41,
        thm42,
        remark43,
        thm44,
        thm45,
        gos_betti: gos,
        tran_betti,
        swan,
    })
}
