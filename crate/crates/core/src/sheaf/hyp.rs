//! Hypothesis checks for the two explicit bounds, and exact decisions of
//! geometric (non)triviality.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{transfer_pullback, SheafSpec};
use crate::error::{Error, Result};
use crate::polyrat::{
    as_reduce, factorize_uni, perfect_power_uni, squarefree_decomp_uni, ASLocalData, Poly,
    RatFunc, UniPoly,
};

/// Kummer-only hypothesis: pairwise coprime `f_j`, and some `N(f_{j0})` not a
/// perfect `ord(χ_{j0})`-th power.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hyp44 {
    /// Univariate, Kummer factors only, `f_j` pairwise coprime.
    pub applicable: bool,
    pub holds: bool,
    /// First index satisfying the perfect-power condition.
    pub witness: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyp45 {
    /// `Tr(b·f)` is not of the form `r^p - r + c`.
    pub holds: bool,
    pub reduced: ASLocalData,
}

fn pairwise_coprime(fs: &[UniPoly]) -> bool {
    fs.iter().enumerate().all(|(i, a)| {
        fs[i + 1..]
            .iter()
            .all(|b| a.gcd(b).deg() == 0)
    })
}

/// Never fails on inapplicable specs; that is reported in the result.
pub fn check_hypothesis_44(s: &SheafSpec) -> Result<Hyp44> {
    if s.nvars() != 1 || s.as_factor().is_some() || s.kummer().is_empty() {
        return Ok(Hyp44 {
            applicable: false,
            holds: false,
            witness: None,
        });
    }
    let fs: Vec<UniPoly> = s
        .kummer()
        .iter()
        .map(|k| k.f.to_uni())
        .collect::<Result<_>>()?;
    let applicable = pairwise_coprime(&fs);
    let pb = transfer_pullback(s);
    let mut witness = None;
    for (j, (chi, nf)) in pb.kummer_norm.iter().enumerate() {
        let ord = chi.order();
        if ord > 1 && !perfect_power_uni(&nf.to_uni()?, ord as u32)? {
            witness = Some(j);
            break;
        }
    }
    Ok(Hyp44 {
        applicable,
        holds: witness.is_some(),
        witness,
    })
}

pub fn check_hypothesis_45(s: &SheafSpec) -> Result<Hyp45> {
    s.require_univariate()?;
    let pb = transfer_pullback(s);
    let tr = pb
        .as_trace
        .ok_or_else(|| Error::InvalidSpec("no Artin–Schreier factor".into()))?;
    let reduced = as_reduce(&tr)?;
    Ok(Hyp45 {
        holds: !reduced.trivial,
        reduced,
    })
}

/// Whether `Π_j χ(g_j)^{k_j}` is geometrically nontrivial: some irreducible
/// factor has exponent `Σ k_j·mult` not divisible by `Q - 1`.
fn kummer_nontrivial(parts: &[(u64, UniPoly)], modulus: u64) -> Result<bool> {
    let mut exps: BTreeMap<Vec<u32>, u128> = BTreeMap::new();
    for (k, g) in parts {
        for (h, m) in factorize_uni(g)? {
            let key = h.coeffs().iter().map(|c| c.0).collect();
            let e = exps.entry(key).or_insert(0);
            *e = (*e + *k as u128 * m as u128) % modulus as u128;
        }
    }
    Ok(exps.values().any(|&e| e != 0))
}

fn as_nontrivial(f: Option<&RatFunc>) -> Result<bool> {
    match f {
        None => Ok(false),
        Some(f) => Ok(!as_reduce(f)?.trivial),
    }
}

fn uni_parts<'a>(it: impl Iterator<Item = (u64, &'a Poly)>) -> Result<Vec<(u64, UniPoly)>> {
    it.map(|(k, f)| Ok((k, f.to_uni()?))).collect()
}

/// Exact geometric nontriviality of the pulled-back transfer on `X_1`.
pub fn pullback_geometrically_nontrivial(s: &SheafSpec) -> Result<bool> {
    s.require_univariate()?;
    let pb = transfer_pullback(s);
    let parts = uni_parts(pb.kummer_norm.iter().map(|(c, f)| (c.k_idx(), f)))?;
    Ok(kummer_nontrivial(&parts, s.field().order())? || as_nontrivial(pb.as_trace.as_ref())?)
}

/// Exact geometric nontriviality of the data itself on `X_1`.
pub fn l1_geometrically_nontrivial(s: &SheafSpec) -> Result<bool> {
    s.require_univariate()?;
    let parts = uni_parts(s.kummer().iter().map(|k| (k.chi.k_idx(), &k.f)))?;
    Ok(kummer_nontrivial(&parts, s.field().order())?
        || as_nontrivial(s.as_twisted().as_ref())?)
}

/// Radical degree of a nonzero polynomial.
pub(crate) fn radical_degree(f: &UniPoly) -> Result<usize> {
    Ok(squarefree_decomp_uni(f)?.radical_degree())
}
