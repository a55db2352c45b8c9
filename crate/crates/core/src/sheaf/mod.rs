//! Rank-1 character data on open subsets of affine space over `F_{q^d}`,
//! and its transfer down to `F_q`.
//!
//! A [`SheafSpec`] is a list of Kummer factors `(χ_j, f_j)`, an optional
//! Artin–Schreier factor `(ψ_b, f)` and an exclusion polynomial `E`; the
//! domain is `E ≠ 0`. Its transfer is described on `X_1` by a
//! [`PullbackSpec`] in two equivalent ways: the list of Frobenius
//! conjugates, and the collapsed norm-product / trace form.

mod bounds;
mod hyp;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use bounds::{bound_report, gos_betti, swan_table, Bound, BoundReport, SwanPoint, SwanTable};
pub use hyp::{
    check_hypothesis_44, check_hypothesis_45, l1_geometrically_nontrivial,
    pullback_geometrically_nontrivial, Hyp44, Hyp45,
};

use crate::chars::{AddChar, MultChar};
use crate::error::{Error, Result};
use crate::ffield::{build_field, embed, is_prime, Embedding, Fe, Field};
use crate::polyrat::{norm_product, sigma_act, trace_rational, Poly, RatFunc};

/// One Kummer factor in the JSON form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerJson {
    pub k_idx: u64,
    pub poly: String,
}

/// The Artin–Schreier factor in the JSON form; `den` defaults to `1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsJson {
    pub b: String,
    pub num: String,
    #[serde(default)]
    pub den: Option<String>,
}

fn one() -> usize {
    1
}

/// `{p, q_exp, d, n, kummer: [{k_idx, poly}], as: {b, num, den} | null,
/// exclude: poly | null}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheafSpecJson {
    pub p: u64,
    pub q_exp: u32,
    pub d: u32,
    #[serde(default = "one")]
    pub n: usize,
    #[serde(default)]
    pub kummer: Vec<KummerJson>,
    #[serde(default, rename = "as")]
    pub as_factor: Option<AsJson>,
    #[serde(default)]
    pub exclude: Option<String>,
}

#[derive(Clone, Debug)]
pub struct KummerFactor {
    pub chi: MultChar,
    pub f: Poly,
}

#[derive(Clone, Debug)]
pub struct AsFactor {
    pub psi: AddChar,
    pub f: RatFunc,
}

#[derive(Clone, Debug)]
pub struct SheafSpec {
    q_exp: u32,
    d: u32,
    n: usize,
    base: Arc<Field>,
    field: Arc<Field>,
    base_emb: Arc<Embedding>,
    kummer: Vec<KummerFactor>,
    as_factor: Option<AsFactor>,
    exclude: Poly,
    exclude_explicit: bool,
}

/// Leading-term normalisation (monic when univariate).
fn normalise(e: &Poly) -> Poly {
    match e.terms().iter().next_back() {
        Some((_, &lead)) => e.scale(e.field().inv(lead).expect("nonzero")),
        None => e.clone(),
    }
}

impl SheafSpec {
    pub fn from_json(j: &SheafSpecJson) -> Result<Self> {
        if !is_prime(j.p) {
            return Err(Error::NotPrime(j.p));
        }
        let p = j.p as u32;
        if j.q_exp == 0 || j.d == 0 {
            return Err(Error::ZeroDegree);
        }
        if j.n == 0 {
            return Err(Error::InvalidSpec("n must be at least 1".into()));
        }
        let base = build_field(p, j.q_exp)?;
        let field = build_field(p, j.q_exp * j.d)?;
        let base_emb = embed(&base, &field)?;
        let mut kummer = Vec::new();
        for k in &j.kummer {
            let f = Poly::parse(&field, j.n, &k.poly)?;
            if f.is_zero() {
                return Err(Error::InvalidSpec("Kummer polynomial is zero".into()));
            }
            kummer.push(KummerFactor {
                chi: MultChar::new(Arc::clone(&field), k.k_idx),
                f,
            });
        }
        let as_factor = match &j.as_factor {
            None => None,
            Some(a) => {
                let b = field.parse(&a.b)?;
                let f = RatFunc::parse(&field, j.n, &a.num, a.den.as_deref())?;
                Some(AsFactor {
                    psi: AddChar::new(Arc::clone(&field), b),
                    f,
                })
            }
        };
        let exclude = match &j.exclude {
            Some(s) => Some(Poly::parse(&field, j.n, s)?),
            None => None,
        };
        Self::assemble(j.q_exp, j.d, j.n, base, field, base_emb, kummer, as_factor, exclude)
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        q_exp: u32,
        d: u32,
        n: usize,
        base: Arc<Field>,
        field: Arc<Field>,
        base_emb: Arc<Embedding>,
        kummer: Vec<KummerFactor>,
        as_factor: Option<AsFactor>,
        exclude: Option<Poly>,
    ) -> Result<Self> {
        let mut relevant = Poly::one(&field, n);
        for k in &kummer {
            relevant = relevant.mul(&k.f);
        }
        if let Some(a) = &as_factor {
            relevant = relevant.mul(a.f.den());
        }
        let (exclude, explicit) = match exclude {
            None => {
                let mut e = Poly::one(&field, n);
                for i in 0..d {
                    e = e.mul(&sigma_act(&relevant, -(i as i64), q_exp, d));
                }
                (normalise(&e), false)
            }
            Some(e) => {
                if e.is_zero() {
                    return Err(Error::InvalidSpec("exclusion polynomial is zero".into()));
                }
                if n == 1 {
                    let eu = e.to_uni()?;
                    let rad = crate::polyrat::squarefree_decomp_uni(&relevant.to_uni()?)?
                        .radical(&field);
                    if !rad.divides(&eu) {
                        return Err(Error::InvalidSpec(
                            "exclusion polynomial must vanish at every zero of the Kummer polynomials and the AS denominator"
                                .into(),
                        ));
                    }
                }
                (normalise(&e), true)
            }
        };
        Ok(SheafSpec {
            q_exp,
            d,
            n,
            base,
            field,
            base_emb,
            kummer,
            as_factor,
            exclude,
            exclude_explicit: explicit,
        })
    }

    /// Canonical JSON form (parsing it back gives an equal spec).
    pub fn to_json(&self) -> SheafSpecJson {
        SheafSpecJson {
            p: self.p() as u64,
            q_exp: self.q_exp,
            d: self.d,
            n: self.n,
            kummer: self
                .kummer
                .iter()
                .map(|k| KummerJson {
                    k_idx: k.chi.k_idx(),
                    poly: k.f.to_string(),
                })
                .collect(),
            as_factor: self.as_factor.as_ref().map(|a| AsJson {
                b: self.field.format(a.psi.twist()),
                num: a.f.num().to_string(),
                den: Some(a.f.den().to_string()),
            }),
            exclude: self.exclude_explicit.then(|| self.exclude.to_string()),
        }
    }

    pub fn p(&self) -> u32 {
        self.field.characteristic()
    }

    pub fn q_exp(&self) -> u32 {
        self.q_exp
    }

    /// `q = p^{q_exp}`.
    pub fn q(&self) -> u64 {
        self.base.size() as u64
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    /// `F_q`.
    pub fn base_field(&self) -> &Arc<Field> {
        &self.base
    }

    /// `F_{q^d}`, where all coefficients and characters live.
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn base_embedding(&self) -> &Arc<Embedding> {
        &self.base_emb
    }

    pub fn kummer(&self) -> &[KummerFactor] {
        &self.kummer
    }

    pub fn as_factor(&self) -> Option<&AsFactor> {
        self.as_factor.as_ref()
    }

    pub fn exclude(&self) -> &Poly {
        &self.exclude
    }

    pub fn exclude_is_explicit(&self) -> bool {
        self.exclude_explicit
    }

    /// Whether `E` is defined over `F_q`, i.e. `X_0` exists.
    pub fn exclusion_descends(&self) -> bool {
        self.exclude.is_over_subfield(self.q_exp)
    }

    pub fn require_descended(&self) -> Result<()> {
        if self.exclusion_descends() {
            Ok(())
        } else {
            Err(Error::ExclusionNotDescended)
        }
    }

    pub fn require_univariate(&self) -> Result<()> {
        if self.n == 1 {
            Ok(())
        } else {
            Err(Error::NotUnivariate(self.n))
        }
    }

    pub fn is_empty(&self) -> bool {
        self.kummer.is_empty() && self.as_factor.is_none()
    }

    /// Same data with the Kummer factors reordered / rescaled (used by
    /// invariance tests).
    pub fn with_kummer(&self, kummer: Vec<KummerFactor>) -> Result<Self> {
        Self::assemble(
            self.q_exp,
            self.d,
            self.n,
            Arc::clone(&self.base),
            Arc::clone(&self.field),
            Arc::clone(&self.base_emb),
            kummer,
            self.as_factor.clone(),
            self.exclude_explicit.then(|| self.exclude.clone()),
        )
    }

    /// The twisted AS function `b·f` whose trace gives the transferred AS
    /// factor.
    pub fn as_twisted(&self) -> Option<RatFunc> {
        self.as_factor.as_ref().map(|a| a.f.scale(a.psi.twist()))
    }
}

/// Conjugate Kummer factor `(χ_j^{q^i}, σ^{-i} f_j)`.
#[derive(Clone, Debug)]
pub struct KummerConjugate {
    pub j: usize,
    pub i: u32,
    pub chi: MultChar,
    pub f: Poly,
}

/// Conjugate AS factor `(ψ∘σ^i, σ^{-i} f)`.
#[derive(Clone, Debug)]
pub struct AsConjugate {
    pub i: u32,
    pub psi: AddChar,
    pub f: RatFunc,
}

/// The pullback of the transferred data to `X_1`.
#[derive(Clone, Debug)]
pub struct PullbackSpec {
    pub q_exp: u32,
    pub d: u32,
    pub kummer_conj: Vec<KummerConjugate>,
    /// `(χ_j, Π_i f_j(t^{q^i}))`.
    pub kummer_norm: Vec<(MultChar, Poly)>,
    pub as_conj: Vec<AsConjugate>,
    /// `Tr_{q^d/q}(b·f)`, paired with the untwisted `ψ_1`.
    pub as_trace: Option<RatFunc>,
}

impl PullbackSpec {
    pub fn is_empty(&self) -> bool {
        self.kummer_norm.is_empty() && self.as_trace.is_none()
    }
}

pub fn transfer_pullback(s: &SheafSpec) -> PullbackSpec {
    let (q_exp, d) = (s.q_exp, s.d);
    let q = s.q();
    let mut kummer_conj = Vec::new();
    let mut kummer_norm = Vec::new();
    for (j, k) in s.kummer.iter().enumerate() {
        let mut qi = 1u64;
        for i in 0..d {
            kummer_conj.push(KummerConjugate {
                j,
                i,
                chi: k.chi.pow(qi),
                f: sigma_act(&k.f, -(i as i64), q_exp, d),
            });
            qi *= q;
        }
        kummer_norm.push((k.chi.clone(), norm_product(&k.f, q_exp, d)));
    }
    let (as_conj, as_trace) = match &s.as_factor {
        None => (Vec::new(), None),
        Some(a) => {
            let conj = (0..d)
                .map(|i| AsConjugate {
                    i,
                    psi: a.psi.clone(),
                    f: a.f.sigma_act(-(i as i64), q_exp, d),
                })
                .collect();
            let twisted = a.f.scale(a.psi.twist());
            (conj, Some(trace_rational(&twisted, q_exp, d)))
        }
    };
    PullbackSpec {
        q_exp,
        d,
        kummer_conj,
        kummer_norm,
        as_conj,
        as_trace,
    }
}

/// Maps an `F_q` point into `F_{q^d}`.
pub fn lift_point(s: &SheafSpec, a: &[Fe]) -> Vec<Fe> {
    a.iter().map(|&x| s.base_emb.apply(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn spec(json: &str) -> SheafSpec {
        SheafSpec::from_json(&serde_json::from_str(json).unwrap()).unwrap()
    }

    #[test]
    fn json_roundtrip_and_defaults() {
        let s = spec(r#"{"p":2,"q_exp":1,"d":2,"kummer":[{"k_idx":1,"poly":"t+g"}],"as":null}"#);
        assert_eq!(s.nvars(), 1);
        assert_eq!(s.exclude().to_string(), "t^2+t+1");
        assert!(s.exclusion_descends());
        let back = SheafSpec::from_json(&s.to_json()).unwrap();
        assert_eq!(back.to_json(), s.to_json());
    }

    #[test]
    fn invalid_specs() {
        let bad = |j: &str| SheafSpec::from_json(&serde_json::from_str(j).unwrap());
        assert!(matches!(
            bad(r#"{"p":4,"q_exp":1,"d":2}"#),
            Err(Error::NotPrime(4))
        ));
        assert!(bad(r#"{"p":2,"q_exp":1,"d":2,"kummer":[{"k_idx":1,"poly":"0"}]}"#).is_err());
        assert!(bad(r#"{"p":2,"q_exp":1,"d":2,"as":{"b":"1","num":"t","den":"0"}}"#).is_err());
        assert!(bad(r#"{"p":2,"q_exp":1,"d":2,"kummer":[{"k_idx":1,"poly":"t"}],"exclude":"t+1"}"#)
            .is_err());
    }

    #[test]
    fn explicit_exclusion_may_be_undescended() {
        let s = spec(r#"{"p":2,"q_exp":1,"d":2,"kummer":[{"k_idx":1,"poly":"t+g"}],"exclude":"t+g"}"#);
        assert!(!s.exclusion_descends());
        assert!(matches!(s.require_descended(), Err(Error::ExclusionNotDescended)));
    }

    #[test]
    fn pullback_examples() {
        let s = spec(r#"{"p":2,"q_exp":1,"d":2,"kummer":[{"k_idx":1,"poly":"t+g"}]}"#);
        let pb = transfer_pullback(&s);
        let f = s.field();
        assert_eq!(pb.kummer_norm[0].1, Poly::parse(f, 1, "t^3+g*t^2+g*t+g^2").unwrap());
        assert_eq!(pb.kummer_conj.len(), 2);
        assert_eq!(pb.kummer_conj[1].f, Poly::parse(f, 1, "t+g^2").unwrap());
        assert_eq!(pb.kummer_conj[1].chi.k_idx(), 2);

        let s = spec(r#"{"p":2,"q_exp":1,"d":2,"as":{"b":"1","num":"g*t^2"}}"#);
        let pb = transfer_pullback(&s);
        let f = s.field();
        assert_eq!(pb.as_conj[0].f, RatFunc::parse(f, 1, "g*t^2", None).unwrap());
        assert_eq!(pb.as_conj[1].f, RatFunc::parse(f, 1, "g^2*t^2", None).unwrap());
        assert_eq!(pb.as_trace.unwrap(), RatFunc::parse(f, 1, "t^2", None).unwrap());

        let s = spec(r#"{"p":3,"q_exp":1,"d":2}"#);
        assert!(transfer_pullback(&s).is_empty());
    }
}
