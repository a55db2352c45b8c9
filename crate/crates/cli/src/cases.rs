//! Deterministic enumeration of sweep cases.
//!
//! A group expands, per field and per Kummer count `k`, into the product
//! `(characters × polynomials)^k × (AS forms × twists)`. Cases are indexed
//! in mixed radix over that product; when it exceeds `sample`, a seeded
//! subset of indices is taken and visited in increasing order.

use charsum_core::ffield::{build_field, is_prime, Fe, Field};
use charsum_core::polyrat::{Poly, UniPoly};
use charsum_core::sheaf::{AsJson, KummerJson, SheafSpecJson};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use crate::config::{CharSet, FieldTriple, SweepConfig, SweepGroup, Template, TwistSet};
use crate::CliError;

/// A generated case before validation.
#[derive(Clone, Debug)]
pub struct CaseInput {
    pub label: String,
    pub spec: SheafSpecJson,
}

struct FieldCtx {
    big: Arc<Field>,
}

impl FieldCtx {
    fn new(t: FieldTriple) -> Result<Self, CliError> {
        let FieldTriple(p, q_exp, d) = t;
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(CliError::Invalid(format!("p must be prime (got {p})")));
        }
        if q_exp == 0 || d == 0 {
            return Err(CliError::Invalid("extension degrees must be positive".into()));
        }
        let big = build_field(p as u32, q_exp * d).map_err(|e| CliError::Invalid(e.to_string()))?;
        Ok(FieldCtx { big })
    }

    fn size(&self) -> u128 {
        self.big.size() as u128
    }

    fn elem(&self, i: u128) -> Fe {
        Fe(i as u32)
    }

    fn text(&self, x: Fe) -> String {
        self.big.format(x)
    }

    fn poly_text(&self, coeffs: Vec<Fe>) -> String {
        Poly::from_uni(&UniPoly::new(self.big.clone(), coeffs)).to_string()
    }
}

/// Mixed-radix decoding, least significant digit first.
fn digits(mut idx: u128, radices: &[u128]) -> Vec<u128> {
    radices
        .iter()
        .map(|&r| {
            let d = idx % r;
            idx /= r;
            d
        })
        .collect()
}

/// Monic polynomials of degree `1..=max_degree`, by degree then by
/// lower coefficients in radix `Q`.
struct MonicPolys {
    max_degree: u32,
}

impl MonicPolys {
    fn count(&self, ctx: &FieldCtx) -> u128 {
        (1..=self.max_degree).map(|e| ctx.size().pow(e)).sum()
    }

    fn get(&self, ctx: &FieldCtx, mut idx: u128) -> String {
        let q = ctx.size();
        for e in 1..=self.max_degree {
            let n = q.pow(e);
            if idx < n {
                let mut c: Vec<Fe> = digits(idx, &vec![q; e as usize])
                    .into_iter()
                    .map(|x| ctx.elem(x))
                    .collect();
                c.push(Fe::ONE);
                return ctx.poly_text(c);
            }
            idx -= n;
        }
        unreachable!("index within count")
    }
}

struct KummerSlot {
    chars: Vec<u64>,
    polys: MonicPolys,
}

impl KummerSlot {
    fn count(&self, ctx: &FieldCtx) -> u128 {
        self.chars.len() as u128 * self.polys.count(ctx)
    }

    fn get(&self, ctx: &FieldCtx, idx: u128) -> KummerJson {
        let n = self.chars.len() as u128;
        KummerJson {
            k_idx: self.chars[(idx % n) as usize],
            poly: self.polys.get(ctx, idx / n),
        }
    }
}

/// Placeholders in template order; `c` ranges over nonzero elements.
const PLACEHOLDERS: [char; 3] = ['a', 'b', 'c'];

fn template_vars(t: &Template) -> Vec<char> {
    PLACEHOLDERS
        .into_iter()
        .filter(|v| t.num.contains(*v) || t.den.contains(*v))
        .collect()
}

fn substitute(s: &str, vals: &[(char, String)]) -> String {
    let mut out = String::new();
    for ch in s.chars() {
        match vals.iter().find(|(v, _)| *v == ch) {
            Some((_, x)) => {
                out.push('(');
                out.push_str(x);
                out.push(')');
            }
            None => out.push(ch),
        }
    }
    out
}

struct AsForms<'a> {
    templates: &'a [Template],
    poly_max_degree: Option<u32>,
    twists: Vec<Fe>,
}

impl AsForms<'_> {
    fn template_count(&self, ctx: &FieldCtx, t: &Template) -> u128 {
        template_vars(t)
            .iter()
            .map(|&v| if v == 'c' { ctx.size() - 1 } else { ctx.size() })
            .product()
    }

    fn form_count(&self, ctx: &FieldCtx) -> u128 {
        let t: u128 = self.templates.iter().map(|t| self.template_count(ctx, t)).sum();
        let p = self.poly_max_degree.map_or(0, |e| ctx.size().pow(e + 1));
        t + p
    }

    fn count(&self, ctx: &FieldCtx) -> u128 {
        self.form_count(ctx) * self.twists.len() as u128
    }

    fn form(&self, ctx: &FieldCtx, mut idx: u128) -> (String, String) {
        for t in self.templates {
            let n = self.template_count(ctx, t);
            if idx < n {
                let vars = template_vars(t);
                let radices: Vec<u128> = vars
                    .iter()
                    .map(|&v| if v == 'c' { ctx.size() - 1 } else { ctx.size() })
                    .collect();
                let vals: Vec<(char, String)> = vars
                    .iter()
                    .zip(digits(idx, &radices))
                    .map(|(&v, x)| (v, ctx.text(ctx.elem(if v == 'c' { x + 1 } else { x }))))
                    .collect();
                return (substitute(&t.num, &vals), substitute(&t.den, &vals));
            }
            idx -= n;
        }
        let e = self.poly_max_degree.expect("index within count");
        let c = digits(idx, &vec![ctx.size(); e as usize + 1])
            .into_iter()
            .map(|x| ctx.elem(x))
            .collect();
        (ctx.poly_text(c), "1".into())
    }

    fn get(&self, ctx: &FieldCtx, idx: u128) -> AsJson {
        let n = self.twists.len() as u128;
        let (num, den) = self.form(ctx, idx / n);
        AsJson {
            b: ctx.text(self.twists[(idx % n) as usize]),
            num,
            den: (den != "1").then_some(den),
        }
    }
}

fn twists(ctx: &FieldCtx, set: TwistSet) -> Vec<Fe> {
    let f = &ctx.big;
    match set {
        TwistSet::One => vec![Fe::ONE],
        TwistSet::PrimeField => (1..f.characteristic() as i64).map(|c| f.from_int(c)).collect(),
        TwistSet::All => f.elements().filter(|x| !x.is_zero()).collect(),
    }
}

/// Number of sampled indices per `(group, field, k)` block, and the seeded
/// stream they come from.
fn block_indices(total: u128, sample: Option<u64>, seed: u64, stream: u64) -> Result<Vec<u128>, CliError> {
    match sample {
        Some(s) if (s as u128) < total => {
            let len = usize::try_from(total)
                .map_err(|_| CliError::Invalid(format!("sweep block of {total} cases is too large to sample")))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            let mut v: Vec<u128> = rand::seq::index::sample(&mut rng, len, s as usize)
                .into_iter()
                .map(|i| i as u128)
                .collect();
            v.sort_unstable();
            Ok(v)
        }
        _ => {
            if total > 50_000_000 {
                return Err(CliError::Invalid(format!(
                    "sweep block of {total} cases needs a `sample` size"
                )));
            }
            Ok((0..total).collect())
        }
    }
}

fn expand_group(g: &SweepGroup, gi: usize, seed: u64, out: &mut Vec<CaseInput>) -> Result<(), CliError> {
    for (fi, &triple) in g.fields.iter().enumerate() {
        let ctx = FieldCtx::new(triple)?;
        let qd = ctx.big.size() as u64;
        let chars: Vec<u64> = match g.characters {
            CharSet::All => (0..qd - 1).collect(),
            CharSet::Nontrivial => (1..qd - 1).collect(),
        };
        let slot = KummerSlot {
            chars,
            polys: MonicPolys { max_degree: g.max_degree },
        };
        let as_forms = g.as_slot.as_ref().map(|a| AsForms {
            templates: &a.templates,
            poly_max_degree: a.poly_max_degree,
            twists: twists(&ctx, a.twists),
        });
        for &k in &g.k {
            let mut radices = vec![slot.count(&ctx); k];
            if let Some(a) = &as_forms {
                radices.push(a.count(&ctx));
            }
            let total = radices
                .iter()
                .try_fold(1u128, |acc, &r| acc.checked_mul(r))
                .ok_or_else(|| CliError::Invalid("sweep block size overflows".into()))?;
            let stream = ((gi as u64) << 32) | ((fi as u64) << 8) | k as u64;
            let FieldTriple(p, q_exp, d) = triple;
            let label = format!("group {gi}: p={p} q_exp={q_exp} d={d} k={k}");
            for idx in block_indices(total, g.sample, seed, stream)? {
                let dg = digits(idx, &radices);
                let kummer = dg[..k].iter().map(|&x| slot.get(&ctx, x)).collect();
                let as_factor = as_forms.as_ref().map(|a| a.get(&ctx, dg[k]));
                out.push(CaseInput {
                    label: label.clone(),
                    spec: SheafSpecJson {
                        p,
                        q_exp,
                        d,
                        n: 1,
                        kummer,
                        as_factor,
                        exclude: None,
                    },
                });
            }
        }
    }
    Ok(())
}

/// All cases of a sweep, in a seed-determined but otherwise fixed order.
pub fn expand(sweep: &SweepConfig, seed: u64) -> Result<Vec<CaseInput>, CliError> {
    let mut out = Vec::new();
    for (gi, g) in sweep.groups.iter().enumerate() {
        expand_group(g, gi, seed, &mut out)?;
    }
    Ok(out)
}
