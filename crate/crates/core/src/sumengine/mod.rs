//! Exhaustive evaluation of incomplete and complete sums.
//!
//! Every summand is a root of unity `ζ_N^r` (or zero) with `N = p(Q-1)`,
//! `Q = q^d`, so a sum is an exponent histogram; the domain is cut into
//! contiguous chunks whose histograms are merged, which makes the result
//! independent of scheduling.

mod lpoly;
mod oracle;

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

pub use lpoly::{lpoly_fit, LPolyFit, Purity};
pub use oracle::{triviality_oracle, OracleReport, OracleTarget, Verdict};

use crate::chars::{combine_exponents, cyc_order, Accumulator, Approx, CycValue};
use crate::error::{Error, Result};
use crate::ffield::{build_field, embed, Fe, Field};
use crate::polyrat::{Poly, RatFunc, UniPoly};
use crate::sheaf::{transfer_pullback, PullbackSpec, SheafSpec};

/// Largest point domain enumerated.
pub const DEFAULT_POINT_CAP: u64 = 1 << 20;
/// Upper bound on summand-log entries.
pub const MAX_LOG_ENTRIES: usize = 10_000;

#[derive(Clone, Debug)]
enum Eval {
    Uni(UniPoly),
    Multi(Poly),
}

impl Eval {
    fn new(p: &Poly) -> Self {
        match p.to_uni() {
            Ok(u) if p.nvars() == 1 => Eval::Uni(u),
            _ => Eval::Multi(p.clone()),
        }
    }

    #[inline]
    fn at(&self, y: &[Fe]) -> Fe {
        match self {
            Eval::Uni(u) => u.eval(y[0]),
            Eval::Multi(p) => p.eval(y),
        }
    }
}

#[derive(Clone, Debug)]
enum Term {
    /// `ζ_{Q-1}^{coef·log_L(f(y))}`, zero where `f(y) = 0`.
    Kummer { coef: u64, f: Eval },
    /// `ζ_p^{Tr_{L/F_p}(b·z^{p^frob})}` with `z = num(y)/den(y)`.
    As {
        b: Fe,
        frob: u32,
        num: Eval,
        den: Eval,
    },
}

/// Summand kernel over `L ⊇ F_{q^d}`: all polynomials lifted into `L` and
/// Kummer exponents pre-multiplied by the norm-to-`F_{q^d}` log factor.
#[derive(Clone, Debug)]
struct Kernel {
    big: Arc<Field>,
    coef_field: Arc<Field>,
    terms: Vec<Term>,
    exclude: Eval,
}

/// Outcome of one summand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Summand {
    Excluded,
    Undefined,
    Zero,
    Root(u32),
}

impl Kernel {
    #[inline]
    fn at(&self, y: &[Fe]) -> Summand {
        if self.exclude.at(y).is_zero() {
            return Summand::Excluded;
        }
        let l = &self.big;
        let n1 = self.coef_field.order();
        let mut mult: u64 = 0;
        let mut add: u32 = 0;
        let mut zero = false;
        for t in &self.terms {
            match t {
                Term::Kummer { coef, f } => match l.log(f.at(y)) {
                    None => zero = true,
                    Some(j) => {
                        mult = (mult + (j as u128 * *coef as u128 % n1 as u128) as u64) % n1;
                    }
                },
                Term::As { b, frob, num, den } => {
                    let dv = den.at(y);
                    let Some(di) = l.inv(dv) else {
                        return Summand::Undefined;
                    };
                    let z = l.frobenius(l.mul(num.at(y), di), *frob);
                    add += l.abs_trace(l.mul(*b, z));
                }
            }
        }
        if zero {
            return Summand::Zero;
        }
        let p = l.characteristic();
        Summand::Root(combine_exponents(&self.coef_field, mult, add % p))
    }
}

/// How the data is presented to the kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Form {
    /// `(χ_j, f_j)`, `(ψ_b, f)`.
    Direct,
    /// `(χ_j, N f_j)`, `(ψ_1, Tr(b f))`.
    Norm,
    /// `(χ_j^{q^i}, σ^{-i} f_j)`, `(ψ_b ∘ σ^i, σ^{-i} f)`.
    Conjugates,
}

/// Kernel over `F_{Q^m}`.
fn kernel(s: &SheafSpec, pb: Option<&PullbackSpec>, form: Form, m: u32) -> Result<Kernel> {
    let k = s.field();
    let big = build_field(k.characteristic(), k.degree() * m)?;
    let emb = embed(k, &big)?;
    let target = Arc::clone(&big);
    let lift = |p: &Poly| Eval::new(&p.map_coeffs(&target, |a| emb.apply(a)));
    // log_Q(N_{L/Q}(g_L)) with N(g_L) = g_L^{(|L|-1)/(Q-1)}
    let n1 = k.order();
    let norm_gen = big.exp(big.order() / n1);
    let mu = k.log(emb.preimage(norm_gen).expect("norm lands in the subfield")).unwrap() as u64;
    let kummer = |k_idx: u64, f: &Poly| Term::Kummer {
        coef: (k_idx as u128 * mu as u128 % n1 as u128) as u64,
        f: lift(f),
    };
    let as_term = |b: Fe, frob: u32, f: &RatFunc| Term::As {
        b: emb.apply(b),
        frob,
        num: lift(f.num()),
        den: lift(f.den()),
    };
    let mut terms = Vec::new();
    match form {
        Form::Direct => {
            for kf in s.kummer() {
                terms.push(kummer(kf.chi.k_idx(), &kf.f));
            }
            if let Some(a) = s.as_factor() {
                terms.push(as_term(a.psi.twist(), 0, &a.f));
            }
        }
        Form::Norm => {
            let pb = pb.expect("pullback supplied");
            for (chi, f) in &pb.kummer_norm {
                terms.push(kummer(chi.k_idx(), f));
            }
            if let Some(tr) = &pb.as_trace {
                terms.push(as_term(Fe::ONE, 0, tr));
            }
        }
        Form::Conjugates => {
            let pb = pb.expect("pullback supplied");
            for c in &pb.kummer_conj {
                terms.push(kummer(c.chi.k_idx(), &c.f));
            }
            for c in &pb.as_conj {
                terms.push(as_term(c.psi.twist(), s.q_exp() * c.i, &c.f));
            }
        }
    }
    let exclude = lift(s.exclude());
    Ok(Kernel {
        big,
        coef_field: Arc::clone(k),
        terms,
        exclude,
    })
}

fn check_cap(base: u64, n: usize, cap: u64) -> Result<u64> {
    let total = (base as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(Error::CapExceeded(format!(
            "{total} points exceeds the enumeration cap {cap}"
        )));
    }
    Ok(total as u64)
}

#[inline]
fn point(elems: &[Fe], n: usize, mut idx: u64, buf: &mut [Fe]) {
    let b = elems.len() as u64;
    for slot in buf.iter_mut().take(n) {
        *slot = elems[(idx % b) as usize];
        idx /= b;
    }
}

/// Histogram over all points of `elems^n` with `E ≠ 0`.
fn accumulate(kern: &Kernel, elems: &[Fe], n: usize, cap: u64) -> Result<Accumulator> {
    let total = check_cap(elems.len() as u64, n, cap)?;
    let order = cyc_order(&kern.coef_field);
    let chunks = (rayon::current_num_threads() as u64 * 4).clamp(1, total.max(1));
    let step = total.div_ceil(chunks).max(1);
    let parts: Vec<(Accumulator, u64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = Accumulator::new(order);
            let mut undefined = 0u64;
            let mut buf = vec![Fe::ZERO; n];
            for idx in c * step..((c + 1) * step).min(total) {
                point(elems, n, idx, &mut buf);
                match kern.at(&buf) {
                    Summand::Excluded => {}
                    Summand::Undefined => undefined += 1,
                    Summand::Zero => acc.push_zero(),
                    Summand::Root(r) => acc.push_root(r),
                }
            }
            (acc, undefined)
        })
        .collect();
    let mut acc = Accumulator::new(order);
    let mut undefined = 0;
    for (a, u) in &parts {
        acc = acc.merge(a);
        undefined += u;
    }
    if undefined > 0 {
        return Err(Error::InvalidSpec(format!(
            "the AS denominator vanishes at {undefined} points where E does not"
        )));
    }
    Ok(acc)
}

/// One logged summand: the point and the exponent of `ζ_N` (`None` for 0).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummandEntry {
    pub point: Vec<String>,
    pub exponent: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumResult {
    pub value: CycValue,
    pub re: f64,
    pub im: f64,
    /// Error bound on `re`, `im` and `abs`.
    pub err: f64,
    pub abs: f64,
    pub count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summands: Option<Vec<SummandEntry>>,
}

impl SumResult {
    fn from_acc(acc: &Accumulator) -> Self {
        let value = acc.finish();
        let (z, err) = value.to_complex();
        let Approx { value: abs, .. } = value.abs();
        SumResult {
            value,
            re: z.re,
            im: z.im,
            err,
            abs,
            count: acc.count(),
            summands: None,
        }
    }
}

fn summand_log(kern: &Kernel, elems: &[Fe], n: usize, cap: usize) -> Vec<SummandEntry> {
    let total = (elems.len() as u64).saturating_pow(n as u32);
    let mut out = Vec::new();
    let mut buf = vec![Fe::ZERO; n];
    for idx in 0..total {
        if out.len() >= cap.min(MAX_LOG_ENTRIES) {
            break;
        }
        point(elems, n, idx, &mut buf);
        let exponent = match kern.at(&buf) {
            Summand::Excluded | Summand::Undefined => continue,
            Summand::Zero => None,
            Summand::Root(r) => Some(r),
        };
        out.push(SummandEntry {
            point: buf.iter().map(|&x| kern.big.format(x)).collect(),
            exponent,
        });
    }
    out
}

fn base_points(s: &SheafSpec) -> Vec<Fe> {
    let emb = s.base_embedding();
    s.base_field().elements().map(|a| emb.apply(a)).collect()
}

/// `S' = Σ_{a ∈ F_q^n, E(a) ≠ 0} Π_j χ_j(f_j(a)) · ψ(f(a))`.
pub fn incomplete_sum(s: &SheafSpec) -> Result<SumResult> {
    incomplete_sum_logged(s, 0)
}

/// As [`incomplete_sum`], keeping the first `log_cap` summands.
pub fn incomplete_sum_logged(s: &SheafSpec, log_cap: usize) -> Result<SumResult> {
    let kern = kernel(s, None, Form::Direct, 1)?;
    let elems = base_points(s);
    let acc = accumulate(&kern, &elems, s.nvars(), DEFAULT_POINT_CAP)?;
    let mut r = SumResult::from_acc(&acc);
    if log_cap > 0 {
        r.summands = Some(summand_log(&kern, &elems, s.nvars(), log_cap));
    }
    Ok(r)
}

fn field_points(big: &Field) -> Vec<Fe> {
    big.elements().collect()
}

fn complete_with(s: &SheafSpec, form: Form, m: u32, cap: u64) -> Result<SumResult> {
    if m == 0 {
        return Err(Error::ZeroDegree);
    }
    let k = s.field();
    let size = (k.size() as u128).checked_pow(m).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(Error::CapExceeded(format!(
            "F_{{Q^{m}}} with Q = {} exceeds the enumeration cap {cap}",
            k.size()
        )));
    }
    let pb = match form {
        Form::Direct => None,
        _ => Some(transfer_pullback(s)),
    };
    let kern = kernel(s, pb.as_ref(), form, m)?;
    let elems = field_points(&kern.big);
    let acc = accumulate(&kern, &elems, s.nvars(), cap)?;
    Ok(SumResult::from_acc(&acc))
}

/// `S_m` of the data over `X_1(F_{Q^m})`: characters composed with the
/// norm / trace from `F_{Q^m}` down to `F_Q`.
pub fn complete_sum(s: &SheafSpec, m: u32) -> Result<SumResult> {
    complete_with(s, Form::Direct, m, DEFAULT_POINT_CAP)
}

/// `S_m` over `X_1(F_{Q^m})` of the pullback of the transferred data.
pub fn complete_sum_pullback(s: &SheafSpec, m: u32) -> Result<SumResult> {
    complete_with(s, Form::Norm, m, DEFAULT_POINT_CAP)
}

/// A point where two summand computations disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub point: Vec<String>,
    pub expected: Option<u32>,
    pub found: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub checked: u64,
    pub failures: Vec<Mismatch>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn root_or_zero(s: Summand) -> Option<Option<u32>> {
    match s {
        Summand::Excluded | Summand::Undefined => None,
        Summand::Zero => Some(None),
        Summand::Root(r) => Some(Some(r)),
    }
}

/// Pointwise comparison of `f(kern_a(y))` with `kern_b(y)` over `elems^n`.
fn compare(
    a: &Kernel,
    b: &Kernel,
    elems: &[Fe],
    n: usize,
    map_a: impl Fn(u32) -> u32,
) -> Result<IdentityReport> {
    let total = check_cap(elems.len() as u64, n, DEFAULT_POINT_CAP)?;
    let mut buf = vec![Fe::ZERO; n];
    let mut checked = 0;
    let mut failures = Vec::new();
    for idx in 0..total {
        point(elems, n, idx, &mut buf);
        let (Some(x), Some(y)) = (root_or_zero(a.at(&buf)), root_or_zero(b.at(&buf))) else {
            continue;
        };
        checked += 1;
        let expected = x.map(&map_a);
        if expected != y && failures.len() < 32 {
            failures.push(Mismatch {
                point: buf.iter().map(|&v| a.big.format(v)).collect(),
                expected,
                found: y,
            });
        }
    }
    Ok(IdentityReport { checked, failures })
}

/// At every `a ∈ F_q^n` with `E(a) ≠ 0`: the pullback summand (in both of
/// its forms) equals the `d`-th power of the incomplete summand.
pub fn verify_transfer_identity(s: &SheafSpec) -> Result<IdentityReport> {
    if s.nvars() > 2 {
        return Err(Error::InvalidSpec(
            "transfer identity is checked for at most two variables".into(),
        ));
    }
    let pb = transfer_pullback(s);
    let direct = kernel(s, None, Form::Direct, 1)?;
    let elems = base_points(s);
    let n_cyc = cyc_order(s.field()) as u64;
    let d = s.d() as u64;
    let pow_d = |r: u32| ((r as u64 * d) % n_cyc) as u32;
    let mut report = compare(&direct, &kernel(s, Some(&pb), Form::Norm, 1)?, &elems, s.nvars(), pow_d)?;
    let conj = compare(
        &direct,
        &kernel(s, Some(&pb), Form::Conjugates, 1)?,
        &elems,
        s.nvars(),
        pow_d,
    )?;
    report.failures.extend(conj.failures);
    Ok(report)
}

/// At every point of `X_1(F_{Q^m})`: the conjugate-list and norm/trace
/// forms of the pullback give the same summand.
pub fn verify_pullback_forms(s: &SheafSpec, m: u32) -> Result<IdentityReport> {
    let pb = transfer_pullback(s);
    let a = kernel(s, Some(&pb), Form::Conjugates, m)?;
    let b = kernel(s, Some(&pb), Form::Norm, m)?;
    let elems = field_points(&a.big);
    compare(&a, &b, &elems, s.nvars(), |r| r)
}

/// Largest `m ≤ m_max` with `(Q^m)^n` within the enumeration cap.
pub fn max_degree_within_cap(s: &SheafSpec, m_max: u32, cap: u64) -> u32 {
    let q = s.field().size() as u128;
    (1..=m_max)
        .take_while(|&m| {
            q.checked_pow(m)
                .and_then(|v| v.checked_pow(s.nvars() as u32))
                .is_some_and(|v| v <= cap as u128)
        })
        .last()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sheaf::SheafSpecJson;

    pub(crate) fn spec(json: &str) -> SheafSpec {
        SheafSpec::from_json(&serde_json::from_str::<SheafSpecJson>(json).unwrap()).unwrap()
    }

    #[test]
    fn incomplete_examples() {
        let r = incomplete_sum(&spec(
            r#"{"p":2,"q_exp":1,"d":2,"kummer":[{"k_idx":1,"poly":"t+g"}]}"#,
        ))
        .unwrap();
        assert_eq!(r.value.as_integer(), Some(-1));
        assert!((r.abs - 1.0).abs() < 1e-12);
        assert_eq!(r.count, 2);

        let r = incomplete_sum(&spec(r#"{"p":3,"q_exp":1,"d":1,"kummer":[{"k_idx":0,"poly":"t"}]}"#))
            .unwrap();
        assert_eq!(r.value.as_integer(), Some(2));

        let r = incomplete_sum(&spec(r#"{"p":2,"q_exp":1,"d":2,"as":{"b":"1","num":"g*t^2"}}"#))
            .unwrap();
        assert!(r.value.is_zero());
    }

    #[test]
    fn complete_examples() {
        let s = spec(r#"{"p":2,"q_exp":1,"d":2,"kummer":[{"k_idx":1,"poly":"t+g"}],"exclude":"t+g"}"#);
        assert!(complete_sum(&s, 1).unwrap().value.is_zero());
        let s = spec(r#"{"p":2,"q_exp":1,"d":2,"kummer":[{"k_idx":1,"poly":"t*(t+1)"}]}"#);
        assert_eq!(complete_sum(&s, 1).unwrap().value.as_integer(), Some(2));
        for (p, qe) in [(2, 2), (3, 1), (5, 1)] {
            let s = spec(&format!(
                r#"{{"p":{p},"q_exp":{qe},"d":1,"as":{{"b":"1","num":"t"}}}}"#
            ));
            assert!(complete_sum(&s, 1).unwrap().value.is_zero());
        }
    }

    #[test]
    fn transfer_identity_examples() {
        for j in [
            r#"{"p":2,"q_exp":1,"d":2,"kummer":[{"k_idx":1,"poly":"t+g"}]}"#,
            r#"{"p":2,"q_exp":1,"d":2,"as":{"b":"1","num":"g*t^2"}}"#,
            r#"{"p":3,"q_exp":1,"d":2,"kummer":[{"k_idx":3,"poly":"t^2+g"}],"as":{"b":"g","num":"t","den":"t+g"}}"#,
            r#"{"p":2,"q_exp":1,"d":3,"n":2,"kummer":[{"k_idx":2,"poly":"t1*t2+g"}]}"#,
        ] {
            let s = spec(j);
            let r = verify_transfer_identity(&s).unwrap();
            assert!(r.passed(), "{j}: {:?}", r.failures);
            assert!(r.checked > 0);
            for m in 1..=2 {
                let f = verify_pullback_forms(&s, m).unwrap();
                assert!(f.passed(), "{j} m={m}: {:?}", f.failures);
            }
        }
    }

    #[test]
    fn transfer_identity_pointwise_values() {
        // a = 0: N(t+g)(0) = g^2; a = 1: N(t+g)(1) = (1+g)(1+g) = g^4 = g
        let s = spec(r#"{"p":2,"q_exp":1,"d":2,"kummer":[{"k_idx":1,"poly":"t+g"}]}"#);
        let pb = transfer_pullback(&s);
        let k = kernel(&s, Some(&pb), Form::Norm, 1).unwrap();
        let f = s.field();
        let n = cyc_order(f);
        let omega = |e: u64| Summand::Root(combine_exponents(f, e, 0));
        assert_eq!(k.at(&[Fe::ZERO]), omega(2));
        assert_eq!(k.at(&[Fe::ONE]), omega(1));
        let direct = kernel(&s, None, Form::Direct, 1).unwrap();
        assert_eq!(direct.at(&[Fe::ZERO]), omega(1));
        assert_eq!(direct.at(&[Fe::ONE]), omega(2));
        assert_eq!(n, 6);

        let s = spec(r#"{"p":2,"q_exp":1,"d":2,"as":{"b":"1","num":"g*t^2"}}"#);
        let pb = transfer_pullback(&s);
        let k = kernel(&s, Some(&pb), Form::Norm, 1).unwrap();
        assert_eq!(k.at(&[Fe::ONE]), Summand::Root(0));
        let direct = kernel(&s, None, Form::Direct, 1).unwrap();
        assert_eq!(direct.at(&[Fe::ONE]), Summand::Root(combine_exponents(s.field(), 0, 1)));
    }

    #[test]
    fn summand_log_is_capped() {
        let s = spec(r#"{"p":5,"q_exp":1,"d":1,"kummer":[{"k_idx":1,"poly":"t"}]}"#);
        let r = incomplete_sum_logged(&s, 3).unwrap();
        let log = r.summands.unwrap();
        assert_eq!(log.len(), 3);
        assert_eq!(log[0].point, vec!["1".to_string()]);
        assert_eq!(r.count, 4);
    }

    #[test]
    fn cap_is_enforced() {
        let s = spec(r#"{"p":2,"q_exp":10,"d":1,"n":3,"kummer":[{"k_idx":1,"poly":"t1"}]}"#);
        assert!(matches!(incomplete_sum(&s), Err(Error::CapExceeded(_))));
    }
}
