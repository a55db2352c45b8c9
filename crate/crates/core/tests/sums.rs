mod common;

use charsum_core::sheaf::{bound_report, SheafSpec, SheafSpecJson};
use charsum_core::sumengine::{
    complete_sum, incomplete_sum, lpoly_fit, OracleTarget, Purity, DEFAULT_POINT_CAP,
};
use common::raw_spec;
use proptest::prelude::*;

fn spec(j: &str) -> SheafSpec {
    SheafSpec::from_json(&serde_json::from_str::<SheafSpecJson>(j).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Under the hypotheses, the incomplete sum respects the explicit bound
    /// and the Swan-based ones.
    #[test]
    fn incomplete_sums_within_bounds(raw in raw_spec()) {
        let s = raw.spec();
        let r = bound_report(&s).unwrap();
        let sum = incomplete_sum(&s).unwrap();
        prop_assert!(sum.abs <= sum.count as f64 + sum.err);
        if r.headline_hypothesis() {
            if let Some(b) = r.headline() {
                prop_assert!(b.admits(&sum.value), "{:?}: |S'| = {} > {}", raw.json(), sum.abs, b.value);
            }
        }
        if r.tran_nontrivial {
            for b in [&r.thm42, &r.remark43].into_iter().flatten() {
                prop_assert!(b.admits(&sum.value), "{:?}", raw.json());
            }
            let betti = r.tran_betti.unwrap();
            prop_assert!(sum.value.cmp_abs_with_sqrt(betti as i64, r.q) != std::cmp::Ordering::Greater);
        }
    }

    /// Complete sums over `X_1(F_{q^d})` obey the Swan bound, and the
    /// L-polynomial of the predicted degree reproduces the next sums.
    #[test]
    fn complete_sums_and_lpoly(raw in raw_spec()) {
        let s = raw.spec();
        let r = bound_report(&s).unwrap();
        prop_assume!(r.l1_nontrivial);
        let b = r.gos_betti.unwrap();
        let s1 = complete_sum(&s, 1).unwrap();
        prop_assert!(r.prop41.unwrap().admits(&s1.value));
        let qsize = s.field().size() as u128;
        prop_assume!(qsize.pow(b as u32 + 2) <= DEFAULT_POINT_CAP as u128 / 16);
        let fit = lpoly_fit(&s, OracleTarget::Direct, b).unwrap();
        prop_assert!(fit.residuals_vanish(), "{:?}", raw.json());
        prop_assert!(fit.within_weight(), "{:?}: {:?}", raw.json(), fit.roots);
    }
}

#[test]
fn incomplete_sum_is_deterministic_across_thread_counts() {
    let s = spec(r#"{"p":2,"q_exp":4,"d":2,"kummer":[{"k_idx":5,"poly":"t^3+g*t+1"}],"as":{"b":"g","num":"t^2","den":"t+g^3"}}"#);
    let a = incomplete_sum(&s).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| incomplete_sum(&s).unwrap());
    assert_eq!(a.value, b.value);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn pure_cases() {
    // AS with f = t^3 over F_5: Swan 3 at ∞, B = 2, all roots of weight 1
    let s = spec(r#"{"p":5,"q_exp":1,"d":1,"as":{"b":"1","num":"t^3"}}"#);
    let r = bound_report(&s).unwrap();
    assert_eq!(r.gos_betti, Some(2));
    let fit = lpoly_fit(&s, OracleTarget::Direct, 2).unwrap();
    assert!(fit.residuals_vanish());
    assert_eq!(fit.purity, Purity::Pure);
}
