mod common;

use charsum_core::ffield::Fe;
use charsum_core::sheaf::{bound_report, swan_table, KummerFactor};
use charsum_core::sumengine::{
    triviality_oracle, verify_pullback_forms, verify_transfer_identity, OracleTarget, Verdict,
};
use charsum_core::sheaf::pullback_geometrically_nontrivial;
use common::raw_spec;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pullback_forms_agree_on_x1(raw in raw_spec()) {
        let s = raw.spec();
        let r = verify_pullback_forms(&s, 1).unwrap();
        prop_assert!(r.passed(), "{:?}: {:?}", raw.json(), r.failures);
    }

    #[test]
    fn transfer_identity_holds(raw in raw_spec()) {
        let s = raw.spec();
        let r = verify_transfer_identity(&s).unwrap();
        prop_assert!(r.passed(), "{:?}: {:?}", raw.json(), r.failures);
    }

    #[test]
    fn swan_bounds(raw in raw_spec()) {
        let s = raw.spec();
        let t = swan_table(&s).unwrap();
        prop_assert!(t.violations().is_empty(), "{:?}", t);
        prop_assert!(t.tran_total().unwrap() <= s.d() as u64 * t.l1_total());
        if s.as_factor().is_none() {
            prop_assert!(t.points.iter().all(|p| p.tame()));
        }
    }

    #[test]
    fn bound_report_shape(raw in raw_spec()) {
        let s = raw.spec();
        let r = bound_report(&s).unwrap();
        for b in [&r.prop41, &r.thm42, &r.remark43, &r.thm44, &r.thm45].into_iter().flatten() {
            prop_assert!(b.coef >= 0);
        }
        if let (Some(g), Some(rm)) = (&r.thm42, &r.remark43) {
            prop_assert!(rm.coef <= g.coef);
        }
        // #(X̄ - X) ≤ 1 + d·(D_1 + D_4) for the default exclusion
        prop_assert!(r.missing_points <= 1 + r.d as u64 * (r.d1 + r.d4) as u64);
        // the refined Swan bound never exceeds the explicit ones
        if let (Some(g), Some(t)) = (&r.remark43, &r.thm44) {
            prop_assert!(g.coef <= t.coef);
        }
        if let (Some(g), Some(t)) = (&r.remark43, &r.thm45) {
            prop_assert!(g.coef <= t.coef);
        }
    }

    #[test]
    fn bound_report_invariance(raw in raw_spec(), scales in prop::collection::vec(any::<u32>(), 2)) {
        let s = raw.spec();
        let base = bound_report(&s).unwrap();
        let f = s.field();
        let mut permuted: Vec<KummerFactor> = s.kummer().iter().rev().cloned().collect();
        for (k, c) in permuted.iter_mut().zip(&scales) {
            k.f = k.f.scale(Fe(c % (f.size() - 1) + 1));
        }
        let t = s.with_kummer(permuted).unwrap();
        let r = bound_report(&t).unwrap();
        let mut rd = base.radical_degrees.clone();
        rd.reverse();
        prop_assert_eq!(&r.radical_degrees, &rd);
        prop_assert_eq!(
            (r.missing_points, r.d1, r.d2, r.d3, r.d4, r.hyp44.holds, r.hyp45, r.tran_nontrivial),
            (base.missing_points, base.d1, base.d2, base.d3, base.d4, base.hyp44.holds, base.hyp45, base.tran_nontrivial)
        );
        prop_assert_eq!(r.thm42, base.thm42);
        prop_assert_eq!(r.thm44, base.thm44);
        prop_assert_eq!(r.thm45, base.thm45);
        prop_assert_eq!(r.gos_betti, base.gos_betti);
    }

    /// A NONTRIVIAL verdict proves the summands are not all equal, so the
    /// exact decision must agree.
    #[test]
    fn oracle_is_sound(raw in raw_spec()) {
        let s = raw.spec();
        let v = triviality_oracle(&s, OracleTarget::Pullback, 1).unwrap();
        if v.verdict == Verdict::Nontrivial {
            prop_assert!(pullback_geometrically_nontrivial(&s).unwrap());
        }
    }
}
