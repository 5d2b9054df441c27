mod common;

use common::raw;
use proptest::prelude::*;
use robsel::oracle::oracle_robust;
use robsel::robust_continuous::{
    dominance_preprocess, solve_r2st_continuous, solve_rrec_continuous, solve_rrec_continuous_with, RrecOptions,
};
use robsel::robust_discrete::robust_value;
use robsel::{BudgetModel, Problem};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn rrec_matches_oracle(r in raw(1, 7, 30, 10)) {
        let inst = r.instance(BudgetModel::Continuous);
        let (x, v) = solve_rrec_continuous(&inst).unwrap();
        let o = oracle_robust(&inst, Problem::Rrec).unwrap();
        prop_assert_eq!(&v, &o.value);
        prop_assert_eq!(robust_value(&inst, &x, Problem::Rrec).unwrap(), v);
    }

    #[test]
    fn r2st_matches_oracle(r in raw(1, 7, 30, 10)) {
        let inst = r.instance(BudgetModel::Continuous);
        let (x, v) = solve_r2st_continuous(&inst).unwrap();
        let o = oracle_robust(&inst, Problem::R2st).unwrap();
        prop_assert_eq!(&v, &o.value);
        prop_assert_eq!(robust_value(&inst, &x, Problem::R2st).unwrap(), v);
    }

    #[test]
    fn preprocessing_keeps_value(r in raw(2, 7, 30, 6)) {
        let inst = r.instance(BudgetModel::Continuous);
        let with = solve_rrec_continuous_with(&inst, RrecOptions { preprocess: true }).unwrap();
        let without = solve_rrec_continuous_with(&inst, RrecOptions { preprocess: false }).unwrap();
        prop_assert_eq!(with.value, without.value);
        let pre = dominance_preprocess(&inst).unwrap();
        prop_assert_eq!(pre.first_stage.len() + pre.removed.len(), inst.n);
        prop_assert!(pre.first_stage.len() >= inst.p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tied_data_matches_oracle(r in raw(1, 7, 8, 3)) {
        let inst = r.instance(BudgetModel::Continuous);
        prop_assert_eq!(solve_rrec_continuous(&inst).unwrap().1, oracle_robust(&inst, Problem::Rrec).unwrap().value);
        prop_assert_eq!(solve_r2st_continuous(&inst).unwrap().1, oracle_robust(&inst, Problem::R2st).unwrap().value);
    }
}
