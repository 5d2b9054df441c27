mod common;

use common::raw;
use proptest::prelude::*;
use robsel::adversary_discrete::{a2st_discrete, arec_discrete, candidate_pairs_arec};
use robsel::oracle::{oracle_adversarial_discrete, oracle_incremental};
use robsel::selection::{optimal_dual_pair, solve_irec};
use robsel::{BudgetModel, Problem};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn arec_matches_oracle(r in raw(1, 7, 4, 12)) {
        let inst = r.instance(BudgetModel::Discrete);
        let x = r.x(inst.p);
        let (v, worst) = arec_discrete(&inst, &x).unwrap();
        let o = oracle_adversarial_discrete(&inst, &x, Problem::Arec).unwrap();
        prop_assert_eq!(&v, &o.value);
        worst.check(&inst).unwrap();
        prop_assert_eq!(oracle_incremental(&inst, &x, &worst, Problem::Irec).unwrap().value, v);
        if inst.k > 0 {
            let sx = candidate_pairs_arec(&inst, Some(&x)).unwrap();
            let s = candidate_pairs_arec(&inst, None).unwrap();
            let (pair, _) = optimal_dual_pair(&inst, &x, o.witness_scenario.as_ref().unwrap()).unwrap();
            prop_assert!(sx.contains_pair(&pair), "{:?} missing", pair);
            for d in &sx.pairs {
                prop_assert!(s.contains_pair(d));
            }
        }
    }

    #[test]
    fn a2st_matches_oracle(r in raw(1, 7, 4, 12), size in 0usize..=7) {
        let inst = r.instance(BudgetModel::Discrete);
        let x = r.x(size.min(inst.p));
        let (v, worst) = a2st_discrete(&inst, &x).unwrap();
        let o = oracle_adversarial_discrete(&inst, &x, Problem::A2st).unwrap();
        prop_assert_eq!(&v, &o.value);
        worst.check(&inst).unwrap();
    }

    #[test]
    fn budget_extremes(r in raw(1, 7, 0, 12)) {
        let mut inst = r.instance(BudgetModel::Discrete);
        let x = r.x(inst.p);
        let nominal = solve_irec(&inst, &x, &robsel::Scenario::nominal(inst.n)).unwrap().value;
        prop_assert_eq!(arec_discrete(&inst, &x).unwrap().0, nominal);
        inst.gamma = robsel::Rational::from_integer(inst.n.into());
        let all: Vec<usize> = (0..inst.n).collect();
        let top = solve_irec(&inst, &x, &robsel::Scenario::raise(&inst, &all)).unwrap().value;
        prop_assert_eq!(arec_discrete(&inst, &x).unwrap().0, top);
    }
}
