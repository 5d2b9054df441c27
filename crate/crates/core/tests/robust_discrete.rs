mod common;

use common::{raw, subsets, Raw};
use proptest::prelude::*;
use robsel::lp::{build_nominal_rrec_lp, solve_lp};
use robsel::oracle::oracle_robust;
use robsel::robust_discrete::{
    approx_nominal_rrec, approx_r2st, build_r2st_discrete_mip, build_rrec_discrete_mip, evaluate_fixed_x,
    minmax_budgeted, parse_lp, solve_exact_enumeration, special_cases, write_lp, MipModel, SpecialCase,
};
use robsel::{BudgetModel, Instance, Problem, Rational, SelectionSolution};

fn with_costs(inst: &Instance, x: &SelectionSolution) -> SelectionSolution {
    SelectionSolution::from_items(&x.items, &inst.first_stage_cost)
}

fn mip_min(inst: &Instance, m: &MipModel, sizes: &[usize]) -> Rational {
    sizes
        .iter()
        .flat_map(|&s| subsets(inst.n, s))
        .map(|x| evaluate_fixed_x(m, &with_costs(inst, &x)).unwrap())
        .min()
        .unwrap()
}

/// Deviations clipped so that `c̲ ≥ c̄ / 2`.
fn half_premise(mut r: Raw) -> Raw {
    for i in 0..r.n {
        r.d[i] = r.d[i].min(r.lo[i]);
    }
    r
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn rrec_mip_matches_oracle(r in raw(1, 7, 4, 10)) {
        let inst = r.instance(BudgetModel::Discrete);
        prop_assume!(inst.k > 0);
        let m = build_rrec_discrete_mip(&inst).unwrap();
        prop_assert_eq!(m.lp.var_count(), 1 + inst.n + m.pairs.len() * (1 + inst.n));
        prop_assert_eq!(m.lp.rows.len(), 1 + m.pairs.len() * (1 + inst.n));
        let o = oracle_robust(&inst, Problem::Rrec).unwrap();
        prop_assert_eq!(mip_min(&inst, &m, &[inst.p]), o.value);
    }

    #[test]
    fn r2st_mip_matches_oracle(r in raw(1, 7, 4, 10)) {
        let inst = r.instance(BudgetModel::Discrete);
        let m = build_r2st_discrete_mip(&inst).unwrap();
        prop_assert!(m.blocks.len() <= 2 * inst.n + 1);
        prop_assert_eq!(m.lp.var_count(), 1 + inst.n + m.blocks.len() * (1 + inst.n));
        let sizes: Vec<usize> = (0..=inst.p).collect();
        let o = oracle_robust(&inst, Problem::R2st).unwrap();
        prop_assert_eq!(mip_min(&inst, &m, &sizes), o.value);
    }

    #[test]
    fn lp_file_round_trip(r in raw(1, 7, 4, 10), fractional in any::<bool>()) {
        let mut inst = r.instance(BudgetModel::Discrete);
        if fractional {
            for c in inst.nominal_cost.iter_mut() {
                *c /= Rational::from_integer(3.into());
            }
        }
        for problem in [Problem::Rrec, Problem::R2st] {
            let m = match problem {
                Problem::Rrec if inst.k == 0 => continue,
                Problem::Rrec => build_rrec_discrete_mip(&inst).unwrap(),
                _ => build_r2st_discrete_mip(&inst).unwrap(),
            };
            let text = write_lp(&m);
            prop_assert_eq!(&write_lp(&build_again(&inst, problem)), &text);
            let back = parse_lp(&text).unwrap();
            for size in 0..=inst.p {
                if problem == Problem::Rrec && size != inst.p {
                    continue;
                }
                for x in subsets(inst.n, size) {
                    let x = with_costs(&inst, &x);
                    prop_assert_eq!(evaluate_fixed_x(&back, &x).unwrap(), evaluate_fixed_x(&m, &x).unwrap());
                }
            }
        }
    }

    #[test]
    fn enumeration_matches_oracle(r in raw(1, 6, 4, 10), discrete in any::<bool>()) {
        let model = if discrete { BudgetModel::Discrete } else { BudgetModel::Continuous };
        let inst = r.instance(model);
        for problem in [Problem::Rrec, Problem::R2st] {
            let (x, v) = solve_exact_enumeration(&inst, problem).unwrap();
            let o = oracle_robust(&inst, problem).unwrap();
            prop_assert_eq!(&v, &o.value);
            prop_assert_eq!(x.items, o.witness_x.unwrap().items);
        }
    }

    #[test]
    fn minmax_matches_oracle(r in raw(1, 8, 6, 10), discrete in any::<bool>()) {
        let model = if discrete { BudgetModel::Discrete } else { BudgetModel::Continuous };
        let inst = r.instance(model).with_pk(r.p, 0).unwrap();
        let (x, v) = minmax_budgeted(&inst, None).unwrap();
        let o = oracle_robust(&inst, Problem::Rrec).unwrap();
        prop_assert_eq!(&v, &o.value);
        let cx: Rational = x.items.iter().map(|&i| &inst.first_stage_cost[i]).sum();
        prop_assert_eq!(x.value, cx);
    }

    #[test]
    fn approximations_within_factor_two(r in raw(1, 7, 4, 10)) {
        let inst = half_premise(r).instance(BudgetModel::Discrete);
        let half = Rational::new(1.into(), 2.into());
        let a = approx_nominal_rrec(&inst, &half).unwrap();
        let opt = oracle_robust(&inst, Problem::Rrec).unwrap().value;
        prop_assert!(opt <= a.value && a.value <= &opt * Rational::from_integer(2.into()));
        let b = approx_r2st(&inst, &half).unwrap();
        let opt = oracle_robust(&inst, Problem::R2st).unwrap().value;
        prop_assert!(opt <= b.value && b.value <= &opt * Rational::from_integer(2.into()));
    }

    #[test]
    fn approximations_exact_without_deviation(r in raw(1, 7, 4, 10)) {
        let mut r = r;
        r.d = vec![0; r.n];
        let inst = r.instance(BudgetModel::Discrete);
        let one = Rational::from_integer(1.into());
        prop_assert_eq!(approx_nominal_rrec(&inst, &one).unwrap().value, oracle_robust(&inst, Problem::Rrec).unwrap().value);
        prop_assert_eq!(approx_r2st(&inst, &one).unwrap().value, oracle_robust(&inst, Problem::R2st).unwrap().value);
    }

    #[test]
    fn special_cases_match_oracle(r in raw(1, 7, 4, 10), which in 0usize..4, discrete in any::<bool>()) {
        let model = if discrete { BudgetModel::Discrete } else { BudgetModel::Continuous };
        let mut inst = r.instance(model);
        let want = match which {
            0 => { inst.k = 0; SpecialCase::NoRecovery }
            1 => { inst.k = inst.p; SpecialCase::FullRecovery }
            2 => {
                inst.k = inst.k.min(inst.p - 1);
                let total: Rational = inst.deviation.iter().sum();
                inst.gamma = if discrete { Rational::from_integer(inst.n.into()) } else { total };
                SpecialCase::FullBudget
            }
            _ => {
                prop_assume!(discrete && inst.p > 1);
                inst.k = inst.k.clamp(1, inst.p - 1);
                inst.gamma = inst.gamma.clone().min(Rational::from_integer(inst.k.into()));
                inst.first_stage_cost = vec![Rational::from_integer(0.into()); inst.n];
                prop_assume!(inst.gamma < Rational::from_integer(inst.n.into()));
                SpecialCase::RecoveryCoversBudget
            }
        };
        prop_assume!(want != SpecialCase::FullBudget || (inst.k > 0 && inst.k < inst.p));
        let (x, v, tag) = special_cases(&inst, Problem::Rrec).unwrap().expect("case applies");
        prop_assert_eq!(tag, want);
        prop_assert_eq!(&v, &oracle_robust(&inst, Problem::Rrec).unwrap().value);
        prop_assert_eq!(x.len(), inst.p);
        if want == SpecialCase::FullBudget {
            let (_, v, tag) = special_cases(&inst, Problem::R2st).unwrap().expect("case applies");
            prop_assert_eq!(tag, want);
            prop_assert_eq!(&v, &oracle_robust(&inst, Problem::R2st).unwrap().value);
        }
    }

    #[test]
    fn zero_budget_mip_is_nominal(r in raw(1, 7, 0, 10)) {
        let inst = r.instance(BudgetModel::Discrete);
        prop_assume!(inst.k > 0);
        let m = build_rrec_discrete_mip(&inst).unwrap();
        let lp = solve_lp(&build_nominal_rrec_lp(&inst));
        prop_assert!(lp.is_binary());
        prop_assert_eq!(mip_min(&inst, &m, &[inst.p]), lp.objective);
    }
}

fn build_again(inst: &Instance, problem: Problem) -> MipModel {
    match problem {
        Problem::Rrec => build_rrec_discrete_mip(inst).unwrap(),
        _ => build_r2st_discrete_mip(inst).unwrap(),
    }
}
