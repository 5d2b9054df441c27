//! Brute-force reference solvers. Slow on purpose and independent of the fast algorithms.
//!
//! Enumeration caps can be raised (or lowered) with the `ROBSEL_ORACLE_CAP` environment
//! variable, which replaces every item-count and budget cap below.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::lp::{build_a2st_lp, build_arec_lp, solve_lp};
use crate::model::{BudgetModel, Instance, Problem, Scenario, SelectionSolution};
use crate::rational::Rational;

pub const INCREMENTAL_CAP: usize = 20;
pub const ADVERSARIAL_CAP: usize = 16;
pub const ADVERSARIAL_GAMMA_CAP: usize = 8;
pub const ROBUST_CAP: usize = 12;

pub const CAP_ENV: &str = "ROBSEL_ORACLE_CAP";

/// `default`, unless overridden by the environment.
pub fn cap(default: usize) -> usize {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(default)
}

fn check_cap(what: &'static str, n: usize, default: usize) -> Result<()> {
    let c = cap(default);
    if n > c {
        return Err(Error::CapExceeded { what, n, cap: c });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub value: Rational,
    pub witness_x: Option<SelectionSolution>,
    pub witness_scenario: Option<Scenario>,
    pub witness_y: Option<SelectionSolution>,
    pub enumeration_size: usize,
}

fn sum(costs: &[Rational], items: &[usize]) -> Rational {
    items.iter().map(|&i| &costs[i]).sum()
}

/// Minimum over all second-stage sets compatible with `x`.
pub fn oracle_incremental(inst: &Instance, x: &SelectionSolution, scen: &Scenario, problem: Problem) -> Result<OracleReport> {
    check_cap("incremental oracle items", inst.n, INCREMENTAL_CAP)?;
    scen.check(inst)?;
    let costs = scen.costs(inst);
    let mut count = 0usize;
    let mut best: Option<(Rational, Vec<usize>)> = None;
    let mut consider = |y: Vec<usize>| {
        count += 1;
        let v = sum(&costs, &y);
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, y));
        }
    };
    match problem {
        Problem::Irec | Problem::Arec | Problem::Rrec => {
            if x.len() != inst.p {
                return Err(Error::Precondition(format!("|X_x| = {} but p = {}", x.len(), inst.p)));
            }
            for y in (0..inst.n).combinations(inst.p) {
                let kept = y.iter().filter(|&&i| x.indicator[i]).count();
                if kept + inst.k >= inst.p {
                    consider(y);
                }
            }
        }
        Problem::I2st | Problem::A2st | Problem::R2st => {
            if x.len() > inst.p {
                return Err(Error::Precondition(format!("|X_x| = {} exceeds p = {}", x.len(), inst.p)));
            }
            let outside: Vec<usize> = (0..inst.n).filter(|&i| !x.indicator[i]).collect();
            for y in outside.into_iter().combinations(inst.p - x.len()) {
                consider(y);
            }
        }
    }
    let (value, y) = best.ok_or_else(|| Error::Internal("no feasible second stage".into()))?;
    Ok(OracleReport {
        value: value.clone(),
        witness_x: Some(x.clone()),
        witness_scenario: Some(scen.clone()),
        witness_y: Some(SelectionSolution::new(inst.n, y, value)),
        enumeration_size: count,
    })
}

/// Maximum of the incremental oracle over every scenario raising at most Γ items.
pub fn oracle_adversarial_discrete(inst: &Instance, x: &SelectionSolution, problem: Problem) -> Result<OracleReport> {
    if inst.budget_model != BudgetModel::Discrete {
        return Err(Error::WrongBudgetModel { expected: "discrete" });
    }
    check_cap("discrete adversarial oracle items", inst.n, ADVERSARIAL_CAP)?;
    let g = inst.gamma_count();
    check_cap("discrete adversarial oracle budget", g, ADVERSARIAL_GAMMA_CAP)?;
    let mut count = 0usize;
    let mut best: Option<OracleReport> = None;
    for size in 0..=g {
        for raised in (0..inst.n).combinations(size) {
            count += 1;
            let scen = Scenario::raise(inst, &raised);
            let r = oracle_incremental(inst, x, &scen, problem)?;
            if best.as_ref().is_none_or(|b| r.value > b.value) {
                best = Some(r);
            }
        }
    }
    let mut r = best.expect("the empty raise set is always enumerated");
    r.enumeration_size = count;
    Ok(r)
}

/// Exact adversarial value from the dual LP; the witness is read from the `δ` variables.
pub fn oracle_adversarial_continuous(inst: &Instance, x: &SelectionSolution, problem: Problem) -> Result<OracleReport> {
    let (m, first_delta) = if problem.recoverable() {
        (build_arec_lp(inst, x)?, 2 + inst.n)
    } else {
        (build_a2st_lp(inst, x)?, 1 + inst.n)
    };
    let s = solve_lp(&m);
    if !s.is_optimal() {
        return Err(Error::Internal(format!("adversarial LP ended with status {:?}", s.status)));
    }
    let scen = Scenario {
        deltas: s.primal[first_delta..first_delta + inst.n].to_vec(),
    };
    scen.check(inst)
        .map_err(|e| Error::Internal(format!("LP witness infeasible: {e}")))?;
    let mut report = OracleReport {
        value: s.objective,
        witness_x: Some(x.clone()),
        witness_scenario: Some(scen.clone()),
        witness_y: None,
        enumeration_size: 1,
    };
    if inst.n <= cap(INCREMENTAL_CAP) {
        let inc = oracle_incremental(inst, x, &scen, problem)?;
        if inc.value != report.value {
            return Err(Error::Internal(format!(
                "LP witness scenario gives {} but LP value is {}",
                inc.value, report.value
            )));
        }
        report.witness_y = inc.witness_y;
    }
    Ok(report)
}

/// Minimum over every first stage of `Cx` plus the adversarial oracle.
pub fn oracle_robust(inst: &Instance, problem: Problem) -> Result<OracleReport> {
    check_cap("robust oracle items", inst.n, ROBUST_CAP)?;
    let sizes: Vec<usize> = if problem.recoverable() { vec![inst.p] } else { (0..=inst.p).collect() };
    let mut xs: Vec<Vec<usize>> = sizes.into_iter().flat_map(|s| (0..inst.n).combinations(s)).collect();
    xs.sort();
    let mut count = 0usize;
    let mut best: Option<OracleReport> = None;
    for items in xs {
        count += 1;
        let x = SelectionSolution::from_items(&items, &inst.first_stage_cost);
        let adv = match inst.budget_model {
            BudgetModel::Discrete => oracle_adversarial_discrete(inst, &x, problem)?,
            BudgetModel::Continuous => oracle_adversarial_continuous(inst, &x, problem)?,
        };
        let total = &x.value + &adv.value;
        if best.as_ref().is_none_or(|b| total < b.value) {
            best = Some(OracleReport { value: total, ..adv });
        }
    }
    let mut r = best.ok_or_else(|| Error::Internal("no first stage enumerated".into()))?;
    r.enumeration_size = count;
    Ok(r)
}

/// `Cx` plus the adversarial oracle for a fixed first stage.
pub fn oracle_fixed_x(inst: &Instance, x: &SelectionSolution, problem: Problem) -> Result<Rational> {
    let adv = match inst.budget_model {
        BudgetModel::Discrete => oracle_adversarial_discrete(inst, x, problem)?,
        BudgetModel::Continuous => oracle_adversarial_continuous(inst, x, problem)?,
    };
    let c: Rational = x.items.iter().map(|&i| &inst.first_stage_cost[i]).sum();
    Ok(c + adv.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn v(s: &[i64]) -> Vec<Rational> {
        s.iter().map(|&a| rat(a)).collect()
    }

    fn sel(n: usize, items: &[usize]) -> SelectionSolution {
        SelectionSolution::new(n, items.to_vec(), rat(0))
    }

    #[test]
    fn incremental_examples() {
        let i = Instance::new(3, 1, rat(0), BudgetModel::Continuous, v(&[0; 5]), v(&[4, 7, 2, 1, 9]), v(&[0; 5])).unwrap();
        let r = oracle_incremental(&i, &sel(5, &[0, 1, 2]), &Scenario::nominal(5), Problem::Irec).unwrap();
        assert_eq!(r.value, rat(7));
        assert_eq!(r.witness_y.unwrap().items, vec![0, 2, 3]);
        let i = Instance::new(2, 0, rat(0), BudgetModel::Continuous, v(&[0; 3]), v(&[5, 1, 3]), v(&[0; 3])).unwrap();
        let r = oracle_incremental(&i, &sel(3, &[]), &Scenario::nominal(3), Problem::I2st).unwrap();
        assert_eq!(r.value, rat(4));
    }

    #[test]
    fn discrete_adversary_example() {
        let i = Instance::new(2, 1, rat(1), BudgetModel::Discrete, v(&[0; 3]), v(&[2, 3, 1]), v(&[5, 0, 4])).unwrap();
        let r = oracle_adversarial_discrete(&i, &sel(3, &[0, 1]), Problem::Arec).unwrap();
        assert_eq!(r.value, rat(5));
        assert_eq!(r.enumeration_size, 4);
    }

    #[test]
    fn robust_examples() {
        let i = Instance::new(2, 1, rat(2), BudgetModel::Continuous, v(&[1, 1, 4]), v(&[1, 2, 1]), v(&[3, 3, 0])).unwrap();
        let r = oracle_robust(&i, Problem::Rrec).unwrap();
        assert_eq!(r.value, ratio(11, 2));
        assert_eq!(r.witness_x.unwrap().items, vec![0, 1]);
        let i = Instance::new(1, 0, rat(5), BudgetModel::Continuous, v(&[10, 10]), v(&[1, 1]), v(&[5, 5])).unwrap();
        let r = oracle_robust(&i, Problem::R2st).unwrap();
        assert_eq!(r.value, ratio(7, 2));
        assert!(r.witness_x.unwrap().is_empty());
    }

    #[test]
    fn continuous_adversary_k_equals_p_ignores_x() {
        let i = Instance::new(2, 2, rat(3), BudgetModel::Continuous, v(&[0; 4]), v(&[1, 4, 2, 6]), v(&[2, 1, 3, 0])).unwrap();
        let a = oracle_adversarial_continuous(&i, &sel(4, &[0, 1]), Problem::Arec).unwrap().value;
        let b = oracle_adversarial_continuous(&i, &sel(4, &[2, 3]), Problem::Arec).unwrap().value;
        assert_eq!(a, b);
    }
}
