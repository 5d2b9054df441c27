//! Recoverable and two-stage robust selection under a discrete budget.
//!
//! Exact solving is by first-stage enumeration; the compact MIPs are exported for
//! external solvers. Polynomial special cases and the `1/α` approximations live here too.

mod lp_format;
mod mip;

pub use lp_format::{parse_lp, write_lp};
pub use mip::{build_r2st_discrete_mip, build_rrec_discrete_mip, evaluate_fixed_x, MipBlock, MipModel};

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::adversary_continuous::{a2st_continuous, arec_continuous_intervals};
use crate::adversary_discrete::{a2st_discrete, arec_discrete, require_discrete};
use crate::error::{Error, Result};
use crate::lp::{build_nominal_rrec_lp, solve_lp};
use crate::lp::build_single_scenario_rrec_lp;
use crate::model::{BudgetModel, Instance, Problem, SelectionSolution};
use crate::oracle::cap;
use crate::rational::{pos_ref, Rational};
use crate::selection::cheapest;

pub const ENUMERATION_CAP: usize = 16;

fn require_robust(problem: Problem) -> Result<()> {
    match problem {
        Problem::Rrec | Problem::R2st => Ok(()),
        other => Err(Error::Precondition(format!("{} is not a robust problem", other.as_str()))),
    }
}

/// Worst-case second-stage cost of `x` for either budget model.
pub fn adversary_value(inst: &Instance, x: &SelectionSolution, problem: Problem) -> Result<Rational> {
    let v = match (inst.budget_model, problem.recoverable()) {
        (BudgetModel::Discrete, true) => arec_discrete(inst, x)?.0,
        (BudgetModel::Discrete, false) => a2st_discrete(inst, x)?.0,
        (BudgetModel::Continuous, true) => arec_continuous_intervals(inst, x)?.0,
        (BudgetModel::Continuous, false) => a2st_continuous(inst, x)?.0,
    };
    Ok(v)
}

/// `Cx` plus the adversarial value.
pub fn robust_value(inst: &Instance, x: &SelectionSolution, problem: Problem) -> Result<Rational> {
    Ok(&x.value + adversary_value(inst, x, problem)?)
}

fn first_stage(inst: &Instance, items: Vec<usize>) -> SelectionSolution {
    SelectionSolution::from_items(&items, &inst.first_stage_cost)
}

/// Minimum of `Cx + adversary(x)` over every first stage, in lexicographic order.
pub fn solve_exact_enumeration(inst: &Instance, problem: Problem) -> Result<(SelectionSolution, Rational)> {
    require_robust(problem)?;
    let c = cap(ENUMERATION_CAP);
    if inst.n > c {
        return Err(Error::CapExceeded { what: "first-stage enumeration items", n: inst.n, cap: c });
    }
    let sizes: Vec<usize> = if problem.recoverable() { vec![inst.p] } else { (0..=inst.p).collect() };
    let mut xs: Vec<Vec<usize>> = sizes.into_iter().flat_map(|s| (0..inst.n).combinations(s)).collect();
    xs.sort();
    let mut best: Option<(SelectionSolution, Rational)> = None;
    for items in xs {
        let x = first_stage(inst, items);
        let v = robust_value(inst, &x, problem)?;
        if best.as_ref().is_none_or(|(_, b)| v < *b) {
            best = Some((x, v));
        }
    }
    best.ok_or_else(|| Error::Internal("no first stage enumerated".into()))
}

/// `min_x max_c (C + c)x` over `p`-subsets of `restrict` (default: all items).
///
/// Returns `x` with `x.value = Cx` and the total objective.
pub fn minmax_budgeted(inst: &Instance, restrict: Option<&[usize]>) -> Result<(SelectionSolution, Rational)> {
    let pool: Vec<usize> = match restrict {
        Some(r) => r.iter().copied().sorted().dedup().collect(),
        None => (0..inst.n).collect(),
    };
    if pool.iter().any(|&i| i >= inst.n) || pool.len() < inst.p {
        return Err(Error::Precondition(format!("restrict set cannot hold {} items", inst.p)));
    }
    let base: Vec<Rational> = (0..inst.n).map(|i| &inst.first_stage_cost[i] + &inst.nominal_cost[i]).collect();
    let mut options: Vec<(Rational, Vec<Rational>)> = Vec::new();
    match inst.budget_model {
        BudgetModel::Discrete => {
            let gamma = Rational::from_integer(inst.gamma_count().into());
            let mut thetas: Vec<Rational> = inst.deviation.clone();
            thetas.push(Rational::zero());
            thetas.sort();
            thetas.dedup();
            for t in thetas {
                let costs = (0..inst.n).map(|i| &base[i] + pos_ref(&(&inst.deviation[i] - &t))).collect();
                options.push((&gamma * &t, costs));
            }
        }
        BudgetModel::Continuous => {
            // max over the budget of δx is min(Γ, dx).
            let upper = (0..inst.n).map(|i| &base[i] + &inst.deviation[i]).collect();
            options.push((Rational::zero(), upper));
            options.push((inst.gamma.clone(), base.clone()));
        }
    }
    let mut best: Option<(Vec<usize>, Rational)> = None;
    for (offset, costs) in options {
        let items = cheapest(&costs, &pool, inst.p);
        let v: Rational = offset + items.iter().map(|&i| &costs[i]).sum::<Rational>();
        let better = match &best {
            None => true,
            Some((bx, bv)) => v < *bv || (v == *bv && items < *bx),
        };
        if better {
            best = Some((items, v));
        }
    }
    let (items, value) = best.expect("at least one option");
    Ok((first_stage(inst, items), value))
}

/// Which polynomial special case produced a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialCase {
    /// `k = 0`: plain min-max problem.
    NoRecovery,
    /// `k = p`: the first stage only pays `C`.
    FullRecovery,
    /// The budget covers every deviation, so `c̄` is the only relevant scenario.
    FullBudget,
    /// Discrete, `k ≥ Γ` and `C = 0`.
    RecoveryCoversBudget,
}

impl SpecialCase {
    pub fn as_str(self) -> &'static str {
        match self {
            SpecialCase::NoRecovery => "k=0",
            SpecialCase::FullRecovery => "k=p",
            SpecialCase::FullBudget => "full-budget",
            SpecialCase::RecoveryCoversBudget => "k>=gamma,C=0",
        }
    }
}

fn full_budget(inst: &Instance) -> bool {
    match inst.budget_model {
        BudgetModel::Discrete => inst.gamma >= Rational::from_integer(inst.n.into()),
        BudgetModel::Continuous => inst.gamma >= inst.deviation.iter().sum(),
    }
}

/// First stage of the single-scenario recoverable problem at `costs`.
fn single_scenario_rrec(inst: &Instance, costs: &[Rational]) -> Result<SelectionSolution> {
    let s = solve_lp(&build_single_scenario_rrec_lp(inst, costs));
    if !s.is_optimal() || !s.is_binary() {
        return Err(Error::Internal(format!("single-scenario LP: status {:?}, binary {}", s.status, s.is_binary())));
    }
    let items = (0..inst.n).filter(|&i| s.primal[i].is_one()).collect();
    Ok(first_stage(inst, items))
}

/// Two-stage problem under a single scenario: buy each chosen item at its cheaper stage.
/// Ties go to the first stage.
fn single_scenario_r2st(inst: &Instance, costs: &[Rational]) -> SelectionSolution {
    let all: Vec<usize> = (0..inst.n).collect();
    let mixed: Vec<Rational> = (0..inst.n).map(|i| inst.first_stage_cost[i].clone().min(costs[i].clone())).collect();
    let items = cheapest(&mixed, &all, inst.p)
        .into_iter()
        .filter(|&i| inst.first_stage_cost[i] <= costs[i])
        .collect();
    first_stage(inst, items)
}

/// A solution from a polynomial special case, if one applies.
pub fn special_cases(inst: &Instance, problem: Problem) -> Result<Option<(SelectionSolution, Rational, SpecialCase)>> {
    require_robust(problem)?;
    let rec = problem.recoverable();
    if rec && inst.k == 0 {
        let (x, v) = minmax_budgeted(inst, None)?;
        return Ok(Some((x, v, SpecialCase::NoRecovery)));
    }
    if rec && inst.k == inst.p {
        let all: Vec<usize> = (0..inst.n).collect();
        let x = first_stage(inst, cheapest(&inst.first_stage_cost, &all, inst.p));
        let v = robust_value(inst, &x, problem)?;
        return Ok(Some((x, v, SpecialCase::FullRecovery)));
    }
    if full_budget(inst) {
        let upper = inst.upper_costs();
        let x = if rec { single_scenario_rrec(inst, &upper)? } else { single_scenario_r2st(inst, &upper) };
        let v = robust_value(inst, &x, problem)?;
        return Ok(Some((x, v, SpecialCase::FullBudget)));
    }
    if rec
        && inst.is_discrete()
        && Rational::from_integer(inst.k.into()) >= inst.gamma
        && inst.first_stage_cost.iter().all(|c| c.is_zero())
    {
        let all: Vec<usize> = (0..inst.n).collect();
        let x = first_stage(inst, cheapest(&inst.nominal_cost, &all, inst.p));
        let v = robust_value(inst, &x, problem)?;
        return Ok(Some((x, v, SpecialCase::RecoveryCoversBudget)));
    }
    Ok(None)
}

/// An approximate solution with a proven ratio.
#[derive(Debug, Clone)]
pub struct Approximation {
    pub x: SelectionSolution,
    pub value: Rational,
    /// `value ≤ ratio · OPT`.
    pub ratio: Rational,
}

fn check_premise(inst: &Instance, alpha: &Rational) -> Result<()> {
    require_discrete(inst)?;
    if !alpha.is_positive() || *alpha > Rational::one() {
        return Err(Error::Precondition(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    for i in 0..inst.n {
        if inst.nominal_cost[i] < alpha * inst.upper(i) {
            return Err(Error::PremiseViolated(format!(
                "item {}: nominal cost {} is below alpha times upper cost {}",
                i + 1,
                inst.nominal_cost[i],
                inst.upper(i)
            )));
        }
    }
    Ok(())
}

/// Solves the recoverable problem at the nominal costs and evaluates that first stage robustly.
pub fn approx_nominal_rrec(inst: &Instance, alpha: &Rational) -> Result<Approximation> {
    check_premise(inst, alpha)?;
    let s = solve_lp(&build_nominal_rrec_lp(inst));
    if !s.is_optimal() || !s.is_binary() {
        return Err(Error::Internal("nominal recoverable LP has no 0/1 optimum".into()));
    }
    let x = first_stage(inst, (0..inst.n).filter(|&i| s.primal[i].is_one()).collect());
    let value = robust_value(inst, &x, Problem::Rrec)?;
    Ok(Approximation { x, value, ratio: alpha.recip() })
}

/// Two-stage problem at the nominal costs, evaluated robustly.
pub fn approx_r2st(inst: &Instance, alpha: &Rational) -> Result<Approximation> {
    check_premise(inst, alpha)?;
    let x = single_scenario_r2st(inst, &inst.nominal_cost);
    let value = robust_value(inst, &x, Problem::R2st)?;
    Ok(Approximation { x, value, ratio: alpha.recip() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn v(s: &[i64]) -> Vec<Rational> {
        s.iter().map(|&a| rat(a)).collect()
    }

    #[test]
    fn minmax_examples() {
        let i = Instance::new(2, 0, rat(1), BudgetModel::Discrete, v(&[0; 3]), v(&[1, 1, 1]), v(&[2, 2, 2])).unwrap();
        let (x, val) = minmax_budgeted(&i, None).unwrap();
        assert_eq!(val, rat(4));
        assert_eq!(x.items, vec![0, 1]);
        let i = Instance::new(2, 0, rat(3), BudgetModel::Continuous, v(&[1, 0, 0]), v(&[1, 2, 5]), v(&[0; 3])).unwrap();
        assert_eq!(minmax_budgeted(&i, None).unwrap().1, rat(4));
        assert_eq!(minmax_budgeted(&i, Some(&[1, 2])).unwrap().1, rat(7));
    }

    #[test]
    fn approx_r2st_trace() {
        let i = Instance::new(1, 0, rat(0), BudgetModel::Discrete, v(&[2, 5]), v(&[3, 1]), v(&[0, 0])).unwrap();
        let a = approx_r2st(&i, &rat(1)).unwrap();
        assert!(a.x.is_empty());
        assert_eq!(a.value, rat(1));
        assert!(approx_r2st(&i, &ratio(3, 2)).is_err());
    }

    #[test]
    fn premise_checked() {
        let i = Instance::new(1, 1, rat(1), BudgetModel::Discrete, v(&[0, 0]), v(&[1, 1]), v(&[2, 0])).unwrap();
        assert!(approx_nominal_rrec(&i, &ratio(1, 2)).is_err());
        assert!(approx_nominal_rrec(&i, &ratio(1, 3)).is_ok());
    }

    #[test]
    fn special_case_dispatch() {
        let i = Instance::new(1, 1, rat(1), BudgetModel::Discrete, v(&[0, 0, 0]), v(&[1, 2, 3]), v(&[1, 1, 1])).unwrap();
        assert_eq!(special_cases(&i, Problem::Rrec).unwrap().unwrap().2, SpecialCase::FullRecovery);
        let i = Instance::new(2, 1, rat(1), BudgetModel::Discrete, v(&[1, 0, 0]), v(&[1, 2, 3]), v(&[1, 1, 1])).unwrap();
        assert!(special_cases(&i, Problem::Rrec).unwrap().is_none());
        assert!(special_cases(&i, Problem::Arec).is_err());
    }
}
