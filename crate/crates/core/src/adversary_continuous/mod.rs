//! Worst-case scenarios under a continuous budget.

mod intervals;
mod levels;

pub use intervals::{a2st_continuous, arec_continuous_intervals, arec_continuous_intervals_report, IntervalScan, ScanBranch};
pub use levels::{a2st_continuous_levels, arec_continuous_levels, arec_continuous_levels_traced, LevelEvent};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{BudgetModel, Instance, Scenario, SelectionSolution};
use crate::rational::{pos, Rational};
use crate::selection::DualCandidate;

/// `a·t + b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine {
    pub a: Rational,
    pub b: Rational,
}

impl Affine {
    pub fn new(a: Rational, b: Rational) -> Self {
        Affine { a, b }
    }

    pub fn at(&self, t: &Rational) -> Rational {
        &self.a * t + &self.b
    }
}

/// Maximize `min{f1(t), f2(t)}` over `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvelopeProblem {
    pub lo: Rational,
    pub hi: Rational,
    pub f1: Affine,
    pub f2: Affine,
}

pub fn maximize_envelope(ep: &EnvelopeProblem) -> Result<(Rational, Rational)> {
    if ep.lo > ep.hi {
        return Err(Error::Precondition(format!("empty interval [{}, {}]", ep.lo, ep.hi)));
    }
    let h = |t: &Rational| ep.f1.at(t).min(ep.f2.at(t));
    let mut cands = vec![ep.lo.clone()];
    if ep.f1.a != ep.f2.a {
        let t = (&ep.f2.b - &ep.f1.b) / (&ep.f1.a - &ep.f2.a);
        if t > ep.lo && t < ep.hi {
            cands.push(t);
        }
    }
    cands.push(ep.hi.clone());
    let mut best: Option<(Rational, Rational)> = None;
    for t in cands {
        let v = h(&t);
        if best.as_ref().is_none_or(|(_, bv)| v > *bv) {
            best = Some((t, v));
        }
    }
    Ok(best.unwrap())
}

pub(crate) fn require_continuous(inst: &Instance) -> Result<()> {
    if inst.budget_model != BudgetModel::Continuous {
        return Err(Error::WrongBudgetModel { expected: "continuous" });
    }
    Ok(())
}

pub(crate) fn require_size(x: &SelectionSolution, p: usize, exact: bool) -> Result<()> {
    if x.len() > p || (exact && x.len() != p) {
        return Err(Error::Precondition(format!("|X_x| = {} but p = {}", x.len(), p)));
    }
    Ok(())
}

/// Greedy allocation of the budget against a fixed dual pair.
pub fn greedy_worst_scenario(inst: &Instance, x: &SelectionSolution, dual: &DualCandidate) -> Scenario {
    greedy_on(inst, dual, |i| x.indicator[i], |_| true)
}

pub(crate) fn greedy_on(
    inst: &Instance,
    dual: &DualCandidate,
    in_x: impl Fn(usize) -> bool,
    eligible: impl Fn(usize) -> bool,
) -> Scenario {
    let mut rem = inst.gamma.clone();
    let mut s = Scenario::nominal(inst.n);
    let ab = &dual.alpha + &dual.beta;
    for i in 0..inst.n {
        if !rem.is_positive() {
            break;
        }
        if !eligible(i) {
            continue;
        }
        let t = if in_x(i) { &ab } else { &dual.alpha };
        let room = t - &inst.nominal_cost[i];
        if room.is_positive() {
            let v = room.min(inst.deviation[i].clone()).min(rem.clone());
            rem -= &v;
            s.deltas[i] = v;
        }
    }
    s
}

/// `max{Σ[α+βx_i−c̲_i]₊ − Γ, Σ[α+βx_i−c̄_i]₊}`.
pub(crate) fn inner_value(inst: &Instance, x: &SelectionSolution, dual: &DualCandidate) -> Rational {
    let ab = &dual.alpha + &dual.beta;
    let (mut lo, mut hi) = (Rational::zero(), Rational::zero());
    for i in 0..inst.n {
        let t = if x.indicator[i] { &ab } else { &dual.alpha };
        lo += pos(t - &inst.nominal_cost[i]);
        hi += pos(t - inst.upper(i));
    }
    (lo - &inst.gamma).max(hi)
}

/// Objective of the continuous adversarial dual at `(α, β)`.
pub fn adversarial_dual_value(inst: &Instance, x: &SelectionSolution, dual: &DualCandidate) -> Rational {
    let p = Rational::from_integer(inst.p.into());
    let pk = Rational::from_integer((inst.p - inst.k).into());
    &dual.alpha * p + &dual.beta * pk - inner_value(inst, x, dual)
}

/// `k = 0`: the whole budget lands on `X_x`.
pub(crate) fn arec_k0_continuous(inst: &Instance, x: &SelectionSolution) -> (Rational, Scenario) {
    let mut rem = inst.gamma.clone();
    let mut s = Scenario::nominal(inst.n);
    let mut value = Rational::zero();
    for &i in &x.items {
        let v = inst.deviation[i].clone().min(rem.clone());
        rem -= &v;
        value += &inst.nominal_cost[i] + &v;
        s.deltas[i] = v;
    }
    (value, s)
}
