//! Nominal selection, order statistics and the incremental problems.

use std::cmp::Ordering;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{Instance, Scenario, SelectionSolution};
use crate::rational::{pos, Rational};

/// `(p−k)`-th / `k`-th order statistics used by the optimal dual pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderStatistics {
    pub b: Rational,
    pub b1: Option<Rational>,
    pub b2: Option<Rational>,
}

/// A dual pair `(α, β)` with `β ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DualCandidate {
    pub alpha: Rational,
    pub beta: Rational,
}

impl DualCandidate {
    pub fn new(alpha: Rational, beta: Rational) -> Self {
        debug_assert!(beta >= Rational::zero());
        DualCandidate { alpha, beta }
    }
}

fn by_cost<'a>(costs: &'a [Rational]) -> impl Fn(&usize, &usize) -> Ordering + 'a {
    move |a, b| costs[*a].cmp(&costs[*b]).then(a.cmp(b))
}

/// The `m` cheapest entries of `pool` (ties by index), sorted by index.
pub fn cheapest(costs: &[Rational], pool: &[usize], m: usize) -> Vec<usize> {
    assert!(m <= pool.len());
    let mut v = pool.to_vec();
    if m == 0 {
        return Vec::new();
    }
    if m < v.len() {
        v.select_nth_unstable_by(m - 1, by_cost(costs));
        v.truncate(m);
    }
    v.sort_unstable();
    v
}

/// The `m`-th smallest value (1-based) among `costs[pool]`.
pub fn order_statistic(costs: &[Rational], pool: &[usize], m: usize) -> Option<Rational> {
    if m == 0 || m > pool.len() {
        return None;
    }
    let mut v = pool.to_vec();
    let (_, nth, _) = v.select_nth_unstable_by(m - 1, by_cost(costs));
    Some(costs[*nth].clone())
}

fn sum_of(costs: &[Rational], items: &[usize]) -> Rational {
    items.iter().map(|&i| &costs[i]).sum()
}

/// The `p` cheapest items, lexicographically smallest among ties.
pub fn solve_selection(costs: &[Rational], p: usize) -> Result<SelectionSolution> {
    if p > costs.len() {
        return Err(Error::Precondition(format!(
            "cannot select {p} of {} items",
            costs.len()
        )));
    }
    let all: Vec<usize> = (0..costs.len()).collect();
    let items = cheapest(costs, &all, p);
    let value = sum_of(costs, &items);
    Ok(SelectionSolution::new(costs.len(), items, value))
}

fn split(x: &SelectionSolution) -> (Vec<usize>, Vec<usize>) {
    let inside = x.items.clone();
    let outside = (0..x.indicator.len()).filter(|&i| !x.indicator[i]).collect();
    (inside, outside)
}

/// Incremental recoverable problem: keep at least `p−k` items of `x`.
pub fn solve_irec(inst: &Instance, x: &SelectionSolution, scen: &Scenario) -> Result<SelectionSolution> {
    if x.len() != inst.p {
        return Err(Error::Precondition(format!(
            "|X_x| = {} but p = {}",
            x.len(),
            inst.p
        )));
    }
    let costs = scen.costs(inst);
    Ok(irec_on_costs(&costs, x, inst.p, inst.k))
}

pub(crate) fn irec_on_costs(costs: &[Rational], x: &SelectionSolution, p: usize, k: usize) -> SelectionSolution {
    let (inside, _) = split(x);
    let mut y = cheapest(costs, &inside, p - k);
    let rest: Vec<usize> = (0..costs.len()).filter(|i| y.binary_search(i).is_err()).collect();
    y.extend(cheapest(costs, &rest, k));
    let value = sum_of(costs, &y);
    SelectionSolution::new(costs.len(), y, value)
}

/// Incremental two-stage problem: complete `x` to `p` items.
pub fn solve_i2st(inst: &Instance, x: &SelectionSolution, scen: &Scenario) -> Result<SelectionSolution> {
    if x.len() > inst.p {
        return Err(Error::Precondition(format!(
            "|X_x| = {} exceeds p = {}",
            x.len(),
            inst.p
        )));
    }
    let costs = scen.costs(inst);
    let (_, outside) = split(x);
    let y = cheapest(&costs, &outside, inst.p - x.len());
    let value = sum_of(&costs, &y);
    Ok(SelectionSolution::new(inst.n, y, value))
}

/// Order statistics `b`, `b1`, `b2` of the realized costs.
pub fn order_statistics(inst: &Instance, x: &SelectionSolution, costs: &[Rational]) -> OrderStatistics {
    let (inside, outside) = split(x);
    let all: Vec<usize> = (0..inst.n).collect();
    OrderStatistics {
        b: order_statistic(costs, &all, inst.p).expect("p <= n"),
        b1: order_statistic(costs, &inside, inst.p - inst.k),
        b2: order_statistic(costs, &outside, inst.k),
    }
}

/// An optimal dual pair for the incremental problem at `scen`.
pub fn optimal_dual_pair(
    inst: &Instance,
    x: &SelectionSolution,
    scen: &Scenario,
) -> Result<(DualCandidate, OrderStatistics)> {
    if inst.k == 0 {
        return Err(Error::TrivialCase);
    }
    if x.len() != inst.p {
        return Err(Error::Precondition(format!("|X_x| = {} but p = {}", x.len(), inst.p)));
    }
    let costs = scen.costs(inst);
    let st = order_statistics(inst, x, &costs);
    // (b, 0) is not always optimal when b1 == b; keep whichever pair scores higher.
    let flat = DualCandidate::new(st.b.clone(), Rational::zero());
    let pair = match (&st.b1, &st.b2) {
        (Some(b1), Some(b2)) if b1 >= b2 => {
            let split = DualCandidate::new(b2.clone(), b1 - b2);
            let (p, k) = (inst.p, inst.k);
            if *b1 > st.b || dual_objective(p, k, x, &costs, &split) > dual_objective(p, k, x, &costs, &flat) {
                split
            } else {
                flat
            }
        }
        _ => flat,
    };
    Ok((pair, st))
}

/// `pα + (p−k)β − Σ [α + βx_i − c_i]₊`.
pub fn dual_objective(p: usize, k: usize, x: &SelectionSolution, costs: &[Rational], d: &DualCandidate) -> Rational {
    let ab = &d.alpha + &d.beta;
    let mut v = &d.alpha * Rational::from_integer(p.into()) + &d.beta * Rational::from_integer((p - k).into());
    for (i, c) in costs.iter().enumerate() {
        let t = if x.indicator[i] { &ab } else { &d.alpha };
        v -= pos(t - c);
    }
    v
}

/// Incremental value via the split formula: best `j ∈ [p−k, p]` items from `X`, rest outside.
pub fn split_formula_value(costs: &[Rational], x: &SelectionSolution, p: usize, k: usize) -> Rational {
    let (mut a, mut b): (Vec<_>, Vec<_>) = (Vec::new(), Vec::new());
    for (i, c) in costs.iter().enumerate() {
        if x.indicator[i] {
            a.push(c.clone());
        } else {
            b.push(c.clone());
        }
    }
    a.sort();
    b.sort();
    let prefix = |v: &[Rational]| {
        let mut out = vec![Rational::zero()];
        for c in v {
            let next = out.last().unwrap() + c;
            out.push(next);
        }
        out
    };
    let (pa, pb) = (prefix(&a), prefix(&b));
    (p - k..=p)
        .filter(|&j| j <= a.len() && p - j <= b.len())
        .map(|j| &pa[j] + &pb[p - j])
        .min()
        .expect("at least one split is feasible")
}
