//! Level-raising algorithm: `O(n log n)` worst scenario under a continuous budget.
//!
//! Items of `X_x` share one cost level and the remaining items another; every item
//! sits at its level clamped into `[c̲_i, c̄_i]`. The adversary repeatedly raises the
//! level (or both, when they coincide) whose active items gain the most objective
//! per unit of budget, stopping at the next event.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_traits::{Signed, Zero};

use super::{arec_k0_continuous, require_continuous, require_size};
use crate::error::{Error, Result};
use crate::model::{Instance, Scenario, SelectionSolution};
use crate::rational::Rational;
use crate::selection::{irec_on_costs, solve_i2st};

/// Snapshot after each step of the level algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelEvent {
    pub level_x: Rational,
    pub level_xbar: Rational,
    pub objective: Rational,
    pub budget_left: Rational,
}

struct Side {
    /// `(c̲_i, c̄_i, i)` sorted by lower cost.
    lo: Vec<(Rational, Rational, usize)>,
    /// Upper costs, sorted.
    hi: Vec<Rational>,
    level: Rational,
    /// `#{c̲_i ≤ L}`, `#{c̄_i < L}`, `#{c̄_i ≤ L}`.
    lb_le: usize,
    ub_lt: usize,
    ub_le: usize,
    /// Upper costs of the active items.
    heap: BinaryHeap<Reverse<Rational>>,
}

impl Side {
    fn new(inst: &Instance, items: &[usize]) -> Self {
        let mut lo: Vec<_> = items
            .iter()
            .map(|&i| (inst.nominal_cost[i].clone(), inst.upper(i), i))
            .collect();
        lo.sort();
        let mut hi: Vec<Rational> = lo.iter().map(|t| t.1.clone()).collect();
        hi.sort();
        let level = lo.first().map(|t| t.0.clone()).unwrap_or_else(Rational::zero);
        let mut s = Side {
            lo,
            hi,
            level,
            lb_le: 0,
            ub_lt: 0,
            ub_le: 0,
            heap: BinaryHeap::new(),
        };
        s.settle();
        s
    }

    fn size(&self) -> usize {
        self.lo.len()
    }

    fn settle(&mut self) {
        let n = self.size();
        while self.lb_le < n && self.lo[self.lb_le].0 <= self.level {
            let up = &self.lo[self.lb_le].1;
            if *up > self.level {
                self.heap.push(Reverse(up.clone()));
            }
            self.lb_le += 1;
        }
        while self.heap.peek().is_some_and(|t| t.0 <= self.level) {
            self.heap.pop();
        }
        while self.ub_lt < n && self.hi[self.ub_lt] < self.level {
            self.ub_lt += 1;
        }
        self.ub_le = self.ub_le.max(self.ub_lt);
        while self.ub_le < n && self.hi[self.ub_le] <= self.level {
            self.ub_le += 1;
        }
        debug_assert_eq!(self.heap.len(), self.lb_le - self.ub_le);
    }

    fn active(&self) -> usize {
        self.heap.len()
    }

    /// The `j`-th smallest realized cost on this side (1-based).
    fn stat(&self, j: usize) -> &Rational {
        if j <= self.ub_lt {
            &self.hi[j - 1]
        } else if j <= self.lb_le {
            &self.level
        } else {
            &self.lo[j - 1].0
        }
    }

    fn next_activation(&self) -> Option<&Rational> {
        self.lo.get(self.lb_le).map(|t| &t.0)
    }

    fn next_saturation(&self) -> Option<&Rational> {
        self.heap.peek().map(|t| &t.0)
    }

    /// Smallest realized cost on this side strictly above `t`.
    fn cost_above(&self, t: &Rational) -> Option<Rational> {
        let below = &self.hi[..self.ub_lt];
        let above = &self.lo[self.lb_le..];
        let at_level = (self.lb_le > self.ub_lt && self.level > *t).then_some(&self.level);
        [
            below.get(below.partition_point(|v| v <= t)),
            at_level,
            above.get(above.partition_point(|v| v.0 <= *t)).map(|v| &v.0),
        ]
        .into_iter()
        .flatten()
        .min()
        .cloned()
    }

    fn write_scenario(&self, s: &mut Scenario) {
        for (lo, hi, i) in &self.lo {
            let c = self.level.clone().max(lo.clone()).min(hi.clone());
            s.deltas[*i] = c - lo;
        }
    }
}

/// Smallest and largest optimal number of items kept from `X`.
fn optimal_split(sx: &Side, sb: &Side, p: usize, k: usize) -> (usize, usize) {
    let jmin = (p - k).max(p.saturating_sub(sb.size()));
    let jmax = p.min(sx.size());
    debug_assert!(jmin <= jmax);
    let first = |strict: bool| {
        let (mut lo, mut hi) = (jmin, jmax);
        while lo < hi {
            let j = (lo + hi) / 2;
            let (a, b) = (sx.stat(j + 1), sb.stat(p - j));
            if (strict && a > b) || (!strict && a >= b) {
                hi = j;
            } else {
                lo = j + 1;
            }
        }
        lo
    };
    (first(false), first(true))
}

fn clamp(v: isize, hi: usize) -> usize {
    v.clamp(0, hi as isize) as usize
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Move {
    X,
    Xbar,
    Joint,
}

struct Run {
    value: Rational,
    worst: Scenario,
    events: Vec<LevelEvent>,
}

fn run(inst: &Instance, inside: &[usize], outside: &[usize], p: usize, k: usize, trace: bool) -> Run {
    let mut sx = Side::new(inst, inside);
    let mut sb = Side::new(inst, outside);
    let (j0, _) = optimal_split(&sx, &sb, p, k);
    let mut f: Rational = (1..=j0).map(|t| sx.stat(t)).sum::<Rational>() + (1..=p - j0).map(|t| sb.stat(t)).sum::<Rational>();
    let mut rem = inst.gamma.clone();
    let mut events = Vec::new();
    let snap = |sx: &Side, sb: &Side, f: &Rational, rem: &Rational| LevelEvent {
        level_x: sx.level.clone(),
        level_xbar: sb.level.clone(),
        objective: f.clone(),
        budget_left: rem.clone(),
    };
    if trace {
        events.push(snap(&sx, &sb, &f, &rem));
    }

    loop {
        for s in [&mut sx, &mut sb] {
            while s.active() == 0 {
                let Some(next) = s.next_activation().cloned() else { break };
                s.level = next;
                s.settle();
            }
        }
        let (ax, ab) = (sx.active(), sb.active());
        if !rem.is_positive() || (ax == 0 && ab == 0) {
            break;
        }
        let (jlo, jhi) = optimal_split(&sx, &sb, p, k);
        let gx = clamp(jlo as isize - sx.ub_le as isize, ax);
        let gb = clamp(p as isize - jhi as isize - sb.ub_le as isize, ab);
        // `g1/a1 >= g2/a2`
        let ge = |g1: usize, a1: usize, g2: usize, a2: usize| g1 * a2 >= g2 * a1;

        let joint_gain = || {
            let gain = |j: isize| {
                clamp(j - sx.ub_le as isize, ax) + clamp(p as isize - j - sb.ub_le as isize, ab)
            };
            [
                jlo as isize,
                jhi as isize,
                sx.ub_le as isize,
                (sx.ub_le + ax) as isize,
                p as isize - sb.ub_le as isize,
                p as isize - (sb.ub_le + ab) as isize,
            ]
            .into_iter()
            .filter(|&j| j >= jlo as isize && j <= jhi as isize)
            .map(gain)
            .min()
            .unwrap()
        };

        let (mv, rate, gain) = if ax > 0 && ab > 0 && sx.level == sb.level {
            let gj = joint_gain();
            if ge(gj, ax + ab, gx, ax) && ge(gj, ax + ab, gb, ab) {
                (Move::Joint, ax + ab, gj)
            } else if ge(gx, ax, gb, ab) {
                (Move::X, ax, gx)
            } else {
                (Move::Xbar, ab, gb)
            }
        } else if ax > 0 && (ab == 0 || ge(gx, ax, gb, ab)) {
            (Move::X, ax, gx)
        } else {
            (Move::Xbar, ab, gb)
        };
        let level = match mv {
            Move::Xbar => sb.level.clone(),
            _ => sx.level.clone(),
        };
        let rate_r = Rational::from_integer(rate.into());
        let mut target = &level + &rem / &rate_r;
        let mut bound = |v: Option<&Rational>| {
            if let Some(v) = v {
                if *v > level && *v < target {
                    target = v.clone();
                }
            }
        };
        match mv {
            Move::X => {
                bound(sx.next_activation());
                bound(sx.next_saturation());
                if ab > 0 {
                    bound(Some(&sb.level));
                }
                bound(sb.cost_above(&level).as_ref());
            }
            Move::Xbar => {
                bound(sb.next_activation());
                bound(sb.next_saturation());
                if ax > 0 {
                    bound(Some(&sx.level));
                }
                bound(sx.cost_above(&level).as_ref());
            }
            Move::Joint => {
                bound(sx.next_activation());
                bound(sx.next_saturation());
                bound(sb.next_activation());
                bound(sb.next_saturation());
            }
        }
        let step = &target - &level;
        rem -= &step * &rate_r;
        f += &step * Rational::from_integer(gain.into());
        if matches!(mv, Move::X | Move::Joint) {
            sx.level = target.clone();
            sx.settle();
        }
        if matches!(mv, Move::Xbar | Move::Joint) {
            sb.level = target;
            sb.settle();
        }
        if trace {
            events.push(snap(&sx, &sb, &f, &rem));
        }
    }

    let mut worst = Scenario::nominal(inst.n);
    sx.write_scenario(&mut worst);
    sb.write_scenario(&mut worst);
    Run {
        value: f,
        worst,
        events,
    }
}

fn arec_run(inst: &Instance, x: &SelectionSolution, trace: bool) -> Result<(Rational, Scenario, Vec<LevelEvent>)> {
    require_continuous(inst)?;
    require_size(x, inst.p, true)?;
    if inst.k == 0 {
        let (v, s) = arec_k0_continuous(inst, x);
        return Ok((v, s, Vec::new()));
    }
    let outside: Vec<usize> = (0..inst.n).filter(|&i| !x.indicator[i]).collect();
    let r = run(inst, &x.items, &outside, inst.p, inst.k, trace);
    let check = irec_on_costs(&r.worst.costs(inst), x, inst.p, inst.k).value;
    if check != r.value {
        return Err(Error::Internal(format!(
            "level algorithm tracked {} but its scenario evaluates to {}",
            r.value, check
        )));
    }
    Ok((r.value, r.worst, r.events))
}

/// Exact adversarial value for the recoverable problem via level raising.
pub fn arec_continuous_levels(inst: &Instance, x: &SelectionSolution) -> Result<(Rational, Scenario)> {
    arec_run(inst, x, false).map(|(v, s, _)| (v, s))
}

/// As [`arec_continuous_levels`], also returning the state after every step.
pub fn arec_continuous_levels_traced(
    inst: &Instance,
    x: &SelectionSolution,
) -> Result<(Rational, Scenario, Vec<LevelEvent>)> {
    arec_run(inst, x, true)
}

/// Two-stage adversarial value via level raising with the `X_x` level disabled.
pub fn a2st_continuous_levels(inst: &Instance, x: &SelectionSolution) -> Result<(Rational, Scenario)> {
    require_continuous(inst)?;
    require_size(x, inst.p, false)?;
    let pt = inst.p - x.len();
    if pt == 0 {
        return Ok((Rational::zero(), Scenario::nominal(inst.n)));
    }
    let outside: Vec<usize> = (0..inst.n).filter(|&i| !x.indicator[i]).collect();
    let r = run(inst, &[], &outside, pt, pt, false);
    let check = solve_i2st(inst, x, &r.worst)?.value;
    if check != r.value {
        return Err(Error::Internal(format!(
            "level algorithm tracked {} but its scenario evaluates to {}",
            r.value, check
        )));
    }
    Ok((r.value, r.worst))
}
