use num_traits::Zero;

use super::{
    adversarial_dual_value, arec_k0_continuous, greedy_on, greedy_worst_scenario, maximize_envelope,
    require_continuous, require_size, Affine, EnvelopeProblem,
};
use crate::error::{Error, Result};
use crate::model::{Instance, Scenario, SelectionSolution};
use crate::rational::Rational;
use crate::selection::DualCandidate;

/// Which part of the scan produced the optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanBranch {
    /// `β = 0`, α scanned over the intervals.
    BetaZero,
    /// `α + β` fixed at a breakpoint, α scanned.
    SumAtBreakpoint,
    /// α fixed at a breakpoint, `α + β` scanned.
    AlphaAtBreakpoint,
    /// `k = 0`, no scan needed.
    ClosedForm,
}

#[derive(Debug, Clone)]
pub struct IntervalScan {
    pub value: Rational,
    pub dual: DualCandidate,
    pub branch: ScanBranch,
    pub worst: Scenario,
    /// Sorted distinct values of all `c̲_i` and `c̄_i`.
    pub breakpoints: Vec<Rational>,
}

/// Counts and sums of the lower and upper costs at or below each breakpoint.
struct Profile {
    cnt_lo: Vec<Rational>,
    sum_lo: Vec<Rational>,
    cnt_hi: Vec<Rational>,
    sum_hi: Vec<Rational>,
}

fn cumulative(mut vals: Vec<Rational>, h: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    vals.sort();
    let (mut cnt, mut sum) = (Vec::with_capacity(h.len()), Vec::with_capacity(h.len()));
    let (mut i, mut s) = (0usize, Rational::zero());
    for t in h {
        while i < vals.len() && vals[i] <= *t {
            s += &vals[i];
            i += 1;
        }
        cnt.push(Rational::from_integer(i.into()));
        sum.push(s.clone());
    }
    (cnt, sum)
}

impl Profile {
    fn new(inst: &Instance, items: &[usize], h: &[Rational]) -> Self {
        let (cnt_lo, sum_lo) = cumulative(items.iter().map(|&i| inst.nominal_cost[i].clone()).collect(), h);
        let (cnt_hi, sum_hi) = cumulative(items.iter().map(|&i| inst.upper(i)).collect(), h);
        Profile {
            cnt_lo,
            sum_lo,
            cnt_hi,
            sum_hi,
        }
    }

    /// `Σ [t − c̲_i]₊` for `t` in the interval starting at breakpoint `j`.
    fn lo_at(&self, j: usize, t: &Rational) -> Rational {
        &self.cnt_lo[j] * t - &self.sum_lo[j]
    }

    fn hi_at(&self, j: usize, t: &Rational) -> Rational {
        &self.cnt_hi[j] * t - &self.sum_hi[j]
    }
}

fn breakpoints(inst: &Instance, items: impl Iterator<Item = usize>) -> Vec<Rational> {
    let mut h: Vec<Rational> = items
        .flat_map(|i| [inst.nominal_cost[i].clone(), inst.upper(i)])
        .collect();
    h.sort();
    h.dedup();
    h
}

fn intervals(l: usize) -> Vec<(usize, usize)> {
    if l <= 1 {
        vec![(0, 0)]
    } else {
        (0..l - 1).map(|j| (j, j + 1)).collect()
    }
}

fn envelope(h: &[Rational], (j, j2): (usize, usize), f1: Affine, f2: Affine) -> (Rational, Rational) {
    maximize_envelope(&EnvelopeProblem {
        lo: h[j].clone(),
        hi: h[j2].clone(),
        f1,
        f2,
    })
    .expect("breakpoints are sorted")
}

/// Best `α` for `pα − max{Σ[α−c̲_i]₊ − Γ, Σ[α−c̄_i]₊}` over the given items.
fn beta_zero_scan(inst: &Instance, items: &[usize], p: usize, h: &[Rational]) -> (Rational, Rational) {
    let prof = Profile::new(inst, items, h);
    let pr = Rational::from_integer(p.into());
    let mut best: Option<(Rational, Rational)> = None;
    for iv in intervals(h.len()) {
        let j = iv.0;
        let f1 = Affine::new(&pr - &prof.cnt_lo[j], &prof.sum_lo[j] + &inst.gamma);
        let f2 = Affine::new(&pr - &prof.cnt_hi[j], prof.sum_hi[j].clone());
        let (t, v) = envelope(h, iv, f1, f2);
        if best.as_ref().is_none_or(|(_, bv)| v > *bv) {
            best = Some((t, v));
        }
    }
    best.expect("at least one interval")
}

/// Exact adversarial value for the recoverable problem via the breakpoint scan.
pub fn arec_continuous_intervals(inst: &Instance, x: &SelectionSolution) -> Result<(Rational, Scenario)> {
    let r = arec_continuous_intervals_report(inst, x)?;
    Ok((r.value, r.worst))
}

pub fn arec_continuous_intervals_report(inst: &Instance, x: &SelectionSolution) -> Result<IntervalScan> {
    require_continuous(inst)?;
    require_size(x, inst.p, true)?;
    let h = breakpoints(inst, 0..inst.n);
    if inst.k == 0 {
        let (value, worst) = arec_k0_continuous(inst, x);
        return Ok(IntervalScan {
            value,
            dual: DualCandidate::new(Rational::zero(), Rational::zero()),
            branch: ScanBranch::ClosedForm,
            worst,
            breakpoints: h,
        });
    }
    let inside = x.items.clone();
    let outside: Vec<usize> = (0..inst.n).filter(|&i| !x.indicator[i]).collect();
    let px = Profile::new(inst, &inside, &h);
    let pxb = Profile::new(inst, &outside, &h);
    let k = Rational::from_integer(inst.k.into());
    let pk = Rational::from_integer((inst.p - inst.k).into());
    let g = &inst.gamma;

    let (a0, v0) = beta_zero_scan(inst, &(0..inst.n).collect::<Vec<_>>(), inst.p, &h);
    let mut best = (v0, DualCandidate::new(a0, Rational::zero()), ScanBranch::BetaZero);
    let mut offer = |v: Rational, alpha: Rational, gamma: Rational, br: ScanBranch| {
        if v > best.0 {
            let beta = gamma - &alpha;
            best = (v, DualCandidate::new(alpha, beta), br);
        }
    };

    let l = h.len();
    for gi in 0..l {
        let gamma = &h[gi];
        let base = &pk * gamma;
        let c1 = &base - px.lo_at(gi, gamma) + g;
        let c2 = &base - px.hi_at(gi, gamma);
        for j in 0..gi {
            let f1 = Affine::new(&k - &pxb.cnt_lo[j], &c1 + &pxb.sum_lo[j]);
            let f2 = Affine::new(&k - &pxb.cnt_hi[j], &c2 + &pxb.sum_hi[j]);
            let (t, v) = envelope(&h, (j, j + 1), f1, f2);
            offer(v, t, gamma.clone(), ScanBranch::SumAtBreakpoint);
        }
    }
    for ai in 0..l {
        let alpha = &h[ai];
        let base = &k * alpha;
        let c1 = &base - pxb.lo_at(ai, alpha) + g;
        let c2 = &base - pxb.hi_at(ai, alpha);
        for j in ai..l.saturating_sub(1) {
            let f1 = Affine::new(&pk - &px.cnt_lo[j], &c1 + &px.sum_lo[j]);
            let f2 = Affine::new(&pk - &px.cnt_hi[j], &c2 + &px.sum_hi[j]);
            let (t, v) = envelope(&h, (j, j + 1), f1, f2);
            offer(v, alpha.clone(), t, ScanBranch::AlphaAtBreakpoint);
        }
    }

    let (value, dual, branch) = best;
    if adversarial_dual_value(inst, x, &dual) != value {
        return Err(Error::Internal("interval scan value disagrees with its dual pair".into()));
    }
    let worst = greedy_worst_scenario(inst, x, &dual);
    Ok(IntervalScan {
        value,
        dual,
        branch,
        worst,
        breakpoints: h,
    })
}

/// Exact adversarial value for the two-stage problem (reduction to the `β = 0` scan).
pub fn a2st_continuous(inst: &Instance, x: &SelectionSolution) -> Result<(Rational, Scenario)> {
    require_continuous(inst)?;
    require_size(x, inst.p, false)?;
    let pt = inst.p - x.len();
    if pt == 0 {
        return Ok((Rational::zero(), Scenario::nominal(inst.n)));
    }
    let outside: Vec<usize> = (0..inst.n).filter(|&i| !x.indicator[i]).collect();
    let h = breakpoints(inst, outside.iter().copied());
    let (alpha, value) = beta_zero_scan(inst, &outside, pt, &h);
    let dual = DualCandidate::new(alpha, Rational::zero());
    let worst = greedy_on(inst, &dual, |_| false, |i| !x.indicator[i]);
    Ok((value, worst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BudgetModel;
    use crate::rational::{rat, ratio};
    use crate::selection::solve_irec;

    fn inst(p: usize, k: usize, g: Rational, lo: &[i64], d: &[i64]) -> Instance {
        let r = |v: &[i64]| v.iter().map(|&x| rat(x)).collect::<Vec<_>>();
        Instance::new(p, k, g, BudgetModel::Continuous, r(&vec![0; lo.len()]), r(lo), r(d)).unwrap()
    }

    #[test]
    fn small_examples() {
        let i = inst(1, 1, rat(5), &[0, 0], &[10, 10]);
        let x = SelectionSolution::new(2, vec![0], rat(0));
        let (v, w) = arec_continuous_intervals(&i, &x).unwrap();
        assert_eq!(v, ratio(5, 2));
        assert_eq!(w.deltas, vec![ratio(5, 2), ratio(5, 2)]);
        assert_eq!(solve_irec(&i, &x, &w).unwrap().value, v);

        let i = inst(2, 1, rat(2), &[1, 2, 1], &[3, 3, 0]);
        let x = SelectionSolution::new(3, vec![0, 1], rat(0));
        let (v, w) = arec_continuous_intervals(&i, &x).unwrap();
        assert_eq!(v, ratio(7, 2));
        assert_eq!(solve_irec(&i, &x, &w).unwrap().value, v);
        w.check(&i).unwrap();
    }

    #[test]
    fn zero_budget_is_nominal() {
        let i = inst(2, 1, rat(0), &[4, 7, 2, 1, 9], &[1, 2, 3, 4, 5]);
        let x = SelectionSolution::new(5, vec![0, 1, 2], rat(0));
        let i = i.with_pk(3, 1).unwrap();
        let (v, _) = arec_continuous_intervals(&i, &x).unwrap();
        assert_eq!(v, rat(7));
    }

    #[test]
    fn k_zero_closed_form() {
        let i = inst(2, 0, rat(3), &[1, 1, 0], &[2, 2, 9]);
        let x = SelectionSolution::new(3, vec![0, 1], rat(0));
        let (v, w) = arec_continuous_intervals(&i, &x).unwrap();
        assert_eq!(v, rat(5));
        assert_eq!(w.deltas, vec![rat(2), rat(1), rat(0)]);
    }

    #[test]
    fn a2st_examples() {
        let i = inst(2, 0, rat(3), &[1, 1, 1], &[2, 2, 2]);
        let (v, w) = a2st_continuous(&i, &SelectionSolution::new(3, vec![], rat(0))).unwrap();
        assert_eq!(v, rat(4));
        w.check(&i).unwrap();
        let (v, _) = a2st_continuous(&i, &SelectionSolution::new(3, vec![0, 2], rat(0))).unwrap();
        assert_eq!(v, rat(0));
        let i0 = inst(2, 0, rat(0), &[5, 1, 3], &[2, 2, 2]);
        let (v, _) = a2st_continuous(&i0, &SelectionSolution::new(3, vec![1], rat(0))).unwrap();
        assert_eq!(v, rat(3));
    }

    #[test]
    fn rejects_discrete() {
        let mut i = inst(1, 1, rat(1), &[0, 0], &[1, 1]);
        i.budget_model = BudgetModel::Discrete;
        let x = SelectionSolution::new(2, vec![0], rat(0));
        assert!(matches!(arec_continuous_intervals(&i, &x), Err(Error::WrongBudgetModel { .. })));
    }
}
