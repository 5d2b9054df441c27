//! Worst-case scenarios under a discrete budget (at most Γ items raised to `c̄`).

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::adversary_continuous::require_size;
use crate::error::{Error, Result};
use crate::model::{Instance, Scenario, SelectionSolution};
use crate::rational::{pos, pos_ref, Rational};
use crate::selection::{irec_on_costs, solve_i2st, DualCandidate};

/// The cost lists that can contribute a candidate value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CostList {
    /// p-th smallest cost over all items.
    SigmaP,
    /// (p−k)-th smallest cost inside `X_x`.
    NuPk,
    /// k-th smallest cost outside `X_x`.
    VarsigmaK,
    /// (p−k)-th smallest, x-independent superset.
    SigmaPk,
    /// k-th smallest, x-independent superset.
    SigmaK,
    /// α = 0.
    Zero,
    /// α = c̲_j.
    Nominal,
    /// α = c̄_j.
    Upper,
}

/// Candidate dual values with the lists that produced them.
///
/// Exactly one of `pairs` / `alphas` is populated; `provenance[i]` belongs to its `i`-th entry.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CandidateSet {
    pub pairs: Vec<DualCandidate>,
    pub alphas: Vec<Rational>,
    pub provenance: Vec<Vec<CostList>>,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.pairs.len().max(self.alphas.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains_pair(&self, d: &DualCandidate) -> bool {
        self.pairs.binary_search(d).is_ok()
    }

    fn from_map<K: Ord>(m: BTreeMap<K, Vec<CostList>>) -> (Vec<K>, Vec<Vec<CostList>>) {
        m.into_iter()
            .map(|(k, mut v)| {
                v.sort();
                v.dedup();
                (k, v)
            })
            .unzip()
    }
}

pub(crate) fn require_discrete(inst: &Instance) -> Result<()> {
    if !inst.is_discrete() {
        return Err(Error::WrongBudgetModel { expected: "discrete" });
    }
    Ok(())
}

/// Possible values of the `m`-th smallest realized cost among `pool` (1-based `m`),
/// given realized costs in `{c̲_i, c̄_i}`: nominal ranks `m..=hi_lo`, upper ranks `1..=hi_up`.
fn window(inst: &Instance, pool: &[usize], m: usize, hi_lo: usize, hi_up: usize) -> Vec<Rational> {
    if m == 0 || pool.is_empty() || m > pool.len() {
        return Vec::new();
    }
    let mut lo: Vec<Rational> = pool.iter().map(|&i| inst.nominal_cost[i].clone()).collect();
    let mut up: Vec<Rational> = pool.iter().map(|&i| inst.upper(i)).collect();
    lo.sort();
    up.sort();
    let last = hi_lo.min(pool.len());
    let mut out: Vec<Rational> = lo[m - 1..last].to_vec();
    out.extend_from_slice(&up[..hi_up.min(pool.len())]);
    out.sort();
    out.dedup();
    out
}

/// `𝒮_x` when `x` is given, else the x-independent superset `𝒮`.
pub fn candidate_pairs_arec(inst: &Instance, x: Option<&SelectionSolution>) -> Result<CandidateSet> {
    require_discrete(inst)?;
    if inst.k == 0 {
        return Err(Error::TrivialCase);
    }
    let (n, p, k, g) = (inst.n, inst.p, inst.k, inst.gamma_count());
    let all: Vec<usize> = (0..n).collect();
    let c_p = window(inst, &all, p, p + g, p);
    let (c_pk, c_k, tags) = match x {
        Some(x) => {
            require_size(x, p, true)?;
            let outside: Vec<usize> = (0..n).filter(|&i| !x.indicator[i]).collect();
            (
                window(inst, &x.items, p - k, p - k + g, p - k),
                window(inst, &outside, k, k + g, k),
                (CostList::NuPk, CostList::VarsigmaK),
            )
        }
        None => (
            window(inst, &all, p - k, n - k + g, n - k),
            window(inst, &all, k, k + p + g, k + p),
            (CostList::SigmaPk, CostList::SigmaK),
        ),
    };

    let mut m: BTreeMap<DualCandidate, Vec<CostList>> = BTreeMap::new();
    // Flat pairs (b, 0): need some (p−k)-th value at or below b. With k = p there is no such constraint.
    for a in &c_p {
        if p == k || c_pk.first().is_some_and(|lo| lo <= a) {
            m.entry(DualCandidate::new(a.clone(), Rational::zero()))
                .or_default()
                .extend([CostList::SigmaP, tags.0]);
        }
    }
    for b1 in &c_pk {
        for b2 in c_k.iter().take_while(|b2| *b2 < b1) {
            m.entry(DualCandidate::new(b2.clone(), b1 - b2))
                .or_default()
                .extend([tags.0, tags.1]);
        }
    }
    let (pairs, provenance) = CandidateSet::from_map(m);
    Ok(CandidateSet { pairs, alphas: Vec::new(), provenance })
}

/// Items raised by the adversary: the Γ largest positive gains, ties by index.
fn top_gains(gains: &[Rational], budget: usize) -> (Rational, Vec<usize>) {
    let mut idx: Vec<usize> = (0..gains.len()).filter(|&i| gains[i].is_positive()).collect();
    idx.sort_by(|&a, &b| gains[b].cmp(&gains[a]).then(a.cmp(&b)));
    idx.truncate(budget);
    let total = idx.iter().map(|&i| &gains[i]).sum();
    idx.sort_unstable();
    (total, idx)
}

/// Value of the discrete AREC dual at a fixed `(α, β)` and the raised items attaining it.
pub fn arec_pair_value(inst: &Instance, x: &SelectionSolution, d: &DualCandidate) -> (Rational, Vec<usize>) {
    let ab = &d.alpha + &d.beta;
    let mut v = &d.alpha * Rational::from(num_bigint::BigInt::from(inst.p))
        + &d.beta * Rational::from(num_bigint::BigInt::from(inst.p - inst.k));
    let mut gains = Vec::with_capacity(inst.n);
    for i in 0..inst.n {
        let t = if x.indicator[i] { &ab } else { &d.alpha };
        let low = pos(t - &inst.nominal_cost[i]);
        let high = pos(t - inst.upper(i));
        v -= &low;
        gains.push(low - high);
    }
    let (gain, raised) = top_gains(&gains, inst.gamma_count());
    (v + gain, raised)
}

/// Worst-case recovery cost of `x`; the raised set is the first maximizer over the sorted candidate set.
pub fn arec_discrete(inst: &Instance, x: &SelectionSolution) -> Result<(Rational, Scenario)> {
    require_discrete(inst)?;
    require_size(x, inst.p, true)?;
    if inst.k == 0 {
        return Ok(arec_k0_discrete(inst, x));
    }
    let cands = candidate_pairs_arec(inst, Some(x))?;
    let mut best: Option<(Rational, Vec<usize>)> = None;
    for d in &cands.pairs {
        let (v, raised) = arec_pair_value(inst, x, d);
        if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
            best = Some((v, raised));
        }
    }
    let (value, raised) = best.ok_or_else(|| Error::Internal("empty candidate set".into()))?;
    let worst = Scenario::raise(inst, &raised);
    let check = irec_on_costs(&worst.costs(inst), x, inst.p, inst.k).value;
    if check != value {
        return Err(Error::Internal(format!("discrete AREC: dual {value} but scenario gives {check}")));
    }
    Ok((value, worst))
}

/// `k = 0`: raise the Γ largest deviations inside `X_x`.
fn arec_k0_discrete(inst: &Instance, x: &SelectionSolution) -> (Rational, Scenario) {
    let gains: Vec<Rational> = (0..inst.n)
        .map(|i| if x.indicator[i] { inst.deviation[i].clone() } else { Rational::zero() })
        .collect();
    let (gain, raised) = top_gains(&gains, inst.gamma_count());
    let base: Rational = x.items.iter().map(|&i| &inst.nominal_cost[i]).sum();
    (base + gain, Scenario::raise(inst, &raised))
}

/// `{0} ∪ {c̲_i} ∪ {c̄_i}`, sorted and deduplicated.
pub fn candidate_alphas_a2st(inst: &Instance) -> Result<CandidateSet> {
    require_discrete(inst)?;
    let mut m: BTreeMap<Rational, Vec<CostList>> = BTreeMap::new();
    m.entry(Rational::zero()).or_default().push(CostList::Zero);
    for i in 0..inst.n {
        m.entry(inst.nominal_cost[i].clone()).or_default().push(CostList::Nominal);
        m.entry(inst.upper(i)).or_default().push(CostList::Upper);
    }
    let (alphas, provenance) = CandidateSet::from_map(m);
    Ok(CandidateSet { pairs: Vec::new(), alphas, provenance })
}

/// Value of the discrete A2ST dual at a fixed `α` and the raised items attaining it.
pub fn a2st_alpha_value(inst: &Instance, x: &SelectionSolution, alpha: &Rational) -> (Rational, Vec<usize>) {
    let free = inst.p - x.len();
    let mut v = alpha * Rational::from(num_bigint::BigInt::from(free));
    let mut gains = vec![Rational::zero(); inst.n];
    for i in (0..inst.n).filter(|&i| !x.indicator[i]) {
        let low = pos_ref(&(alpha - &inst.nominal_cost[i]));
        let high = pos(alpha - inst.upper(i));
        v -= &low;
        gains[i] = low - high;
    }
    let (gain, raised) = top_gains(&gains, inst.gamma_count());
    (v + gain, raised)
}

/// Worst-case completion cost of a partial first stage `x`.
pub fn a2st_discrete(inst: &Instance, x: &SelectionSolution) -> Result<(Rational, Scenario)> {
    require_discrete(inst)?;
    require_size(x, inst.p, false)?;
    let cands = candidate_alphas_a2st(inst)?;
    let mut best: Option<(Rational, Vec<usize>)> = None;
    for a in &cands.alphas {
        let (v, raised) = a2st_alpha_value(inst, x, a);
        if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
            best = Some((v, raised));
        }
    }
    let (value, raised) = best.expect("alpha = 0 is always a candidate");
    let worst = Scenario::raise(inst, &raised);
    let check = solve_i2st(inst, x, &worst)?.value;
    if check != value {
        return Err(Error::Internal(format!("discrete A2ST: dual {value} but scenario gives {check}")));
    }
    Ok((value, worst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BudgetModel;
    use crate::rational::rat;

    fn inst(p: usize, k: usize, g: i64, lo: &[i64], d: &[i64]) -> Instance {
        let v = |s: &[i64]| s.iter().map(|&a| rat(a)).collect::<Vec<_>>();
        Instance::new(p, k, rat(g), BudgetModel::Discrete, vec![rat(0); lo.len()], v(lo), v(d)).unwrap()
    }

    fn sel(n: usize, items: &[usize]) -> SelectionSolution {
        SelectionSolution::new(n, items.to_vec(), rat(0))
    }

    #[test]
    fn small_example() {
        let i = inst(2, 1, 1, &[2, 3, 1], &[5, 0, 4]);
        let x = sel(3, &[0, 1]);
        let c = candidate_pairs_arec(&i, Some(&x)).unwrap();
        assert!(c.contains_pair(&DualCandidate::new(rat(5), rat(0))));
        let (v, w) = arec_discrete(&i, &x).unwrap();
        assert_eq!(v, rat(5));
        assert_eq!(w.deltas, vec![rat(0), rat(0), rat(4)]);
    }

    #[test]
    fn budget_extremes() {
        let i = inst(2, 1, 0, &[2, 3, 1], &[5, 0, 4]);
        assert_eq!(arec_discrete(&i, &sel(3, &[0, 1])).unwrap().0, rat(3));
        let i = inst(2, 1, 3, &[2, 3, 1], &[5, 0, 4]);
        assert_eq!(arec_discrete(&i, &sel(3, &[0, 1])).unwrap().0, rat(8));
    }

    #[test]
    fn k_zero_closed_form() {
        let i = inst(2, 0, 1, &[2, 3, 1], &[5, 1, 4]);
        let (v, w) = arec_discrete(&i, &sel(3, &[0, 1])).unwrap();
        assert_eq!(v, rat(10));
        assert_eq!(w.deltas[0], rat(5));
        assert!(matches!(candidate_pairs_arec(&i, None), Err(Error::TrivialCase)));
    }

    #[test]
    fn alpha_sets() {
        let a = candidate_alphas_a2st(&inst(1, 0, 0, &[1, 2], &[1, 0])).unwrap();
        assert_eq!(a.alphas, vec![rat(0), rat(1), rat(2)]);
        let a = candidate_alphas_a2st(&inst(1, 0, 0, &[0, 0], &[0, 0])).unwrap();
        assert_eq!(a.alphas, vec![rat(0)]);
        let a = candidate_alphas_a2st(&inst(1, 0, 0, &[4], &[3])).unwrap();
        assert_eq!(a.alphas, vec![rat(0), rat(4), rat(7)]);
    }

    #[test]
    fn a2st_examples() {
        let i = inst(2, 0, 2, &[1, 1, 1], &[2, 2, 2]);
        assert_eq!(a2st_discrete(&i, &sel(3, &[])).unwrap().0, rat(4));
        assert_eq!(a2st_discrete(&i, &sel(3, &[0, 2])).unwrap().0, rat(0));
        let i = inst(2, 0, 0, &[5, 1, 3], &[2, 2, 2]);
        assert_eq!(a2st_discrete(&i, &sel(3, &[])).unwrap().0, rat(4));
    }

    #[test]
    fn rejects_continuous() {
        let mut i = inst(2, 1, 1, &[2, 3, 1], &[5, 0, 4]);
        i.budget_model = BudgetModel::Continuous;
        assert!(matches!(arec_discrete(&i, &sel(3, &[0, 1])), Err(Error::WrongBudgetModel { .. })));
    }
}
