//! Recoverable and two-stage robust selection under a continuous budget.
//!
//! Both problems are solved by enumerating cells: a value of `π` together with the
//! cardinalities of the rescaled second-stage blocks. Each cell is a totally unimodular
//! LP whose optimal vertices are 0/1. Cells are visited in order of a cheap lower
//! bound; every cell optimum also yields a first stage `x` whose exact objective
//! `Cx + adversary(x)` serves as the incumbent, so a cell is skipped once its bound
//! exceeds the incumbent.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};

use crate::adversary_continuous::{a2st_continuous, arec_continuous_intervals, require_continuous};
use crate::error::{Error, Result};
use crate::lp::{build_r2st_tu_subproblem, build_rrec_tu_subproblem, solve_lp, RrecSubproblem};
use crate::model::{Instance, Problem, SelectionSolution};
use crate::rational::Rational;
use crate::robust_discrete::minmax_budgeted;
use crate::selection::cheapest;

fn int(v: usize) -> Rational {
    Rational::from_integer(v.into())
}

/// Sorted fractions `q/r` in `[0, 1]`: `r ∈ 1..=n+1, q ∈ 0..=n` for RREC and
/// `r ∈ 1..=n, q ∈ 0..=p` for R2ST.
pub fn pi_candidates(n: usize, p: usize, problem: Problem) -> Vec<Rational> {
    let (rmax, qmax) = match problem {
        Problem::R2st | Problem::A2st | Problem::I2st => (n.max(1), p),
        _ => (n + 1, n),
    };
    let mut out: Vec<Rational> = Vec::new();
    for r in 1..=rmax {
        for q in 0..=qmax.min(r) {
            out.push(Rational::new(q.into(), r.into()));
        }
    }
    out.push(Rational::zero());
    out.push(Rational::one());
    out.sort();
    out.dedup();
    out
}

/// The fractional item of a cell, if any.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Fractional {
    /// `z_j ∈ (0,1)`, `z̄_j = 0`; `y_j = amount`.
    Cheap { j: usize, x_j: bool, amount: Rational },
    /// `z_j = 1`, `z̄_j ∈ (0,1)`; `y_j = π + amount`.
    Expensive { j: usize, x_j: bool, amount: Rational },
}

impl Fractional {
    fn index(&self) -> usize {
        match self {
            Fractional::Cheap { j, .. } | Fractional::Expensive { j, .. } => *j,
        }
    }

    fn in_x(&self) -> bool {
        match self {
            Fractional::Cheap { x_j, .. } | Fractional::Expensive { x_j, .. } => *x_j,
        }
    }
}

/// One enumeration cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EnumerationCell {
    pub problem: Problem,
    pub pi: Rational,
    /// Items handled by the LP (all items, or all but the fractional one).
    pub items: Vec<usize>,
    pub fractional: Option<Fractional>,
    /// `Σ x_i` over `items`.
    pub x_total: usize,
    pub z: usize,
    pub zbar: usize,
    /// RREC only: required overlaps of `x` with the `z` and `z̄` blocks.
    pub z_overlap: usize,
    pub zbar_overlap: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CellStats {
    pub generated: usize,
    pub duplicates: usize,
    pub pruned: usize,
    pub solved: usize,
    pub infeasible: usize,
    pub evaluated: usize,
}

/// Result of a robust solver.
#[derive(Debug, Clone)]
pub struct RobustSolution {
    /// First-stage items; `x.value` is `Cx`.
    pub x: SelectionSolution,
    pub value: Rational,
    /// Short tag for the method that produced the answer.
    pub method: &'static str,
    pub best_cell: Option<EnumerationCell>,
    pub stats: CellStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RrecOptions {
    pub preprocess: bool,
}

impl Default for RrecOptions {
    fn default() -> Self {
        RrecOptions { preprocess: true }
    }
}

/// Result of [`dominance_preprocess`].
///
/// Removal only restricts the first stage: a removed item stays available to the
/// recovery, since dropping it from the ground set can change the optimal value.
#[derive(Debug, Clone)]
pub struct Preprocessed {
    /// Original indices of removed items, in removal order.
    pub removed: Vec<usize>,
    /// Items that some optimal first stage contains (reported only).
    pub forced_in: Vec<usize>,
    /// Items still allowed in the first stage, ascending.
    pub first_stage: Vec<usize>,
}

fn dominates(inst: &Instance, a: usize, b: usize) -> bool {
    inst.first_stage_cost[a] <= inst.first_stage_cost[b]
        && inst.nominal_cost[a] <= inst.nominal_cost[b]
        && inst.upper(a) <= inst.upper(b)
}

/// Repeatedly drops from the first stage the highest-index item dominated by at least `p` other remaining items.
pub fn dominance_preprocess(inst: &Instance) -> Result<Preprocessed> {
    require_continuous(inst)?;
    let mut alive: Vec<usize> = (0..inst.n).collect();
    let mut removed = Vec::new();
    loop {
        let victim = alive.iter().rev().copied().find(|&l| {
            alive.iter().filter(|&&k| k != l && dominates(inst, k, l)).count() >= inst.p
        });
        match victim {
            Some(l) => {
                alive.retain(|&i| i != l);
                removed.push(l);
            }
            None => break,
        }
    }
    let need = alive.len() - inst.p;
    let forced_in = alive
        .iter()
        .copied()
        .filter(|&l| alive.iter().filter(|&&k| k != l && dominates(inst, l, k)).count() >= need)
        .collect();
    Ok(Preprocessed { removed, forced_in, first_stage: alive })
}

/// Prefix sums of the cheapest values, with O(1) exclusion of a single item.
struct Cheapest {
    rank: Vec<usize>,
    sorted: Vec<Rational>,
    prefix: Vec<Rational>,
}

impl Cheapest {
    fn new(vals: Vec<Rational>) -> Self {
        let mut order: Vec<usize> = (0..vals.len()).collect();
        order.sort_by(|&a, &b| vals[a].cmp(&vals[b]).then(a.cmp(&b)));
        let mut rank = vec![0; vals.len()];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        let sorted: Vec<Rational> = order.iter().map(|&i| vals[i].clone()).collect();
        let mut prefix = vec![Rational::zero()];
        for v in &sorted {
            let next = prefix.last().unwrap() + v;
            prefix.push(next);
        }
        Cheapest { rank, sorted, prefix }
    }

    /// Sum of the `m` smallest values, skipping item `skip`.
    fn sum(&self, m: usize, skip: Option<usize>) -> Rational {
        match skip {
            Some(j) if self.rank[j] < m => &self.prefix[m + 1] - &self.sorted[self.rank[j]],
            _ => self.prefix[m].clone(),
        }
    }
}

struct Bounds {
    c: Cheapest,
    lo: Cheapest,
    hi: Cheapest,
}

impl Bounds {
    fn new(inst: &Instance) -> Self {
        Bounds {
            c: Cheapest::new(inst.first_stage_cost.clone()),
            lo: Cheapest::new(inst.nominal_cost.clone()),
            hi: Cheapest::new(inst.upper_costs()),
        }
    }

    fn lower(&self, pi: &Rational, x: usize, z: usize, zbar: usize, skip: Option<usize>) -> Rational {
        self.c.sum(x, skip) + pi * self.lo.sum(z, skip) + (Rational::one() - pi) * self.hi.sum(zbar, skip)
    }
}

/// A cell plus its constant offset and lower bound.
struct Pending {
    cell: EnumerationCell,
    offset: Rational,
    bound: Rational,
}

/// Pareto-minimal overlap guesses `(a, b)` with `π a + (1−π) b ≥ need`.
fn overlap_guesses(pi: &Rational, need: &Rational, z: usize, zbar: usize, x_total: usize) -> Vec<(usize, usize)> {
    let one_minus = Rational::one() - pi;
    let amax = z.min(x_total);
    let bmax = zbar.min(x_total);
    if pi.is_zero() {
        return ceil_nonneg(need).filter(|&b| b <= bmax).map(|b| vec![(0, b)]).unwrap_or_default();
    }
    if pi.is_one() {
        return ceil_nonneg(need).filter(|&a| a <= amax).map(|a| vec![(a, 0)]).unwrap_or_default();
    }
    let mut out: Vec<(usize, usize)> = Vec::new();
    for b in 0..=bmax {
        let rest = need - &one_minus * int(b);
        let a = ceil_nonneg(&(rest / pi)).unwrap_or(0).max(b);
        if a <= amax && out.last().is_none_or(|&(pa, _)| a < pa) {
            out.push((a, b));
        }
    }
    out
}

/// `⌈v⌉` clamped at zero; `None` if it does not fit in `usize`.
fn ceil_nonneg(v: &Rational) -> Option<usize> {
    if !v.is_positive() {
        return Some(0);
    }
    v.ceil().to_integer().try_into().ok()
}

fn is_integer(v: &Rational) -> bool {
    v.denom().is_one()
}

fn rrec_cells(inst: &Instance, bounds: &Bounds, allowed: &[bool]) -> (Vec<Pending>, usize) {
    let (n, p, k) = (inst.n, inst.p, inst.k);
    let all: Vec<usize> = (0..n).collect();
    let gamma = &inst.gamma;
    let mut out = Vec::new();
    let mut seen: HashSet<EnumerationCell> = HashSet::new();
    let mut dup = 0usize;
    let mut push = |cell: EnumerationCell, offset: Rational, out: &mut Vec<Pending>| {
        if seen.contains(&cell) {
            dup += 1;
            return;
        }
        let skip = cell.fractional.as_ref().map(|f| f.index());
        let bound = bounds.lower(&cell.pi, cell.x_total, cell.z, cell.zbar, skip) + &offset;
        seen.insert(cell.clone());
        out.push(Pending { cell, offset, bound });
    };
    let need_full = int(p - k);

    // Integral cells over all items.
    for zbar in 0..=p {
        for z in p..=n {
            let pis: Vec<Rational> = if z == zbar {
                vec![Rational::zero(), Rational::one()]
            } else {
                vec![Rational::new((p - zbar).into(), (z - zbar).into())]
            };
            for pi in pis {
                let (zz, zb) = if pi.is_zero() {
                    (0, p)
                } else if pi.is_one() {
                    (p, 0)
                } else {
                    (z, zbar)
                };
                for (a, b) in overlap_guesses(&pi, &need_full, zz, zb, p) {
                    let cell = EnumerationCell {
                        problem: Problem::Rrec,
                        pi: pi.clone(),
                        items: all.clone(),
                        fractional: None,
                        x_total: p,
                        z: zz,
                        zbar: zb,
                        z_overlap: a,
                        zbar_overlap: b,
                    };
                    let offset = gamma * &pi;
                    push(cell, offset, &mut out);
                }
            }
        }
    }

    // One fractional item j, strictly inside (0, 1).
    let pis: Vec<Rational> = pi_candidates(n, p, Problem::Rrec)
        .into_iter()
        .filter(|v| v.is_positive() && *v < Rational::one())
        .collect();
    for j in 0..n {
        let items: Vec<usize> = (0..n).filter(|&i| i != j).collect();
        let m = n - 1;
        for x_j in [false, true] {
            let xj = usize::from(x_j);
            if p < xj || p - xj > m || (x_j && !allowed[j]) {
                continue;
            }
            let x_total = p - xj;
            let cj = if x_j { inst.first_stage_cost[j].clone() } else { Rational::zero() };
            for pi in &pis {
                let one_minus = Rational::one() - pi;
                // Cheap part fractional: t = p − πZ − (1−π)Z̄ ∈ (0, π).
                for zbar in 0..=m {
                    let base = int(p) - &one_minus * int(zbar);
                    let z_hi = (&base / pi).ceil() - Rational::one();
                    if z_hi.is_negative() {
                        continue;
                    }
                    let z: usize = match z_hi.to_integer().try_into() {
                        Ok(z) => z,
                        Err(_) => continue,
                    };
                    if z > m || z < zbar {
                        continue;
                    }
                    let t = &base - pi * int(z);
                    if !(t.is_positive() && t < *pi) {
                        continue;
                    }
                    let extra = if x_j { t.clone() } else { Rational::zero() };
                    let need = &need_full - &extra;
                    let offset = gamma * pi + &cj + &inst.nominal_cost[j] * &t;
                    for (a, b) in overlap_guesses(pi, &need, z, zbar, x_total) {
                        let cell = EnumerationCell {
                            problem: Problem::Rrec,
                            pi: pi.clone(),
                            items: items.clone(),
                            fractional: Some(Fractional::Cheap { j, x_j, amount: t.clone() }),
                            x_total,
                            z,
                            zbar,
                            z_overlap: a,
                            zbar_overlap: b,
                        };
                        push(cell, offset.clone(), &mut out);
                    }
                }
                // Expensive part fractional: s = p − π(Z+1) − (1−π)Z̄ ∈ (0, 1−π).
                for z in 0..=m {
                    let base = int(p) - pi * int(z + 1);
                    let zb_hi = (&base / &one_minus).ceil() - Rational::one();
                    if zb_hi.is_negative() {
                        continue;
                    }
                    let zbar: usize = match zb_hi.to_integer().try_into() {
                        Ok(v) => v,
                        Err(_) => continue,
                    };
                    if zbar > z {
                        continue;
                    }
                    let s = &base - &one_minus * int(zbar);
                    if !(s.is_positive() && s < one_minus) {
                        continue;
                    }
                    let yj = pi + &s;
                    let extra = if x_j { yj.clone() } else { Rational::zero() };
                    let need = &need_full - &extra;
                    let offset = gamma * pi + &cj + pi * &inst.nominal_cost[j] + inst.upper(j) * &s;
                    for (a, b) in overlap_guesses(pi, &need, z, zbar, x_total) {
                        let cell = EnumerationCell {
                            problem: Problem::Rrec,
                            pi: pi.clone(),
                            items: items.clone(),
                            fractional: Some(Fractional::Expensive { j, x_j, amount: s.clone() }),
                            x_total,
                            z,
                            zbar,
                            z_overlap: a,
                            zbar_overlap: b,
                        };
                        push(cell, offset.clone(), &mut out);
                    }
                }
            }
        }
    }
    (out, dup)
}

fn r2st_cells(inst: &Instance, bounds: &Bounds) -> Vec<Pending> {
    let (n, p) = (inst.n, inst.p);
    let all: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    let mut seen: HashSet<(Rational, usize, usize, usize)> = HashSet::new();
    for pi in pi_candidates(n, p, Problem::R2st) {
        let one_minus = Rational::one() - &pi;
        for x in 0..=p {
            for zbar in 0..=(n - x) {
                let (z, zb) = if pi.is_zero() {
                    if zbar != p - x {
                        continue;
                    }
                    (0, zbar)
                } else if pi.is_one() {
                    if zbar != 0 {
                        continue;
                    }
                    (p - x, 0)
                } else {
                    let z = (int(p - x) - &one_minus * int(zbar)) / &pi;
                    if !is_integer(&z) || z.is_negative() {
                        continue;
                    }
                    match usize::try_from(z.to_integer()) {
                        Ok(z) if z >= zbar && z + x <= n => (z, zbar),
                        _ => continue,
                    }
                };
                if !seen.insert((pi.clone(), x, z, zb)) {
                    continue;
                }
                let offset = &inst.gamma * &pi;
                let bound = bounds.lower(&pi, x, z, zb, None) + &offset;
                let cell = EnumerationCell {
                    problem: Problem::R2st,
                    pi: pi.clone(),
                    items: all.clone(),
                    fractional: None,
                    x_total: x,
                    z,
                    zbar: zb,
                    z_overlap: 0,
                    zbar_overlap: 0,
                };
                out.push(Pending { cell, offset, bound });
            }
        }
    }
    out
}

/// Best first stage found so far, by exact evaluation.
struct Incumbent {
    x: SelectionSolution,
    value: Rational,
}

impl Incumbent {
    fn offer(slot: &mut Option<Incumbent>, x: SelectionSolution, value: Rational) {
        let better = match slot {
            None => true,
            Some(b) => value < b.value || (value == b.value && x.items < b.x.items),
        };
        if better {
            *slot = Some(Incumbent { x, value });
        }
    }
}

fn first_stage(inst: &Instance, items: Vec<usize>) -> SelectionSolution {
    SelectionSolution::from_items(&items, &inst.first_stage_cost)
}

fn exact_rrec(inst: &Instance, x: &SelectionSolution) -> Result<Rational> {
    Ok(&x.value + arec_continuous_intervals(inst, x)?.0)
}

fn exact_r2st(inst: &Instance, x: &SelectionSolution) -> Result<Rational> {
    Ok(&x.value + a2st_continuous(inst, x)?.0)
}

/// Solves the cells best-first; `eval` gives the exact objective of a first stage.
fn run_cells(
    inst: &Instance,
    mut cells: Vec<Pending>,
    seeds: Vec<SelectionSolution>,
    allowed: &[bool],
    eval: impl Fn(&SelectionSolution) -> Result<Rational>,
    mut stats: CellStats,
    method: &'static str,
) -> Result<RobustSolution> {
    let mut inc: Option<Incumbent> = None;
    for x in seeds {
        let v = eval(&x)?;
        stats.evaluated += 1;
        Incumbent::offer(&mut inc, x, v);
    }
    stats.generated = cells.len();
    cells.sort_by(|a, b| a.bound.cmp(&b.bound));
    let mut best_cell: Option<(Rational, EnumerationCell)> = None;
    let mut tried: HashSet<Vec<usize>> = HashSet::new();
    for (idx, pc) in cells.iter().enumerate() {
        if inc.as_ref().is_some_and(|b| pc.bound > b.value) {
            stats.pruned = cells.len() - idx;
            break;
        }
        let cell = &pc.cell;
        let mut model = match cell.problem {
            Problem::Rrec => build_rrec_tu_subproblem(
                inst,
                &RrecSubproblem {
                    items: cell.items.clone(),
                    x_total: cell.x_total,
                    z: cell.z,
                    zbar: cell.zbar,
                    z_overlap: cell.z_overlap,
                    zbar_overlap: cell.zbar_overlap,
                    pi: cell.pi.clone(),
                },
            ),
            _ => build_r2st_tu_subproblem(inst, cell.x_total, cell.z, cell.zbar, &cell.pi),
        };
        // The x block comes first; excluded items get an upper bound of zero.
        for (t, &i) in cell.items.iter().enumerate() {
            if !allowed[i] {
                model.bounds[t].upper = Some(Rational::zero());
            }
        }
        let sol = solve_lp(&model);
        if !sol.is_optimal() {
            stats.infeasible += 1;
            continue;
        }
        stats.solved += 1;
        if !sol.is_binary() {
            return Err(Error::Internal(format!("fractional vertex in TU cell {cell:?}")));
        }
        let value = &sol.objective + &pc.offset;
        let m = cell.items.len();
        let mut items: Vec<usize> = (0..m).filter(|&t| sol.primal[t].is_one()).map(|t| cell.items[t]).collect();
        if let Some(f) = &cell.fractional {
            if f.in_x() {
                items.push(f.index());
            }
        }
        check_cell(inst, cell, &sol.primal)?;
        let x = first_stage(inst, items);
        if tried.insert(x.items.clone()) {
            let v = eval(&x)?;
            stats.evaluated += 1;
            if v > value {
                return Err(Error::Internal(format!(
                    "cell value {value} is below the exact objective {v} of its first stage"
                )));
            }
            Incumbent::offer(&mut inc, x, v);
        }
        if best_cell.as_ref().is_none_or(|(bv, _)| value < *bv) {
            best_cell = Some((value, cell.clone()));
        }
    }
    let inc = inc.ok_or_else(|| Error::Internal("no feasible cell".into()))?;
    if let Some((bv, _)) = &best_cell {
        if *bv < inc.value {
            return Err(Error::Internal(format!("best cell {bv} beats every evaluated first stage ({})", inc.value)));
        }
    }
    if best_cell.as_ref().is_none_or(|(bv, _)| *bv != inc.value) {
        return Err(Error::Internal(format!(
            "no cell attains the incumbent value {} (best cell {:?})",
            inc.value,
            best_cell.as_ref().map(|(v, _)| v.to_string())
        )));
    }
    Ok(RobustSolution {
        x: inc.x,
        value: inc.value,
        method,
        best_cell: best_cell.map(|(_, c)| c),
        stats,
    })
}

/// Maps the LP vertex back to `y_i = π z_i + (1−π) z̄_i` and checks the original constraints.
fn check_cell(inst: &Instance, cell: &EnumerationCell, primal: &[Rational]) -> Result<()> {
    let m = cell.items.len();
    let pi = &cell.pi;
    let one_minus = Rational::one() - pi;
    let mut y = vec![Rational::zero(); inst.n];
    let mut x = vec![false; inst.n];
    for (t, &i) in cell.items.iter().enumerate() {
        x[i] = primal[t].is_one();
        y[i] = pi * &primal[m + t] + &one_minus * &primal[2 * m + t];
    }
    if let Some(f) = &cell.fractional {
        let j = f.index();
        x[j] = f.in_x();
        y[j] = match f {
            Fractional::Cheap { amount, .. } => amount.clone(),
            Fractional::Expensive { amount, .. } => pi + amount,
        };
    }
    let total: Rational = y.iter().sum();
    let fail = |what: &str| Err(Error::Internal(format!("cell {cell:?}: {what}")));
    match cell.problem {
        Problem::Rrec => {
            if total != int(inst.p) {
                return fail("Σy ≠ p");
            }
            let kept: Rational = (0..inst.n).filter(|&i| x[i]).map(|i| &y[i]).sum();
            if kept < int(inst.p - inst.k) {
                return fail("Σ x_i y_i < p − k");
            }
            if y.iter().any(|v| v.is_negative() || *v > Rational::one()) {
                return fail("y outside [0, 1]");
            }
        }
        _ => {
            let xs = x.iter().filter(|&&b| b).count();
            if int(xs) + total != int(inst.p) {
                return fail("Σ(x + y) ≠ p");
            }
            if (0..inst.n).any(|i| x[i] && !y[i].is_zero()) {
                return fail("y overlaps x");
            }
        }
    }
    Ok(())
}

fn seeds(inst: &Instance, recoverable: bool, allowed: &[bool]) -> Vec<SelectionSolution> {
    let all: Vec<usize> = (0..inst.n).filter(|&i| allowed[i]).collect();
    let c = &inst.first_stage_cost;
    let mix = |w: &dyn Fn(usize) -> Rational| -> Vec<Rational> { (0..inst.n).map(|i| &c[i] + w(i)).collect() };
    let keys = [
        mix(&|_| Rational::zero()),
        mix(&|i| inst.nominal_cost[i].clone()),
        mix(&|i| inst.upper(i)),
        mix(&|i| (&inst.nominal_cost[i] + inst.upper(i)) / int(2)),
    ];
    let mut out: Vec<SelectionSolution> = Vec::new();
    for key in keys {
        let items = if recoverable {
            cheapest(&key, &all, inst.p)
        } else {
            // Buy now only the items whose first-stage price beats their nominal price.
            let alt: Vec<Rational> = (0..inst.n).map(|i| (&key[i]).min(&inst.nominal_cost[i]).clone()).collect();
            cheapest(&alt, &(0..inst.n).collect::<Vec<_>>(), inst.p)
                .into_iter()
                .filter(|&i| key[i] <= inst.nominal_cost[i])
                .collect()
        };
        let x = first_stage(inst, items);
        if !out.contains(&x) {
            out.push(x);
        }
    }
    if !recoverable && !out.iter().any(|x| x.is_empty()) {
        out.push(first_stage(inst, Vec::new()));
    }
    out
}

/// `min_x Cx + AREC(x)` over first stages with exactly `p` items.
pub fn solve_rrec_continuous(inst: &Instance) -> Result<(SelectionSolution, Rational)> {
    let s = solve_rrec_continuous_with(inst, RrecOptions::default())?;
    Ok((s.x, s.value))
}

pub fn solve_rrec_continuous_with(inst: &Instance, opts: RrecOptions) -> Result<RobustSolution> {
    require_continuous(inst)?;
    if inst.k == 0 {
        let (x, value) = minmax_budgeted(inst, None)?;
        return Ok(RobustSolution { x, value, method: "minmax", best_cell: None, stats: CellStats::default() });
    }
    if inst.k == inst.p {
        let all: Vec<usize> = (0..inst.n).collect();
        let x = first_stage(inst, cheapest(&inst.first_stage_cost, &all, inst.p));
        let value = exact_rrec(inst, &x)?;
        return Ok(RobustSolution { x, value, method: "full-recovery", best_cell: None, stats: CellStats::default() });
    }
    let allowed = if opts.preprocess {
        let pre = dominance_preprocess(inst)?;
        let mut mask = vec![false; inst.n];
        for &i in &pre.first_stage {
            mask[i] = true;
        }
        mask
    } else {
        vec![true; inst.n]
    };
    let bounds = Bounds::new(inst);
    let (cells, dup) = rrec_cells(inst, &bounds, &allowed);
    let stats = CellStats { duplicates: dup, ..Default::default() };
    let seeds = seeds(inst, true, &allowed);
    run_cells(inst, cells, seeds, &allowed, |x| exact_rrec(inst, x), stats, "cells")
}

/// `min_x Cx + A2ST(x)` over first stages with at most `p` items.
pub fn solve_r2st_continuous(inst: &Instance) -> Result<(SelectionSolution, Rational)> {
    let s = solve_r2st_continuous_report(inst)?;
    Ok((s.x, s.value))
}

pub fn solve_r2st_continuous_report(inst: &Instance) -> Result<RobustSolution> {
    require_continuous(inst)?;
    let bounds = Bounds::new(inst);
    let cells = r2st_cells(inst, &bounds);
    let allowed = vec![true; inst.n];
    let seeds = seeds(inst, false, &allowed);
    run_cells(inst, cells, seeds, &allowed, |x| exact_r2st(inst, x), CellStats::default(), "cells")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BudgetModel;
    use crate::rational::{rat, ratio};

    fn v(s: &[i64]) -> Vec<Rational> {
        s.iter().map(|&a| rat(a)).collect()
    }

    #[test]
    fn pi_candidate_sets() {
        assert_eq!(pi_candidates(2, 1, Problem::R2st), vec![rat(0), ratio(1, 2), rat(1)]);
        assert_eq!(
            pi_candidates(2, 1, Problem::Rrec),
            vec![rat(0), ratio(1, 3), ratio(1, 2), ratio(2, 3), rat(1)]
        );
        for n in 1..8 {
            assert!(pi_candidates(n, n, Problem::Rrec).len() <= (n + 2) * (n + 2));
        }
    }

    #[test]
    fn rrec_example() {
        let i = Instance::new(2, 1, rat(2), BudgetModel::Continuous, v(&[1, 1, 4]), v(&[1, 2, 1]), v(&[3, 3, 0])).unwrap();
        let (x, val) = solve_rrec_continuous(&i).unwrap();
        assert_eq!(val, ratio(11, 2));
        assert_eq!(x.items, vec![0, 1]);
    }

    #[test]
    fn r2st_example() {
        let i = Instance::new(1, 0, rat(5), BudgetModel::Continuous, v(&[10, 10]), v(&[1, 1]), v(&[5, 5])).unwrap();
        let (x, val) = solve_r2st_continuous(&i).unwrap();
        assert_eq!(val, ratio(7, 2));
        assert!(x.is_empty());
    }

    #[test]
    fn dominance_examples() {
        let i = Instance::new(1, 1, rat(1), BudgetModel::Continuous, v(&[1, 2]), v(&[1, 2]), v(&[1, 1])).unwrap();
        let pre = dominance_preprocess(&i).unwrap();
        assert_eq!(pre.removed, vec![1]);
        assert_eq!(pre.first_stage, vec![0]);
        let i = Instance::new(1, 1, rat(1), BudgetModel::Continuous, v(&[1, 2]), v(&[2, 1]), v(&[1, 1])).unwrap();
        assert!(dominance_preprocess(&i).unwrap().removed.is_empty());
    }
}
