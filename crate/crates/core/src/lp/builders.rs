use num_traits::{One, Zero};

use super::{Bound, LpModel, Relation, Sense};
use crate::error::{Error, Result};
use crate::model::{BudgetModel, Instance, SelectionSolution};
use crate::rational::Rational;

fn int(v: usize) -> Rational {
    Rational::from_integer(v.into())
}

fn one() -> Rational {
    Rational::one()
}

/// Dual LP of the continuous recoverable adversary.
///
/// Variables: `α` (free), `β ≥ 0`, `γ_i ≥ 0`, `δ_i ≥ 0`, in that order.
pub fn build_arec_lp(inst: &Instance, x: &SelectionSolution) -> Result<LpModel> {
    if inst.budget_model != BudgetModel::Continuous {
        return Err(Error::WrongBudgetModel { expected: "continuous" });
    }
    if x.len() != inst.p {
        return Err(Error::Precondition(format!("|X_x| = {} but p = {}", x.len(), inst.p)));
    }
    let n = inst.n;
    let mut m = LpModel::new(Sense::Max);
    let a = m.add_var("alpha", Bound::free(), int(inst.p));
    let b = m.add_var("beta", Bound::nonneg(), int(inst.p - inst.k));
    let g: Vec<usize> = (0..n).map(|i| m.add_var(format!("gamma_{}", i + 1), Bound::nonneg(), -one())).collect();
    let d: Vec<usize> = (0..n).map(|i| m.add_var(format!("delta_{}", i + 1), Bound::nonneg(), Rational::zero())).collect();
    for i in 0..n {
        let mut terms = vec![(a, one()), (g[i], -one()), (d[i], -one())];
        if x.indicator[i] {
            terms.push((b, one()));
        }
        m.add_row(&terms, Relation::Le, inst.nominal_cost[i].clone());
    }
    m.add_row(&d.iter().map(|&j| (j, one())).collect::<Vec<_>>(), Relation::Le, inst.gamma.clone());
    for i in 0..n {
        m.add_row(&[(d[i], one())], Relation::Le, inst.deviation[i].clone());
    }
    Ok(m)
}

/// Dual LP of the continuous two-stage adversary.
///
/// Variables: `α` (free), `γ_i ≥ 0`, `δ_i ≥ 0`.
pub fn build_a2st_lp(inst: &Instance, x: &SelectionSolution) -> Result<LpModel> {
    if inst.budget_model != BudgetModel::Continuous {
        return Err(Error::WrongBudgetModel { expected: "continuous" });
    }
    if x.len() > inst.p {
        return Err(Error::Precondition(format!("|X_x| = {} exceeds p = {}", x.len(), inst.p)));
    }
    let n = inst.n;
    let mut m = LpModel::new(Sense::Max);
    let a = m.add_var("alpha", Bound::free(), int(inst.p - x.len()));
    let g: Vec<usize> = (0..n)
        .map(|i| {
            let c = if x.indicator[i] { Rational::zero() } else { -one() };
            m.add_var(format!("gamma_{}", i + 1), Bound::nonneg(), c)
        })
        .collect();
    let d: Vec<usize> = (0..n).map(|i| m.add_var(format!("delta_{}", i + 1), Bound::nonneg(), Rational::zero())).collect();
    for i in 0..n {
        m.add_row(&[(a, one()), (g[i], -one()), (d[i], -one())], Relation::Le, inst.nominal_cost[i].clone());
    }
    m.add_row(&d.iter().map(|&j| (j, one())).collect::<Vec<_>>(), Relation::Le, inst.gamma.clone());
    for i in 0..n {
        m.add_row(&[(d[i], one())], Relation::Le, inst.deviation[i].clone());
    }
    Ok(m)
}

/// Cardinalities of one recoverable enumeration cell over the item set `items`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RrecSubproblem {
    pub items: Vec<usize>,
    /// Required `Σ x_i` over `items`.
    pub x_total: usize,
    pub z: usize,
    pub zbar: usize,
    pub z_overlap: usize,
    pub zbar_overlap: usize,
    pub pi: Rational,
}

/// Relaxed TU subproblem of a recoverable cell.
///
/// Variable blocks over `items`, in order: `x`, `z`, `z̄`, `z'`, `z̄'`, all in `[0, 1]`.
pub fn build_rrec_tu_subproblem(inst: &Instance, sp: &RrecSubproblem) -> LpModel {
    let mut m = LpModel::new(Sense::Min);
    let one_minus_pi = one() - &sp.pi;
    let block = |name: &str, cost: &dyn Fn(usize) -> Rational, m: &mut LpModel| -> Vec<usize> {
        sp.items
            .iter()
            .map(|&i| m.add_var(format!("{name}_{}", i + 1), Bound::unit(), cost(i)))
            .collect()
    };
    let x = block("x", &|i| inst.first_stage_cost[i].clone(), &mut m);
    let z = block("z", &|i| &sp.pi * &inst.nominal_cost[i], &mut m);
    let zb = block("zbar", &|i| &one_minus_pi * inst.upper(i), &mut m);
    let zp = block("zp", &|_| Rational::zero(), &mut m);
    let zbp = block("zbarp", &|_| Rational::zero(), &mut m);
    let all = |v: &[usize]| v.iter().map(|&j| (j, one())).collect::<Vec<_>>();
    m.add_row(&all(&x), Relation::Eq, int(sp.x_total));
    m.add_row(&all(&z), Relation::Eq, int(sp.z));
    m.add_row(&all(&zb), Relation::Eq, int(sp.zbar));
    m.add_row(&all(&zp), Relation::Ge, int(sp.z_overlap));
    m.add_row(&all(&zbp), Relation::Ge, int(sp.zbar_overlap));
    for t in 0..sp.items.len() {
        m.add_row(&[(zp[t], one()), (x[t], -one())], Relation::Le, Rational::zero());
        m.add_row(&[(zp[t], one()), (z[t], -one())], Relation::Le, Rational::zero());
        m.add_row(&[(zbp[t], one()), (x[t], -one())], Relation::Le, Rational::zero());
        m.add_row(&[(zbp[t], one()), (zb[t], -one())], Relation::Le, Rational::zero());
    }
    m
}

/// Relaxed TU subproblem of a two-stage cell.
///
/// Variable blocks over all items: `x`, `z`, `z̄`, all in `[0, 1]`.
pub fn build_r2st_tu_subproblem(inst: &Instance, x_total: usize, z: usize, zbar: usize, pi: &Rational) -> LpModel {
    let n = inst.n;
    let mut m = LpModel::new(Sense::Min);
    let one_minus_pi = one() - pi;
    let x: Vec<usize> = (0..n)
        .map(|i| m.add_var(format!("x_{}", i + 1), Bound::unit(), inst.first_stage_cost[i].clone()))
        .collect();
    let zv: Vec<usize> = (0..n)
        .map(|i| m.add_var(format!("z_{}", i + 1), Bound::unit(), pi * &inst.nominal_cost[i]))
        .collect();
    let zb: Vec<usize> = (0..n)
        .map(|i| m.add_var(format!("zbar_{}", i + 1), Bound::unit(), &one_minus_pi * inst.upper(i)))
        .collect();
    let all = |v: &[usize]| v.iter().map(|&j| (j, one())).collect::<Vec<_>>();
    m.add_row(&all(&x), Relation::Eq, int(x_total));
    m.add_row(&all(&zv), Relation::Eq, int(z));
    m.add_row(&all(&zb), Relation::Eq, int(zbar));
    for i in 0..n {
        m.add_row(&[(x[i], one()), (zv[i], one())], Relation::Le, one());
        m.add_row(&[(x[i], one()), (zb[i], one())], Relation::Le, one());
    }
    m
}

/// Single-scenario recoverable problem at the nominal costs.
///
/// Variable blocks: `x`, `y`, `w`, all in `[0, 1]`.
pub fn build_nominal_rrec_lp(inst: &Instance) -> LpModel {
    build_single_scenario_rrec_lp(inst, &inst.nominal_cost)
}

pub(crate) fn build_single_scenario_rrec_lp(inst: &Instance, costs: &[Rational]) -> LpModel {
    let n = inst.n;
    let mut m = LpModel::new(Sense::Min);
    let x: Vec<usize> = (0..n)
        .map(|i| m.add_var(format!("x_{}", i + 1), Bound::unit(), inst.first_stage_cost[i].clone()))
        .collect();
    let y: Vec<usize> = (0..n)
        .map(|i| m.add_var(format!("y_{}", i + 1), Bound::unit(), costs[i].clone()))
        .collect();
    let w: Vec<usize> = (0..n)
        .map(|i| m.add_var(format!("w_{}", i + 1), Bound::unit(), Rational::zero()))
        .collect();
    let all = |v: &[usize]| v.iter().map(|&j| (j, one())).collect::<Vec<_>>();
    m.add_row(&all(&x), Relation::Eq, int(inst.p));
    m.add_row(&all(&y), Relation::Eq, int(inst.p));
    m.add_row(&all(&w), Relation::Ge, int(inst.p - inst.k));
    for i in 0..n {
        m.add_row(&[(w[i], one()), (x[i], -one())], Relation::Le, Rational::zero());
        m.add_row(&[(w[i], one()), (y[i], -one())], Relation::Le, Rational::zero());
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{solve_lp, LpStatus};
    use crate::rational::{rat, ratio};

    fn inst(p: usize, k: usize, g: i64, c: &[i64], lo: &[i64], d: &[i64]) -> Instance {
        let r = |v: &[i64]| v.iter().map(|&x| rat(x)).collect::<Vec<_>>();
        Instance::new(p, k, rat(g), BudgetModel::Continuous, r(c), r(lo), r(d)).unwrap()
    }

    #[test]
    fn arec_lp_small_example() {
        let i = inst(1, 1, 5, &[0, 0], &[0, 0], &[10, 10]);
        let x = SelectionSolution::new(2, vec![0], rat(0));
        let m = build_arec_lp(&i, &x).unwrap();
        assert_eq!(m.rows.len(), 2 * i.n + 1);
        assert_eq!(solve_lp(&m).objective, ratio(5, 2));
    }

    #[test]
    fn arec_lp_zero_budget_is_nominal() {
        let i = inst(3, 1, 0, &[0; 5], &[4, 7, 2, 1, 9], &[3; 5]);
        let x = SelectionSolution::new(5, vec![0, 1, 2], rat(0));
        assert_eq!(solve_lp(&build_arec_lp(&i, &x).unwrap()).objective, rat(7));
    }

    #[test]
    fn a2st_lp_example() {
        let i = inst(2, 0, 3, &[0; 3], &[1, 1, 1], &[2, 2, 2]);
        let x = SelectionSolution::new(3, vec![], rat(0));
        assert_eq!(solve_lp(&build_a2st_lp(&i, &x).unwrap()).objective, rat(4));
    }

    #[test]
    fn rrec_cell_without_second_stage() {
        let i = inst(2, 1, 0, &[5, 1, 3, 2], &[0; 4], &[0; 4]);
        let sp = RrecSubproblem {
            items: vec![0, 1, 2, 3],
            x_total: 2,
            z: 0,
            zbar: 0,
            z_overlap: 0,
            zbar_overlap: 0,
            pi: ratio(1, 2),
        };
        let s = solve_lp(&build_rrec_tu_subproblem(&i, &sp));
        assert_eq!(s.objective, rat(3));
        assert!(s.is_binary());
    }

    #[test]
    fn r2st_cells() {
        let i = inst(2, 0, 0, &[5, 1, 3], &[1; 3], &[1; 3]);
        let s = solve_lp(&build_r2st_tu_subproblem(&i, 2, 0, 0, &rat(1)));
        assert_eq!(s.objective, rat(4));
        let s = solve_lp(&build_r2st_tu_subproblem(&i, 2, 2, 0, &rat(1)));
        assert_eq!(s.status, LpStatus::Infeasible);
    }

    #[test]
    fn nominal_rrec_extremes() {
        let i = inst(2, 2, 0, &[5, 1, 3, 2], &[1, 9, 2, 0], &[0; 4]);
        let s = solve_lp(&build_nominal_rrec_lp(&i));
        assert_eq!(s.objective, rat(3 + 1));
        assert!(s.is_binary());
        let i = i.with_pk(2, 0).unwrap();
        let s = solve_lp(&build_nominal_rrec_lp(&i));
        assert_eq!(s.objective, rat(2 + 5));
    }
}
