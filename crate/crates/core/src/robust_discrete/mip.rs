//! Compact MIPs for the discrete robust problems.
//!
//! Each dual candidate contributes one block: a cut on `lambda` and one capacity row
//! per item, whose `(pi, rho)` part is the dual of "sum of the Γ largest gains".

use num_traits::{One, Signed, Zero};

use crate::adversary_discrete::{candidate_alphas_a2st, candidate_pairs_arec, require_discrete};
use crate::error::{Error, Result};
use crate::lp::{Bound, LpModel, Relation, Row, Sense};
use crate::model::{Instance, Problem, SelectionSolution};
use crate::rational::{pos, Rational};
use crate::selection::DualCandidate;

/// Variable and row indices of one candidate block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MipBlock {
    pub pi: usize,
    pub rho: Vec<usize>,
    pub cut: usize,
    pub caps: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MipModel {
    pub problem: Problem,
    pub lp: LpModel,
    pub row_names: Vec<String>,
    pub lambda: usize,
    pub x: Vec<usize>,
    pub binaries: Vec<usize>,
    pub card: usize,
    pub blocks: Vec<MipBlock>,
    /// Candidate pairs (RREC) generating the blocks, in block order.
    pub pairs: Vec<DualCandidate>,
    /// Candidate alphas (R2ST) generating the blocks, in block order.
    pub alphas: Vec<Rational>,
}

impl MipModel {
    fn new(problem: Problem, n: usize) -> Self {
        let mut lp = LpModel::new(Sense::Min);
        let lambda = lp.add_var("lambda", Bound::free(), Rational::one());
        let x: Vec<usize> = (0..n).map(|i| lp.add_var(format!("x_{}", i + 1), Bound::unit(), Rational::zero())).collect();
        MipModel {
            problem,
            lp,
            row_names: Vec::new(),
            lambda,
            binaries: x.clone(),
            x,
            card: 0,
            blocks: Vec::new(),
            pairs: Vec::new(),
            alphas: Vec::new(),
        }
    }

    fn row(&mut self, name: String, terms: &[(usize, Rational)], rel: Relation, rhs: Rational) -> usize {
        self.row_names.push(name);
        self.lp.add_row(terms, rel, rhs)
    }

    /// Adds a block: `lambda − Σ cx_i x_i − Γ pi − Σ rho_i ≥ cut_rhs` and
    /// `pi + rho_i + cap_x_i x_i ≥ cap_rhs_i`.
    fn block(&mut self, gamma: &Rational, cx: &[Rational], cut_rhs: Rational, cap_x: &[Rational], cap_rhs: &[Rational]) {
        let n = self.x.len();
        let l = self.blocks.len() + 1;
        let pi = self.lp.add_var(format!("pi_{l}"), Bound::nonneg(), Rational::zero());
        let rho: Vec<usize> = (0..n)
            .map(|i| self.lp.add_var(format!("rho_{l}_{}", i + 1), Bound::nonneg(), Rational::zero()))
            .collect();
        let one = Rational::one();
        let mut terms = vec![(self.lambda, one.clone()), (pi, -gamma)];
        for i in 0..n {
            terms.push((self.x[i], -&cx[i]));
            terms.push((rho[i], -&one));
        }
        let cut = self.row(format!("cut_{l}"), &terms, Relation::Ge, cut_rhs);
        let caps = (0..n)
            .map(|i| {
                self.row(
                    format!("cap_{l}_{}", i + 1),
                    &[(pi, one.clone()), (rho[i], one.clone()), (self.x[i], cap_x[i].clone())],
                    Relation::Ge,
                    cap_rhs[i].clone(),
                )
            })
            .collect();
        self.blocks.push(MipBlock { pi, rho, cut, caps });
    }
}

fn int(v: usize) -> Rational {
    Rational::from_integer(v.into())
}

/// One block per pair of the x-independent candidate set; `Σx = p`.
pub fn build_rrec_discrete_mip(inst: &Instance) -> Result<MipModel> {
    require_discrete(inst)?;
    let cands = candidate_pairs_arec(inst, None)?;
    let (n, p, k) = (inst.n, inst.p, inst.k);
    let gamma = int(inst.gamma_count());
    let mut m = MipModel::new(Problem::Rrec, n);
    let terms: Vec<(usize, Rational)> = m.x.iter().map(|&j| (j, Rational::one())).collect();
    m.card = m.row("card".into(), &terms, Relation::Eq, int(p));
    for d in &cands.pairs {
        let t1 = &d.alpha + &d.beta;
        let mut cx = Vec::with_capacity(n);
        let mut cap_x = Vec::with_capacity(n);
        let mut cap_rhs = Vec::with_capacity(n);
        let mut rhs = int(p) * &d.alpha + int(p - k) * &d.beta;
        for i in 0..n {
            let (lo, hi) = (&inst.nominal_cost[i], inst.upper(i));
            let a = pos(&d.alpha - lo);
            let b = pos(&t1 - lo);
            let g0 = &a - pos(&d.alpha - &hi);
            let g1 = &b - pos(&t1 - &hi);
            cx.push(&inst.first_stage_cost[i] - (&b - &a));
            cap_x.push(-(g1 - &g0));
            cap_rhs.push(g0);
            rhs -= a;
        }
        m.block(&gamma, &cx, rhs, &cap_x, &cap_rhs);
    }
    m.pairs = cands.pairs;
    Ok(m)
}

/// One block per candidate alpha; `Σx ≤ p`.
pub fn build_r2st_discrete_mip(inst: &Instance) -> Result<MipModel> {
    require_discrete(inst)?;
    let cands = candidate_alphas_a2st(inst)?;
    let (n, p) = (inst.n, inst.p);
    let gamma = int(inst.gamma_count());
    let mut m = MipModel::new(Problem::R2st, n);
    let terms: Vec<(usize, Rational)> = m.x.iter().map(|&j| (j, Rational::one())).collect();
    m.card = m.row("card".into(), &terms, Relation::Le, int(p));
    for alpha in &cands.alphas {
        let mut cx = Vec::with_capacity(n);
        let mut gains = Vec::with_capacity(n);
        let mut rhs = int(p) * alpha;
        for i in 0..n {
            let a = pos(alpha - &inst.nominal_cost[i]);
            let g = &a - pos(alpha - inst.upper(i));
            cx.push(&inst.first_stage_cost[i] - alpha + &a);
            gains.push(g);
            rhs -= a;
        }
        m.block(&gamma, &cx, rhs, &gains, &gains);
    }
    m.alphas = cands.alphas;
    Ok(m)
}

/// Row as `coeffs · v ≥ rhs`.
fn ge_form(r: &Row) -> (Vec<Rational>, Rational) {
    match r.relation {
        Relation::Le => (r.coeffs.iter().map(|c| -c).collect(), -&r.rhs),
        _ => (r.coeffs.clone(), r.rhs.clone()),
    }
}

/// Smallest `lambda` feasible together with the given first stage.
pub fn evaluate_fixed_x(m: &MipModel, x: &SelectionSolution) -> Result<Rational> {
    let n = m.x.len();
    if x.indicator.len() != n {
        return Err(Error::Precondition(format!("x has {} entries, model has {n} items", x.indicator.len())));
    }
    let xv: Vec<Rational> = x.indicator.iter().map(|&b| if b { Rational::one() } else { Rational::zero() }).collect();
    let dot_x = |coeffs: &[Rational]| -> Rational { (0..n).map(|i| &coeffs[m.x[i]] * &xv[i]).sum() };
    let card = &m.lp.rows[m.card];
    let lhs = dot_x(&card.coeffs);
    let ok = match card.relation {
        Relation::Le => lhs <= card.rhs,
        Relation::Eq => lhs == card.rhs,
        Relation::Ge => lhs >= card.rhs,
    };
    if !ok {
        return Err(Error::Precondition(format!("x violates the cardinality row ({} items)", x.len())));
    }
    let mut best: Option<Rational> = None;
    for b in &m.blocks {
        let (cut, cut_rhs) = ge_form(&m.lp.rows[b.cut]);
        let a_lambda = &cut[m.lambda];
        if !a_lambda.is_positive() {
            return Err(Error::Precondition("cut row does not bound lambda from below".into()));
        }
        let w_pi = -&cut[b.pi];
        // Each cap row: b_pi pi + b_rho rho_i ≥ r_i, with x substituted.
        let caps: Vec<(Rational, Rational, Rational, Rational)> = b
            .caps
            .iter()
            .zip(&b.rho)
            .map(|(&c, &rho)| {
                let (row, rhs) = ge_form(&m.lp.rows[c]);
                let r = rhs - dot_x(&row);
                (row[b.pi].clone(), row[rho].clone(), r, -&cut[rho])
            })
            .collect();
        let cost = |pi: &Rational| -> Rational {
            let mut v = &w_pi * pi;
            for (bp, br, r, w) in &caps {
                let rho = pos((r - bp * pi) / br);
                v += w * rho;
            }
            v
        };
        let mut points = vec![Rational::zero()];
        for (bp, _, r, _) in &caps {
            if bp.is_positive() && r.is_positive() {
                points.push(r / bp);
            }
        }
        let inner = points.iter().map(cost).min().expect("pi = 0 is always tried");
        let value = (cut_rhs - dot_x(&cut) + inner) / a_lambda;
        if best.as_ref().is_none_or(|v| value > *v) {
            best = Some(value);
        }
    }
    best.ok_or_else(|| Error::Internal("model has no candidate blocks".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary_discrete::{a2st_discrete, arec_discrete};
    use crate::model::BudgetModel;
    use crate::rational::rat;
    use itertools::Itertools;

    fn inst(p: usize, k: usize, g: i64) -> Instance {
        let v = |s: &[i64]| s.iter().map(|&a| rat(a)).collect::<Vec<_>>();
        Instance::new(p, k, rat(g), BudgetModel::Discrete, v(&[1, 0, 3, 2]), v(&[2, 3, 1, 4]), v(&[5, 0, 4, 1])).unwrap()
    }

    #[test]
    fn rrec_structure_and_values() {
        let i = inst(2, 1, 1);
        let m = build_rrec_discrete_mip(&i).unwrap();
        let s = m.pairs.len();
        assert_eq!(m.lp.var_count(), 1 + i.n + s * (1 + i.n));
        assert_eq!(m.lp.rows.len(), 1 + s * (1 + i.n));
        for items in (0..i.n).combinations(2) {
            let x = SelectionSolution::from_items(&items, &i.first_stage_cost);
            let want = &x.value + arec_discrete(&i, &x).unwrap().0;
            assert_eq!(evaluate_fixed_x(&m, &x).unwrap(), want, "{items:?}");
        }
        let x = SelectionSolution::from_items(&[0], &i.first_stage_cost);
        assert!(evaluate_fixed_x(&m, &x).is_err());
        assert!(matches!(build_rrec_discrete_mip(&inst(2, 0, 1)), Err(Error::TrivialCase)));
    }

    #[test]
    fn r2st_structure_and_values() {
        let i = inst(2, 0, 2);
        let m = build_r2st_discrete_mip(&i).unwrap();
        assert!(m.blocks.len() <= 2 * i.n + 1);
        for size in 0..=2 {
            for items in (0..i.n).combinations(size) {
                let x = SelectionSolution::from_items(&items, &i.first_stage_cost);
                let want = &x.value + a2st_discrete(&i, &x).unwrap().0;
                assert_eq!(evaluate_fixed_x(&m, &x).unwrap(), want, "{items:?}");
            }
        }
    }
}
