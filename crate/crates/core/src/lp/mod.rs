//! Dense exact linear programming.
//!
//! The solver is a two-phase bounded-variable primal simplex using Bland's rule, so
//! it terminates on the heavily degenerate problems that arise from totally
//! unimodular constraint systems.

mod builders;

pub use builders::{
    build_a2st_lp, build_arec_lp, build_nominal_rrec_lp, build_r2st_tu_subproblem, build_rrec_tu_subproblem,
    RrecSubproblem,
};
pub(crate) use builders::build_single_scenario_rrec_lp;

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Variable bounds; `None` means unbounded on that side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bound {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl Bound {
    pub fn nonneg() -> Self {
        Bound {
            lower: Some(Rational::zero()),
            upper: None,
        }
    }

    pub fn unit() -> Self {
        Bound {
            lower: Some(Rational::zero()),
            upper: Some(Rational::one()),
        }
    }

    pub fn free() -> Self {
        Bound { lower: None, upper: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpModel {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub rows: Vec<Row>,
    pub bounds: Vec<Bound>,
    pub names: Vec<String>,
}

impl LpModel {
    pub fn new(sense: Sense) -> Self {
        LpModel {
            sense,
            objective: Vec::new(),
            rows: Vec::new(),
            bounds: Vec::new(),
            names: Vec::new(),
        }
    }

    pub fn var_count(&self) -> usize {
        self.objective.len()
    }

    /// Adds a variable; rows added earlier get a zero coefficient.
    pub fn add_var(&mut self, name: impl Into<String>, bound: Bound, cost: Rational) -> usize {
        self.objective.push(cost);
        self.bounds.push(bound);
        self.names.push(name.into());
        for r in &mut self.rows {
            r.coeffs.push(Rational::zero());
        }
        self.objective.len() - 1
    }

    pub fn add_row(&mut self, terms: &[(usize, Rational)], relation: Relation, rhs: Rational) -> usize {
        let mut coeffs = vec![Rational::zero(); self.var_count()];
        for (j, a) in terms {
            coeffs[*j] += a;
        }
        self.rows.push(Row { coeffs, relation, rhs });
        self.rows.len() - 1
    }

    /// Objective value of `x`.
    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Whether `x` satisfies every row and bound.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        let bounds_ok = self.bounds.iter().zip(x).all(|(b, v)| {
            b.lower.as_ref().is_none_or(|l| v >= l) && b.upper.as_ref().is_none_or(|u| v <= u)
        });
        bounds_ok
            && self.rows.iter().all(|r| {
                let lhs: Rational = r.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
                match r.relation {
                    Relation::Le => lhs <= r.rhs,
                    Relation::Eq => lhs == r.rhs,
                    Relation::Ge => lhs >= r.rhs,
                }
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub primal: Vec<Rational>,
    pub objective: Rational,
    /// Original variables that are basic (sorted).
    pub basis: Vec<usize>,
}

impl LpSolution {
    fn without_point(status: LpStatus) -> Self {
        LpSolution {
            status,
            primal: Vec::new(),
            objective: Rational::zero(),
            basis: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Every primal value is 0 or 1.
    pub fn is_binary(&self) -> bool {
        self.primal.iter().all(|v| v.is_zero() || v.is_one())
    }
}

/// How an original variable maps onto internal nonnegative columns.
#[derive(Clone)]
enum Map {
    /// `x = offset + sign · col`.
    Single { col: usize, offset: Rational, negate: bool },
    /// `x = plus − minus`.
    Split { plus: usize, minus: usize },
}

struct Tableau {
    t: Vec<Vec<Rational>>,
    beta: Vec<Rational>,
    basis: Vec<usize>,
    row_of: Vec<Option<usize>>,
    upper: Vec<Option<Rational>>,
    at_upper: Vec<bool>,
    d: Vec<Rational>,
}

enum Step {
    Optimal,
    Unbounded,
    Moved,
}

impl Tableau {
    fn value_of(&self, j: usize) -> Rational {
        match self.row_of[j] {
            Some(r) => self.beta[r].clone(),
            None if self.at_upper[j] => self.upper[j].clone().expect("at upper implies finite"),
            None => Rational::zero(),
        }
    }

    fn reset_costs(&mut self, c: &[Rational]) {
        let ncols = self.upper.len();
        let mut d = c.to_vec();
        for (i, row) in self.t.iter().enumerate() {
            let cb = &c[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for j in 0..ncols {
                if !row[j].is_zero() {
                    d[j] -= cb * &row[j];
                }
            }
        }
        self.d = d;
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let piv = self.t[r][q].clone();
        if !piv.is_one() {
            for v in self.t[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &piv;
                }
            }
        }
        let nz: Vec<usize> = (0..self.t[r].len()).filter(|&j| !self.t[r][j].is_zero()).collect();
        let prow: Vec<(usize, Rational)> = nz.iter().map(|&j| (j, self.t[r][j].clone())).collect();
        for i in 0..self.t.len() {
            if i == r || self.t[i][q].is_zero() {
                continue;
            }
            let f = self.t[i][q].clone();
            let row = &mut self.t[i];
            for (j, a) in &prow {
                row[*j] -= &f * a;
            }
        }
        if !self.d[q].is_zero() {
            let f = self.d[q].clone();
            for (j, a) in &prow {
                self.d[*j] -= &f * a;
            }
        }
        let old = self.basis[r];
        self.row_of[old] = None;
        self.basis[r] = q;
        self.row_of[q] = Some(r);
    }

    /// One Bland step for minimization.
    fn step(&mut self) -> Step {
        let ncols = self.upper.len();
        let entering = (0..ncols).find(|&j| {
            if self.row_of[j].is_some() || self.upper[j].as_ref().is_some_and(|u| u.is_zero()) {
                return false;
            }
            (self.d[j].is_negative() && !self.at_upper[j]) || (self.d[j].is_positive() && self.at_upper[j])
        });
        let Some(q) = entering else { return Step::Optimal };
        let increasing = !self.at_upper[q];

        // (theta, leaving variable, row or None for a bound flip, leaves at upper)
        let mut best: Option<(Rational, usize, Option<usize>, bool)> = None;
        let consider = |theta: Rational, var: usize, row: Option<usize>, to_upper: bool, best: &mut Option<_>| {
            let better = match best {
                None => true,
                Some((bt, bv, _, _)) => theta < *bt || (theta == *bt && var < *bv),
            };
            if better {
                *best = Some((theta, var, row, to_upper));
            }
        };
        if let Some(u) = &self.upper[q] {
            consider(u.clone(), q, None, false, &mut best);
        }
        for i in 0..self.t.len() {
            let a = &self.t[i][q];
            if a.is_zero() {
                continue;
            }
            // basic variable changes by -a·θ when increasing q
            let moves_down = a.is_positive() == increasing;
            let b = self.basis[i];
            if moves_down {
                consider(&self.beta[i] / a.abs(), b, Some(i), false, &mut best);
            } else if let Some(u) = &self.upper[b] {
                consider((u - &self.beta[i]) / a.abs(), b, Some(i), true, &mut best);
            }
        }
        let Some((theta, _, row, to_upper)) = best else { return Step::Unbounded };

        let signed = if increasing { theta.clone() } else { -theta.clone() };
        if !theta.is_zero() {
            for i in 0..self.t.len() {
                if !self.t[i][q].is_zero() {
                    let delta = &self.t[i][q] * &signed;
                    self.beta[i] -= delta;
                }
            }
        }
        match row {
            None => {
                self.at_upper[q] = !self.at_upper[q];
            }
            Some(r) => {
                let entering_value = self.value_of(q) + &signed;
                let leaving = self.basis[r];
                self.at_upper[leaving] = to_upper;
                self.at_upper[q] = false;
                self.pivot(r, q);
                self.beta[r] = entering_value;
            }
        }
        Step::Moved
    }

    fn optimize(&mut self) -> Step {
        loop {
            match self.step() {
                Step::Moved => continue,
                other => return other,
            }
        }
    }
}

/// Solves `m` exactly. Deterministic: identical models give identical bases.
pub fn solve_lp(m: &LpModel) -> LpSolution {
    let nvar = m.var_count();
    for b in &m.bounds {
        if let (Some(l), Some(u)) = (&b.lower, &b.upper) {
            if l > u {
                return LpSolution::without_point(LpStatus::Infeasible);
            }
        }
    }
    // internal structural columns
    let mut maps = Vec::with_capacity(nvar);
    let mut upper: Vec<Option<Rational>> = Vec::new();
    let mut col_orig: Vec<usize> = Vec::new();
    for (j, b) in m.bounds.iter().enumerate() {
        match (&b.lower, &b.upper) {
            (Some(l), u) => {
                maps.push(Map::Single {
                    col: upper.len(),
                    offset: l.clone(),
                    negate: false,
                });
                upper.push(u.as_ref().map(|u| u - l));
                col_orig.push(j);
            }
            (None, Some(u)) => {
                maps.push(Map::Single {
                    col: upper.len(),
                    offset: u.clone(),
                    negate: true,
                });
                upper.push(None);
                col_orig.push(j);
            }
            (None, None) => {
                maps.push(Map::Split {
                    plus: upper.len(),
                    minus: upper.len() + 1,
                });
                upper.extend([None, None]);
                col_orig.extend([j, j]);
            }
        }
    }
    let nstruct = upper.len();
    let nslack = m.rows.iter().filter(|r| r.relation != Relation::Eq).count();
    let nrows = m.rows.len();

    // rows over structural + slack columns, rhs made nonnegative
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(nrows);
    let mut rhs: Vec<Rational> = Vec::with_capacity(nrows);
    let mut slack_of_row: Vec<Option<usize>> = Vec::with_capacity(nrows);
    let mut next_slack = nstruct;
    for r in &m.rows {
        let mut row = vec![Rational::zero(); nstruct + nslack];
        let mut b = r.rhs.clone();
        for (j, a) in r.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            match &maps[j] {
                Map::Single { col, offset, negate } => {
                    b -= a * offset;
                    row[*col] += if *negate { -a.clone() } else { a.clone() };
                }
                Map::Split { plus, minus } => {
                    row[*plus] += a;
                    row[*minus] -= a;
                }
            }
        }
        let slack = match r.relation {
            Relation::Eq => None,
            Relation::Le => {
                row[next_slack] = Rational::one();
                next_slack += 1;
                Some(next_slack - 1)
            }
            Relation::Ge => {
                row[next_slack] = -Rational::one();
                next_slack += 1;
                Some(next_slack - 1)
            }
        };
        if b.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            b = -b;
        }
        rows.push(row);
        rhs.push(b);
        slack_of_row.push(slack);
    }
    upper.extend(std::iter::repeat_n(None, nslack));

    // initial basis: a +1 slack where possible, else an artificial
    let mut basis = Vec::with_capacity(nrows);
    let mut art_rows = Vec::new();
    for (i, s) in slack_of_row.iter().enumerate() {
        match s {
            Some(s) if rows[i][*s].is_one() => basis.push(*s),
            _ => {
                basis.push(usize::MAX);
                art_rows.push(i);
            }
        }
    }
    let first_art = nstruct + nslack;
    let ncols = first_art + art_rows.len();
    for (a, &i) in art_rows.iter().enumerate() {
        basis[i] = first_art + a;
    }
    for row in rows.iter_mut() {
        row.resize(ncols, Rational::zero());
    }
    for (a, &i) in art_rows.iter().enumerate() {
        rows[i][first_art + a] = Rational::one();
    }
    upper.extend(std::iter::repeat_n(None, art_rows.len()));
    let mut row_of = vec![None; ncols];
    for (i, &b) in basis.iter().enumerate() {
        row_of[b] = Some(i);
    }
    let mut tab = Tableau {
        t: rows,
        beta: rhs,
        basis,
        row_of,
        upper,
        at_upper: vec![false; ncols],
        d: Vec::new(),
    };

    if !art_rows.is_empty() {
        let mut c1 = vec![Rational::zero(); ncols];
        for c in c1.iter_mut().skip(first_art) {
            *c = Rational::one();
        }
        tab.reset_costs(&c1);
        if let Step::Unbounded = tab.optimize() {
            return LpSolution::without_point(LpStatus::Infeasible);
        }
        let infeas: Rational = (first_art..ncols).map(|j| tab.value_of(j)).sum();
        if infeas.is_positive() {
            return LpSolution::without_point(LpStatus::Infeasible);
        }
        // drive artificials out of the basis
        for r in 0..tab.t.len() {
            if tab.basis[r] < first_art {
                continue;
            }
            if let Some(q) = (0..first_art).find(|&j| tab.row_of[j].is_none() && !tab.t[r][j].is_zero()) {
                let v = tab.value_of(q);
                let leaving = tab.basis[r];
                tab.at_upper[leaving] = false;
                tab.at_upper[q] = false;
                tab.pivot(r, q);
                tab.beta[r] = v;
            }
        }
        for j in first_art..ncols {
            tab.upper[j] = Some(Rational::zero());
        }
    }

    let sign = match m.sense {
        Sense::Min => Rational::one(),
        Sense::Max => -Rational::one(),
    };
    let mut c2 = vec![Rational::zero(); ncols];
    for (j, cj) in m.objective.iter().enumerate() {
        if cj.is_zero() {
            continue;
        }
        let c = &sign * cj;
        match &maps[j] {
            Map::Single { col, negate, .. } => c2[*col] = if *negate { -c } else { c },
            Map::Split { plus, minus } => {
                c2[*plus] = c.clone();
                c2[*minus] = -c;
            }
        }
    }
    tab.reset_costs(&c2);
    if let Step::Unbounded = tab.optimize() {
        return LpSolution::without_point(LpStatus::Unbounded);
    }

    let primal: Vec<Rational> = maps
        .iter()
        .map(|mp| match mp {
            Map::Single { col, offset, negate } => {
                let v = tab.value_of(*col);
                if *negate {
                    offset - v
                } else {
                    offset + v
                }
            }
            Map::Split { plus, minus } => tab.value_of(*plus) - tab.value_of(*minus),
        })
        .collect();
    let mut basis: Vec<usize> = tab.basis.iter().filter(|&&b| b < nstruct).map(|&b| col_orig[b]).collect();
    basis.sort_unstable();
    basis.dedup();
    LpSolution {
        status: LpStatus::Optimal,
        objective: m.evaluate(&primal),
        primal,
        basis,
    }
}
