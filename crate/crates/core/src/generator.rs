//! Seeded random instances with integer data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{BudgetModel, Instance};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub n: usize,
    pub p: usize,
    pub k: usize,
    /// Defaults to `⌈n/4⌉` (discrete) or `⌈Σd_i/4⌉` (continuous).
    pub gamma: Option<Rational>,
    pub budget_model: BudgetModel,
    /// Inclusive ranges for `C_i`, `c̲_i` and `d_i`.
    pub first_stage: (u64, u64),
    pub nominal: (u64, u64),
    pub deviation: (u64, u64),
    pub seed: u64,
}

impl GenParams {
    pub fn new(n: usize, p: usize, k: usize, budget_model: BudgetModel, seed: u64) -> Self {
        GenParams {
            n,
            p,
            k,
            gamma: None,
            budget_model,
            first_stage: (0, 20),
            nominal: (0, 20),
            deviation: (0, 20),
            seed,
        }
    }
}

pub fn generate(g: &GenParams) -> Result<Instance> {
    for (name, (lo, hi)) in [("first_stage", g.first_stage), ("nominal", g.nominal), ("deviation", g.deviation)] {
        if lo > hi {
            return Err(Error::Precondition(format!("{name} range is empty: [{lo}, {hi}]")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mut draw = |(lo, hi): (u64, u64)| -> Vec<Rational> {
        (0..g.n).map(|_| Rational::from_integer(rng.random_range(lo..=hi).into())).collect()
    };
    let c = draw(g.first_stage);
    let lo = draw(g.nominal);
    let d = draw(g.deviation);
    let gamma = match &g.gamma {
        Some(v) => v.clone(),
        None => {
            let base: Rational = match g.budget_model {
                BudgetModel::Discrete => Rational::from_integer(g.n.into()),
                BudgetModel::Continuous => d.iter().sum(),
            };
            (base / Rational::from_integer(4.into())).ceil()
        }
    };
    Instance::new(g.p, g.k, gamma, g.budget_model, c, lo, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::serialize_instance;

    #[test]
    fn deterministic_and_valid() {
        let g = GenParams::new(10, 5, 2, BudgetModel::Discrete, 7);
        let a = serialize_instance(&generate(&g).unwrap());
        let b = serialize_instance(&generate(&g).unwrap());
        assert_eq!(a, b);
        assert_eq!(generate(&g).unwrap().gamma, Rational::from_integer(3.into()));
    }

    #[test]
    fn rejects_bad_ranges() {
        let mut g = GenParams::new(4, 2, 1, BudgetModel::Continuous, 1);
        g.nominal = (5, 1);
        assert!(generate(&g).is_err());
        g.nominal = (0, 1);
        g.p = 9;
        assert!(generate(&g).is_err());
    }
}
