#![allow(dead_code)]

use proptest::prelude::*;
use robsel::{BudgetModel, Instance, Rational, SelectionSolution};

pub fn rats(v: &[u32]) -> Vec<Rational> {
    v.iter().map(|&a| Rational::from_integer(a.into())).collect()
}

/// Raw integer data for an instance of size `n` in `lo..=hi`.
#[derive(Debug, Clone)]
pub struct Raw {
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub gamma: u32,
    pub c: Vec<u32>,
    pub lo: Vec<u32>,
    pub d: Vec<u32>,
    /// Bit pattern used to pick first-stage sets.
    pub pick: u64,
}

impl Raw {
    pub fn instance(&self, model: BudgetModel) -> Instance {
        Instance::new(
            self.p,
            self.k,
            Rational::from_integer(self.gamma.into()),
            model,
            rats(&self.c),
            rats(&self.lo),
            rats(&self.d),
        )
        .unwrap()
    }

    /// A deterministic first stage with exactly `size` items.
    pub fn x(&self, size: usize) -> SelectionSolution {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&i| ((self.pick.rotate_left(7 * i as u32)) & 0xffff, i));
        let zeros = vec![Rational::from_integer(0.into()); self.n];
        SelectionSolution::from_items(&order[..size], &zeros)
    }
}

pub fn raw(n_lo: usize, n_hi: usize, max_gamma: u32, max_cost: u32) -> impl Strategy<Value = Raw> {
    (n_lo..=n_hi).prop_flat_map(move |n| {
        (1..=n).prop_flat_map(move |p| {
            (
                0..=p,
                0..=max_gamma,
                prop::collection::vec(0..=max_cost, n),
                prop::collection::vec(0..=max_cost, n),
                prop::collection::vec(0..=max_cost, n),
                any::<u64>(),
            )
                .prop_map(move |(k, gamma, c, lo, d, pick)| Raw { n, p, k, gamma, c, lo, d, pick })
        })
    })
}

/// Every subset of `0..n` with exactly `size` items.
pub fn subsets(n: usize, size: usize) -> Vec<SelectionSolution> {
    let zeros = vec![Rational::from_integer(0.into()); n];
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == size)
        .map(|m| {
            let items: Vec<usize> = (0..n).filter(|i| m >> i & 1 == 1).collect();
            SelectionSolution::from_items(&items, &zeros)
        })
        .collect()
}
