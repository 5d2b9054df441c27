//! Exact solvers for the robust selection problem under budgeted uncertainty.
//!
//! Covers the incremental, adversarial, recoverable robust and two-stage robust
//! variants for continuous and discrete budgets. All arithmetic is exact.

pub mod adversary_continuous;
pub mod adversary_discrete;
pub mod error;
pub mod generator;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod rational;
pub mod robust_continuous;
pub mod robust_discrete;
pub mod selection;

pub use error::{Error, Result};
pub use model::{BudgetModel, Problem, Instance, Scenario, SelectionSolution};
pub use rational::Rational;
