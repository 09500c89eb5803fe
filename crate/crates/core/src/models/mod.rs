//! Concrete specification families.

mod ar;
pub mod config;
mod dary;
mod finite_order;

pub use ar::{hurwitz_zeta, BinaryArSpec, CoefficientTail, Link, LinkFunction, DEFAULT_K_ENUM};
pub use dary::{dary_perfect_marginal, dary_trajectory, replay, DaryState, DaryStep};
pub use finite_order::{context_index, context_of, FiniteOrderSpec};
