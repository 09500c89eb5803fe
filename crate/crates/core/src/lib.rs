//! Regenerative construction and perfect simulation of stationary chains
//! with complete connections (processes whose transition law depends on the
//! whole past).
//!
//! The pipeline is:
//!
//! 1. a [`Specification`] supplies the minorants `a_k(g | w)` and a
//!    [`ThresholdSchedule`] supplies lower bounds `a*_k` of their infimum;
//! 2. a [`UniformField`] realizes the i.i.d. uniforms `U_i` as a stateless
//!    function of `(seed, i)`;
//! 3. [`engine::tau_window`] finds the regeneration time of a window and
//!    [`engine::reconstruct`] rebuilds the symbols forward from it;
//! 4. [`house_of_cards`] computes the return probabilities `rho_m` that
//!    control regeneration depths, abort bias and loss of memory.
//!
//! ```
//! use regensim::models::BinaryArSpec;
//! use regensim::{engine, UniformField};
//!
//! let spec = BinaryArSpec::linear(0.0, vec![0.3]).unwrap();
//! let schedule = spec.schedule().unwrap();
//! let field = UniformField::new(7);
//! let sample = engine::sample_window(-5, 5, &field, &spec, &schedule, 1_000).unwrap();
//! assert_eq!(sample.symbols.len(), 11);
//! assert!(sample.record.tau <= -5);
//! ```

pub mod engine;
mod error;
pub mod house_of_cards;
pub mod models;
pub mod oracle;
pub mod partition;
pub mod spec;
pub mod uniform;

pub use error::{Error, Result};
pub use spec::{
    schedule_level, Alphabet, Level, ScheduleTail, Specification, Symbol, ThresholdSchedule,
};
pub use uniform::{ExplicitUniforms, UniformField, UniformSource};
