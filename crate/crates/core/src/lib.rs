//! Size-biased distributions.
//!
//! A nonnegative `X` with mean `a > 0` has size-biased law `X*` with
//! `P(X* in dx) = x P(X in dx) / a`. This crate computes that transform
//! exactly for finite atom tables and grid densities, and builds on it:
//! sums and products of independent terms, compound Poisson laws and an
//! infinite divisibility test, orbit laws sharing the lognormal moments,
//! Midzuno ratio sampling, a Skorohod embedding and Poisson approximation
//! bounds.
//!
//! The `examples/` directory has one runnable program per capability.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod dist;
pub mod error;
pub mod inf_div;
pub mod lognormal;
pub mod midzuno;
pub mod rng;
pub mod stats;
pub mod stochastic;
pub mod sum_bias;

pub use dist::{DiscreteDist, GridDensity, NamedDist};
pub use error::{Error, Result};
