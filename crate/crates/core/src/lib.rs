//! Expected-loss analysis of a malicious expert inside a two-expert (and
//! K-expert) multiplicative-weights forecaster.
//!
//! The crate is split into the model dynamics ([`model`]), offline adversary
//! policies ([`policies`]), exact evaluation of offline policies
//! ([`exact_eval`]) and the optimal online adversary ([`online_dp`]).

pub mod error;
pub mod exact_eval;
pub mod model;
pub mod online_dp;
pub mod policies;

pub use error::{Error, Result};
