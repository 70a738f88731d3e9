//! Activated random walks on finite balls of `Z^d`.
//!
//! The crate is organized around the pieces needed to study non-fixation of
//! activated random walks (ARW) at densities above one:
//!
//! - [`lattice`]: balls of `Z^d`, dense site indexing and neighbor tables.
//! - [`gr`]: the envelope (instruction tape) representation of ARW, abelian
//!   stabilization under arbitrary activation orders, and executable checkers
//!   for the commutativity and monotonicity properties.
//! - [`idla`]: the embedded IDLA-like process, the coupled marking
//!   construction producing the `V`, `W`, `L` counters, and the dominating
//!   one-walk-per-site statistic `L̂`.
//! - [`potential`]: exact hitting probabilities, Green function row and
//!   expected exit times for simple random walk killed on leaving the ball.
//! - [`harness`]: Poisson initialization, Monte Carlo estimators, exact tail
//!   computations and the non-fixation certificate.
//!
//! Every random quantity is a pure function of a master seed; see
//! [`seed::derive`] for the counter scheme.

pub mod cli;
pub mod error;
pub mod gr;
pub mod harness;
pub mod idla;
pub mod io;
pub mod lattice;
pub mod potential;
pub mod seed;

pub use error::{Error, Result};
pub use lattice::{Ball, Norm, Point};
