//! Conditional majorization uncertainty relations in the presence of quantum memory.
//!
//! The crate is organised bottom-up:
//!
//! - [`qcore`]: bipartite density matrices, projective measurements, Born-rule joint
//!   distributions, assemblages and two-qubit correlation data.
//! - [`majorization`]: the uncertainty-vector algebra (majorization predicates, the
//!   direct-sum / direct-product / vector-sum / Hadamard combiners, the lattice join,
//!   aggregation and Lorenz curves).
//! - [`cmur`]: majorized marginals, the optimal measurement strategy for the party
//!   holding the memory, the resulting least upper bound, closed forms for the qubit
//!   families, combined bounds and the single-particle comparison bound.
//! - [`entropic`]: Shannon / von Neumann entropies and the entropic consequences.
//! - [`steering`]: Carlson's symmetric integral `R_G`, the infinite-setting steering
//!   witness, the finite-setting criteria and `(ξ, p)` region scans.
//!
//! All angles are in radians and all entropies in nats.

pub mod cmur;
pub mod entropic;
mod error;
pub mod linalg;
pub mod majorization;
pub mod optim;
pub mod qcore;
pub mod steering;

pub use error::{Error, Result};
