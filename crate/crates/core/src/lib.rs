//! Magnon two-mode entanglement for bipartite antiferromagnets.
//!
//! The pipeline runs lattice structure factor, model validation, a two-stage
//! Bogoliubov transformation and then entanglement and EPR diagnostics. A
//! truncated Fock-space oracle cross-checks the closed forms.

// Negated comparisons reject NaN inputs along with out-of-range ones.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bogoliubov;
pub mod entanglement;
pub mod epr;
pub mod error;
pub mod fock;
pub mod lattice;
pub mod model;
pub mod output;
pub mod presets;
pub mod sweep;

pub use error::{Error, Result};
pub use lattice::{structure_factor, KPoint, Lattice, LatticeKind};
pub use model::{validate, Couplings, ModelParams};
