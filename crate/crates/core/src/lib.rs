// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

//! Finite-dimensional quantum logic.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: complex vectors, operators, register layouts, partial traces
//!   and the tolerance policy everything else relies on.
//! * [`lattice`]: the lattice of subspaces (meet, join, orthocomplement,
//!   bounded sublattice closure).
//! * [`determinate`]: the determinate sublattice of a state relative to a
//!   preferred observable, its property states and the Born-measure check.
//! * [`nogo`]: Kochen-Specker assignment search and CHSH/local-model tests.
//! * [`dynamics`]: unitary evolution of the possibility structure and the
//!   stochastic jump process for the property state.
//! * [`scenarios`]: end-to-end EPR, teleportation, decoherence and
//!   correspondence-principle drivers producing checkable reports.
//!
//! Data-parallel loops go through [`exec`], which runs on rayon when the
//! `parallel` feature is enabled and sequentially otherwise.

pub mod determinate;
pub mod dynamics;
mod error;
pub mod exec;
pub mod lattice;
pub mod linalg;
pub mod nogo;
pub mod scenarios;

pub use error::{Error, Result};
pub use linalg::{ComplexVector, Operator, RegisterLayout, Tolerance, C64};
