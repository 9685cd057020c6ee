// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use crate::lattice::SublatticeSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimMismatch { expected: usize, actual: usize },

    #[error("operator is not unitary (max |U†U - I| = {deviation:.3e})")]
    NonUnitary { deviation: f64 },

    #[error("operator is not Hermitian (max |H - H†| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("not a density operator: {0}")]
    NotDensityOperator(String),

    #[error("unknown register factor `{0}`")]
    UnknownFactor(String),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("zero vector where a nonzero state is required")]
    ZeroVector,

    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("eigenprojectors do not resolve the identity: {0}")]
    NotResolutionOfIdentity(String),

    #[error("subspace is not a member of the determinate sublattice")]
    NotInSublattice,

    #[error("subspace is already a member of the determinate sublattice")]
    AlreadyMember,

    #[error("lattice closure budget of {budget} elements exceeded")]
    BudgetExceeded {
        budget: usize,
        partial: Box<SublatticeSet>,
    },

    #[error("sublattice is not closed under meet, join and complement")]
    NotClosed,

    #[error("context {index} is not an orthonormal set")]
    MalformedContext { index: usize },

    #[error("correlation table shape mismatch: {0}")]
    TableShapeMismatch(String),

    #[error("projected ray `{label}` vanished while occupied at step {step}")]
    LabelDiscontinuity { step: usize, label: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}
