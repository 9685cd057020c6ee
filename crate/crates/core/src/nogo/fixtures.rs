// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

//! Bundled Kochen-Specker ray sets. These are external witnesses from the
//! literature; orthogonality relations are re-verified on load.

use super::{parse_rays, RaySet};
use crate::linalg::Tolerance;

pub const KS18_D4: &str = include_str!("../../../../fixtures/ks18-d4.rays");
pub const PERES33_D3: &str = include_str!("../../../../fixtures/peres33-d3.rays");

fn load(text: &str, rays: usize, contexts_at_least: usize) -> RaySet {
    let tol = Tolerance::default();
    let parsed = parse_rays(text).expect("bundled fixture parses");
    let rs = RaySet::new(&parsed, tol).expect("bundled fixture is a valid ray set");
    rs.verify(tol).expect("bundled fixture contexts are orthonormal");
    assert_eq!(rs.len(), rays, "bundled fixture ray count");
    assert!(rs.contexts().len() >= contexts_at_least, "bundled fixture context count");
    rs
}

/// 18 rays, 9 bases in dimension 4.
pub fn ks18_d4() -> RaySet {
    load(KS18_D4, 18, 9)
}

/// 33 rays in dimension 3.
pub fn peres33_d3() -> RaySet {
    load(PERES33_D3, 33, 16)
}
