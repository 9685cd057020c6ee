// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

//! Seeded random states, unitaries and subspaces for tests and sweeps.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use super::{ComplexVector, Operator, C64};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unit vector.
pub fn state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexVector {
    loop {
        let v = DVector::from_fn(dim, |_, _| gaussian(rng));
        let n = v.norm();
        if n > 1e-12 {
            return ComplexVector(v.unscale(n));
        }
    }
}

/// Haar-random unitary via QR of a complex Ginibre matrix.
pub fn unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    Operator(q)
}

/// Random Hermitian matrix (GUE-like).
pub fn hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    Operator((&g + g.adjoint()) * C64::new(0.5, 0.0))
}

/// First `rank` columns of a Haar-random unitary: an orthonormal frame of a
/// uniformly random `rank`-dimensional subspace.
pub fn frame<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> Vec<ComplexVector> {
    assert!(rank <= dim);
    let u = unitary(dim, rng);
    (0..rank)
        .map(|j| ComplexVector(u.as_dmatrix().column(j).into_owned()))
        .collect()
}
