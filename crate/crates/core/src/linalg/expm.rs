// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::DMatrix;

use super::{Operator, Tolerance, C64};
use crate::Result;

/// Matrix exponential by scaling and squaring with a Taylor kernel.
pub fn expm(a: &Operator) -> Operator {
    let m = a.as_dmatrix();
    let n = m.nrows();
    let norm = m.norm();
    // scale so that ||A / 2^s|| <= 1/2
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = m * C64::new(0.5f64.powi(s), 0.0);
    let mut result = DMatrix::<C64>::identity(n, n);
    let mut term = DMatrix::<C64>::identity(n, n);
    for k in 1..=40 {
        term = &term * &scaled * C64::new(1.0 / k as f64, 0.0);
        result += &term;
        if term.norm() <= f64::EPSILON * result.norm() {
            break;
        }
    }
    for _ in 0..s {
        result = &result * &result;
    }
    Operator(result)
}

/// exp(−i·H·dt) for Hermitian `h`.
pub fn unitary_propagator(h: &Operator, dt: f64, tol: Tolerance) -> Result<Operator> {
    h.check_hermitian(tol)?;
    Ok(expm(&h.scale(C64::new(0.0, -dt))))
}
