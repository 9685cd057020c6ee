// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::DVector;

use super::{ComplexVector, Tolerance, C64};

/// Orthonormal basis for the span of `vectors`, processed in input order.
///
/// Modified Gram-Schmidt with one re-orthogonalization pass. A vector whose
/// residual norm falls below `eps` times the largest input norm is treated as
/// linearly dependent and dropped. Each output has its first component above
/// `eps` made real positive.
pub fn orthonormalize(vectors: &[ComplexVector], tol: Tolerance) -> Vec<ComplexVector> {
    let scale = vectors.iter().map(ComplexVector::norm).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let threshold = tol.eps * scale;
    let mut basis: Vec<DVector<C64>> = Vec::new();
    for v in vectors {
        let mut r = v.as_dvector().clone();
        for _ in 0..2 {
            for q in &basis {
                let c = q.dotc(&r);
                r.axpy(-c, q, C64::new(1.0, 0.0));
            }
        }
        let n = r.norm();
        if n > threshold {
            basis.push(r.unscale(n));
        }
    }
    basis
        .into_iter()
        .map(|b| fix_phase(ComplexVector(b), tol))
        .collect()
}

/// Multiplies `v` by the unit phase that makes its first component with
/// modulus above `eps` real and positive.
pub fn fix_phase(v: ComplexVector, tol: Tolerance) -> ComplexVector {
    match v.amplitudes().iter().find(|c| c.norm() > tol.eps) {
        Some(c) => {
            let phase = c.conj() / c.norm();
            v.scale(phase)
        }
        None => v,
    }
}
