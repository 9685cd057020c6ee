// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

use super::fixtures;
use crate::linalg::{orthonormalize, ComplexVector, Tolerance, C64};

/// A Kochen-Specker uncolorable ray set in dimension `dim` (>= 3).
///
/// Dimensions 3 and 4 use the bundled fixtures. Higher dimensions are built
/// recursively from a set `T` in dimension `n - 1`: embed `T` in the first
/// `n - 1` coordinates, add `e = e_{n-1}`, and add a second copy `T'` placed
/// in `f⊥` with `f = e_0` and rotated so that one of its rays is `e`. If
/// `e = 1` then `f = 0` and `T'` would need a coloring; if `e = 0` then `T`
/// would. Either way no assignment exists.
pub fn ks_witness(dim: usize) -> Option<Vec<ComplexVector>> {
    match dim {
        0..=2 => None,
        3 => Some(fixtures::peres33_d3().rays().to_vec()),
        4 => Some(fixtures::ks18_d4().rays().to_vec()),
        n => ks_witness(n - 1).map(|t| lift(&t, n)),
    }
}

fn lift(lower: &[ComplexVector], n: usize) -> Vec<ComplexVector> {
    let m = n - 1;
    let pad_back = |v: &ComplexVector| {
        let mut a = v.amplitudes().to_vec();
        a.push(C64::new(0.0, 0.0));
        ComplexVector::new(a).expect("finite")
    };
    let pad_front = |v: &ComplexVector| {
        let mut a = vec![C64::new(0.0, 0.0)];
        a.extend_from_slice(v.amplitudes());
        ComplexVector::new(a).expect("finite")
    };

    // unitary on C^m sending lower[0] to e_{m-1}: extend lower[0] to an
    // orthonormal basis q_0..q_{m-1}, then map q_0 -> e_{m-1}, q_j -> e_{j-1}
    let mut seed = vec![lower[0].clone()];
    seed.extend((0..m).map(|i| ComplexVector::basis(m, i)));
    let q = orthonormalize(&seed, Tolerance::default());
    debug_assert_eq!(q.len(), m);
    let rotate = |v: &ComplexVector| {
        let mut out = vec![C64::new(0.0, 0.0); m];
        for (j, qj) in q.iter().enumerate() {
            let target = if j == 0 { m - 1 } else { j - 1 };
            out[target] += qj.inner(v);
        }
        ComplexVector::new(out).expect("finite")
    };

    let mut rays: Vec<ComplexVector> = lower.iter().map(pad_back).collect();
    rays.push(ComplexVector::basis(n, n - 1));
    rays.extend(lower.iter().map(|v| pad_front(&rotate(v))));
    rays.push(ComplexVector::basis(n, 0));
    rays
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nogo::{find_assignment, RaySet, SearchOutcome};

    #[test]
    fn lifted_witness_dim5_is_uncolorable() {
        let tol = Tolerance::default();
        let rays = ks_witness(5).unwrap();
        let rs = RaySet::new(&rays, tol).unwrap();
        assert!(rs.len() <= 2 * 18 + 2);
        assert!(matches!(find_assignment(&rs, tol).unwrap(), SearchOutcome::NoAssignment { .. }));
    }

    #[test]
    fn no_witness_below_dim3() {
        assert!(ks_witness(2).is_none());
    }
}
