// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use super::lp::feasible_point;
use super::search::enumerate_assignments;
use super::RaySet;
use crate::linalg::{pauli, ComplexVector, Tensor, Tolerance};
use crate::{Error, Result};

/// Spin-measurement angles in the x–z plane, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChshSetting {
    pub alice_angles: [f64; 2],
    pub bob_angles: [f64; 2],
}

impl ChshSetting {
    /// (0, π/2; π/4, 3π/4)
    pub fn optimal() -> Self {
        use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
        ChshSetting { alice_angles: [0.0, FRAC_PI_2], bob_angles: [FRAC_PI_4, 3.0 * FRAC_PI_4] }
    }
}

/// ⟨ψ| σ(a) ⊗ σ(b) |ψ⟩ for a two-qubit state.
pub fn correlator(state: &ComplexVector, a: f64, b: f64) -> Result<f64> {
    if state.dim() != 4 {
        return Err(Error::DimMismatch { expected: 4, actual: state.dim() });
    }
    let obs = pauli::spin_xz(a).tensor(&pauli::spin_xz(b));
    Ok(obs.expectation(state).re)
}

/// CHSH value of a 2×2 correlator table: the largest |S| over the four
/// placements of the minus sign, so the value does not depend on how the
/// settings are labeled.
pub fn chsh_expression(e: [[f64; 2]; 2]) -> f64 {
    let total = e[0][0] + e[0][1] + e[1][0] + e[1][1];
    [(0, 0), (0, 1), (1, 0), (1, 1)]
        .iter()
        .map(|&(x, y)| (total - 2.0 * e[x][y]).abs())
        .fold(0.0, f64::max)
}

pub fn chsh_value(state: &ComplexVector, s: &ChshSetting) -> Result<f64> {
    let mut e = [[0.0; 2]; 2];
    for (x, &a) in s.alice_angles.iter().enumerate() {
        for (y, &b) in s.bob_angles.iter().enumerate() {
            e[x][y] = correlator(state, a, b)?;
        }
    }
    Ok(chsh_expression(e))
}

/// Maximum of the CHSH expression over the 16 deterministic local
/// strategies (outcomes ±1 per setting).
pub fn chsh_lhv_bound() -> f64 {
    let mut best: f64 = 0.0;
    for mask in 0u8..16 {
        let out = |bit: u8| if mask >> bit & 1 == 1 { 1.0 } else { -1.0 };
        let (a, b) = ([out(0), out(1)], [out(2), out(3)]);
        let e = [[a[0] * b[0], a[0] * b[1]], [a[1] * b[0], a[1] * b[1]]];
        best = best.max(chsh_expression(e));
    }
    best
}

/// Eigen-rays of σ(θ) for each angle, + before −: a dim-2 ray set whose
/// contexts are the measurement settings.
pub fn spin_rays(angles: &[f64], tol: Tolerance) -> Result<RaySet> {
    let mut rays = Vec::with_capacity(2 * angles.len());
    for &t in angles {
        let (s, c) = (t / 2.0).sin_cos();
        rays.push(ComplexVector::from_real(&[c, s])?);
        rays.push(ComplexVector::from_real(&[-s, c])?);
    }
    RaySet::new(&rays, tol)
}

/// Joint outcome probabilities `p[x][y][a][b]` for setting `x` of side A and
/// `y` of side B; outcome `a` is the position of the ray inside context `x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationTable {
    pub p: Vec<Vec<[[f64; 2]; 2]>>,
}

impl CorrelationTable {
    pub fn uniform(settings_a: usize, settings_b: usize) -> Self {
        CorrelationTable { p: vec![vec![[[0.25; 2]; 2]; settings_b]; settings_a] }
    }

    fn shape(&self) -> (usize, usize) {
        (self.p.len(), self.p.first().map_or(0, Vec::len))
    }
}

/// Born-rule table for a two-qubit state measured in the contexts of the
/// two ray sets.
pub fn born_table(state: &ComplexVector, rs_a: &RaySet, rs_b: &RaySet) -> Result<CorrelationTable> {
    if state.dim() != rs_a.dim() * rs_b.dim() {
        return Err(Error::DimMismatch { expected: rs_a.dim() * rs_b.dim(), actual: state.dim() });
    }
    let p = rs_a
        .contexts()
        .iter()
        .map(|ca| {
            rs_b.contexts()
                .iter()
                .map(|cb| {
                    let mut cell = [[0.0; 2]; 2];
                    for (a, &ra) in ca.iter().enumerate().take(2) {
                        for (b, &rb) in cb.iter().enumerate().take(2) {
                            let joint = rs_a.rays()[ra].tensor(&rs_b.rays()[rb]);
                            cell[a][b] = joint.inner(state).norm_sqr();
                        }
                    }
                    cell
                })
                .collect()
        })
        .collect();
    Ok(CorrelationTable { p })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum LocalModel {
    /// Convex weights over (assignment on A, assignment on B) pairs.
    Satisfiable { weights: Vec<(usize, usize, f64)> },
    Unsatisfiable,
}

const MAX_SETTINGS: usize = 4;

/// Whether a mixture of deterministic local 2-valued maps (one per side)
/// reproduces `table`.
pub fn local_map_search(rs_a: &RaySet, rs_b: &RaySet, table: &CorrelationTable, tol: Tolerance) -> Result<LocalModel> {
    let (na, nb) = (rs_a.contexts().len(), rs_b.contexts().len());
    if table.shape() != (na, nb) || table.p.iter().any(|row| row.len() != nb) {
        return Err(Error::TableShapeMismatch(format!(
            "table is {:?}, ray sets give {na}x{nb} settings",
            table.shape()
        )));
    }
    if na > MAX_SETTINGS || nb > MAX_SETTINGS {
        return Err(Error::InvalidParameter(format!("at most {MAX_SETTINGS} settings per side")));
    }
    if [rs_a, rs_b].iter().any(|rs| rs.contexts().iter().any(|c| c.len() != 2)) {
        return Err(Error::TableShapeMismatch("every setting must have two outcomes".into()));
    }

    let outcomes = |rs: &RaySet| -> Vec<Vec<usize>> {
        enumerate_assignments(rs, usize::MAX)
            .into_iter()
            .map(|asg| {
                rs.contexts()
                    .iter()
                    .map(|c| c.iter().position(|&r| asg.values[r]).expect("one ray per context"))
                    .collect()
            })
            .collect()
    };
    let (strat_a, strat_b) = (outcomes(rs_a), outcomes(rs_b));
    let vertices: Vec<(usize, usize)> =
        (0..strat_a.len()).flat_map(|i| (0..strat_b.len()).map(move |j| (i, j))).collect();

    // rows: one per (x, y, a, b) cell plus normalization
    let mut a_mat = Vec::new();
    let mut rhs = Vec::new();
    for x in 0..na {
        for y in 0..nb {
            for oa in 0..2 {
                for ob in 0..2 {
                    a_mat.push(
                        vertices
                            .iter()
                            .map(|&(i, j)| (strat_a[i][x] == oa && strat_b[j][y] == ob) as u8 as f64)
                            .collect(),
                    );
                    rhs.push(table.p[x][y][oa][ob]);
                }
            }
        }
    }
    a_mat.push(vec![1.0; vertices.len()]);
    rhs.push(1.0);

    let threshold = tol.eps.max(1e-12) * rhs.len() as f64;
    Ok(match feasible_point(&a_mat, &rhs, threshold) {
        Some(w) => LocalModel::Satisfiable {
            weights: vertices
                .iter()
                .zip(w)
                .filter(|(_, w)| *w > 0.0)
                .map(|(&(i, j), w)| (i, j, w))
                .collect(),
        },
        None => LocalModel::Unsatisfiable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, SQRT_2};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn singlet() -> ComplexVector {
        ComplexVector::from_real(&[0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0]).unwrap()
    }

    #[test]
    fn singlet_correlator_closed_form() {
        for (a, b) in [(0.0, 0.3), (1.2, -0.4), (2.0, 2.0)] {
            let e = correlator(&singlet(), a, b).unwrap();
            assert!((e + f64::cos(a - b)).abs() < 1e-14);
        }
    }

    #[test]
    fn singlet_at_optimal_angles() {
        let v = chsh_value(&singlet(), &ChshSetting::optimal()).unwrap();
        assert!((v - 2.0 * SQRT_2).abs() < 1e-9);
    }

    #[test]
    fn lhv_bound_is_two() {
        assert_eq!(chsh_lhv_bound(), 2.0);
    }

    #[test]
    fn product_state_respects_bound() {
        let plus = ComplexVector::basis(2, 0);
        let state = plus.tensor(&plus);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let angles: [f64; 4] = std::array::from_fn(|_| rand::Rng::random_range(&mut rng, 0.0..6.3));
            let s = ChshSetting { alice_angles: [angles[0], angles[1]], bob_angles: [angles[2], angles[3]] };
            assert!(chsh_value(&state, &s).unwrap() <= 2.0 + 1e-12);
        }
    }

    #[test]
    fn wrong_dimension() {
        assert!(matches!(
            chsh_value(&ComplexVector::basis(3, 0), &ChshSetting::optimal()),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn local_models() {
        let aligned = spin_rays(&[0.0, FRAC_PI_2], tol()).unwrap();
        let table = born_table(&singlet(), &aligned, &aligned).unwrap();
        // perfectly anticorrelated on matching settings
        assert!((table.p[0][0][0][1] - 0.5).abs() < 1e-14 && table.p[0][0][0][0].abs() < 1e-14);
        assert!(matches!(local_map_search(&aligned, &aligned, &table, tol()).unwrap(), LocalModel::Satisfiable { .. }));

        let s = ChshSetting::optimal();
        let ra = spin_rays(&s.alice_angles, tol()).unwrap();
        let rb = spin_rays(&s.bob_angles, tol()).unwrap();
        let table = born_table(&singlet(), &ra, &rb).unwrap();
        assert_eq!(local_map_search(&ra, &rb, &table, tol()).unwrap(), LocalModel::Unsatisfiable);

        let uniform = CorrelationTable::uniform(2, 2);
        assert!(matches!(local_map_search(&ra, &rb, &uniform, tol()).unwrap(), LocalModel::Satisfiable { .. }));

        let wrong = CorrelationTable::uniform(3, 2);
        assert!(matches!(local_map_search(&ra, &rb, &wrong, tol()), Err(Error::TableShapeMismatch(_))));
    }

    #[test]
    fn satisfiable_weights_reproduce_table() {
        let aligned = spin_rays(&[0.0, FRAC_PI_2], tol()).unwrap();
        let table = born_table(&singlet(), &aligned, &aligned).unwrap();
        let LocalModel::Satisfiable { weights } = local_map_search(&aligned, &aligned, &table, tol()).unwrap() else {
            panic!("expected satisfiable");
        };
        let total: f64 = weights.iter().map(|w| w.2).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn tsirelson_ceiling(seed in any::<u64>(), a0 in -4.0f64..4.0, a1 in -4.0f64..4.0, b0 in -4.0f64..4.0, b1 in -4.0f64..4.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let state = random::state(4, &mut rng);
            let s = ChshSetting { alice_angles: [a0, a1], bob_angles: [b0, b1] };
            prop_assert!(chsh_value(&state, &s).unwrap() <= 2.0 * SQRT_2 + 1e-9);
        }

        #[test]
        fn singlet_invariances(offset in -3.0f64..3.0, phase in 0.0f64..6.3) {
            let s = ChshSetting::optimal();
            let base = chsh_value(&singlet(), &s).unwrap();
            let shifted = ChshSetting {
                alice_angles: [s.alice_angles[0] + offset, s.alice_angles[1] + offset],
                bob_angles: [s.bob_angles[0] + offset, s.bob_angles[1] + offset],
            };
            prop_assert!((chsh_value(&singlet(), &shifted).unwrap() - base).abs() < 1e-12);
            let rotated = singlet().scale(crate::linalg::C64::from_polar(1.0, phase));
            prop_assert!((chsh_value(&rotated, &s).unwrap() - base).abs() < 1e-12);
        }
    }
}
