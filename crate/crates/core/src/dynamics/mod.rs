// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dual dynamics: Schrödinger evolution of ψ(t), the determinate sublattice
//! it induces at each step, and a stochastic jump process for the property
//! state whose single-time marginals follow the Born weights.

mod jump;

use crate::determinate::{DeterminateSublattice, ObservableSpec};
use crate::linalg::{unitary_propagator, ComplexVector, Operator, Tolerance};
use crate::{Error, Result};

pub use jump::{export_rows, jump_process, sample_marginals, EnsembleMarginals, JumpKernel, PropertyTrajectory};

/// Default number of steps used when `H = 0` and no natural scale exists.
const FLAT_STEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct EvolutionSpec {
    hamiltonian: Operator,
    dt: f64,
    steps: usize,
}

impl EvolutionSpec {
    pub fn new(hamiltonian: Operator, dt: f64, steps: usize, tol: Tolerance) -> Result<Self> {
        hamiltonian.check_hermitian(tol)?;
        if !(dt.is_finite() && dt > 0.0) || !(dt * steps as f64).is_finite() {
            return Err(Error::InvalidParameter(format!("time step must be positive and finite, got {dt}")));
        }
        Ok(EvolutionSpec { hamiltonian, dt, steps })
    }

    /// Covers `[0, duration]` with `dt ≈ 0.01 / ‖H‖`, shrunk so the steps
    /// land exactly on `duration`.
    pub fn over(hamiltonian: Operator, duration: f64, tol: Tolerance) -> Result<Self> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(Error::InvalidParameter(format!("duration must be positive, got {duration}")));
        }
        let norm = hamiltonian.spectral_norm();
        let steps = if norm <= tol.eps { FLAT_STEPS } else { (duration * norm / 0.01 - 1e-9).ceil().max(1.0) as usize };
        EvolutionSpec::new(hamiltonian, duration / steps as f64, steps, tol)
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.steps
    }
}

/// ψ(t) and D(ψ(t), R) on the grid `t_k = k·dt`, plus the midpoint states
/// used to integrate probability currents.
#[derive(Debug, Clone)]
pub struct PossibilityTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<ComplexVector>,
    pub midpoints: Vec<ComplexVector>,
    pub sublattices: Vec<DeterminateSublattice>,
    spec: EvolutionSpec,
    observable: ObservableSpec,
    tol: Tolerance,
}

impl PossibilityTrajectory {
    pub fn spec(&self) -> &EvolutionSpec {
        &self.spec
    }

    pub fn observable(&self) -> &ObservableSpec {
        &self.observable
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    /// `‖P_i ψ(t_k)‖²` for every eigenspace, including empty ones.
    pub fn weights(&self, step: usize) -> Vec<f64> {
        eigen_weights(&self.observable, &self.states[step])
    }

    /// Largest deviation of ‖ψ(t_k)‖ from 1.
    pub fn norm_drift(&self) -> f64 {
        self.states.iter().map(|s| (s.norm() - 1.0).abs()).fold(0.0, f64::max)
    }
}

pub(crate) fn eigen_weights(r: &ObservableSpec, psi: &ComplexVector) -> Vec<f64> {
    r.eigenspaces().iter().map(|e| e.subspace.weight_of(psi)).collect()
}

pub fn evolve_possibility(
    psi0: &ComplexVector,
    observable: &ObservableSpec,
    spec: &EvolutionSpec,
    tol: Tolerance,
) -> Result<PossibilityTrajectory> {
    let h = spec.hamiltonian();
    if h.dim() != psi0.dim() {
        return Err(Error::DimMismatch { expected: h.dim(), actual: psi0.dim() });
    }
    let step = unitary_propagator(h, spec.dt(), tol)?;
    let half = unitary_propagator(h, spec.dt() / 2.0, tol)?;

    let mut states = Vec::with_capacity(spec.steps() + 1);
    let mut midpoints = Vec::with_capacity(spec.steps());
    states.push(psi0.clone());
    for k in 0..spec.steps() {
        let cur = &states[k];
        midpoints.push(half.act(cur));
        let next = step.act(cur);
        states.push(next);
    }
    // each snapshot re-checks normalization at tolerance
    let sublattices = states
        .iter()
        .map(|s| DeterminateSublattice::new(s, observable, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(PossibilityTrajectory {
        times: (0..=spec.steps()).map(|k| k as f64 * spec.dt()).collect(),
        states,
        midpoints,
        sublattices,
        spec: spec.clone(),
        observable: observable.clone(),
        tol,
    })
}
