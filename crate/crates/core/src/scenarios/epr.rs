// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

//! Two spin-½ systems in the singlet state, each with a three-valued
//! position pointer (index 0 = r−, 1 = r0, 2 = r+; spin index 0 = |+⟩).
//! A z-spin premeasurement on system 1 shifts its pointer to r+ or r−.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ScenarioReport;
use crate::determinate::{build_determinate, DeterminateSublattice, ObservableSpec};
use crate::dynamics::{evolve_possibility, sample_marginals, EvolutionSpec, JumpKernel};
use crate::exec::Exec;
use crate::lattice::Subspace;
use crate::linalg::{random, ComplexVector, Operator, RegisterLayout, Tensor, Tolerance, C64};
use crate::Result;

const R_MINUS: usize = 0;
const R_ZERO: usize = 1;
const R_PLUS: usize = 2;
const NO_SIGNAL_TOL: f64 = 1e-12;

pub fn epr_layout() -> RegisterLayout {
    RegisterLayout::new([("spin1", 2), ("spin2", 2), ("pos1", 3), ("pos2", 3)]).expect("valid layout")
}

fn singlet() -> ComplexVector {
    ComplexVector::from_real(&[0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0]).expect("finite")
}

fn spin_projector(up: bool) -> Operator {
    ComplexVector::basis(2, usize::from(!up)).projector()
}

fn swap3(a: usize, b: usize) -> Operator {
    let mut perm = [0, 1, 2];
    perm.swap(a, b);
    Operator::permutation(&perm).expect("permutation")
}

/// Spin-controlled pointer shift on (spin1, pos1).
fn premeasurement_local() -> Operator {
    &spin_projector(true).tensor(&swap3(R_ZERO, R_PLUS)) + &spin_projector(false).tensor(&swap3(R_ZERO, R_MINUS))
}

/// `(Ψ0, Ψ)`: before and after the premeasurement.
pub fn epr_states() -> Result<(ComplexVector, ComplexVector, Operator)> {
    let layout = epr_layout();
    let r0 = ComplexVector::basis(3, R_ZERO);
    let psi0 = singlet().tensor(&r0).tensor(&r0);
    let u = layout.embed(&premeasurement_local(), &["spin1", "pos1"])?;
    let psi = u.act(&psi0);
    Ok((psi0, psi, u))
}

fn spin2_projector(layout: &RegisterLayout, up: bool, tol: Tolerance) -> Result<Subspace> {
    Subspace::from_projector(&layout.embed(&spin_projector(up), &["spin2"])?, tol)
}

fn ray_with_label(d: &DeterminateSublattice, label: &str) -> Option<usize> {
    d.rays().iter().position(|r| r.label == label)
}

pub fn epr_scenario(tol: Tolerance) -> Result<ScenarioReport> {
    let layout = epr_layout();
    let r = ObservableSpec::on_factors(&layout, &["pos1", "pos2"], tol)?;
    let (psi0, psi, _) = epr_states()?;
    let before = build_determinate(&psi0, &r, tol)?;
    let after = build_determinate(&psi, &r, tol)?;

    let mut rep = ScenarioReport::new("epr");
    rep.input("layout", "spin1(2) x spin2(2) x pos1(3) x pos2(3)");
    rep.input("preferred observable", "pointer positions (pos1, pos2), 9 eigenspaces");
    rep.input("eps", tol.eps);

    rep.check_eq("eigenspaces of R", 9usize, r.len(), "pointer pairs 3 x 3");
    rep.check_eq("rays before", 1usize, before.rays().len(), "one nonzero projection");
    rep.check_eq("ray label before", "pos1=1,pos2=1", before.rays()[0].label.as_str(), "both pointers at r0");
    rep.check_eq("dim K before", 35usize, before.complement().rank(), "rank count 36 - 1");
    rep.check_eq("rays after", 2usize, after.rays().len(), "pointer correlated with spin 1");
    let weights: Vec<f64> = after.rays().iter().map(|r| r.weight).collect();
    for (label, ray) in after.rays().iter().map(|r| (r.label.clone(), r)) {
        rep.check_close(&format!("weight {label}"), 0.5, ray.weight, tol.eps, "squared amplitude 1/2");
    }
    rep.derive("weights after", weights, tol.eps);

    for (name, up) in [("S2 z-spin +", true), ("S2 z-spin -", false)] {
        let v = spin2_projector(&layout, up, tol)?;
        rep.check_eq(&format!("{name} in D before"), false, before.contains(&v)?, "singlet ray neither in nor orthogonal");
        rep.check_eq(&format!("{name} in D after"), true, after.contains(&v)?, "product rays lie in or orthogonal");
    }

    // branch r+ carries |+>_1|->_2
    let plus_branch = ray_with_label(&after, "pos1=2,pos2=1");
    rep.check_eq("branch pos1=r+ present", true, plus_branch.is_some(), "pointer shift on spin +");
    if let Some(i) = plus_branch {
        let s = after.property_states().swap_remove(i);
        let minus = spin2_projector(&layout, false, tol)?;
        let plus = spin2_projector(&layout, true, tol)?;
        rep.check_eq("branch r+: S2 spin - true", true, after.truth_value(&s, &minus)?, "ray lies in projector");
        rep.check_eq("branch r+: S2 spin + false", false, after.truth_value(&s, &plus)?, "ray orthogonal");
        let (measure, born) = after.born_check(&minus)?;
        rep.check_close("measure(S2 spin -)", 0.5, measure, tol.eps, "sum of selecting weights");
        rep.check_close("Born(S2 spin -)", 0.5, born, tol.eps, "<psi|P|psi>");
    }

    let rho_b0 = layout.reduced_state(&psi0, &["spin2", "pos2"])?;
    let rho_b1 = layout.reduced_state(&psi, &["spin2", "pos2"])?;
    let shift = rho_b0.frobenius_distance(&rho_b1);
    rep.derive("||rho_B before - after||", shift, NO_SIGNAL_TOL);
    rep.check_at_most("no signalling at S2", NO_SIGNAL_TOL, shift, "partial trace on both sides");

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let u_b = layout.embed(&random::unitary(2, &mut rng), &["spin2"])?;
    let rho_a0 = layout.reduced_state(&psi, &["spin1", "pos1"])?;
    let rho_a1 = layout.reduced_state(&u_b.act(&psi), &["spin1", "pos1"])?;
    rep.check_at_most(
        "S2-side unitary leaves rho_A",
        NO_SIGNAL_TOL,
        rho_a0.frobenius_distance(&rho_a1),
        "partial trace on both sides",
    );
    Ok(rep)
}

/// Continuous version of the premeasurement: `exp(−i t G)` with
/// `G = Σ_± |±⟩⟨±| ⊗ (I − S_±)/2`, which equals the pointer shift at `t = π`.
#[derive(Debug, Clone, Serialize)]
pub struct EprDynamics {
    pub labels: Vec<String>,
    pub final_weights: Vec<f64>,
    pub final_frequencies: Vec<f64>,
    pub endpoint_error: f64,
    pub trajectories: u64,
    pub steps: usize,
    pub max_total_variation: f64,
}

pub fn epr_dynamics(trajectories: usize, seed: u64, exec: Exec, tol: Tolerance) -> Result<EprDynamics> {
    let layout = epr_layout();
    let half = |a: usize, b: usize| (&Operator::identity(3) - &swap3(a, b)).scale(C64::new(0.5, 0.0));
    let g_local =
        &spin_projector(true).tensor(&half(R_ZERO, R_PLUS)) + &spin_projector(false).tensor(&half(R_ZERO, R_MINUS));
    let g = layout.embed(&g_local, &["spin1", "pos1"])?;
    let spec = EvolutionSpec::over(g, PI, tol)?;
    let r = ObservableSpec::on_factors(&layout, &["pos1", "pos2"], tol)?;
    let (psi0, psi, _) = epr_states()?;
    let traj = evolve_possibility(&psi0, &r, &spec, tol)?;
    let kernel = JumpKernel::new(&traj)?;
    let m = sample_marginals(&kernel, trajectories, seed, exec)?;
    let last = traj.times.len() - 1;
    let max_tv = (0..=last).map(|k| m.total_variation(k, &traj.weights(k))).fold(0.0, f64::max);
    Ok(EprDynamics {
        labels: m.labels.clone(),
        final_weights: traj.weights(last),
        final_frequencies: m.frequencies(last),
        endpoint_error: traj.states[last].distance(&psi),
        trajectories: m.trajectories,
        steps: spec.steps(),
        max_total_variation: max_tv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_passes() {
        let rep = epr_scenario(Tolerance::default()).unwrap();
        assert!(rep.passed(), "{}", rep.to_text());
    }

    #[test]
    fn continuous_premeasurement_splits_evenly() {
        let out = epr_dynamics(4_000, 3, Exec::default(), Tolerance::default()).unwrap();
        assert!(out.endpoint_error < 1e-9);
        let idx = |l: &str| out.labels.iter().position(|x| x == l).unwrap();
        let (plus, minus) = (idx("pos1=2,pos2=1"), idx("pos1=0,pos2=1"));
        assert!((out.final_weights[plus] - 0.5).abs() < 1e-9);
        assert!((out.final_frequencies[plus] + out.final_frequencies[minus] - 1.0).abs() < 1e-12);
        assert!((out.final_frequencies[plus] - 0.5).abs() < 0.03);
    }
}
