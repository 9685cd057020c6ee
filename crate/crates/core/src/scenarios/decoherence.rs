// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

//! A system S premeasured by a two-state pointer M, after which each of `N`
//! environment qubits is tagged by the pointer: branch m0 leaves it in |0⟩,
//! branch m1 rotates it to `cos θ|0⟩ + sin θ|1⟩`. The S+M coherence between
//! the branches is multiplied by `cos θ` per environment qubit.

use super::ScenarioReport;
use crate::determinate::{build_determinate, extend_and_check, ExtensionVerdict, ObservableSpec};
use crate::exec::Exec;
use crate::lattice::{Subspace, DEFAULT_CLOSURE_BUDGET};
use crate::linalg::{partial_trace, ComplexVector, Operator, RegisterLayout, Tensor, Tolerance, C64};
use crate::{Error, Result};

const COHERENCE_TOL: f64 = 1e-12;
/// Largest environment for the dense cross-check (state dim 4·2^N).
const DENSE_LIMIT: usize = 12;

#[derive(Debug, Clone, Copy)]
pub struct DecoherenceParams {
    pub n_env: usize,
    pub theta: f64,
    /// Amplitudes of |+⟩ and |−⟩ in the initial system state.
    pub a: C64,
    pub b: C64,
}

impl DecoherenceParams {
    pub fn new(n_env: usize, theta: f64) -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        DecoherenceParams { n_env, theta, a: h, b: h }
    }
}

/// Pointer premeasurement on (S, M): |s⟩|m0⟩ → |s⟩|m_s⟩.
fn premeasurement() -> Operator {
    Operator::permutation(&[0, 1, 3, 2]).expect("permutation")
}

fn tag_rotation(theta: f64) -> Operator {
    let (s, c) = theta.sin_cos();
    Operator::from_real_rows(2, &[c, -s, s, c]).expect("2x2")
}

/// Controlled on M = m1, rotate E.
fn tag(theta: f64) -> Operator {
    let m0 = ComplexVector::basis(2, 0).projector();
    let m1 = ComplexVector::basis(2, 1).projector();
    &m0.tensor(&Operator::identity(2)) + &m1.tensor(&tag_rotation(theta))
}

fn initial_sm(p: &DecoherenceParams, tol: Tolerance) -> Result<ComplexVector> {
    let s = ComplexVector::new(vec![p.a, p.b])?;
    s.check_normalized(tol)?;
    Ok(premeasurement().act(&s.tensor(&ComplexVector::basis(2, 0))))
}

/// Reduced S+M density operator, one environment qubit at a time: couple a
/// fresh |0⟩, then trace it out.
pub fn pointer_coherence(p: &DecoherenceParams, tol: Tolerance) -> Result<Operator> {
    let sm = initial_sm(p, tol)?;
    let layout = RegisterLayout::new([("S", 2), ("M", 2), ("E", 2)])?;
    let u = layout.embed(&tag(p.theta), &["M", "E"])?;
    let fresh = ComplexVector::basis(2, 0).projector();
    let mut rho = sm.projector();
    for _ in 0..p.n_env {
        let joint = &(&u * &rho.tensor(&fresh)) * &u.adjoint();
        rho = partial_trace(&joint, &layout, &["S", "M"], tol)?;
    }
    Ok(rho)
}

/// The same reduced state from the full pure state, built as
/// `a|+,m0⟩|0⟩^N + b|−,m1⟩|e_θ⟩^N`.
fn dense_coherence(p: &DecoherenceParams) -> Result<Operator> {
    let e0 = ComplexVector::basis(2, 0);
    let (s, c) = p.theta.sin_cos();
    let et = ComplexVector::from_real(&[c, s])?;
    let env = |v: &ComplexVector| (0..p.n_env).fold(ComplexVector::from_real(&[1.0]).expect("finite"), |acc, _| acc.tensor(v));
    let branch0 = ComplexVector::basis(4, 0).tensor(&env(&e0)).scale(p.a);
    let branch1 = ComplexVector::basis(4, 3).tensor(&env(&et)).scale(p.b);
    let psi = &branch0 + &branch1;
    let mut factors = vec![("S".to_string(), 2), ("M".to_string(), 2)];
    factors.extend((0..p.n_env).map(|k| (format!("E{k}"), 2)));
    RegisterLayout::new(factors)?.reduced_state(&psi, &["S", "M"])
}

pub fn decoherence_scenario(p: &DecoherenceParams, exec: Exec, tol: Tolerance) -> Result<ScenarioReport> {
    if !p.theta.is_finite() {
        return Err(Error::NonFinite("theta"));
    }
    let mut rep = ScenarioReport::new("decohere");
    rep.input("n_env", p.n_env);
    rep.input("theta", p.theta);
    rep.input("a", format!("{}", p.a));
    rep.input("b", format!("{}", p.b));
    rep.input("eps", tol.eps);

    let rho = pointer_coherence(p, tol)?;
    let ab = (p.a * p.b.conj()).norm();
    // (+, m0) is index 0 and (−, m1) index 3
    let off = rho.get(0, 3).norm();
    let expected = p.theta.cos().abs().powi(p.n_env as i32);
    let coherence = if ab > 0.0 { off / ab } else { 0.0 };
    rep.derive("|W[(+,m0),(-,m1)]|", off, COHERENCE_TOL);
    rep.derive("coherence |W_off| / |ab|", coherence, COHERENCE_TOL);
    rep.check_close("coherence = |cos theta|^N", expected, coherence, COHERENCE_TOL, "product of environment overlaps");
    rep.check_close("weight of (+,m0)", p.a.norm_sqr(), rho.get(0, 0).re, tol.eps, "|a|^2 untouched by tagging");
    rep.check_close("weight of (-,m1)", p.b.norm_sqr(), rho.get(3, 3).re, tol.eps, "|b|^2 untouched by tagging");

    if p.n_env <= DENSE_LIMIT {
        let dense = dense_coherence(p)?;
        rep.check_at_most(
            "sequential vs dense partial trace",
            COHERENCE_TOL,
            dense.max_abs_diff(&rho),
            "full-state partial trace",
        );
    }

    // the environment-free pointer state, extended by one branch projector
    let sm = initial_sm(p, tol)?;
    let d = build_determinate(&sm, &ObservableSpec::identity(4), tol)?;
    let branch = Subspace::ray(&ComplexVector::basis(4, 0), tol)?;
    if d.contains(&branch)? {
        rep.derive("extension check", "skipped: branch projector already determinate", 0.0);
    } else {
        let ext = extend_and_check(&d, &branch, DEFAULT_CLOSURE_BUDGET, exec)?;
        rep.derive("extension elements", ext.elements, 0.0);
        rep.derive("extension rays", ext.rays, 0.0);
        rep.check_eq(
            "adding |+,m0> to D(Phi, I) forces a contradiction",
            "Contradiction",
            match ext.verdict {
                ExtensionVerdict::Contradiction => "Contradiction".to_string(),
                ExtensionVerdict::Inconclusive { depth } => format!("Inconclusive(depth {depth})"),
            },
            "derived Kochen-Specker set, exhaustive search",
        );
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn coherence(n: usize, theta: f64) -> f64 {
        let rho = pointer_coherence(&DecoherenceParams::new(n, theta), tol()).unwrap();
        rho.get(0, 3).norm() / 0.5
    }

    #[test]
    fn no_environment_keeps_coherence() {
        assert!((coherence(0, 0.7) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_tag_kills_coherence() {
        assert!(coherence(1, FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn twenty_qubits_at_sixty_degrees() {
        assert!((coherence(20, FRAC_PI_3) - 0.5f64.powi(20)).abs() < 1e-12);
    }

    #[test]
    fn routes_agree() {
        let p = DecoherenceParams { n_env: 5, theta: 0.4, a: C64::new(0.6, 0.0), b: C64::new(0.0, 0.8) };
        let seq = pointer_coherence(&p, tol()).unwrap();
        let dense = dense_coherence(&p).unwrap();
        assert!(seq.max_abs_diff(&dense) < 1e-14);
    }

    #[test]
    fn scenario_passes() {
        let rep = decoherence_scenario(&DecoherenceParams::new(8, 0.9), Exec::default(), tol()).unwrap();
        assert!(rep.passed(), "{}", rep.to_text());
    }
}
