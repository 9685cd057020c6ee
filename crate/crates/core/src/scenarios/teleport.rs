// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

//! Teleportation of a spin state from C to B through a shared singlet on
//! A and B, with Alice's Bell-basis premeasurement recorded in a five-valued
//! pointer on A (r0 idle, r1..r4 for the four Bell states) and Bob's pointer
//! fixed at r0.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ScenarioReport;
use crate::determinate::{build_determinate, DeterminateSublattice, ObservableSpec};
use crate::exec::Exec;
use crate::lattice::Subspace;
use crate::linalg::{pauli, ComplexVector, Operator, RegisterLayout, Tensor, Tolerance, C64};
use crate::{Error, Result};

const ORDER: [&str; 5] = ["spin_C", "spin_A", "spin_B", "pos_A", "pos_B"];
const FIDELITY_TOL: f64 = 1e-10;

/// Sign Alice's unitary puts on each branch; branch 1 picks up −1.
const BRANCH_SIGNS: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

/// Bell state `|i⟩` (i = 1..4) on (A, C), A the more significant factor.
pub fn bell_state(i: usize) -> ComplexVector {
    let h = FRAC_1_SQRT_2;
    let amps = match i {
        1 => [0.0, h, -h, 0.0],
        2 => [0.0, h, h, 0.0],
        3 => [h, 0.0, 0.0, -h],
        4 => [h, 0.0, 0.0, h],
        _ => panic!("Bell states are numbered 1..4, got {i}"),
    };
    ComplexVector::from_real(&amps).expect("finite")
}

/// Bob's correction `U_B(i)` for pointer reading `i` (1..4).
pub fn correction(i: usize) -> Operator {
    match i {
        1 => Operator::identity(2).scale(C64::new(-1.0, 0.0)),
        2 => Operator::from_real_rows(2, &[-1.0, 0.0, 0.0, 1.0]).expect("2x2"),
        3 => pauli::x(),
        4 => Operator::from_real_rows(2, &[0.0, 1.0, -1.0, 0.0]).expect("2x2"),
        _ => panic!("pointer readings are numbered 1..4, got {i}"),
    }
}

/// The B-spin content of branch `i` before any correction, written in terms
/// of (c₊, c₋): `[1]: (c₊, c₋)`, `[2]: (−c₊, c₋)`, `[3]: (c₋, c₊)`, `[4]: (−c₋, c₊)`.
fn decomposition_content(i: usize, c: [C64; 2]) -> ComplexVector {
    let [p, m] = c;
    let v = match i {
        1 => [p, m],
        2 => [-p, m],
        3 => [m, p],
        4 => [-m, p],
        _ => unreachable!(),
    };
    ComplexVector::new(v.to_vec()).expect("finite")
}

fn swap5(i: usize) -> Operator {
    let mut perm = [0, 1, 2, 3, 4];
    perm.swap(0, i);
    Operator::permutation(&perm).expect("permutation")
}

/// Everything fixed by (c₊, c₋): states before and after Alice's
/// premeasurement and the determinate sublattice of the latter.
#[derive(Debug, Clone)]
pub struct TeleportSetup {
    pub layout: RegisterLayout,
    pub psi: ComplexVector,
    pub phi0: ComplexVector,
    pub phi: ComplexVector,
    pub observable: ObservableSpec,
    pub d: DeterminateSublattice,
    /// `‖Φ0 − Σ_i ½ |i⟩_AC ⊗ content_i ⊗ |r0 r0⟩‖`.
    pub decomposition_error: f64,
    tol: Tolerance,
}

/// Places a state given on (A, C, B, pos_A, pos_B) into the main layout.
fn from_acb(v: &ComplexVector) -> Result<ComplexVector> {
    let aux = RegisterLayout::new([("spin_A", 2), ("spin_C", 2), ("spin_B", 2), ("pos_A", 5), ("pos_B", 1)])?;
    Ok(aux.permute(v, &ORDER)?.1)
}

impl TeleportSetup {
    pub fn new(c_plus: C64, c_minus: C64, tol: Tolerance) -> Result<Self> {
        let psi = ComplexVector::new(vec![c_plus, c_minus])?;
        psi.check_normalized(tol)?;
        let layout = RegisterLayout::new(ORDER.iter().zip([2, 2, 2, 5, 1]).map(|(n, d)| (*n, d)))?;
        let r0a = ComplexVector::basis(5, 0);
        let r0b = ComplexVector::basis(1, 0);
        let singlet_ab = ComplexVector::from_real(&[0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0])?;
        // |ψ⟩_C |singlet⟩_AB |r0⟩|r0⟩ in main order: C, A, B
        let phi0 = psi.tensor(&singlet_ab).tensor(&r0a).tensor(&r0b);

        let mut rebuilt = ComplexVector::zeros(layout.dim());
        for i in 1..=4 {
            let part = bell_state(i)
                .tensor(&decomposition_content(i, [c_plus, c_minus]))
                .tensor(&r0a)
                .tensor(&r0b)
                .scale(C64::new(0.5, 0.0));
            rebuilt = &rebuilt + &from_acb(&part)?;
        }
        let decomposition_error = rebuilt.distance(&phi0);

        let alice = (1..=4).fold(Operator::zeros(20), |acc, i| {
            let block = bell_state(i).projector().tensor(&swap5(i)).scale(C64::new(BRANCH_SIGNS[i - 1], 0.0));
            &acc + &block
        });
        let alice = layout.embed(&alice, &["spin_A", "spin_C", "pos_A"])?;
        alice.check_unitary(tol)?;
        let phi = alice.act(&phi0);

        let observable = ObservableSpec::on_factors(&layout, &["pos_A", "pos_B"], tol)?;
        let d = build_determinate(&phi, &observable, tol)?;
        Ok(TeleportSetup { layout, psi, phi0, phi, observable, d, decomposition_error, tol })
    }

    fn c(&self) -> [C64; 2] {
        [self.psi.amplitudes()[0], self.psi.amplitudes()[1]]
    }

    /// B-spin content of branch `i` after Alice's premeasurement, scaled by 2.
    pub fn branch_content(&self, i: usize) -> Result<ComplexVector> {
        let bell = bell_state(i);
        let ri = ComplexVector::basis(5, i);
        let amps = (0..2)
            .map(|b| {
                let probe = from_acb(
                    &bell.tensor(&ComplexVector::basis(2, b)).tensor(&ri).tensor(&ComplexVector::basis(1, 0)),
                )?;
                Ok(probe.inner(&self.phi) * 2.0)
            })
            .collect::<Result<Vec<_>>>()?;
        ComplexVector::new(amps)
    }

    fn pointer_label(i: usize) -> String {
        format!("pos_A={i},pos_B=0")
    }
}

/// One pass through the protocol for pointer reading `outcome` (1..4).
#[derive(Debug, Clone, Serialize)]
pub struct TeleportRun {
    pub outcome: usize,
    pub probability: f64,
    pub fidelity: f64,
    /// Phase of `⟨ψ|U_B(i)·content_i⟩` in units of π.
    pub corrected_phase: f64,
    /// `‖ρ_{C,A,pos_A}‖` change caused by Bob's correction.
    pub ac_disturbance: f64,
    pub norm_error: f64,
}

pub fn teleport_run(setup: &TeleportSetup, outcome: usize) -> Result<TeleportRun> {
    if !(1..=4).contains(&outcome) {
        return Err(Error::InvalidParameter(format!("pointer reading must be 1..4, got {outcome}")));
    }
    let tol = setup.tol;
    let layout = &setup.layout;
    let u = layout.embed(&correction(outcome), &["spin_B"])?;
    let phi_i = u.act(&setup.phi);
    let d_i = build_determinate(&phi_i, &setup.observable, tol)?;
    let label = TeleportSetup::pointer_label(outcome);
    let ray = d_i
        .rays()
        .iter()
        .find(|r| r.label == label)
        .ok_or_else(|| Error::InvalidParameter(format!("no property state for {label}")))?;
    let rho_b = layout.reduced_state(&ray.vector, &["spin_B"])?;
    let fidelity = rho_b.expectation(&setup.psi).norm();

    let corrected = correction(outcome).act(&setup.branch_content(outcome)?);
    let corrected_phase = setup.psi.inner(&corrected).arg() / PI;

    let keep = ["spin_C", "spin_A", "pos_A"];
    let ac_disturbance =
        layout.reduced_state(&setup.phi, &keep)?.frobenius_distance(&layout.reduced_state(&phi_i, &keep)?);
    let norm_error = [&setup.phi0, &setup.phi, &phi_i].iter().map(|v| (v.norm() - 1.0).abs()).fold(0.0, f64::max);
    Ok(TeleportRun { outcome, probability: ray.weight, fidelity, corrected_phase, ac_disturbance, norm_error })
}

/// Pointer readings over `runs` seeded draws (run `k` uses stream `k` of
/// `seed`); `counts[i - 1]` is the number of readings `i`.
pub fn teleport_histogram(setup: &TeleportSetup, runs: usize, seed: u64, exec: Exec) -> Result<[u64; 4]> {
    let d = &setup.d;
    let picks = exec.map_range(runs, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        d.sample_state(&mut rng).label
    });
    let mut counts = [0u64; 4];
    for label in picks {
        let i = (1..=4)
            .find(|&i| TeleportSetup::pointer_label(i) == label)
            .ok_or_else(|| Error::InvalidParameter(format!("unexpected pointer label {label}")))?;
        counts[i - 1] += 1;
    }
    Ok(counts)
}

pub fn teleportation_scenario(
    c_plus: C64,
    c_minus: C64,
    seed: u64,
    runs: usize,
    exec: Exec,
    tol: Tolerance,
) -> Result<ScenarioReport> {
    let setup = TeleportSetup::new(c_plus, c_minus, tol)?;
    let mut rep = ScenarioReport::new("teleport");
    rep.input("c_plus", format!("{c_plus}"));
    rep.input("c_minus", format!("{c_minus}"));
    rep.input("seed", seed);
    rep.input("runs", runs);
    rep.input("eps", tol.eps);

    rep.check_at_most("Bell-basis re-expression", tol.eps, setup.decomposition_error, "sum of four branches");
    for i in 1..=4 {
        let literal = decomposition_content(i, setup.c()).scale(C64::new(BRANCH_SIGNS[i - 1], 0.0));
        let err = setup.branch_content(i)?.distance(&literal);
        rep.check_at_most(&format!("branch {i} content after premeasurement"), tol.eps, err, "projection onto |i>|r_i>");
    }

    rep.check_eq("property states", 4usize, setup.d.rays().len(), "one per pointer reading");
    for s in setup.d.property_states() {
        rep.check_close(&format!("P({})", s.label), 0.25, s.probability, tol.eps, "squared branch norm 1/4");
    }

    let branch_projector = |i: usize| -> Result<Subspace> {
        let op = bell_state(i).projector().tensor(&ComplexVector::basis(5, i).projector());
        Subspace::from_projector(&setup.layout.embed(&op, &["spin_A", "spin_C", "pos_A"])?, tol)
    };
    let states = setup.d.property_states();
    for i in 1..=4 {
        let v = branch_projector(i)?;
        let truths = states.iter().map(|s| setup.d.truth_value(s, &v)).collect::<Result<Vec<_>>>()?;
        let expected: Vec<bool> =
            states.iter().map(|s| s.label == TeleportSetup::pointer_label(i)).collect();
        let as_text = |b: &[bool]| b.iter().map(|&x| if x { '1' } else { '0' }).collect::<String>();
        rep.check_eq(
            &format!("truth of |{i}>|r_{i}> across property states"),
            as_text(&expected),
            as_text(&truths),
            "ray containment",
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let drawn = setup.d.sample_state(&mut rng);
    let outcome = (1..=4).find(|&i| TeleportSetup::pointer_label(i) == drawn.label).unwrap_or(1);
    rep.derive("sampled pointer reading", outcome, 0.0);
    let mut phases = Vec::new();
    for i in 1..=4 {
        let run = teleport_run(&setup, i)?;
        phases.push(run.corrected_phase);
        rep.check_close(&format!("fidelity after U_B({i})"), 1.0, run.fidelity, FIDELITY_TOL, "<psi|rho_B|psi>");
        rep.check_at_most(&format!("U_B({i}) leaves rho_CA"), tol.eps, run.ac_disturbance, "partial trace");
        rep.check_at_most(&format!("norm preserved, reading {i}"), tol.eps, run.norm_error, "unitarity");
    }
    rep.derive("branch signs applied by Alice", BRANCH_SIGNS.to_vec(), 0.0);
    rep.derive("phase of <psi|U_B(i) content_i> / pi", phases, tol.eps);

    let counts = teleport_histogram(&setup, runs, seed, exec)?;
    rep.derive("pointer histogram", counts.iter().map(|&c| c as f64).collect::<Vec<_>>(), 0.0);
    if runs > 0 {
        let sigma = (0.25 * 0.75 / runs as f64).sqrt();
        for (i, &c) in counts.iter().enumerate() {
            rep.check_close(
                &format!("frequency of reading {}", i + 1),
                0.25,
                c as f64 / runs as f64,
                3.0 * sigma,
                "3 sigma binomial",
            );
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn bell_states_are_orthonormal() {
        for i in 1..=4 {
            for j in 1..=4 {
                let g = bell_state(i).inner(&bell_state(j)).norm();
                assert!((g - f64::from(u8::from(i == j))).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn corrections_undo_branches() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let psi = random::state(2, &mut rng);
        let c = [psi.amplitudes()[0], psi.amplitudes()[1]];
        for i in 1..=4 {
            let branch = decomposition_content(i, c).scale(C64::new(BRANCH_SIGNS[i - 1], 0.0));
            assert!(correction(i).act(&branch).distance(&psi) < 1e-14);
        }
    }

    #[test]
    fn basis_state_teleports() {
        let setup = TeleportSetup::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), tol()).unwrap();
        for i in 1..=4 {
            let run = teleport_run(&setup, i).unwrap();
            assert!((run.fidelity - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn scenario_passes_for_complex_amplitudes() {
        let h = FRAC_1_SQRT_2;
        let rep =
            teleportation_scenario(C64::new(h, 0.0), C64::new(0.0, h), 7, 2_000, Exec::default(), tol()).unwrap();
        assert!(rep.passed(), "{}", rep.to_text());
    }

    #[test]
    fn rejects_unnormalized_input() {
        assert!(matches!(
            TeleportSetup::new(C64::new(1.0, 0.0), C64::new(1.0, 0.0), tol()),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn histogram_is_mode_independent() {
        let setup = TeleportSetup::new(C64::new(0.6, 0.0), C64::new(0.8, 0.0), tol()).unwrap();
        let a = teleport_histogram(&setup, 500, 3, Exec::Sequential).unwrap();
        let b = teleport_histogram(&setup, 500, 3, Exec::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.iter().sum::<u64>(), 500);
    }
}
