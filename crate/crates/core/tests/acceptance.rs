// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line
//! and then asserts.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};
use std::time::Instant;

use qpt_core::determinate::{build_determinate, extend_and_check, ExtensionVerdict, ObservableSpec};
use qpt_core::dynamics::{evolve_possibility, sample_marginals, EvolutionSpec, JumpKernel};
use qpt_core::exec::Exec;
use qpt_core::lattice::{closure, Subspace, DEFAULT_CLOSURE_BUDGET};
use qpt_core::linalg::{pauli, random};
use qpt_core::nogo::{
    born_table, chsh_lhv_bound, chsh_value, find_assignment, fixtures, local_map_search, spin_rays, ChshSetting,
    LocalModel, RaySet, SearchOutcome,
};
use qpt_core::scenarios::{
    epr_layout, epr_states, frequency_ratio, pointer_coherence, teleport_histogram, teleport_run, DecoherenceParams,
    TeleportSetup,
};
use qpt_core::{ComplexVector, Error, Tolerance, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn verdict(n: u32, name: &str, passed: bool, detail: &str) {
    let mark = if passed { "PASS" } else { "FAIL" };
    println!("criterion {n}: {mark} {name} ({detail})");
    assert!(passed, "criterion {n} failed: {detail}");
}

#[test]
fn criterion_01_teleportation_fidelity() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let psi = random::state(2, &mut rng);
        let setup = TeleportSetup::new(psi.amplitudes()[0], psi.amplitudes()[1], tol()).unwrap();
        for outcome in 1..=4 {
            let run = teleport_run(&setup, outcome).unwrap();
            worst = worst.max((run.fidelity - 1.0).abs());
        }
    }
    verdict(1, "teleportation fidelity", worst <= 1e-10, &format!("max |F - 1| = {worst:.2e} over 400 runs"));
}

#[test]
fn criterion_02_teleportation_statistics() {
    let runs = 10_000;
    let setup = TeleportSetup::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8), tol()).unwrap();
    let counts = teleport_histogram(&setup, runs, 2024, Exec::default()).unwrap();
    let sigma = (0.25 * 0.75 / runs as f64).sqrt();
    let devs: Vec<f64> = counts.iter().map(|&c| (c as f64 / runs as f64 - 0.25).abs() / sigma).collect();
    let passed = devs.iter().all(|&d| d <= 3.0);
    verdict(2, "teleportation statistics", passed, &format!("counts {counts:?}, deviations in sigma {devs:.2?}"));
}

#[test]
fn criterion_03_epr_membership_and_no_signalling() {
    let layout = epr_layout();
    let r = ObservableSpec::on_factors(&layout, &["pos1", "pos2"], tol()).unwrap();
    let (psi0, psi, _) = epr_states().unwrap();
    let before = build_determinate(&psi0, &r, tol()).unwrap();
    let after = build_determinate(&psi, &r, tol()).unwrap();
    let mut flips = true;
    for up in [0, 1] {
        let p = layout.embed(&ComplexVector::basis(2, up).projector(), &["spin2"]).unwrap();
        let v = Subspace::from_projector(&p, tol()).unwrap();
        flips &= !before.contains(&v).unwrap() && after.contains(&v).unwrap();
    }
    let rho0 = layout.reduced_state(&psi0, &["spin2", "pos2"]).unwrap();
    let rho1 = layout.reduced_state(&psi, &["spin2", "pos2"]).unwrap();
    let shift = rho0.frobenius_distance(&rho1);
    verdict(
        3,
        "EPR membership flip and no-signalling",
        flips && shift <= 1e-12,
        &format!("S2 z-spin excluded before and included after: {flips}; ||rho_B change|| = {shift:.2e}"),
    );
}

/// Random member: a random subset of the projected rays plus a random
/// subspace of K.
fn random_member(d: &qpt_core::determinate::DeterminateSublattice, rng: &mut ChaCha8Rng) -> Subspace {
    let subset: Vec<usize> = (0..d.rays().len()).filter(|_| rng.random_bool(0.5)).collect();
    let k = d.complement();
    let w = if k.rank() == 0 {
        Subspace::zero(d.ambient_dim())
    } else {
        let r = rng.random_range(0..=k.rank());
        let coeffs = random::frame(k.rank(), r, rng);
        let vs: Vec<ComplexVector> = coeffs
            .iter()
            .map(|c| {
                k.basis()
                    .iter()
                    .zip(c.amplitudes())
                    .fold(ComplexVector::zeros(d.ambient_dim()), |acc, (b, &a)| &acc + &b.scale(a))
            })
            .collect();
        Subspace::span(&vs, d.ambient_dim(), tol()).unwrap()
    };
    d.member(&subset, &w).unwrap()
}

/// Random observable on `dim`: its eigenspaces are consecutive blocks of a
/// random orthonormal basis.
fn random_observable(dim: usize, blocks: usize, rng: &mut ChaCha8Rng) -> ObservableSpec {
    let basis = random::frame(dim, dim, rng);
    let mut cuts: Vec<usize> = (1..dim).collect();
    while cuts.len() > blocks - 1 {
        cuts.remove(rng.random_range(0..cuts.len()));
    }
    let mut bounds = vec![0];
    bounds.extend(cuts);
    bounds.push(dim);
    let eigenspaces = bounds
        .windows(2)
        .enumerate()
        .map(|(i, w)| (format!("e{i}"), Subspace::span(&basis[w[0]..w[1]], dim, tol()).unwrap()))
        .collect();
    ObservableSpec::new(eigenspaces, tol()).unwrap()
}

#[test]
fn criterion_04_born_measure_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut worst: f64 = 0.0;
    for trial in 0..200 {
        let dim = 3 + trial % 6;
        let psi = random::state(dim, &mut rng);
        let r = ObservableSpec::from_basis(&random::frame(dim, dim, &mut rng), tol()).unwrap();
        let d = build_determinate(&psi, &r, tol()).unwrap();
        let v = random_member(&d, &mut rng);
        let states = d.property_states();
        let measure: f64 = states
            .iter()
            .filter(|s| d.truth_value(s, &v).unwrap())
            .map(|s| s.probability)
            .sum();
        // oracle: <psi|P_V|psi> straight from the projector
        let born = v.projector().expectation(&psi).re;
        worst = worst.max((measure - born).abs());
    }
    verdict(4, "Born-measure equivalence", worst <= 1e-10, &format!("max |measure - born| = {worst:.2e} over 200 trials"));
}

#[test]
fn criterion_05_closure_cross_validation() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let (mut checked, mut discrepancies, mut runs) = (0usize, 0usize, 0usize);
    for dim in 3..=5 {
        for blocks in [1, 2, dim] {
            for _ in 0..2 {
                let psi = random::state(dim, &mut rng);
                let r = random_observable(dim, blocks, &mut rng);
                let d = build_determinate(&psi, &r, tol()).unwrap();
                let mut gens = d.generators().unwrap();
                // sample rays of K: generators in their own right
                for _ in 0..d.complement().rank().min(2) {
                    let w = random_member(&d, &mut rng);
                    if let Some(k_ray) = w.meet(d.complement(), tol()).unwrap().basis().first() {
                        gens.push(Subspace::ray(k_ray, tol()).unwrap());
                    }
                }
                let set = match closure(&gens, DEFAULT_CLOSURE_BUDGET, tol(), Exec::default()) {
                    Ok(s) => s,
                    Err(Error::BudgetExceeded { partial, .. }) => *partial,
                    Err(e) => panic!("closure failed: {e}"),
                };
                runs += 1;
                for e in set.elements() {
                    checked += 1;
                    discrepancies += usize::from(!d.contains(e).unwrap());
                }
            }
        }
    }
    verdict(
        5,
        "closure cross-validation",
        discrepancies == 0,
        &format!("{checked} closure elements from {runs} closures, {discrepancies} discrepancies"),
    );
}

#[test]
fn criterion_06_kochen_specker() {
    let rs = fixtures::ks18_d4();
    let start = Instant::now();
    let outcome = find_assignment(&rs, tol()).unwrap();
    let elapsed = start.elapsed();
    let none = matches!(outcome, SearchOutcome::NoAssignment { .. });

    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut dim2_ok = true;
    for _ in 0..50 {
        let mut rays = Vec::new();
        for _ in 0..rng.random_range(1..6) {
            let v = random::state(2, &mut rng);
            let a = v.amplitudes();
            rays.push(ComplexVector::new(vec![-a[1].conj(), a[0].conj()]).unwrap());
            rays.push(v);
        }
        let rs2 = RaySet::new(&rays, tol()).unwrap();
        dim2_ok &= match find_assignment(&rs2, tol()).unwrap() {
            SearchOutcome::Found(a) => a.is_valid_for(&rs2),
            SearchOutcome::NoAssignment { .. } => false,
        };
    }
    verdict(
        6,
        "Kochen-Specker",
        none && elapsed.as_secs_f64() < 1.0 && dim2_ok,
        &format!("18-ray set: NoAssignment={none} in {:.1} ms; 50 dim-2 sets colorable={dim2_ok}", elapsed.as_secs_f64() * 1e3),
    );
}

#[test]
fn criterion_07_chsh() {
    let lhv = chsh_lhv_bound();
    let singlet = ComplexVector::from_real(&[0.0, 1.0 / SQRT_2, -1.0 / SQRT_2, 0.0]).unwrap();
    let s = ChshSetting { alice_angles: [0.0, FRAC_PI_2], bob_angles: [FRAC_PI_4, 3.0 * FRAC_PI_4] };
    let q = chsh_value(&singlet, &s).unwrap();
    let ra = spin_rays(&s.alice_angles, tol()).unwrap();
    let rb = spin_rays(&s.bob_angles, tol()).unwrap();
    let table = born_table(&singlet, &ra, &rb).unwrap();
    let lp = local_map_search(&ra, &rb, &table, tol()).unwrap();
    let passed = lhv == 2.0 && (q - 2.0 * SQRT_2).abs() <= 1e-9 && lp == LocalModel::Unsatisfiable;
    verdict(7, "CHSH", passed, &format!("LHV bound {lhv}, singlet {q:.12}, local model {lp:?}"));
}

#[test]
fn criterion_08_maximality() {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let (mut contradictions, mut inconclusive) = (0, Vec::new());
    let mut trial = 0;
    while trial < 20 {
        let dim = 3 + trial % 2;
        let psi = random::state(dim, &mut rng);
        let d = build_determinate(&psi, &ObservableSpec::identity(dim), tol()).unwrap();
        let rank = rng.random_range(1..dim);
        let v = Subspace::span(&random::frame(dim, rank, &mut rng), dim, tol()).unwrap();
        if d.contains(&v).unwrap() {
            continue;
        }
        trial += 1;
        let rep = extend_and_check(&d, &v, DEFAULT_CLOSURE_BUDGET, Exec::default()).unwrap();
        match rep.verdict {
            ExtensionVerdict::Contradiction => contradictions += 1,
            ExtensionVerdict::Inconclusive { depth } => inconclusive.push((dim, rank, depth, rep.elements)),
        }
    }
    verdict(
        8,
        "maximality demonstration",
        contradictions >= 19,
        &format!("{contradictions}/20 Contradiction; inconclusive (dim, rank, depth, elements): {inconclusive:?}"),
    );
}

#[test]
fn criterion_09_dynamics_meshing() {
    let z = ObservableSpec::from_basis(&[ComplexVector::basis(2, 0), ComplexVector::basis(2, 1)], tol()).unwrap();
    let omega = 1.0;
    let h = pauli::x().scale(C64::new(omega / 2.0, 0.0));
    let spec = EvolutionSpec::over(h, 3.0, tol()).unwrap();
    let traj = evolve_possibility(&ComplexVector::basis(2, 0), &z, &spec, tol()).unwrap();
    let kernel = JumpKernel::new(&traj).unwrap();
    let m = sample_marginals(&kernel, 100_000, 909, Exec::default()).unwrap();
    let last = traj.times.len() - 1;
    let mut worst: f64 = 0.0;
    for j in 1..=10 {
        let k = j * last / 10;
        let t = traj.times[k];
        // oracle: closed-form Rabi weights
        let p = [(omega * t / 2.0).cos().powi(2), (omega * t / 2.0).sin().powi(2)];
        worst = worst.max(m.total_variation(k, &p));
    }
    verdict(9, "dynamics meshing", worst <= 0.02, &format!("max TV distance {worst:.4} at 10 times, 1e5 trajectories"));
}

#[test]
fn criterion_10_decoherence() {
    let mut worst: f64 = 0.0;
    for theta in [0.3, PI / 3.0, 1.1, FRAC_PI_2, 2.5] {
        for n in 0..=30 {
            let rho = pointer_coherence(&DecoherenceParams::new(n, theta), tol()).unwrap();
            let coherence = rho.get(0, 3).norm() / 0.5;
            worst = worst.max((coherence - f64::cos(theta).abs().powi(n as i32)).abs());
        }
    }
    verdict(10, "decoherence", worst <= 1e-12, &format!("max |coherence - |cos theta|^N| = {worst:.2e}, N <= 30"));
}

#[test]
fn criterion_11_correspondence() {
    let mut violations = Vec::new();
    for n in 10..=500usize {
        for m in 1..=3usize {
            let excess = (frequency_ratio(n, m) - 1.0).abs();
            if excess > 2.0 / (n as f64 - 3.0) {
                violations.push((n, m));
            }
        }
    }
    let small_n = frequency_ratio(2, 1);
    let first = violations.first().copied();
    verdict(
        11,
        "correspondence",
        violations.is_empty() && small_n == 3.0,
        &format!(
            "ratio(2,1) = {small_n}; {} of 1473 (n, m) pairs violate |ratio-1| <= 2/(n-3), first {first:?}",
            violations.len()
        ),
    );
}
