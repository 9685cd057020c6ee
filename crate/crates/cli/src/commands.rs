// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::SQRT_2;
use std::path::Path;

use qpt_core::determinate::{build_determinate, extend_and_check, DeterminateSublattice, ExtensionVerdict, ObservableSpec};
use qpt_core::dynamics::{evolve_possibility, export_rows, sample_marginals, EvolutionSpec, JumpKernel};
use qpt_core::exec::Exec;
use qpt_core::lattice::{Subspace, DEFAULT_CLOSURE_BUDGET};
use qpt_core::linalg::{pauli, random};
use qpt_core::nogo::{
    born_table, chsh_lhv_bound, chsh_value, find_assignment, local_map_search, parse_rays, spin_rays, ChshSetting,
    LocalModel, RaySet, SearchOutcome,
};
use qpt_core::scenarios::{
    correspondence_scenario, decoherence_scenario, epr_scenario, teleportation_scenario, DecoherenceParams,
    ScenarioReport, TeleportSetup,
};
use qpt_core::{ComplexVector, Tolerance, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::args::{CliConfig, Command, ObservableKind};
use crate::output::CliError;

/// Largest ambient dimension `determinate` accepts.
const MAX_DETERMINATE_DIM: usize = 64;
/// Rabi samples compared against the closed form.
const RABI_SAMPLES: usize = 10;

pub fn execute(cmd: &Command, cfg: &CliConfig) -> Result<ScenarioReport, CliError> {
    let tol = cfg.tol;
    let exec = Exec::default();
    match cmd {
        Command::Epr => Ok(epr_scenario(tol)?),
        Command::Teleport { c_plus, c_minus, runs } => {
            if *runs == 0 {
                return Err(CliError::Usage("--runs must be positive".into()));
            }
            TeleportSetup::new(*c_plus, *c_minus, tol)?;
            Ok(teleportation_scenario(*c_plus, *c_minus, cfg.seed, *runs, exec, tol)?)
        }
        Command::Decohere { n_env, theta } => {
            if !theta.is_finite() {
                return Err(CliError::Usage("--theta must be finite".into()));
            }
            Ok(decoherence_scenario(&DecoherenceParams::new(*n_env, *theta), exec, tol)?)
        }
        Command::Correspond { n_max } => Ok(correspondence_scenario(*n_max)?),
        Command::Ks { rays } => ks(rays, tol),
        Command::Chsh { alice, bob } => chsh(alice.as_deref(), bob.as_deref(), tol),
        Command::Dynamics { omega, duration, trajectories, export } => {
            dynamics(*omega, *duration, *trajectories, export.as_deref(), cfg)
        }
        Command::Determinate { dim, observable, members, extend } => {
            determinate(*dim, *observable, *members, *extend, cfg)
        }
    }
}

fn ks(path: &Path, tol: Tolerance) -> Result<ScenarioReport, CliError> {
    let input = |message: String| CliError::Input { path: path.to_path_buf(), message };
    let text = std::fs::read_to_string(path).map_err(|e| input(e.to_string()))?;
    let rays = parse_rays(&text).map_err(|e| input(e.to_string()))?;
    let rs = RaySet::new(&rays, tol).map_err(|e| input(e.to_string()))?;

    let mut rep = ScenarioReport::new("ks");
    rep.input("rays file", path.display().to_string());
    rep.input("eps", tol.eps);
    rep.derive("dimension", rs.dim(), 0.0);
    rep.derive("rays", rs.len(), 0.0);
    rep.derive("contexts", rs.contexts().len(), 0.0);
    rep.check_eq("contexts are orthonormal bases", true, rs.verify(tol).is_ok(), "pairwise inner products");

    match find_assignment(&rs, tol)? {
        SearchOutcome::Found(a) => {
            rep.derive("outcome", "Found", 0.0);
            let ones: Vec<String> = (0..rs.len()).filter(|&i| a.values[i]).map(|i| i.to_string()).collect();
            rep.derive("rays assigned 1", ones.join(","), 0.0);
            rep.check_eq("assignment certified", true, a.is_valid_for(&rs), "one ray per context, no orthogonal pair");
        }
        SearchOutcome::NoAssignment { core } => {
            rep.derive("outcome", "NoAssignment", 0.0);
            let listed: Vec<String> = core.iter().map(|c| c.to_string()).collect();
            rep.derive("witness core contexts", listed.join(","), 0.0);
            let mut core_rays: Vec<usize> = core.iter().flat_map(|&c| rs.contexts()[c].iter().copied()).collect();
            core_rays.sort_unstable();
            core_rays.dedup();
            let listed: Vec<String> = core_rays.iter().map(|r| r.to_string()).collect();
            rep.derive("witness core rays", listed.join(","), 0.0);
            let restricted = rs.restrict(&core, tol)?;
            let unsat = matches!(find_assignment(&restricted, tol)?, SearchOutcome::NoAssignment { .. });
            rep.check_eq("witness core unsatisfiable", true, unsat, "search repeated on the core alone");
        }
    }
    Ok(rep)
}

fn chsh(alice: Option<&[f64]>, bob: Option<&[f64]>, tol: Tolerance) -> Result<ScenarioReport, CliError> {
    let optimal = ChshSetting::optimal();
    let pair = |v: Option<&[f64]>, default: [f64; 2]| -> Result<[f64; 2], CliError> {
        match v {
            None => Ok(default),
            Some(&[a, b]) if a.is_finite() && b.is_finite() => Ok([a, b]),
            Some(_) => Err(CliError::Usage("analyzer angles must be two finite numbers".into())),
        }
    };
    let setting = ChshSetting {
        alice_angles: pair(alice, optimal.alice_angles)?,
        bob_angles: pair(bob, optimal.bob_angles)?,
    };
    let singlet = ComplexVector::from_real(&[0.0, 1.0 / SQRT_2, -1.0 / SQRT_2, 0.0])?;

    let lhv = chsh_lhv_bound();
    let s = chsh_value(&singlet, &setting)?;
    let ra = spin_rays(&setting.alice_angles, tol)?;
    let rb = spin_rays(&setting.bob_angles, tol)?;
    let table = born_table(&singlet, &ra, &rb)?;
    let local = local_map_search(&ra, &rb, &table, tol)?;
    let local_exists = matches!(local, LocalModel::Satisfiable { .. });

    let mut rep = ScenarioReport::new("chsh");
    rep.input("alice angles", setting.alice_angles.to_vec());
    rep.input("bob angles", setting.bob_angles.to_vec());
    rep.input("eps", tol.eps);
    rep.derive("LHV bound", lhv, 0.0);
    rep.derive("singlet CHSH value", s, tol.eps);
    rep.derive("local model", if local_exists { "Satisfiable" } else { "Unsatisfiable" }, 0.0);

    rep.check_close("LHV bound over deterministic strategies", 2.0, lhv, 0.0, "16 strategies enumerated");
    rep.check_at_most("Tsirelson bound", 2.0 * SQRT_2 + tol.eps, s, "singlet correlator");
    if setting == optimal {
        rep.check_close("optimal-angle singlet value", 2.0 * SQRT_2, s, tol.eps, "-cos(a - b) correlator");
    }
    rep.check_eq("local model exists iff CHSH <= 2", s <= 2.0 + tol.eps, local_exists, "feasibility search");
    Ok(rep)
}

fn dynamics(
    omega: f64,
    duration: f64,
    trajectories: usize,
    export: Option<&Path>,
    cfg: &CliConfig,
) -> Result<ScenarioReport, CliError> {
    if !(omega.is_finite() && duration.is_finite() && duration > 0.0) {
        return Err(CliError::Usage("--omega must be finite and --duration positive".into()));
    }
    if trajectories == 0 {
        return Err(CliError::Usage("--trajectories must be positive".into()));
    }
    let tol = cfg.tol;
    let z = ObservableSpec::from_basis(&[ComplexVector::basis(2, 0), ComplexVector::basis(2, 1)], tol)?;
    let h = pauli::x().scale(C64::new(omega / 2.0, 0.0));
    let spec = EvolutionSpec::over(h, duration, tol)?;
    let traj = evolve_possibility(&ComplexVector::basis(2, 0), &z, &spec, tol)?;
    let kernel = JumpKernel::new(&traj)?;
    let marginals = sample_marginals(&kernel, trajectories, cfg.seed, Exec::default())?;

    if let Some(path) = export {
        let prop = kernel.sample(cfg.seed, 0)?;
        std::fs::write(path, export_rows(&traj, &prop, ','))
            .map_err(|source| CliError::Output { path: path.to_path_buf(), source })?;
    }

    let mut rep = ScenarioReport::new("dynamics");
    rep.input("omega", omega);
    rep.input("duration", duration);
    rep.input("trajectories", trajectories);
    rep.input("seed", cfg.seed);
    rep.input("eps", tol.eps);
    rep.derive("dt", spec.dt(), 0.0);
    rep.derive("steps", spec.steps(), 0.0);
    rep.derive("max jump rate", kernel.max_rate(), tol.eps);
    rep.derive("clamped rows", kernel.clamped_rows(), 0.0);
    rep.derive("jumps", marginals.jumps, 0.0);

    rep.check_at_most("norm drift", tol.eps * spec.steps() as f64, traj.norm_drift(), "unitary steps");
    rep.check_at_most(
        "per-step jump probability",
        spec.dt() * kernel.max_rate() + f64::EPSILON,
        kernel.max_jump_probability(),
        "dt times the largest rate",
    );
    // two outcomes: 4 sigma of a binomial frequency is at most 2/sqrt(n)
    let bound = 2.0 / (trajectories as f64).sqrt();
    let last = traj.times.len() - 1;
    for j in 1..=RABI_SAMPLES {
        let k = j * last / RABI_SAMPLES;
        let t = traj.times[k];
        let p = [(omega * t / 2.0).cos().powi(2), (omega * t / 2.0).sin().powi(2)];
        rep.check_at_most(
            &format!("marginal TV at t = {t:.4}"),
            bound,
            marginals.total_variation(k, &p),
            "cos^2, sin^2 Rabi weights",
        );
    }
    Ok(rep)
}

fn determinate(
    dim: usize,
    kind: ObservableKind,
    members: usize,
    extend: bool,
    cfg: &CliConfig,
) -> Result<ScenarioReport, CliError> {
    if !(2..=MAX_DETERMINATE_DIM).contains(&dim) {
        return Err(CliError::Usage(format!("--dim must be in 2..={MAX_DETERMINATE_DIM}")));
    }
    if extend && dim < 3 {
        return Err(CliError::Usage("--extend needs --dim of at least 3".into()));
    }
    let tol = cfg.tol;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let psi = random::state(dim, &mut rng);
    let r = match kind {
        ObservableKind::Identity => ObservableSpec::identity(dim),
        ObservableKind::Random => ObservableSpec::from_basis(&random::frame(dim, dim, &mut rng), tol)?,
    };
    let d = build_determinate(&psi, &r, tol)?;
    let summary = d.report();

    let mut rep = ScenarioReport::new("determinate");
    rep.input("dim", dim);
    rep.input("observable", format!("{kind:?}").to_lowercase());
    rep.input("members", members);
    rep.input("seed", cfg.seed);
    rep.input("eps", tol.eps);
    rep.derive("property-state labels", summary.labels.join(","), 0.0);
    rep.derive("weights", summary.weights.clone(), tol.eps);
    rep.derive("dim K", summary.k_dim, 0.0);
    rep.derive("small complement", summary.small_complement, 0.0);

    let total: f64 = summary.weights.iter().sum();
    rep.check_close("weights sum to one", 1.0, total, tol.eps * dim as f64, "normalized state");

    let mut worst: f64 = 0.0;
    let mut all_members = true;
    for _ in 0..members {
        let v = random_member(&d, &mut rng, tol)?;
        all_members &= d.contains(&v)?;
        let (measure, _) = d.born_check(&v)?;
        worst = worst.max((measure - v.weight_of(&psi)).abs());
    }
    rep.check_eq("generated members pass the analytic test", true, all_members, "membership rank count");
    rep.check_at_most("Born measure equivalence", tol.eps, worst, "<psi|P_V|psi> against property-state measure");

    if extend {
        let v = loop {
            let v = Subspace::span(&[random::state(dim, &mut rng)], dim, tol)?;
            if !d.contains(&v)? {
                break v;
            }
        };
        let ext = extend_and_check(&d, &v, DEFAULT_CLOSURE_BUDGET, Exec::default())?;
        rep.derive("extension method", format!("{:?}", ext.method), 0.0);
        rep.derive("extension elements", ext.elements, 0.0);
        rep.derive("extension rays", ext.rays, 0.0);
        rep.derive("extension contexts", ext.contexts, 0.0);
        let verdict = match ext.verdict {
            ExtensionVerdict::Contradiction => "Contradiction".to_string(),
            ExtensionVerdict::Inconclusive { depth } => format!("Inconclusive (depth {depth})"),
        };
        rep.check_eq("extension by a non-member ray", "Contradiction", verdict, "exhaustive search on derived rays");
    }
    Ok(rep)
}

/// Random ray subset joined with a random subspace of K.
fn random_member(d: &DeterminateSublattice, rng: &mut ChaCha8Rng, tol: Tolerance) -> Result<Subspace, CliError> {
    let dim = d.ambient_dim();
    let rays: Vec<usize> = (0..d.rays().len()).filter(|_| rng.random_bool(0.5)).collect();
    let k = d.complement();
    let take = rng.random_range(0..=k.rank());
    let vs: Vec<ComplexVector> = random::frame(k.rank().max(1), take, rng)
        .iter()
        .map(|c| {
            k.basis()
                .iter()
                .zip(c.amplitudes())
                .fold(ComplexVector::zeros(dim), |acc, (b, &a)| &acc + &b.scale(a))
        })
        .collect();
    let w = Subspace::span(&vs, dim, tol)?;
    Ok(d.member(&rays, &w)?)
}
