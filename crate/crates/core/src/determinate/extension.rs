// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

//! Adding a non-member proposition to a determinate sublattice.
//!
//! When D has a single projected ray ψ (as for R = I) the extension is
//! carried out constructively. Write r for the unit vector along `P_V ψ`
//! and k for its normalized component orthogonal to ψ, so `ψ ∨ k` is a
//! member of D and `v0 = V ∧ (ψ ∨ k)` is the ray through r. Then:
//!
//! * every ray x in v0⊥ is `(ψ ∨ k_x) ∧ v0⊥` with `k_x ∝ x − ⟨ψ|x⟩ψ ∈ K`;
//! * every ray t outside the plane `ψ ∨ r` is `((t⊥ ∧ K) ∨ (t⊥ ∧ v0⊥))⊥`,
//!   where `t⊥ ∧ K` is a member and `t⊥ ∧ v0⊥` is a join of rays of the
//!   previous kind.
//!
//! Applying this to a Kochen-Specker ray set (rotated if one of its rays
//! falls in that plane) yields, by explicit lattice operations, a finite set
//! of elements in the generated lattice on which no 2-valued map exists. For
//! other D the generators plus V are run through bounded closure instead.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::DeterminateSublattice;
use crate::exec::Exec;
use crate::lattice::{closure, Subspace};
use crate::linalg::{random, ComplexVector, Operator, Tolerance};
use crate::nogo::{find_assignment_bounded, ks_witness, RaySet, SearchOutcome};
use crate::{Error, Result};

const ROTATION_ATTEMPTS: u64 = 8;
const SEARCH_NODE_LIMIT: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExtensionVerdict {
    /// No 2-valued homomorphism survives the extension.
    Contradiction,
    /// None found within the budget; `depth` is how far the construction got.
    Inconclusive { depth: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExtensionMethod {
    Derivation,
    Closure,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionReport {
    pub verdict: ExtensionVerdict,
    pub method: ExtensionMethod,
    /// Distinct lattice elements produced, generators included.
    pub elements: usize,
    pub depth: usize,
    pub rays: usize,
    pub contexts: usize,
    /// Size of the unsatisfiable context core, when a contradiction is found.
    pub core: usize,
}

/// Extends D by `v` and looks for a Kochen-Specker obstruction among the
/// resulting elements, producing at most `budget` of them.
pub fn extend_and_check(d: &DeterminateSublattice, v: &Subspace, budget: usize, exec: Exec) -> Result<ExtensionReport> {
    if d.contains(v)? {
        return Err(Error::AlreadyMember);
    }
    if d.ambient_dim() < 3 {
        return Err(Error::InvalidParameter("extension check needs dimension at least 3".into()));
    }
    if d.rays().len() == 1 {
        derive(d, v, budget, exec)
    } else {
        close(d, v, budget, exec)
    }
}

/// Distinct elements with the number of lattice operations behind each.
struct Ledger {
    elements: Vec<Subspace>,
    budget: usize,
    depth: usize,
    tol: Tolerance,
}

struct OverBudget;

impl Ledger {
    fn record(&mut self, s: &Subspace, depth: usize) -> std::result::Result<(), OverBudget> {
        self.depth = self.depth.max(depth);
        if !self.elements.iter().any(|e| e.same_as(s, self.tol)) {
            if self.elements.len() == self.budget {
                return Err(OverBudget);
            }
            self.elements.push(s.clone());
        }
        Ok(())
    }
}

/// Elements produced while deriving one target ray.
struct Steps {
    produced: Vec<(Subspace, usize)>,
    ray: ComplexVector,
}

fn derive(d: &DeterminateSublattice, v: &Subspace, budget: usize, exec: Exec) -> Result<ExtensionReport> {
    let tol = d.tolerance();
    let n = d.ambient_dim();
    let psi = &d.rays()[0].vector;
    let k_space = d.complement();

    let along_v = v.projector().act(psi);
    let k = (&along_v - &psi.scale(psi.inner(&along_v))).normalized()?;
    let psi_k = Subspace::span(&[psi.clone(), k], n, tol)?;
    let v0 = v.meet(&psi_k, tol)?;
    if v0.rank() != 1 {
        return Err(Error::InvalidParameter(format!("V ∧ (ψ ∨ k) has rank {}", v0.rank())));
    }
    let v0_perp = v0.orthocomplement(tol);

    let mut ledger = Ledger { elements: Vec::new(), budget, depth: 0, tol };
    let base: [(&Subspace, usize); 6] = [
        (&Subspace::zero(n), 0),
        (&Subspace::full(n), 0),
        (&d.ray_span, 0),
        (k_space, 0),
        (v, 0),
        (&psi_k, 0),
    ];
    let seeded = base.iter().try_for_each(|(s, dep)| ledger.record(s, *dep)).is_ok()
        && ledger.record(&v0, 1).is_ok()
        && ledger.record(&v0_perp, 2).is_ok();
    if !seeded {
        return Ok(inconclusive(ExtensionMethod::Derivation, &ledger));
    }

    let witness = ks_witness(n).expect("dimension at least 3");
    for attempt in 0..ROTATION_ATTEMPTS {
        let targets: Vec<ComplexVector> = if attempt == 0 {
            witness.clone()
        } else {
            let u: Operator = random::unitary(n, &mut ChaCha8Rng::seed_from_u64(attempt));
            witness.iter().map(|t| u.act(t)).collect()
        };
        let derived = exec.map(&targets, |t| derive_ray(t, psi, k_space, &v0_perp, tol));
        let Some(steps) = derived.into_iter().collect::<Result<Option<Vec<Steps>>>>()? else {
            continue;
        };

        let mut trial = Ledger { elements: ledger.elements.clone(), budget, depth: ledger.depth, tol };
        let within = steps
            .iter()
            .flat_map(|s| s.produced.iter())
            .try_for_each(|(s, dep)| trial.record(s, *dep))
            .is_ok();
        if !within {
            return Ok(inconclusive(ExtensionMethod::Derivation, &trial));
        }
        let rays: Vec<ComplexVector> = steps.into_iter().map(|s| s.ray).collect();
        return search(&rays, ExtensionMethod::Derivation, &trial, tol);
    }
    Ok(inconclusive(ExtensionMethod::Derivation, &ledger))
}

/// Builds target ray `t` from D members and v0⊥; `None` if `t` is in the
/// degenerate plane or the construction loses rank numerically.
fn derive_ray(
    t: &ComplexVector,
    psi: &ComplexVector,
    k_space: &Subspace,
    v0_perp: &Subspace,
    tol: Tolerance,
) -> Result<Option<Steps>> {
    let n = t.dim();
    let t_ray = Subspace::ray(t, tol)?;
    let t_perp = t_ray.orthocomplement(tol);
    let a_t = t_perp.meet(k_space, tol)?;
    let b_t = t_perp.meet(v0_perp, tol)?;
    if b_t.rank() != n - 2 {
        return Ok(None);
    }

    let mut produced = vec![(a_t.clone(), 0)];
    let mut joined = Subspace::zero(n);
    for x in b_t.basis() {
        let kx = (x - &psi.scale(psi.inner(x))).normalized()?;
        let plane = Subspace::span(&[psi.clone(), kx], n, tol)?;
        let xr = plane.meet(v0_perp, tol)?;
        if xr.rank() != 1 {
            return Ok(None);
        }
        joined = joined.join(&xr, tol)?;
        produced.push((plane, 0));
        produced.push((xr, 3));
        produced.push((joined.clone(), 4));
    }
    let hyper = a_t.join(&joined, tol)?;
    if hyper.rank() != n - 1 {
        return Ok(None);
    }
    let derived = hyper.orthocomplement(tol);
    if !derived.same_as(&t_ray, tol) {
        return Ok(None);
    }
    produced.push((hyper, 5));
    produced.push((derived.clone(), 6));
    Ok(Some(Steps { produced, ray: derived.basis()[0].clone() }))
}

fn close(d: &DeterminateSublattice, v: &Subspace, budget: usize, exec: Exec) -> Result<ExtensionReport> {
    let tol = d.tolerance();
    let mut gens = d.generators()?;
    gens.push(v.clone());
    let set = match closure(&gens, budget, tol, exec) {
        Ok(set) => set,
        Err(Error::BudgetExceeded { partial, .. }) => *partial,
        Err(e) => return Err(e),
    };
    let ledger = Ledger { elements: set.elements().to_vec(), budget, depth: set.closure_depth, tol };
    let rays: Vec<ComplexVector> = set.rays().map(|r| r.basis()[0].clone()).collect();
    search(&rays, ExtensionMethod::Closure, &ledger, tol)
}

fn search(rays: &[ComplexVector], method: ExtensionMethod, ledger: &Ledger, tol: Tolerance) -> Result<ExtensionReport> {
    let mut report = inconclusive(method, ledger);
    if rays.is_empty() {
        return Ok(report);
    }
    let rs = RaySet::new(rays, tol)?;
    report.rays = rs.len();
    report.contexts = rs.contexts().len();
    if let Some(SearchOutcome::NoAssignment { core }) = find_assignment_bounded(&rs, SEARCH_NODE_LIMIT, tol)? {
        report.verdict = ExtensionVerdict::Contradiction;
        report.core = core.len();
    }
    Ok(report)
}

fn inconclusive(method: ExtensionMethod, ledger: &Ledger) -> ExtensionReport {
    ExtensionReport {
        verdict: ExtensionVerdict::Inconclusive { depth: ledger.depth },
        method,
        elements: ledger.elements.len(),
        depth: ledger.depth,
        rays: 0,
        contexts: 0,
        core: 0,
    }
}
