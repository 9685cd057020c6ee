// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

//! Minimal-flux jump process.
//!
//! The Born weight of eigenspace i changes as `dp_i/dt = Σ_j J_ij` with the
//! antisymmetric current `J_ij = 2 Im⟨ψ|P_i H P_j|ψ⟩`, the flow from j into
//! i. Over one step the integrated flow `F_ij` (Simpson's rule on the start,
//! midpoint and end states) moves probability only along positive currents:
//! a property state at j jumps to i with probability `max(F_ij, 0) / p_j`.
//! The single-time marginals of the process then track the weights.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{eigen_weights, PossibilityTrajectory};
use crate::exec::Exec;
use crate::linalg::{ComplexVector, Operator};
use crate::{Error, Result};

/// Overlap below which a persisting ray counts as a different ray.
const MIN_RAY_OVERLAP: f64 = 0.5;

/// Per-step transition distributions of the jump process.
#[derive(Debug, Clone)]
pub struct JumpKernel {
    times: Vec<f64>,
    labels: Vec<String>,
    initial: Vec<f64>,
    /// `steps[k][j]`: cumulative distribution of the label after step k
    /// given label j before it; `None` where j carries no weight and has no
    /// outflow.
    steps: Vec<Vec<Option<Vec<f64>>>>,
    max_rate: f64,
    max_jump_probability: f64,
    clamped_rows: usize,
}

fn currents(r: &[Operator], h: &Operator, psi: &ComplexVector) -> Vec<Vec<f64>> {
    let proj: Vec<ComplexVector> = r.iter().map(|p| p.act(psi)).collect();
    let h_proj: Vec<ComplexVector> = proj.iter().map(|q| h.act(q)).collect();
    proj.iter()
        .map(|qi| h_proj.iter().map(|hqj| 2.0 * qi.inner(hqj).im).collect())
        .collect()
}

impl JumpKernel {
    pub fn new(traj: &PossibilityTrajectory) -> Result<Self> {
        let tol = traj.tolerance();
        let r = traj.observable();
        let m = r.len();
        let projectors: Vec<Operator> = r.eigenspaces().iter().map(|e| e.subspace.projector().clone()).collect();
        let h = traj.spec().hamiltonian();
        let dt = traj.spec().dt();

        let mut steps = Vec::with_capacity(traj.midpoints.len());
        let mut max_rate: f64 = 0.0;
        let mut max_jump: f64 = 0.0;
        let mut clamped = 0;
        for k in 0..traj.midpoints.len() {
            check_continuity(traj, k)?;
            let p = eigen_weights(r, &traj.states[k]);
            let samples =
                [&traj.states[k], &traj.midpoints[k], &traj.states[k + 1]].map(|s| currents(&projectors, h, s));
            for j_mat in &samples {
                for j in (0..m).filter(|&j| p[j] >= tol.eps) {
                    let out: f64 = (0..m).map(|i| j_mat[i][j].max(0.0)).sum();
                    max_rate = max_rate.max(out / p[j]);
                }
            }

            let mut rows = Vec::with_capacity(m);
            for j in 0..m {
                let mut probs: Vec<f64> = (0..m)
                    .map(|i| {
                        if i == j {
                            return 0.0;
                        }
                        let f = dt / 6.0 * (samples[0][i][j] + 4.0 * samples[1][i][j] + samples[2][i][j]);
                        f.max(0.0)
                    })
                    .collect();
                let outflow: f64 = probs.iter().sum();
                let row = if p[j] >= tol.eps {
                    let mut total = outflow / p[j];
                    max_jump = max_jump.max(total);
                    if total > 1.0 {
                        clamped += 1;
                        probs.iter_mut().for_each(|x| *x /= outflow);
                        total = 1.0;
                    } else {
                        probs.iter_mut().for_each(|x| *x /= p[j]);
                    }
                    probs[j] = 1.0 - total;
                    Some(probs)
                } else if outflow > 0.0 {
                    // weight gone: whoever is here must leave
                    probs.iter_mut().for_each(|x| *x /= outflow);
                    Some(probs)
                } else {
                    None
                };
                rows.push(row.map(cumulative));
            }
            steps.push(rows);
        }

        let w0 = traj.weights(0);
        let total: f64 = w0.iter().sum();
        Ok(JumpKernel {
            times: traj.times.clone(),
            labels: r.labels().into_iter().map(String::from).collect(),
            initial: cumulative(w0.into_iter().map(|w| w / total).collect()),
            steps,
            max_rate,
            max_jump_probability: max_jump,
            clamped_rows: clamped,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Largest total outgoing rate `Σ_i max(J_ij, 0) / p_j(t_k)` seen at
    /// any sample point.
    pub fn max_rate(&self) -> f64 {
        self.max_rate
    }

    /// Largest per-step jump probability; bounded by `dt · max_rate`.
    pub fn max_jump_probability(&self) -> f64 {
        self.max_jump_probability
    }

    /// Steps where outflow exceeded the available weight and was rescaled.
    pub fn clamped_rows(&self) -> usize {
        self.clamped_rows
    }

    /// Runs one trajectory, calling `visit(step, label)` at every grid time.
    /// Returns the number of jumps.
    fn walk(&self, seed: u64, stream: u64, mut visit: impl FnMut(usize, usize)) -> Result<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let mut label = draw(&self.initial, rng.random());
        visit(0, label);
        let mut jumps = 0;
        for (k, rows) in self.steps.iter().enumerate() {
            let Some(row) = &rows[label] else {
                return Err(Error::LabelDiscontinuity { step: k, label: self.labels[label].clone() });
            };
            let next = draw(row, rng.random());
            jumps += usize::from(next != label);
            label = next;
            visit(k + 1, label);
        }
        Ok(jumps)
    }

    pub fn sample(&self, seed: u64, stream: u64) -> Result<PropertyTrajectory> {
        let mut selected = Vec::with_capacity(self.times.len());
        let jumps = self.walk(seed, stream, |_, l| selected.push(l))?;
        Ok(PropertyTrajectory {
            times: self.times.clone(),
            labels: selected.iter().map(|&l| self.labels[l].clone()).collect(),
            selected,
            seed,
            stream,
            jumps,
        })
    }
}

/// Rays persisting across a step must stay close; an occupied ray may not
/// simply vanish (that case is caught while sampling).
fn check_continuity(traj: &PossibilityTrajectory, k: usize) -> Result<()> {
    let (a, b) = (&traj.sublattices[k], &traj.sublattices[k + 1]);
    for ra in a.rays() {
        if let Some(rb) = b.rays().iter().find(|rb| rb.eigenspace == ra.eigenspace) {
            if ra.vector.inner(&rb.vector).norm() < MIN_RAY_OVERLAP {
                return Err(Error::LabelDiscontinuity { step: k + 1, label: ra.label.clone() });
            }
        }
    }
    Ok(())
}

fn cumulative(mut probs: Vec<f64>) -> Vec<f64> {
    let mut acc = 0.0;
    for p in probs.iter_mut() {
        acc += *p;
        *p = acc;
    }
    probs
}

fn draw(cum: &[f64], u: f64) -> usize {
    let target = u * cum.last().copied().unwrap_or(1.0);
    cum.iter().position(|&c| target < c).unwrap_or_else(|| {
        // rounding at the top end: last label with positive mass
        let mut i = cum.len() - 1;
        while i > 0 && cum[i] == cum[i - 1] {
            i -= 1;
        }
        i
    })
}

/// One sampled history of the property state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyTrajectory {
    pub times: Vec<f64>,
    /// Eigenspace index selected at each time.
    pub selected: Vec<usize>,
    pub labels: Vec<String>,
    pub seed: u64,
    pub stream: u64,
    pub jumps: usize,
}

pub fn jump_process(traj: &PossibilityTrajectory, seed: u64) -> Result<PropertyTrajectory> {
    JumpKernel::new(traj)?.sample(seed, 0)
}

/// Label occupation counts at each grid time over an ensemble.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleMarginals {
    pub times: Vec<f64>,
    pub labels: Vec<String>,
    /// `counts[k][i]`: trajectories at label i at time k.
    pub counts: Vec<Vec<u64>>,
    pub trajectories: u64,
    pub jumps: u64,
}

impl EnsembleMarginals {
    pub fn frequencies(&self, step: usize) -> Vec<f64> {
        self.counts[step].iter().map(|&c| c as f64 / self.trajectories as f64).collect()
    }

    /// Total-variation distance between the empirical marginal at `step`
    /// and `p`.
    pub fn total_variation(&self, step: usize, p: &[f64]) -> f64 {
        0.5 * self.frequencies(step).iter().zip(p).map(|(f, q)| (f - q).abs()).sum::<f64>()
    }
}

struct Tally {
    counts: Vec<Vec<u64>>,
    jumps: u64,
    error: Option<(usize, Error)>,
}

/// Samples `n` trajectories (trajectory `i` uses stream `i` of `seed`) and
/// tallies occupations. Identical for every `exec`.
pub fn sample_marginals(kernel: &JumpKernel, n: usize, seed: u64, exec: Exec) -> Result<EnsembleMarginals> {
    let (steps, m) = (kernel.times.len(), kernel.labels.len());
    let fresh = || Tally { counts: vec![vec![0; m]; steps], jumps: 0, error: None };
    let tally = exec.fold_range(
        n,
        fresh,
        |mut acc, i| {
            if acc.error.is_none() {
                match kernel.walk(seed, i as u64, |k, l| acc.counts[k][l] += 1) {
                    Ok(j) => acc.jumps += j as u64,
                    Err(e) => acc.error = Some((i, e)),
                }
            }
            acc
        },
        |mut a, b| {
            for (ra, rb) in a.counts.iter_mut().zip(&b.counts) {
                ra.iter_mut().zip(rb).for_each(|(x, y)| *x += y);
            }
            a.jumps += b.jumps;
            a.error = match (a.error, b.error) {
                (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
                (x, y) => x.or(y),
            };
            a
        },
    );
    if let Some((_, e)) = tally.error {
        return Err(e);
    }
    Ok(EnsembleMarginals {
        times: kernel.times.clone(),
        labels: kernel.labels.clone(),
        counts: tally.counts,
        trajectories: n as u64,
        jumps: tally.jumps,
    })
}

/// Delimited rows `time, label, p_0, …, p_{m-1}` with a header line.
pub fn export_rows(traj: &PossibilityTrajectory, prop: &PropertyTrajectory, delimiter: char) -> String {
    let d = delimiter.to_string();
    let mut header = vec!["time".to_string(), "label".to_string()];
    header.extend(traj.observable().labels().iter().map(|l| format!("p[{l}]")));
    let mut out = header.join(&d);
    out.push('\n');
    for (k, t) in traj.times.iter().enumerate() {
        let mut row = vec![format!("{t:.6}"), prop.labels[k].clone()];
        row.extend(traj.weights(k).iter().map(|w| format!("{w:.12}")));
        out.push_str(&row.join(&d));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::determinate::ObservableSpec;
    use crate::dynamics::{evolve_possibility, EvolutionSpec};
    use crate::linalg::{pauli, Tolerance, C64};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn rabi(duration: f64) -> PossibilityTrajectory {
        let z = ObservableSpec::from_basis(&[ComplexVector::basis(2, 0), ComplexVector::basis(2, 1)], tol()).unwrap();
        let spec = EvolutionSpec::over(pauli::x().scale(C64::new(0.5, 0.0)), duration, tol()).unwrap();
        evolve_possibility(&ComplexVector::basis(2, 0), &z, &spec, tol()).unwrap()
    }

    #[test]
    fn flat_evolution_never_jumps() {
        let r = ObservableSpec::from_basis(&[ComplexVector::basis(2, 0), ComplexVector::basis(2, 1)], tol()).unwrap();
        let psi = ComplexVector::from_real(&[0.6, 0.8]).unwrap();
        let spec = EvolutionSpec::over(Operator::zeros(2), 1.0, tol()).unwrap();
        let traj = evolve_possibility(&psi, &r, &spec, tol()).unwrap();
        for seed in 0..20 {
            let p = jump_process(&traj, seed).unwrap();
            assert_eq!(p.jumps, 0);
            assert!(p.selected.iter().all(|&l| l == p.selected[0]));
        }
    }

    #[test]
    fn rabi_marginals_mesh() {
        let traj = rabi(3.0);
        let kernel = JumpKernel::new(&traj).unwrap();
        assert_eq!(kernel.clamped_rows(), 0);
        assert!(kernel.max_jump_probability() <= traj.spec().dt() * kernel.max_rate() + 1e-15);
        let m = sample_marginals(&kernel, 20_000, 9, Exec::default()).unwrap();
        for k in (0..traj.times.len()).step_by(15) {
            assert!(m.total_variation(k, &traj.weights(k)) < 0.02, "step {k}");
        }
    }

    #[test]
    fn one_way_current_is_monotone() {
        // on t < π the flow is + → − only, so no trajectory ever returns
        let traj = rabi(3.0);
        for seed in 0..50 {
            let p = jump_process(&traj, seed).unwrap();
            assert!(p.jumps <= 1);
            assert_eq!(p.selected[0], 0);
        }
    }

    #[test]
    fn deterministic_per_seed_and_mode() {
        let traj = rabi(2.0);
        assert_eq!(jump_process(&traj, 4).unwrap(), jump_process(&traj, 4).unwrap());
        let kernel = JumpKernel::new(&traj).unwrap();
        let a = sample_marginals(&kernel, 2_000, 1, Exec::Sequential).unwrap();
        let b = sample_marginals(&kernel, 2_000, 1, Exec::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn export_has_header_and_rows() {
        let traj = rabi(1.0);
        let p = jump_process(&traj, 0).unwrap();
        let text = export_rows(&traj, &p, ',');
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "time,label,p[0],p[1]");
        assert_eq!(lines.len(), traj.times.len() + 1);
        assert!(lines[1].starts_with("0.000000,0,1.000000000000"));
    }

    #[test]
    fn draw_handles_edges() {
        let cum = cumulative(vec![0.25, 0.0, 0.75]);
        assert_eq!(draw(&cum, 0.0), 0);
        assert_eq!(draw(&cum, 0.3), 2);
        assert_eq!(draw(&cum, 0.999_999_999_999), 2);
    }
}
