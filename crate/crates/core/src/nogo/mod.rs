// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

//! No-go machinery.
//!
//! * Kochen-Specker: search for a noncontextual {0,1} assignment on a finite
//!   ray set where every orthonormal basis (context) holds exactly one 1 and
//!   no two orthogonal rays are both 1.
//! * Bell: CHSH values of two-qubit states and exact local-hidden-variable
//!   feasibility of correlation tables.

mod chsh;
pub mod fixtures;
mod lp;
mod rayfile;
mod search;
mod witness;

use serde::Serialize;

use crate::linalg::{ComplexVector, Tolerance};
use crate::{Error, Result};

pub use chsh::{
    born_table, chsh_expression, chsh_lhv_bound, chsh_value, correlator, local_map_search, spin_rays, ChshSetting,
    CorrelationTable, LocalModel,
};
pub use rayfile::{format_rays, parse_amplitude, parse_rays};
pub use search::{enumerate_assignments, find_assignment, find_assignment_bounded, Assignment, SearchOutcome};
pub use witness::ks_witness;

/// Unit rays in a common dimension together with their contexts.
#[derive(Debug, Clone)]
pub struct RaySet {
    rays: Vec<ComplexVector>,
    dim: usize,
    contexts: Vec<Vec<usize>>,
    neighbors: Vec<Vec<usize>>,
}

impl RaySet {
    /// Normalizes and deduplicates (up to phase) the input, then derives the
    /// contexts as the dim-sized cliques of the orthogonality graph.
    pub fn new(rays: &[ComplexVector], tol: Tolerance) -> Result<Self> {
        let (rays, dim) = normalize_dedup(rays, tol)?;
        let neighbors = orthogonality_graph(&rays, tol);
        let contexts = cliques_of_size(&neighbors, dim);
        Ok(RaySet { rays, dim, contexts, neighbors })
    }

    /// Uses the given contexts instead of deriving them. Each context must be
    /// an orthonormal set of at most `dim` rays.
    pub fn with_contexts(rays: &[ComplexVector], contexts: Vec<Vec<usize>>, tol: Tolerance) -> Result<Self> {
        let dim = rays.first().map(ComplexVector::dim).ok_or_else(|| Error::InvalidParameter("empty ray set".into()))?;
        let rays: Vec<ComplexVector> = rays
            .iter()
            .map(|r| {
                if r.dim() != dim {
                    return Err(Error::DimMismatch { expected: dim, actual: r.dim() });
                }
                r.normalized()
            })
            .collect::<Result<_>>()?;
        let neighbors = orthogonality_graph(&rays, tol);
        for (index, ctx) in contexts.iter().enumerate() {
            let ok = !ctx.is_empty()
                && ctx.len() <= dim
                && ctx.iter().all(|&i| i < rays.len())
                && ctx.iter().enumerate().all(|(k, &i)| ctx[k + 1..].iter().all(|&j| neighbors[i].contains(&j)));
            if !ok {
                return Err(Error::MalformedContext { index });
            }
        }
        Ok(RaySet { rays, dim, contexts, neighbors })
    }

    pub fn rays(&self) -> &[ComplexVector] {
        &self.rays
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn contexts(&self) -> &[Vec<usize>] {
        &self.contexts
    }

    /// Indices of rays orthogonal to ray `i`.
    pub fn orthogonal_to(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    /// The sub-problem made of the listed contexts only: their rays, those
    /// contexts, and the orthogonality constraints among those rays.
    pub fn restrict(&self, context_ids: &[usize], tol: Tolerance) -> Result<RaySet> {
        let mut keep: Vec<usize> = context_ids.iter().flat_map(|&c| self.contexts[c].iter().copied()).collect();
        keep.sort_unstable();
        keep.dedup();
        let remap = |i: usize| keep.binary_search(&i).expect("ray in kept set");
        let rays: Vec<ComplexVector> = keep.iter().map(|&i| self.rays[i].clone()).collect();
        let contexts = context_ids.iter().map(|&c| self.contexts[c].iter().map(|&i| remap(i)).collect()).collect();
        RaySet::with_contexts(&rays, contexts, tol)
    }

    /// Every context is orthonormal within `eps`; every listed orthogonality
    /// holds. Used to self-validate fixtures at load.
    pub fn verify(&self, tol: Tolerance) -> Result<()> {
        for (index, ctx) in self.contexts.iter().enumerate() {
            for (k, &i) in ctx.iter().enumerate() {
                for &j in &ctx[k + 1..] {
                    if self.rays[i].inner(&self.rays[j]).norm() > tol.eps {
                        return Err(Error::MalformedContext { index });
                    }
                }
            }
        }
        Ok(())
    }

    /// How many contexts each ray lies in.
    pub fn context_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.rays.len()];
        for ctx in &self.contexts {
            for &i in ctx {
                deg[i] += 1;
            }
        }
        deg
    }
}

/// Summary used in reports.
#[derive(Debug, Clone, Serialize)]
pub struct RaySetSummary {
    pub dim: usize,
    pub rays: usize,
    pub contexts: usize,
}

impl From<&RaySet> for RaySetSummary {
    fn from(r: &RaySet) -> Self {
        RaySetSummary { dim: r.dim, rays: r.len(), contexts: r.contexts.len() }
    }
}

fn normalize_dedup(rays: &[ComplexVector], tol: Tolerance) -> Result<(Vec<ComplexVector>, usize)> {
    let dim = rays.first().map(ComplexVector::dim).ok_or_else(|| Error::InvalidParameter("empty ray set".into()))?;
    let mut out: Vec<ComplexVector> = Vec::new();
    for r in rays {
        if r.dim() != dim {
            return Err(Error::DimMismatch { expected: dim, actual: r.dim() });
        }
        let u = r.normalized()?;
        if !out.iter().any(|o| 1.0 - o.inner(&u).norm() <= tol.eps) {
            out.push(u);
        }
    }
    Ok((out, dim))
}

fn orthogonality_graph(rays: &[ComplexVector], tol: Tolerance) -> Vec<Vec<usize>> {
    let n = rays.len();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if rays[i].inner(&rays[j]).norm() <= tol.eps {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    adj
}

/// All cliques of exactly `k` vertices, each listed in increasing index
/// order, in lexicographic order.
fn cliques_of_size(adj: &[Vec<usize>], k: usize) -> Vec<Vec<usize>> {
    fn extend(adj: &[Vec<usize>], k: usize, current: &mut Vec<usize>, candidates: &[usize], out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for (pos, &v) in candidates.iter().enumerate() {
            if current.len() + (candidates.len() - pos) < k {
                break;
            }
            let next: Vec<usize> = candidates[pos + 1..].iter().copied().filter(|u| adj[v].contains(u)).collect();
            current.push(v);
            extend(adj, k, current, &next, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    let all: Vec<usize> = (0..adj.len()).collect();
    extend(adj, k, &mut Vec::with_capacity(k), &all, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn dedup_up_to_phase() {
        let a = ComplexVector::from_real(&[1.0, 0.0]).unwrap();
        let b = ComplexVector::new(vec![C64::new(0.0, 3.0), C64::new(0.0, 0.0)]).unwrap();
        let rs = RaySet::new(&[a, b], tol()).unwrap();
        assert_eq!(rs.len(), 1);
        assert!(rs.contexts().is_empty());
    }

    #[test]
    fn single_basis_in_dim3_is_one_context() {
        let rays: Vec<_> = (0..3).map(|i| ComplexVector::basis(3, i)).collect();
        let rs = RaySet::new(&rays, tol()).unwrap();
        assert_eq!(rs.contexts(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn ks18_fixture_structure() {
        let rs = fixtures::ks18_d4();
        assert_eq!(rs.len(), 18);
        assert_eq!(rs.contexts().len(), 9);
        assert!(rs.context_degrees().iter().all(|&d| d == 2));
    }

    #[test]
    fn malformed_context_rejected() {
        let rays = vec![ComplexVector::basis(2, 0), ComplexVector::from_real(&[1.0, 1.0]).unwrap()];
        assert!(matches!(
            RaySet::with_contexts(&rays, vec![vec![0, 1]], tol()),
            Err(Error::MalformedContext { index: 0 })
        ));
    }
}
