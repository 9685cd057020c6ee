// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

//! Determinate sublattices D(ψ, R).
//!
//! Given a pure state ψ and a preferred observable R, the generators of D are
//! the normalized nonzero projections ψ̂_i of ψ onto the eigenspaces of R,
//! together with every ray of K, the orthocomplement of their span. Members
//! are exactly the subspaces `span{ψ̂_i : i ∈ S} ⊕ W` with `W ≤ K`, which is
//! what [`DeterminateSublattice::contains`] tests. Each 2-valued homomorphism
//! on D selects one ψ̂_i, with probability `p_i = ‖P_i ψ‖²`.

mod extension;
mod observable;

use rand::Rng;
use serde::Serialize;

use crate::lattice::Subspace;
use crate::linalg::{ComplexVector, Operator, Tolerance};
use crate::{Error, Result};

pub use extension::{extend_and_check, ExtensionMethod, ExtensionReport, ExtensionVerdict};
pub use observable::{Eigenspace, ObservableSpec, ObservableSummary};

#[derive(Debug, Clone)]
pub struct ProjectedRay {
    pub label: String,
    /// Index of the eigenspace in the observable.
    pub eigenspace: usize,
    pub vector: ComplexVector,
    pub weight: f64,
}

/// A 2-valued homomorphism on D, identified by the ray it makes true.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyState {
    pub selected: usize,
    pub label: String,
    pub probability: f64,
}

#[derive(Debug, Clone)]
pub struct DeterminateSublattice {
    psi: ComplexVector,
    observable: ObservableSpec,
    rays: Vec<ProjectedRay>,
    ray_span: Subspace,
    complement: Subspace,
    tol: Tolerance,
}

pub fn build_determinate(psi: &ComplexVector, observable: &ObservableSpec, tol: Tolerance) -> Result<DeterminateSublattice> {
    DeterminateSublattice::new(psi, observable, tol)
}

impl DeterminateSublattice {
    pub fn new(psi: &ComplexVector, observable: &ObservableSpec, tol: Tolerance) -> Result<Self> {
        if psi.dim() != observable.dim() {
            return Err(Error::DimMismatch { expected: observable.dim(), actual: psi.dim() });
        }
        if psi.norm() <= tol.eps {
            return Err(Error::ZeroVector);
        }
        psi.check_normalized(tol)?;

        let mut rays = Vec::new();
        for (i, e) in observable.eigenspaces().iter().enumerate() {
            let proj = e.subspace.projector().act(psi);
            let weight = proj.norm().powi(2);
            if weight < tol.eps {
                continue;
            }
            rays.push(ProjectedRay { label: e.label.clone(), eigenspace: i, vector: proj.normalized()?, weight });
        }
        if rays.is_empty() {
            return Err(Error::ZeroVector);
        }
        let dim = psi.dim();
        let vectors: Vec<ComplexVector> = rays.iter().map(|r| r.vector.clone()).collect();
        let ray_span = Subspace::span(&vectors, dim, tol)?;
        let complement = ray_span.orthocomplement(tol);
        Ok(DeterminateSublattice { psi: psi.clone(), observable: observable.clone(), rays, ray_span, complement, tol })
    }

    pub fn psi(&self) -> &ComplexVector {
        &self.psi
    }

    pub fn observable(&self) -> &ObservableSpec {
        &self.observable
    }

    pub fn rays(&self) -> &[ProjectedRay] {
        &self.rays
    }

    /// K: every ray orthogonal to all projected rays.
    pub fn complement(&self) -> &Subspace {
        &self.complement
    }

    pub fn ray_span(&self) -> &Subspace {
        &self.ray_span
    }

    pub fn ambient_dim(&self) -> usize {
        self.psi.dim()
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    /// Generating set: the projected rays and K.
    pub fn generators(&self) -> Result<Vec<Subspace>> {
        let mut g = self.rays.iter().map(|r| Subspace::ray(&r.vector, self.tol)).collect::<Result<Vec<_>>>()?;
        g.push(self.complement.clone());
        Ok(g)
    }

    /// The member `span{ψ̂_i : i ∈ rays} ⊕ w`; `w` must lie in K.
    pub fn member(&self, rays: &[usize], w: &Subspace) -> Result<Subspace> {
        self.check_dim(w)?;
        if !w.is_le(&self.complement, self.tol) {
            return Err(Error::NotInSublattice);
        }
        let mut vs = Vec::with_capacity(rays.len() + w.rank());
        for &i in rays {
            let r = self
                .rays
                .get(i)
                .ok_or_else(|| Error::InvalidParameter(format!("ray index {i} out of range")))?;
            vs.push(r.vector.clone());
        }
        vs.extend(w.basis().iter().cloned());
        Subspace::span(&vs, self.ambient_dim(), self.tol)
    }

    fn check_dim(&self, v: &Subspace) -> Result<()> {
        if v.ambient_dim() != self.ambient_dim() {
            return Err(Error::DimMismatch { expected: self.ambient_dim(), actual: v.ambient_dim() });
        }
        Ok(())
    }

    /// Indices of projected rays inside `v`, or `None` if some ray is
    /// neither inside nor orthogonal to it.
    fn rays_inside(&self, v: &Subspace) -> Option<Vec<usize>> {
        let mut inside = Vec::new();
        for (i, r) in self.rays.iter().enumerate() {
            if v.contains_vector(&r.vector, self.tol) {
                inside.push(i);
            } else if !v.orthogonal_to_vector(&r.vector, self.tol) {
                return None;
            }
        }
        Some(inside)
    }

    /// Membership: every projected ray lies in or orthogonal to `v`, and `v`
    /// splits as the span of the rays it holds plus `v ∧ K`.
    pub fn contains(&self, v: &Subspace) -> Result<bool> {
        self.check_dim(v)?;
        let Some(inside) = self.rays_inside(v) else {
            return Ok(false);
        };
        // the two pieces are orthogonal and both lie in v, so equality is a
        // rank count
        let in_k = v.meet(&self.complement, self.tol)?;
        Ok(inside.len() + in_k.rank() == v.rank())
    }

    pub fn property_states(&self) -> Vec<PropertyState> {
        self.rays
            .iter()
            .enumerate()
            .map(|(i, r)| PropertyState { selected: i, label: r.label.clone(), probability: r.weight })
            .collect()
    }

    /// Draws a property state with probability equal to its weight.
    pub fn sample_state<R: Rng + ?Sized>(&self, rng: &mut R) -> PropertyState {
        let total: f64 = self.rays.iter().map(|r| r.weight).sum();
        let mut u = rng.random::<f64>() * total;
        let mut pick = self.rays.len() - 1;
        for (i, r) in self.rays.iter().enumerate() {
            if u < r.weight {
                pick = i;
                break;
            }
            u -= r.weight;
        }
        let r = &self.rays[pick];
        PropertyState { selected: pick, label: r.label.clone(), probability: r.weight }
    }

    pub fn truth_value(&self, s: &PropertyState, v: &Subspace) -> Result<bool> {
        let ray = self
            .rays
            .get(s.selected)
            .ok_or_else(|| Error::InvalidParameter(format!("property state selects missing ray {}", s.selected)))?;
        if !self.contains(v)? {
            return Err(Error::NotInSublattice);
        }
        Ok(v.contains_vector(&ray.vector, self.tol))
    }

    /// `(measure, born)`: the weight of property states making `v` true, and
    /// ⟨ψ|P_v|ψ⟩ less the part carried by `v ∧ K`.
    pub fn born_check(&self, v: &Subspace) -> Result<(f64, f64)> {
        if !self.contains(v)? {
            return Err(Error::NotInSublattice);
        }
        let measure: f64 = self
            .rays
            .iter()
            .filter(|r| v.contains_vector(&r.vector, self.tol))
            .map(|r| r.weight)
            .sum();
        let in_k = v.meet(&self.complement, self.tol)?;
        let born = v.weight_of(&self.psi) - in_k.weight_of(&self.psi);
        Ok((measure, born))
    }

    /// D(Uψ, U R U†).
    pub fn transformed(&self, u: &Operator) -> Result<Self> {
        let psi = u.act(&self.psi);
        let r = self.observable.conjugated(u, self.tol)?;
        DeterminateSublattice::new(&psi, &r, self.tol)
    }

    pub fn report(&self) -> DeterminateReport {
        let k_dim = self.complement.rank();
        DeterminateReport {
            ambient_dim: self.ambient_dim(),
            labels: self.rays.iter().map(|r| r.label.clone()).collect(),
            weights: self.rays.iter().map(|r| r.weight).collect(),
            k_dim,
            small_complement: k_dim <= 2,
            observable: self.observable.summary(),
        }
    }
}

/// Serializable summary of a determinate sublattice.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeterminateReport {
    pub ambient_dim: usize,
    pub labels: Vec<String>,
    pub weights: Vec<f64>,
    pub k_dim: usize,
    /// dim K ≤ 2: only ray-selecting property states are enumerated.
    pub small_complement: bool,
    pub observable: ObservableSummary,
}
